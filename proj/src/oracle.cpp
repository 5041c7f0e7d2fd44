#include "modalssc/oracle.hpp"

#include <algorithm>
#include <exception>
#include <random>

#include "modalssc/error.hpp"

namespace modalssc {
namespace {

using CMatrix = Eigen::MatrixXcd;

Eigen::VectorXd singular_values(const CMatrix& M) {
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues();
}

class EntrySampler {
 public:
  EntrySampler(std::uint64_t seed, const SamplerOptions& opt) : rng_(seed), opt_(opt) {}

  double star() {
    std::uniform_real_distribution<double> mag(opt_.star_min, opt_.star_max);
    std::bernoulli_distribution sign(0.5);
    const double m = mag(rng_);
    return sign(rng_) ? m : -m;
  }

  double arbitrary() {
    std::bernoulli_distribution zero(opt_.arbitrary_zero_probability);
    return zero(rng_) ? 0.0 : star();
  }

  Eigen::MatrixXd fill(const PatternMatrix& p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j) {
        switch (p(i, j)) {
          case PatternSymbol::Zero: break;
          case PatternSymbol::Star: m(i, j) = star(); break;
          case PatternSymbol::Arbitrary: m(i, j) = arbitrary(); break;
        }
      }
    return m;
  }

 private:
  std::mt19937_64 rng_;
  SamplerOptions opt_;
};

bool any_eigenvalue_in(const Eigen::MatrixXd& M, const DeltaSet& delta, double tol) {
  for (const auto& l : eigenvalues(M))
    if (delta.contains(l, tol)) return true;
  return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Eigen::MatrixXd input_matrix(const NetworkSpec& spec) {
  int m = 0;
  for (int c : spec.control_set) m += spec.blocks.dim(c);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(spec.vertex_count(), m);
  int col = 0;
  for (int c : spec.control_set)
    for (int k = 0; k < spec.blocks.dim(c); ++k) B(spec.blocks.offset(c) + k, col++) = 1.0;
  return B;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed ^ splitmix64(index));
}

RealizationMatrix sample_realization(const NetworkSpec& spec, std::uint64_t seed,
                                     const SamplerOptions& opt) {
  spec.validate();
  EntrySampler s(seed, opt);
  const int N = spec.vertex_count();
  RealizationMatrix r{Eigen::MatrixXd::Zero(N, N), input_matrix(spec), spec.blocks};
  for (int k = 0; k < spec.node_count(); ++k) {
    const int o = spec.blocks.offset(k);
    const int l = spec.blocks.dim(k);
    const auto& kn = spec.knowledge[k];
    Eigen::MatrixXd block;
    switch (kn.kind) {
      case SpectralKnowledge::Kind::MuIdentity:
        block = kn.mu * Eigen::MatrixXd::Identity(l, l);
        break;
      case SpectralKnowledge::Kind::DisjointFromDelta: {
        bool accepted = false;
        for (int attempt = 0; attempt < opt.max_attempts && !accepted; ++attempt) {
          block = s.fill(spec.node_patterns[k]);
          accepted = !any_eigenvalue_in(block, spec.delta, 10.0 * opt.tol);
        }
        if (!accepted)
          throw SamplingInfeasibleError(
              "subsystem " + std::to_string(k + 1) + ": no block outside " +
                  spec.delta.describe() + " after " + std::to_string(opt.max_attempts) +
                  " attempts",
              k);
        break;
      }
      case SpectralKnowledge::Kind::Unknown:
        block = s.fill(spec.node_patterns[k]);
        break;
    }
    r.A.block(o, o, l, l) = block;
  }
  for (const auto& [key, p] : spec.couplings) {
    const auto [to, from] = key;
    r.A.block(spec.blocks.offset(to), spec.blocks.offset(from), p.rows(), p.cols()) = s.fill(p);
  }
  return r;
}

std::optional<std::string> realization_violation(const NetworkSpec& spec,
                                                 const Eigen::MatrixXd& A, double tol) {
  const int N = spec.vertex_count();
  if (A.rows() != N || A.cols() != N)
    return "matrix is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
           ", expected " + std::to_string(N) + "x" + std::to_string(N);
  const auto p = spec.assemble_pattern();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (!symbol_admits(p(i, j), A(i, j)))
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = " +
               std::to_string(A(i, j)) + " violates pattern symbol '" + to_char(p(i, j)) + "'";
  for (int k = 0; k < spec.node_count(); ++k) {
    const int o = spec.blocks.offset(k);
    const int l = spec.blocks.dim(k);
    const Eigen::MatrixXd block = A.block(o, o, l, l);
    const auto& kn = spec.knowledge[k];
    if (kn.kind == SpectralKnowledge::Kind::DisjointFromDelta &&
        any_eigenvalue_in(block, spec.delta, tol))
      return "subsystem " + std::to_string(k + 1) + " has an eigenvalue in " +
             spec.delta.describe();
    if (kn.kind == SpectralKnowledge::Kind::MuIdentity &&
        block != kn.mu * Eigen::MatrixXd::Identity(l, l))
      return "subsystem " + std::to_string(k + 1) + " is not mu*I";
  }
  return std::nullopt;
}

PbhResult pbh_controllable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           std::complex<double> lambda, double tol) {
  const auto N = A.rows();
  if (N == 0) return {true, 0.0, 0.0};
  CMatrix M(N, N + B.cols());
  M.leftCols(N) = A.cast<std::complex<double>>();
  M.leftCols(N).diagonal().array() -= lambda;
  M.rightCols(B.cols()) = B.cast<std::complex<double>>();
  const auto sv = singular_values(M);
  PbhResult r;
  r.sigma_max = sv(0);
  r.sigma_min = sv(N - 1);
  r.controllable = r.sigma_min > tol * r.sigma_max * static_cast<double>(N);
  return r;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const auto ev = es.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<EigenReportEntry> controllable_eigen_report(const Eigen::MatrixXd& A,
                                                        const Eigen::MatrixXd& B,
                                                        const DeltaSet& delta, double tol) {
  std::vector<EigenReportEntry> out;
  for (const auto& l : eigenvalues(A)) {
    const auto pbh = pbh_controllable(A, B, l, tol);
    out.push_back({l, delta.contains(l, tol), pbh.controllable, pbh.sigma_min});
  }
  return out;
}

int numeric_geometric_multiplicity(const Eigen::MatrixXd& A, std::complex<double> lambda,
                                   double tol) {
  const auto N = A.rows();
  if (N == 0) return 0;
  CMatrix M = A.cast<std::complex<double>>();
  M.diagonal().array() -= lambda;
  const auto sv = singular_values(M);
  if (sv(0) == 0.0) return static_cast<int>(N);
  const double thr = tol * sv(0) * static_cast<double>(N);
  return static_cast<int>((sv.array() <= thr).count());
}

int numeric_rank(const Eigen::MatrixXd& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  const double thr = tol * sv(0) * static_cast<double>(std::max(M.rows(), M.cols()));
  return static_cast<int>((sv.array() > thr).count());
}

std::vector<std::complex<double>> eigenvalues_in_delta(const Eigen::MatrixXd& A,
                                                       const DeltaSet& delta, double tol) {
  std::vector<std::complex<double>> out;
  for (const auto& l : eigenvalues(A))
    if (delta.contains(l, tol)) out.push_back(l);
  for (double mu : delta.isolated_members()) {
    const bool listed = std::any_of(out.begin(), out.end(),
                                    [&](auto l) { return std::abs(l - mu) <= tol; });
    if (!listed && numeric_geometric_multiplicity(A, mu, tol) > 0) out.emplace_back(mu);
  }
  return out;
}

std::vector<Violation> check_realization(const NetworkSpec& spec, const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const VerificationClaims& claims, double tol,
                                         int* max_multiplicity) {
  std::vector<Violation> out;
  for (const auto& l : eigenvalues_in_delta(A, spec.delta, tol)) {
    const auto pbh = pbh_controllable(A, B, l, tol);
    if (!pbh.controllable) out.push_back({0, std::nullopt, "uncontrollable", l, pbh.sigma_min, 0});
    if (claims.exclusion) out.push_back({0, std::nullopt, "eigenvalue_in_delta", l, pbh.sigma_min, 0});
    const int mult = numeric_geometric_multiplicity(A, l, tol);
    if (max_multiplicity) *max_multiplicity = std::max(*max_multiplicity, mult);
    if (claims.multiplicity_bound && mult > *claims.multiplicity_bound)
      out.push_back({0, std::nullopt, "multiplicity", l, pbh.sigma_min, mult});
  }
  return out;
}

namespace {

struct TrialOutcome {
  std::vector<Violation> violations;
  int max_multiplicity = 0;
  std::exception_ptr error;
};

TrialOutcome run_trial(const NetworkSpec& spec, const VerificationOptions& opt,
                       const Eigen::MatrixXd& B, int t) {
  TrialOutcome o;
  try {
    const int k = static_cast<int>(opt.injected.size());
    std::optional<std::uint64_t> seed;
    Eigen::MatrixXd A;
    if (t < k) {
      A = opt.injected[t];
    } else {
      seed = trial_seed(opt.base_seed, static_cast<std::uint64_t>(t - k));
      SamplerOptions so = opt.sampler;
      so.tol = opt.tol;
      A = sample_realization(spec, *seed, so).A;
    }
    o.violations = check_realization(spec, A, B, opt.claims, opt.tol, &o.max_multiplicity);
    for (auto& v : o.violations) {
      v.trial = t;
      v.seed = seed;
    }
  } catch (...) {
    o.error = std::current_exception();
  }
  return o;
}

VerificationReport merge(const VerificationOptions& opt, std::vector<TrialOutcome>& outcomes) {
  VerificationReport r;
  r.trials = static_cast<int>(outcomes.size());
  r.base_seed = opt.base_seed;
  r.tol = opt.tol;
  r.claims = opt.claims;
  for (auto& o : outcomes) {
    if (o.error) std::rethrow_exception(o.error);
    r.max_multiplicity = std::max(r.max_multiplicity, o.max_multiplicity);
    for (auto& v : o.violations) r.violations.push_back(std::move(v));
  }
  return r;
}

void check_options(const NetworkSpec& spec, const VerificationOptions& opt) {
  spec.validate();
  if (opt.trials < 0) throw ValidationError("trial count must be non-negative");
  for (const auto& m : opt.injected)
    if (m.rows() != spec.vertex_count() || m.cols() != spec.vertex_count())
      throw ValidationError("injected realisation has the wrong shape");
}

}  // namespace

VerificationReport monte_carlo_verify(const NetworkSpec& spec, const VerificationOptions& opt) {
  check_options(spec, opt);
  const Eigen::MatrixXd B = input_matrix(spec);
  const int total = opt.trials + static_cast<int>(opt.injected.size());
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 8)
  for (int t = 0; t < total; ++t) outcomes[t] = run_trial(spec, opt, B, t);
  return merge(opt, outcomes);
}

VerificationReport monte_carlo_verify_serial(const NetworkSpec& spec,
                                             const VerificationOptions& opt) {
  check_options(spec, opt);
  const Eigen::MatrixXd B = input_matrix(spec);
  const int total = opt.trials + static_cast<int>(opt.injected.size());
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(total));
  for (int t = 0; t < total; ++t) outcomes.push_back(run_trial(spec, opt, B, t));
  return merge(opt, outcomes);
}

}  // namespace modalssc
