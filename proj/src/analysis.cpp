#include "modalssc/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include "modalssc/error.hpp"

namespace modalssc {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Sufficient: return "Sufficient";
    case Verdict::IffHolds: return "IffHolds";
    case Verdict::IffFails: return "IffFails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Yes: return "yes";
    case Decision::No: return "no";
    case Decision::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct Entry {
  int row;
  PatternSymbol symbol;
};

// Values for the listed entries of one column summing to `target`, with every
// Star nonzero. Arbitrary entries absorb the balance when present.
std::vector<double> balance(const std::vector<Entry>& entries, double target) {
  std::vector<double> v(entries.size(), 0.0);
  const auto absorber = std::find_if(entries.begin(), entries.end(), [](const Entry& e) {
    return e.symbol == PatternSymbol::Arbitrary;
  });
  if (absorber != entries.end()) {
    double stars = 0.0;
    for (std::size_t k = 0; k < entries.size(); ++k)
      if (entries[k].symbol == PatternSymbol::Star) {
        v[k] = 1.0;
        stars += 1.0;
      }
    v[static_cast<std::size_t>(absorber - entries.begin())] = target - stars;
    return v;
  }
  const std::size_t k = entries.size();
  if (k == 0) {
    if (target != 0.0) throw std::logic_error("column balance needs an entry");
    return v;
  }
  if (k == 1) {
    if (target == 0.0) throw std::logic_error("single star cannot balance to zero");
    v[0] = target;
    return v;
  }
  std::fill(v.begin(), v.end() - 1, 1.0);
  v[k - 1] = target - static_cast<double>(k - 1);
  if (v[k - 1] == 0.0) {
    v[0] = 1.5;
    v[k - 1] = target - 1.5 - static_cast<double>(k - 2);
  }
  return v;
}

// A real value outside the region that the diagonal symbol admits.
double value_outside(const DeltaSet& delta, PatternSymbol s, double mu, double tol) {
  if (s == PatternSymbol::Zero) {
    if (delta.contains(0.0, tol))
      throw ValidationError("zero diagonal cannot avoid the region " + delta.describe());
    return 0.0;
  }
  const double candidates[] = {mu - 1, mu + 1, mu - 2, mu + 2, -1, 1, -2, 2, -3, 3, -10, 10, 0};
  for (double x : candidates)
    if (symbol_admits(s, x) && !delta.contains(x, 10.0 * tol)) return x;
  throw ValidationError("no admissible diagonal value outside the region " + delta.describe());
}

enum class Loop { None, Strong, Weak };

Loop loop_category(PatternSymbol f, PatternSymbol diag, double mu) {
  if (f == PatternSymbol::Zero) return Loop::None;
  if (f == PatternSymbol::Star) return Loop::Strong;
  switch (diag) {
    case PatternSymbol::Zero: return mu == 0.0 ? Loop::None : Loop::Strong;
    case PatternSymbol::Star: return mu == 0.0 ? Loop::Strong : Loop::Weak;
    case PatternSymbol::Arbitrary: return Loop::Weak;
  }
  return Loop::Weak;
}

// Graph whose self-loops record what A(i,i) - mu may be: none when it is
// pinned to zero, strong when it must be nonzero, weak when it is free.
LoopDigraph mu_graph(const PatternMatrix& p, const CharacteristicVector& f, double mu) {
  const int n = p.rows();
  LoopDigraph g(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        const auto c = loop_category(f[i], p(i, i), mu);
        if (c != Loop::None) g.add_edge(i, i, c == Loop::Strong ? EdgeKind::Strong : EdgeKind::Weak);
      } else if (p(i, j) != PatternSymbol::Zero) {
        g.add_edge(j, i, p(i, j) == PatternSymbol::Star ? EdgeKind::Strong : EdgeKind::Weak);
      }
    }
  return g;
}

Eigen::MatrixXd build_witness_matrix(const NetworkSpec& spec, const PatternMatrix& p,
                                     const CharacteristicVector& f, double mu,
                                     const std::vector<char>& white) {
  const int n = p.rows();
  const double tol = kDefaultTol;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

  for (int k = 0; k < n; ++k) {
    if (white[k]) continue;
    for (int j = 0; j < n; ++j)
      if (j != k && p(k, j) != PatternSymbol::Zero) A(k, j) = 1.0;
    switch (f[k]) {
      case PatternSymbol::Zero: A(k, k) = mu; break;
      case PatternSymbol::Star: A(k, k) = value_outside(spec.delta, p(k, k), mu, tol); break;
      case PatternSymbol::Arbitrary: A(k, k) = p(k, k) == PatternSymbol::Zero ? 0.0 : 1.0; break;
    }
  }

  for (int i = 0; i < n; ++i) {
    std::vector<Entry> entries;
    for (int k = 0; k < n; ++k)
      if (white[k] && k != i && p(k, i) != PatternSymbol::Zero) entries.push_back({k, p(k, i)});
    double target = 0.0;
    if (white[i]) {
      switch (loop_category(f[i], p(i, i), mu)) {
        case Loop::None:
          A(i, i) = mu;
          break;
        case Loop::Weak:
          if (entries.size() == 1 && entries[0].symbol == PatternSymbol::Star) {
            const double s = (p(i, i) == PatternSymbol::Star && mu - 1.0 == 0.0) ? 2.0 : 1.0;
            A(entries[0].row, i) = s;
            A(i, i) = mu - s;
            entries.clear();
          } else {
            A(i, i) = mu;
          }
          break;
        case Loop::Strong:
          if (p(i, i) == PatternSymbol::Zero) A(i, i) = 0.0;
          else if (f[i] == PatternSymbol::Star) A(i, i) = value_outside(spec.delta, p(i, i), mu, tol);
          else A(i, i) = mu - 1.0;
          target = mu - A(i, i);
          break;
      }
    }
    const auto values = balance(entries, target);
    for (std::size_t k = 0; k < entries.size(); ++k) A(entries[k].row, i) = values[k];
  }
  return A;
}

}  // namespace

SscVerdict is_delta_ssc(const NetworkSpec& spec) {
  const auto dng = build_delta_network_graph(spec);
  SscVerdict v;
  v.zfs = derived_set(dng.graph, spec.control_set);
  const bool scalar = spec.is_n1ds();
  if (v.zfs.is_zfs) {
    v.verdict = scalar ? Verdict::IffHolds : Verdict::Sufficient;
    return v;
  }
  if (!scalar) {
    v.verdict = Verdict::Inconclusive;
    v.note = "control set is not a zero forcing set; for block subsystems this proves nothing";
    return v;
  }
  try {
    v.witness = construct_uncontrollable_witness(spec);
    v.verdict = Verdict::IffFails;
  } catch (const WitnessUnavailableError& e) {
    v.verdict = Verdict::Inconclusive;
    v.note = e.what();
  }
  return v;
}

std::vector<DeltaSet> default_partition() { return {DeltaSet::singleton(0.0), DeltaSet::nonzero()}; }

namespace {

bool is_zero_point(const DeltaSet& d) {
  if (auto mu = d.singleton_value()) return *mu == 0.0;
  if (const auto* f = std::get_if<DeltaSet::FiniteRealSet>(&d.variant()))
    return f->values.size() == 1 && f->values[0] == 0.0;
  return false;
}

void validate_partition(const std::vector<DeltaSet>& parts) {
  if (parts.size() == 1 && std::holds_alternative<DeltaSet::AllComplex>(parts[0].variant()))
    return;
  if (parts.size() == 2) {
    for (int a = 0; a < 2; ++a) {
      const auto& z = parts[a];
      const auto& nz = parts[1 - a];
      if (is_zero_point(z) && std::holds_alternative<DeltaSet::NonzeroComplex>(nz.variant()))
        return;
    }
  }
  throw ValidationError(
      "partition must be {C} or {{0}, C\\{0}}: other region families cannot be checked for "
      "disjointness and coverage");
}

}  // namespace

PartitionVerdict is_strongly_structurally_controllable(const NetworkSpec& spec,
                                                       const std::vector<DeltaSet>& partition) {
  validate_partition(partition);
  PartitionVerdict out;
  bool all_yes = true;
  bool any_no = false;
  for (const auto& part : partition) {
    NetworkSpec s = spec;
    s.delta = part;
    if (s.is_n1ds())
      s.knowledge = derive_n1ds_knowledge(s.assemble_pattern(), part);
    else
      s.knowledge.assign(static_cast<std::size_t>(s.node_count()), SpectralKnowledge::unknown());
    auto v = is_delta_ssc(s);
    if (v.verdict == Verdict::IffFails) any_no = true;
    if (v.verdict != Verdict::Sufficient && v.verdict != Verdict::IffHolds) all_yes = false;
    out.parts.push_back(std::move(v));
  }
  out.decision = any_no ? Decision::No : all_yes ? Decision::Yes : Decision::Inconclusive;
  return out;
}

PatternMatrix build_abar(const PatternMatrix& pattern) {
  if (!pattern.is_square()) throw ValidationError("build_abar needs a square pattern");
  PatternMatrix out = pattern;
  for (int i = 0; i < pattern.rows(); ++i)
    out.set(i, i, pattern(i, i) == PatternSymbol::Zero ? PatternSymbol::Star
                                                       : PatternSymbol::Arbitrary);
  return out;
}

long geometric_multiplicity_bound(const NetworkSpec& spec, int cap) {
  return min_zfs(build_delta_network_graph(spec).graph, cap).weight;
}

bool spectrum_exclusion_n1ds(const NetworkSpec& spec) {
  if (!spec.is_n1ds())
    throw ValidationError("spectrum exclusion is decided for scalar subsystems only");
  return is_zfs(build_delta_network_graph(spec).graph, {});
}

UncontrollableWitness construct_uncontrollable_witness(const NetworkSpec& spec,
                                                       std::optional<double> mu) {
  if (!spec.is_n1ds()) throw ValidationError("witness construction needs scalar subsystems");
  const auto dng = build_delta_network_graph(spec);
  if (is_zfs(dng.graph, spec.control_set))
    throw std::logic_error("control set is a zero forcing set; no uncontrollable witness exists");
  const auto p = spec.assemble_pattern();
  const int n = p.rows();

  std::vector<double> candidates;
  if (mu) {
    if (!spec.delta.contains(*mu))
      throw ValidationError("witness eigenvalue " + std::to_string(*mu) + " is outside " +
                            spec.delta.describe());
    candidates.push_back(*mu);
  } else {
    candidates = spec.delta.real_candidates();
  }

  for (double m : candidates) {
    const auto report = derived_set(mu_graph(p, dng.f, m), spec.control_set);
    if (report.is_zfs) continue;
    std::vector<char> white(static_cast<std::size_t>(n), 1);
    for (int v : report.derived_set) white[v] = 0;
    UncontrollableWitness w;
    w.mu = m;
    w.realization = {build_witness_matrix(spec, p, dng.f, m, white), input_matrix(spec),
                     spec.blocks};
    w.nu = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < n; ++v)
      if (white[v]) {
        w.nu(v) = 1.0;
        w.white_nodes.push_back(v);
      }
    return w;
  }
  throw WitnessUnavailableError(
      "the coloring reaches every node once the pattern's pinned diagonal values are taken "
      "into account, so no real eigenvalue in " + spec.delta.describe() +
      " has an uncontrollable left eigenvector of the required form");
}

RankDeficientWitness construct_rank_deficient_witness(const PatternMatrix& p) {
  const auto rr = pattern_full_row_rank(p);
  if (rr.full_row_rank) throw std::logic_error("pattern has full row rank");
  std::vector<char> white(static_cast<std::size_t>(p.rows()), 0);
  for (int r : rr.white_rows) white[r] = 1;
  RankDeficientWitness out{Eigen::MatrixXd::Zero(p.rows(), p.cols()),
                           Eigen::VectorXd::Zero(p.rows())};
  for (int r = 0; r < p.rows(); ++r) {
    if (white[r]) {
      out.w(r) = 1.0;
      continue;
    }
    for (int c = 0; c < p.cols(); ++c)
      if (p(r, c) != PatternSymbol::Zero) out.M(r, c) = 1.0;
  }
  for (int c = 0; c < p.cols(); ++c) {
    std::vector<Entry> entries;
    for (int r = 0; r < p.rows(); ++r)
      if (white[r] && p(r, c) != PatternSymbol::Zero) entries.push_back({r, p(r, c)});
    const auto values = balance(entries, 0.0);
    for (std::size_t k = 0; k < entries.size(); ++k) out.M(entries[k].row, c) = values[k];
  }
  return out;
}

double witness_residual(const UncontrollableWitness& w) {
  const Eigen::RowVectorXd r = w.nu.transpose() * w.realization.A - w.mu * w.nu.transpose();
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace modalssc
