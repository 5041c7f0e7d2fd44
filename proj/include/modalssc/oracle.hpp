#pragma once

// Numerical ground truth: realisations sampled from a network's pattern
// class, the PBH eigenvalue test, multiplicities and ranks.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modalssc/pattern.hpp"

namespace modalssc {

struct RealizationMatrix {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  BlockStructure blocks;
};

// B with one standard basis column per vertex of every control subsystem, in
// ascending global order.
Eigen::MatrixXd input_matrix(const NetworkSpec& spec);

struct SamplerOptions {
  double arbitrary_zero_probability = 0.3;
  double star_min = 0.1;
  double star_max = 2.0;
  int max_attempts = 10000;
  double tol = kDefaultTol;
};

// Deterministic in (spec, seed). Throws SamplingInfeasibleError when a
// disjoint block cannot be drawn outside the region within the attempt
// budget.
RealizationMatrix sample_realization(const NetworkSpec& spec, std::uint64_t seed,
                                     const SamplerOptions& opt = {});

// Seed of trial `index` derived from a base seed.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index);

// First violated membership condition of A in the region-specified pattern
// class, or nullopt. Checks the pattern, disjoint blocks (no eigenvalue in the
// region at tolerance tol) and mu-identity blocks (exactly mu I).
std::optional<std::string> realization_violation(const NetworkSpec& spec,
                                                 const Eigen::MatrixXd& A,
                                                 double tol = kDefaultTol);

struct PbhResult {
  bool controllable = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

// [A - lambda I | B] has full row rank: sigma_min > tol * sigma_max * N.
PbhResult pbh_controllable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           std::complex<double> lambda, double tol = kDefaultTol);

struct EigenReportEntry {
  std::complex<double> lambda;
  bool in_delta = false;
  bool controllable = false;
  double sigma_min = 0.0;
};

// Eigenvalues of A with their region membership and PBH verdict. Throws
// NumericalError when the eigensolver fails.
std::vector<EigenReportEntry> controllable_eigen_report(const Eigen::MatrixXd& A,
                                                        const Eigen::MatrixXd& B,
                                                        const DeltaSet& delta,
                                                        double tol = kDefaultTol);

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A);

// N - rank(A - lambda I) with threshold tol * sigma_max * N.
int numeric_geometric_multiplicity(const Eigen::MatrixXd& A, std::complex<double> lambda,
                                   double tol = kDefaultTol);

// Rank with threshold tol * sigma_max * max(rows, cols).
int numeric_rank(const Eigen::MatrixXd& M, double tol = kDefaultTol);

// Points of the region at which A has an eigenvalue: computed eigenvalues
// inside the region plus isolated region members where A - mu I is
// numerically singular.
std::vector<std::complex<double>> eigenvalues_in_delta(const Eigen::MatrixXd& A,
                                                       const DeltaSet& delta,
                                                       double tol = kDefaultTol);

struct VerificationClaims {
  bool controllable = false;  // every eigenvalue in the region passes PBH
  bool exclusion = false;     // no eigenvalue in the region at all
  std::optional<long> multiplicity_bound;
};

struct VerificationOptions {
  int trials = 1000;
  std::uint64_t base_seed = 7;
  double tol = kDefaultTol;
  VerificationClaims claims;
  // Realisations evaluated before the sampled trials, as trials 0..k-1.
  std::vector<Eigen::MatrixXd> injected;
  SamplerOptions sampler;
};

struct Violation {
  int trial = 0;
  std::optional<std::uint64_t> seed;  // empty for injected realisations
  std::string kind;                   // uncontrollable, eigenvalue_in_delta, multiplicity
  std::complex<double> lambda;
  double sigma_min = 0.0;
  int multiplicity = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct VerificationReport {
  int trials = 0;
  std::uint64_t base_seed = 0;
  double tol = kDefaultTol;
  VerificationClaims claims;
  std::vector<Violation> violations;  // ordered by trial
  int max_multiplicity = 0;           // over all eigenvalues in the region
  bool pass() const { return violations.empty(); }
};

// Trials run in parallel, each with its own generator; the report does not
// depend on scheduling.
VerificationReport monte_carlo_verify(const NetworkSpec& spec, const VerificationOptions& opt);
// Single-threaded reference with identical output.
VerificationReport monte_carlo_verify_serial(const NetworkSpec& spec,
                                             const VerificationOptions& opt);

// Violations of the claims for one realisation.
std::vector<Violation> check_realization(const NetworkSpec& spec, const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const VerificationClaims& claims, double tol,
                                         int* max_multiplicity = nullptr);

}  // namespace modalssc
