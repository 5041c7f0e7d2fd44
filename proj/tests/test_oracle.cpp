#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "modalssc/error.hpp"
#include "modalssc/io.hpp"
#include "modalssc/oracle.hpp"
#include "oracles.hpp"

using namespace modalssc;

namespace {

Eigen::MatrixXd mat(int r, int c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

Eigen::MatrixXd e(int n, int k) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
  b(k, 0) = 1;
  return b;
}

}  // namespace

TEST(Pbh, DecoupledModeIsUncontrollable) {
  const auto A = mat(2, 2, {-1, 0, 0, -2});
  EXPECT_FALSE(pbh_controllable(A, e(2, 0), -2.0).controllable);
  EXPECT_TRUE(pbh_controllable(A, e(2, 0), -1.0).controllable);
}

TEST(Pbh, JordanBlockDrivenAtTheEnd) {
  EXPECT_TRUE(pbh_controllable(mat(2, 2, {0, 1, 0, 0}), e(2, 1), 0.0).controllable);
}

TEST(Pbh, WitnessMatrixFailsAtZero) {
  const auto r = pbh_controllable(mat(2, 2, {0, 0, 1, 1}), e(2, 1), 0.0);
  EXPECT_FALSE(r.controllable);
  EXPECT_LT(r.sigma_min, 1e-12);
}

TEST(EigenReport, StableMatrixHasNothingInRightHalfPlane) {
  const auto rep = controllable_eigen_report(mat(2, 2, {-1, 3, 0, -4}), e(2, 0), DeltaSet::crhp());
  for (const auto& x : rep) EXPECT_FALSE(x.in_delta);
}

TEST(EigenReport, ClassifiesEachEigenvalue) {
  const auto rep = controllable_eigen_report(mat(2, 2, {0, 0, 1, 1}), e(2, 1), DeltaSet::all());
  ASSERT_EQ(rep.size(), 2u);
  EXPECT_NEAR(rep[0].lambda.real(), 0.0, 1e-12);
  EXPECT_FALSE(rep[0].controllable);
  EXPECT_NEAR(rep[1].lambda.real(), 1.0, 1e-12);
  EXPECT_TRUE(rep[1].controllable);
  for (const auto& x : rep) EXPECT_TRUE(x.in_delta);
}

TEST(EigenReport, ScalarSystem) {
  const auto rep = controllable_eigen_report(mat(1, 1, {3}), mat(1, 1, {1}), DeltaSet::singleton(3));
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_TRUE(rep[0].in_delta);
  EXPECT_TRUE(rep[0].controllable);
}

TEST(Multiplicity, BasicCases) {
  EXPECT_EQ(numeric_geometric_multiplicity(Eigen::MatrixXd::Identity(3, 3), 1.0), 3);
  EXPECT_EQ(numeric_geometric_multiplicity(mat(2, 2, {0, 1, 0, 0}), 0.0), 1);
  EXPECT_EQ(numeric_geometric_multiplicity(mat(3, 3, {2, 0, 0, 0, 2, 0, 0, 0, 5}), 2.0), 2);
  EXPECT_EQ(numeric_geometric_multiplicity(mat(3, 3, {2, 0, 0, 0, 2, 0, 0, 0, 5}), 3.0), 0);
}

TEST(NumericRank, Basic) {
  EXPECT_EQ(numeric_rank(mat(2, 2, {1, 1, 1, 1})), 1);
  EXPECT_EQ(numeric_rank(mat(2, 3, {1, 0, 0, 0, 1, 0})), 2);
  EXPECT_EQ(numeric_rank(Eigen::MatrixXd::Zero(2, 2)), 0);
}

TEST(Sampler, MuIdentityBlockIsForced) {
  // The diagonal pattern must admit 2, so it is Star rather than Zero.
  const auto spec = NetworkSpec::from_n1ds(PatternMatrix::parse("*"), DeltaSet::singleton(2),
                                           {SpectralKnowledge::mu_identity(2)}, {});
  const auto r = sample_realization(spec, 1);
  EXPECT_EQ(r.A(0, 0), 2.0);
}

TEST(Sampler, DisjointStarInRightHalfPlaneIsNegative) {
  const auto spec = NetworkSpec::from_n1ds(PatternMatrix::parse("*"), DeltaSet::crhp(),
                                           {SpectralKnowledge::disjoint()}, {});
  for (int s = 0; s < 200; ++s) {
    const double a = sample_realization(spec, s).A(0, 0);
    EXPECT_LT(a, 0.0);
    EXPECT_GE(std::abs(a), 0.1);
    EXPECT_LE(std::abs(a), 2.0);
  }
}

TEST(Sampler, RingBlocksAreStableWithNegativeStars) {
  // [[0, -b1], [b2, -b3]] with positive b has characteristic polynomial
  // s^2 + b3 s + b1 b2, hence both roots in the open left half plane.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int t = 0; t < 100; ++t) {
    const auto A = mat(2, 2, {0, -u(rng), u(rng), -u(rng)});
    for (const auto& l : eigenvalues(A)) EXPECT_LT(l.real(), 0.0);
  }
}

TEST(Sampler, DeterministicInSeed) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/example14.json");
  const auto a = sample_realization(spec, 42);
  const auto b = sample_realization(spec, 42);
  EXPECT_TRUE((a.A.array() == b.A.array()).all());
  EXPECT_TRUE((a.B.array() == b.B.array()).all());
  EXPECT_FALSE((sample_realization(spec, 43).A.array() == a.A.array()).all());
}

TEST(Sampler, InfeasibleDisjointBlockIsReported) {
  // A zero-diagonal triangular block always has eigenvalue 0, which lies in
  // the closed right half plane.
  auto spec = NetworkSpec::with_blocks(BlockStructure({2}), DeltaSet::crhp());
  spec.node_patterns[0] = PatternMatrix::parse("0?;00");
  spec.knowledge[0] = SpectralKnowledge::disjoint();
  SamplerOptions opt;
  opt.max_attempts = 50;
  try {
    sample_realization(spec, 1, opt);
    FAIL() << "expected SamplingInfeasibleError";
  } catch (const SamplingInfeasibleError& e) {
    EXPECT_EQ(e.block(), 0);
  }
}

TEST(Sampler, InputMatrixCoversControlledVertices) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/example14.json");
  const auto B = input_matrix(spec);
  EXPECT_EQ(B.rows(), 11);
  EXPECT_EQ(B.cols(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(B(k, k), 1.0);
  EXPECT_EQ(B.sum(), 3.0);
}

TEST(SamplerProperty, EverySampleIsInTheClass) {
  std::mt19937_64 rng(12);
  const DeltaSet regions[] = {DeltaSet::all(), DeltaSet::singleton(0), DeltaSet::crhp(),
                              DeltaSet::interval(-1, 1), DeltaSet::singleton(2)};
  for (int t = 0; t < 60; ++t) {
    const auto spec = gen::random_block_spec(rng, 10, regions[t % 5]);
    for (int s = 0; s < 30; ++s) {
      const auto r = sample_realization(spec, trial_seed(t, s));
      EXPECT_EQ(oracle::class_violation(spec, r.A), std::nullopt);
      EXPECT_EQ(realization_violation(spec, r.A), std::nullopt);
      // Star magnitudes stay in [0.1, 2].
      const auto p = spec.assemble_pattern();
      for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
          if (r.A(i, j) != 0.0 && !(spec.knowledge[spec.blocks.block_of(i)].kind ==
                                        SpectralKnowledge::Kind::MuIdentity &&
                                    spec.blocks.block_of(i) == spec.blocks.block_of(j))) {
            EXPECT_GE(std::abs(r.A(i, j)), 0.1);
            EXPECT_LE(std::abs(r.A(i, j)), 2.0);
          }
    }
  }
}

TEST(PbhProperty, NonEigenvalueIsAlwaysControllable) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 6;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    const Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 0);
    const std::complex<double> lambda(nd(rng), nd(rng));
    bool near = false;
    for (const auto& l : eigenvalues(A)) near = near || std::abs(l - lambda) < 1e-3;
    if (!near) EXPECT_TRUE(pbh_controllable(A, B, lambda).controllable);
  }
}

TEST(MultiplicityProperty, SumOverDistinctEigenvaluesAtMostN) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto spec = gen::random_block_spec(rng, 10, DeltaSet::all());
    const auto A = sample_realization(spec, t).A;
    std::vector<std::complex<double>> distinct;
    for (const auto& l : eigenvalues(A))
      if (std::none_of(distinct.begin(), distinct.end(),
                       [&](auto d) { return std::abs(d - l) < 1e-6; }))
        distinct.push_back(l);
    int sum = 0;
    for (const auto& l : distinct) sum += numeric_geometric_multiplicity(A, l);
    EXPECT_LE(sum, A.rows());
  }
}

TEST(MonteCarlo, ParallelMatchesSerialAndIsReproducible) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/example14.json");
  VerificationOptions opt;
  opt.trials = 100;
  opt.claims.controllable = true;
  opt.claims.multiplicity_bound = 3;
  const auto a = monte_carlo_verify(spec, opt);
  const auto b = monte_carlo_verify_serial(spec, opt);
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.max_multiplicity, b.max_multiplicity);
  EXPECT_EQ(a.trials, 100);
}

TEST(MonteCarlo, InjectedWitnessIsRecordedAtZero) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/witness2.json");
  VerificationOptions opt;
  opt.trials = 50;
  opt.injected.push_back(mat(2, 2, {0, 0, 1, 1}));
  const auto r = monte_carlo_verify(spec, opt);
  EXPECT_FALSE(r.pass());
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations[0].trial, 0);
  EXPECT_FALSE(r.violations[0].seed.has_value());
  EXPECT_EQ(r.violations[0].kind, "uncontrollable");
  EXPECT_NEAR(std::abs(r.violations[0].lambda), 0.0, 1e-9);
}

TEST(MonteCarlo, TrivialControlledNodePasses) {
  const auto spec = load_network(std::string(MODALSSC_DATA_DIR) + "/single_controlled.json");
  VerificationOptions opt;
  opt.trials = 200;
  opt.claims.controllable = true;
  EXPECT_TRUE(monte_carlo_verify(spec, opt).pass());
}
