#pragma once

// Controllability deciders built on the network graph, plus constructive
// counterexamples.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "modalssc/graph.hpp"
#include "modalssc/oracle.hpp"
#include "modalssc/zeroforcing.hpp"

namespace modalssc {

struct UncontrollableWitness {
  RealizationMatrix realization;  // A is a member of the region-specified class
  double mu = 0.0;                // real eigenvalue inside the region
  Eigen::VectorXd nu;             // left eigenvector, zero on every controlled vertex
  std::vector<int> white_nodes;   // support of nu
};

enum class Verdict { Sufficient, IffHolds, IffFails, Inconclusive };

std::string_view to_string(Verdict v);

struct SscVerdict {
  Verdict verdict = Verdict::Inconclusive;
  ZfsReport zfs;
  std::optional<UncontrollableWitness> witness;
  std::string note;
};

// The control set is a ZFS of the network graph: Sufficient, or IffHolds for
// networks of scalar subsystems. Otherwise scalar networks yield IffFails with
// a witness, and block networks yield Inconclusive. A scalar network whose
// pattern pins a diagonal more tightly than its characteristic vector
// records may admit no witness; that case is also Inconclusive.
SscVerdict is_delta_ssc(const NetworkSpec& spec);

enum class Decision { Yes, No, Inconclusive };

std::string_view to_string(Decision d);

struct PartitionVerdict {
  Decision decision = Decision::Inconclusive;
  std::vector<SscVerdict> parts;
};

// Default partition: {0} and the nonzero complex numbers.
std::vector<DeltaSet> default_partition();

// Conjunction of region verdicts over a partition of the complex plane. The
// spec's own region and knowledge are replaced per part; for scalar networks
// the knowledge is rederived from the pattern. Accepted partitions are the
// whole plane alone, or {0} (as singleton or finite set) with the nonzero
// complex numbers. Anything else throws ValidationError.
PartitionVerdict is_strongly_structurally_controllable(
    const NetworkSpec& spec, const std::vector<DeltaSet>& partition = default_partition());

// Off-diagonal entries copied; diagonal Zero becomes Star, anything else
// becomes Arbitrary.
PatternMatrix build_abar(const PatternMatrix& pattern);

// Zero forcing number of the network graph: an upper bound on the geometric
// multiplicity of every eigenvalue in the region, over the whole class.
long geometric_multiplicity_bound(const NetworkSpec& spec, int cap = kDefaultSearchCap);

// True iff the empty set is a ZFS of the network graph, i.e. no member of
// the class has an eigenvalue in the region. Scalar networks only.
bool spectrum_exclusion_n1ds(const NetworkSpec& spec);

// Realisation with eigenvalue mu in the region and a left eigenvector that
// vanishes on the controlled vertices. Tries the given mu, or else the
// region's real candidates in order, and uses the first whose coloring
// stalls. Throws std::logic_error when the control set is a ZFS of the
// network graph and WitnessUnavailableError when no candidate stalls.
UncontrollableWitness construct_uncontrollable_witness(const NetworkSpec& spec,
                                                       std::optional<double> mu = std::nullopt);

struct RankDeficientWitness {
  Eigen::MatrixXd M;  // member of the pattern class
  Eigen::VectorXd w;  // nonzero, w^T M = 0
};

// Throws std::logic_error when the pattern has full row rank.
RankDeficientWitness construct_rank_deficient_witness(const PatternMatrix& p);

// Largest |(nu^T A - mu nu^T)_j|, nu^T B must also vanish for a witness.
double witness_residual(const UncontrollableWitness& w);

}  // namespace modalssc
