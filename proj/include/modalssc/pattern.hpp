#pragma once

// Three-valued pattern algebra, eigenvalue regions, block structure and
// network descriptions.
//
// All indices are 0-based in this API. The file formats and reports
// produced by the command line tool are 1-based.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace modalssc {

inline constexpr double kDefaultTol = 1e-8;

enum class PatternSymbol : std::uint8_t { Zero, Star, Arbitrary };

char to_char(PatternSymbol s);
PatternSymbol symbol_from_char(char c);

// Whether a real value is a member of the symbol's class: Zero admits only
// 0, Star admits every nonzero value, Arbitrary admits everything.
constexpr bool symbol_admits(PatternSymbol s, double v) {
  switch (s) {
    case PatternSymbol::Zero: return v == 0.0;
    case PatternSymbol::Star: return v != 0.0;
    case PatternSymbol::Arbitrary: return true;
  }
  return false;
}

class PatternMatrix {
 public:
  PatternMatrix() = default;
  PatternMatrix(int rows, int cols, PatternSymbol fill = PatternSymbol::Zero);

  // Rows given as strings over "0*?". Throws ValidationError on ragged or
  // unknown input.
  static PatternMatrix from_rows(const std::vector<std::string>& rows);
  // Compact form: rows separated by ';' (whitespace ignored), e.g. "*0;?*".
  static PatternMatrix parse(std::string_view text);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  PatternSymbol operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }
  void set(int i, int j, PatternSymbol s) {
    entries_[static_cast<std::size_t>(i) * cols_ + j] = s;
  }

  bool is_all(PatternSymbol s) const;
  bool is_all_zero() const { return is_all(PatternSymbol::Zero); }

  std::vector<std::string> to_rows() const;
  std::string to_string() const;

  // Membership of a concrete matrix (anything with rows(), cols() and
  // operator()(i, j) returning a real) in the pattern class.
  template <class Matrix>
  bool admits(const Matrix& m) const {
    if (m.rows() != rows_ || m.cols() != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!symbol_admits((*this)(i, j), static_cast<double>(m(i, j))))
          return false;
    return true;
  }

  friend bool operator==(const PatternMatrix&, const PatternMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<PatternSymbol> entries_;
};

// Dimensions (l_1, ..., l_n) of the diagonal blocks of a network matrix.
class BlockStructure {
 public:
  BlockStructure() = default;
  explicit BlockStructure(std::vector<int> dims);

  int count() const { return static_cast<int>(dims_.size()); }
  int dim(int block) const { return dims_[block]; }
  int total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  // First global row/column of a block.
  int offset(int block) const { return offsets_[block]; }
  // Block that owns a global vertex index.
  int block_of(int vertex) const;
  bool is_scalar() const;
  const std::vector<int>& dims() const { return dims_; }

  friend bool operator==(const BlockStructure& a, const BlockStructure& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;  // size count()+1, offsets_[0] == 0
};

// Eigenvalue region. A closed set of shapes so that membership, singleton
// tests and real representatives are all decidable.
class DeltaSet {
 public:
  struct AllComplex {
    friend bool operator==(AllComplex, AllComplex) { return true; }
  };
  struct NonzeroComplex {
    friend bool operator==(NonzeroComplex, NonzeroComplex) { return true; }
  };
  struct ClosedRightHalfPlane {
    friend bool operator==(ClosedRightHalfPlane, ClosedRightHalfPlane) { return true; }
  };
  struct Singleton {
    double mu;
    friend bool operator==(Singleton, Singleton) = default;
  };
  struct FiniteRealSet {
    std::vector<double> values;  // sorted, unique, nonempty
    friend bool operator==(const FiniteRealSet&, const FiniteRealSet&) = default;
  };
  struct RealInterval {
    double a;
    double b;
    friend bool operator==(RealInterval, RealInterval) = default;
  };
  using Variant = std::variant<AllComplex, NonzeroComplex, ClosedRightHalfPlane,
                               Singleton, FiniteRealSet, RealInterval>;

  DeltaSet() : v_(AllComplex{}) {}

  static DeltaSet all() { return DeltaSet(AllComplex{}); }
  static DeltaSet nonzero() { return DeltaSet(NonzeroComplex{}); }
  static DeltaSet crhp() { return DeltaSet(ClosedRightHalfPlane{}); }
  static DeltaSet singleton(double mu);
  static DeltaSet finite(std::vector<double> values);
  static DeltaSet interval(double a, double b);

  bool contains(std::complex<double> lambda, double tol = kDefaultTol) const;
  bool is_singleton() const { return std::holds_alternative<Singleton>(v_); }
  std::optional<double> singleton_value() const;
  // Every representable region contains a real number.
  bool intersects_reals() const { return true; }
  double representative_real() const;
  // Real members to try as an eigenvalue, representative first.
  std::vector<double> real_candidates() const;
  // Members that are isolated points (singleton and finite sets). Empty for
  // the continuous regions.
  std::vector<double> isolated_members() const;

  // Short tag used in the network file: all, nonzero, crhp, singleton,
  // finite, interval.
  std::string_view kind() const;
  std::string describe() const;
  const Variant& variant() const { return v_; }

  friend bool operator==(const DeltaSet&, const DeltaSet&) = default;

 private:
  explicit DeltaSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct SpectralKnowledge {
  enum class Kind : std::uint8_t { Unknown, DisjointFromDelta, MuIdentity };

  Kind kind = Kind::Unknown;
  double mu = 0.0;  // only meaningful for MuIdentity

  static SpectralKnowledge unknown() { return {}; }
  static SpectralKnowledge disjoint() { return {Kind::DisjointFromDelta, 0.0}; }
  static SpectralKnowledge mu_identity(double mu) { return {Kind::MuIdentity, mu}; }

  friend bool operator==(const SpectralKnowledge&, const SpectralKnowledge&) = default;
};

// Per-subsystem tag: Star = spectrum disjoint from the region, Zero = block
// is mu*I for a singleton region, Arbitrary = no information.
class CharacteristicVector {
 public:
  CharacteristicVector() = default;
  explicit CharacteristicVector(std::vector<PatternSymbol> entries)
      : entries_(std::move(entries)) {}

  int size() const { return static_cast<int>(entries_.size()); }
  PatternSymbol operator[](int i) const { return entries_[i]; }
  const std::vector<PatternSymbol>& entries() const { return entries_; }
  std::string to_string() const;

  friend bool operator==(const CharacteristicVector&,
                         const CharacteristicVector&) = default;

 private:
  std::vector<PatternSymbol> entries_;
};

// A network of subsystems with a block pattern, a region of interest, what is
// known about each subsystem's spectrum relative to that region, and the
// control subsystems.
struct NetworkSpec {
  BlockStructure blocks;
  std::vector<PatternMatrix> node_patterns;
  // (to, from) -> pattern of the block A_{to,from}, shape l_to x l_from.
  // Absent means all-zero.
  std::map<std::pair<int, int>, PatternMatrix> couplings;
  DeltaSet delta;
  std::vector<SpectralKnowledge> knowledge;
  std::vector<int> control_set;  // sorted, unique

  // All-'?' subsystems, no couplings, no knowledge, no control.
  static NetworkSpec with_blocks(BlockStructure blocks, DeltaSet delta);
  // Network of one-dimensional subsystems from a square pattern.
  static NetworkSpec from_n1ds(const PatternMatrix& pattern, DeltaSet delta,
                               std::vector<SpectralKnowledge> knowledge,
                               std::vector<int> control);

  int node_count() const { return blocks.count(); }
  int vertex_count() const { return blocks.total(); }
  bool is_n1ds() const { return blocks.is_scalar(); }

  // Block A_{to,from}; the node pattern on the diagonal, all-zero when no
  // coupling is stored.
  PatternMatrix block_pattern(int to, int from) const;
  PatternMatrix assemble_pattern() const;

  void set_coupling(int to, int from, PatternMatrix p);

  // Throws ValidationError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// f(k) = Star for DisjointFromDelta, Zero for MuIdentity, Arbitrary
// otherwise. Validates the network first.
CharacteristicVector derive_characteristic(const NetworkSpec& spec);

// Knowledge implied by a scalar pattern alone, taking the realisable set to be
// the whole pattern class.
std::vector<SpectralKnowledge> derive_n1ds_knowledge(const PatternMatrix& pattern,
                                                     const DeltaSet& delta);

}  // namespace modalssc
