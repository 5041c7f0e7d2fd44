#include "modalssc/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "modalssc/error.hpp"

namespace modalssc {

char to_char(PatternSymbol s) {
  switch (s) {
    case PatternSymbol::Zero: return '0';
    case PatternSymbol::Star: return '*';
    case PatternSymbol::Arbitrary: return '?';
  }
  return '0';
}

PatternSymbol symbol_from_char(char c) {
  switch (c) {
    case '0': return PatternSymbol::Zero;
    case '*': return PatternSymbol::Star;
    case '?': return PatternSymbol::Arbitrary;
    default: break;
  }
  throw ValidationError(std::string("unknown pattern symbol '") + c +
                        "' (expected one of 0, *, ?)");
}

// ---------------------------------------------------------------------------
// PatternMatrix

PatternMatrix::PatternMatrix(int rows, int cols, PatternSymbol fill)
    : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0)
    throw ValidationError("pattern matrix dimensions must be positive");
  entries_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

PatternMatrix PatternMatrix::from_rows(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ValidationError("pattern matrix has no rows");
  const auto width = rows.front().size();
  if (width == 0) throw ValidationError("pattern matrix row is empty");
  PatternMatrix p(static_cast<int>(rows.size()), static_cast<int>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width)
      throw ValidationError("pattern row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(width));
    for (std::size_t j = 0; j < width; ++j)
      p.set(static_cast<int>(i), static_cast<int>(j), symbol_from_char(rows[i][j]));
  }
  return p;
}

PatternMatrix PatternMatrix::parse(std::string_view text) {
  std::vector<std::string> rows(1);
  for (char c : text) {
    if (c == ';') {
      rows.emplace_back();
    } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      rows.back().push_back(c);
    }
  }
  if (!rows.empty() && rows.back().empty() && rows.size() > 1) rows.pop_back();
  return from_rows(rows);
}

bool PatternMatrix::is_all(PatternSymbol s) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [s](PatternSymbol e) { return e == s; });
}

std::vector<std::string> PatternMatrix::to_rows() const {
  std::vector<std::string> out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i].push_back(to_char((*this)(i, j)));
  return out;
}

std::string PatternMatrix::to_string() const {
  std::string s;
  for (int i = 0; i < rows_; ++i) {
    if (i) s.push_back(';');
    for (int j = 0; j < cols_; ++j) s.push_back(to_char((*this)(i, j)));
  }
  return s;
}

// ---------------------------------------------------------------------------
// BlockStructure

BlockStructure::BlockStructure(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ValidationError("block structure needs at least one block");
  offsets_.assign(dims_.size() + 1, 0);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] <= 0)
      throw ValidationError("block " + std::to_string(i + 1) + " has non-positive dimension");
    offsets_[i + 1] = offsets_[i] + dims_[i];
  }
}

int BlockStructure::block_of(int vertex) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), vertex);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

bool BlockStructure::is_scalar() const {
  return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 1; });
}

// ---------------------------------------------------------------------------
// DeltaSet

DeltaSet DeltaSet::singleton(double mu) {
  if (!std::isfinite(mu)) throw ValidationError("singleton value must be finite");
  return DeltaSet(Singleton{mu});
}

DeltaSet DeltaSet::finite(std::vector<double> values) {
  if (values.empty()) throw ValidationError("finite region needs at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("finite region values must be finite");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return DeltaSet(FiniteRealSet{std::move(values)});
}

DeltaSet DeltaSet::interval(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw ValidationError("interval region needs finite bounds a < b");
  return DeltaSet(RealInterval{a, b});
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

bool DeltaSet::contains(std::complex<double> lambda, double tol) const {
  return std::visit(
      overloaded{
          [](const AllComplex&) { return true; },
          [&](const NonzeroComplex&) { return std::abs(lambda) > tol; },
          [&](const ClosedRightHalfPlane&) { return lambda.real() >= -tol; },
          [&](const Singleton& s) { return std::abs(lambda - s.mu) <= tol; },
          [&](const FiniteRealSet& f) {
            double best = std::numeric_limits<double>::infinity();
            for (double v : f.values) best = std::min(best, std::abs(lambda - v));
            return best <= tol;
          },
          [&](const RealInterval& r) {
            return std::abs(lambda.imag()) <= tol && lambda.real() >= r.a - tol &&
                   lambda.real() <= r.b + tol;
          },
      },
      v_);
}

std::optional<double> DeltaSet::singleton_value() const {
  if (const auto* s = std::get_if<Singleton>(&v_)) return s->mu;
  return std::nullopt;
}

double DeltaSet::representative_real() const {
  return std::visit(overloaded{
                        [](const AllComplex&) { return 0.0; },
                        [](const NonzeroComplex&) { return 1.0; },
                        [](const ClosedRightHalfPlane&) { return 0.0; },
                        [](const Singleton& s) { return s.mu; },
                        [](const FiniteRealSet& f) { return f.values.front(); },
                        [](const RealInterval& r) { return r.a; },
                    },
                    v_);
}

std::vector<double> DeltaSet::real_candidates() const {
  std::vector<double> c = std::visit(
      overloaded{
          [](const AllComplex&) { return std::vector<double>{0.0, 1.0, -1.0, 2.0}; },
          [](const NonzeroComplex&) { return std::vector<double>{1.0, -1.0, 2.0}; },
          [](const ClosedRightHalfPlane&) { return std::vector<double>{0.0, 1.0, 2.0}; },
          [](const Singleton& s) { return std::vector<double>{s.mu}; },
          [](const FiniteRealSet& f) { return f.values; },
          [](const RealInterval& r) {
            const double w = r.b - r.a;
            return std::vector<double>{r.a, r.b, r.a + 0.5 * w, r.a + 0.25 * w,
                                       r.a + 0.75 * w};
          },
      },
      v_);
  // Representative first, no duplicates.
  std::vector<double> out;
  for (double v : c)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

std::vector<double> DeltaSet::isolated_members() const {
  if (const auto* s = std::get_if<Singleton>(&v_)) return {s->mu};
  if (const auto* f = std::get_if<FiniteRealSet>(&v_)) return f->values;
  return {};
}

std::string_view DeltaSet::kind() const {
  return std::visit(overloaded{
                        [](const AllComplex&) { return std::string_view("all"); },
                        [](const NonzeroComplex&) { return std::string_view("nonzero"); },
                        [](const ClosedRightHalfPlane&) { return std::string_view("crhp"); },
                        [](const Singleton&) { return std::string_view("singleton"); },
                        [](const FiniteRealSet&) { return std::string_view("finite"); },
                        [](const RealInterval&) { return std::string_view("interval"); },
                    },
                    v_);
}

std::string DeltaSet::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const AllComplex&) { os << "C"; },
                 [&](const NonzeroComplex&) { os << "C\\{0}"; },
                 [&](const ClosedRightHalfPlane&) { os << "{Re >= 0}"; },
                 [&](const Singleton& s) { os << "{" << s.mu << "}"; },
                 [&](const FiniteRealSet& f) {
                   os << "{";
                   for (std::size_t i = 0; i < f.values.size(); ++i)
                     os << (i ? ", " : "") << f.values[i];
                   os << "}";
                 },
                 [&](const RealInterval& r) { os << "[" << r.a << ", " << r.b << "]"; },
             },
             v_);
  return os.str();
}

// ---------------------------------------------------------------------------
// CharacteristicVector

std::string CharacteristicVector::to_string() const {
  std::string s;
  for (auto e : entries_) s.push_back(to_char(e));
  return s;
}

// ---------------------------------------------------------------------------
// NetworkSpec

NetworkSpec NetworkSpec::with_blocks(BlockStructure blocks, DeltaSet delta) {
  NetworkSpec spec;
  spec.node_patterns.reserve(static_cast<std::size_t>(blocks.count()));
  for (int i = 0; i < blocks.count(); ++i)
    spec.node_patterns.emplace_back(blocks.dim(i), blocks.dim(i), PatternSymbol::Arbitrary);
  spec.knowledge.assign(static_cast<std::size_t>(blocks.count()), SpectralKnowledge::unknown());
  spec.blocks = std::move(blocks);
  spec.delta = std::move(delta);
  return spec;
}

NetworkSpec NetworkSpec::from_n1ds(const PatternMatrix& pattern, DeltaSet delta,
                                   std::vector<SpectralKnowledge> knowledge,
                                   std::vector<int> control) {
  if (!pattern.is_square()) throw ValidationError("scalar network pattern must be square");
  const int n = pattern.rows();
  NetworkSpec spec = with_blocks(BlockStructure(std::vector<int>(n, 1)), std::move(delta));
  for (int i = 0; i < n; ++i) {
    spec.node_patterns[i] = PatternMatrix(1, 1, pattern(i, i));
    for (int j = 0; j < n; ++j)
      if (i != j && pattern(i, j) != PatternSymbol::Zero)
        spec.couplings.emplace(std::pair{i, j}, PatternMatrix(1, 1, pattern(i, j)));
  }
  if (!knowledge.empty()) spec.knowledge = std::move(knowledge);
  std::sort(control.begin(), control.end());
  spec.control_set = std::move(control);
  return spec;
}

PatternMatrix NetworkSpec::block_pattern(int to, int from) const {
  if (to == from) return node_patterns[to];
  auto it = couplings.find({to, from});
  if (it != couplings.end()) return it->second;
  return PatternMatrix(blocks.dim(to), blocks.dim(from), PatternSymbol::Zero);
}

PatternMatrix NetworkSpec::assemble_pattern() const {
  const int n = vertex_count();
  PatternMatrix p(n, n, PatternSymbol::Zero);
  auto paste = [&](int to, int from, const PatternMatrix& b) {
    const int r0 = blocks.offset(to), c0 = blocks.offset(from);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) p.set(r0 + i, c0 + j, b(i, j));
  };
  for (int i = 0; i < node_count(); ++i) paste(i, i, node_patterns[i]);
  for (const auto& [key, b] : couplings) paste(key.first, key.second, b);
  return p;
}

void NetworkSpec::set_coupling(int to, int from, PatternMatrix p) {
  if (p.is_all_zero())
    couplings.erase({to, from});
  else
    couplings[{to, from}] = std::move(p);
}

namespace {

std::string node_label(int i) { return "subsystem " + std::to_string(i + 1); }

// A scalar block with diagonal symbol s can avoid the region.
bool scalar_can_avoid(PatternSymbol s, const DeltaSet& delta) {
  switch (s) {
    case PatternSymbol::Zero: return !delta.contains(0.0);
    case PatternSymbol::Star:
      return !std::holds_alternative<DeltaSet::NonzeroComplex>(delta.variant());
    case PatternSymbol::Arbitrary: return true;
  }
  return true;
}

}  // namespace

void NetworkSpec::validate() const {
  const int n = node_count();
  if (n <= 0) throw ValidationError("network has no subsystems");
  if (static_cast<int>(node_patterns.size()) != n)
    throw ValidationError("expected " + std::to_string(n) + " node patterns, got " +
                          std::to_string(node_patterns.size()));
  if (static_cast<int>(knowledge.size()) != n)
    throw ValidationError("expected " + std::to_string(n) +
                          " spectral knowledge entries, got " +
                          std::to_string(knowledge.size()));
  for (int i = 0; i < n; ++i) {
    const auto& p = node_patterns[i];
    if (p.rows() != blocks.dim(i) || p.cols() != blocks.dim(i))
      throw ValidationError(node_label(i) + " pattern is " + std::to_string(p.rows()) + "x" +
                            std::to_string(p.cols()) + ", expected " +
                            std::to_string(blocks.dim(i)) + "x" + std::to_string(blocks.dim(i)));
  }
  for (const auto& [key, p] : couplings) {
    const auto [to, from] = key;
    if (to < 0 || to >= n || from < 0 || from >= n)
      throw ValidationError("coupling " + std::to_string(from + 1) + " -> " +
                            std::to_string(to + 1) + " references a missing subsystem");
    if (to == from)
      throw ValidationError("coupling " + std::to_string(from + 1) + " -> " +
                            std::to_string(to + 1) + " is a self coupling; use the node pattern");
    if (p.rows() != blocks.dim(to) || p.cols() != blocks.dim(from))
      throw ValidationError("coupling " + std::to_string(from + 1) + " -> " +
                            std::to_string(to + 1) + " pattern is " + std::to_string(p.rows()) +
                            "x" + std::to_string(p.cols()) + ", expected " +
                            std::to_string(blocks.dim(to)) + "x" +
                            std::to_string(blocks.dim(from)));
  }
  for (std::size_t k = 0; k < control_set.size(); ++k) {
    const int c = control_set[k];
    if (c < 0 || c >= n)
      throw ValidationError("control subsystem " + std::to_string(c + 1) + " out of range");
    if (k > 0 && control_set[k - 1] >= c)
      throw ValidationError("control set must be sorted and free of duplicates");
  }
  for (int i = 0; i < n; ++i) {
    const auto& kn = knowledge[i];
    const auto& p = node_patterns[i];
    switch (kn.kind) {
      case SpectralKnowledge::Kind::Unknown: break;
      case SpectralKnowledge::Kind::DisjointFromDelta:
        if (std::holds_alternative<DeltaSet::AllComplex>(delta.variant()))
          throw ValidationError(node_label(i) +
                                ": no spectrum is disjoint from the whole complex plane");
        if (p.rows() == 1 && !scalar_can_avoid(p(0, 0), delta))
          throw ValidationError(node_label(i) + ": diagonal pattern '" +
                                std::string(1, to_char(p(0, 0))) +
                                "' cannot avoid the region " + delta.describe());
        break;
      case SpectralKnowledge::Kind::MuIdentity: {
        const auto mu = delta.singleton_value();
        if (!mu)
          throw ValidationError(node_label(i) +
                                ": mu_identity requires a singleton region, got " +
                                delta.describe());
        if (*mu != kn.mu)
          throw ValidationError(node_label(i) + ": mu_identity value " + std::to_string(kn.mu) +
                                " differs from the singleton region " + delta.describe());
        for (int r = 0; r < p.rows(); ++r)
          for (int c = 0; c < p.cols(); ++c) {
            const auto s = p(r, c);
            if (r != c && s == PatternSymbol::Star)
              throw ValidationError(node_label(i) +
                                    ": mu_identity conflicts with an off-diagonal '*'");
            if (r == c && !symbol_admits(s, kn.mu))
              throw ValidationError(node_label(i) + ": mu_identity value " +
                                    std::to_string(kn.mu) + " conflicts with diagonal '" +
                                    std::string(1, to_char(s)) + "'");
          }
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------

CharacteristicVector derive_characteristic(const NetworkSpec& spec) {
  spec.validate();
  std::vector<PatternSymbol> f;
  f.reserve(spec.knowledge.size());
  for (const auto& k : spec.knowledge) {
    switch (k.kind) {
      case SpectralKnowledge::Kind::DisjointFromDelta: f.push_back(PatternSymbol::Star); break;
      case SpectralKnowledge::Kind::MuIdentity: f.push_back(PatternSymbol::Zero); break;
      case SpectralKnowledge::Kind::Unknown: f.push_back(PatternSymbol::Arbitrary); break;
    }
  }
  return CharacteristicVector(std::move(f));
}

std::vector<SpectralKnowledge> derive_n1ds_knowledge(const PatternMatrix& pattern,
                                                     const DeltaSet& delta) {
  if (!pattern.is_square())
    throw ValidationError("scalar knowledge derivation needs a square pattern");
  const int n = pattern.rows();
  std::vector<SpectralKnowledge> out(static_cast<std::size_t>(n));
  const auto mu = delta.singleton_value();
  const bool zero_singleton = mu && *mu == 0.0;
  const bool nonzero = std::holds_alternative<DeltaSet::NonzeroComplex>(delta.variant());
  for (int k = 0; k < n; ++k) {
    const auto d = pattern(k, k);
    if (zero_singleton) {
      if (d == PatternSymbol::Star) out[k] = SpectralKnowledge::disjoint();
      else if (d == PatternSymbol::Zero) out[k] = SpectralKnowledge::mu_identity(0.0);
    } else if (nonzero) {
      if (d == PatternSymbol::Zero) out[k] = SpectralKnowledge::disjoint();
    }
  }
  return out;
}

}  // namespace modalssc
