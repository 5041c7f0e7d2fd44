#include "modalssc/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "modalssc/error.hpp"

namespace modalssc {

// ---------------------------------------------------------------------------
// Line locator

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

JsonLineIndex::JsonLineIndex(std::string_view text) : text_(text) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  try {
    skip_ws();
    value("");
  } catch (...) {
    // Malformed input keeps whatever prefix was indexed.
  }
}

int JsonLineIndex::line_at(std::size_t pos) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), pos);
  return static_cast<int>(it - line_starts_.begin());
}

void JsonLineIndex::skip_ws() {
  while (pos_ < text_.size() &&
         (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
    ++pos_;
}

std::string JsonLineIndex::string_token() {
  std::string out;
  ++pos_;  // opening quote
  while (pos_ < text_.size() && text_[pos_] != '"') {
    if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
      ++pos_;
      out.push_back(text_[pos_] == 'u' ? '?' : text_[pos_]);
      if (text_[pos_] == 'u') pos_ += 4;
    } else {
      out.push_back(text_[pos_]);
    }
    ++pos_;
  }
  ++pos_;  // closing quote
  return out;
}

void JsonLineIndex::value(const std::string& pointer) {
  if (pos_ >= text_.size()) throw std::out_of_range("eof");
  entries_.emplace_back(pointer, line_at(pos_));
  const char c = text_[pos_];
  if (c == '{') {
    ++pos_;
    skip_ws();
    if (text_[pos_] == '}') {
      ++pos_;
      return;
    }
    while (true) {
      skip_ws();
      std::string key = string_token();
      std::string escaped;
      for (char k : key) {
        if (k == '~') escaped += "~0";
        else if (k == '/') escaped += "~1";
        else escaped.push_back(k);
      }
      skip_ws();
      ++pos_;  // colon
      skip_ws();
      value(pointer + "/" + escaped);
      skip_ws();
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      ++pos_;  // closing brace
      return;
    }
  }
  if (c == '[') {
    ++pos_;
    skip_ws();
    if (text_[pos_] == ']') {
      ++pos_;
      return;
    }
    for (int idx = 0;; ++idx) {
      skip_ws();
      value(pointer + "/" + std::to_string(idx));
      skip_ws();
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      ++pos_;
      return;
    }
  }
  if (c == '"') {
    string_token();
    return;
  }
  while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}' &&
         text_[pos_] != ' ' && text_[pos_] != '\n' && text_[pos_] != '\r' && text_[pos_] != '\t')
    ++pos_;
}

int JsonLineIndex::line_of(std::string pointer) const {
  while (true) {
    for (const auto& [p, line] : entries_)
      if (p == pointer) return line;
    if (pointer.empty()) return 1;
    pointer.erase(pointer.rfind('/'));
  }
}

// ---------------------------------------------------------------------------
// Network parsing

namespace {

class SchemaReader {
 public:
  explicit SchemaReader(std::string_view text) : index_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
    throw ValidationError("line " + std::to_string(index_.line_of(pointer)) + ": " +
                          (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
  }

  const Json& member(const Json& obj, const std::string& ptr, const char* key) const {
    if (!obj.contains(key)) fail(ptr, std::string("missing required key \"") + key + "\"");
    return obj.at(key);
  }

  void only_keys(const Json& obj, const std::string& ptr,
                 std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : obj.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        fail(ptr + "/" + k, "unknown key \"" + k + "\"");
  }

  void expect_object(const Json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "expected an object");
  }
  void expect_array(const Json& j, const std::string& ptr) const {
    if (!j.is_array()) fail(ptr, "expected an array");
  }

  int integer(const Json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    return j.get<int>();
  }

  double number(const Json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  PatternMatrix pattern(const Json& j, const std::string& ptr, int rows, int cols) const {
    expect_array(j, ptr);
    std::vector<std::string> r;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto p = ptr + "/" + std::to_string(i);
      if (!j[i].is_string()) fail(p, "pattern rows must be strings over 0, *, ?");
      r.push_back(j[i].get<std::string>());
      if (static_cast<int>(r.back().size()) != cols)
        fail(p, "row has " + std::to_string(r.back().size()) + " entries, expected " +
                    std::to_string(cols));
      for (char c : r.back())
        if (c != '0' && c != '*' && c != '?')
          fail(p, std::string("unknown pattern symbol '") + c + "'");
    }
    if (static_cast<int>(r.size()) != rows)
      fail(ptr, "pattern has " + std::to_string(r.size()) + " rows, expected " +
                    std::to_string(rows));
    return PatternMatrix::from_rows(r);
  }

  DeltaSet delta(const Json& j, const std::string& ptr) const {
    expect_object(j, ptr);
    const auto& kind_j = member(j, ptr, "kind");
    if (!kind_j.is_string()) fail(ptr + "/kind", "expected a string");
    const auto kind = kind_j.get<std::string>();
    try {
      if (kind == "all") {
        only_keys(j, ptr, {"kind"});
        return DeltaSet::all();
      }
      if (kind == "nonzero") {
        only_keys(j, ptr, {"kind"});
        return DeltaSet::nonzero();
      }
      if (kind == "crhp") {
        only_keys(j, ptr, {"kind"});
        return DeltaSet::crhp();
      }
      if (kind == "singleton") {
        only_keys(j, ptr, {"kind", "value"});
        return DeltaSet::singleton(number(member(j, ptr, "value"), ptr + "/value"));
      }
      if (kind == "finite") {
        only_keys(j, ptr, {"kind", "values"});
        const auto& vals = member(j, ptr, "values");
        expect_array(vals, ptr + "/values");
        std::vector<double> v;
        for (std::size_t i = 0; i < vals.size(); ++i)
          v.push_back(number(vals[i], ptr + "/values/" + std::to_string(i)));
        return DeltaSet::finite(std::move(v));
      }
      if (kind == "interval") {
        only_keys(j, ptr, {"kind", "a", "b"});
        return DeltaSet::interval(number(member(j, ptr, "a"), ptr + "/a"),
                                  number(member(j, ptr, "b"), ptr + "/b"));
      }
    } catch (const ValidationError& e) {
      if (std::string_view(e.what()).starts_with("line ")) throw;
      fail(ptr, e.what());
    }
    fail(ptr + "/kind", "unknown region kind \"" + kind +
                            "\" (expected all, nonzero, crhp, singleton, finite, interval)");
  }

  SpectralKnowledge knowledge(const Json& j, const std::string& ptr) const {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "unknown") return SpectralKnowledge::unknown();
      if (s == "disjoint_from_delta") return SpectralKnowledge::disjoint();
      fail(ptr, "unknown spectral knowledge \"" + s + "\"");
    }
    if (j.is_object() && j.size() == 1 && j.contains("mu_identity"))
      return SpectralKnowledge::mu_identity(number(j.at("mu_identity"), ptr + "/mu_identity"));
    fail(ptr,
         "expected \"unknown\", \"disjoint_from_delta\" or {\"mu_identity\": value}");
  }

  NetworkSpec network(const Json& root) const {
    expect_object(root, "");
    only_keys(root, "", {"subsystems", "couplings", "delta", "control"});

    const auto& subs = member(root, "", "subsystems");
    expect_array(subs, "/subsystems");
    if (subs.empty()) fail("/subsystems", "at least one subsystem is required");

    struct Sub {
      int id;
      int dim;
      std::string ptr;
      const Json* pattern;
      SpectralKnowledge kn;
    };
    std::vector<Sub> list;
    std::set<int> ids;
    for (std::size_t k = 0; k < subs.size(); ++k) {
      const auto ptr = "/subsystems/" + std::to_string(k);
      const auto& s = subs[k];
      expect_object(s, ptr);
      only_keys(s, ptr, {"id", "dim", "pattern", "spectral_knowledge"});
      const int id = integer(member(s, ptr, "id"), ptr + "/id");
      if (!ids.insert(id).second) fail(ptr + "/id", "duplicate subsystem id " + std::to_string(id));
      int dim = 0;
      if (s.contains("dim")) {
        dim = integer(s.at("dim"), ptr + "/dim");
        if (dim < 1) fail(ptr + "/dim", "dimension must be positive");
      } else if (s.contains("pattern") && s.at("pattern").is_array()) {
        dim = static_cast<int>(s.at("pattern").size());
        if (dim < 1) fail(ptr + "/pattern", "pattern must have at least one row");
      } else {
        fail(ptr, "missing required key \"dim\"");
      }
      SpectralKnowledge kn;
      if (s.contains("spectral_knowledge"))
        kn = knowledge(s.at("spectral_knowledge"), ptr + "/spectral_knowledge");
      list.push_back({id, dim, ptr, s.contains("pattern") ? &s.at("pattern") : nullptr, kn});
    }
    std::sort(list.begin(), list.end(), [](const Sub& a, const Sub& b) { return a.id < b.id; });
    for (std::size_t k = 0; k < list.size(); ++k)
      if (list[k].id != static_cast<int>(k) + 1)
        fail(list[k].ptr + "/id", "subsystem ids must be 1..n without gaps; expected " +
                                      std::to_string(k + 1) + ", found " +
                                      std::to_string(list[k].id));

    std::vector<int> dims;
    for (const auto& s : list) dims.push_back(s.dim);
    const int n = static_cast<int>(list.size());

    const DeltaSet d = delta(member(root, "", "delta"), "/delta");
    NetworkSpec spec = NetworkSpec::with_blocks(BlockStructure(dims), d);
    for (int k = 0; k < n; ++k) {
      if (list[k].pattern)
        spec.node_patterns[k] = pattern(*list[k].pattern, list[k].ptr + "/pattern", dims[k], dims[k]);
      spec.knowledge[k] = list[k].kn;
    }

    if (root.contains("couplings")) {
      const auto& cs = root.at("couplings");
      expect_array(cs, "/couplings");
      for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto ptr = "/couplings/" + std::to_string(k);
        const auto& c = cs[k];
        expect_object(c, ptr);
        only_keys(c, ptr, {"from", "to", "pattern"});
        const int from = integer(member(c, ptr, "from"), ptr + "/from");
        const int to = integer(member(c, ptr, "to"), ptr + "/to");
        if (from < 1 || from > n) fail(ptr + "/from", "unknown subsystem " + std::to_string(from));
        if (to < 1 || to > n) fail(ptr + "/to", "unknown subsystem " + std::to_string(to));
        if (from == to) fail(ptr, "self coupling; put it in the subsystem pattern");
        if (spec.couplings.contains({to - 1, from - 1}))
          fail(ptr, "duplicate coupling " + std::to_string(from) + " -> " + std::to_string(to));
        auto p = pattern(member(c, ptr, "pattern"), ptr + "/pattern", dims[to - 1], dims[from - 1]);
        spec.couplings.emplace(std::pair{to - 1, from - 1}, std::move(p));
      }
    }

    if (root.contains("control")) {
      const auto& ctl = root.at("control");
      expect_array(ctl, "/control");
      std::set<int> seen;
      for (std::size_t k = 0; k < ctl.size(); ++k) {
        const auto ptr = "/control/" + std::to_string(k);
        const int id = integer(ctl[k], ptr);
        if (id < 1 || id > n) fail(ptr, "unknown subsystem " + std::to_string(id));
        if (!seen.insert(id).second) fail(ptr, "duplicate control subsystem " + std::to_string(id));
      }
      for (int id : seen) spec.control_set.push_back(id - 1);
    }

    // Drop explicit all-zero couplings so that absent and zero coincide.
    std::erase_if(spec.couplings, [](const auto& kv) { return kv.second.is_all_zero(); });

    try {
      spec.validate();
    } catch (const ValidationError& e) {
      // Subsystem-level failures point at the subsystem entry.
      const std::string msg = e.what();
      for (int i = 0; i < n; ++i)
        if (msg.starts_with("subsystem " + std::to_string(i + 1) + ":")) fail(list[i].ptr, msg);
      fail("", msg);
    }
    return spec;
  }

 private:
  JsonLineIndex index_;
};

}  // namespace

NetworkSpec parse_network(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError("line " + std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                          ": malformed JSON: " + e.what());
  }
  return SchemaReader(text).network(root);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NetworkSpec load_network(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return parse_network(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialisation

Json delta_to_json(const DeltaSet& delta) {
  Json j;
  j["kind"] = std::string(delta.kind());
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DeltaSet::Singleton>) j["value"] = v.mu;
        if constexpr (std::is_same_v<T, DeltaSet::FiniteRealSet>) j["values"] = v.values;
        if constexpr (std::is_same_v<T, DeltaSet::RealInterval>) {
          j["a"] = v.a;
          j["b"] = v.b;
        }
      },
      delta.variant());
  return j;
}

Json network_to_json(const NetworkSpec& spec) {
  Json root;
  Json subs = Json::array();
  for (int k = 0; k < spec.node_count(); ++k) {
    Json s;
    s["id"] = k + 1;
    s["dim"] = spec.blocks.dim(k);
    s["pattern"] = spec.node_patterns[k].to_rows();
    const auto& kn = spec.knowledge[k];
    switch (kn.kind) {
      case SpectralKnowledge::Kind::Unknown: s["spectral_knowledge"] = "unknown"; break;
      case SpectralKnowledge::Kind::DisjointFromDelta:
        s["spectral_knowledge"] = "disjoint_from_delta";
        break;
      case SpectralKnowledge::Kind::MuIdentity:
        s["spectral_knowledge"] = Json{{"mu_identity", kn.mu}};
        break;
    }
    subs.push_back(std::move(s));
  }
  root["subsystems"] = std::move(subs);
  Json cs = Json::array();
  for (const auto& [key, p] : spec.couplings)
    cs.push_back(Json{{"from", key.second + 1}, {"to", key.first + 1}, {"pattern", p.to_rows()}});
  root["couplings"] = std::move(cs);
  root["delta"] = delta_to_json(spec.delta);
  Json ctl = Json::array();
  for (int c : spec.control_set) ctl.push_back(c + 1);
  root["control"] = std::move(ctl);
  return root;
}

std::string serialize_network(const NetworkSpec& spec) { return network_to_json(spec).dump(2) + "\n"; }

namespace {

Json one_based(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

Json complex_json(std::complex<double> c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Json zfs_report_json(const ZfsReport& r, const std::vector<int>& initial) {
  Json j;
  j["is_zfs"] = r.is_zfs;
  j["set"] = one_based(initial);
  j["derived_set"] = one_based(r.derived_set);
  j["vertex_weight"] = r.vertex_weight;
  Json ch = Json::array();
  for (const auto& f : r.chronicle) ch.push_back(Json{{"from", f.from + 1}, {"to", f.to + 1}});
  j["chronicle"] = std::move(ch);
  return j;
}

Json min_zfs_json(const MinZfsResult& r) {
  Json j;
  j["set"] = one_based(r.set);
  j["weight"] = r.weight;
  return j;
}

Json row_rank_json(const RowRankResult& r, const PatternMatrix& p) {
  Json j;
  j["pattern"] = p.to_rows();
  j["full_row_rank"] = r.full_row_rank;
  Json ch = Json::array();
  for (const auto& [c, row] : r.chronicle) ch.push_back(Json{{"column", c + 1}, {"row", row + 1}});
  j["chronicle"] = std::move(ch);
  j["white_rows"] = one_based(r.white_rows);
  return j;
}

Json witness_json(const UncontrollableWitness& w, const std::vector<int>& control) {
  Json j;
  j["mu"] = w.mu;
  j["nu"] = std::vector<double>(w.nu.data(), w.nu.data() + w.nu.size());
  j["A"] = matrix_json(w.realization.A);
  j["B"] = matrix_json(w.realization.B);
  j["control"] = one_based(control);
  j["white_nodes"] = one_based(w.white_nodes);
  return j;
}

Json verdict_json(const SscVerdict& v) {
  Json j;
  j["verdict"] = std::string(to_string(v.verdict));
  j["zfs"] = zfs_report_json(v.zfs, {});
  j["zfs"].erase("set");
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json verification_json(const VerificationReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["seed"] = r.base_seed;
  j["tol"] = r.tol;
  Json claims;
  claims["controllable"] = r.claims.controllable;
  claims["exclusion"] = r.claims.exclusion;
  claims["multiplicity_bound"] =
      r.claims.multiplicity_bound ? Json(*r.claims.multiplicity_bound) : Json(nullptr);
  j["claims"] = std::move(claims);
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json x;
    x["trial"] = v.trial;
    x["seed"] = v.seed ? Json(*v.seed) : Json(nullptr);
    x["kind"] = v.kind;
    x["lambda"] = complex_json(v.lambda);
    x["sigma_min"] = v.sigma_min;
    if (v.kind == "multiplicity") x["multiplicity"] = v.multiplicity;
    vs.push_back(std::move(x));
  }
  j["violations"] = std::move(vs);
  j["max_multiplicity"] = r.max_multiplicity;
  j["pass"] = r.pass();
  return j;
}

std::vector<Eigen::MatrixXd> parse_injected(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError("line " + std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                          ": malformed JSON: " + e.what());
  }
  auto to_matrix = [](const Json& m) {
    if (!m.is_array() || m.empty() || !m[0].is_array())
      throw ValidationError("injected matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = static_cast<Eigen::Index>(m[0].size());
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!m[i].is_array() || static_cast<Eigen::Index>(m[i].size()) != cols)
        throw ValidationError("injected matrix rows must have equal length");
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!m[i][j].is_number()) throw ValidationError("injected matrix entries must be numbers");
        out(i, j) = m[i][j].get<double>();
      }
    }
    return out;
  };
  auto one = [&](const Json& item) {
    if (item.is_object()) {
      if (!item.contains("A")) throw ValidationError("injected object needs an \"A\" member");
      return to_matrix(item.at("A"));
    }
    return to_matrix(item);
  };
  std::vector<Eigen::MatrixXd> out;
  if (root.is_array() && !root.empty() && (root[0].is_object() ||
                                           (root[0].is_array() && !root[0].empty() &&
                                            root[0][0].is_array()))) {
    for (const auto& item : root) out.push_back(one(item));
  } else {
    out.push_back(one(root));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string edge_attrs(EdgeKind k) { return k == EdgeKind::Weak ? " [style=dashed]" : ""; }

std::string render(const LoopDigraph& g, const std::vector<std::string>& names,
                   const std::vector<int>& black) {
  std::vector<char> is_black(static_cast<std::size_t>(g.node_count()), 0);
  for (int v : black) is_black[v] = 1;
  std::ostringstream os;
  os << "digraph G {\n  node [shape=circle];\n";
  for (int v = 0; v < g.node_count(); ++v) {
    os << "  \"" << names[v] << "\"";
    if (is_black[v]) os << " [style=filled fillcolor=black fontcolor=white]";
    os << ";\n";
  }
  for (const auto& e : g.edges())
    os << "  \"" << names[e.from] << "\" -> \"" << names[e.to] << "\"" << edge_attrs(e.kind)
       << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace

std::string network_dot(const LoopDigraph& g, const std::vector<int>& black) {
  std::vector<std::string> names;
  for (int v = 0; v < g.node_count(); ++v) names.push_back(std::to_string(v + 1));
  return render(g, names, black);
}

std::string global_dot(const LoopDigraph& g, const BlockStructure& blocks,
                       const std::vector<int>& black) {
  std::vector<std::string> names;
  for (int v = 0; v < g.node_count(); ++v) {
    const int b = blocks.block_of(v);
    names.push_back(std::to_string(b + 1) + "^" + std::to_string(v - blocks.offset(b) + 1));
  }
  return render(g, names, black);
}

}  // namespace modalssc
