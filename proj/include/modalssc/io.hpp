#pragma once

// Network files, JSON reports and DOT rendering. Every external index is
// 1-based.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modalssc/analysis.hpp"
#include "modalssc/graph.hpp"
#include "modalssc/oracle.hpp"
#include "modalssc/pattern.hpp"
#include "modalssc/zeroforcing.hpp"

namespace modalssc {

using Json = nlohmann::ordered_json;

// Parses a network description. Schema violations throw ValidationError
// whose message starts with "line N:" pointing at the offending value.
NetworkSpec parse_network(std::string_view text);
NetworkSpec load_network(const std::filesystem::path& path);

Json network_to_json(const NetworkSpec& spec);
std::string serialize_network(const NetworkSpec& spec);

Json delta_to_json(const DeltaSet& delta);

Json zfs_report_json(const ZfsReport& r, const std::vector<int>& initial);
Json min_zfs_json(const MinZfsResult& r);
Json row_rank_json(const RowRankResult& r, const PatternMatrix& p);
Json witness_json(const UncontrollableWitness& w, const std::vector<int>& control);
Json verdict_json(const SscVerdict& v);
Json verification_json(const VerificationReport& r);
Json matrix_json(const Eigen::MatrixXd& m);

// Realisations to inject: a witness object with an "A" member, a bare
// matrix, or an array of either.
std::vector<Eigen::MatrixXd> parse_injected(std::string_view text);

// Node i of the network graph is drawn as "i"; vertex k of subsystem i in
// the global graph as "i^k". Strong edges are solid and weak edges dashed.
std::string network_dot(const LoopDigraph& g, const std::vector<int>& black);
std::string global_dot(const LoopDigraph& g, const BlockStructure& blocks,
                       const std::vector<int>& black);

std::string read_file(const std::filesystem::path& path);

// Maps JSON pointers of a document to the 1-based line where the value
// starts. Unknown pointers resolve to their nearest known ancestor.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(std::string_view text);
  int line_of(std::string pointer) const;

 private:
  void value(const std::string& pointer);
  void skip_ws();
  std::string string_token();
  int line_at(std::size_t pos) const;

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  std::vector<std::pair<std::string, int>> entries_;
};

int line_of_offset(std::string_view text, std::size_t offset);

}  // namespace modalssc
