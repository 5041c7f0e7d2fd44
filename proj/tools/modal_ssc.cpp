// modal_ssc: command line front end for network graph construction, zero
// forcing analysis and numerical verification.
//
// Exit codes: 0 affirmative, 1 negative verdict, 2 input error, 3 search or
// sampling limit.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modalssc/analysis.hpp"
#include "modalssc/error.hpp"
#include "modalssc/io.hpp"

namespace {

using namespace modalssc;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;

std::vector<int> parse_id_list(const std::string& text, int n) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ValidationError("--set: '" + item + "' is not an integer id");
    if (id < 1 || id > n) throw ValidationError("--set: subsystem " + item + " out of range 1.." + std::to_string(n));
    out.push_back(id - 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_build(const std::string& file, const std::string& dot_path, const std::string& level) {
  const auto spec = load_network(file);
  std::string dot;
  if (level == "global") {
    std::vector<int> black;
    for (int c : spec.control_set)
      for (int k = 0; k < spec.blocks.dim(c); ++k) black.push_back(spec.blocks.offset(c) + k);
    dot = global_dot(build_global_graph(spec), spec.blocks, black);
  } else {
    dot = network_dot(build_delta_network_graph(spec).graph, spec.control_set);
  }
  if (dot_path.empty()) std::cout << dot;
  else write_text(dot_path, dot);
  return kExitYes;
}

int cmd_check_zfs(const std::string& file, const std::optional<std::string>& set) {
  const auto spec = load_network(file);
  const auto z = set ? parse_id_list(*set, spec.node_count()) : spec.control_set;
  const auto report = derived_set(build_delta_network_graph(spec).graph, z);
  emit(zfs_report_json(report, z));
  return report.is_zfs ? kExitYes : kExitNo;
}

int cmd_min_zfs(const std::string& file) {
  const auto spec = load_network(file);
  const int cap = search_cap_from_env();
  const auto r = min_zfs(build_delta_network_graph(spec).graph, cap);
  emit(min_zfs_json(r));
  return kExitYes;
}

int cmd_ssc(const std::string& file, const std::string& witness_path) {
  const auto spec = load_network(file);
  const auto v = is_delta_ssc(spec);
  Json j = verdict_json(v);
  if (v.witness) {
    const auto w = witness_json(*v.witness, spec.control_set);
    j["witness"] = w;
    if (!witness_path.empty()) {
      write_text(witness_path, w.dump(2) + "\n");
      j["witness_path"] = witness_path;
    }
  }
  emit(j);
  return (v.verdict == Verdict::Sufficient || v.verdict == Verdict::IffHolds) ? kExitYes : kExitNo;
}

int cmd_verify(const std::string& file, int trials, std::uint64_t seed, double tol,
               const std::string& inject) {
  const auto spec = load_network(file);
  const auto verdict = is_delta_ssc(spec);
  VerificationOptions opt;
  opt.trials = trials;
  opt.base_seed = seed;
  opt.tol = tol;
  opt.claims.controllable =
      verdict.verdict == Verdict::Sufficient || verdict.verdict == Verdict::IffHolds;
  if (spec.is_n1ds()) opt.claims.exclusion = spectrum_exclusion_n1ds(spec);
  const int cap = search_cap_from_env();
  if (spec.node_count() <= cap) opt.claims.multiplicity_bound = geometric_multiplicity_bound(spec, cap);
  if (!inject.empty()) opt.injected = parse_injected(read_file(inject));
  const auto report = monte_carlo_verify(spec, opt);
  Json j = verification_json(report);
  j["verdict"] = std::string(to_string(verdict.verdict));
  emit(j);
  return report.pass() ? kExitYes : kExitNo;
}

int cmd_rank(const std::string& file, int from, int to, const std::string& pattern_text) {
  PatternMatrix p;
  if (!pattern_text.empty()) {
    p = PatternMatrix::parse(pattern_text);
  } else {
    if (file.empty()) throw ValidationError("rank needs a network file or --pattern");
    const auto spec = load_network(file);
    const int n = spec.node_count();
    if (from < 1 || from > n || to < 1 || to > n)
      throw ValidationError("rank: --from and --to must be subsystem ids in 1.." + std::to_string(n));
    if (from == to) throw ValidationError("rank: --from and --to must differ");
    p = spec.block_pattern(to - 1, from - 1);
  }
  const auto r = pattern_full_row_rank(p);
  Json j = row_rank_json(r, p);
  if (!r.full_row_rank) {
    const auto w = construct_rank_deficient_witness(p);
    j["witness"] = Json{{"M", matrix_json(w.M)},
                        {"w", std::vector<double>(w.w.data(), w.w.data() + w.w.size())}};
  }
  emit(j);
  return r.full_row_rank ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal strong structural controllability of networks with dynamical nodes"};
  app.require_subcommand(1);

  std::string file, dot_path, level = "network", witness_path, inject, pattern_text;
  std::optional<std::string> set;
  int trials = 1000, from = 0, to = 0;
  std::uint64_t seed = 7;
  double tol = kDefaultTol;

  auto* build = app.add_subcommand("build", "Render the network graph (or global graph) as DOT");
  build->add_option("file", file, "Network JSON file")->required();
  build->add_option("--dot", dot_path, "Write DOT to this path instead of stdout");
  build->add_option("--level", level, "network or global")
      ->check(CLI::IsMember({"network", "global"}));

  auto* check = app.add_subcommand("check-zfs", "Run the coloring process from a node set");
  check->add_option("file", file, "Network JSON file")->required();
  check->add_option("--set", set, "Comma separated subsystem ids (default: control set)");

  auto* minz = app.add_subcommand("min-zfs", "Minimum weight zero forcing set");
  minz->add_option("file", file, "Network JSON file")->required();

  auto* ssc = app.add_subcommand("ssc", "Decide controllability with respect to the region");
  ssc->add_option("file", file, "Network JSON file")->required();
  ssc->add_option("--witness", witness_path, "Write the uncontrollable witness here");

  auto* verify = app.add_subcommand("verify", "Monte Carlo PBH check over sampled realisations");
  verify->add_option("file", file, "Network JSON file")->required();
  verify->add_option("--trials", trials, "Number of sampled realisations")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed, "Base seed");
  verify->add_option("--tol", tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--inject", inject, "JSON file with realisations evaluated first");

  auto* rank = app.add_subcommand("rank", "Full row rank test of a coupling pattern");
  rank->add_option("file", file, "Network JSON file");
  rank->add_option("--from", from, "Source subsystem id");
  rank->add_option("--to", to, "Target subsystem id");
  rank->add_option("--pattern", pattern_text, "Pattern such as \"*0;?*\" instead of a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*build) return cmd_build(file, dot_path, level);
    if (*check) return cmd_check_zfs(file, set);
    if (*minz) return cmd_min_zfs(file);
    if (*ssc) return cmd_ssc(file, witness_path);
    if (*verify) return cmd_verify(file, trials, seed, tol, inject);
    if (*rank) return cmd_rank(file, from, to, pattern_text);
  } catch (const SearchLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const SamplingInfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
