#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "modalssc/io.hpp"

using modalssc::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MODALSSC_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(MODALSSC_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "modal_ssc_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, CheckZfsOnRing) {
  for (int i = 1; i <= 6; ++i) {
    const auto r = run("check-zfs " + data("ring6.json") + " --set " + std::to_string(i));
    EXPECT_EQ(r.code, 0) << i;
    EXPECT_EQ(Json::parse(r.out)["is_zfs"], true);
  }
  const auto empty = run("check-zfs " + data("ring6.json") + " --set \"\"");
  EXPECT_EQ(empty.code, 1);
  EXPECT_EQ(Json::parse(empty.out)["derived_set"], Json::array());
}

TEST(Cli, CheckZfsRejectsBadIds) {
  EXPECT_EQ(run("check-zfs " + data("ring6.json") + " --set 7").code, 2);
  EXPECT_EQ(run("check-zfs " + data("ring6.json") + " --set x").code, 2);
}

TEST(Cli, MinZfs) {
  const auto r = run("min-zfs " + data("ring6.json"));
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["weight"], 2);
  EXPECT_EQ(j["set"], Json::array({1}));
}

TEST(Cli, MinZfsCapFromEnvironment) {
  const std::string cmd = "MODAL_SSC_SEARCH_CAP=3 " + std::string(MODALSSC_CLI) + " min-zfs " +
                          data("ring6.json") + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 3);
}

TEST(Cli, SscVerdicts) {
  const auto ring = run("ssc " + data("ring6.json"));
  EXPECT_EQ(ring.code, 0);
  EXPECT_EQ(Json::parse(ring.out)["verdict"], "Sufficient");

  const auto path = scratch("w.json");
  fs::remove(path);
  const auto w = run("ssc " + data("witness2.json") + " --witness " + path.string());
  EXPECT_EQ(w.code, 1);
  const auto j = Json::parse(w.out);
  EXPECT_EQ(j["verdict"], "IffFails");
  EXPECT_EQ(j["witness"]["A"], Json::parse("[[0.0, 0.0], [1.0, 1.0]]"));
  ASSERT_TRUE(fs::exists(path));
  EXPECT_EQ(Json::parse(modalssc::read_file(path))["mu"], 0.0);
}

TEST(Cli, VerifyPassesAndInjectedWitnessFails) {
  const auto ok = run("verify " + data("example14.json") + " --trials 200 --seed 3");
  EXPECT_EQ(ok.code, 0);
  const auto j = Json::parse(ok.out);
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["trials"], 200);
  EXPECT_EQ(j["seed"], 3);

  const auto path = scratch("inject.json");
  write(path, R"({"A": [[0, 0], [1, 1]]})");
  const auto bad = run("verify " + data("witness2.json") + " --trials 10 --inject " + path.string());
  EXPECT_EQ(bad.code, 1);
  const auto jb = Json::parse(bad.out);
  EXPECT_EQ(jb["pass"], false);
  EXPECT_EQ(jb["violations"][0]["trial"], 0);
}

TEST(Cli, VerifyIsReproducible) {
  const auto a = run("verify " + data("ring6.json") + " --trials 50 --seed 11");
  const auto b = run("verify " + data("ring6.json") + " --trials 50 --seed 11");
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, RankFromFileAndPattern) {
  const auto r = run("rank " + data("example14.json") + " --from 1 --to 2");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["full_row_rank"], false);
  EXPECT_TRUE(Json::parse(r.out).contains("witness"));
  EXPECT_EQ(run("rank --pattern \"*0;?*\"").code, 0);
  EXPECT_EQ(run("rank --pattern \"**;**\"").code, 1);
  EXPECT_EQ(run("rank " + data("example14.json") + " --from 1 --to 9").code, 2);
}

TEST(Cli, BuildDot) {
  const auto r = run("build " + data("ring6.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  EXPECT_NE(r.out.find("\"6\" -> \"1\" [style=dashed];"), std::string::npos);
  const auto g = run("build " + data("example14.json") + " --level global");
  EXPECT_NE(g.out.find("\"1^1\""), std::string::npos);
  const auto path = scratch("g.dot");
  EXPECT_EQ(run("build " + data("ring6.json") + " --dot " + path.string()).code, 0);
  EXPECT_EQ(modalssc::read_file(path), r.out);
}

TEST(Cli, InputErrors) {
  const auto bad = scratch("bad.json");
  write(bad, "{\n  \"subsystems\": [\n    {\"id\": 1, \"pattern\": [\"q\"]}\n  ],\n  \"delta\": {\"kind\": \"all\"}\n}\n");
  const std::string cmd = std::string(MODALSSC_CLI) + " ssc " + bad.string() + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string err;
  std::array<char, 512> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) err.append(buf.data(), n);
  EXPECT_EQ(WEXITSTATUS(::pclose(pipe)), 2);
  EXPECT_NE(err.find("line 3:"), std::string::npos) << err;
  EXPECT_EQ(run("ssc /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
