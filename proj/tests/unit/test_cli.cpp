#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dispatch.hpp"
#include "nlslab/report_io.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, Helpers) {
  EXPECT_EQ(cli::parse_range("2..6"), std::make_pair(2, 6));
  EXPECT_EQ(cli::parse_range("4"), std::make_pair(4, 4));
  EXPECT_THROW(cli::parse_range("6..2"), std::invalid_argument);
  EXPECT_EQ(cli::dyadic_list(4, 32), (std::vector<int>{4, 8, 16, 32}));
}

TEST(Cli, CountAndEnumerate) {
  auto r = run({"combinatorics", "count", "--k", "2", "--r", "2"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, "6\n");
  r = run({"combinatorics", "enumerate", "--k", "1", "--r", "2"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, "1 2 : 1 1\n1 2 : 1 2\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  auto bad = run({"bench", "strichartz", "--no-such-flag"});
  EXPECT_EQ(bad.code, cli::kExitUsage);
  EXPECT_NE(bad.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"combinatorics", "count", "--k", "7", "--r", "9"}).code, cli::kExitOk);
  EXPECT_EQ(run({"combinatorics", "enumerate", "--k", "7", "--r", "9"}).code, cli::kExitUsage);
  auto rejected = run({"bench", "bernstein", "--trials", "2", "--slack", "-5"});
  EXPECT_EQ(rejected.code, cli::kExitRejected);
  EXPECT_NE(rejected.out.find("accepted = false"), std::string::npos);
}

TEST(Cli, ParamsTable) {
  auto r = run({"params", "table", "--d", "2..3"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("7/12"), std::string::npos);
  EXPECT_NE(r.out.find("10/7"), std::string::npos);
}

TEST(Cli, ManifestAndReplay) {
  const auto dir = fs::temp_directory_path() / "nlslab_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv("NLSLAB_OUT_DIR", dir.c_str(), 1);
  auto r = run({"bench", "bernstein", "--trials", "2", "--seed", "7", "--out", "ber.csv"});
  ::unsetenv("NLSLAB_OUT_DIR");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  ASSERT_TRUE(fs::exists(dir / "ber.csv"));
  ASSERT_TRUE(fs::exists(dir / "ber.manifest.json"));
  auto manifest = nlohmann::json::parse(slurp(dir / "ber.manifest.json"));
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["command"], "bench bernstein");
  EXPECT_TRUE(manifest["accepted"].get<bool>());

  const auto again = dir / "again.csv";
  auto rp = run({"replay", (dir / "ber.manifest.json").string(), "--out", again.string()});
  ASSERT_EQ(rp.code, cli::kExitOk) << rp.err;
  EXPECT_EQ(report_body(slurp(dir / "ber.csv")), report_body(slurp(again)));
  EXPECT_EQ(run({"replay", (dir / "missing.json").string()}).code, cli::kExitUsage);
}
