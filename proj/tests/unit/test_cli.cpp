#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "hpcoda/cli/cli.hpp"

using namespace hpcoda;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hpcoda");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hpcoda_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string fixture() {
    const auto fx = path("fx");
    const auto r = run({"gen-fixture", "--seed", "2", "--dcs", "2", "--racks", "2", "--nodes", "4", "--sensors", "6",
                        "--interval", "900", "--days", "3", "--start", "1746057600", "--users", "4", "--jobs", "30",
                        "--metrics", "10", "--job-centric", "--out", fx});
    EXPECT_EQ(r.code, 0) << r.err;
    return fx;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"build", "--mode", "bogus", "--fixture", "x", "--out", "y.nt"}).code, 1);
  EXPECT_EQ(run({"gen-fixture", "--interval", "0", "--out", path("z")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MissingInputsExitTwo) {
  EXPECT_EQ(run({"stats", "--graph", path("nope.nt")}).code, 2);
  EXPECT_EQ(run({"build", "--fixture", path("nope"), "--out", path("g.nt")}).code, 2);
  EXPECT_FALSE(fs::exists(path("g.nt")));
}

TEST_F(CliTest, BuildStatsQuery) {
  const auto fx = fixture();
  auto r = run({"build", "--fixture", fx, "--timestamps", "unix", "--out", path("g.nt")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"stats", "--graph", path("g.nt")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("triples: "), std::string::npos);
  EXPECT_NE(r.out.find(std::to_string(fs::file_size(path("g.nt")) % 1000)), std::string::npos);

  r = run({"build", "--fixture", fx, "--out", path("g.ttl")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(run({"stats", "--graph", path("g.ttl")}).out, run({"stats", "--graph", path("g.nt")}).out);

  r = run({"query", "--graph", path("g.nt"), "--query", std::string(HPCODA_QUERY_DIR) + "/C6.3.rq", "--csv", "--out",
           path("c63.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(path("c63.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "hpcSystem,systemName,avgExecutionTimeSeconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  r = run({"query", "--graph", path("g.nt"), "--query", std::string(HPCODA_QUERY_DIR) + "/C1.3.rq", "--param", "rack_id=1", "--param", "system_id=1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rows)"), std::string::npos);
  EXPECT_EQ(run({"query", "--graph", path("g.nt"), "--query", std::string(HPCODA_QUERY_DIR) + "/C1.3.rq"}).code, 2);
}

TEST_F(CliTest, SuitePasses) {
  const auto fx = fixture();
  const auto r = run({"suite", "--fixture", fx, "--queries", HPCODA_QUERY_DIR, "--manifest",
                      std::string(HPCODA_QUERY_DIR) + "/manifest.txt"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("36/36 parsed, 36/36 match the oracle"), std::string::npos);
}

TEST_F(CliTest, CompareAndDryRun) {
  const auto fx = fixture();
  auto r = run({"compare", "--fixture", fx, "--baseline", "--csv", path("cmp.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Unified (blank nodes)"), std::string::npos);
  EXPECT_NE(r.out.find("33.33% fewer"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("cmp.csv")));

  r = run({"dry-run", "--nodes", "1", "--sensors", "104", "--interval", "20", "--days", "1", "--mode", "legacy"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("readings: 449,280"), std::string::npos);
  EXPECT_NE(r.out.find("reading triples: 2,695,680"), std::string::npos);

  r = run({"dry-run", "--readings", "4229280", "--mode", "unified"});
  EXPECT_NE(r.out.find("reading triples: 16,917,120"), std::string::npos);
  r = run({"dry-run", "--table5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("static residual 4"), std::string::npos);
}

TEST_F(CliTest, OntologyAndValidate) {
  auto r = run({"emit-ontology", "--format", "nt", "--out", path("o.nt")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"count-axioms", "--ontology", path("o.nt")});
  EXPECT_NE(r.out.find("axioms: 164"), std::string::npos);
  EXPECT_NE(r.out.find("logical axioms: 104"), std::string::npos);

  const auto fx = fixture();
  ASSERT_EQ(run({"build", "--mode", "legacy", "--fixture", fx, "--out", path("l.nt")}).code, 0);
  EXPECT_EQ(run({"validate", "--graph", path("l.nt"), "--schema", "legacy"}).code, 0);
  r = run({"validate", "--graph", path("l.nt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("UnknownProperty"), std::string::npos);
}
