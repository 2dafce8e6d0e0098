#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "llz/accumulator.hpp"
#include "llz/errors.hpp"
#include "llz/parallel.hpp"
#include "llz/rng.hpp"
#include "llz/runner.hpp"

using nlohmann::json;

namespace {

llz::ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return llz::ExperimentConfig::parse(in, "test.cfg");
}

const llz::Artifact* find(const llz::RunResult& r, const std::string& name) {
  for (const auto& a : r.artifacts)
    if (a.name == name) return &a;
  return nullptr;
}

}  // namespace

TEST(Config, ParsesKeyValues) {
  const auto c = parse("# header\nseed = 7\n\ndelta=0.5, 1.5  # trailing\nweighted=yes\n");
  EXPECT_EQ(c.get_int("seed", 1), 7);
  EXPECT_EQ(c.get_string("delta", ""), "0.5, 1.5");
  EXPECT_TRUE(c.get_bool("weighted", false));
  EXPECT_EQ(c.get_double("missing", 2.5), 2.5);
  EXPECT_EQ(c.resolved().at("missing"), "2.5");
  EXPECT_EQ(c.resolved().at("seed"), "7");
}

TEST(Config, ReportsBadLines) {
  try {
    parse("seed=1\nnot a pair\n");
    FAIL() << "expected ParseError";
  } catch (const llz::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:2"), std::string::npos);
  }
  EXPECT_THROW(parse("=3\n"), llz::ParseError);
  EXPECT_THROW(parse("seed=1.5\n").get_int("seed", 1), llz::ParseError);
  EXPECT_THROW(parse("check=maybe\n").get_bool("check", false), llz::ParseError);
  EXPECT_THROW(parse("x=abc\n").get_double("x", 1.0), llz::ParseError);
  EXPECT_THROW(llz::ExperimentConfig::parse_file("/nonexistent/run.cfg"), llz::ParseError);
}

TEST(Config, MergeOverrides) {
  auto base = parse("a=1\nb=2\n");
  base.merge(parse("b=3\nc=4\n"));
  EXPECT_EQ(base.get_string("a", ""), "1");
  EXPECT_EQ(base.get_string("b", ""), "3");
  EXPECT_EQ(base.get_string("c", ""), "4");
}

TEST(Runner, TablesManifest) {
  const auto r = llz::run("tables", parse("check=true\n"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.check_passed);
  ASSERT_FALSE(r.artifacts.empty());
  EXPECT_EQ(r.artifacts.back().name, "manifest.json");
  const auto m = json::parse(r.artifacts.back().content);
  EXPECT_EQ(m["subcommand"], "tables");
  EXPECT_EQ(m["seed"], 1);
  EXPECT_TRUE(m["config"].contains("known_results"));
  EXPECT_TRUE(m.contains("timestamp"));
  ASSERT_NE(find(r, "tables.csv"), nullptr);
  EXPECT_NE(find(r, "tables.csv")->content.find("SO(odd)"), std::string::npos);
}

TEST(Runner, RejectsUnknownSubcommandAndBadValues) {
  EXPECT_THROW(llz::run("frobnicate", {}), llz::InvalidParameter);
  EXPECT_THROW(llz::run("rmt", parse("samples=10\n")), llz::InvalidParameter);
  EXPECT_THROW(llz::run("rmt", parse("group=GL7\n")), llz::InvalidParameter);
  EXPECT_THROW(llz::run("rmt", parse("group=sp\ndim=5\nsamples=200\n")), llz::InvalidParameter);
}

TEST(Runner, RmtIsDeterministicAcrossWorkers) {
  const std::string cfg = "group=O\ndim=10\nsamples=600\ndelta=0.5,1.5\nseed=4\n";
  const auto a = llz::run("rmt", parse(cfg + "workers=1\n"));
  const auto b = llz::run("rmt", parse(cfg + "workers=4\n"));
  ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
  for (std::size_t i = 0; i + 1 < a.artifacts.size(); ++i) {
    EXPECT_EQ(a.artifacts[i].name, b.artifacts[i].name);
    EXPECT_EQ(a.artifacts[i].content, b.artifacts[i].content) << a.artifacts[i].name;
  }
  const auto c = llz::run("rmt", parse("group=O\ndim=10\nsamples=600\ndelta=0.5,1.5\nseed=5\n"));
  EXPECT_NE(a.artifacts[0].content, c.artifacts[0].content);
}

TEST(Runner, WritesArtifacts) {
  const auto dir = std::filesystem::temp_directory_path() / "llz_runner_test";
  std::filesystem::remove_all(dir);
  const auto r = llz::run("tables", {});
  llz::write_artifacts(r, dir.string());
  for (const auto& a : r.artifacts) {
    std::ifstream in(dir / a.name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), a.content);
  }
  std::filesystem::remove_all(dir);
}

TEST(Runner, FailedCheckSetsExitCode) {
  // A tiny conductor with a short prime table: the one-level mean misses the
  // prediction by far more than three standard errors.
  const auto r = llz::run("family-sim",
                          parse("model=sato-tate\nfamily_size=400\nconductor_scale=50\ndelta=2\ncheck=1\n"));
  EXPECT_FALSE(r.check_passed);
  EXPECT_EQ(r.exit_code, 1);
  const auto nocheck = llz::run("family-sim", parse("model=null\nfamily_size=10\n"));
  EXPECT_EQ(nocheck.exit_code, 0);
}

TEST(Rng, CounterStreams) {
  llz::CounterRng a(1, 2, 3), b(1, 2, 3), c(1, 2, 4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  EXPECT_NE(a(), c());
  llz::CounterRng u(9);
  double s = 0.0, s2 = 0.0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.5, 0.005);
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
  llz::CounterRng g(10);
  double m = 0.0, v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = g.normal();
    m += z;
    v += z * z;
  }
  EXPECT_NEAR(m / n, 0.0, 0.015);
  EXPECT_NEAR(v / n, 1.0, 0.02);
}

TEST(Accumulator, MergeMatchesSinglePass) {
  llz::MonteCarloAccumulator all(4), left(4), right(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i * 0.37) * 3 + 1;
    all.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), 1000u);
  EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(left.raw_moment(k), all.raw_moment(k), 1e-9);
  llz::MonteCarloAccumulator one;
  one.add(2.0);
  EXPECT_EQ(one.variance(), 0.0);
}

TEST(Parallel, ReduceIsScheduleIndependent) {
  auto run = [](unsigned w) {
    return llz::parallel_reduce(
        100'000, w, 0.0, [](double& acc, std::size_t i) { acc += 1.0 / (1.0 + i); },
        [](double& total, double part) { total += part; });
  };
  const double one = run(1);
  EXPECT_EQ(run(3), one);
  EXPECT_EQ(run(16), one);
  std::vector<int> hit(1000, 0);
  llz::parallel_for(1000, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(llz::parallel_for(1000, 4, [](std::size_t i) { if (i == 700) throw std::runtime_error("x"); }),
               std::runtime_error);
}
