#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "recurlab/runner.hpp"

using namespace recurlab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig cfg(const json& j) { return ExperimentConfig::from_json(j); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("recurlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  std::string cmd = std::string(RECURLAB_CLI) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST(Config, Validation) {
  EXPECT_THROW(run(cfg(json{{"kind", "jamison"}})), ConfigError);
  EXPECT_THROW(cfg(json{{"kind", "nope"}}), ConfigError);
  EXPECT_THROW(cfg(json{{"params", json::object()}}), ConfigError);
  EXPECT_THROW(cfg(json{{"kind", "rankone"}, {"schema", "other/2"}}), ConfigError);
  EXPECT_THROW(cfg(json{{"kind", "rankone"}, {"extra", 1}}), ConfigError);
  EXPECT_THROW(run(cfg(json{{"kind", "rankone"}, {"params", {{"typo", 1}}}})), ConfigError);
  EXPECT_THROW(run(cfg(json{{"kind", "kahane"}, {"params", {{"stages", "twelve"}}}})), ConfigError);
  auto c = cfg(json{{"kind", "bohr"}});
  EXPECT_EQ(c.bits, 128);
  EXPECT_EQ(c.seed, 1u);
}

TEST(Run, RankOneChacon) {
  auto r = run(cfg(json{{"kind", "rankone"}}));
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.report["checks"].size(), 4u);
  for (const auto& c : r.report["checks"]) EXPECT_EQ(c["overlap"]["total"], "0");
  EXPECT_EQ(r.report["config"]["params"]["schedule"], "chacon");
  EXPECT_EQ(r.certificate.set.size(), 4u);
  EXPECT_EQ(r.files.count("levels.csv"), 1u);
}

TEST(Run, JamisonNaturalsFindsNothing) {
  auto r = run(cfg(json{{"kind", "jamison"}, {"params", {{"seq", {{"family", "naturals"}, {"count", 20}}}}}}));
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.report["summary"], "no small-sup witness found");
}

TEST(Run, KahaneAndWitness) {
  auto k = run(cfg(json{{"kind", "kahane"}}));
  EXPECT_TRUE(k.passed);
  EXPECT_TRUE(k.report["tail_exact"].get<bool>());
  auto w = run(cfg(json{{"kind", "witness"},
                        {"params", {{"seq", {{"family", "triangular_pow2"}, {"count", 13}}}, {"theta", "1/3"}}}}));
  EXPECT_TRUE(w.passed);
}

TEST(Run, BohrCombines) {
  auto r = run(cfg(json{{"kind", "bohr"}}));
  EXPECT_TRUE(r.passed);
  ASSERT_FALSE(r.report["combined"].is_null());
  EXPECT_EQ(r.report["combined"]["union"].size(), r.report["set"]["merged"].size());
  EXPECT_EQ(r.report["families"].size(), 3u);
}

TEST(Run, ReproducibleFromReport) {
  for (const json& j : {json{{"kind", "rankone"}, {"params", {{"schedule", {{"n0", 3}, {"p", 4}, {"r", 2}}}, {"ks", {1}}, {"stages", 3}}}},
                        json{{"kind", "bohr"}, {"params", {{"N_max", 3}}}},
                        json{{"kind", "gauss"}, {"params", {{"blocks", 4}, {"samples", 4000}}}, {"seed", 9}}}) {
    auto first = run(cfg(j));
    auto again = run(cfg(first.report["config"]));
    EXPECT_EQ(first.report, again.report) << j.dump();
    EXPECT_EQ(first.files, again.files);
  }
}

TEST(Run, GaussCsvShape) {
  auto r = run(cfg(json{{"kind", "gauss"}, {"params", {{"blocks", 4}, {"samples", 4000}}}}));
  auto csv = r.files.at("gauss.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "block,a_exp,a_cuberoot,n,p_in,p_sym_diff,stderr,second_moment,bound");
  EXPECT_EQ(r.report["points"].size(), 2u);
}

TEST(Combine, Rules) {
  ComponentCertificate a{"rankone", "claim a", "A", {BigInt(1), BigInt(4)}, true, json::object()};
  ComponentCertificate b{"rankone", "claim b", "B", {BigInt(2), BigInt(3), BigInt(4)}, true, json::object()};
  auto single = combine({a});
  EXPECT_EQ(single.claim, "claim a");
  EXPECT_EQ(single.union_set, a.set);
  // Index sets from the two halves of a split cover every index once combined.
  auto both = combine({a, b}, "product system over all indices");
  EXPECT_EQ(both.union_set, (std::vector<BigInt>{1, 2, 3, 4}));
  EXPECT_TRUE(both.passed);
  b.passed = false;
  EXPECT_THROW(combine({a, b}), Error);
  EXPECT_THROW(combine({}), Error);
  auto rt = ComponentCertificate::from_json(a.to_json());
  EXPECT_EQ(rt.set, a.set);
  EXPECT_EQ(rt.claim, a.claim);
}

TEST(Cli, ExitCodesAndOutputs) {
  auto dir = scratch("cli");
  EXPECT_EQ(cli("rankone --out " + (dir / "r1").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "r1" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "r1" / "rankone.csv"));
  write(dir / "bad.json", json{{"kind", "jamison"}, {"params", json::object()}});
  EXPECT_EQ(cli("jamison --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(cli("linsys --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(cli("gen-seq --family chacon --count 5 --out " + (dir / "seq.json").string()), 0);
  EXPECT_EQ(cli("gen-seq --family nope"), 2);
  // Three levels are too few for the A{1} family at eps 1/16: exit 1, and combine refuses it.
  EXPECT_EQ(cli("bohr --horizon 3 --out " + (dir / "b3").string()), 1);
  EXPECT_EQ(cli("combine " + (dir / "r1" / "report.json").string() + " " + (dir / "b3" / "report.json").string()), 1);
  EXPECT_EQ(cli("combine " + (dir / "r1" / "report.json").string() + " --out " + (dir / "agg.json").string()), 0);
  write(dir / "batch.json", json{{"experiments", json::array({json{{"kind", "rankone"}}, json{{"kind", "bohr"}}})}});
  EXPECT_EQ(cli("report --config " + (dir / "batch.json").string() + " --out " + (dir / "batch").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "batch" / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "batch" / "1-bohr" / "witnesses.csv"));
  auto rep = read_json_file((dir / "b3" / "report.json").string());
  EXPECT_EQ(rep["config"]["params"]["N_max"], 3);
  EXPECT_FALSE(rep["passed"].get<bool>());
}
