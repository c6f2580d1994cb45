// recurlab: command-line front end for the experiment runner.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "recurlab/runner.hpp"
#include "recurlab/seqcore.hpp"

using namespace recurlab;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<int> bits;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<long> horizon;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "experiment config (JSON)");
  sub->add_option("--bits", f.bits, "working precision in bits");
  sub->add_option("--seed", f.seed, "RNG seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--horizon", f.horizon, "horizon K");
}

// --horizon means the natural depth of each experiment kind.
void apply_horizon(json& params, const std::string& kind, long K) {
  if (kind == "bohr") {
    params["N_max"] = K;
  } else if (kind == "gauss") {
    params["blocks"] = K;
  } else if (kind == "rankone") {
    json ks = json::array();
    for (long k = 1; k <= K; ++k) ks.push_back(k);
    params["ks"] = ks;
    params["stages"] = K + 2;
  } else {
    params["horizon"] = K;
  }
}

ExperimentConfig load_config(const std::string& kind, const CommonFlags& f) {
  json j = f.config.empty() ? json::object() : read_json_file(f.config);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!kind.empty()) {
    if (j.contains("kind") && j["kind"] != kind) {
      throw ConfigError("config kind " + j["kind"].dump() + " does not match subcommand '" + kind + "'");
    }
    j["kind"] = kind;
  }
  if (f.bits) j["bits"] = *f.bits;
  if (f.seed) j["seed"] = *f.seed;
  if (!f.out.empty()) j["out"] = f.out;
  if (f.horizon) {
    if (!j.contains("params")) j["params"] = json::object();
    if (!j.contains("kind")) throw ConfigError("config: missing string field 'kind'");
    apply_horizon(j["params"], j["kind"].get<std::string>(), *f.horizon);
  }
  return ExperimentConfig::from_json(j);
}

int run_one(const std::string& kind, const CommonFlags& f) {
  auto cfg = load_config(kind, f);
  auto res = run(cfg);
  if (!cfg.out.empty()) write_outputs(res, cfg.out);
  std::cout << cfg.kind << ": " << (res.passed ? "PASS" : "FAIL");
  if (!cfg.out.empty()) std::cout << " (" << cfg.out << "/report.json)";
  std::cout << '\n';
  if (cfg.out.empty()) std::cout << res.report.dump(2) << '\n';
  return res.passed ? 0 : 1;
}

int run_report(const CommonFlags& f) {
  if (f.config.empty()) throw ConfigError("report: --config is required");
  json j = read_json_file(f.config);
  std::vector<json> items;
  if (j.is_object() && j.contains("experiments")) {
    for (const auto& e : j["experiments"]) items.push_back(e);
  } else {
    items.push_back(j);
  }
  std::vector<ExperimentConfig> cfgs;
  for (auto& e : items) {
    if (f.bits) e["bits"] = *f.bits;
    if (f.seed) e["seed"] = *f.seed;
    if (f.horizon) {
      if (!e.contains("params")) e["params"] = json::object();
      if (e.contains("kind") && e["kind"].is_string()) apply_horizon(e["params"], e["kind"].get<std::string>(), *f.horizon);
    }
    cfgs.push_back(ExperimentConfig::from_json(e));
  }
  auto results = run_batch(cfgs);
  bool all = true;
  json summary = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    all = all && results[i].passed;
    std::string dir;
    if (!f.out.empty()) {
      dir = (std::filesystem::path(f.out) / (std::to_string(i) + "-" + cfgs[i].kind)).string();
      write_outputs(results[i], dir);
    }
    std::cout << i << ' ' << cfgs[i].kind << ": " << (results[i].passed ? "PASS" : "FAIL") << '\n';
    summary.push_back(json{{"index", i}, {"kind", cfgs[i].kind}, {"passed", results[i].passed}, {"dir", dir}});
  }
  if (!f.out.empty()) {
    std::ofstream(std::filesystem::path(f.out) / "summary.json") << json{{"schema", kSchema}, {"passed", all},
                                                                          {"experiments", summary}}
                                                                        .dump(2)
                                                                 << '\n';
  }
  return all ? 0 : 1;
}

int run_combine(const std::vector<std::string>& files, const std::string& claim, const std::string& out) {
  std::vector<ComponentCertificate> certs;
  for (const auto& path : files) {
    json j = read_json_file(path);
    certs.push_back(ComponentCertificate::from_json(j.contains("certificate") ? j["certificate"] : j));
  }
  AggregateCertificate agg;
  try {
    agg = combine(certs, claim);
  } catch (const Error& e) {
    std::cerr << "combine: " << e.what() << '\n';
    return 1;
  }
  std::string text = agg.to_json().dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
    std::cout << "combine: PASS (" << out << ")\n";
  }
  return 0;
}

int run_gen_seq(const std::string& config, const std::string& family, std::size_t count, const std::string& base,
                const std::string& out) {
  json spec = config.empty() ? json{{"family", family}, {"count", count}, {"base", base}} : read_json_file(config);
  IntegerSequence seq;
  try {
    seq = make_sequence(spec);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  std::string text = seq.to_json().dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recurlab: certified experiments on recurrence, rigidity and non-recurrence"};
  app.require_subcommand(1);

  std::string seq_config, family = "triangular_pow2", base = "2", seq_out;
  std::size_t count = 13;
  auto* gen = app.add_subcommand("gen-seq", "materialize an integer sequence as JSON");
  gen->add_option("--config", seq_config, "sequence spec (JSON)");
  gen->add_option("--family", family, "triangular_pow2 | powers | naturals | chacon");
  gen->add_option("--count", count, "number of terms");
  gen->add_option("--base", base, "base for powers");
  gen->add_option("--out", seq_out, "output file");

  std::map<std::string, CommonFlags> flags;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help{
      {"jamison", "search for lambda != 1 with small sup along the sequence"},
      {"witness", "certify a rotation lambda0 bounded away from 1 along the sequence"},
      {"kahane", "build the Kahane product measure and check its Fourier bounds"},
      {"rankone", "cutting-and-stacking towers and exact non-recurrence overlaps"},
      {"linsys", "diagonal-plus-shift operator: chain, power norms, ball and Kalish checks"},
      {"bohr", "block sets from the H-chain with per-family witnesses"},
      {"gauss", "Monte-Carlo rectangle overlaps over the split blocks"}};
  for (const auto& kind : experiment_kinds()) {
    subs[kind] = app.add_subcommand(kind, help.at(kind));
    add_common(subs[kind], flags[kind]);
  }

  std::vector<std::string> cert_files;
  std::string claim, combine_out;
  auto* comb = app.add_subcommand("combine", "union certificate from component reports or certificates");
  comb->add_option("files", cert_files, "report.json or certificate.json files")->required();
  comb->add_option("--claim", claim, "claim text for the union");
  comb->add_option("--out", combine_out, "output file");

  CommonFlags report_flags;
  auto* rep = app.add_subcommand("report", "run one config or a batch {\"experiments\": [...]}");
  add_common(rep, report_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen_seq(seq_config, family, count, base, seq_out);
    if (*comb) return run_combine(cert_files, claim, combine_out);
    if (*rep) return run_report(report_flags);
    for (const auto& kind : experiment_kinds()) {
      if (*subs[kind]) return run_one(kind, flags[kind]);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
