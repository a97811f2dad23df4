// tmlab command-line front end.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tmlab/experiment.h"
#include "tmlab/json_io.h"
#include "tmlab/levin.h"
#include "tmlab/speedup.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tmlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

// A .tm file holds one line of 0/1; anything ending in .json is the mirror.
Instance load_instance(const std::string& path) {
  if (fs::path(path).extension() == ".json") return instance_from_json(json::parse(slurp(path)));
  return decode_instance(trim(slurp(path)));
}

Machine load_machine(const std::string& path) {
  if (fs::path(path).extension() == ".json") return machine_from_json(json::parse(slurp(path)));
  return decode_machine(trim(slurp(path)));
}

void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << content;
}

Acceptor named_acceptor(const std::string& name) {
  // ref-cobhp | ref-codbhp | hw:<pair> | hwd:<pair> | no-accept | orbit
  if (name == "ref-cobhp") return reference_cobhp_acceptor();
  if (name == "ref-codbhp") return reference_codbhp_acceptor();
  if (name == "no-accept") return no_accept_shortcut(reference_cobhp_acceptor());
  if (name == "orbit") return closed_orbit_shortcut(reference_cobhp_acceptor());
  const auto pool = curated_cohp_pool();
  if (name.rfind("hw:", 0) == 0)
    return hardwire_transform(reference_cobhp_acceptor(), pool_pair(pool, name.substr(3)));
  if (name.rfind("hwd:", 0) == 0)
    return hardwire_transform(reference_codbhp_acceptor(), pool_pair(pool, name.substr(4)));
  throw std::invalid_argument("unknown acceptor " + name);
}

json report_json(const RunReport& r) {
  json j = {{"outcome", to_string(r.outcome)},
            {"steps", r.steps},
            {"internalOps", r.internal_ops},
            {"inputLength", r.input_length}};
  j["maxPosRead"] = r.max_pos_read ? json(*r.max_pos_read) : json(nullptr);
  return j;
}

struct ExperimentFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::uint64_t t_max = 0;
  std::string out;
  std::uint64_t budget = 0;
  std::string pair;
  std::string language;
  std::string acceptor;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "corpus seed");
  cmd->add_option("--t-max", f.t_max, "largest pad length");
  cmd->add_option("--out", f.out, "existing output directory")->required();
  cmd->add_option("--budget", f.budget, "step budget per run");
  cmd->add_option("--pair", f.pair, "pool pair name");
  cmd->add_option("--language", f.language, "cobhp or codbhp");
  cmd->add_option("--acceptor", f.acceptor, "ref, hw, no-accept or orbit");
}

int run_kind(ExperimentKind kind, const ExperimentFlags& f, CLI::App* cmd) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  try {
    if (!f.config.empty()) apply_json(cfg, json::parse(slurp(f.config)));
    cfg.kind = kind;
    // Flags win over the config file.
    if (cmd->count("--seed")) cfg.seed = f.seed;
    if (cmd->count("--t-max")) cfg.t_max = f.t_max;
    if (cmd->count("--budget")) cfg.step_budget = cfg.levin_budget = f.budget;
    if (cmd->count("--pair")) cfg.pair = f.pair;
    if (cmd->count("--language")) cfg.language = f.language;
    if (cmd->count("--acceptor")) cfg.acceptor = f.acceptor;
    cfg.out_dir = f.out;
    const ExperimentResult r = run_experiment(cfg);
    for (const auto& p : r.files) std::cout << p.string() << "\n";
    if (!r.passed) {
      std::cerr << "FAILED: " << r.failure << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigInvalid& e) {
    std::cerr << json{{"error", "ConfigInvalid"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-halting speedup laboratory"};
  app.require_subcommand(1);

  // encode
  std::string machine_path, input_bits, out_path;
  std::uint64_t bound = 0;
  auto* encode = app.add_subcommand("encode", "machine JSON (+ input, bound) to .tm bits");
  encode->add_option("machine", machine_path, "machine .json or .tm")->required();
  encode->add_option("--input", input_bits, "input bit string");
  encode->add_option("--t", bound, "bound; emits an instance when given");
  encode->add_option("-o,--output", out_path, "output file");
  encode->callback([&] {
    const Machine m = load_machine(machine_path);
    const Bits bits = encode->count("--t") || encode->count("--input")
                          ? encode_instance(m, input_bits, bound)
                          : encode_machine(m);
    emit(bits + "\n", out_path);
  });

  // decode
  std::string tm_path;
  bool machine_only = false;
  auto* decode = app.add_subcommand("decode", ".tm bits to JSON");
  decode->add_option("file", tm_path, ".tm file")->required();
  decode->add_flag("--machine", machine_only, "file holds a machine, not an instance");
  decode->add_option("-o,--output", out_path, "output file");
  decode->callback([&] {
    const std::string bits = trim(slurp(tm_path));
    const json j = machine_only ? machine_to_json(decode_machine(bits))
                                : instance_to_json(decode_instance(bits));
    emit(j.dump(2) + "\n", out_path);
  });

  // decide-bhp
  std::string instance_path;
  std::uint64_t budget = kReferenceSearchBudget;
  auto* decide = app.add_subcommand("decide-bhp", "bounded acceptance by breadth-first search");
  decide->add_option("--instance", instance_path, "instance file")->required();
  decide->add_option("--budget", budget, "configuration budget");
  decide->callback([&] {
    const Instance inst = load_instance(instance_path);
    const BhpAnswer a = decide_bhp(inst, budget);
    std::cout << json{{"answer", a.accepted ? "Yes" : "No"},
                      {"path", path_to_json(a.path)},
                      {"configurations", a.configurations}}
                     .dump()
              << "\n";
  });

  // run-acceptor
  std::string acceptor_name = "ref-cobhp";
  std::uint64_t step_budget = kDefaultStepBudget;
  auto* run = app.add_subcommand("run-acceptor", "measure one acceptor run");
  run->add_option("--acceptor", acceptor_name, "ref-cobhp, ref-codbhp, hw:<pair>, hwd:<pair>, no-accept, orbit");
  run->add_option("--instance", instance_path, "instance file")->required();
  run->add_option("--budget", step_budget, "step budget");
  run->callback([&] {
    const Acceptor a = named_acceptor(acceptor_name);
    const Instance inst = load_instance(instance_path);
    std::cout << report_json(run_measured(a, inst.encoded(), step_budget)).dump() << "\n";
  });

  // transform
  std::string pair_name = "loop/eps";
  std::string language = "cobhp";
  auto* transform = app.add_subcommand("transform", "hardwire a pool pair into a reference acceptor");
  transform->add_option("--pair", pair_name, "pool pair");
  transform->add_option("--language", language, "cobhp or codbhp");
  transform->add_option("--instance", instance_path, "optional instance to run both on");
  transform->callback([&] {
    const auto pool = curated_cohp_pool();
    const HaltingPair& pair = pool_pair(pool, pair_name);
    const Acceptor base = language == "codbhp" ? reference_codbhp_acceptor() : reference_cobhp_acceptor();
    const Acceptor hw = hardwire_transform(base, pair);
    json j = {{"base", base.name},
              {"transformed", hw.name},
              {"prefix", encode_machine(pair.machine) + encode_input(pair.input)},
              {"prefixLength", hardwired_prefix_length(pair)}};
    if (!instance_path.empty()) {
      const Instance inst = load_instance(instance_path);
      j["baseRun"] = report_json(run_measured(base, inst.encoded(), kDefaultStepBudget));
      j["transformedRun"] = report_json(run_measured(hw, inst.encoded(), kDefaultStepBudget));
    }
    std::cout << j.dump(2) << "\n";
  });

  // find-hard-pair
  std::uint64_t t_max = 64;
  std::string pool_path;
  auto* hard = app.add_subcommand("find-hard-pair", "first pool pair the acceptor never caps on");
  hard->add_option("--acceptor", acceptor_name, "acceptor name");
  hard->add_option("--t-max", t_max, "largest pad length");
  hard->add_option("--pool", pool_path, "pool JSON (default: curated pool)");
  hard->callback([&] {
    const auto pool = pool_path.empty() ? curated_cohp_pool() : pool_from_json(json::parse(slurp(pool_path)));
    const auto found = find_hard_pair(named_acceptor(acceptor_name), pool, t_max);
    std::cout << (found ? json{{"result", "HardPair"}, {"pair", found->name}}
                        : json{{"result", "NoneFound"}})
                     .dump()
              << "\n";
  });

  // levin-search
  std::uint64_t levin_budget = 1u << 20;
  auto* levin = app.add_subcommand("levin-search", "universal witness search by dovetailing");
  levin->add_option("--instance", instance_path, "instance file")->required();
  levin->add_option("--budget", levin_budget, "total step budget");
  levin->callback([&] {
    const LevinResult r = levin_search_witness(load_instance(instance_path), levin_budget);
    json j = {{"found", r.found}, {"stepsUsed", r.steps_used}};
    j["path"] = r.found ? path_to_json(r.path) : json(nullptr);
    j["programIndex"] = r.found ? json(r.program_index) : json(nullptr);
    j["phase"] = r.found ? json(r.phase) : json(nullptr);
    std::cout << j.dump() << "\n";
  });

  // schnorr-search
  auto* schnorr = app.add_subcommand("schnorr-search", "witness from a decision oracle");
  schnorr->add_option("--instance", instance_path, "instance file")->required();
  schnorr->callback([&] {
    const auto r = schnorr_search_from_decision(
        load_instance(instance_path),
        [](const Instance& q) { return decide_bhp(q, kReferenceSearchBudget).accepted; });
    json j = {{"found", r.found}, {"oracleCalls", r.oracle_calls}};
    j["path"] = r.found ? path_to_json(r.path) : json(nullptr);
    std::cout << j.dump() << "\n";
  });

  // speedup-cert
  std::string cert_path, csv_path;
  auto* cert = app.add_subcommand("speedup-cert", "re-validate a certificate against raw CSV");
  cert->add_option("--cert", cert_path, "b-speedup JSON (report or bare certificate)")->required();
  cert->add_option("--csv", csv_path, "measurement CSV")->required();
  int cert_status = 0;
  cert->callback([&] {
    json j = json::parse(slurp(cert_path));
    if (j.contains("certificate")) j = j["certificate"];
    const auto problems = verify_certificate(certificate_from_json(j), slurp(csv_path));
    std::cout << json{{"valid", problems.empty()}, {"problems", problems}}.dump() << "\n";
    cert_status = problems.empty() ? 0 : 1;
  });

  // pool
  auto* pool = app.add_subcommand("pool", "write the curated coHP pool as JSON");
  pool->add_option("-o,--output", out_path, "output file");
  pool->callback([&] { emit(pool_to_json(curated_cohp_pool()).dump(2) + "\n", out_path); });

  // experiment verbs
  struct Verb {
    const char* name;
    ExperimentKind kind;
    const char* help;
  };
  const Verb verbs[] = {
      {"b-speedup", ExperimentKind::BSpeedup, "certify b-speedup of the hardwired acceptor"},
      {"cap-detect", ExperimentKind::CapDetect, "look for a runtime cap on a pool pair"},
      {"star-probe", ExperimentKind::StarProbe, "tabulate f(t) against polynomial envelopes"},
      {"dominance", ExperimentKind::Dominance, "fit a polynomial envelope between two acceptors"},
      {"levin", ExperimentKind::Levin, "Levin and Schnorr search over the exhaustive core"},
      {"compose-check", ExperimentKind::ComposeCheck, "check reductions and composition"},
  };
  std::vector<ExperimentFlags> flags(std::size(verbs));
  std::vector<CLI::App*> cmds;
  int experiment_status = 0;
  for (std::size_t i = 0; i < std::size(verbs); ++i) {
    auto* cmd = app.add_subcommand(verbs[i].name, verbs[i].help);
    add_experiment_flags(cmd, flags[i]);
    cmd->callback([&, i, cmd] { experiment_status = run_kind(verbs[i].kind, flags[i], cmd); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return experiment_status != 0 ? experiment_status : cert_status;
}
