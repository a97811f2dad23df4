#include "tmlab/experiment.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tmlab/errors.h"
#include "tmlab/json_io.h"
#include "tmlab/levin.h"

namespace tmlab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::BSpeedup, "b-speedup"},   {ExperimentKind::CapDetect, "cap-detect"},
    {ExperimentKind::StarProbe, "star-probe"}, {ExperimentKind::Levin, "levin"},
    {ExperimentKind::Dominance, "dominance"},  {ExperimentKind::ComposeCheck, "compose-check"},
};

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKindNames)
    if (s == name) return kind;
  throw ConfigInvalid("kind: unknown experiment '" + s + "'");
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.t_min > cfg.t_max) bad.push_back("tMin: must not exceed tMax");
  if (cfg.corpus_size == 0) bad.push_back("corpusSize: must be at least 1");
  if (cfg.max_states == 0) bad.push_back("maxStates: must be at least 1");
  if (cfg.core.max_states == 0) bad.push_back("core.maxStates: must be at least 1");
  if (cfg.step_budget == 0) bad.push_back("stepBudget: must be positive");
  if (cfg.levin_budget == 0) bad.push_back("levinBudget: must be positive");
  if (cfg.label_budget == 0) bad.push_back("labelBudget: must be positive");
  if (cfg.language != "cobhp" && cfg.language != "codbhp")
    bad.push_back("language: expected cobhp or codbhp");
  if (cfg.acceptor != "ref" && cfg.acceptor != "hw" && cfg.acceptor != "no-accept" &&
      cfg.acceptor != "orbit")
    bad.push_back("acceptor: expected ref, hw, no-accept or orbit");
  const auto pool = curated_cohp_pool();
  if (std::none_of(pool.begin(), pool.end(), [&](const HaltingPair& p) { return p.name == cfg.pair; }))
    bad.push_back("pair: not in the curated pool");
  if (cfg.out_dir.empty() || !fs::is_directory(cfg.out_dir))
    bad.push_back("out: output directory does not exist");
  if (!bad.empty()) {
    std::string msg = "invalid experiment config";
    for (const auto& b : bad) msg += "; " + b;
    throw ConfigInvalid(msg);
  }
}

void apply_json(ExperimentConfig& cfg, const json& j) {
  try {
    if (j.contains("kind")) cfg.kind = experiment_kind_from_string(j["kind"].get<std::string>());
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tMin")) cfg.t_min = j["tMin"].get<std::uint64_t>();
    if (j.contains("tMax")) cfg.t_max = j["tMax"].get<std::uint64_t>();
    if (j.contains("corpusSize")) cfg.corpus_size = j["corpusSize"].get<std::size_t>();
    if (j.contains("maxStates")) cfg.max_states = j["maxStates"].get<std::uint32_t>();
    if (j.contains("maxInput")) cfg.max_input = j["maxInput"].get<std::uint32_t>();
    if (j.contains("corpusTMax")) cfg.corpus_t_max = j["corpusTMax"].get<std::uint64_t>();
    if (j.contains("core")) {
      const auto& c = j["core"];
      if (c.contains("maxStates")) cfg.core.max_states = c["maxStates"].get<std::uint32_t>();
      if (c.contains("maxEntries")) cfg.core.max_entries = c["maxEntries"].get<std::uint32_t>();
      if (c.contains("maxInput")) cfg.core.max_input = c["maxInput"].get<std::uint32_t>();
      if (c.contains("tMax")) cfg.core.t_max = c["tMax"].get<std::uint64_t>();
    }
    if (j.contains("stepBudget")) cfg.step_budget = j["stepBudget"].get<std::uint64_t>();
    if (j.contains("levinBudget")) cfg.levin_budget = j["levinBudget"].get<std::uint64_t>();
    if (j.contains("labelBudget")) cfg.label_budget = j["labelBudget"].get<std::uint64_t>();
    if (j.contains("language")) cfg.language = j["language"].get<std::string>();
    if (j.contains("pair")) cfg.pair = j["pair"].get<std::string>();
    if (j.contains("acceptor")) cfg.acceptor = j["acceptor"].get<std::string>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"kind", to_string(cfg.kind)},
          {"seed", cfg.seed},
          {"tMin", cfg.t_min},
          {"tMax", cfg.t_max},
          {"corpusSize", cfg.corpus_size},
          {"maxStates", cfg.max_states},
          {"maxInput", cfg.max_input},
          {"corpusTMax", cfg.corpus_t_max},
          {"core",
           {{"maxStates", cfg.core.max_states},
            {"maxEntries", cfg.core.max_entries},
            {"maxInput", cfg.core.max_input},
            {"tMax", cfg.core.t_max}}},
          {"stepBudget", cfg.step_budget},
          {"levinBudget", cfg.levin_budget},
          {"labelBudget", cfg.label_budget},
          {"language", cfg.language},
          {"pair", cfg.pair},
          {"acceptor", cfg.acceptor}};
}

namespace {

std::vector<LabeledInstance> labeled(std::vector<Instance> instances, std::uint64_t budget) {
  std::vector<LabeledInstance> out;
  out.reserve(instances.size());
  for (auto& inst : instances) {
    if (!(decode_instance(inst.encoded()) == inst))
      throw MalformedEncoding("corpus instance does not round-trip");
    const Membership m = label_bhp(inst, budget);
    out.push_back({std::move(inst), m});
  }
  return out;
}

RandomLimits random_limits(const ExperimentConfig& cfg) {
  return {cfg.max_states, cfg.max_input, cfg.corpus_t_max, cfg.language == "codbhp"};
}

}  // namespace

GeneratedCorpus generate_corpus(const ExperimentConfig& cfg) {
  if (cfg.corpus_size == 0) throw ConfigInvalid("corpusSize: must be at least 1");
  if (cfg.max_states == 0 || cfg.core.max_states == 0)
    throw ConfigInvalid("maxStates: must be at least 1");
  GeneratedCorpus out;
  out.core = labeled(exhaustive_corpus(cfg.core), cfg.label_budget);
  out.random = labeled(random_corpus(cfg.seed, cfg.corpus_size, random_limits(cfg)), cfg.label_budget);
  return out;
}

const HaltingPair& pool_pair(const std::vector<HaltingPair>& pool, const std::string& name) {
  for (const auto& p : pool)
    if (p.name == name) return p;
  throw ConfigInvalid("pair: '" + name + "' is not in the pool");
}

namespace {

struct Artifacts {
  std::string csv;
  json report;
  std::string markdown;
  std::string failure;
};

std::string measurements_csv(const std::vector<Measurement>& ms) {
  std::string out = csv_header() + "\n";
  for (const auto& m : ms) out += csv_row(m.acceptor, m.input_id, m.report) + "\n";
  return out;
}

Acceptor base_acceptor(const ExperimentConfig& cfg) {
  return cfg.language == "codbhp" ? reference_codbhp_acceptor() : reference_cobhp_acceptor();
}

Acceptor subject_acceptor(const ExperimentConfig& cfg, const HaltingPair& pair) {
  const Acceptor base = base_acceptor(cfg);
  if (cfg.acceptor == "hw") return hardwire_transform(base, pair);
  if (cfg.acceptor == "no-accept") return no_accept_shortcut(base);
  if (cfg.acceptor == "orbit") return closed_orbit_shortcut(base);
  return base;
}

// Seeded instances outside S = {<pair, 1^t>}.
std::vector<Instance> off_s_corpus(const ExperimentConfig& cfg, const HaltingPair& pair) {
  std::vector<Instance> out;
  std::size_t want = cfg.corpus_size;
  for (std::uint64_t round = 0; out.size() < cfg.corpus_size; ++round) {
    out.clear();
    for (auto& inst : random_corpus(cfg.seed + round * 0x9e3779b97f4a7c15ull, want, random_limits(cfg))) {
      if (inst.machine() == pair.machine && inst.input() == pair.input) continue;
      if (out.size() < cfg.corpus_size) out.push_back(std::move(inst));
    }
    want += cfg.corpus_size;
  }
  return out;
}

Artifacts run_b_speedup(const ExperimentConfig& cfg) {
  const auto pool = curated_cohp_pool();
  const HaltingPair& pair = pool_pair(pool, cfg.pair);
  const Acceptor base = base_acceptor(cfg);
  const Acceptor hw = hardwire_transform(base, pair);
  const auto off = off_s_corpus(cfg, pair);
  const auto check = check_b_speedup(base, hw, pair, cfg.t_min, cfg.t_max, off, cfg.step_budget);

  Artifacts a;
  a.csv = measurements_csv(check.measurements);
  a.report = {{"experiment", "b-speedup"},
              {"config", config_to_json(cfg)},
              {"prefixLength", hardwired_prefix_length(pair)}};
  std::ostringstream md;
  md << "# b-speedup: " << base.name << " vs " << hw.name << "\n\n";
  if (!check.certificate) {
    a.failure = "b-speedup: " + check.violation;
    a.report["violation"] = check.violation;
    md << "Violation: " << check.violation << "\n";
    a.markdown = md.str();
    return a;
  }
  const auto& cert = *check.certificate;
  a.report["certificate"] = certificate_to_json(cert);
  const auto problems = verify_certificate(cert, a.csv);
  a.report["revalidation"] = problems;
  if (!problems.empty()) a.failure = "certificate re-validation: " + problems.front();

  md << "Pair `" << pair.name << "`, prefix length p = " << hardwired_prefix_length(pair)
     << ", constant C = " << cert.constant_c << ", additive c_S = " << cert.additive_cs << ".\n\n";
  md << "## Steps on S\n\n| t | base | transformed |\n|---:|---:|---:|\n";
  for (const auto& r : cert.on_s)
    md << "| " << r.t << " | " << r.steps_base << " | " << r.steps_transformed << " |\n";
  std::vector<std::int64_t> overhead;
  for (const auto& r : cert.off_s)
    overhead.push_back(static_cast<std::int64_t>(r.steps_transformed) -
                       static_cast<std::int64_t>(r.steps_base));
  std::sort(overhead.begin(), overhead.end());
  md << "\n## Overhead off S (transformed - base)\n\n";
  md << "| instances | min | median | max |\n|---:|---:|---:|---:|\n";
  md << "| " << overhead.size() << " | " << overhead.front() << " | "
     << overhead[overhead.size() / 2] << " | " << overhead.back() << " |\n";
  a.markdown = md.str();
  return a;
}

json cap_to_json(const CapResult& r) {
  json confirmations = json::array();
  for (const auto& c : r.confirmations)
    confirmations.push_back({{"t", c.t}, {"agrees", c.agrees}, {"reproduced", c.reproduced}});
  if (!r.capped) return {{"result", "NoCapUpTo"}, {"tMax", r.t_max}};
  return {{"result", "Cap"},
          {"t0", r.t0},
          {"steps0", r.steps0},
          {"tMax", r.t_max},
          {"confirmations", confirmations}};
}

Artifacts run_cap_detect(const ExperimentConfig& cfg) {
  const auto pool = curated_cohp_pool();
  const HaltingPair& pair = pool_pair(pool, cfg.pair);
  const Acceptor subject = subject_acceptor(cfg, pair);
  const CapResult r =
      detect_runtime_cap(subject, pair.machine, pair.input, std::max<std::uint64_t>(cfg.t_max, 1),
                         cfg.step_budget);
  Artifacts a;
  std::vector<Measurement> ms;
  for (const auto& [t, report] : r.runs) ms.push_back({subject.name, on_s_id(t), report});
  a.csv = measurements_csv(ms);
  a.report = {{"experiment", "cap-detect"},
              {"config", config_to_json(cfg)},
              {"acceptor", subject.name},
              {"cap", cap_to_json(r)}};
  for (const auto& c : r.confirmations)
    if (!c.agrees || !c.reproduced)
      a.failure = "cap propagation: replay at t=" + std::to_string(c.t) + " deviates";
  std::ostringstream md;
  md << "# cap-detect: " << subject.name << " on `" << pair.name << "`\n\n";
  if (r.capped) {
    md << "Cap(t0 = " << r.t0 << ", steps = " << r.steps0 << ")\n\n| replay t | agrees | reproduced |\n|---:|:---:|:---:|\n";
    for (const auto& c : r.confirmations)
      md << "| " << c.t << " | " << (c.agrees ? "yes" : "no") << " | "
         << (c.reproduced ? "yes" : "no") << " |\n";
  } else {
    md << "NoCapUpTo(" << r.t_max << ")\n";
  }
  a.markdown = md.str();
  return a;
}

Artifacts run_star_probe(const ExperimentConfig& cfg) {
  const auto pool = curated_cohp_pool();
  const HaltingPair& pair = pool_pair(pool, cfg.pair);
  const Acceptor subject = subject_acceptor(cfg, pair);
  std::vector<std::uint64_t> ts;
  for (std::uint64_t t = cfg.t_min; t <= cfg.t_max; ++t) ts.push_back(t);
  const auto probe = star_condition_probe(subject, pair, ts, {0, 1, 2, 3}, cfg.step_budget);

  Artifacts a;
  a.csv = measurements_csv(probe.measurements);
  json fits = json::array();
  for (const auto& f : probe.fits) {
    json row = {{"degree", f.degree}, {"c", f.c}, {"earlyC", f.early_c}};
    row["firstEscape"] = f.first_escape ? json(*f.first_escape) : json(nullptr);
    fits.push_back(row);
  }
  a.report = {{"experiment", "star-probe"},
              {"config", config_to_json(cfg)},
              {"acceptor", subject.name},
              {"samples", probe.samples.size()},
              {"excluded", probe.excluded},
              {"fits", fits}};
  std::ostringstream md;
  md << "# star-probe: f(t) for " << subject.name << " on `" << pair.name << "`\n\n"
     << "Descriptive only: envelopes fitted over the measured range.\n\n"
     << "| degree | c (whole range) | c (first half) | first escape |\n|---:|---:|---:|---:|\n";
  for (const auto& f : probe.fits)
    md << "| " << f.degree << " | " << f.c << " | " << f.early_c << " | "
       << (f.first_escape ? std::to_string(*f.first_escape) : "-") << " |\n";
  md << "\n| t | f(t) |\n|---:|---:|\n";
  for (const auto& [t, f] : probe.samples) md << "| " << t << " | " << f << " |\n";
  a.markdown = md.str();
  return a;
}

Artifacts run_dominance(const ExperimentConfig& cfg) {
  const auto pool = curated_cohp_pool();
  const HaltingPair& pair = pool_pair(pool, cfg.pair);
  const Acceptor base = base_acceptor(cfg);
  const Acceptor subject = cfg.acceptor == "ref" ? hardwire_transform(base, pair)
                                                  : subject_acceptor(cfg, pair);
  std::vector<Bits> corpus;
  for (std::uint64_t t = std::max<std::uint64_t>(cfg.t_min, 1); t <= cfg.t_max; ++t)
    corpus.push_back(encode_instance(pair.machine, pair.input, t));
  Artifacts a;
  a.report = {{"experiment", "dominance"}, {"config", config_to_json(cfg)}};
  std::ostringstream md;
  md << "# dominance: " << base.name << " vs " << subject.name << " on S-instances of `"
     << pair.name << "`\n\nEmpirical envelope over this corpus only.\n\n";
  try {
    const auto r = check_p_dominance(base, subject, corpus, 3, kDominanceConstantCap, cfg.step_budget);
    a.csv = measurements_csv(r.measurements);
    a.report["result"] = r.dominates ? "Dominates" : "NotWithinDegree";
    a.report["c"] = r.c;
    a.report["degree"] = r.dominates ? r.degree : r.max_degree;
    a.report["excluded"] = r.excluded;
    if (r.dominates)
      md << "Dominates(c = " << r.c << ", d = " << r.degree << ")\n";
    else
      md << "NotWithinDegree(" << r.max_degree << ")\n";
  } catch (const CorpusOutsideL& e) {
    a.csv = csv_header() + "\n";
    a.failure = std::string("dominance: ") + e.what();
    a.report["violation"] = e.what();
    md << "CorpusOutsideL: " << e.what() << "\n";
  }
  a.markdown = md.str();
  return a;
}

Artifacts run_levin(const ExperimentConfig& cfg) {
  const GeneratedCorpus corpus = generate_corpus(cfg);
  ProgramEnumerator programs;
  const BhpOracle oracle = [](const Instance& q) { return decide_bhp(q, 1u << 20).accepted; };

  std::ostringstream csv;
  csv << "instanceId,label,levinFound,programIndex,phase,stepsUsed,schnorrFound,oracleCalls\n";
  std::size_t yes = 0, no = 0, found = 0, schnorr_ok = 0, accounting_ok = 0, ran = 0;
  std::string failure;
  for (std::size_t i = 0; i < corpus.core.size(); ++i) {
    const auto& [inst, label] = corpus.core[i];
    if (label == Membership::Unknown) continue;
    ++ran;
    LevinResult lr;
    if (label == Membership::Yes) {
      ++yes;
      lr = levin_search_doubling(inst, 16, cfg.levin_budget, programs);
    } else {
      ++no;
      lr = levin_search_witness(inst, std::min<std::uint64_t>(cfg.levin_budget, 1u << 8), programs);
    }
    bool accounting = true;
    if (lr.last_complete_phase)
      for (std::size_t p = 0; p < lr.allotted.size(); ++p)
        accounting &= lr.allotted[p] == DovetailSchedule::cumulative(*lr.last_complete_phase, p);
    accounting_ok += accounting;

    const SchnorrResult sr = schnorr_search_from_decision(inst, oracle);
    const std::uint64_t width = std::max<std::uint64_t>(inst.machine().max_branching(), 1);
    const bool schnorr_good = label == Membership::Yes
                                  ? sr.found && verify_path(inst, sr.path) &&
                                        sr.oracle_calls <= inst.bound() * width + 1
                                  : !sr.found;
    schnorr_ok += schnorr_good;
    if (lr.found) ++found;

    const std::string id = "core/" + std::to_string(i);
    if (failure.empty()) {
      if (lr.found && !verify_path(inst, lr.path)) failure = "levin: unverified witness on " + id;
      else if (label == Membership::No && lr.found) failure = "levin: witness on No instance " + id;
      else if (label == Membership::Yes && !lr.found) failure = "levin: no witness within budget on " + id;
      else if (!accounting) failure = "levin: schedule accounting mismatch on " + id;
      else if (!schnorr_good) failure = "schnorr: bad result on " + id;
    }
    csv << id << ',' << to_string(label) << ',' << lr.found << ',' << lr.program_index << ','
        << lr.phase << ',' << lr.steps_used << ',' << sr.found << ',' << sr.oracle_calls << "\n";
  }
  Artifacts a;
  a.csv = csv.str();
  a.failure = failure;
  a.report = {{"experiment", "levin"},
              {"config", config_to_json(cfg)},
              {"instances", ran},
              {"yes", yes},
              {"no", no},
              {"levinFound", found},
              {"schnorrCorrect", schnorr_ok},
              {"accountingCorrect", accounting_ok}};
  std::ostringstream md;
  md << "# levin / schnorr over the exhaustive core\n\n| instances | Yes | No | Levin found | Schnorr correct | schedule exact |\n|---:|---:|---:|---:|---:|---:|\n"
     << "| " << ran << " | " << yes << " | " << no << " | " << found << " | " << schnorr_ok << " | "
     << accounting_ok << " |\n";
  a.markdown = md.str();
  return a;
}

Artifacts run_compose_check(const ExperimentConfig& cfg) {
  const GeneratedCorpus corpus = generate_corpus(cfg);
  const Acceptor cobhp = reference_cobhp_acceptor();
  const Acceptor codbhp = reference_codbhp_acceptor();
  const Acceptor composed = compose_with_reduction(cobhp, reduction_dbhp_to_bhp());

  std::vector<Measurement> ms;
  std::size_t deterministic = 0, agree = 0;
  for (std::size_t i = 0; i < corpus.core.size(); ++i) {
    const Instance& inst = corpus.core[i].instance;
    if (!inst.machine().is_deterministic()) continue;
    ++deterministic;
    const std::string id = "core/" + std::to_string(i);
    const RunReport rc = run_measured(composed, inst.encoded(), cfg.step_budget);
    const RunReport rd = run_measured(codbhp, inst.encoded(), cfg.step_budget);
    ms.push_back({composed.name, id, rc});
    ms.push_back({codbhp.name, id, rd});
    agree += rc.outcome == rd.outcome;
  }

  std::vector<Instance> random;
  for (const auto& li : corpus.random) random.push_back(li.instance);
  auto in_bhp = [](const Instance& z) { return decide_bhp(z, 1u << 20).accepted; };
  const ReductionCheck pad = validate_reduction(padding_self_reduction(), random, in_bhp, in_bhp);
  const ReductionCheck strip = validate_reduction(strip_unreachable_state(), random, in_bhp, in_bhp);

  Artifacts a;
  a.csv = measurements_csv(ms);
  a.report = {{"experiment", "compose-check"},
              {"config", config_to_json(cfg)},
              {"deterministicInstances", deterministic},
              {"composedAgrees", agree},
              {"paddingChecked", pad.checked},
              {"paddingDisagreements", pad.disagreements},
              {"strippingChecked", strip.checked},
              {"strippingDisagreements", strip.disagreements}};
  if (agree != deterministic) a.failure = "compose: composed acceptor disagrees with coDBHP reference";
  else if (pad.disagreements) a.failure = "padding reduction changed membership";
  else if (strip.disagreements) a.failure = "stripping reduction changed membership";
  std::ostringstream md;
  md << "# compose-check\n\n| check | instances | agreements |\n|---|---:|---:|\n"
     << "| " << composed.name << " vs " << codbhp.name << " | " << deterministic << " | " << agree << " |\n"
     << "| pad-state preserves BHP | " << pad.checked << " | " << pad.checked - pad.disagreements << " |\n"
     << "| strip-state preserves BHP | " << strip.checked << " | " << strip.checked - strip.disagreements << " |\n";
  a.markdown = md.str();
  return a;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigInvalid("out: cannot write " + p.string());
  out << content;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Artifacts a;
  switch (cfg.kind) {
    case ExperimentKind::BSpeedup:
      a = run_b_speedup(cfg);
      break;
    case ExperimentKind::CapDetect:
      a = run_cap_detect(cfg);
      break;
    case ExperimentKind::StarProbe:
      a = run_star_probe(cfg);
      break;
    case ExperimentKind::Levin:
      a = run_levin(cfg);
      break;
    case ExperimentKind::Dominance:
      a = run_dominance(cfg);
      break;
    case ExperimentKind::ComposeCheck:
      a = run_compose_check(cfg);
      break;
  }
  const std::string stem = to_string(cfg.kind);
  ExperimentResult result;
  result.passed = a.failure.empty();
  result.failure = a.failure;
  a.report["passed"] = result.passed;

  const fs::path csv = cfg.out_dir / (stem + ".csv");
  const fs::path js = cfg.out_dir / (stem + ".json");
  const fs::path md = cfg.out_dir / (stem + ".md");
  write_file(csv, a.csv);
  write_file(js, a.report.dump(2) + "\n");
  write_file(md, a.markdown);
  result.files = {csv, js, md};
  if (!result.passed) {
    const fs::path fail = cfg.out_dir / "failure.json";
    write_file(fail, json{{"experiment", stem}, {"violated", a.failure}}.dump(2) + "\n");
    result.files.push_back(fail);
  }

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ofstream log(cfg.out_dir / (stem + ".log"), std::ios::app);
  log << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << ' ' << stem << ' '
      << (result.passed ? "passed" : "failed: " + a.failure) << '\n';
  return result;
}

}  // namespace tmlab
