// End-to-end acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "oracle.h"
#include "tmlab/corpus.h"
#include "tmlab/experiment.h"
#include "tmlab/languages.h"
#include "tmlab/levin.h"
#include "tmlab/runtime.h"
#include "tmlab/speedup.h"

using namespace tmlab;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool pass = false;
  std::string detail;
};

// The exhaustive corpus: every machine with <= 3 states and <= 2 transition
// entries, every input of length <= 2, every bound t <= 6. Instances are
// built on the fly; labels from decide_bhp are kept for the later criteria
// once criterion 1 has checked them against the oracle.
constexpr ExhaustiveLimits kCore{3, 2, 2, 6};

struct Corpus {
  std::vector<Machine> machines = exhaustive_machines(kCore.max_states, kCore.max_entries);
  std::vector<Bits> inputs = all_inputs(kCore.max_input);
  std::vector<std::uint8_t> yes;  // index (m * inputs + x) * (t_max + 1) + t
  std::size_t size() const { return machines.size() * inputs.size() * (kCore.t_max + 1); }
  Instance at(std::size_t k) const {
    const std::size_t t = k % (kCore.t_max + 1);
    const std::size_t mx = k / (kCore.t_max + 1);
    return Instance(machines[mx / inputs.size()], inputs[mx % inputs.size()], t);
  }
};

Corpus& corpus() {
  static Corpus c;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

HaltingPair pair_named(const std::string& name) {
  for (const auto& p : curated_cohp_pool())
    if (p.name == name) return p;
  throw std::runtime_error("missing pool pair " + name);
}

Check oracle_equivalence() {
  Corpus& c = corpus();
  c.yes.assign(c.size(), 0);
  std::size_t k = 0, disagree = 0, yes = 0;
  for (const auto& m : c.machines)
    for (const auto& x : c.inputs) {
      const auto best = oracle::shortest_accepting(m, x, kCore.t_max);
      for (std::uint64_t t = 0; t <= kCore.t_max; ++t, ++k) {
        const auto a = decide_bhp(Instance(m, x, t), 1u << 20);
        const bool want = best && *best <= t;
        if (a.accepted != want || (a.accepted && a.path.size() != *best)) ++disagree;
        c.yes[k] = a.accepted;
        yes += a.accepted;
      }
    }
  return {disagree == 0, std::to_string(k) + " instances (" + std::to_string(yes) + " Yes), " +
                             std::to_string(disagree) + " disagreements"};
}

Check codec() {
  std::mt19937_64 rng(2024);
  std::size_t bad = 0;
  const auto round_trips = random_corpus(2024, 10'000, {5, 6, 12, false});
  for (const auto& inst : round_trips) {
    const Bits mb = encode_machine(inst.machine());
    if (!(decode_machine(mb) == inst.machine()) || mb != oracle::encode_machine(inst.machine())) ++bad;
    const Bits ib = encode_instance(inst.machine(), inst.input(), inst.bound());
    if (!(decode_instance(ib) == inst) || ib != oracle::encode_instance(inst.machine(), inst.input(), inst.bound()))
      ++bad;
  }
  std::size_t decoded = 0, malformed = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    Bits s = round_trips[i].encoded();
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng() % (s.size() + 1);
      switch (rng() % 3) {
        case 0:
          if (pos < s.size()) s[pos] = s[pos] == '0' ? '1' : '0';
          break;
        case 1:
          s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), rng() & 1 ? '1' : '0');
          break;
        default:
          if (pos < s.size()) s.erase(pos, 1);
      }
    }
    try {
      const Instance back = decode_instance(s);
      ++decoded;
      if (back.encoded() != s) ++bad;
    } catch (const MalformedEncoding&) {
      ++malformed;
    } catch (...) {
      ++bad;
    }
  }
  return {bad == 0, "10000 round trips, 1000 mutants (" + std::to_string(decoded) + " decoded, " +
                        std::to_string(malformed) + " malformed), " + std::to_string(bad) + " violations"};
}

Check hardwired_speedup() {
  const HaltingPair loop = pair_named("loop/eps");
  // p from the codec: the encoded machine and empty input, before any pad.
  const std::uint64_t p = oracle::encode_machine(loop.machine).size() + oracle::unary(0).size();
  std::vector<std::string> problems;
  std::ostringstream detail;
  for (const bool det : {false, true}) {
    const Acceptor base = det ? reference_codbhp_acceptor() : reference_cobhp_acceptor();
    const Acceptor hw = hardwire_transform(base, loop);
    std::vector<Instance> off;
    for (auto& inst : random_corpus(det ? 41 : 40, 400, {4, 4, 8, det})) {
      if (off.size() == 200) break;
      if (!(inst.machine() == loop.machine && inst.input() == loop.input)) off.push_back(std::move(inst));
    }
    const auto check = check_b_speedup(base, hw, loop, 0, 256, off);
    if (!check.certificate) {
      problems.push_back(base.name + ": " + check.violation);
      continue;
    }
    // Independent look at the raw runs.
    std::optional<std::uint64_t> constant;
    bool constant_ok = true, base_ok = true, agree = true;
    std::int64_t worst = 0;
    std::size_t off_rows = 0;
    for (std::uint64_t t = 0; t <= 256; ++t) {
      const Bits in = encode_instance(loop.machine, loop.input, t);
      const auto rb = run_measured(base, in, kDefaultStepBudget);
      const auto rt = run_measured(hw, in, kDefaultStepBudget);
      if (t >= 1 && rb.steps < t) base_ok = false;
      if (rb.outcome != Outcome::Accept || rt.outcome != Outcome::Accept) agree = false;
      if (!constant) constant = rt.steps;
      constant_ok &= rt.steps == *constant && rt.steps == p + 2;
    }
    for (const auto& inst : off) {
      const auto rb = run_measured(base, inst.encoded(), kDefaultStepBudget);
      const auto rt = run_measured(hw, inst.encoded(), kDefaultStepBudget);
      if (rb.outcome == Outcome::BudgetFlag || rt.outcome == Outcome::BudgetFlag) continue;
      ++off_rows;
      agree &= rb.outcome == rt.outcome;
      worst = std::max(worst, static_cast<std::int64_t>(rt.steps) - static_cast<std::int64_t>(rb.steps));
    }
    const auto& cert = *check.certificate;
    std::ostringstream csv;
    csv << csv_header() << "\n";
    for (const auto& m : check.measurements) csv << csv_row(m.acceptor, m.input_id, m.report) << "\n";
    const auto revalidation = verify_certificate(certificate_from_json(certificate_to_json(cert)), csv.str());
    if (!base_ok) problems.push_back(base.name + ": base below t steps");
    if (!constant_ok) problems.push_back(base.name + ": transformed steps not constant p+2");
    if (worst > static_cast<std::int64_t>(p + 2)) problems.push_back(base.name + ": off-S overhead");
    if (!agree) problems.push_back(base.name + ": outcome disagreement");
    if (off_rows < 200) problems.push_back(base.name + ": only " + std::to_string(off_rows) + " off-S rows");
    if (cert.constant_c != p + 2) problems.push_back(base.name + ": certificate constant");
    if (!revalidation.empty()) problems.push_back(base.name + ": " + revalidation.front());
    detail << base.name << " C=" << cert.constant_c << " (p=" << p << ") c_S=" << cert.additive_cs
           << " over " << off_rows << " off-S; ";
  }
  for (const auto& pr : problems) detail << "[" << pr << "] ";
  return {problems.empty(), detail.str()};
}

Check cap_propagation() {
  const Acceptor ref = reference_cobhp_acceptor();
  const HaltingPair loop = pair_named("loop/eps");
  const HaltingPair pp = pair_named("pingpong/eps");
  const std::vector<std::pair<Acceptor, HaltingPair>> cases = {
      {hardwire_transform(ref, loop), loop},
      {no_accept_shortcut(ref), loop},
      {closed_orbit_shortcut(ref), pp}};
  std::size_t deviations = 0;
  std::ostringstream detail;
  for (const auto& [a, pair] : cases) {
    const auto cap = detect_runtime_cap(a, pair.machine, pair.input, 256);
    if (!cap.capped) {
      ++deviations;
      detail << a.name << " no cap; ";
      continue;
    }
    const auto at_t0 = run_measured(a, encode_instance(pair.machine, pair.input, cap.t0), kDefaultStepBudget);
    std::size_t confirmed = 0;
    for (std::uint64_t t : {cap.t0 + 1, 2 * cap.t0, std::uint64_t{256}}) {
      const auto r = run_measured(a, encode_instance(pair.machine, pair.input, t), kDefaultStepBudget);
      const bool same = r.outcome == at_t0.outcome && r.steps == at_t0.steps &&
                        r.transcript == at_t0.transcript && r.steps == cap.steps0;
      deviations += !same;
      bool reported = false;
      for (const auto& c : cap.confirmations)
        if (c.t == t) reported = c.agrees && c.reproduced;
      deviations += !reported;
      confirmed += same && reported;
    }
    detail << a.name << " Cap(" << cap.t0 << "," << cap.steps0 << ") " << confirmed << "/3; ";
  }
  detail << deviations << " deviations";
  return {deviations == 0, detail.str()};
}

Check levin() {
  const Corpus& c = corpus();
  ProgramEnumerator programs;
  std::size_t yes = 0, no = 0, missed = 0, false_found = 0, bad_books = 0, unverified = 0;
  std::uint64_t max_steps = 0;
  std::size_t max_program = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Instance inst = c.at(k);
    LevinResult r;
    if (c.yes[k]) {
      ++yes;
      r = levin_search_doubling(inst, 16, 1u << 24, programs);
      if (!r.found) ++missed;
    } else {
      // No witness can verify, whatever the budget.
      ++no;
      r = levin_search_witness(inst, 1u << 8, programs);
      if (r.found) ++false_found;
    }
    if (r.found) {
      if (!oracle::replay_accepts(inst.machine(), inst.input(), inst.bound(), r.path)) ++unverified;
      max_steps = std::max(max_steps, r.steps_used);
      max_program = std::max(max_program, r.program_index);
    }
    if (r.last_complete_phase) {
      const std::uint64_t k_last = *r.last_complete_phase;
      if (r.allotted.size() != k_last + 1) ++bad_books;
      for (std::size_t i = 0; i < r.allotted.size() && i <= k_last; ++i)
        if (k_last - i < 63 && r.allotted[i] != (std::uint64_t{2} << (k_last - i)) - 1) ++bad_books;
    }
  }
  const bool pass = !missed && !false_found && !bad_books && !unverified;
  return {pass, std::to_string(yes) + " Yes (" + std::to_string(missed) + " missed, " +
                    std::to_string(unverified) + " unverified, max " + std::to_string(max_steps) +
                    " steps, max program " + std::to_string(max_program) + "), " + std::to_string(no) +
                    " No (" + std::to_string(false_found) + " found), " + std::to_string(bad_books) +
                    " accounting mismatches"};
}

Check schnorr() {
  const Corpus& c = corpus();
  const BhpOracle bhp = [](const Instance& q) { return decide_bhp(q, 1u << 20).accepted; };
  std::size_t yes = 0, violations = 0;
  std::uint64_t calls = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!c.yes[k]) continue;
    ++yes;
    const Instance inst = c.at(k);
    const auto r = schnorr_search_from_decision(inst, bhp);
    const std::uint64_t width = std::max<std::uint64_t>(inst.machine().max_branching(), 1);
    calls += r.oracle_calls;
    if (!r.found || !oracle::replay_accepts(inst.machine(), inst.input(), inst.bound(), r.path) ||
        r.oracle_calls > inst.bound() * width + 1)
      ++violations;
  }
  return {violations == 0, std::to_string(yes) + " Yes instances, " + std::to_string(calls) +
                               " oracle calls, " + std::to_string(violations) + " violations"};
}

Check composition() {
  const Corpus& c = corpus();
  const Acceptor composed = compose_with_reduction(reference_cobhp_acceptor(), reduction_dbhp_to_bhp());
  const Acceptor dref = reference_codbhp_acceptor();
  std::size_t det = 0, disagree = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::size_t mi = k / (kCore.t_max + 1) / c.inputs.size();
    if (!c.machines[mi].is_deterministic()) continue;
    ++det;
    const Instance inst = c.at(k);
    const auto a = run_measured(composed, inst.encoded(), kDefaultStepBudget);
    const auto b = run_measured(dref, inst.encoded(), kDefaultStepBudget);
    const bool in_co = !oracle::dtm_accepts(inst.machine(), inst.input(), inst.bound());
    const Outcome want = in_co ? Outcome::Accept : Outcome::Reject;
    if (a.outcome != want || b.outcome != want) ++disagree;
  }
  const Reduction pad = padding_self_reduction();
  std::size_t pad_bad = 0;
  for (const auto& inst : random_corpus(500, 500, {4, 4, 8, false})) {
    const Instance q = pad.mapping(inst);
    if (q.machine().num_states() != inst.machine().num_states() + 1) ++pad_bad;
    const auto best = oracle::shortest_accepting(inst.machine(), inst.input(), inst.bound());
    const bool want = best.has_value();
    if (decide_bhp(inst, 1u << 20).accepted != want || decide_bhp(q, 1u << 20).accepted != want) ++pad_bad;
  }
  return {disagree == 0 && pad_bad == 0,
          std::to_string(det) + " deterministic instances (" + std::to_string(disagree) +
              " disagreements), 500 padded (" + std::to_string(pad_bad) + " changed)"};
}

Check reproducibility() {
  const std::vector<ExperimentKind> kinds = {ExperimentKind::BSpeedup, ExperimentKind::CapDetect,
                                             ExperimentKind::StarProbe, ExperimentKind::Levin,
                                             ExperimentKind::Dominance, ExperimentKind::ComposeCheck};
  const fs::path root = fs::temp_directory_path() / "tmlab_acceptance";
  std::size_t compared = 0, differing = 0, failed = 0;
  for (const std::string lang : {"cobhp", "codbhp"})
    for (auto kind : kinds) {
      std::vector<fs::path> dirs;
      for (int run = 0; run < 2; ++run) {
        const fs::path d = root / (lang + "_" + to_string(kind) + "_" + std::to_string(run));
        fs::remove_all(d);
        fs::create_directories(d);
        ExperimentConfig cfg;
        cfg.kind = kind;
        cfg.language = lang;
        cfg.acceptor = kind == ExperimentKind::CapDetect ? "hw" : "ref";
        cfg.out_dir = d;
        failed += !run_experiment(cfg).passed;
        dirs.push_back(d);
      }
      for (const std::string ext : {".csv", ".json", ".md"}) {
        const std::string f = to_string(kind) + ext;
        ++compared;
        differing += slurp(dirs[0] / f) != slurp(dirs[1] / f);
      }
    }
  fs::remove_all(root);
  return {differing == 0 && failed == 0, std::to_string(compared) + " artifact pairs, " +
                                             std::to_string(differing) + " differ, " +
                                             std::to_string(failed) + " failed runs"};
}

// Last: covers every run made by the criteria above.
Check cost_floor() {
  const auto audit = floor_audit();
  return {audit.runs > 0 && audit.violations == 0,
          std::to_string(audit.runs) + " runs, " + std::to_string(audit.violations) + " violations"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Check()>>> criteria = {
      {1, oracle_equivalence}, {2, codec},   {4, hardwired_speedup},  {5, cap_propagation}, {6, levin},
      {7, schnorr},            {8, composition}, {9, reproducibility}, {3, cost_floor}};
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& [n, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all &= v.pass;
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1fs)", secs);
    lines.emplace_back(n, std::string("criterion ") + std::to_string(n) + ": " +
                              (v.pass ? "PASS" : "FAIL") + " - " + v.detail + buf);
    std::fprintf(stderr, "%s\n", lines.back().second.c_str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [n, line] : lines) std::printf("%s\n", line.c_str());
  return all ? 0 : 1;
}
