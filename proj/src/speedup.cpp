#include "tmlab/speedup.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tmlab/json_io.h"

namespace tmlab {

using nlohmann::json;

std::size_t hardwired_prefix_length(const HaltingPair& pair) {
  return encode_machine(pair.machine).size() + encode_input(pair.input).size();
}

Acceptor hardwire_transform(const Acceptor& base, const HaltingPair& pair) {
  if (!validate_proof(pair))
    throw InvalidPair("proof " + to_string(pair.proof) + " does not check for " + pair.name);
  const Bits prefix = encode_machine(pair.machine) + encode_input(pair.input);

  Acceptor out;
  out.name = base.name + "+hw[" + pair.name + "]";
  out.provenance = {Provenance::Kind::Transformed, base.name, pair.name};
  out.behavior = [base, prefix](InputReader& reader) {
    for (std::size_t pos = 0; pos < prefix.size(); ++pos) {
      const ReadResult r = reader.read_at(pos);
      const ReadResult want = prefix[pos] == '1' ? ReadResult::One : ReadResult::Zero;
      if (r != want) return base.behavior(reader);
    }
    const ReadResult next = reader.read_at(prefix.size());
    if (next == ReadResult::Zero) return base.behavior(reader);
    reader.charge(1);
    return Verdict::Accept;
  };
  return out;
}

namespace {

std::optional<bool> reader_bit(InputReader& reader, std::size_t pos) {
  const ReadResult r = reader.read_at(pos);
  if (r == ReadResult::PastEnd) return std::nullopt;
  return r == ReadResult::One;
}

}  // namespace

Acceptor no_accept_shortcut(const Acceptor& base) {
  Acceptor out;
  out.name = base.name + "+no-accept";
  out.provenance = {Provenance::Kind::External, base.name, "no-accept shortcut"};
  out.behavior = [base](InputReader& reader) {
    BitParser parser([&reader](std::size_t pos) { return reader_bit(reader, pos); });
    try {
      if (parser.read_machine().accept_states().empty()) {
        reader.charge(1);
        return Verdict::Accept;
      }
    } catch (const MalformedEncoding&) {
      return Verdict::Reject;
    }
    return base.behavior(reader);
  };
  return out;
}

Acceptor closed_orbit_shortcut(const Acceptor& base, std::uint64_t bound) {
  Acceptor out;
  out.name = base.name + "+orbit";
  out.provenance = {Provenance::Kind::External, base.name, "closed-orbit shortcut"};
  out.behavior = [base, bound](InputReader& reader) {
    BitParser parser([&reader](std::size_t pos) { return reader_bit(reader, pos); });
    std::optional<HaltingPair> probe;
    try {
      Machine m = parser.read_machine();
      Bits x = parser.read_input();
      probe = HaltingPair{"probe", std::move(m), std::move(x), ProofTag::StructuralLoop, "", bound};
    } catch (const MalformedEncoding&) {
      return Verdict::Reject;
    }
    const ProofCheck check = check_proof(*probe);
    reader.charge(check.configurations);
    if (check.valid) return Verdict::Accept;
    return base.behavior(reader);
  };
  return out;
}

CapResult detect_runtime_cap(const Acceptor& a, const Machine& machine, const Bits& input,
                             std::uint64_t t_max, std::uint64_t step_budget) {
  if (t_max == 0) throw std::invalid_argument("detect_runtime_cap needs t_max >= 1");
  CapResult result;
  result.t_max = t_max;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    RunReport r = run_measured(a, encode_instance(machine, input, t), step_budget);
    result.runs.emplace_back(t, r);
    if (r.outcome == Outcome::BudgetFlag || r.steps >= t) continue;
    result.capped = true;
    result.t0 = t;
    result.steps0 = r.steps;
    result.report = std::move(r);
    std::set<std::uint64_t> replays{t + 1, 2 * t, t_max};
    for (std::uint64_t t2 : replays) {
      if (t2 <= t) continue;
      const Bits longer = encode_instance(machine, input, t2);
      result.confirmations.push_back(
          {t2, agrees_with_transcript(longer, result.report.transcript),
           replay_reproduces(a, result.report, longer, step_budget)});
    }
    return result;
  }
  return result;
}

std::optional<HaltingPair> find_hard_pair(const Acceptor& a, const std::vector<HaltingPair>& pool,
                                          std::uint64_t t_max, std::uint64_t step_budget) {
  for (const auto& pair : pool)
    if (!detect_runtime_cap(a, pair.machine, pair.input, t_max, step_budget).capped) return pair;
  return std::nullopt;
}

std::string on_s_id(std::uint64_t t) { return "S/t=" + std::to_string(t); }
std::string off_s_id(std::size_t index) { return "off/" + std::to_string(index); }

BSpeedupCheck check_b_speedup(const Acceptor& base, const Acceptor& transformed,
                              const HaltingPair& pair, std::uint64_t t_min, std::uint64_t t_max,
                              const std::vector<Instance>& off_corpus, std::uint64_t step_budget) {
  for (const auto& inst : off_corpus)
    if (inst.machine() == pair.machine && inst.input() == pair.input)
      throw std::invalid_argument("off-S corpus contains an instance of S");

  BSpeedupCheck check;
  SpeedupCertificate cert;
  cert.base = base.name;
  cert.transformed = transformed.name;
  cert.pair = pair;
  cert.t_min = t_min;
  cert.t_max = t_max;

  auto measure = [&](const Acceptor& a, const std::string& id, const Bits& input) {
    check.measurements.push_back({a.name, id, run_measured(a, input, step_budget)});
    return check.measurements.back().report;
  };
  auto fail = [&](std::string why) {
    check.violation = std::move(why);
    return check;
  };

  std::optional<std::uint64_t> constant;
  for (std::uint64_t t = t_min; t <= t_max; ++t) {
    const Bits input = encode_instance(pair.machine, pair.input, t);
    const RunReport rb = measure(base, on_s_id(t), input);
    const RunReport rt = measure(transformed, on_s_id(t), input);
    if (rb.outcome == Outcome::BudgetFlag || rt.outcome == Outcome::BudgetFlag) continue;
    if (rb.outcome != rt.outcome)
      return fail("outcome disagreement on " + on_s_id(t));
    if (rb.outcome != Outcome::Accept)
      return fail("S member rejected on " + on_s_id(t));
    if (t >= 1 && rb.steps < t)
      return fail("condition (1): base runs in " + std::to_string(rb.steps) + " < t steps on " +
                  on_s_id(t) + "; base is bounded on S");
    if (constant && *constant != rt.steps)
      return fail("condition (1): transformed steps not constant on S (" +
                  std::to_string(*constant) + " vs " + std::to_string(rt.steps) + " at " +
                  on_s_id(t) + ")");
    constant = rt.steps;
    cert.on_s.push_back({t, rb.steps, rt.steps});
  }
  if (cert.on_s.size() < kMinDistinctT)
    return fail("only " + std::to_string(cert.on_s.size()) + " usable t values on S");
  // Base steps >= t on every t means base is not constant on S.
  if (cert.on_s.back().steps_base <= *constant)
    return fail("condition (1): base does not outgrow the transformed constant on S");
  cert.constant_c = *constant;

  std::int64_t worst = 0;
  for (std::size_t i = 0; i < off_corpus.size(); ++i) {
    const Bits& input = off_corpus[i].encoded();
    const RunReport rb = measure(base, off_s_id(i), input);
    const RunReport rt = measure(transformed, off_s_id(i), input);
    if (rb.outcome == Outcome::BudgetFlag || rt.outcome == Outcome::BudgetFlag) continue;
    if (rb.outcome != rt.outcome) return fail("outcome disagreement on " + off_s_id(i));
    worst = std::max(worst, static_cast<std::int64_t>(rt.steps) - static_cast<std::int64_t>(rb.steps));
    cert.off_s.push_back({off_s_id(i), rb.steps, rt.steps});
  }
  if (cert.off_s.size() < kMinOffS)
    return fail("only " + std::to_string(cert.off_s.size()) + " usable off-S instances");
  cert.additive_cs = static_cast<std::uint64_t>(worst);
  check.certificate = std::move(cert);
  return check;
}

json certificate_to_json(const SpeedupCertificate& c) {
  json on_s = json::array();
  for (const auto& r : c.on_s)
    on_s.push_back({{"t", r.t}, {"stepsBase", r.steps_base}, {"stepsTransformed", r.steps_transformed}});
  json off_s = json::array();
  for (const auto& r : c.off_s)
    off_s.push_back({{"instanceId", r.instance_id},
                     {"stepsBase", r.steps_base},
                     {"stepsTransformed", r.steps_transformed}});
  return {{"baseAcceptor", c.base},
          {"transformedAcceptor", c.transformed},
          {"pair", pool_to_json({c.pair}).at(0)},
          {"tRange", {c.t_min, c.t_max}},
          {"onS", on_s},
          {"offS", off_s},
          {"constantC", c.constant_c},
          {"additiveCs", c.additive_cs}};
}

SpeedupCertificate certificate_from_json(const json& j) {
  SpeedupCertificate c;
  c.base = j.at("baseAcceptor").get<std::string>();
  c.transformed = j.at("transformedAcceptor").get<std::string>();
  c.pair = pool_from_json(json::array({j.at("pair")})).at(0);
  c.t_min = j.at("tRange").at(0).get<std::uint64_t>();
  c.t_max = j.at("tRange").at(1).get<std::uint64_t>();
  for (const auto& r : j.at("onS"))
    c.on_s.push_back({r.at("t").get<std::uint64_t>(), r.at("stepsBase").get<std::uint64_t>(),
                      r.at("stepsTransformed").get<std::uint64_t>()});
  for (const auto& r : j.at("offS"))
    c.off_s.push_back({r.at("instanceId").get<std::string>(),
                       r.at("stepsBase").get<std::uint64_t>(),
                       r.at("stepsTransformed").get<std::uint64_t>()});
  c.constant_c = j.at("constantC").get<std::uint64_t>();
  c.additive_cs = j.at("additiveCs").get<std::uint64_t>();
  return c;
}

namespace {

struct CsvRow {
  std::string outcome;
  std::uint64_t steps = 0;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> verify_certificate(const SpeedupCertificate& c, const std::string& csv) {
  std::vector<std::string> problems;
  std::map<std::pair<std::string, std::string>, CsvRow> rows;
  std::istringstream is(csv);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      if (line != csv_header()) problems.push_back("unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) {
      problems.push_back("bad CSV row: " + line);
      continue;
    }
    rows[{f[0], f[1]}] = {f[2], std::stoull(f[3])};
  }

  auto lookup = [&](const std::string& acceptor, const std::string& id) -> const CsvRow* {
    auto it = rows.find({acceptor, id});
    if (it == rows.end()) {
      problems.push_back("no CSV row for " + acceptor + " on " + id);
      return nullptr;
    }
    return &it->second;
  };

  std::set<std::uint64_t> ts;
  for (const auto& r : c.on_s) {
    ts.insert(r.t);
    const CsvRow* b = lookup(c.base, on_s_id(r.t));
    const CsvRow* t = lookup(c.transformed, on_s_id(r.t));
    if (!b || !t) continue;
    if (b->steps != r.steps_base || t->steps != r.steps_transformed)
      problems.push_back("steps on " + on_s_id(r.t) + " differ from CSV");
    if (b->outcome != "Accept" || t->outcome != "Accept")
      problems.push_back("S member not accepted on " + on_s_id(r.t));
    if (b->steps < r.t) problems.push_back("base below t on " + on_s_id(r.t));
    if (t->steps != c.constant_c) problems.push_back("transformed not constant on " + on_s_id(r.t));
  }
  if (ts.size() < kMinDistinctT) problems.push_back("fewer than 32 distinct t values");

  std::set<std::string> ids;
  for (const auto& r : c.off_s) {
    ids.insert(r.instance_id);
    const CsvRow* b = lookup(c.base, r.instance_id);
    const CsvRow* t = lookup(c.transformed, r.instance_id);
    if (!b || !t) continue;
    if (b->steps != r.steps_base || t->steps != r.steps_transformed)
      problems.push_back("steps on " + r.instance_id + " differ from CSV");
    if (b->outcome != t->outcome) problems.push_back("outcome disagreement on " + r.instance_id);
    if (b->outcome == "BudgetFlag") problems.push_back("flagged run certified: " + r.instance_id);
    if (t->steps > b->steps && t->steps - b->steps > c.additive_cs)
      problems.push_back("overhead above additiveCs on " + r.instance_id);
  }
  if (ids.size() < kMinOffS) problems.push_back("fewer than 100 off-S instances");
  return problems;
}

namespace {

// Saturating (base)^d.
unsigned __int128 power_sat(std::uint64_t base, std::uint32_t d) {
  constexpr unsigned __int128 kCap = static_cast<unsigned __int128>(1) << 100;
  unsigned __int128 r = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    r *= base;
    if (r > kCap) return kCap;
  }
  return r;
}

}  // namespace

DominanceResult check_p_dominance(const Acceptor& a, const Acceptor& b,
                                  const std::vector<Bits>& corpus, std::uint32_t max_degree,
                                  std::uint64_t c_cap, std::uint64_t step_budget) {
  DominanceResult result;
  result.max_degree = max_degree;
  struct Point {
    std::uint64_t length, steps_a, steps_b;
  };
  std::vector<Point> points;
  for (const auto& x : corpus) {
    const RunReport ra = run_measured(a, x, step_budget);
    const RunReport rb = run_measured(b, x, step_budget);
    const std::string id = "x/" + std::to_string(result.measurements.size() / 2);
    result.measurements.push_back({a.name, id, ra});
    result.measurements.push_back({b.name, id, rb});
    if (ra.outcome == Outcome::BudgetFlag || rb.outcome == Outcome::BudgetFlag) {
      ++result.excluded;
      continue;
    }
    if (ra.outcome != Outcome::Accept || rb.outcome != Outcome::Accept)
      throw CorpusOutsideL("corpus member rejected: " + x);
    points.push_back({x.size(), ra.steps, rb.steps});
  }
  for (std::uint32_t d = 0; d <= max_degree; ++d) {
    for (std::uint64_t c = 1; c <= c_cap; c *= 2) {
      const bool fits = std::all_of(points.begin(), points.end(), [&](const Point& p) {
        return static_cast<unsigned __int128>(p.steps_a) <=
               static_cast<unsigned __int128>(c) * power_sat(p.length + p.steps_b, d);
      });
      if (fits) {
        result.dominates = true;
        result.c = c;
        result.degree = d;
        return result;
      }
    }
  }
  return result;
}

namespace {

std::uint64_t fit_constant(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& samples,
                           std::size_t begin, std::size_t end, std::uint32_t d) {
  std::uint64_t c = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const auto [t, f] = samples[i];
    const unsigned __int128 denom = power_sat(std::max<std::uint64_t>(t, 1), d);
    const unsigned __int128 need = (f + denom - 1) / denom;
    c = std::max<std::uint64_t>(c, static_cast<std::uint64_t>(need));
  }
  return c;
}

}  // namespace

StarProbeReport star_condition_probe(const Acceptor& a, const HaltingPair& pair,
                                     const std::vector<std::uint64_t>& t_values,
                                     const std::vector<std::uint32_t>& degrees,
                                     std::uint64_t step_budget) {
  StarProbeReport report;
  for (std::uint64_t t : t_values) {
    const RunReport r = run_measured(a, encode_instance(pair.machine, pair.input, t), step_budget);
    report.measurements.push_back({a.name, on_s_id(t), r});
    if (r.outcome == Outcome::BudgetFlag) {
      ++report.excluded;
      continue;
    }
    report.samples.emplace_back(t, r.steps);
  }
  if (report.samples.empty()) return report;
  const std::size_t half = (report.samples.size() + 1) / 2;
  for (std::uint32_t d : degrees) {
    EnvelopeFit fit;
    fit.degree = d;
    fit.c = fit_constant(report.samples, 0, report.samples.size(), d);
    fit.early_c = fit_constant(report.samples, 0, half, d);
    for (std::size_t i = half; i < report.samples.size(); ++i) {
      const auto [t, f] = report.samples[i];
      if (static_cast<unsigned __int128>(f) >
          static_cast<unsigned __int128>(fit.early_c) * power_sat(std::max<std::uint64_t>(t, 1), d)) {
        fit.first_escape = t;
        break;
      }
    }
    report.fits.push_back(fit);
  }
  return report;
}

Reduction identity_reduction() {
  return {"identity", [](const Instance& z) { return z; }, 1};
}

Reduction reduction_dbhp_to_bhp() {
  return {"dbhp-to-bhp", [](const Instance& z) { return z; }, 1};
}

Reduction padding_self_reduction() {
  return {"pad-state",
          [](const Instance& z) {
            return Instance(z.machine().with_extra_state(), z.input(), z.bound());
          },
          1};
}

Reduction strip_unreachable_state() {
  return {"strip-state",
          [](const Instance& z) {
            const Machine& m = z.machine();
            const State last = m.num_states() - 1;
            if (last == 0) return z;
            for (State s = 0; s < last; ++s)
              for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym)
                for (const auto& t : m.transitions(s, static_cast<Symbol>(sym)))
                  if (t.next == last) return z;
            Machine out(last);
            for (State s = 0; s < last; ++s) {
              out.set_accepting(s, m.is_accepting(s));
              for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym)
                for (const auto& t : m.transitions(s, static_cast<Symbol>(sym)))
                  out.add_transition(s, static_cast<Symbol>(sym), t);
            }
            return Instance(std::move(out), z.input(), z.bound());
          },
          1};
}

Acceptor compose_with_reduction(const Acceptor& a, const Reduction& f) {
  Acceptor out;
  out.name = a.name + "@" + f.name;
  out.provenance = {Provenance::Kind::Composed, a.name, f.name};
  out.behavior = [a, f](InputReader& reader) {
    const auto z = read_instance(reader);
    if (!z) return Verdict::Reject;
    std::optional<Instance> mapped;
    try {
      mapped = f.mapping(*z);
    } catch (const std::exception& e) {
      throw ReductionFailure(f.name + " failed: " + e.what());
    }
    const Bits& image = mapped->encoded();
    if (!try_decode_instance(image)) throw ReductionFailure(f.name + " emitted a malformed instance");
    reader.charge(image.size());
    return run_nested(reader, a, image);
  };
  return out;
}

ReductionCheck validate_reduction(const Reduction& f, const std::vector<Instance>& corpus,
                                  const std::function<bool(const Instance&)>& in_source,
                                  const std::function<bool(const Instance&)>& in_target) {
  ReductionCheck check;
  for (const auto& z : corpus) {
    const Instance image = f.mapping(z);
    const auto round = try_decode_instance(image.encoded());
    if (!round || !(*round == image)) throw ReductionFailure(f.name + " emitted a malformed instance");
    ++check.checked;
    if (in_source(z) != in_target(image)) ++check.disagreements;
  }
  return check;
}

}  // namespace tmlab
