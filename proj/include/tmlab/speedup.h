#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmlab/codec.h"
#include "tmlab/languages.h"
#include "tmlab/runtime.h"

namespace tmlab {

inline constexpr std::uint64_t kDefaultStepBudget = 1u << 24;

// ---------------------------------------------------------------------------
// Hardwiring transform

// Compares the input against the hardwired prefix E(N') E(x') left to right.
// On the first mismatch it hands the reader to `base`, which starts from
// scratch. On a full match it looks at the next cell: 1 or end of input means
// the input is <N', x', 1^t> and it accepts at once; 0 goes to `base`.
//
// On every pad length the transformed acceptor takes exactly p + 2 steps,
// p = |E(N') E(x')|. Throws InvalidPair if the pair's proof does not check.
Acceptor hardwire_transform(const Acceptor& base, const HaltingPair& pair);

std::size_t hardwired_prefix_length(const HaltingPair& pair);

// Correct coBHP acceptors that answer some pad instances without reading
// the pad. Both fall back to `base` from scratch.
//
// Accepts as soon as the parsed machine turns out to have no accept state.
Acceptor no_accept_shortcut(const Acceptor& base);
// Parses E(m) E(x) and accepts if the reachable configurations of m on x
// close up within `bound` configurations without an accepting state.
Acceptor closed_orbit_shortcut(const Acceptor& base, std::uint64_t bound = 64);

// ---------------------------------------------------------------------------
// Runtime caps

struct CapConfirmation {
  std::uint64_t t = 0;
  bool agrees = false;      // longer input agrees on every cell read at t0
  bool reproduced = false;  // same outcome, same reads, same steps
};

struct CapResult {
  bool capped = false;
  std::uint64_t t0 = 0;      // first t with steps < t
  std::uint64_t steps0 = 0;
  std::uint64_t t_max = 0;
  RunReport report;          // the run at t0
  std::vector<CapConfirmation> confirmations;
  std::vector<std::pair<std::uint64_t, RunReport>> runs;  // (t, report) for every t tried
};

// Runs `a` on <machine, input, 1^t> for t = 1..t_max and stops at the first
// run that finishes in fewer than t steps. That run never reached the end of
// its input, so it is replayed at t0 + 1, 2 t0 and t_max to confirm that the
// answer and the step count are frozen from t0 on.
CapResult detect_runtime_cap(const Acceptor& a, const Machine& machine, const Bits& input,
                             std::uint64_t t_max, std::uint64_t step_budget = kDefaultStepBudget);

// First pool pair on which `a` never runs in fewer than t steps for
// t = 1..t_max.
std::optional<HaltingPair> find_hard_pair(const Acceptor& a, const std::vector<HaltingPair>& pool,
                                          std::uint64_t t_max,
                                          std::uint64_t step_budget = kDefaultStepBudget);

// ---------------------------------------------------------------------------
// b-speedup certificates

struct Measurement {
  std::string acceptor;
  std::string input_id;
  RunReport report;
};

struct OnSRow {
  std::uint64_t t;
  std::uint64_t steps_base;
  std::uint64_t steps_transformed;
};

struct OffSRow {
  std::string instance_id;
  std::uint64_t steps_base;
  std::uint64_t steps_transformed;
};

struct SpeedupCertificate {
  std::string base;
  std::string transformed;
  HaltingPair pair;
  std::uint64_t t_min = 0;
  std::uint64_t t_max = 0;
  std::vector<OnSRow> on_s;
  std::vector<OffSRow> off_s;
  std::uint64_t constant_c = 0;
  std::uint64_t additive_cs = 0;
};

inline constexpr std::size_t kMinDistinctT = 32;
inline constexpr std::size_t kMinOffS = 100;

struct BSpeedupCheck {
  std::optional<SpeedupCertificate> certificate;
  std::string violation;  // empty iff certificate is set
  std::vector<Measurement> measurements;  // every run, BudgetFlag rows included
};

std::string on_s_id(std::uint64_t t);
std::string off_s_id(std::size_t index);

// Measures both acceptors on S = {<pair, 1^t> : t in [t_min, t_max]} and on
// `off_corpus`, which must not touch S. Emits a certificate iff on S the base
// takes at least t steps and the transformed acceptor a single constant
// number of steps, the outcomes agree everywhere, and enough non-flagged rows
// remain. BudgetFlag runs are excluded.
BSpeedupCheck check_b_speedup(const Acceptor& base, const Acceptor& transformed,
                              const HaltingPair& pair, std::uint64_t t_min, std::uint64_t t_max,
                              const std::vector<Instance>& off_corpus,
                              std::uint64_t step_budget = kDefaultStepBudget);

nlohmann::json certificate_to_json(const SpeedupCertificate& c);
SpeedupCertificate certificate_from_json(const nlohmann::json& j);

// Re-derives every certificate claim from the raw measurement CSV. Returns
// the list of problems; empty means the certificate holds.
std::vector<std::string> verify_certificate(const SpeedupCertificate& c, const std::string& csv);

// ---------------------------------------------------------------------------
// Polynomial envelopes (descriptive, corpus-bounded)

struct DominanceResult {
  bool dominates = false;
  std::uint64_t c = 0;
  std::uint32_t degree = 0;
  std::uint32_t max_degree = 0;
  std::size_t excluded = 0;  // BudgetFlag rows
  std::vector<Measurement> measurements;
};

inline constexpr std::uint64_t kDominanceConstantCap = 64;

// Smallest degree d <= max_degree, then least power-of-two c <= c_cap, with
// steps_a(x) <= c (|x| + steps_b(x))^d on every corpus member. A statement
// about this corpus only. Throws CorpusOutsideL if either acceptor rejects a
// member.
DominanceResult check_p_dominance(const Acceptor& a, const Acceptor& b,
                                  const std::vector<Bits>& corpus, std::uint32_t max_degree,
                                  std::uint64_t c_cap = kDominanceConstantCap,
                                  std::uint64_t step_budget = kDefaultStepBudget);

struct EnvelopeFit {
  std::uint32_t degree = 0;
  std::uint64_t c = 0;  // smallest integer with f(t) <= c max(t,1)^d over the range
  // c fitted on the first half of the range, and the first t in the second
  // half that escapes it.
  std::uint64_t early_c = 0;
  std::optional<std::uint64_t> first_escape;
};

struct StarProbeReport {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> samples;  // (t, f(t))
  std::vector<EnvelopeFit> fits;
  std::size_t excluded = 0;
  std::vector<Measurement> measurements;
};

StarProbeReport star_condition_probe(const Acceptor& a, const HaltingPair& pair,
                                     const std::vector<std::uint64_t>& t_values,
                                     const std::vector<std::uint32_t>& degrees,
                                     std::uint64_t step_budget = kDefaultStepBudget);

// ---------------------------------------------------------------------------
// Reductions

struct Reduction {
  std::string name;
  std::function<Instance(const Instance&)> mapping;
  std::uint32_t cost_degree = 1;
};

Reduction identity_reduction();
// A deterministic instance is already an instance of the nondeterministic
// problem: identity on encodings.
Reduction reduction_dbhp_to_bhp();
// Adds one state that no transition enters.
Reduction padding_self_reduction();
// Inverse of padding: drops the last state when nothing else enters it.
Reduction strip_unreachable_state();

// x -> a(f(x)). Reads the whole input, maps it, charges |f(x)| ops for the
// mapping and then runs `a` on the encoding of f(x). Malformed input is
// rejected; a mapping that throws or emits a non-canonical instance raises
// ReductionFailure.
Acceptor compose_with_reduction(const Acceptor& a, const Reduction& f);

struct ReductionCheck {
  std::size_t checked = 0;
  std::size_t disagreements = 0;
};

ReductionCheck validate_reduction(const Reduction& f, const std::vector<Instance>& corpus,
                                  const std::function<bool(const Instance&)>& in_source,
                                  const std::function<bool(const Instance&)>& in_target);

}  // namespace tmlab
