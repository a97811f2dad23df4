#include "tmlab/corpus.h"

#include <algorithm>

#include "tmlab/errors.h"
#include "tmlab/languages.h"

namespace tmlab {

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Yes:
      return "Yes";
    case Membership::No:
      return "No";
    case Membership::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

struct Entry {
  State state;
  Symbol read;
  Transition t;
};

std::vector<Entry> all_entries(std::uint32_t states) {
  std::vector<Entry> out;
  for (State s = 0; s < states; ++s)
    for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym)
      for (State next = 0; next < states; ++next)
        for (std::uint32_t w = 0; w < kNumSymbols; ++w)
          for (std::uint32_t mv = 0; mv < 2; ++mv)
            out.push_back({s, static_cast<Symbol>(sym),
                           {next, static_cast<Symbol>(w), static_cast<Move>(mv)}});
  return out;
}

void subsets(const std::vector<Entry>& entries, std::size_t from, std::uint32_t left,
             std::vector<std::size_t>& chosen, std::vector<std::vector<std::size_t>>& out) {
  out.push_back(chosen);
  if (left == 0) return;
  for (std::size_t i = from; i < entries.size(); ++i) {
    chosen.push_back(i);
    subsets(entries, i + 1, left - 1, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<Machine> exhaustive_machines(std::uint32_t max_states, std::uint32_t max_entries) {
  std::vector<Machine> out;
  for (std::uint32_t n = 1; n <= max_states; ++n) {
    const auto entries = all_entries(n);
    std::vector<std::vector<std::size_t>> tables;
    std::vector<std::size_t> chosen;
    subsets(entries, 0, max_entries, chosen, tables);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (const auto& table : tables) {
        Machine m(n);
        for (State s = 0; s < n; ++s)
          if (mask & (1u << s)) m.set_accepting(s);
        for (std::size_t i : table) m.add_transition(entries[i].state, entries[i].read, entries[i].t);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::vector<Bits> all_inputs(std::uint32_t max_len) {
  std::vector<Bits> out;
  for (std::uint32_t len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      Bits x(len, '0');
      for (std::uint32_t b = 0; b < len; ++b)
        if ((v >> (len - 1 - b)) & 1) x[b] = '1';
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<Instance> exhaustive_corpus(const ExhaustiveLimits& limits) {
  std::vector<Instance> out;
  const auto inputs = all_inputs(limits.max_input);
  for (const auto& m : exhaustive_machines(limits.max_states, limits.max_entries))
    for (const auto& x : inputs)
      for (std::uint64_t t = 0; t <= limits.t_max; ++t) out.emplace_back(m, x, t);
  return out;
}

Machine random_machine(std::mt19937_64& rng, std::uint32_t max_states, bool deterministic) {
  const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % max_states);
  Machine m(n);
  for (State s = 0; s < n; ++s)
    if (rng() % 3 == 0) m.set_accepting(s);
  const std::uint64_t entries = rng() % (2 * n + 2);
  for (std::uint64_t e = 0; e < entries; ++e) {
    const State s = static_cast<State>(rng() % n);
    const auto read = static_cast<Symbol>(rng() % kNumSymbols);
    const Transition t{static_cast<State>(rng() % n), static_cast<Symbol>(rng() % kNumSymbols),
                       static_cast<Move>(rng() % 2)};
    const auto cell = m.transitions(s, read);
    if (deterministic && !cell.empty()) continue;
    if (std::find(cell.begin(), cell.end(), t) != cell.end()) continue;
    m.add_transition(s, read, t);
  }
  return m;
}

std::vector<Instance> random_corpus(std::uint64_t seed, std::size_t count, const RandomLimits& limits) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  while (out.size() < count) {
    Machine m = random_machine(rng, limits.max_states, limits.deterministic);
    const std::uint64_t len = rng() % (limits.max_input + 1);
    Bits x;
    for (std::uint64_t i = 0; i < len; ++i) x.push_back(rng() % 2 ? '1' : '0');
    const std::uint64_t t = rng() % (limits.t_max + 1);
    out.emplace_back(std::move(m), std::move(x), t);
  }
  return out;
}

Membership label_bhp(const Instance& inst, std::uint64_t budget) {
  try {
    return decide_bhp(inst, budget).accepted ? Membership::Yes : Membership::No;
  } catch (const BudgetExceeded&) {
    return Membership::Unknown;
  }
}

}  // namespace tmlab
