#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tmlab/codec.h"

namespace tmlab {

enum class Membership { Yes, No, Unknown };
std::string to_string(Membership m);

struct LabeledInstance {
  Instance instance;
  Membership bhp = Membership::Unknown;  // decide_bhp at oracle scale
};

struct ExhaustiveLimits {
  std::uint32_t max_states = 1;
  std::uint32_t max_entries = 3;  // transition entries per machine
  std::uint32_t max_input = 1;
  std::uint64_t t_max = 2;
};

// Every machine with 1..max_states states, any accept set, and at most
// max_entries transition entries, branches in canonical (sorted) order
// within a cell. Ordered by state count, accept mask, then entry subset.
std::vector<Machine> exhaustive_machines(std::uint32_t max_states, std::uint32_t max_entries);

// All bit strings of length 0..max_len in length-lexicographic order.
std::vector<Bits> all_inputs(std::uint32_t max_len);

// exhaustive_machines x all_inputs x t in [0, t_max].
std::vector<Instance> exhaustive_corpus(const ExhaustiveLimits& limits);

struct RandomLimits {
  std::uint32_t max_states = 4;
  std::uint32_t max_input = 4;
  std::uint64_t t_max = 8;
  bool deterministic = false;
};

Machine random_machine(std::mt19937_64& rng, std::uint32_t max_states, bool deterministic);
std::vector<Instance> random_corpus(std::uint64_t seed, std::size_t count, const RandomLimits& limits);

Membership label_bhp(const Instance& inst, std::uint64_t budget = 1u << 16);

}  // namespace tmlab
