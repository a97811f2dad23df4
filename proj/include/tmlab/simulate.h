#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tmlab/machine.h"

namespace tmlab {

// One-way infinite tape. Cells at or beyond tape.size() are blank; the
// stored tape never ends in a blank, so equal configurations compare equal.
struct Configuration {
  State state = 0;
  std::vector<Symbol> tape;
  std::size_t head = 0;
  std::uint64_t steps = 0;

  Symbol scanned() const { return head < tape.size() ? tape[head] : Symbol::Blank; }

  bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

Configuration start_configuration(std::string_view input);

// Applies one transition. A left move at cell 0 leaves the head at 0.
Configuration apply_transition(const Configuration& c, const Transition& t);

// Successors in branch order; empty when the machine has no move. Says
// nothing about acceptance: callers check `m.is_accepting(c.state)` on the
// current configuration before stepping.
std::vector<Configuration> step_successors(const Machine& m, const Configuration& c);

// Replays every choice in order. nullopt if some choice is out of range.
std::optional<Configuration> replay(const Machine& m, std::string_view input, const Path& path);

// Machine whose runs are exactly the runs of `m` that begin with the given
// choices. Layer j holds copies of the states reachable after j forced
// steps; a copy keeps acceptance and carries only the forced branch of each
// cell (none if the branch does not exist). After the last layer control
// passes to the unmodified states of `m`. Path lengths are preserved.
Machine force_choices(const Machine& m, const Path& prefix);

// force_choices with a single choice: adds exactly one state.
Machine force_first_choice(const Machine& m, std::uint32_t branch);

std::string tape_string(const Configuration& c);

}  // namespace tmlab
