#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tmlab {

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Blank = 2 };
enum class Move : std::uint8_t { Left = 0, Right = 1 };

inline constexpr std::uint32_t kNumSymbols = 3;

using State = std::uint32_t;

// Bit strings are ASCII '0'/'1' throughout: encodings, inputs, .tm files.
using Bits = std::string;

// Sequence of branch indices, one per step.
using Path = std::vector<std::uint32_t>;

struct Transition {
  State next = 0;
  Symbol write = Symbol::Blank;
  Move move = Move::Right;

  auto operator<=>(const Transition&) const = default;
};

char symbol_char(Symbol s);    // '0', '1', '_'
Symbol symbol_from_char(char c);  // throws std::invalid_argument

// Nondeterministic single-tape machine over {0, 1, blank}. State 0 is the
// start state. Each (state, symbol) cell holds an ordered list of branches;
// the position in that list is the branch index used by paths.
class Machine {
 public:
  explicit Machine(std::uint32_t num_states);

  std::uint32_t num_states() const { return num_states_; }

  void set_accepting(State s, bool accepting = true);
  bool is_accepting(State s) const { return accepting_.at(s); }
  std::vector<State> accept_states() const;

  // Appends a branch to cell (s, read). Rejects out-of-range indices and
  // duplicates within the cell.
  void add_transition(State s, Symbol read, Transition t);

  std::span<const Transition> transitions(State s, Symbol read) const {
    return cells_[cell_index(s, read)];
  }

  std::size_t num_entries() const;
  std::size_t max_branching() const;
  bool is_deterministic() const { return max_branching() <= 1; }

  // New machine with one extra state that nothing refers to.
  Machine with_extra_state() const;

  bool operator==(const Machine&) const = default;

 private:
  std::size_t cell_index(State s, Symbol read) const;

  std::uint32_t num_states_;
  std::vector<bool> accepting_;
  std::vector<std::vector<Transition>> cells_;
};

// Small named machines used throughout tests, the coHP pool and the CLI.
namespace machines {

// One state, no accept states, moves right forever on every symbol.
Machine looping();
// One state, no accept states, no transitions.
Machine halting();
// One accepting state, no transitions.
Machine accepting();
// q0 on blank branches to (q0, R) and (q1, R); q1 accepts.
Machine branching();

}  // namespace machines

}  // namespace tmlab
