#include "tmlab/machine.h"

#include <algorithm>
#include <stdexcept>

namespace tmlab {

char symbol_char(Symbol s) {
  switch (s) {
    case Symbol::Zero:
      return '0';
    case Symbol::One:
      return '1';
    case Symbol::Blank:
      return '_';
  }
  return '?';
}

Symbol symbol_from_char(char c) {
  switch (c) {
    case '0':
      return Symbol::Zero;
    case '1':
      return Symbol::One;
    case '_':
      return Symbol::Blank;
    default:
      throw std::invalid_argument(std::string("bad symbol '") + c + "'");
  }
}

Machine::Machine(std::uint32_t num_states)
    : num_states_(num_states),
      accepting_(num_states, false),
      cells_(static_cast<std::size_t>(num_states) * kNumSymbols) {
  if (num_states == 0) throw std::invalid_argument("machine needs at least one state");
}

std::size_t Machine::cell_index(State s, Symbol read) const {
  if (s >= num_states_ || static_cast<std::uint32_t>(read) >= kNumSymbols)
    throw std::out_of_range("transition cell out of range");
  return static_cast<std::size_t>(s) * kNumSymbols + static_cast<std::size_t>(read);
}

void Machine::set_accepting(State s, bool accepting) {
  if (s >= num_states_) throw std::out_of_range("accept state out of range");
  accepting_[s] = accepting;
}

std::vector<State> Machine::accept_states() const {
  std::vector<State> out;
  for (State s = 0; s < num_states_; ++s)
    if (accepting_[s]) out.push_back(s);
  return out;
}

void Machine::add_transition(State s, Symbol read, Transition t) {
  if (t.next >= num_states_ || static_cast<std::uint32_t>(t.write) >= kNumSymbols ||
      static_cast<std::uint32_t>(t.move) > 1)
    throw std::out_of_range("transition target out of range");
  auto& cell = cells_[cell_index(s, read)];
  if (std::find(cell.begin(), cell.end(), t) != cell.end())
    throw std::invalid_argument("duplicate transition in cell");
  cell.push_back(t);
}

std::size_t Machine::num_entries() const {
  std::size_t n = 0;
  for (const auto& cell : cells_) n += cell.size();
  return n;
}

std::size_t Machine::max_branching() const {
  std::size_t b = 0;
  for (const auto& cell : cells_) b = std::max(b, cell.size());
  return b;
}

Machine Machine::with_extra_state() const {
  Machine out(num_states_ + 1);
  for (State s = 0; s < num_states_; ++s) {
    out.accepting_[s] = accepting_[s];
    for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym)
      out.cells_[out.cell_index(s, static_cast<Symbol>(sym))] =
          cells_[cell_index(s, static_cast<Symbol>(sym))];
  }
  return out;
}

namespace machines {

Machine looping() {
  Machine m(1);
  for (auto s : {Symbol::Zero, Symbol::One, Symbol::Blank})
    m.add_transition(0, s, {0, s, Move::Right});
  return m;
}

Machine halting() { return Machine(1); }

Machine accepting() {
  Machine m(1);
  m.set_accepting(0);
  return m;
}

Machine branching() {
  Machine m(2);
  m.set_accepting(1);
  m.add_transition(0, Symbol::Blank, {0, Symbol::Blank, Move::Right});
  m.add_transition(0, Symbol::Blank, {1, Symbol::Blank, Move::Right});
  return m;
}

}  // namespace machines

}  // namespace tmlab
