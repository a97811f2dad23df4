#include "tmlab/simulate.h"

#include <map>

namespace tmlab {

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(c.state);
  mix(c.head);
  mix(c.tape.size());
  for (Symbol s : c.tape) mix(static_cast<std::size_t>(s));
  return h;
}

Configuration start_configuration(std::string_view input) {
  Configuration c;
  c.tape.reserve(input.size());
  for (char ch : input) c.tape.push_back(ch == '1' ? Symbol::One : Symbol::Zero);
  return c;
}

Configuration apply_transition(const Configuration& c, const Transition& t) {
  Configuration n;
  n.state = t.next;
  n.steps = c.steps + 1;
  n.tape = c.tape;
  if (c.head < n.tape.size()) {
    n.tape[c.head] = t.write;
  } else if (t.write != Symbol::Blank) {
    n.tape.resize(c.head + 1, Symbol::Blank);
    n.tape[c.head] = t.write;
  }
  while (!n.tape.empty() && n.tape.back() == Symbol::Blank) n.tape.pop_back();
  if (t.move == Move::Right) {
    n.head = c.head + 1;
  } else {
    n.head = c.head == 0 ? 0 : c.head - 1;
  }
  return n;
}

std::vector<Configuration> step_successors(const Machine& m, const Configuration& c) {
  std::vector<Configuration> out;
  const auto branches = m.transitions(c.state, c.scanned());
  out.reserve(branches.size());
  for (const auto& t : branches) out.push_back(apply_transition(c, t));
  return out;
}

std::optional<Configuration> replay(const Machine& m, std::string_view input, const Path& path) {
  Configuration c = start_configuration(input);
  for (std::uint32_t choice : path) {
    const auto branches = m.transitions(c.state, c.scanned());
    if (choice >= branches.size()) return std::nullopt;
    c = apply_transition(c, branches[choice]);
  }
  return c;
}

Machine force_choices(const Machine& m, const Path& prefix) {
  // Layer 0 is the start state; layer j + 1 collects the targets of the
  // forced branch taken from any state of layer j on any symbol.
  std::vector<std::vector<State>> layers{{0}};
  for (std::uint32_t choice : prefix) {
    std::vector<bool> seen(m.num_states(), false);
    std::vector<State> next;
    for (State s : layers.back()) {
      for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym) {
        const auto branches = m.transitions(s, static_cast<Symbol>(sym));
        if (choice < branches.size() && !seen[branches[choice].next]) {
          seen[branches[choice].next] = true;
          next.push_back(branches[choice].next);
        }
      }
    }
    layers.push_back(std::move(next));
  }
  layers.pop_back();  // the final layer is the original machine itself

  std::vector<std::map<State, State>> copy_index(layers.size());
  std::uint32_t copies = 0;
  for (std::size_t j = 0; j < layers.size(); ++j)
    for (State s : layers[j]) copy_index[j][s] = copies++;
  const State offset = copies;

  Machine out(offset + m.num_states());
  for (State s = 0; s < m.num_states(); ++s) {
    out.set_accepting(offset + s, m.is_accepting(s));
    for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym)
      for (const auto& t : m.transitions(s, static_cast<Symbol>(sym)))
        out.add_transition(offset + s, static_cast<Symbol>(sym),
                           {offset + t.next, t.write, t.move});
  }
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const std::uint32_t choice = prefix[j];
    for (auto [s, copy] : copy_index[j]) {
      out.set_accepting(copy, m.is_accepting(s));
      for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym) {
        const auto branches = m.transitions(s, static_cast<Symbol>(sym));
        if (choice >= branches.size()) continue;
        const Transition& t = branches[choice];
        const State target =
            j + 1 < layers.size() ? copy_index[j + 1].at(t.next) : offset + t.next;
        out.add_transition(copy, static_cast<Symbol>(sym), {target, t.write, t.move});
      }
    }
  }
  return out;
}

Machine force_first_choice(const Machine& m, std::uint32_t branch) {
  return force_choices(m, Path{branch});
}

std::string tape_string(const Configuration& c) {
  std::string out;
  for (Symbol s : c.tape) out.push_back(symbol_char(s));
  return out;
}

}  // namespace tmlab
