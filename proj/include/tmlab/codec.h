#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "tmlab/errors.h"
#include "tmlab/machine.h"

namespace tmlab {

// Self-delimiting layout, parsed strictly left to right:
//
//   U(n)      = 1^n 0
//   E(m)      = U(states) U(#accept) U(a_1)..U(a_k) U(#entries) entries
//   entry     = U(state) U(read) U(next) U(write) U(move)
//   E(x)      = 1b per bit b, then a single 0
//   instance  = E(m) E(x) 1^t
//
// Symbols encode as 0, 1, 2 (blank); moves as 0 (left), 1 (right). Accept
// indices are strictly increasing; entries are ordered by (state, read) and
// keep branch order within a cell.

Bits encode_unary(std::uint64_t n);
Bits encode_machine(const Machine& m);
Bits encode_input(std::string_view x);

// Throws MalformedEncoding, including on trailing garbage.
Machine decode_machine(std::string_view bits);
std::optional<Machine> try_decode_machine(std::string_view bits);

bool is_bit_string(std::string_view s);

class Instance {
 public:
  Instance(Machine machine, Bits input, std::uint64_t bound);

  const Machine& machine() const { return machine_; }
  const Bits& input() const { return input_; }
  std::uint64_t bound() const { return bound_; }
  const Bits& encoded() const { return encoded_; }

  // |E(machine) E(input)|: where the unary pad starts.
  std::size_t prefix_length() const { return encoded_.size() - bound_; }

  bool operator==(const Instance& o) const {
    return bound_ == o.bound_ && input_ == o.input_ && machine_ == o.machine_;
  }

 private:
  Machine machine_;
  Bits input_;
  std::uint64_t bound_;
  Bits encoded_;
};

Bits encode_instance(const Machine& m, std::string_view x, std::uint64_t t);
Instance decode_instance(std::string_view bits);
std::optional<Instance> try_decode_instance(std::string_view bits);

// Strict left-to-right parser over any positional bit source. The source is
// a callable `std::optional<bool>(std::size_t)` returning nullopt past the
// end. Acceptors run it over their instrumented reader so that every symbol
// the parser looks at is a charged read.
template <class Source>
class BitParser {
 public:
  explicit BitParser(Source source, std::size_t start = 0)
      : source_(std::move(source)), pos_(start) {}

  std::size_t position() const { return pos_; }

  std::optional<bool> next_bit() { return source_(pos_++); }

  std::uint64_t read_unary() {
    std::uint64_t n = 0;
    for (;;) {
      auto b = next_bit();
      if (!b) throw MalformedEncoding("truncated unary numeral at " + std::to_string(pos_ - 1));
      if (!*b) return n;
      ++n;
    }
  }

  Machine read_machine() {
    const std::uint64_t n = read_unary();
    if (n == 0) throw MalformedEncoding("machine with zero states");
    if (n > (1u << 20)) throw MalformedEncoding("state count too large");
    Machine m(static_cast<std::uint32_t>(n));
    const std::uint64_t k = read_unary();
    if (k > n) throw MalformedEncoding("more accept states than states");
    std::optional<std::uint64_t> prev;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t a = read_unary();
      if (a >= n || (prev && a <= *prev)) throw MalformedEncoding("accept states not canonical");
      m.set_accepting(static_cast<State>(a));
      prev = a;
    }
    const std::uint64_t entries = read_unary();
    std::uint64_t last_cell = 0;
    for (std::uint64_t e = 0; e < entries; ++e) {
      const std::uint64_t s = read_unary();
      const std::uint64_t sym = read_unary();
      const std::uint64_t next = read_unary();
      const std::uint64_t write = read_unary();
      const std::uint64_t move = read_unary();
      if (s >= n || sym >= kNumSymbols || next >= n || write >= kNumSymbols || move > 1)
        throw MalformedEncoding("transition field out of range");
      const std::uint64_t cell = s * kNumSymbols + sym;
      if (e > 0 && cell < last_cell) throw MalformedEncoding("transitions not in canonical order");
      last_cell = cell;
      const Transition t{static_cast<State>(next), static_cast<Symbol>(write),
                         static_cast<Move>(move)};
      for (const auto& existing : m.transitions(static_cast<State>(s), static_cast<Symbol>(sym)))
        if (existing == t) throw MalformedEncoding("duplicate transition");
      m.add_transition(static_cast<State>(s), static_cast<Symbol>(sym), t);
    }
    return m;
  }

  Bits read_input() {
    Bits x;
    for (;;) {
      auto b = next_bit();
      if (!b) throw MalformedEncoding("truncated input field");
      if (!*b) return x;
      auto bit = next_bit();
      if (!bit) throw MalformedEncoding("truncated input bit");
      x.push_back(*bit ? '1' : '0');
    }
  }

  // Consumes 1s to the end of the source; a 0 is malformed.
  std::uint64_t read_pad() {
    std::uint64_t t = 0;
    for (;;) {
      auto b = next_bit();
      if (!b) return t;
      if (!*b) throw MalformedEncoding("zero inside unary pad");
      ++t;
    }
  }

  bool at_end() { return !source_(pos_).has_value(); }

 private:
  Source source_;
  std::size_t pos_;
};

// Source over an in-memory bit string.
struct StringSource {
  std::string_view bits;
  std::optional<bool> operator()(std::size_t pos) const {
    if (pos >= bits.size()) return std::nullopt;
    return bits[pos] == '1';
  }
};

}  // namespace tmlab
