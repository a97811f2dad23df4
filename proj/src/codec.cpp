#include "tmlab/codec.h"

#include <algorithm>

namespace tmlab {

namespace {

void require_bits(std::string_view s) {
  if (!is_bit_string(s)) throw MalformedEncoding("not a 0/1 string");
}

}  // namespace

bool is_bit_string(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

Bits encode_unary(std::uint64_t n) {
  Bits out(n, '1');
  out.push_back('0');
  return out;
}

Bits encode_machine(const Machine& m) {
  Bits out = encode_unary(m.num_states());
  const auto accepts = m.accept_states();
  out += encode_unary(accepts.size());
  for (State a : accepts) out += encode_unary(a);
  out += encode_unary(m.num_entries());
  for (State s = 0; s < m.num_states(); ++s) {
    for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym) {
      for (const auto& t : m.transitions(s, static_cast<Symbol>(sym))) {
        out += encode_unary(s);
        out += encode_unary(sym);
        out += encode_unary(t.next);
        out += encode_unary(static_cast<std::uint32_t>(t.write));
        out += encode_unary(static_cast<std::uint32_t>(t.move));
      }
    }
  }
  return out;
}

Bits encode_input(std::string_view x) {
  Bits out;
  out.reserve(2 * x.size() + 1);
  for (char c : x) {
    out.push_back('1');
    out.push_back(c);
  }
  out.push_back('0');
  return out;
}

Machine decode_machine(std::string_view bits) {
  require_bits(bits);
  BitParser<StringSource> parser(StringSource{bits});
  Machine m = parser.read_machine();
  if (parser.position() != bits.size()) throw MalformedEncoding("trailing bits after machine");
  return m;
}

std::optional<Machine> try_decode_machine(std::string_view bits) {
  try {
    return decode_machine(bits);
  } catch (const MalformedEncoding&) {
    return std::nullopt;
  }
}

Bits encode_instance(const Machine& m, std::string_view x, std::uint64_t t) {
  Bits out = encode_machine(m);
  out += encode_input(x);
  out.append(t, '1');
  return out;
}

Instance::Instance(Machine machine, Bits input, std::uint64_t bound)
    : machine_(std::move(machine)), input_(std::move(input)), bound_(bound) {
  if (!is_bit_string(input_)) throw std::invalid_argument("instance input must be a 0/1 string");
  encoded_ = encode_instance(machine_, input_, bound_);
}

Instance decode_instance(std::string_view bits) {
  require_bits(bits);
  BitParser<StringSource> parser(StringSource{bits});
  Machine m = parser.read_machine();
  Bits x = parser.read_input();
  const std::uint64_t t = parser.read_pad();
  return Instance(std::move(m), std::move(x), t);
}

std::optional<Instance> try_decode_instance(std::string_view bits) {
  try {
    return decode_instance(bits);
  } catch (const MalformedEncoding&) {
    return std::nullopt;
  }
}

}  // namespace tmlab
