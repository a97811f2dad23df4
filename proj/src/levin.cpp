#include "tmlab/levin.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tmlab {

std::uint64_t DovetailSchedule::allotment(std::uint64_t phase, std::uint64_t program) {
  if (program > phase) return 0;
  // Saturates: no budget we can run comes near 2^63.
  if (phase - program >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << (phase - program);
}

std::uint64_t DovetailSchedule::cumulative(std::uint64_t phase, std::uint64_t program) {
  if (program > phase) return 0;
  if (phase - program >= 63) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << (phase - program + 1)) - 1;
}

std::uint64_t DovetailSchedule::phase_total(std::uint64_t phase) {
  if (phase >= 63) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << (phase + 1)) - 1;
}

const Machine& ProgramEnumerator::program(std::size_t index) {
  while (programs_.size() <= index) extend();
  return programs_[index];
}

const Bits& ProgramEnumerator::encoding(std::size_t index) {
  while (encodings_.size() <= index) extend();
  return encodings_[index];
}

void ProgramEnumerator::extend() {
  while (true) {
    ++length_;
    if (length_ > 64) throw std::overflow_error("program enumeration too deep");
    auto batch = deterministic_encodings_of_length(length_);
    if (batch.empty()) continue;
    for (auto& bits : batch) {
      programs_.push_back(decode_machine(bits));
      encodings_.push_back(std::move(bits));
    }
    return;
  }
}

namespace {

// Emits every canonical deterministic encoding whose length is exactly the
// requested one, field by field, abandoning branches that overrun it.
class EncodingGenerator {
 public:
  explicit EncodingGenerator(std::size_t length) : length_(length) {}

  std::vector<Bits> run() {
    for (std::uint32_t n = 1; n + 1 <= length_; ++n) {
      push_unary(n);
      for (std::uint32_t k = 0; k <= n; ++k) {
        push_unary(k);
        accept_states(n, k, 0);
        pop_unary(k);
      }
      pop_unary(n);
    }
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  bool fits(std::size_t extra) const { return bits_.size() + extra <= length_; }

  void push_unary(std::uint32_t v) {
    bits_.append(v, '1');
    bits_.push_back('0');
  }
  void pop_unary(std::uint32_t v) { bits_.resize(bits_.size() - v - 1); }

  void accept_states(std::uint32_t n, std::uint32_t left, std::uint32_t from) {
    if (left == 0) {
      for (std::uint32_t m = 0; m <= 3 * n && fits(m + 1); ++m) {
        push_unary(m);
        entries(n, m, 0);
        pop_unary(m);
      }
      return;
    }
    for (std::uint32_t a = from; a < n && fits(a + 1); ++a) {
      push_unary(a);
      accept_states(n, left - 1, a + 1);
      pop_unary(a);
    }
  }

  // Deterministic: each (state, symbol) cell appears at most once, so cells
  // are strictly increasing.
  void entries(std::uint32_t n, std::uint32_t left, std::uint32_t first_cell) {
    if (left == 0) {
      if (bits_.size() == length_) out_.push_back(bits_);
      return;
    }
    // Cheapest possible entry is five one-bit numerals.
    if (!fits(5 * left)) return;
    for (std::uint32_t cell = first_cell; cell < 3 * n; ++cell) {
      const std::uint32_t s = cell / 3;
      const std::uint32_t sym = cell % 3;
      const std::size_t rest = 3 + 5 * (left - 1);
      if (!fits(s + 2 + rest)) break;
      if (!fits(s + sym + 2 + rest)) continue;
      push_unary(s);
      push_unary(sym);
      for (std::uint32_t next = 0; next < n && fits(next + 1); ++next) {
        push_unary(next);
        for (std::uint32_t write = 0; write < 3 && fits(write + 1); ++write) {
          push_unary(write);
          for (std::uint32_t move = 0; move < 2 && fits(move + 1); ++move) {
            push_unary(move);
            entries(n, left - 1, cell + 1);
            pop_unary(move);
          }
          pop_unary(write);
        }
        pop_unary(next);
      }
      pop_unary(sym);
      pop_unary(s);
    }
  }

  std::size_t length_;
  Bits bits_;
  std::vector<Bits> out_;
};

}  // namespace

std::vector<Bits> deterministic_encodings_of_length(std::size_t length) {
  return EncodingGenerator(length).run();
}

Path decode_witness_tape(const Configuration& c) {
  Path path;
  std::uint32_t run = 0;
  for (Symbol s : c.tape) {
    if (s == Symbol::Blank) break;
    if (s == Symbol::One) {
      ++run;
    } else {
      path.push_back(run);
      run = 0;
    }
  }
  return path;
}

LevinResult levin_search_witness(const Instance& inst, std::uint64_t total_budget) {
  ProgramEnumerator programs;
  return levin_search_witness(inst, total_budget, programs);
}

namespace {

// A running enumeratee, stepped in place. Besides halting it can be retired
// early when its run provably never halts:
//  - it revisits a configuration (Brent: compare against a snapshot taken at
//    every power-of-two step count);
//  - it stands on all-blank tape in some state q further right than the last
//    time it stood on all-blank tape in q, never having moved left of that
//    earlier cell in between. The run then repeats, shifted right, forever.
class Enumeratee {
 public:
  // Reuses the buffers of an earlier run.
  void reset(const Machine& program, const std::vector<Symbol>& start_tape) {
    program_ = &program;
    config_.state = 0;
    config_.tape.assign(start_tape.begin(), start_tape.end());
    config_.head = 0;
    config_.steps = 0;
    snapshot_.state = static_cast<State>(-1);
    next_snapshot_ = 1;
    frontier_.assign(program.num_states(), std::nullopt);
    finished = false;
  }

  enum class Status { Running, Halted, Diverges };

  Status step() {
    const auto branches = program_->transitions(config_.state, config_.scanned());
    if (branches.empty()) return Status::Halted;
    const Transition& t = branches[0];
    auto& tape = config_.tape;
    if (config_.head < tape.size()) {
      tape[config_.head] = t.write;
      while (!tape.empty() && tape.back() == Symbol::Blank) tape.pop_back();
    } else if (t.write != Symbol::Blank) {
      tape.resize(config_.head + 1, Symbol::Blank);
      tape[config_.head] = t.write;
    }
    config_.state = t.next;
    if (t.move == Move::Right) {
      ++config_.head;
    } else if (config_.head > 0) {
      --config_.head;
      for (auto& f : frontier_)
        if (f && *f > config_.head) f.reset();
    }
    ++config_.steps;

    if (config_.head >= tape.size()) {
      auto& f = frontier_[config_.state];
      if (f && config_.head > *f) return Status::Diverges;
      f = config_.head;
    }
    if (config_.steps == next_snapshot_) {
      snapshot_ = config_;
      next_snapshot_ *= 2;
    } else if (snapshot_.state == config_.state && snapshot_.head == config_.head &&
               snapshot_.tape == config_.tape) {
      return Status::Diverges;
    }
    return Status::Running;
  }

  const Configuration& config() const { return config_; }

  bool finished = false;

 private:
  const Machine* program_ = nullptr;
  Configuration config_;
  Configuration snapshot_;
  std::uint64_t next_snapshot_ = 1;
  std::vector<std::optional<std::size_t>> frontier_;
};

// Cost of replaying a candidate: one unit per replayed choice plus one.
std::uint64_t verification_cost(const Instance& inst, const Path& p) {
  const std::uint64_t replayed = std::min<std::uint64_t>(p.size(), inst.bound());
  return replayed + 1;
}

}  // namespace

LevinResult levin_search_witness(const Instance& inst, std::uint64_t total_budget,
                                 ProgramEnumerator& programs) {
  if (total_budget == 0) throw std::invalid_argument("Levin search needs a positive budget");
  LevinResult result;
  // Searches are sequential; keeping the enumeratees around spares an
  // allocation per program per search.
  thread_local std::vector<Enumeratee> running;
  thread_local std::vector<std::size_t> live;  // programs not yet finished
  live.clear();
  const std::vector<Symbol> start_tape = start_configuration(inst.encoded()).tape;
  auto finish = [&](LevinResult r) {
    if (r.last_complete_phase) {
      r.allotted.resize(*r.last_complete_phase + 1);
      for (std::size_t i = 0; i < r.allotted.size(); ++i)
        r.allotted[i] = DovetailSchedule::cumulative(*r.last_complete_phase, i);
    }
    return r;
  };

  for (std::uint64_t phase = 0;; ++phase) {
    if (running.size() <= phase) running.emplace_back();
    running[phase].reset(programs.program(phase), start_tape);
    live.push_back(phase);
    std::size_t kept = 0;
    for (std::size_t slot = 0; slot < live.size(); ++slot) {
      const std::size_t i = live[slot];
      const std::uint64_t share = DovetailSchedule::allotment(phase, i);
      Enumeratee& e = running[i];
      for (std::uint64_t s = 0; s < share && !e.finished; ++s) {
        if (result.steps_used == total_budget) return finish(std::move(result));
        ++result.steps_used;
        const auto status = e.step();
        if (status == Enumeratee::Status::Running) continue;
        e.finished = true;
        if (status == Enumeratee::Status::Diverges) break;
        Path candidate = decode_witness_tape(e.config());
        const std::uint64_t cost = verification_cost(inst, candidate);
        if (total_budget - result.steps_used < cost) {
          result.steps_used = total_budget;
          return finish(std::move(result));
        }
        result.steps_used += cost;
        if (verify_path(inst, candidate)) {
          result.found = true;
          result.path = std::move(candidate);
          result.program_index = i;
          result.phase = phase;
          return finish(std::move(result));
        }
      }
      if (!e.finished) live[kept++] = i;
    }
    live.resize(kept);
    result.last_complete_phase = phase;
  }
}

LevinResult levin_search_doubling(const Instance& inst, std::uint64_t start_budget,
                                  std::uint64_t cap, ProgramEnumerator& programs) {
  if (start_budget == 0 || cap == 0) throw std::invalid_argument("Levin search needs a positive budget");
  for (std::uint64_t budget = std::min(start_budget, cap);; budget = std::min(budget * 2, cap)) {
    LevinResult r = levin_search_witness(inst, budget, programs);
    if (r.found || budget == cap) return r;
  }
}

SchnorrResult schnorr_search_from_decision(const Instance& inst, const BhpOracle& oracle) {
  SchnorrResult result;
  auto ask = [&](const Instance& q) {
    ++result.oracle_calls;
    return oracle(q);
  };
  if (!ask(inst)) return result;

  const Machine& m = inst.machine();
  Path prefix;
  for (;;) {
    const auto c = replay(m, inst.input(), prefix);
    if (!c) throw OracleInconsistent("committed prefix does not replay");
    if (m.is_accepting(c->state)) {
      result.found = true;
      result.path = std::move(prefix);
      return result;
    }
    if (prefix.size() >= inst.bound())
      throw OracleInconsistent("prefix reached the bound without accepting");
    const std::size_t width = m.transitions(c->state, c->scanned()).size();
    bool extended = false;
    for (std::uint32_t choice = 0; choice < width && !extended; ++choice) {
      Path attempt = prefix;
      attempt.push_back(choice);
      if (ask(Instance(force_choices(m, attempt), inst.input(), inst.bound()))) {
        prefix = std::move(attempt);
        extended = true;
      }
    }
    if (!extended) throw OracleInconsistent("no choice extends a prefix the oracle accepted");
  }
}

}  // namespace tmlab
