#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "tmlab/codec.h"
#include "tmlab/languages.h"

namespace tmlab {

// Phase k hands program i <= k a fresh allotment of 2^(k-i) steps.
class DovetailSchedule {
 public:
  static std::uint64_t allotment(std::uint64_t phase, std::uint64_t program);
  // 2^(k-i+1) - 1 for i <= k, else 0.
  static std::uint64_t cumulative(std::uint64_t phase, std::uint64_t program);
  // 2^(k+1) - 1.
  static std::uint64_t phase_total(std::uint64_t phase);
};

// Deterministic machines in canonical encoding order: shorter encodings
// first, then lexicographic. Program i is the i-th such machine. References
// returned stay valid for the enumerator's lifetime.
class ProgramEnumerator {
 public:
  const Machine& program(std::size_t index);
  const Bits& encoding(std::size_t index);

 private:
  void extend();

  std::deque<Machine> programs_;
  std::deque<Bits> encodings_;
  std::size_t length_ = 0;
};

// All canonical encodings of deterministic machines with exactly `length`
// bits, in lexicographic order.
std::vector<Bits> deterministic_encodings_of_length(std::size_t length);

// The candidate path carried by a halted tape: cells from 0 up to the first
// blank, read as a run of unary numerals 1^c 0. An unterminated trailing run
// of 1s is dropped.
Path decode_witness_tape(const Configuration& c);

struct LevinResult {
  bool found = false;
  Path path;
  std::size_t program_index = 0;
  std::uint64_t phase = 0;
  std::uint64_t steps_used = 0;  // enumeratee step attempts plus verifier replay
  // Scheduler ledger: cumulative allotment per program after the last phase
  // that ran to completion (none if no phase completed).
  std::optional<std::uint64_t> last_complete_phase;
  std::vector<std::uint64_t> allotted;
};

// Levin's universal search: every enumerated program is run on the encoded
// instance under the dovetail schedule; whenever one halts its tape is
// decoded as a path and checked with verify_path. The first verified path in
// schedule order wins. Never claims that no witness exists.
LevinResult levin_search_witness(const Instance& inst, std::uint64_t total_budget);

// Shares the program enumeration across searches.
LevinResult levin_search_witness(const Instance& inst, std::uint64_t total_budget,
                                 ProgramEnumerator& programs);

// Reruns the search with budgets start, 2*start, ... until a witness turns up
// or the cap has been tried. The reported result is the last run's.
LevinResult levin_search_doubling(const Instance& inst, std::uint64_t start_budget,
                                  std::uint64_t cap, ProgramEnumerator& programs);

using BhpOracle = std::function<bool(const Instance&)>;

struct SchnorrResult {
  bool found = false;
  Path path;
  std::uint64_t oracle_calls = 0;
};

// Search from decision: fixes one choice at a time, asking the oracle about
// the machine forced onto the committed prefix plus each candidate choice,
// and committing to the first Yes. Throws OracleInconsistent when no choice
// continues a prefix the oracle said could be completed.
SchnorrResult schnorr_search_from_decision(const Instance& inst, const BhpOracle& oracle);

}  // namespace tmlab
