#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmlab {

enum class ReadResult : std::uint8_t { Zero, One, PastEnd };
enum class Verdict : std::uint8_t { Accept, Reject };
enum class Outcome : std::uint8_t { Accept, Reject, BudgetFlag };

std::string to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct ReadEvent {
  std::size_t position;
  ReadResult value;
  bool operator==(const ReadEvent&) const = default;
};

// The only window an acceptor has onto its input. There is deliberately no
// length query: the end can be discovered by probing, never asked for.
//
// Every read costs one internal op. Acceptors charge their own bookkeeping
// through charge(). Exceeding the step budget unwinds the acceptor and the
// run is reported as BudgetFlag.
class InputReader {
 public:
  InputReader(std::string_view input, std::uint64_t step_budget);

  ReadResult read_at(std::size_t position);
  void charge(std::uint64_t ops);

  std::uint64_t internal_ops() const { return internal_ops_; }
  std::optional<std::size_t> max_position_read() const { return max_pos_; }
  const std::vector<ReadEvent>& transcript() const { return transcript_; }
  std::uint64_t remaining_budget() const {
    return internal_ops_ >= budget_ ? 0 : budget_ - internal_ops_;
  }

 private:
  std::string_view input_;
  std::uint64_t budget_;
  std::uint64_t internal_ops_ = 0;
  std::optional<std::size_t> max_pos_;
  std::vector<ReadEvent> transcript_;
};

struct Provenance {
  enum class Kind { Reference, Transformed, Composed, External };
  Kind kind = Kind::External;
  std::string base;    // transformed/composed: the underlying acceptor
  std::string detail;  // hardwired pair, reduction name, ...
};

struct Acceptor {
  std::string name;
  std::function<Verdict(InputReader&)> behavior;
  Provenance provenance;
};

struct RunReport {
  Outcome outcome = Outcome::Reject;
  std::uint64_t steps = 0;
  std::optional<std::size_t> max_pos_read;
  std::uint64_t internal_ops = 0;
  std::size_t input_length = 0;
  std::vector<ReadEvent> transcript;
};

// steps = max(internal ops, max position read + 1).
RunReport run_measured(const Acceptor& a, std::string_view input, std::uint64_t step_budget);

// Runs `a` on `input` inside an outer run, charging the inner steps to the
// outer reader as internal ops. Inner reads are not outer input reads.
Verdict run_nested(InputReader& outer, const Acceptor& a, std::string_view input);

// True iff `input` agrees with the symbols recorded in `transcript`.
bool agrees_with_transcript(std::string_view input, const std::vector<ReadEvent>& transcript);

// Re-runs `a` on `input` and checks that outcome, read sequence and steps
// equal the original report.
bool replay_reproduces(const Acceptor& a, const RunReport& original, std::string_view input,
                       std::uint64_t step_budget);

// Process-wide tally of every run_measured call and how many broke the
// steps >= max position read + 1 floor.
struct FloorAudit {
  std::uint64_t runs = 0;
  std::uint64_t violations = 0;
};
FloorAudit floor_audit();

// One CSV row: acceptor,inputId,outcome,steps,maxPosRead,internalOps,inputLength
std::string csv_header();
std::string csv_row(std::string_view acceptor, std::string_view input_id, const RunReport& r);

}  // namespace tmlab
