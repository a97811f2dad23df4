#include "tmlab/runtime.h"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

#include "tmlab/errors.h"

namespace tmlab {

namespace {

// Thrown through the acceptor's stack when it runs out of budget.
struct BudgetExhausted {};

std::atomic<std::uint64_t> g_runs{0};
std::atomic<std::uint64_t> g_floor_violations{0};

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Accept:
      return "Accept";
    case Outcome::Reject:
      return "Reject";
    case Outcome::BudgetFlag:
      return "BudgetFlag";
  }
  return "?";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "Accept") return Outcome::Accept;
  if (s == "Reject") return Outcome::Reject;
  if (s == "BudgetFlag") return Outcome::BudgetFlag;
  throw std::invalid_argument("unknown outcome " + std::string(s));
}

InputReader::InputReader(std::string_view input, std::uint64_t step_budget)
    : input_(input), budget_(step_budget) {}

ReadResult InputReader::read_at(std::size_t position) {
  charge(1);
  max_pos_ = max_pos_ ? std::max(*max_pos_, position) : position;
  ReadResult r = ReadResult::PastEnd;
  if (position < input_.size()) r = input_[position] == '1' ? ReadResult::One : ReadResult::Zero;
  transcript_.push_back({position, r});
  return r;
}

void InputReader::charge(std::uint64_t ops) {
  internal_ops_ += ops;
  if (internal_ops_ > budget_) throw BudgetExhausted{};
}

RunReport run_measured(const Acceptor& a, std::string_view input, std::uint64_t step_budget) {
  if (step_budget == 0) throw std::invalid_argument("step budget must be positive");
  InputReader reader(input, step_budget);
  RunReport report;
  try {
    report.outcome = a.behavior(reader) == Verdict::Accept ? Outcome::Accept : Outcome::Reject;
  } catch (const BudgetExhausted&) {
    report.outcome = Outcome::BudgetFlag;
  } catch (const BudgetExceeded&) {
    report.outcome = Outcome::BudgetFlag;
  }
  report.internal_ops = reader.internal_ops();
  report.max_pos_read = reader.max_position_read();
  report.steps = report.max_pos_read ? std::max<std::uint64_t>(report.internal_ops,
                                                               *report.max_pos_read + 1)
                                     : report.internal_ops;
  report.input_length = input.size();
  report.transcript = reader.transcript();

  g_runs.fetch_add(1, std::memory_order_relaxed);
  if (report.max_pos_read && report.steps < *report.max_pos_read + 1)
    g_floor_violations.fetch_add(1, std::memory_order_relaxed);
  return report;
}

Verdict run_nested(InputReader& outer, const Acceptor& a, std::string_view input) {
  const std::uint64_t budget = outer.remaining_budget();
  if (budget == 0) {
    outer.charge(1);  // unwinds
  }
  RunReport inner = run_measured(a, input, budget);
  if (inner.outcome == Outcome::BudgetFlag) {
    outer.charge(budget + 1);  // unwinds
  }
  outer.charge(inner.steps);
  return inner.outcome == Outcome::Accept ? Verdict::Accept : Verdict::Reject;
}

bool agrees_with_transcript(std::string_view input, const std::vector<ReadEvent>& transcript) {
  for (const auto& e : transcript) {
    ReadResult r = ReadResult::PastEnd;
    if (e.position < input.size()) r = input[e.position] == '1' ? ReadResult::One : ReadResult::Zero;
    if (r != e.value) return false;
  }
  return true;
}

bool replay_reproduces(const Acceptor& a, const RunReport& original, std::string_view input,
                       std::uint64_t step_budget) {
  const RunReport again = run_measured(a, input, step_budget);
  return again.outcome == original.outcome && again.steps == original.steps &&
         again.transcript == original.transcript;
}

FloorAudit floor_audit() {
  return {g_runs.load(std::memory_order_relaxed),
          g_floor_violations.load(std::memory_order_relaxed)};
}

std::string csv_header() {
  return "acceptor,inputId,outcome,steps,maxPosRead,internalOps,inputLength";
}

std::string csv_row(std::string_view acceptor, std::string_view input_id, const RunReport& r) {
  std::ostringstream os;
  os << acceptor << ',' << input_id << ',' << to_string(r.outcome) << ',' << r.steps << ',';
  if (r.max_pos_read) os << *r.max_pos_read;
  os << ',' << r.internal_ops << ',' << r.input_length;
  return os.str();
}

}  // namespace tmlab
