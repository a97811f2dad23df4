#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tmlab/corpus.h"
#include "tmlab/languages.h"
#include "tmlab/runtime.h"
#include "tmlab/speedup.h"

using namespace tmlab;

namespace {

Acceptor reads_then(std::size_t pos, Verdict v) {
  return {"reads-" + std::to_string(pos),
          [pos, v](InputReader& r) {
            r.read_at(pos);
            return v;
          },
          {}};
}

// Accepts iff the first k cells hold an even number of 1s; never looks further.
Acceptor parity_of_prefix(std::size_t k) {
  return {"parity",
          [k](InputReader& r) {
            int ones = 0;
            for (std::size_t i = 0; i < k; ++i) ones += r.read_at(i) == ReadResult::One;
            r.charge(2);
            return ones % 2 == 0 ? Verdict::Accept : Verdict::Reject;
          },
          {}};
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  Bits out(n, '0');
  for (auto& c : out) c = rng() & 1 ? '1' : '0';
  return out;
}

}  // namespace

TEST_CASE("a run without reads costs its internal ops") {
  const Acceptor a{"silent",
                   [](InputReader& r) {
                     r.charge(3);
                     return Verdict::Reject;
                   },
                   {}};
  const auto rep = run_measured(a, "0101", 100);
  CHECK(rep.outcome == Outcome::Reject);
  CHECK(rep.steps == 3);
  CHECK(rep.internal_ops == 3);
  CHECK_FALSE(rep.max_pos_read.has_value());
  CHECK(rep.input_length == 4);
}

TEST_CASE("one read far out costs the distance") {
  const auto rep = run_measured(reads_then(41, Verdict::Accept), "", 100);
  CHECK(rep.outcome == Outcome::Accept);
  CHECK(rep.steps == 42);
  CHECK(rep.internal_ops == 1);
  CHECK(rep.max_pos_read == 41u);
  REQUIRE(rep.transcript.size() == 1);
  CHECK(rep.transcript[0] == ReadEvent{41, ReadResult::PastEnd});
}

TEST_CASE("reader reports symbols and the end") {
  const Acceptor a{"probe",
                   [](InputReader& r) {
                     CHECK(r.read_at(0) == ReadResult::One);
                     CHECK(r.read_at(1) == ReadResult::Zero);
                     CHECK(r.read_at(2) == ReadResult::PastEnd);
                     CHECK(r.read_at(1000) == ReadResult::PastEnd);
                     CHECK(r.read_at(0) == ReadResult::One);
                     return Verdict::Accept;
                   },
                   {}};
  const auto rep = run_measured(a, "10", 100);
  CHECK(rep.internal_ops == 5);  // re-reads are charged too
  CHECK(rep.steps == 1001);
}

TEST_CASE("budget overrun is an outcome") {
  const Acceptor spin{"spin",
                      [](InputReader& r) {
                        for (;;) r.charge(1);
                        return Verdict::Accept;
                      },
                      {}};
  const auto rep = run_measured(spin, "1", 50);
  CHECK(rep.outcome == Outcome::BudgetFlag);
  CHECK(rep.internal_ops <= 51);
  CHECK(to_string(rep.outcome) == "BudgetFlag");
  CHECK(outcome_from_string("BudgetFlag") == Outcome::BudgetFlag);
}

TEST_CASE("csv rows") {
  CHECK(csv_header() == "acceptor,inputId,outcome,steps,maxPosRead,internalOps,inputLength");
  CHECK(csv_row("a", "i", run_measured(reads_then(3, Verdict::Reject), "01", 10)) ==
        "a,i,Reject,4,3,1,2");
  const Acceptor silent{"s", [](InputReader&) { return Verdict::Accept; }, {}};
  CHECK(csv_row("s", "j", run_measured(silent, "", 10)) == "s,j,Accept,0,,0,0");
}

TEST_CASE("nested runs charge the inner steps") {
  const Acceptor inner = reads_then(9, Verdict::Accept);
  const Acceptor outer{"outer",
                       [&](InputReader& r) {
                         r.read_at(0);
                         return run_nested(r, inner, "1");
                       },
                       {}};
  const auto rep = run_measured(outer, "1", 100);
  CHECK(rep.outcome == Outcome::Accept);
  CHECK(rep.internal_ops == 11);
  CHECK(rep.max_pos_read == 0u);
  CHECK(rep.steps == 11);
}

TEST_CASE("runs depend only on the cells read") {
  std::mt19937_64 rng(17);
  const auto pool = curated_cohp_pool();
  const std::vector<Acceptor> acceptors = {
      parity_of_prefix(5), parity_of_prefix(12),
      hardwire_transform(reference_cobhp_acceptor(), pool[0]),
      no_accept_shortcut(reference_cobhp_acceptor()),
      closed_orbit_shortcut(reference_cobhp_acceptor())};
  std::vector<Bits> inputs;
  for (const auto& inst : random_corpus(8, 60, {})) inputs.push_back(inst.encoded());
  for (std::uint64_t t : {0, 3, 40}) {
    for (const auto& p : pool) inputs.push_back(encode_instance(p.machine, p.input, t));
  }
  for (int k = 0; k < 40; ++k) inputs.push_back(random_bits(rng, rng() % 30));

  std::size_t exercised = 0;
  for (const auto& a : acceptors)
    for (const auto& x : inputs) {
      const auto rep = run_measured(a, x, 1 << 24);
      REQUIRE(rep.steps >= (rep.max_pos_read ? *rep.max_pos_read + 1 : 0));
      REQUIRE(replay_reproduces(a, rep, x, 1 << 24));
      if (!rep.max_pos_read) continue;
      const std::size_t seen = *rep.max_pos_read;
      // Rewrite every cell the run did not look at, and extend past the end
      // when the run never saw the end.
      for (int trial = 0; trial < 5; ++trial) {
        Bits y = x;
        const bool saw_end = seen >= x.size();
        if (!saw_end) y += random_bits(rng, 1 + rng() % 20);
        for (std::size_t i = 0; i < y.size(); ++i) {
          bool read = false;
          for (const auto& ev : rep.transcript) read |= ev.position == i;
          if (!read) y[i] = rng() & 1 ? '1' : '0';
        }
        if (!agrees_with_transcript(y, rep.transcript)) continue;
        ++exercised;
        REQUIRE(replay_reproduces(a, rep, y, 1 << 24));
      }
    }
  CHECK(exercised > 500);
}

TEST_CASE("transcript agreement") {
  const std::vector<ReadEvent> t = {{0, ReadResult::One}, {2, ReadResult::PastEnd}};
  CHECK(agrees_with_transcript("10", t));
  CHECK(agrees_with_transcript("11", t));
  CHECK_FALSE(agrees_with_transcript("01", t));
  CHECK_FALSE(agrees_with_transcript("101", t));
  CHECK(agrees_with_transcript("1", t));
  CHECK_FALSE(agrees_with_transcript("", t));
}

TEST_CASE("floor audit counts runs") {
  const auto before = floor_audit();
  run_measured(reads_then(2, Verdict::Accept), "111", 10);
  const auto after = floor_audit();
  CHECK(after.runs == before.runs + 1);
  CHECK(after.violations == 0);
}
