#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>

#include "oracle.h"
#include "tmlab/corpus.h"
#include "tmlab/json_io.h"
#include "tmlab/languages.h"

using namespace tmlab;

namespace {

// Two branches on blank.
Machine forked() {
  Machine d(1);
  d.add_transition(0, Symbol::Blank, {0, Symbol::One, Move::Right});
  d.add_transition(0, Symbol::Blank, {0, Symbol::One, Move::Left});
  return d;
}

// Writes 0, then 1, on cell 0 (left moves stay put), then accepts on the 1:
// three steps.
Machine three_step_dtm() {
  Machine d(2);
  d.set_accepting(1);
  d.add_transition(0, Symbol::Zero, {0, Symbol::One, Move::Left});
  d.add_transition(0, Symbol::One, {1, Symbol::One, Move::Right});
  d.add_transition(0, Symbol::Blank, {0, Symbol::Zero, Move::Left});
  return d;
}

}  // namespace

TEST_CASE("bounded halting examples") {
  const auto acc = decide_bhp(Instance(machines::accepting(), "", 0), 1 << 10);
  CHECK(acc.accepted);
  CHECK(acc.path.empty());
  for (std::uint64_t t = 0; t <= 64; ++t)
    REQUIRE_FALSE(decide_bhp(Instance(machines::looping(), "", t), 1 << 12).accepted);
  const auto br = decide_bhp(Instance(machines::branching(), "", 1), 1 << 10);
  CHECK(br.accepted);
  CHECK(br.path == Path{1});
  CHECK_FALSE(decide_bhp(Instance(machines::branching(), "", 0), 1 << 10).accepted);
}

TEST_CASE("configuration budget") {
  // Every depth holds two fresh configurations, so 2t are generated.
  Machine m(1);
  m.add_transition(0, Symbol::Blank, {0, Symbol::Zero, Move::Right});
  m.add_transition(0, Symbol::Blank, {0, Symbol::One, Move::Right});
  CHECK_THROWS_AS(decide_bhp(Instance(m, "", 20), 16), BudgetExceeded);
  CHECK_NOTHROW(decide_bhp(Instance(m, "", 3), 1 << 10));
}

TEST_CASE("decide_bhp finds shortest verified paths") {
  for (const auto& m : exhaustive_machines(2, 2))
    for (const auto& x : all_inputs(2)) {
      const auto best = oracle::shortest_accepting(m, x, 6);
      for (std::uint64_t t = 0; t <= 6; ++t) {
        const auto a = decide_bhp(Instance(m, x, t), 1 << 16);
        REQUIRE(a.accepted == (best && *best <= t));
        if (a.accepted) {
          REQUIRE(a.path.size() == *best);
          REQUIRE(oracle::replay_accepts(m, x, t, a.path));
          REQUIRE(verify_path(Instance(m, x, t), a.path));
        }
      }
    }
}

TEST_CASE("monotone in the bound") {
  for (const auto& inst : random_corpus(21, 300, {3, 3, 6, false})) {
    const bool now = decide_bhp(inst, 1 << 16).accepted;
    const bool later = decide_bhp(Instance(inst.machine(), inst.input(), inst.bound() + 1), 1 << 16).accepted;
    REQUIRE((!now || later));
  }
}

TEST_CASE("no path verifies on a No instance") {
  for (const auto& m : exhaustive_machines(2, 2))
    for (const auto& x : all_inputs(1))
      for (std::uint64_t t = 0; t <= 3; ++t) {
        const Instance inst(m, x, t);
        if (decide_bhp(inst, 1 << 16).accepted) continue;
        for (std::size_t len = 0; len <= t; ++len)
          for (const auto& p : oracle::all_paths(m, x, len)) REQUIRE_FALSE(verify_path(inst, p));
      }
}

TEST_CASE("deterministic bounded halting") {
  CHECK(decide_dbhp(Instance(machines::accepting(), "", 5)).accepted);
  CHECK_FALSE(decide_dbhp(Instance(machines::looping(), "", 500)).accepted);
  CHECK_THROWS_AS(decide_dbhp(Instance(machines::branching(), "", 1)), NotDeterministic);
  CHECK_THROWS_AS(decide_dbhp(Instance(forked(), "", 1)), NotDeterministic);

  const Machine d = three_step_dtm();
  CHECK_FALSE(decide_dbhp(Instance(d, "", 2)).accepted);
  CHECK(decide_dbhp(Instance(d, "", 3)).accepted);
  CHECK_FALSE(oracle::dtm_accepts(d, "", 2));
  CHECK(oracle::dtm_accepts(d, "", 3));
}

TEST_CASE("decide_dbhp agrees with the independent simulator") {
  for (const auto& m : exhaustive_machines(2, 3)) {
    if (!m.is_deterministic()) continue;
    for (const auto& x : all_inputs(2))
      for (std::uint64_t t = 0; t <= 6; ++t)
        REQUIRE(decide_dbhp(Instance(m, x, t)).accepted == oracle::dtm_accepts(m, x, t));
  }
}

TEST_CASE("verify_path examples") {
  const Instance br(machines::branching(), "", 1);
  CHECK(verify_path(br, {1}));
  CHECK_FALSE(verify_path(br, {0}));
  CHECK_FALSE(verify_path(br, {2}));
  CHECK_FALSE(verify_path(Instance(machines::branching(), "", 0), {1}));
  CHECK(verify_path(Instance(machines::accepting(), "", 0), {}));
  CHECK_FALSE(verify_path(Instance(machines::looping(), "", 4), {}));
  // Choices after acceptance are never taken.
  CHECK(verify_path(Instance(machines::accepting(), "", 0), {7, 7}));
}

TEST_CASE("curated pool") {
  const auto pool = curated_cohp_pool();
  CHECK(pool.size() >= 8);
  std::set<std::string> names;
  bool loop_with_two_states = false;
  for (const auto& p : pool) {
    REQUIRE(validate_proof(p));
    REQUIRE(names.insert(p.name).second);
    if (p.proof == ProofTag::StructuralLoop && p.machine.num_states() >= 2) loop_with_two_states = true;
    for (std::uint64_t t = 0; t <= 64; ++t)
      REQUIRE_FALSE(decide_bhp(Instance(p.machine, p.input, t), 1 << 20).accepted);
  }
  CHECK(loop_with_two_states);
  CHECK(pool[0].name == "loop/eps");
  CHECK(pool[0].machine == machines::looping());
  CHECK(pool[0].proof == ProofTag::NoAcceptState);
  CHECK(pool[1].machine == machines::halting());
  CHECK(pool[1].proof == ProofTag::DeadEndBeforeAccept);
}

TEST_CASE("ping-pong pair closes up within four configurations") {
  const auto pool = curated_cohp_pool();
  const HaltingPair* pp = nullptr;
  for (const auto& p : pool)
    if (p.name == "pingpong/eps") pp = &p;
  REQUIRE(pp != nullptr);
  CHECK(pp->machine.num_states() == 2);
  CHECK(pp->proof == ProofTag::StructuralLoop);
  const auto check = check_proof(*pp);
  CHECK(check.valid);
  CHECK(check.configurations <= 4);

  // Independent exhaustion of the reachable set.
  std::set<std::tuple<std::uint32_t, std::string, std::size_t>> seen;
  std::vector<oracle::Config> work{oracle::start(pp->input)};
  while (!work.empty()) {
    auto c = work.back();
    work.pop_back();
    if (!seen.insert({c.state, oracle::trimmed(c.tape), c.head}).second) continue;
    REQUIRE(seen.size() <= 4);
    REQUIRE_FALSE(pp->machine.is_accepting(c.state));
    for (std::size_t b = 0; b < oracle::branches(pp->machine, c); ++b)
      work.push_back(oracle::take(pp->machine, c, b));
  }
  CHECK(seen.size() == check.configurations);
  CHECK_FALSE(pp->machine.accept_states().empty());
}

TEST_CASE("bogus proofs are rejected") {
  HaltingPair p{"x", machines::accepting(), "", ProofTag::NoAcceptState, "", 64};
  CHECK_FALSE(validate_proof(p));
  p.proof = ProofTag::DeadEndBeforeAccept;
  CHECK_FALSE(validate_proof(p));
  p = {"x", machines::looping(), "", ProofTag::StructuralLoop, "", 64};
  CHECK_FALSE(validate_proof(p));  // tape grows forever
  p = {"x", machines::branching(), "", ProofTag::DeadEndBeforeAccept, "", 64};
  CHECK_FALSE(validate_proof(p));
  p = {"x", machines::looping(), "", ProofTag::DeadEndBeforeAccept, "", 64};
  CHECK_FALSE(validate_proof(p));  // frontier never empties
}

TEST_CASE("shipped pool file matches the built-in pool") {
  std::ifstream in(TMLAB_DATA_DIR "/cohp_pool.json");
  REQUIRE(in.good());
  const auto j = nlohmann::json::parse(in);
  CHECK(pool_from_json(j) == curated_cohp_pool());
  CHECK(pool_from_json(pool_to_json(curated_cohp_pool())) == curated_cohp_pool());
}

TEST_CASE("reference acceptors") {
  const Acceptor ref = reference_cobhp_acceptor();
  const Bits loop8 = encode_instance(machines::looping(), "", 8);
  const auto r = run_measured(ref, loop8, 1 << 24);
  CHECK(r.outcome == Outcome::Accept);
  CHECK(r.steps >= loop8.size());
  CHECK(r.max_pos_read == loop8.size());  // probes one past the end
  CHECK(run_measured(ref, encode_instance(machines::accepting(), "", 3), 1 << 24).outcome == Outcome::Reject);
  CHECK(run_measured(ref, encode_instance(machines::branching(), "", 0), 1 << 24).outcome == Outcome::Accept);
  CHECK(run_measured(ref, "11", 1 << 24).outcome == Outcome::Reject);
  CHECK(run_measured(ref, "", 1 << 24).outcome == Outcome::Reject);
  CHECK(run_measured(ref, "1010000101", 1 << 24).outcome == Outcome::Reject);

  const Acceptor dref = reference_codbhp_acceptor();
  CHECK(run_measured(dref, loop8, 1 << 24).outcome == Outcome::Accept);
  CHECK(run_measured(dref, encode_instance(machines::branching(), "", 0), 1 << 24).outcome == Outcome::Reject);
  CHECK(run_measured(dref, encode_instance(machines::accepting(), "", 0), 1 << 24).outcome == Outcome::Reject);
}

TEST_CASE("reference acceptor is the complement of decide_bhp") {
  const Acceptor ref = reference_cobhp_acceptor();
  const Acceptor dref = reference_codbhp_acceptor();
  for (const auto& inst : random_corpus(4, 300, {})) {
    const bool in_bhp = decide_bhp(inst, 1 << 20).accepted;
    const auto r = run_measured(ref, inst.encoded(), 1 << 26);
    REQUIRE(r.outcome == (in_bhp ? Outcome::Reject : Outcome::Accept));
    REQUIRE(r.steps >= inst.encoded().size());
    if (inst.machine().is_deterministic()) {
      REQUIRE(run_measured(dref, inst.encoded(), 1 << 26).outcome == r.outcome);
    }
  }
}

TEST_CASE("search budget overrun is flagged, not answered") {
  Machine m(1);
  m.add_transition(0, Symbol::Blank, {0, Symbol::Zero, Move::Right});
  m.add_transition(0, Symbol::Blank, {0, Symbol::One, Move::Right});
  const auto r = run_measured(reference_cobhp_acceptor(), encode_instance(m, "", 8), 20);
  CHECK(r.outcome == Outcome::BudgetFlag);
}
