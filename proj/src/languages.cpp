#include "tmlab/languages.h"

#include <functional>
#include <optional>
#include <unordered_set>

namespace tmlab {

namespace {

struct Node {
  Configuration config;
  std::size_t parent;
  std::uint32_t choice;
};

Path path_to(const std::vector<Node>& nodes, std::size_t idx) {
  Path p;
  while (idx != 0) {
    p.push_back(nodes[idx].choice);
    idx = nodes[idx].parent;
  }
  return {p.rbegin(), p.rend()};
}

}  // namespace

BhpAnswer decide_bhp(const Instance& inst, std::uint64_t budget) {
  const Machine& m = inst.machine();
  std::vector<Node> nodes;
  nodes.push_back({start_configuration(inst.input()), 0, 0});

  auto hash = [&nodes](std::size_t i) { return ConfigurationHash{}(nodes[i].config); };
  auto eq = [&nodes](std::size_t a, std::size_t b) { return nodes[a].config == nodes[b].config; };

  std::size_t begin = 0;
  std::size_t end = 1;
  for (std::uint64_t depth = 0;; ++depth) {
    for (std::size_t i = begin; i < end; ++i)
      if (m.is_accepting(nodes[i].config.state)) return {true, path_to(nodes, i), nodes.size()};
    if (depth == inst.bound()) break;

    std::unordered_set<std::size_t, decltype(hash), decltype(eq)> layer(16, hash, eq);
    for (std::size_t i = begin; i < end; ++i) {
      const auto branches = m.transitions(nodes[i].config.state, nodes[i].config.scanned());
      for (std::uint32_t b = 0; b < branches.size(); ++b) {
        nodes.push_back({apply_transition(nodes[i].config, branches[b]), i, b});
        if (!layer.insert(nodes.size() - 1).second) {
          nodes.pop_back();
          continue;
        }
        if (nodes.size() > budget)
          throw BudgetExceeded("decide_bhp: more than " + std::to_string(budget) +
                               " configurations");
      }
    }
    begin = end;
    end = nodes.size();
    if (begin == end) break;
  }
  return {false, {}, nodes.size()};
}

DbhpAnswer decide_dbhp(const Instance& inst) {
  const Machine& m = inst.machine();
  if (!m.is_deterministic()) throw NotDeterministic("decide_dbhp needs a deterministic machine");
  Configuration c = start_configuration(inst.input());
  for (std::uint64_t step = 0;; ++step) {
    if (m.is_accepting(c.state)) return {true, step};
    if (step == inst.bound()) return {false, step};
    const auto branches = m.transitions(c.state, c.scanned());
    if (branches.empty()) return {false, step};
    c = apply_transition(c, branches[0]);
  }
}

bool verify_path(const Instance& inst, const Path& path) {
  const Machine& m = inst.machine();
  Configuration c = start_configuration(inst.input());
  for (std::size_t k = 0;; ++k) {
    if (m.is_accepting(c.state)) return true;
    if (k == path.size() || k == inst.bound()) return false;
    const auto branches = m.transitions(c.state, c.scanned());
    if (path[k] >= branches.size()) return false;
    c = apply_transition(c, branches[path[k]]);
  }
}

std::string to_string(ProofTag tag) {
  switch (tag) {
    case ProofTag::NoAcceptState:
      return "NoAcceptState";
    case ProofTag::DeadEndBeforeAccept:
      return "DeadEndBeforeAccept";
    case ProofTag::StructuralLoop:
      return "StructuralLoop";
  }
  return "?";
}

ProofTag proof_tag_from_string(const std::string& s) {
  if (s == "NoAcceptState") return ProofTag::NoAcceptState;
  if (s == "DeadEndBeforeAccept") return ProofTag::DeadEndBeforeAccept;
  if (s == "StructuralLoop") return ProofTag::StructuralLoop;
  throw std::invalid_argument("unknown proof tag " + s);
}

ProofCheck check_proof(const HaltingPair& pair) {
  const Machine& m = pair.machine;
  switch (pair.proof) {
    case ProofTag::NoAcceptState:
      return {m.accept_states().empty(), 0};

    case ProofTag::DeadEndBeforeAccept: {
      // Every branch must die before the depth bound, none accepting.
      std::vector<Configuration> frontier{start_configuration(pair.input)};
      std::uint64_t seen = 1;
      for (std::uint64_t depth = 0; depth <= pair.validation_bound; ++depth) {
        std::vector<Configuration> next;
        for (const auto& c : frontier) {
          if (m.is_accepting(c.state)) return {false, seen};
          for (auto& s : step_successors(m, c)) next.push_back(std::move(s));
        }
        seen += next.size();
        if (next.empty()) return {true, seen};
        frontier = std::move(next);
      }
      return {false, seen};
    }

    case ProofTag::StructuralLoop: {
      // Reachable configurations (ignoring the step counter) must close up
      // within the bound and contain no accepting state.
      std::unordered_set<Configuration, ConfigurationHash> reached;
      std::vector<Configuration> work{start_configuration(pair.input)};
      reached.insert(work.back());
      while (!work.empty()) {
        Configuration c = std::move(work.back());
        work.pop_back();
        if (m.is_accepting(c.state)) return {false, reached.size()};
        for (auto& s : step_successors(m, c)) {
          s.steps = 0;
          if (reached.insert(s).second) {
            if (reached.size() > pair.validation_bound) return {false, reached.size()};
            work.push_back(std::move(s));
          }
        }
      }
      return {true, reached.size()};
    }
  }
  return {};
}

std::vector<HaltingPair> curated_cohp_pool() {
  std::vector<HaltingPair> pool;
  pool.push_back({"loop/eps", machines::looping(), "", ProofTag::NoAcceptState,
                  "moves right forever, no accept state", 0});
  pool.push_back({"halt/eps", machines::halting(), "", ProofTag::DeadEndBeforeAccept,
                  "no transitions at all", 4});
  {
    // q0 flips the start cell between blank and 1 forever; q1 accepts but
    // nothing enters it.
    Machine m(2);
    m.set_accepting(1);
    m.add_transition(0, Symbol::Blank, {0, Symbol::One, Move::Left});
    m.add_transition(0, Symbol::One, {0, Symbol::Blank, Move::Left});
    pool.push_back({"pingpong/eps", m, "", ProofTag::StructuralLoop,
                    "flips cell 0 forever; accept state unreachable", 16});
  }
  pool.push_back({"loop/1", machines::looping(), "1", ProofTag::NoAcceptState,
                  "moves right forever, no accept state", 0});
  pool.push_back({"loop/01", machines::looping(), "01", ProofTag::NoAcceptState,
                  "moves right forever, no accept state", 0});
  {
    Machine m(2);
    m.set_accepting(1);
    m.add_transition(0, Symbol::One, {0, Symbol::One, Move::Right});
    pool.push_back({"walker/11", m, "11", ProofTag::DeadEndBeforeAccept,
                    "walks over the 1s and stops at the first blank", 8});
  }
  {
    Machine m(3);
    m.set_accepting(2);
    m.add_transition(0, Symbol::Zero, {1, Symbol::Zero, Move::Right});
    m.add_transition(0, Symbol::Blank, {1, Symbol::Zero, Move::Right});
    m.add_transition(1, Symbol::Blank, {0, Symbol::Blank, Move::Left});
    pool.push_back({"bouncer/eps", m, "", ProofTag::StructuralLoop,
                    "bounces between cells 0 and 1; accept state unreachable", 16});
  }
  {
    Machine m(3);
    m.set_accepting(2);
    m.add_transition(0, Symbol::Blank, {0, Symbol::Blank, Move::Left});
    m.add_transition(0, Symbol::Blank, {1, Symbol::One, Move::Left});
    m.add_transition(1, Symbol::One, {0, Symbol::One, Move::Left});
    pool.push_back({"ndet-stall/eps", m, "", ProofTag::StructuralLoop,
                    "nondeterministic: stalls at cell 0 or dies; accept state unreachable", 16});
  }
  {
    Machine m(2);
    m.set_accepting(1);
    m.add_transition(0, Symbol::Zero, {0, Symbol::Zero, Move::Right});
    m.add_transition(0, Symbol::One, {0, Symbol::Zero, Move::Right});
    pool.push_back({"eraser/10", m, "10", ProofTag::DeadEndBeforeAccept,
                    "zeroes the input and stops at the first blank", 8});
  }
  pool.push_back({"halt/1", machines::halting(), "1", ProofTag::DeadEndBeforeAccept,
                  "no transitions at all", 4});
  return pool;
}

std::optional<Instance> read_instance(InputReader& reader) {
  auto source = [&reader](std::size_t pos) -> std::optional<bool> {
    const ReadResult r = reader.read_at(pos);
    if (r == ReadResult::PastEnd) return std::nullopt;
    return r == ReadResult::One;
  };
  BitParser<decltype(source)> parser(source);
  try {
    Machine m = parser.read_machine();
    Bits x = parser.read_input();
    const std::uint64_t t = parser.read_pad();
    return Instance(std::move(m), std::move(x), t);
  } catch (const MalformedEncoding&) {
    return std::nullopt;
  }
}

Acceptor reference_cobhp_acceptor() {
  Acceptor a;
  a.name = "ref-cobhp";
  a.provenance.kind = Provenance::Kind::Reference;
  a.behavior = [](InputReader& reader) {
    const auto inst = read_instance(reader);
    if (!inst) return Verdict::Reject;
    const BhpAnswer ans = decide_bhp(*inst, kReferenceSearchBudget);
    reader.charge(ans.configurations);
    return ans.accepted ? Verdict::Reject : Verdict::Accept;
  };
  return a;
}

Acceptor reference_codbhp_acceptor() {
  Acceptor a;
  a.name = "ref-codbhp";
  a.provenance.kind = Provenance::Kind::Reference;
  a.behavior = [](InputReader& reader) {
    const auto inst = read_instance(reader);
    if (!inst || !inst->machine().is_deterministic()) return Verdict::Reject;
    const DbhpAnswer ans = decide_dbhp(*inst);
    reader.charge(ans.steps + 1);
    return ans.accepted ? Verdict::Reject : Verdict::Accept;
  };
  return a;
}

}  // namespace tmlab
