#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmlab/codec.h"
#include "tmlab/runtime.h"
#include "tmlab/simulate.h"

namespace tmlab {

struct BhpAnswer {
  bool accepted = false;
  Path path;  // accepting path of length <= bound when accepted
  std::uint64_t configurations = 0;  // configurations generated by the search
};

// Breadth-first search of the configuration tree to depth `bound`, with
// duplicate configurations pruned per depth. Throws BudgetExceeded when more
// than `budget` configurations are generated.
BhpAnswer decide_bhp(const Instance& inst, std::uint64_t budget);

struct DbhpAnswer {
  bool accepted = false;
  std::uint64_t steps = 0;  // steps simulated
};

// Direct simulation of the unique run. Throws NotDeterministic.
DbhpAnswer decide_dbhp(const Instance& inst);

// True iff replaying `path` reaches an accepting configuration after at most
// `bound` choices. Replay stops at the first accepting configuration, so
// choices past that point are ignored. False on any out-of-range choice that
// is actually taken.
bool verify_path(const Instance& inst, const Path& path);

enum class ProofTag { NoAcceptState, DeadEndBeforeAccept, StructuralLoop };

std::string to_string(ProofTag tag);
ProofTag proof_tag_from_string(const std::string& s);

// A machine/input pair with no accepting path at any length, together with
// a machine-checkable reason.
struct HaltingPair {
  std::string name;
  Machine machine{1};
  Bits input;
  ProofTag proof = ProofTag::NoAcceptState;
  std::string description;
  std::uint64_t validation_bound = 64;  // depth (dead ends) or configurations (loops)

  bool operator==(const HaltingPair&) const = default;
};

struct ProofCheck {
  bool valid = false;
  std::uint64_t configurations = 0;  // size of the explored set
};

ProofCheck check_proof(const HaltingPair& pair);
inline bool validate_proof(const HaltingPair& pair) { return check_proof(pair).valid; }

std::vector<HaltingPair> curated_cohp_pool();

// Parses E(m) E(x) 1^t through the reader, reading to the end of the input.
// nullopt on malformed input (parsing stops at the first defect).
std::optional<Instance> read_instance(InputReader& reader);

inline constexpr std::uint64_t kReferenceSearchBudget = 1u << 20;

// Reads and parses the whole input, then decides with decide_bhp (resp.
// decide_dbhp) and accepts iff the instance is not in the language. Rejects
// malformed input, and non-deterministic machines for coDBHP.
Acceptor reference_cobhp_acceptor();
Acceptor reference_codbhp_acceptor();

}  // namespace tmlab
