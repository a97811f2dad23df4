#pragma once

#include <json.hpp>
#include <vector>

#include "tmlab/codec.h"
#include "tmlab/languages.h"

namespace tmlab {

// Human-authored mirror of the bit encoding:
//   {"numStates": 2, "acceptStates": [1],
//    "transitions": [{"state": 0, "read": "_", "next": 1, "write": "1", "move": "R"}, ...]}
// Transitions are listed in branch order within each (state, read) cell.
nlohmann::json machine_to_json(const Machine& m);
Machine machine_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json pool_to_json(const std::vector<HaltingPair>& pool);
std::vector<HaltingPair> pool_from_json(const nlohmann::json& j);

nlohmann::json path_to_json(const Path& p);

}  // namespace tmlab
