#include "tmlab/json_io.h"

#include <stdexcept>

namespace tmlab {

using nlohmann::json;

json machine_to_json(const Machine& m) {
  json transitions = json::array();
  for (State s = 0; s < m.num_states(); ++s) {
    for (std::uint32_t sym = 0; sym < kNumSymbols; ++sym) {
      for (const auto& t : m.transitions(s, static_cast<Symbol>(sym))) {
        transitions.push_back({{"state", s},
                               {"read", std::string(1, symbol_char(static_cast<Symbol>(sym)))},
                               {"next", t.next},
                               {"write", std::string(1, symbol_char(t.write))},
                               {"move", t.move == Move::Left ? "L" : "R"}});
      }
    }
  }
  return {{"numStates", m.num_states()},
          {"acceptStates", m.accept_states()},
          {"transitions", transitions}};
}

Machine machine_from_json(const json& j) {
  Machine m(j.at("numStates").get<std::uint32_t>());
  for (const auto& a : j.at("acceptStates")) m.set_accepting(a.get<State>());
  for (const auto& t : j.at("transitions")) {
    const auto read = t.at("read").get<std::string>();
    const auto write = t.at("write").get<std::string>();
    const auto move = t.at("move").get<std::string>();
    if (read.size() != 1 || write.size() != 1 || (move != "L" && move != "R"))
      throw std::invalid_argument("bad transition " + t.dump());
    m.add_transition(t.at("state").get<State>(), symbol_from_char(read[0]),
                     {t.at("next").get<State>(), symbol_from_char(write[0]),
                      move == "L" ? Move::Left : Move::Right});
  }
  return m;
}

json instance_to_json(const Instance& inst) {
  return {{"machine", machine_to_json(inst.machine())},
          {"input", inst.input()},
          {"bound", inst.bound()}};
}

Instance instance_from_json(const json& j) {
  return Instance(machine_from_json(j.at("machine")), j.at("input").get<std::string>(),
                  j.at("bound").get<std::uint64_t>());
}

json pool_to_json(const std::vector<HaltingPair>& pool) {
  json out = json::array();
  for (const auto& p : pool) {
    out.push_back({{"name", p.name},
                   {"machine", machine_to_json(p.machine)},
                   {"input", p.input},
                   {"proof", to_string(p.proof)},
                   {"description", p.description},
                   {"validationBound", p.validation_bound}});
  }
  return out;
}

std::vector<HaltingPair> pool_from_json(const json& j) {
  std::vector<HaltingPair> pool;
  for (const auto& e : j) {
    pool.push_back({e.at("name").get<std::string>(), machine_from_json(e.at("machine")),
                    e.at("input").get<std::string>(),
                    proof_tag_from_string(e.at("proof").get<std::string>()),
                    e.value("description", std::string()),
                    e.at("validationBound").get<std::uint64_t>()});
  }
  return pool;
}

json path_to_json(const Path& p) { return json(p); }

}  // namespace tmlab
