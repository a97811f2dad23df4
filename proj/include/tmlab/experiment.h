#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmlab/corpus.h"
#include "tmlab/languages.h"
#include "tmlab/speedup.h"

namespace tmlab {

enum class ExperimentKind { BSpeedup, CapDetect, StarProbe, Levin, Dominance, ComposeCheck };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::BSpeedup;
  std::uint64_t seed = 1;
  std::uint64_t t_min = 0;
  std::uint64_t t_max = 256;
  std::size_t corpus_size = 200;
  // Random part of the corpus.
  std::uint32_t max_states = 4;
  std::uint32_t max_input = 4;
  std::uint64_t corpus_t_max = 8;
  // Exhaustive core of the corpus.
  ExhaustiveLimits core;
  std::uint64_t step_budget = kDefaultStepBudget;
  std::uint64_t levin_budget = 1u << 24;
  std::uint64_t label_budget = 1u << 16;
  std::string language = "cobhp";  // or "codbhp"
  std::string pair = "loop/eps";
  // Subject of cap-detect / star-probe / dominance: "ref" or "hw".
  std::string acceptor = "ref";
  std::filesystem::path out_dir;
};

// Throws ConfigInvalid listing every offending field.
void validate(const ExperimentConfig& cfg);

// Fields absent from `j` keep their current values.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct GeneratedCorpus {
  std::vector<LabeledInstance> core;    // exhaustive over cfg.core
  std::vector<LabeledInstance> random;  // cfg.corpus_size seeded instances
};

// Seeded: the same config always yields the same corpus. Every instance is
// checked to round-trip through the codec.
GeneratedCorpus generate_corpus(const ExperimentConfig& cfg);

const HaltingPair& pool_pair(const std::vector<HaltingPair>& pool, const std::string& name);

struct ExperimentResult {
  bool passed = false;
  std::string failure;  // the violated invariant when !passed
  std::vector<std::filesystem::path> files;
};

// Runs the configured sweep and writes <kind>.csv, <kind>.json and
// <kind>.md into cfg.out_dir (plus failure.json when an assertion fails and
// a timestamped <kind>.log). Throws ConfigInvalid for bad configs, including
// a missing output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace tmlab
