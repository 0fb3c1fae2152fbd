#pragma once

// Seeded, thread-count-independent experiment harness: a named experiment
// plus Params and a master seed fully determine the CSV rows and the JSON
// summary, byte for byte. Trials run in parallel by index, each on its own
// derived stream; rows are emitted in index order regardless of completion
// order. Wall time is tracked in memory only and never serialized, so
// re-runs compare equal.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relht/params.hpp"

namespace relht {

enum class ExperimentId {
  SamplerExactness,
  ViolatingRate,
  PackingCert,
  TvAdvantage,
  CouplingExactness,
  Typicality,
  Attack,
  Distinguisher,
  HypothesisTester,
};

ExperimentId experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentId id);

struct ExperimentConfig {
  ExperimentId id = ExperimentId::Typicality;
  Params params;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::uint32_t threads = 1;

  // Experiment-specific knobs (defaults match the desk-scale runs).
  std::string sampler = "yes";        // sampler-exactness: sphere|ball|yes|no
  std::string statistic = "S2";       // tv-advantage: S1|S2|S3
  std::string kind_a = "ball";        // tv-advantage side A: sphere|ball|no
  std::string kind_b = "no";          // tv-advantage side B
  std::string strategy = "random_flip";  // attack
  std::uint32_t t_prime = 64;         // attack flip count
  std::uint32_t closeness_threshold = 32;  // attack hit threshold
  double sigma = 0.51;                // goodness slack exponent
  bool sanity = false;                // allow the clairvoyant strategy
  std::uint32_t pool = 500;           // packing-cert tuple pool per draw
  std::string denominator = "auto";   // packing-cert: exact|upper_bound|auto
  std::uint32_t m = 1200;             // distinguisher sample count
  std::uint32_t probes = 100;         // distinguisher probe count
  double eps = 0.5;                   // hypothesis-tester closeness parameter
  std::uint32_t c = 8;                // hypothesis-tester check constant
  std::uint32_t learn_samples = 64;   // hypothesis-tester learning samples

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct TrialRecord {
  std::uint64_t index = 0;
  bool error = false;
  std::string error_message;
  std::vector<std::string> fields;  // outcome columns, schema per experiment
  std::uint64_t wall_time_ns = 0;   // in-memory only, never serialized
};

struct ExperimentOutput {
  std::string csv;           // header + one row per trial, index order
  std::string summary_json;  // estimates, CIs, config echo, code version
  std::uint64_t error_count = 0;
  std::vector<TrialRecord> records;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

// Runs body(0..count-1) on `threads` workers; any schedule, no ordering.
void parallel_for(std::uint64_t count, std::uint32_t threads,
                  const std::function<void(std::uint64_t)>& body);

extern const char* const kCodeVersion;

}  // namespace relht
