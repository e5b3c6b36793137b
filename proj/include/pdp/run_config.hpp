#pragma once

// Everything a CLI run needs, read from "key = value" lines. Every run writes
// the resolved config next to its outputs; reading that file back reproduces
// the run.

#include <cstdint>
#include <string>
#include <vector>

#include "pdp/dataset.hpp"
#include "pdp/sefron.hpp"

namespace pdp {

struct RunConfig {
  std::uint64_t seed = 1;
  DatasetConfig dataset;
  TrainingConfig training;
  double alpha = 0.5;  // neighbor weight in the effective labels
  int eval_runs = 1000;
  std::vector<int> team_sizes{2, 3, 4, 5, 6, 7, 8};
  bool allow_partial_init = false;
  std::string out_dir = "out";
  int jobs = 1;

  // Dataset config with the run seed applied.
  DatasetConfig dataset_config() const;
  // Fresh evaluation scenarios: a seed derived from the run seed, so they
  // never coincide with the training scenarios.
  DatasetConfig eval_config() const;

  void validate() const;
};

// Sets one key. Throws ConfigError naming the key on unknown keys or values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Throws ConfigError("<source>:<line>: ...") on the first bad line.
RunConfig parse_run_config(const std::string& text, const std::string& source = "config",
                           RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

std::string to_config_text(const RunConfig& cfg);

}  // namespace pdp
