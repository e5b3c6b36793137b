#pragma once

// Monte-Carlo scenarios, expert labels per defender, minority oversampling
// and a scenario-disjoint train/test split.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "pdp/sefron.hpp"
#include "pdp/spike_encoding.hpp"
#include "pdp/world.hpp"

namespace pdp {

// Calibrated so the expert captures about 85% of intruders at n = 36, N = 5.
inline constexpr double kDefaultDefenderSpeed = 0.47;

struct DatasetConfig {
  int num_segments = 36;
  int team_size = 5;
  double poisson_rate = 4.0;  // mean intruders per horizon
  double horizon = 8.0;
  double defender_speed = kDefaultDefenderSpeed;  // rad/s
  double intruder_speed = 0.5;                    // radial units/s
  int runs = 10000;
  std::uint64_t seed = 1;
  double train_fraction = 0.2;
  int observed_zones = 36;
  double interval = 6.0;  // input window the horizon is mapped onto
  bool oversample = true;
  int smote_k = 5;

  void validate() const;
};

// Portable random stream: the same draws on every platform for a given
// (seed, stream) pair.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  std::uint64_t below(std::uint64_t bound);
  int poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

// Stream ids reserved for pipeline stages other than per-scenario draws.
inline constexpr std::uint64_t kSplitStream = 0xffffffff00000001ULL;
inline constexpr std::uint64_t kOversampleStream = 0xffffffff00000002ULL;

Scenario generate_scenario(const DatasetConfig& cfg, Rng& rng);

// Scenario `id` drawn from its own stream of cfg.seed.
Scenario generate_scenario(const DatasetConfig& cfg, int id);

struct Sample {
  int scenario_id = 0;
  int defender_id = 0;
  SpikePattern pattern;
  LabelVector target;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// One sample per defender, labels from the expert plan.
std::vector<Sample> label_scenario(const Scenario& s, const DatasetConfig& cfg, int scenario_id);

// Raises every zone whose positive count is below the median to the median
// by interpolating intruder spike times between a positive sample and one of
// its k nearest positive neighbors (silent channels count as time T + 1).
std::vector<Sample> oversample(std::vector<Sample> train, int k, Rng& rng);

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Shuffles scenario ids and sends the first train_fraction of them to train.
Split split(std::vector<Sample> samples, const DatasetConfig& cfg);

struct Dataset {
  DatasetConfig config;
  std::vector<Scenario> scenarios;  // index = scenario id
  std::vector<Sample> train;        // oversampled when config.oversample
  std::vector<Sample> test;
};

Dataset generate_dataset(const DatasetConfig& cfg, int jobs = 1);

std::vector<TrainingSample> as_training(const std::vector<Sample>& samples);

// Line formats. A sample record lists its fields in lexicographic order:
// defender_id, labels (bit string), scenario_id, spikes ([channel, time],
// channels 1-based).
std::string to_record(const Sample& s);
Sample sample_from_record(const std::string& line, int m, double interval);

std::string config_record(const DatasetConfig& cfg);
DatasetConfig config_from_record(const std::string& line);

// Sample file: header line with the config, then one sample per line.
void write_samples(std::ostream& out, const DatasetConfig& cfg, const std::vector<Sample>& samples);
std::vector<Sample> read_samples(std::istream& in, DatasetConfig* cfg = nullptr);

void write_scenarios(std::ostream& out, const DatasetConfig& cfg,
                     const std::vector<Scenario>& scenarios);
std::vector<Scenario> read_scenarios(std::istream& in, DatasetConfig* cfg = nullptr);

}  // namespace pdp
