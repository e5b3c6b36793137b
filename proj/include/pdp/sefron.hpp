#pragma once

// MLC-SEFRON: a multi-label classifier built from pairs of spiking neurons
// with time-varying synaptic weights. Output j compares the first spike of
// its "assigned" neuron against its "unassigned" neuron; the label is 1 only
// when the assigned neuron fires strictly first.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pdp/spike_encoding.hpp"

namespace pdp {

struct TrainingConfig {
  double interval = 8.0;       // T, simulation interval (s)
  // Input spikes are encoded onto [0, input_window). A window shorter than T
  // leaves the neurons time to answer the latest intruders.
  double input_window = 6.0;
  double ideal_firing = 7.0;   // T_d
  double margin = 0.8;         // T_m, required gap between the pair's spikes
  double tau = 100.0;          // spike response time constant
  double sigma = 5.0;          // Gaussian width of every weight bump
  double a_plus = 1.0;
  double a_minus = 0.01;
  double tau_plus = 100.0;
  double tau_minus = 8.0;
  double learning_rate = 0.03;  // lambda
  int epochs = 20;
  int grid_points = 1000;      // first-spike search grid over [0, T]

  // Default constants expressed as fractions of the interval T.
  static TrainingConfig for_interval(double T);

  // Throws DomainError on violated invariants (0 < T_d < T, tau > 0, ...).
  void validate() const;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

// Spike response kernel (s / tau) * exp(1 - s / tau), zero for s < 0.
double epsilon(double s, double tau);

// STDP window: A+ exp(-s / tau+) for s >= 0, -A- exp(s / tau-) otherwise.
double stdp_dw(double s, const TrainingConfig& cfg);

// Share of each input in making a neuron fire at t_ref: the STDP change of
// each spiking channel normalized by their sum. Silent channels get 0.
// Throws DegenerateError for a silent pattern or a vanishing sum.
std::vector<double> fractional_contribution(double t_ref, const SpikePattern& pattern,
                                            const TrainingConfig& cfg);

// Potential a neuron needs at t to fire there given its inputs:
// sum_i u_i(t) * epsilon(t - t_i).
double required_potential(double t, const SpikePattern& pattern, const TrainingConfig& cfg);

struct Bump {
  double center = 0.0;
  double amplitude = 0.0;

  friend bool operator==(const Bump&, const Bump&) = default;
};

// w(t) = sum of amplitude * exp(-(t - center)^2 / (2 sigma^2)) over bumps.
// Bumps sharing a center are merged; amplitudes below 1e-12 are dropped.
class TimeVaryingWeight {
 public:
  static constexpr double kDropBelow = 1e-12;

  TimeVaryingWeight() = default;
  explicit TimeVaryingWeight(double sigma) : sigma_(sigma) {}

  double sigma() const { return sigma_; }
  std::span<const Bump> bumps() const { return bumps_; }

  void add_bump(double center, double amplitude);
  double operator()(double t) const;

  friend bool operator==(const TimeVaryingWeight&, const TimeVaryingWeight&) = default;

 private:
  double sigma_ = 1.0;
  std::vector<Bump> bumps_;  // sorted by center
};

struct SefronNeuron {
  std::vector<TimeVaryingWeight> incoming;  // one per input channel
  // Fixed after initialization. +infinity marks a neuron that could not be
  // initialized and never fires.
  double theta = 0.0;

  friend bool operator==(const SefronNeuron&, const SefronNeuron&) = default;
};

// v(t) = sum_i w_i(t_i) * epsilon(t - t_i); the weight is read at the
// presynaptic spike time.
double membrane_potential(const SefronNeuron& neuron, const SpikePattern& pattern, double t,
                          const TrainingConfig& cfg);

// Earliest t in [0, T] with v(t) >= theta, located on the configured grid and
// refined by linear interpolation; nullopt if the grid never reaches theta.
std::optional<double> first_spike_time(const SefronNeuron& neuron, const SpikePattern& pattern,
                                       const TrainingConfig& cfg);

class SefronNetwork {
 public:
  SefronNetwork() = default;
  SefronNetwork(int m, TrainingConfig config);

  int num_zones() const { return m_; }
  const TrainingConfig& config() const { return config_; }

  // Zones are 1-based. Neuron 2j-1 (assigned) and 2j (unassigned) in the
  // 1-based numbering live at [2(j-1)] and [2(j-1)+1].
  SefronNeuron& assigned(int zone) { return neurons_.at(2 * (zone - 1)); }
  SefronNeuron& unassigned(int zone) { return neurons_.at(2 * (zone - 1) + 1); }
  const SefronNeuron& assigned(int zone) const { return neurons_.at(2 * (zone - 1)); }
  const SefronNeuron& unassigned(int zone) const { return neurons_.at(2 * (zone - 1) + 1); }

  std::span<SefronNeuron> neurons() { return neurons_; }
  std::span<const SefronNeuron> neurons() const { return neurons_; }

  LabelVector predict(const SpikePattern& pattern) const;

  friend bool operator==(const SefronNetwork&, const SefronNetwork&) = default;

 private:
  int m_ = 0;
  TrainingConfig config_;
  std::vector<SefronNeuron> neurons_;
};

// 1 iff t_assigned < t_unassigned, with a missing spike treated as +infinity.
std::uint8_t pair_label(std::optional<double> t_assigned, std::optional<double> t_unassigned);

// One bump per spiking channel with amplitude u_i(T_d) centered on t_i, and
// the threshold that makes the neuron fire at T_d on this very pattern.
SefronNeuron init_neuron(const SpikePattern& pattern, const TrainingConfig& cfg);

struct DesiredTimes {
  double assigned = 0.0;
  double unassigned = 0.0;
};

// Label should be 1 but the unassigned neuron won (escaped intruder).
DesiredTimes desired_times_escaped(std::optional<double> t_assigned,
                                   std::optional<double> t_unassigned, const TrainingConfig& cfg);

// Label should be 0 but the assigned neuron won (incorrect assignment).
DesiredTimes desired_times_incorrect(std::optional<double> t_assigned,
                                     std::optional<double> t_unassigned,
                                     const TrainingConfig& cfg);

// Moves the neuron's firing towards t_desired. The error
// theta / V(t_desired) - theta / V(t_current) scales each input's fractional
// contribution; the result is added as a Gaussian bump at the input's spike
// time. Throws DegenerateError when a required potential is not positive.
void apply_update(SefronNeuron& neuron, const SpikePattern& pattern, double t_desired,
                  const TrainingConfig& cfg);

struct TrainingSample {
  SpikePattern pattern;
  LabelVector target;
};

enum class MissingPolarity {
  kFail,         // throw InitError naming the zones
  kLeaveSilent,  // leave the neuron unable to fire
};

// Initializes every neuron from the first sample with the matching label.
SefronNetwork initialize_network(std::span<const TrainingSample> samples,
                                 const TrainingConfig& cfg,
                                 MissingPolarity missing = MissingPolarity::kFail);

struct TrainingTrace {
  std::vector<std::size_t> epoch_errors;  // misclassified outputs per epoch
  std::size_t updates = 0;
  std::size_t skipped_updates = 0;  // degenerate updates left out
};

// Runs config().epochs passes over the samples in order. On each wrong
// output both neurons of the pair move towards their desired times. Pairs
// never interact, so they may be trained on `jobs` threads with identical
// results.
TrainingTrace train(SefronNetwork& net, std::span<const TrainingSample> samples, int jobs = 1);

// Text model file; floating point values are written in hex so a load
// reproduces the network bit for bit.
void save_network(const SefronNetwork& net, std::ostream& out);
SefronNetwork load_network(std::istream& in);

}  // namespace pdp
