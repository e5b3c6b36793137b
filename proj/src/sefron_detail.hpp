#pragma once

#include <optional>
#include <span>

#include "pdp/sefron.hpp"

namespace pdp::detail {

// First crossing of theta by v(t) = sum_k amp[k] * epsilon(t - spikes[k].time)
// on the grid t_g = g * T / (G - 1). `spikes` must be sorted by time. The
// potential is advanced with an exact exponential recurrence, so a scan costs
// O(G + spikes) with one exp per spike.
std::optional<double> first_crossing(std::span<const Spike> spikes, std::span<const double> amp,
                                     double theta, const TrainingConfig& cfg);

// sum_i u_i(t) epsilon(t - t_i) together with the u_i themselves; returns
// false when the STDP normalizer vanishes or is not finite.
bool contributions(double t, std::span<const Spike> spikes, const TrainingConfig& cfg,
                   std::span<double> u, double& required);

}  // namespace pdp::detail
