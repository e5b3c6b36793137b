#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "parallel.hpp"
#include "pdp/errors.hpp"
#include "pdp/sefron.hpp"
#include "sefron_detail.hpp"

namespace pdp {

SefronNetwork initialize_network(std::span<const TrainingSample> samples,
                                 const TrainingConfig& cfg, MissingPolarity missing) {
  if (samples.empty()) throw DomainError("cannot initialize a network without samples");
  const int m = samples.front().pattern.num_zones();
  for (const auto& s : samples) {
    if (s.pattern.num_zones() != m || static_cast<int>(s.target.size()) != m) {
      throw ShapeError("training samples disagree on the zone count");
    }
  }
  SefronNetwork net(m, cfg);
  std::vector<int> uncovered;
  for (int j = 1; j <= m; ++j) {
    for (std::uint8_t polarity : {std::uint8_t{1}, std::uint8_t{0}}) {
      SefronNeuron& target = polarity ? net.assigned(j) : net.unassigned(j);
      bool done = false;
      // First sample of the polarity; a degenerate one hands over to the next.
      for (const auto& s : samples) {
        if (s.target[j - 1] != polarity) continue;
        try {
          target = init_neuron(s.pattern, cfg);
          done = true;
          break;
        } catch (const DegenerateError&) {
        }
      }
      if (!done) {
        if (uncovered.empty() || uncovered.back() != j) uncovered.push_back(j);
        target.theta = std::numeric_limits<double>::infinity();
      }
    }
  }
  if (!uncovered.empty() && missing == MissingPolarity::kFail) {
    std::string list;
    for (int z : uncovered) list += (list.empty() ? "" : ", ") + std::to_string(z);
    throw InitError(uncovered, "no training sample of the needed label for zone(s) " + list);
  }
  return net;
}

namespace {

// Training reads w_i(t_i) only at spike times seen in the training set. Per
// channel those times are collected once and the weights there are kept up
// to date as bumps are added, so an epoch never re-sums bump lists.
struct Prepared {
  std::vector<std::vector<double>> times;  // per channel, distinct and sorted
  struct Sample {
    std::vector<Spike> spikes;
    std::vector<int> slot;  // index of each spike's time in times[channel]
  };
  std::vector<Sample> samples;
};

Prepared prepare(std::span<const TrainingSample> samples, int channels) {
  Prepared p;
  p.times.resize(channels);
  p.samples.resize(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    p.samples[k].spikes = samples[k].pattern.spikes();
    for (const Spike& s : p.samples[k].spikes) p.times[s.channel].push_back(s.time);
  }
  for (auto& t : p.times) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  for (auto& s : p.samples) {
    for (const Spike& sp : s.spikes) {
      const auto& t = p.times[sp.channel];
      s.slot.push_back(static_cast<int>(std::lower_bound(t.begin(), t.end(), sp.time) - t.begin()));
    }
  }
  return p;
}

class CachedNeuron {
 public:
  CachedNeuron(SefronNeuron& neuron, const Prepared& p, const TrainingConfig& cfg)
      : neuron_(neuron), p_(p), cfg_(cfg), cache_(p.times.size()) {
    for (std::size_t c = 0; c < p.times.size(); ++c) {
      cache_[c].reserve(p.times[c].size());
      for (double t : p.times[c]) cache_[c].push_back(neuron.incoming[c](t));
    }
  }

  bool silent() const { return !std::isfinite(neuron_.theta); }

  std::optional<double> fire(const Prepared::Sample& s) {
    if (silent()) return std::nullopt;
    amp_.resize(s.spikes.size());
    for (std::size_t k = 0; k < s.spikes.size(); ++k) {
      amp_[k] = cache_[s.spikes[k].channel][s.slot[k]];
    }
    return detail::first_crossing(s.spikes, amp_, neuron_.theta, cfg_);
  }

  // Same rule as apply_update. Returns false for a degenerate update.
  bool update(const Prepared::Sample& s, std::optional<double> now, double desired) {
    const double t_now = now ? *now : cfg_.interval;
    if (t_now == desired) return true;
    u_.resize(s.spikes.size());
    double v_now = 0.0;
    double v_desired = 0.0;
    if (!detail::contributions(t_now, s.spikes, cfg_, u_, v_now) || !(v_now > 0.0)) return false;
    if (!detail::contributions(desired, s.spikes, cfg_, u_, v_desired) || !(v_desired > 0.0)) {
      return false;
    }
    const double e = neuron_.theta / v_desired - neuron_.theta / v_now;
    const double k = -0.5 / (cfg_.sigma * cfg_.sigma);
    for (std::size_t i = 0; i < s.spikes.size(); ++i) {
      const double delta = cfg_.learning_rate * u_[i] * e;
      const int c = s.spikes[i].channel;
      const double center = s.spikes[i].time;
      neuron_.incoming[c].add_bump(center, delta);
      const auto& times = p_.times[c];
      auto& w = cache_[c];
      for (std::size_t q = 0; q < times.size(); ++q) {
        const double d = times[q] - center;
        w[q] += delta * std::exp(k * d * d);
      }
    }
    return true;
  }

 private:
  SefronNeuron& neuron_;
  const Prepared& p_;
  const TrainingConfig& cfg_;
  std::vector<std::vector<double>> cache_;
  std::vector<double> amp_;
  std::vector<double> u_;
};

struct PairTrace {
  std::vector<std::size_t> errors;
  std::size_t updates = 0;
  std::size_t skipped = 0;
};

PairTrace train_pair(SefronNetwork& net, int zone, const Prepared& p,
                     std::span<const TrainingSample> samples) {
  const TrainingConfig& cfg = net.config();
  CachedNeuron a(net.assigned(zone), p, cfg);
  CachedNeuron u(net.unassigned(zone), p, cfg);
  PairTrace trace;
  trace.errors.assign(cfg.epochs, 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t k = 0; k < p.samples.size(); ++k) {
      const auto& s = p.samples[k];
      const std::uint8_t want = samples[k].target[zone - 1];
      const auto ta = a.fire(s);
      const auto tu = u.fire(s);
      if (pair_label(ta, tu) == want) continue;
      ++trace.errors[epoch];
      const DesiredTimes d =
          want ? desired_times_escaped(ta, tu, cfg) : desired_times_incorrect(ta, tu, cfg);
      for (auto [neuron, now, desired] : {std::tuple{&a, ta, d.assigned},
                                          std::tuple{&u, tu, d.unassigned}}) {
        if (neuron->silent()) continue;
        if (neuron->update(s, now, desired)) {
          ++trace.updates;
        } else {
          ++trace.skipped;
        }
      }
    }
  }
  return trace;
}

}  // namespace

TrainingTrace train(SefronNetwork& net, std::span<const TrainingSample> samples, int jobs) {
  if (samples.empty()) throw DomainError("training needs at least one sample");
  const int m = net.num_zones();
  for (const auto& s : samples) {
    if (s.pattern.num_zones() != m || static_cast<int>(s.target.size()) != m) {
      throw ShapeError("training sample shape does not match the network");
    }
  }
  const Prepared p = prepare(samples, 2 * m);
  std::vector<PairTrace> per_zone(m);
  detail::parallel_for(m, jobs, [&](int j) { per_zone[j] = train_pair(net, j + 1, p, samples); });

  TrainingTrace trace;
  trace.epoch_errors.assign(net.config().epochs, 0);
  for (const auto& z : per_zone) {
    for (int e = 0; e < net.config().epochs; ++e) trace.epoch_errors[e] += z.errors[e];
    trace.updates += z.updates;
    trace.skipped_updates += z.skipped;
  }
  return trace;
}

}  // namespace pdp
