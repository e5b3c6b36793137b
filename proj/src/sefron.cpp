#include "pdp/sefron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdp/errors.hpp"
#include "sefron_detail.hpp"

namespace pdp {

TrainingConfig TrainingConfig::for_interval(double T) {
  TrainingConfig c;
  c.interval = T;
  c.input_window = 0.75 * T;
  c.ideal_firing = 0.875 * T;
  c.margin = 0.1 * T;
  c.tau = 12.5 * T;
  c.sigma = 0.625 * T;
  c.tau_plus = 12.5 * T;
  c.tau_minus = T;
  return c;
}

void TrainingConfig::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("training config: " + what); };
  if (!(interval > 0.0)) fail("interval must be positive");
  if (!(input_window > 0.0 && input_window <= interval)) {
    fail("need 0 < input_window <= interval");
  }
  if (!(ideal_firing > 0.0 && ideal_firing < interval)) fail("need 0 < ideal_firing < interval");
  if (!(margin >= 0.0)) fail("margin must be non-negative");
  if (!(tau > 0.0)) fail("tau must be positive");
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (!(tau_plus > 0.0 && tau_minus > 0.0)) fail("STDP time constants must be positive");
  if (!(a_plus > 0.0 && a_minus > 0.0)) fail("STDP amplitudes must be positive");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (epochs < 0) fail("epochs must be non-negative");
  if (grid_points < 2) fail("grid_points must be at least 2");
}

double epsilon(double s, double tau) {
  if (s <= 0.0) return 0.0;
  const double x = s / tau;
  return x * std::exp(1.0 - x);
}

double stdp_dw(double s, const TrainingConfig& cfg) {
  if (s >= 0.0) return cfg.a_plus * std::exp(-s / cfg.tau_plus);
  return -cfg.a_minus * std::exp(s / cfg.tau_minus);
}

namespace detail {

std::optional<double> first_crossing(std::span<const Spike> spikes, std::span<const double> amp,
                                     double theta, const TrainingConfig& cfg) {
  const int G = cfg.grid_points;
  const double dt = cfg.interval / (G - 1);
  const double tau = cfg.tau;
  const double scale = std::numbers::e / tau;
  if (theta <= 0.0) return 0.0;  // v(0) = 0 already reaches it
  if (spikes.empty()) return std::nullopt;

  // Between grid points that admit new spikes the potential is
  //   v(t_a + x) = scale * e^{-x/tau} * (B + x A),
  // with A = sum a e^{-s/tau}, B = sum a s e^{-s/tau}, s = t_a - t_i. Each
  // such stretch is unimodal, so it is either skipped whole or searched by
  // bisection on its rising side.
  struct Stretch {
    int first = 0;
    double A = 0.0;
    double B = 0.0;
  };
  auto value = [&](const Stretch& st, int g) {
    const double x = (g - st.first) * dt;
    return scale * std::exp(-x / tau) * (st.B + x * st.A);
  };
  auto first_grid_at_or_after = [&](double t) {
    int g = static_cast<int>(std::ceil(t / dt));
    while (g > 0 && (g - 1) * dt >= t) --g;
    while (g * dt < t) ++g;
    return g;
  };

  Stretch prev_st;
  bool have_prev = false;
  std::size_t next = 0;
  while (next < spikes.size()) {
    const int start = first_grid_at_or_after(spikes[next].time);
    if (start >= G) break;
    const double t0 = start * dt;
    while (next < spikes.size() && spikes[next].time <= t0) ++next;
    const int end = next < spikes.size() ? std::min(G, first_grid_at_or_after(spikes[next].time))
                                         : G;
    Stretch st{start, 0.0, 0.0};
    for (std::size_t k = 0; k < next; ++k) {
      const double s = t0 - spikes[k].time;
      const double d = std::exp(-s / tau);
      st.A += amp[k] * d;
      st.B += amp[k] * s * d;
    }

    auto before = [&](int g) {
      if (g > st.first) return value(st, g - 1);
      return have_prev ? value(prev_st, g - 1) : 0.0;
    };
    auto crossing = [&](int g) -> double {
      if (g == 0) return 0.0;
      const double lo = before(g);
      const double hi = value(st, g);
      return (g - 1) * dt + dt * (theta - lo) / (hi - lo);
    };

    if (value(st, start) >= theta) return crossing(start);
    // Rising side ends at x* = tau - B / A when A > 0.
    if (st.A > 0.0) {
      const double peak_x = tau - st.B / st.A;
      if (peak_x > 0.0) {
        const int top = std::min(end - 1, start + static_cast<int>(std::floor(peak_x / dt)));
        if (top > start && value(st, top) >= theta) {
          int lo = start;  // value < theta
          int hi = top;    // value >= theta
          while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (value(st, mid) >= theta ? hi : lo) = mid;
          }
          return crossing(hi);
        }
        if (top + 1 < end && value(st, top + 1) >= theta) return crossing(top + 1);
      }
    }
    prev_st = st;
    have_prev = true;
  }
  return std::nullopt;
}

bool contributions(double t, std::span<const Spike> spikes, const TrainingConfig& cfg,
                   std::span<double> u, double& required) {
  double den = 0.0;
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    u[k] = stdp_dw(t - spikes[k].time, cfg);
    den += u[k];
  }
  if (den == 0.0 || !std::isfinite(den)) return false;
  required = 0.0;
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    u[k] /= den;
    required += u[k] * epsilon(t - spikes[k].time, cfg.tau);
  }
  return std::isfinite(required);
}

}  // namespace detail

std::vector<double> fractional_contribution(double t_ref, const SpikePattern& pattern,
                                            const TrainingConfig& cfg) {
  const auto spikes = pattern.spikes();
  if (spikes.empty()) throw DegenerateError("fractional contribution of a silent pattern");
  std::vector<double> u(spikes.size());
  double required = 0.0;
  if (!detail::contributions(t_ref, spikes, cfg, u, required)) {
    throw DegenerateError("STDP changes cancel out; fractional contribution undefined");
  }
  std::vector<double> by_channel(pattern.num_channels(), 0.0);
  for (std::size_t k = 0; k < spikes.size(); ++k) by_channel[spikes[k].channel] = u[k];
  return by_channel;
}

double required_potential(double t, const SpikePattern& pattern, const TrainingConfig& cfg) {
  const auto spikes = pattern.spikes();
  if (spikes.empty()) throw DegenerateError("required potential of a silent pattern");
  std::vector<double> u(spikes.size());
  double required = 0.0;
  if (!detail::contributions(t, spikes, cfg, u, required)) {
    throw DegenerateError("STDP changes cancel out; required potential undefined");
  }
  return required;
}

void TimeVaryingWeight::add_bump(double center, double amplitude) {
  auto it = std::lower_bound(bumps_.begin(), bumps_.end(), center,
                             [](const Bump& b, double c) { return b.center < c; });
  if (it != bumps_.end() && it->center == center) {
    it->amplitude += amplitude;
    if (std::abs(it->amplitude) < kDropBelow) bumps_.erase(it);
    return;
  }
  if (std::abs(amplitude) < kDropBelow) return;
  bumps_.insert(it, {center, amplitude});
}

double TimeVaryingWeight::operator()(double t) const {
  const double k = -0.5 / (sigma_ * sigma_);
  double w = 0.0;
  for (const Bump& b : bumps_) {
    const double d = t - b.center;
    w += b.amplitude * std::exp(k * d * d);
  }
  return w;
}

namespace {

// w_i(t_i) for each spike of the (time-sorted) list.
std::vector<double> sampled_weights(const SefronNeuron& neuron, std::span<const Spike> spikes) {
  std::vector<double> amp(spikes.size());
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    amp[k] = neuron.incoming.at(spikes[k].channel)(spikes[k].time);
  }
  return amp;
}

std::optional<double> fire_time(const SefronNeuron& neuron, std::span<const Spike> spikes,
                                const TrainingConfig& cfg) {
  if (!std::isfinite(neuron.theta)) return std::nullopt;
  const auto amp = sampled_weights(neuron, spikes);
  return detail::first_crossing(spikes, amp, neuron.theta, cfg);
}

}  // namespace

double membrane_potential(const SefronNeuron& neuron, const SpikePattern& pattern, double t,
                          const TrainingConfig& cfg) {
  double v = 0.0;
  for (const Spike& s : pattern.spikes()) {
    v += neuron.incoming.at(s.channel)(s.time) * epsilon(t - s.time, cfg.tau);
  }
  return v;
}

std::optional<double> first_spike_time(const SefronNeuron& neuron, const SpikePattern& pattern,
                                       const TrainingConfig& cfg) {
  return fire_time(neuron, pattern.spikes(), cfg);
}

SefronNetwork::SefronNetwork(int m, TrainingConfig config) : m_(m), config_(config) {
  if (m < 1) throw DomainError("network needs at least one zone");
  config_.validate();
  SefronNeuron blank;
  blank.incoming.assign(2 * m, TimeVaryingWeight(config_.sigma));
  neurons_.assign(2 * m, blank);
}

std::uint8_t pair_label(std::optional<double> t_assigned, std::optional<double> t_unassigned) {
  if (!t_assigned) return 0;
  return !t_unassigned || *t_assigned < *t_unassigned ? 1 : 0;
}

LabelVector SefronNetwork::predict(const SpikePattern& pattern) const {
  if (pattern.num_zones() != m_) {
    throw ShapeError("pattern has " + std::to_string(pattern.num_zones()) +
                     " zones, network expects " + std::to_string(m_));
  }
  const auto spikes = pattern.spikes();
  LabelVector labels(m_, 0);
  for (int j = 1; j <= m_; ++j) {
    labels[j - 1] = pair_label(fire_time(assigned(j), spikes, config_),
                               fire_time(unassigned(j), spikes, config_));
  }
  return labels;
}

SefronNeuron init_neuron(const SpikePattern& pattern, const TrainingConfig& cfg) {
  const auto u = fractional_contribution(cfg.ideal_firing, pattern, cfg);
  SefronNeuron n;
  n.incoming.assign(pattern.num_channels(), TimeVaryingWeight(cfg.sigma));
  n.theta = 0.0;
  for (const Spike& s : pattern.spikes()) {
    n.incoming[s.channel].add_bump(s.time, u[s.channel]);
    n.theta += u[s.channel] * epsilon(cfg.ideal_firing - s.time, cfg.tau);
  }
  if (!(n.theta > 0.0) || !std::isfinite(n.theta)) {
    throw DegenerateError("initializing pattern yields a non-positive threshold");
  }
  return n;
}

namespace {

double or_end(std::optional<double> t, const TrainingConfig& cfg) {
  return t ? *t : cfg.interval;
}

}  // namespace

DesiredTimes desired_times_escaped(std::optional<double> t_assigned,
                                   std::optional<double> t_unassigned, const TrainingConfig& cfg) {
  DesiredTimes d;
  d.assigned = std::min(or_end(t_assigned, cfg), cfg.ideal_firing);
  d.unassigned = std::max(or_end(t_unassigned, cfg), d.assigned + cfg.margin);
  return d;
}

DesiredTimes desired_times_incorrect(std::optional<double> t_assigned,
                                     std::optional<double> t_unassigned,
                                     const TrainingConfig& cfg) {
  DesiredTimes d;
  d.unassigned = std::min(or_end(t_unassigned, cfg), cfg.ideal_firing);
  d.assigned = std::max(or_end(t_assigned, cfg), d.unassigned + cfg.margin);
  return d;
}

void apply_update(SefronNeuron& neuron, const SpikePattern& pattern, double t_desired,
                  const TrainingConfig& cfg) {
  const auto spikes = pattern.spikes();
  if (spikes.empty()) throw DegenerateError("update from a silent pattern");
  const double t_now = or_end(fire_time(neuron, spikes, cfg), cfg);
  std::vector<double> u_now(spikes.size());
  std::vector<double> u(spikes.size());
  double v_now = 0.0;
  double v_desired = 0.0;
  if (!detail::contributions(t_now, spikes, cfg, u_now, v_now) ||
      !detail::contributions(t_desired, spikes, cfg, u, v_desired) || !(v_now > 0.0) ||
      !(v_desired > 0.0)) {
    throw DegenerateError("required potential is not positive; update skipped");
  }
  const double e = neuron.theta / v_desired - neuron.theta / v_now;
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    neuron.incoming.at(spikes[k].channel).add_bump(spikes[k].time, cfg.learning_rate * u[k] * e);
  }
}

}  // namespace pdp
