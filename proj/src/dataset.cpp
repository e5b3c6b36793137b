#include "pdp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "pdp/errors.hpp"
#include "pdp/expert.hpp"

namespace pdp {

void DatasetConfig::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("dataset config: " + what); };
  if (num_segments < 1) fail("num_segments must be positive");
  if (team_size < 0) fail("team_size must be non-negative");
  if (!(poisson_rate >= 0.0)) fail("poisson_rate must be non-negative");
  if (!(horizon > 0.0)) fail("horizon must be positive");
  if (!(defender_speed >= 0.0)) fail("defender_speed must be non-negative");
  if (!(intruder_speed > 0.0)) fail("intruder_speed must be positive");
  if (runs < 0) fail("runs must be non-negative");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) fail("train_fraction must be in [0, 1]");
  if (observed_zones < 1 || observed_zones > num_segments) {
    fail("observed_zones must be in [1, num_segments]");
  }
  if (!(interval > 0.0)) fail("interval must be positive");
  if (smote_k < 1) fail("smote_k must be positive");
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix(splitmix(seed) ^ stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection keeps the draw unbiased and independent of the library.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

int Rng::poisson(double mean) {
  const double floor = std::exp(-mean);
  int k = 0;
  for (double p = uniform(); p > floor; p *= uniform()) ++k;
  return k;
}

Scenario generate_scenario(const DatasetConfig& cfg, Rng& rng) {
  const int n = cfg.num_segments;
  int count = rng.poisson(cfg.poisson_rate);
  while (count > n) count = rng.poisson(cfg.poisson_rate);

  Scenario s;
  s.num_segments = n;
  s.horizon = cfg.horizon;
  for (int k = 0; k < cfg.team_size; ++k) {
    s.defenders.push_back(
        {k + 1, SegmentId(static_cast<int>(rng.below(n)) + 1), cfg.defender_speed});
  }
  std::vector<int> segments(n);
  std::iota(segments.begin(), segments.end(), 1);
  for (int k = 0; k < count; ++k) {
    std::swap(segments[k], segments[k + rng.below(n - k)]);
    const double arrival = cfg.horizon - cfg.horizon * rng.uniform();  // (0, horizon]
    s.intruders.push_back({k + 1, SegmentId(segments[k]), 1.0 + cfg.intruder_speed * arrival,
                           cfg.intruder_speed});
  }
  return s;
}

Scenario generate_scenario(const DatasetConfig& cfg, int id) {
  Rng rng(cfg.seed, static_cast<std::uint64_t>(id));
  return generate_scenario(cfg, rng);
}

std::vector<Sample> label_scenario(const Scenario& s, const DatasetConfig& cfg, int scenario_id) {
  const AssignmentSolution sol = prune_infeasible(s, default_kappa(s.num_segments));
  std::vector<Sample> out;
  for (const Defender& d : s.defenders) {
    const ZoneMap zones = zones_of(d.segment, cfg.observed_zones, s.num_segments);
    out.push_back({scenario_id, d.id, encode(s, d, zones, cfg.interval, cfg.horizon),
                   labels_from_assignment(sol, s, d, zones)});
  }
  return out;
}

namespace {

std::vector<double> spike_vector(const SpikePattern& p) {
  std::vector<double> v(p.num_channels());
  for (int c = 0; c < p.num_channels(); ++c) {
    v[c] = p.at(c) ? *p.at(c) : p.interval() + 1.0;
  }
  return v;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

}  // namespace

std::vector<Sample> oversample(std::vector<Sample> train, int k, Rng& rng) {
  if (train.empty()) throw DomainError("nothing to oversample");
  const int m = train.front().pattern.num_zones();
  std::vector<std::size_t> positives(m, 0);
  for (const Sample& s : train) {
    for (int z = 0; z < m; ++z) positives[z] += s.target[z];
  }
  std::vector<std::size_t> sorted = positives;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t median = (sorted[(m - 1) / 2] + sorted[m / 2] + 1) / 2;

  const std::size_t original = train.size();
  for (int z = 0; z < m; ++z) {
    if (positives[z] >= median) continue;
    // Parents come from the original samples only.
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < original; ++i) {
      if (train[i].target[z]) pool.push_back(i);
    }
    if (pool.empty()) continue;
    std::vector<std::vector<double>> vec;
    for (std::size_t i : pool) vec.push_back(spike_vector(train[i].pattern));

    while (positives[z] < median) {
      const std::size_t b = rng.below(pool.size());
      Sample synth = train[pool[b]];
      if (pool.size() >= 2) {
        std::vector<std::pair<double, std::size_t>> near;
        for (std::size_t q = 0; q < pool.size(); ++q) {
          if (q != b) near.push_back({squared_distance(vec[b], vec[q]), q});
        }
        const std::size_t kk = std::min<std::size_t>(k, near.size());
        std::partial_sort(near.begin(), near.begin() + kk, near.end());
        const Sample& other = train[pool[near[rng.below(kk)].second]];
        const double w = rng.uniform();
        for (int zone = 1; zone <= m; ++zone) {
          const int c = synth.pattern.intruder_channel(zone);
          const auto& mine = synth.pattern.at(c);
          const auto& theirs = other.pattern.at(c);
          if (mine && theirs) synth.pattern.set(c, *mine + w * (*theirs - *mine));
        }
      }
      for (int zz = 0; zz < m; ++zz) positives[zz] += synth.target[zz];
      train.push_back(std::move(synth));
    }
  }
  return train;
}

Split split(std::vector<Sample> samples, const DatasetConfig& cfg) {
  std::vector<int> ids;
  for (const Sample& s : samples) ids.push_back(s.scenario_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Rng rng(cfg.seed, kSplitStream);
  for (std::size_t k = ids.size(); k > 1; --k) std::swap(ids[k - 1], ids[rng.below(k)]);
  if (ids.empty()) throw DomainError("no samples to split");
  // At least one training scenario so tiny smoke runs still train.
  const auto train_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(ids.size()))),
      1, ids.size());
  std::vector<int> train_ids(ids.begin(), ids.begin() + train_count);
  std::sort(train_ids.begin(), train_ids.end());

  Split out;
  for (Sample& s : samples) {
    auto& side = std::binary_search(train_ids.begin(), train_ids.end(), s.scenario_id) ? out.train
                                                                                       : out.test;
    side.push_back(std::move(s));
  }
  return out;
}

Dataset generate_dataset(const DatasetConfig& cfg, int jobs) {
  cfg.validate();
  Dataset d;
  d.config = cfg;
  d.scenarios.resize(cfg.runs);
  std::vector<std::vector<Sample>> per_run(cfg.runs);
  detail::parallel_for(cfg.runs, jobs, [&](int id) {
    d.scenarios[id] = generate_scenario(cfg, id);
    per_run[id] = label_scenario(d.scenarios[id], cfg, id);
  });
  std::vector<Sample> all;
  for (auto& run : per_run) {
    for (auto& s : run) all.push_back(std::move(s));
  }
  Split parts = split(std::move(all), cfg);
  if (cfg.oversample) {
    Rng rng(cfg.seed, kOversampleStream);
    parts.train = oversample(std::move(parts.train), cfg.smote_k, rng);
  }
  d.train = std::move(parts.train);
  d.test = std::move(parts.test);
  return d;
}

std::vector<TrainingSample> as_training(const std::vector<Sample>& samples) {
  std::vector<TrainingSample> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) out.push_back({s.pattern, s.target});
  return out;
}

}  // namespace pdp
