#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pdp/dataset.hpp"
#include "pdp/errors.hpp"

using namespace pdp;

namespace {

DatasetConfig small(int runs, int m = 15) {
  DatasetConfig c;
  c.runs = runs;
  c.seed = 3;
  c.observed_zones = m;
  return c;
}

std::string dump(const Dataset& d) {
  std::ostringstream out;
  write_scenarios(out, d.config, d.scenarios);
  write_samples(out, d.config, d.train);
  write_samples(out, d.config, d.test);
  return out.str();
}

}  // namespace

TEST_CASE("intruder counts average the Poisson rate") {
  const DatasetConfig c = small(20000);
  double sum = 0.0;
  for (int id = 0; id < c.runs; ++id) sum += generate_scenario(c, id).intruders.size();
  CHECK(std::abs(sum / c.runs - 4.0) < 0.1);
}

TEST_CASE("generated scenarios are valid and within the horizon") {
  const DatasetConfig c = small(500);
  for (int id = 0; id < c.runs; ++id) {
    const Scenario s = generate_scenario(c, id);
    CHECK_NOTHROW(s.validate());
    CHECK(s.defenders.size() == 5);
    for (const auto& i : s.intruders) {
      CHECK(i.arrival_time() > 0.0);
      CHECK(i.arrival_time() <= 8.0 + 1e-12);
    }
  }
}

TEST_CASE("same seed, same bytes; different jobs, same bytes") {
  const auto a = generate_dataset(small(150), 1);
  const auto b = generate_dataset(small(150), 3);
  CHECK(dump(a) == dump(b));
  auto other = small(150);
  other.seed = 4;
  CHECK(dump(generate_dataset(other)) != dump(a));
}

TEST_CASE("split is scenario disjoint with the configured share") {
  auto c = small(400);
  c.oversample = false;
  const auto d = generate_dataset(c);
  std::set<int> train, test;
  for (const auto& s : d.train) train.insert(s.scenario_id);
  for (const auto& s : d.test) test.insert(s.scenario_id);
  CHECK(train.size() == 80);
  CHECK(test.size() == 320);
  for (int id : train) CHECK_FALSE(test.contains(id));
  CHECK(d.train.size() + d.test.size() == 400 * 5);
}

TEST_CASE("a one-run dataset still trains on something") {
  auto c = small(1);
  c.oversample = false;
  const auto d = generate_dataset(c);
  CHECK(d.train.size() == 5);
  CHECK(d.test.empty());
}

TEST_CASE("oversampling lifts thin zones to the median and stays inside the data") {
  auto c = small(600);
  c.oversample = false;
  const auto plain = generate_dataset(c);
  Rng rng(c.seed, kOversampleStream);
  const auto grown = oversample(plain.train, 5, rng);
  const int m = c.observed_zones;

  std::vector<std::size_t> before(m, 0), after(m, 0);
  for (const auto& s : plain.train) {
    for (int z = 0; z < m; ++z) before[z] += s.target[z];
  }
  for (const auto& s : grown) {
    for (int z = 0; z < m; ++z) after[z] += s.target[z];
  }
  auto sorted = before;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t median = (sorted[(m - 1) / 2] + sorted[m / 2] + 1) / 2;
  for (int z = 0; z < m; ++z) {
    if (before[z] < median && before[z] > 0) CHECK(after[z] >= median);
    CHECK(after[z] >= before[z]);
  }
  // Every synthetic spike lies between the smallest and largest observed
  // times on its channel.
  std::vector<double> lo(2 * m, 1e9), hi(2 * m, -1e9);
  for (const auto& s : plain.train) {
    for (int ch = 0; ch < 2 * m; ++ch) {
      if (auto t = s.pattern.at(ch)) lo[ch] = std::min(lo[ch], *t), hi[ch] = std::max(hi[ch], *t);
    }
  }
  for (std::size_t k = plain.train.size(); k < grown.size(); ++k) {
    for (int ch = 0; ch < 2 * m; ++ch) {
      if (auto t = grown[k].pattern.at(ch)) {
        CHECK(*t >= lo[ch]);
        CHECK(*t <= hi[ch]);
      }
    }
  }
}

TEST_CASE("synthetic samples interpolate between two positive parents") {
  // Two positives for zone 1 differing only in one spike time.
  std::vector<Sample> train;
  for (double t : {1.0, 3.0}) {
    Sample s{0, 1, SpikePattern(2, 8.0), {1, 0}};
    s.pattern.set(0, 0.0);
    s.pattern.set(2, t);
    train.push_back(s);
  }
  for (int k = 0; k < 6; ++k) {
    Sample s{k + 1, 1, SpikePattern(2, 8.0), {0, 1}};
    s.pattern.set(0, 0.0);
    train.push_back(s);
  }
  Rng rng(1, 0);
  const auto out = oversample(train, 5, rng);
  CHECK(out.size() == train.size() + 2);  // median 4, zone 1 holds 2
  for (std::size_t k = train.size(); k < out.size(); ++k) {
    const double t = *out[k].pattern.at(2);
    CHECK(t >= 1.0);
    CHECK(t <= 3.0);
    CHECK(out[k].target == LabelVector{1, 0});
  }
}

TEST_CASE("sample and config records round trip") {
  const auto d = generate_dataset(small(20));
  for (const auto& s : d.train) {
    CHECK(sample_from_record(to_record(s), 15, d.config.interval) == s);
  }
  const DatasetConfig back = config_from_record(config_record(d.config));
  CHECK(config_record(back) == config_record(d.config));
  std::stringstream io;
  write_samples(io, d.config, d.test);
  DatasetConfig header;
  CHECK(read_samples(io, &header) == d.test);
  CHECK(header.observed_zones == 15);
  std::istringstream bad("not json\n");
  CHECK_THROWS_AS(read_samples(bad), IoError);
}

TEST_CASE("record fields come in lexicographic order") {
  Sample s{4, 2, SpikePattern(2, 8.0), {1, 0}};
  s.pattern.set(0, 0.0);
  s.pattern.set(3, 2.5);
  CHECK(to_record(s) ==
        "{\"defender_id\":2,\"labels\":\"10\",\"scenario_id\":4,\"spikes\":[[1,0.0],[4,2.5]]}");
}
