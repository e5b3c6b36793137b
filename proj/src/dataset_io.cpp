#include <istream>
#include <ostream>

#include "json.hpp"
#include "pdp/dataset.hpp"
#include "pdp/errors.hpp"

namespace pdp {

using nlohmann::json;

std::string to_record(const Sample& s) {
  json j;  // std::map-backed, so keys come out sorted
  j["defender_id"] = s.defender_id;
  std::string bits;
  for (auto b : s.target) bits += b ? '1' : '0';
  j["labels"] = bits;
  j["scenario_id"] = s.scenario_id;
  json spikes = json::array();
  for (int c = 0; c < s.pattern.num_channels(); ++c) {
    if (const auto& t = s.pattern.at(c)) spikes.push_back(json::array({c + 1, *t}));
  }
  j["spikes"] = std::move(spikes);
  return j.dump();
}

Sample sample_from_record(const std::string& line, int m, double interval) {
  try {
    const json j = json::parse(line);
    Sample s;
    s.defender_id = j.at("defender_id").get<int>();
    s.scenario_id = j.at("scenario_id").get<int>();
    const auto bits = j.at("labels").get<std::string>();
    if (static_cast<int>(bits.size()) != m) {
      throw ShapeError("sample has " + std::to_string(bits.size()) + " labels, expected " +
                       std::to_string(m));
    }
    for (char b : bits) {
      if (b != '0' && b != '1') throw IoError("label string must contain only 0 and 1");
      s.target.push_back(b == '1');
    }
    s.pattern = SpikePattern(m, interval);
    for (const auto& e : j.at("spikes")) {
      const int channel = e.at(0).get<int>();
      if (channel < 1 || channel > 2 * m) throw IoError("spike channel out of range");
      s.pattern.set(channel - 1, e.at(1).get<double>());
    }
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad sample record: ") + e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("bad sample record: ") + e.what());
  }
}

namespace {

json config_json(const DatasetConfig& c) {
  json j;
  j["num_segments"] = c.num_segments;
  j["team_size"] = c.team_size;
  j["poisson_rate"] = c.poisson_rate;
  j["horizon"] = c.horizon;
  j["defender_speed"] = c.defender_speed;
  j["intruder_speed"] = c.intruder_speed;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["train_fraction"] = c.train_fraction;
  j["observed_zones"] = c.observed_zones;
  j["interval"] = c.interval;
  j["oversample"] = c.oversample;
  j["smote_k"] = c.smote_k;
  return j;
}

}  // namespace

std::string config_record(const DatasetConfig& cfg) {
  json j;
  j["format"] = "pdp-dataset-1";
  j["config"] = config_json(cfg);
  return j.dump();
}

DatasetConfig config_from_record(const std::string& line) {
  try {
    const json j = json::parse(line);
    if (j.at("format") != "pdp-dataset-1") throw IoError("unknown dataset header format");
    const json& c = j.at("config");
    DatasetConfig cfg;
    cfg.num_segments = c.at("num_segments").get<int>();
    cfg.team_size = c.at("team_size").get<int>();
    cfg.poisson_rate = c.at("poisson_rate").get<double>();
    cfg.horizon = c.at("horizon").get<double>();
    cfg.defender_speed = c.at("defender_speed").get<double>();
    cfg.intruder_speed = c.at("intruder_speed").get<double>();
    cfg.runs = c.at("runs").get<int>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.train_fraction = c.at("train_fraction").get<double>();
    cfg.observed_zones = c.at("observed_zones").get<int>();
    cfg.interval = c.at("interval").get<double>();
    cfg.oversample = c.at("oversample").get<bool>();
    cfg.smote_k = c.at("smote_k").get<int>();
    return cfg;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad dataset header: ") + e.what());
  }
}

void write_samples(std::ostream& out, const DatasetConfig& cfg,
                   const std::vector<Sample>& samples) {
  out << config_record(cfg) << '\n';
  for (const Sample& s : samples) out << to_record(s) << '\n';
  if (!out) throw IoError("failed writing samples");
}

namespace {

DatasetConfig read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file, expected a dataset header");
  return config_from_record(line);
}

}  // namespace

std::vector<Sample> read_samples(std::istream& in, DatasetConfig* cfg) {
  const DatasetConfig header = read_header(in);
  if (cfg) *cfg = header;
  std::vector<Sample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(sample_from_record(line, header.observed_zones, header.interval));
  }
  return out;
}

void write_scenarios(std::ostream& out, const DatasetConfig& cfg,
                     const std::vector<Scenario>& scenarios) {
  out << config_record(cfg) << '\n';
  for (const Scenario& s : scenarios) out << to_record(s) << '\n';
  if (!out) throw IoError("failed writing scenarios");
}

std::vector<Scenario> read_scenarios(std::istream& in, DatasetConfig* cfg) {
  const DatasetConfig header = read_header(in);
  if (cfg) *cfg = header;
  std::vector<Scenario> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(scenario_from_record(line));
  }
  return out;
}

}  // namespace pdp
