#include "pdp/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pdp/errors.hpp"

namespace pdp {

namespace {

constexpr std::uint64_t kEvalSeedOffset = 1000003;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  // "2..8" or "2,3,5".
  if (const auto dots = v.find(".."); dots != std::string::npos) {
    const int lo = to_int<int>(key, trim(v.substr(0, dots)));
    const int hi = to_int<int>(key, trim(v.substr(dots + 2)));
    if (hi < lo) throw ConfigError(key + ": empty range '" + v + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(to_int<int>(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [&](const char* key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = to_double(k, v);
      };
    };
    auto integer = [&](const char* key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = to_int<int>(k, v);
      };
    };
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seed = to_int<std::uint64_t>(k, v);
    };
    integer("dataset.num_segments", [](RunConfig& c) -> int& { return c.dataset.num_segments; });
    integer("dataset.team_size", [](RunConfig& c) -> int& { return c.dataset.team_size; });
    real("dataset.poisson_rate", [](RunConfig& c) -> double& { return c.dataset.poisson_rate; });
    real("dataset.horizon", [](RunConfig& c) -> double& { return c.dataset.horizon; });
    real("dataset.defender_speed",
         [](RunConfig& c) -> double& { return c.dataset.defender_speed; });
    real("dataset.intruder_speed",
         [](RunConfig& c) -> double& { return c.dataset.intruder_speed; });
    integer("dataset.runs", [](RunConfig& c) -> int& { return c.dataset.runs; });
    real("dataset.train_fraction",
         [](RunConfig& c) -> double& { return c.dataset.train_fraction; });
    integer("dataset.observed_zones",
            [](RunConfig& c) -> int& { return c.dataset.observed_zones; });
    t["dataset.oversample"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.dataset.oversample = to_bool(k, v);
    };
    integer("dataset.smote_k", [](RunConfig& c) -> int& { return c.dataset.smote_k; });
    real("training.interval", [](RunConfig& c) -> double& { return c.training.interval; });
    // The input window is shared by the encoder and the network.
    t["training.input_window"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.training.input_window = c.dataset.interval = to_double(k, v);
    };
    real("training.ideal_firing",
         [](RunConfig& c) -> double& { return c.training.ideal_firing; });
    real("training.margin", [](RunConfig& c) -> double& { return c.training.margin; });
    real("training.tau", [](RunConfig& c) -> double& { return c.training.tau; });
    real("training.sigma", [](RunConfig& c) -> double& { return c.training.sigma; });
    real("training.a_plus", [](RunConfig& c) -> double& { return c.training.a_plus; });
    real("training.a_minus", [](RunConfig& c) -> double& { return c.training.a_minus; });
    real("training.tau_plus", [](RunConfig& c) -> double& { return c.training.tau_plus; });
    real("training.tau_minus", [](RunConfig& c) -> double& { return c.training.tau_minus; });
    real("training.learning_rate",
         [](RunConfig& c) -> double& { return c.training.learning_rate; });
    integer("training.epochs", [](RunConfig& c) -> int& { return c.training.epochs; });
    integer("training.grid_points", [](RunConfig& c) -> int& { return c.training.grid_points; });
    t["training.allow_partial_init"] = [](RunConfig& c, const std::string& k,
                                          const std::string& v) {
      c.allow_partial_init = to_bool(k, v);
    };
    real("consensus.alpha", [](RunConfig& c) -> double& { return c.alpha; });
    integer("eval.runs", [](RunConfig& c) -> int& { return c.eval_runs; });
    t["eval.team_sizes"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.team_sizes = to_int_list(k, v);
    };
    t["out_dir"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.out_dir = v;
    };
    integer("jobs", [](RunConfig& c) -> int& { return c.jobs; });
    return t;
  }();
  return table;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

DatasetConfig RunConfig::dataset_config() const {
  DatasetConfig d = dataset;
  d.seed = seed;
  d.interval = training.input_window;
  return d;
}

DatasetConfig RunConfig::eval_config() const {
  DatasetConfig d = dataset_config();
  d.seed = seed + kEvalSeedOffset;
  d.runs = eval_runs;
  return d;
}

void RunConfig::validate() const {
  try {
    dataset_config().validate();
    training.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("consensus.alpha must be in [0, 1]");
  if (eval_runs < 1) throw ConfigError("eval.runs must be positive");
  if (jobs < 1) throw ConfigError("jobs must be positive");
  for (int s : team_sizes) {
    if (s < 0) throw ConfigError("eval.team_sizes must be non-negative");
  }
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  it->second(cfg, key, value);
}

RunConfig parse_run_config(const std::string& text, const std::string& source, RunConfig base) {
  std::istringstream in(text);
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + "expected 'key = value'");
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path, std::move(base));
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream o;
  const auto& d = c.dataset;
  const auto& t = c.training;
  o << "seed = " << c.seed << "\n";
  o << "dataset.num_segments = " << d.num_segments << "\n";
  o << "dataset.team_size = " << d.team_size << "\n";
  o << "dataset.poisson_rate = " << num(d.poisson_rate) << "\n";
  o << "dataset.horizon = " << num(d.horizon) << "\n";
  o << "dataset.defender_speed = " << num(d.defender_speed) << "\n";
  o << "dataset.intruder_speed = " << num(d.intruder_speed) << "\n";
  o << "dataset.runs = " << d.runs << "\n";
  o << "dataset.train_fraction = " << num(d.train_fraction) << "\n";
  o << "dataset.observed_zones = " << d.observed_zones << "\n";
  o << "dataset.oversample = " << (d.oversample ? "true" : "false") << "\n";
  o << "dataset.smote_k = " << d.smote_k << "\n";
  o << "training.interval = " << num(t.interval) << "\n";
  o << "training.input_window = " << num(t.input_window) << "\n";
  o << "training.ideal_firing = " << num(t.ideal_firing) << "\n";
  o << "training.margin = " << num(t.margin) << "\n";
  o << "training.tau = " << num(t.tau) << "\n";
  o << "training.sigma = " << num(t.sigma) << "\n";
  o << "training.a_plus = " << num(t.a_plus) << "\n";
  o << "training.a_minus = " << num(t.a_minus) << "\n";
  o << "training.tau_plus = " << num(t.tau_plus) << "\n";
  o << "training.tau_minus = " << num(t.tau_minus) << "\n";
  o << "training.learning_rate = " << num(t.learning_rate) << "\n";
  o << "training.epochs = " << t.epochs << "\n";
  o << "training.grid_points = " << t.grid_points << "\n";
  o << "training.allow_partial_init = " << (c.allow_partial_init ? "true" : "false") << "\n";
  o << "consensus.alpha = " << num(c.alpha) << "\n";
  o << "eval.runs = " << c.eval_runs << "\n";
  o << "eval.team_sizes = ";
  for (std::size_t k = 0; k < c.team_sizes.size(); ++k) o << (k ? "," : "") << c.team_sizes[k];
  o << "\n";
  o << "out_dir = " << c.out_dir << "\n";
  o << "jobs = " << c.jobs << "\n";
  return o.str();
}

}  // namespace pdp
