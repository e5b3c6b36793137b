// pdp: dataset generation, training, evaluation, single-episode simulation
// and team-size sweeps for the perimeter defense learning pipeline.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdp/consensus.hpp"
#include "pdp/dataset.hpp"
#include "pdp/errors.hpp"
#include "pdp/evaluation.hpp"
#include "pdp/expert.hpp"
#include "pdp/run_config.hpp"
#include "pdp/sefron.hpp"

namespace fs = std::filesystem;
using namespace pdp;

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kIo = 3, kDegenerate = 4 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  int jobs = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "Config file of 'key = value' lines");
  cmd->add_option("-s,--set", c.overrides, "Override one config key (key=value)");
  cmd->add_option("-o,--out", c.out, "Output directory (else $PDP_OUT_DIR, else out_dir)");
  cmd->add_option("-j,--jobs", c.jobs, "Worker threads");
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&c](std::uint64_t s) {
        c.seed = s;
        c.seed_given = true;
      },
      "Run seed");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = load_run_config(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed_given) cfg.seed = c.seed;
  if (c.jobs > 0) cfg.jobs = c.jobs;
  if (const char* env = std::getenv("PDP_OUT_DIR"); env && *env) cfg.out_dir = env;
  if (!c.out.empty()) cfg.out_dir = c.out;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream(dir / "config.txt") << to_config_text(cfg);
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  return in;
}

std::string observation_of(int m, int n) { return m == n ? "full" : "partial"; }

int gen_data(const Common& c) {
  const RunConfig cfg = resolve(c);
  const fs::path dir = prepare_out(cfg);
  const Dataset d = generate_dataset(cfg.dataset_config(), cfg.jobs);
  {
    auto out = open_out(dir / "scenarios.jsonl");
    write_scenarios(out, d.config, d.scenarios);
  }
  {
    auto out = open_out(dir / "train.jsonl");
    write_samples(out, d.config, d.train);
  }
  {
    auto out = open_out(dir / "test.jsonl");
    write_samples(out, d.config, d.test);
  }
  auto manifest = open_out(dir / "manifest.txt");
  manifest << "scenarios\t" << d.scenarios.size() << "\n"
           << "train_samples\t" << d.train.size() << "\n"
           << "test_samples\t" << d.test.size() << "\n"
           << "observed_zones\t" << d.config.observed_zones << "\n"
           << "seed\t" << d.config.seed << "\n";
  std::cout << "wrote " << d.scenarios.size() << " scenarios, " << d.train.size()
            << " training and " << d.test.size() << " test samples to " << dir.string() << "\n";
  return kOk;
}

int train_cmd(const Common& c, const std::string& data, const std::string& model_name) {
  const RunConfig cfg = resolve(c);
  auto in = open_in(data);
  DatasetConfig header;
  const auto samples = read_samples(in, &header);
  if (header.interval != cfg.training.input_window) {
    throw ConfigError("dataset input window " + std::to_string(header.interval) +
                      " differs from training.input_window " +
                      std::to_string(cfg.training.input_window));
  }
  const fs::path dir = prepare_out(cfg);
  const auto training = as_training(samples);
  SefronNetwork net = initialize_network(
      training, cfg.training,
      cfg.allow_partial_init ? MissingPolarity::kLeaveSilent : MissingPolarity::kFail);
  const TrainingTrace trace = train(net, training, cfg.jobs);
  auto log = open_out(dir / "epoch_trace.tsv");
  log << "epoch\terrors\n";
  for (std::size_t e = 0; e < trace.epoch_errors.size(); ++e) {
    log << e + 1 << '\t' << trace.epoch_errors[e] << '\n';
    std::cout << "epoch " << e + 1 << "\terrors " << trace.epoch_errors[e] << "\n";
  }
  if (trace.skipped_updates > 0) {
    std::cerr << "warning: skipped " << trace.skipped_updates
              << " degenerate updates (non-positive required potential)\n";
  }
  auto out = open_out(dir / model_name);
  save_network(net, out);
  std::cout << "model written to " << (dir / model_name).string() << "\n";
  return kOk;
}

SefronNetwork read_model(const std::string& path) {
  auto in = open_in(path);
  return load_network(in);
}

int eval_cmd(const Common& c, const std::string& model_path, const std::string& data,
             const std::string& mode, const std::string& neighbors, bool sweep) {
  RunConfig cfg = resolve(c);
  const SefronNetwork net = read_model(model_path);
  const int n = cfg.dataset.num_segments;
  if (net.num_zones() > n) throw ShapeError("model has more zones than the perimeter");
  cfg.dataset.observed_zones = net.num_zones();
  const std::string obs = observation_of(net.num_zones(), n);
  const fs::path dir = prepare_out(cfg);

  if (!data.empty()) {
    auto in = open_in(data);
    DatasetConfig header;
    const auto samples = read_samples(in, &header);
    if (header.observed_zones != net.num_zones()) {
      throw ShapeError("dataset has " + std::to_string(header.observed_zones) +
                       " zones but the model expects " + std::to_string(net.num_zones()));
    }
    std::vector<LabelVector> preds(samples.size());
    std::vector<LabelVector> targets(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      preds[k] = net.predict(samples[k].pattern);
      targets[k] = samples[k].target;
    }
    auto out = open_out(dir / ("zone_metrics_" + obs + ".tsv"));
    write_zone_metrics(out, zone_metrics(preds, targets));
  }

  const DatasetConfig ecfg = cfg.eval_config();
  const auto suite = make_suite(ecfg, cfg.jobs);
  std::vector<SuccessSummary> rows;
  Table1Row t1;
  t1.observation = obs;
  const bool all = mode == "all";
  if (all || mode == "expert") {
    t1.expert = summarize(run_policy(suite, run_expert, cfg.jobs), "expert", obs);
    rows.push_back(t1.expert);
  }
  if (all || mode == "dsl") {
    const DslReports r = run_dsl_suite(suite, net, cfg.alpha, cfg.jobs);
    t1.dsl = summarize(r.plain, "dsl", obs);
    t1.dsl_neighbors = summarize(r.neighbors, "dsl+neighbors", obs);
    if (neighbors != "on") rows.push_back(t1.dsl);
    if (neighbors != "off") rows.push_back(t1.dsl_neighbors);
  }
  if (all || mode == "naive") {
    rows.push_back(summarize(run_policy(suite, naive_baseline, cfg.jobs), "naive", obs));
  }
  if (all) {
    auto out = open_out(dir / "table1.tsv");
    write_table1(out, std::span(&t1, 1), ecfg.seed);
  }
  {
    auto out = open_out(dir / "table2.tsv");
    write_table2(out, rows, ecfg.seed);
  }
  for (const auto& r : rows) {
    std::printf("%-14s %-8s mean %.4f  std %.4f  runs %zu\n", r.mode.c_str(),
                r.observation.c_str(), r.mean, r.std, r.runs);
  }
  if (sweep) {
    const auto s = scalability_sweep(cfg.team_sizes, net, ecfg, cfg.alpha, cfg.jobs);
    auto out = open_out(dir / "sweep.tsv");
    write_sweep(out, s, ecfg.seed);
    for (const auto& r : s) {
      std::printf("team %d  expert %.4f  dsl %.4f\n", r.team_size, r.expert.mean, r.dsl.mean);
    }
  }
  return kOk;
}

int simulate_cmd(const Common& c, int id, const std::string& policy,
                 const std::string& model_path) {
  const RunConfig cfg = resolve(c);
  const DatasetConfig ecfg = cfg.eval_config();
  const Scenario s = generate_scenario(ecfg, id);
  std::cout << "scenario " << to_record(s) << "\n";
  std::vector<Trajectory> trajectories;
  std::vector<Visit> dropped;
  if (policy == "expert") {
    const auto sol = prune_infeasible(s, default_kappa(s.num_segments));
    trajectories = chains_to_trajectories(sol);
    for (const Task& t : sol.pruned) dropped.push_back({t.segment, t.arrival_time});
  } else if (policy == "naive") {
    trajectories = naive_trajectories(s);
  } else {
    if (model_path.empty()) throw ConfigError("--policy dsl needs --model");
    const SefronNetwork net = read_model(model_path);
    const double alpha = policy == "dsl" ? 0.0 : cfg.alpha;
    const auto plan = plan_from_labels(s, dsl_segment_labels(s, net), alpha);
    trajectories = plan.trajectories;
    dropped = plan.dropped;
  }
  std::cout << format_plan(s, trajectories, dropped);
  const CaptureReport r = simulate_episode(s, trajectories);
  for (const auto& cap : r.captured) {
    std::printf("captured intruder %d by defender %d at %.6f (segment %d)\n", cap.intruder_id,
                cap.defender_id, cap.time, cap.segment.index());
  }
  for (const auto& e : r.escaped) {
    std::printf("escaped intruder %d at %.6f (segment %d)\n", e.intruder_id, e.time,
                e.segment.index());
  }
  std::printf("success %.4f\n", r.success_percentage);
  return kOk;
}

int sweep_cmd(const Common& c, const std::string& model_path, const std::string& sizes) {
  RunConfig cfg = resolve(c);
  if (!sizes.empty()) apply_setting(cfg, "eval.team_sizes", sizes);
  const SefronNetwork net = read_model(model_path);
  cfg.dataset.observed_zones = net.num_zones();
  const fs::path dir = prepare_out(cfg);
  const DatasetConfig ecfg = cfg.eval_config();
  const auto rows = scalability_sweep(cfg.team_sizes, net, ecfg, cfg.alpha, cfg.jobs);
  auto out = open_out(dir / "sweep.tsv");
  write_sweep(out, rows, ecfg.seed);
  for (const auto& r : rows) {
    std::printf("team %d  expert %.4f  dsl %.4f\n", r.team_size, r.expert.mean, r.dsl.mean);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perimeter defense: expert labels, spiking classifier, consensus evaluation"};
  app.require_subcommand(1);

  Common gen_c, train_c, eval_c, sim_c, sweep_c;

  auto* gen = app.add_subcommand("gen-data", "Generate scenarios and labeled spike samples");
  add_common(gen, gen_c);

  std::string train_data, model_name = "model.sefron";
  auto* tr = app.add_subcommand("train", "Train the classifier on a sample file");
  add_common(tr, train_c);
  tr->add_option("-d,--data", train_data, "Training sample file")->required();
  tr->add_option("--model-name", model_name, "Model file name inside the output directory");

  std::string eval_model, eval_data, eval_mode = "all", eval_neighbors = "both";
  std::string eval_sizes;
  auto* ev = app.add_subcommand("eval", "Evaluate a model: zone metrics and success tables");
  add_common(ev, eval_c);
  ev->add_option("-m,--model", eval_model, "Model file")->required();
  ev->add_option("-d,--data", eval_data, "Test sample file for per-zone metrics");
  ev->add_option("--mode", eval_mode, "all | expert | dsl | naive")
      ->check(CLI::IsMember({"all", "expert", "dsl", "naive"}));
  ev->add_option("--neighbors", eval_neighbors, "DSL columns: both | on | off")
      ->check(CLI::IsMember({"both", "on", "off"}));
  ev->add_option("--team-sizes", eval_sizes, "Also run the team-size sweep, e.g. 2..8");

  int sim_id = 0;
  std::string sim_policy = "expert", sim_model;
  auto* sim = app.add_subcommand("simulate", "Plan and simulate one evaluation scenario");
  add_common(sim, sim_c);
  sim->add_option("--id", sim_id, "Scenario id in the evaluation stream");
  sim->add_option("--policy", sim_policy, "expert | naive | dsl | dsl+neighbors")
      ->check(CLI::IsMember({"expert", "naive", "dsl", "dsl+neighbors"}));
  sim->add_option("-m,--model", sim_model, "Model file for the dsl policies");

  std::string sweep_model, sweep_sizes;
  auto* sw = app.add_subcommand("sweep", "Expert vs DSL success over team sizes");
  add_common(sw, sweep_c);
  sw->add_option("-m,--model", sweep_model, "Model file")->required();
  sw->add_option("--team-sizes", sweep_sizes, "Team sizes, e.g. 2..8 or 2,4,8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (gen->parsed()) return gen_data(gen_c);
    if (tr->parsed()) return train_cmd(train_c, train_data, model_name);
    if (ev->parsed()) {
      if (!eval_sizes.empty()) eval_c.overrides.push_back("eval.team_sizes=" + eval_sizes);
      return eval_cmd(eval_c, eval_model, eval_data, eval_mode, eval_neighbors,
                      !eval_sizes.empty());
    }
    if (sim->parsed()) return simulate_cmd(sim_c, sim_id, sim_policy, sim_model);
    if (sw->parsed()) return sweep_cmd(sweep_c, sweep_model, sweep_sizes);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const DegenerateError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InitError& e) {
    std::cerr << "init error: " << e.what() << "\n";
    return kOther;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
