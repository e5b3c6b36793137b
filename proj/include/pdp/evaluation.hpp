#pragma once

// Metrics and experiment drivers: per-zone precision/recall/F1, success
// summaries for the expert, DSL and naive policies, speed calibration and the
// team-size sweep, plus tab-separated report writers.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pdp/consensus.hpp"
#include "pdp/dataset.hpp"
#include "pdp/errors.hpp"
#include "pdp/sefron.hpp"
#include "pdp/world.hpp"

namespace pdp {

struct ZoneMetrics {
  std::vector<std::size_t> tp, fp, fn;
  std::vector<double> precision, recall, f1;
};

// Standard per-zone binary metrics; an undefined ratio reads 0.
ZoneMetrics zone_metrics(std::span<const LabelVector> predictions,
                         std::span<const LabelVector> targets);

double success_percentage(const CaptureReport& report);

struct SuccessSummary {
  double mean = 0.0;
  double std = 0.0;  // population std of per-run success
  std::size_t runs = 0;  // runs with at least one intruder
  std::string mode;         // expert | dsl | dsl+neighbors | naive
  std::string observation;  // full | partial
};

// Runs without intruders carry no information about the policy and are left
// out, so a team that captures nothing scores 0 rather than a padded mean.
SuccessSummary summarize(std::span<const CaptureReport> reports, std::string mode,
                         std::string observation);

// 100 * dsl.mean / expert.mean; DomainError when the expert mean is 0.
double learning_efficiency(const SuccessSummary& dsl, const SuccessSummary& expert);

// Equal static sectors. Defenders sorted by (segment, id) take sectors in
// order, first move to their sector's middle segment, then greedily visit the
// sector's intruders by arrival time when the speed limit allows.
int sector_of(SegmentId s, int sectors, int n);
SegmentId sector_home(int sector, int sectors, int n);
std::vector<Trajectory> naive_trajectories(const Scenario& s);
CaptureReport naive_baseline(const Scenario& s);

CaptureReport run_expert(const Scenario& s);

// Every defender's predicted labels in the global frame.
std::vector<std::vector<std::uint8_t>> dsl_segment_labels(const Scenario& s,
                                                          const SefronNetwork& net);

CaptureReport run_dsl(const Scenario& s, const std::vector<std::vector<std::uint8_t>>& labels,
                      double alpha);

std::vector<Scenario> make_suite(const DatasetConfig& cfg, int jobs = 1);

std::vector<CaptureReport> run_policy(std::span<const Scenario> suite,
                                      const std::function<CaptureReport(const Scenario&)>& policy,
                                      int jobs = 1);

struct DslReports {
  std::vector<CaptureReport> plain;      // alpha = 0
  std::vector<CaptureReport> neighbors;  // configured alpha
};

DslReports run_dsl_suite(std::span<const Scenario> suite, const SefronNetwork& net, double alpha,
                         int jobs = 1);

struct CalibrationError : Error {
  CalibrationError(std::vector<std::pair<double, double>> trace, const std::string& what)
      : Error(what), trace(std::move(trace)) {}
  std::vector<std::pair<double, double>> trace;  // (speed, expert mean)
};

struct Calibration {
  double speed = 0.0;
  double mean = 0.0;
  std::vector<std::pair<double, double>> trace;
};

// Bisection on the defender speed until the expert's mean success over
// cfg.runs scenarios (at least 500) is within `tolerance` of `target`.
Calibration calibrate_defender_speed(double target, DatasetConfig cfg, double tolerance = 1.0,
                                     int jobs = 1);

struct SweepRow {
  int team_size = 0;
  SuccessSummary expert;
  SuccessSummary dsl;
};

// Same network for every size; scenarios are regenerated per size.
std::vector<SweepRow> scalability_sweep(std::span<const int> team_sizes, const SefronNetwork& net,
                                        DatasetConfig cfg, double alpha, int jobs = 1);

double spearman(std::span<const double> x, std::span<const double> y);

struct Table1Row {
  std::string observation;
  SuccessSummary expert, dsl, dsl_neighbors;
};

void write_table1(std::ostream& out, std::span<const Table1Row> rows, std::uint64_t seed);
void write_table2(std::ostream& out, std::span<const SuccessSummary> rows, std::uint64_t seed);
void write_zone_metrics(std::ostream& out, const ZoneMetrics& metrics);
void write_sweep(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t seed);

}  // namespace pdp
