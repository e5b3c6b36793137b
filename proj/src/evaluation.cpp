#include "pdp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "parallel.hpp"
#include "pdp/expert.hpp"

namespace pdp {

ZoneMetrics zone_metrics(std::span<const LabelVector> predictions,
                         std::span<const LabelVector> targets) {
  if (predictions.size() != targets.size()) {
    throw ShapeError("predictions and targets differ in length");
  }
  ZoneMetrics z;
  const std::size_t m = targets.empty() ? 0 : targets.front().size();
  z.tp.assign(m, 0);
  z.fp.assign(m, 0);
  z.fn.assign(m, 0);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (predictions[k].size() != m || targets[k].size() != m) {
      throw ShapeError("label vectors differ in zone count");
    }
    for (std::size_t j = 0; j < m; ++j) {
      const bool p = predictions[k][j];
      const bool t = targets[k][j];
      z.tp[j] += p && t;
      z.fp[j] += p && !t;
      z.fn[j] += !p && t;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double tp = static_cast<double>(z.tp[j]);
    const double pr = z.tp[j] + z.fp[j] ? tp / static_cast<double>(z.tp[j] + z.fp[j]) : 0.0;
    const double rc = z.tp[j] + z.fn[j] ? tp / static_cast<double>(z.tp[j] + z.fn[j]) : 0.0;
    z.precision.push_back(pr);
    z.recall.push_back(rc);
    z.f1.push_back(pr + rc > 0.0 ? 2.0 * pr * rc / (pr + rc) : 0.0);
  }
  return z;
}

double success_percentage(const CaptureReport& report) {
  if (report.total() == 0) return 100.0;
  return 100.0 * static_cast<double>(report.captured.size()) /
         static_cast<double>(report.total());
}

SuccessSummary summarize(std::span<const CaptureReport> reports, std::string mode,
                         std::string observation) {
  SuccessSummary s;
  s.mode = std::move(mode);
  s.observation = std::move(observation);
  double sum = 0.0;
  double sq = 0.0;
  for (const auto& r : reports) {
    if (r.total() == 0) continue;
    const double p = success_percentage(r);
    sum += p;
    sq += p * p;
    ++s.runs;
  }
  if (s.runs > 0) {
    const double n = static_cast<double>(s.runs);
    s.mean = sum / n;
    s.std = std::sqrt(std::max(0.0, sq / n - s.mean * s.mean));
  }
  return s;
}

double learning_efficiency(const SuccessSummary& dsl, const SuccessSummary& expert) {
  if (expert.mean == 0.0) throw DomainError("learning efficiency undefined: expert mean is 0");
  return 100.0 * dsl.mean / expert.mean;
}

int sector_of(SegmentId s, int sectors, int n) {
  // Sector k holds segment centers in (k, k + 1] * n / sectors, measured in
  // segments; a center exactly on a boundary goes to the lower sector.
  const long long num = static_cast<long long>(2 * s.index() - 1) * sectors;
  return static_cast<int>((num + 2LL * n - 1) / (2LL * n)) - 1;
}

SegmentId sector_home(int sector, int sectors, int n) {
  const double middle = (sector + 0.5) * n / sectors + 0.5;
  return wrap_segment(std::lround(middle), n);
}

std::vector<Trajectory> naive_trajectories(const Scenario& s) {
  const int n = s.num_segments;
  const int N = static_cast<int>(s.defenders.size());
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& da = s.defenders[a];
    const auto& db = s.defenders[b];
    return da.segment != db.segment ? da.segment < db.segment : da.id < db.id;
  });
  std::vector<const Intruder*> by_arrival;
  for (const auto& i : s.intruders) by_arrival.push_back(&i);
  std::stable_sort(by_arrival.begin(), by_arrival.end(), [](const Intruder* a, const Intruder* b) {
    return a->arrival_time() < b->arrival_time();
  });

  std::vector<Trajectory> out(N);
  for (int sector = 0; sector < N; ++sector) {
    const Defender& d = s.defenders[order[sector]];
    Trajectory& traj = out[order[sector]];
    const SegmentId home = sector_home(sector, N, n);
    double now = travel_time(arc_distance(d.segment, home, n), n, d.max_angular_speed);
    if (!std::isfinite(now)) continue;  // a defender that cannot move stays put
    SegmentId at = home;
    traj.push_back({home, now});
    for (const Intruder* i : by_arrival) {
      if (sector_of(i->segment, N, n) != sector) continue;
      const double t = i->arrival_time();
      if (t >= now - kTimeTolerance &&
          reachable(arc_distance(at, i->segment, n), n, d.max_angular_speed, t - now)) {
        traj.push_back({i->segment, t});
        at = i->segment;
        now = t;
      }
    }
  }
  return out;
}

CaptureReport naive_baseline(const Scenario& s) {
  return simulate_episode(s, naive_trajectories(s));
}

CaptureReport run_expert(const Scenario& s) {
  const auto sol = prune_infeasible(s, default_kappa(s.num_segments));
  return simulate_episode(s, chains_to_trajectories(sol));
}

std::vector<std::vector<std::uint8_t>> dsl_segment_labels(const Scenario& s,
                                                          const SefronNetwork& net) {
  std::vector<std::vector<std::uint8_t>> out;
  for (const Defender& d : s.defenders) {
    const ZoneMap zones = zones_of(d.segment, net.num_zones(), s.num_segments);
    const auto pattern = encode(s, d, zones, net.config().input_window, s.horizon);
    out.push_back(labels_to_segments(net.predict(pattern), zones));
  }
  return out;
}

CaptureReport run_dsl(const Scenario& s, const std::vector<std::vector<std::uint8_t>>& labels,
                      double alpha) {
  return simulate_episode(s, plan_from_labels(s, labels, alpha).trajectories);
}

std::vector<Scenario> make_suite(const DatasetConfig& cfg, int jobs) {
  std::vector<Scenario> suite(cfg.runs);
  detail::parallel_for(cfg.runs, jobs, [&](int id) { suite[id] = generate_scenario(cfg, id); });
  return suite;
}

std::vector<CaptureReport> run_policy(std::span<const Scenario> suite,
                                      const std::function<CaptureReport(const Scenario&)>& policy,
                                      int jobs) {
  std::vector<CaptureReport> out(suite.size());
  detail::parallel_for(static_cast<int>(suite.size()), jobs,
                       [&](int k) { out[k] = policy(suite[k]); });
  return out;
}

DslReports run_dsl_suite(std::span<const Scenario> suite, const SefronNetwork& net, double alpha,
                         int jobs) {
  DslReports r;
  r.plain.resize(suite.size());
  r.neighbors.resize(suite.size());
  detail::parallel_for(static_cast<int>(suite.size()), jobs, [&](int k) {
    const auto labels = dsl_segment_labels(suite[k], net);
    r.plain[k] = run_dsl(suite[k], labels, 0.0);
    r.neighbors[k] = run_dsl(suite[k], labels, alpha);
  });
  return r;
}

Calibration calibrate_defender_speed(double target, DatasetConfig cfg, double tolerance,
                                     int jobs) {
  cfg.runs = std::max(cfg.runs, 500);
  Calibration c;
  // The suite is drawn once; changing only the speed keeps the estimate
  // monotone in it.
  auto suite = make_suite(cfg, jobs);
  auto mean_at = [&](double v) {
    for (auto& s : suite) {
      for (auto& d : s.defenders) d.max_angular_speed = v;
    }
    const double m = summarize(run_policy(suite, run_expert, jobs), "expert", "full").mean;
    c.trace.emplace_back(v, m);
    return m;
  };
  double lo = 0.0;
  double hi = 2.0 * hop_angle(cfg.num_segments) * cfg.num_segments / cfg.horizon;
  const double f_lo = mean_at(lo);
  const double f_hi = mean_at(hi);
  if (f_lo > target + tolerance || f_hi < target - tolerance) {
    throw CalibrationError(c.trace, "no speed bracket reaches the target success");
  }
  if (std::abs(f_lo - target) <= tolerance) return c.speed = lo, c.mean = f_lo, c;
  if (std::abs(f_hi - target) <= tolerance) return c.speed = hi, c.mean = f_hi, c;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = mean_at(mid);
    if (std::abs(f - target) <= tolerance) {
      c.speed = mid;
      c.mean = f;
      return c;
    }
    (f < target ? lo : hi) = mid;
  }
  throw CalibrationError(c.trace, "bisection did not settle within tolerance");
}

std::vector<SweepRow> scalability_sweep(std::span<const int> team_sizes, const SefronNetwork& net,
                                        DatasetConfig cfg, double alpha, int jobs) {
  const std::string obs = net.num_zones() == cfg.num_segments ? "full" : "partial";
  std::vector<SweepRow> rows;
  for (int size : team_sizes) {
    cfg.team_size = size;
    const auto suite = make_suite(cfg, jobs);
    SweepRow row;
    row.team_size = size;
    row.expert = summarize(run_policy(suite, run_expert, jobs), "expert", obs);
    row.dsl = summarize(run_dsl_suite(suite, net, alpha, jobs).neighbors, "dsl+neighbors", obs);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs two equal series");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

void write_table1(std::ostream& out, std::span<const Table1Row> rows, std::uint64_t seed) {
  out << "# seed " << seed << "\n";
  out << "observation\texpert\tdsl\tdsl_neighbors\tefficiency\tefficiency_neighbors\truns\n";
  for (const auto& r : rows) {
    out << r.observation << '\t' << fmt(r.expert.mean) << '\t' << fmt(r.dsl.mean) << '\t'
        << fmt(r.dsl_neighbors.mean) << '\t';
    out << (r.expert.mean > 0 ? fmt(learning_efficiency(r.dsl, r.expert)) : "nan") << '\t';
    out << (r.expert.mean > 0 ? fmt(learning_efficiency(r.dsl_neighbors, r.expert)) : "nan")
        << '\t' << r.expert.runs << '\n';
  }
}

void write_table2(std::ostream& out, std::span<const SuccessSummary> rows, std::uint64_t seed) {
  out << "# seed " << seed << "\n";
  out << "method\tobservation\tmean\tstd\tthree_sigma\truns\n";
  for (const auto& r : rows) {
    out << r.mode << '\t' << r.observation << '\t' << fmt(r.mean) << '\t' << fmt(r.std) << '\t'
        << fmt(3.0 * r.std) << '\t' << r.runs << '\n';
  }
}

void write_zone_metrics(std::ostream& out, const ZoneMetrics& z) {
  out << "zone\tprecision\trecall\tf1\ttp\tfp\tfn\n";
  for (std::size_t j = 0; j < z.f1.size(); ++j) {
    out << j + 1 << '\t' << fmt(z.precision[j]) << '\t' << fmt(z.recall[j]) << '\t'
        << fmt(z.f1[j]) << '\t' << z.tp[j] << '\t' << z.fp[j] << '\t' << z.fn[j] << '\n';
  }
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t seed) {
  out << "# seed " << seed << "\n";
  out << "team_size\texpert\tdsl\tgap\truns\n";
  for (const auto& r : rows) {
    out << r.team_size << '\t' << fmt(r.expert.mean) << '\t' << fmt(r.dsl.mean) << '\t'
        << fmt(std::abs(r.expert.mean - r.dsl.mean)) << '\t' << r.expert.runs << '\n';
  }
}

}  // namespace pdp
