// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Each criterion pins its thresholds and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tiltsim/config.hpp"
#include "tiltsim/verify.hpp"

using namespace tiltsim;

namespace {

struct Check {
  std::string label;
  std::function<bool(std::string&)> fn;
  double time_budget_s = 0.0;  // 0 = no budget
};

SimResult run_preset(const std::string& name) {
  const ExperimentConfig c = preset(name);
  return run_simulation(c.sim, c.vehicle, c.gains(), c.circle);
}

size_t index_at_time(const std::vector<SimRecord>& recs, double t) {
  size_t best = 0;
  for (size_t i = 0; i < recs.size(); ++i) {
    if (std::fabs(recs[i].t - t) < std::fabs(recs[best].t - t)) best = i;
  }
  return best;
}

bool criterion_oracles(std::string& detail) {
  const VehicleParams params;
  char buf[256];

  const double jerk_err = fd_jerk_max_rel_error(params);
  const double snap_err = fd_snap_max_rel_error(params);
  const double pinv_err = pinv_identity_max_error();
  const auto [r1, r2] = integrator_error_ratios();

  std::snprintf(buf, sizeof buf,
                "jerk fd %.2e (<1e-5), snap fd %.2e (<1e-4), pinv %.2e (<1e-9), "
                "integrator ratios %.2f/%.2f (>=7.5)",
                jerk_err, snap_err, pinv_err, r1, r2);
  detail = buf;
  return jerk_err < 1e-5 && snap_err < 1e-4 && pinv_err < 1e-9 && r1 >= 7.5 &&
         r2 >= 7.5;
}

bool criterion_equivalence(std::string& detail) {
  const double fl3 = linear_ode_equivalence_error(ControllerKind::FL3);
  const double fl4 = linear_ode_equivalence_error(ControllerKind::FL4);
  char buf[128];
  std::snprintf(buf, sizeof buf, "fl3 rel err %.2e, fl4 rel err %.2e (<1e-3)",
                fl3, fl4);
  detail = buf;
  return fl3 < 1e-3 && fl4 < 1e-3;
}

bool criterion_fl3_short(std::string& detail) {
  const SimResult res = run_preset("fl3_10s");
  const SimRecord& last = res.records.back();

  double worst_overlap = 0.0;
  for (const SimRecord& r : res.records) {
    if (r.t >= 1.0) break;
    const double mean = 0.5 * (r.omega1_sq + r.omega2_sq);
    if (mean > 0.0) {
      worst_overlap =
          std::max(worst_overlap, std::fabs(r.omega1_sq - r.omega2_sq) / mean);
    }
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "final err (%.2e, %.2e) (<0.1), early input split %.2f%% (<5%%)",
                std::fabs(last.err.x), std::fabs(last.err.y),
                100.0 * worst_overlap);
  detail = buf;
  return std::fabs(last.err.x) < 0.1 && std::fabs(last.err.y) < 0.1 &&
         worst_overlap < 0.05;
}

bool criterion_fl3_long(std::string& detail) {
  const ExperimentConfig c = preset("fl3_2000s");
  const SimResult res = run_simulation(c.sim, c.vehicle, c.gains(), c.circle);

  double worst_err = 0.0;
  for (const SimRecord& r : res.records) {
    if (r.t > 100.0) worst_err = std::max(worst_err, r.err.norm());
  }

  const DriftReport drift = drift_metric(res.records, c.drift);
  const double d10 = drift.d[index_at_time(res.records, 10.0)];
  const double d_end = drift.d_at_end;
  const bool growth = d_end > 10.0 * d10;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "err(t>100) max %.2e (<0.5), d(2000)=%.1f vs 10*d(10)=%.1f, "
                "slope %.2f, detector %s",
                worst_err, d_end, 10.0 * d10, drift.post_settle_slope,
                drift.detected ? "fired" : "quiet");
  detail = buf;
  return worst_err < 0.5 && growth && drift.settled &&
         drift.post_settle_slope > 0.0 && drift.detected;
}

bool criterion_gait(std::string& detail) {
  const ExperimentConfig c = preset("gait_10s");
  const SimResult res = run_simulation(c.sim, c.vehicle, c.gains(), c.circle);

  const DriftReport drift = drift_metric(res.records, c.drift);
  const SaturationSummary sat = detect_saturation(res.events, res.records);

  const SimRecord& last = res.records.back();
  const double mean_sq = 0.5 * (last.omega1_sq + last.omega2_sq);
  const double d10 = std::fabs(last.omega1_sq - last.omega2_sq);
  const double drift_tolerance = 0.05 * mean_sq;

  // A saturation episode must begin inside the reported window.
  bool onset_in_window = false;
  double onset = -1.0;
  for (const Event& e : res.events) {
    if (e.kind == EventKind::SaturationOn && e.t > 1.0 && e.t < 6.0) {
      onset_in_window = true;
      onset = e.t;
      break;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "drift %s, d(10)=%.1f (tol %.1f), saturation onset %.2f s "
                "(in (1,6))",
                drift.detected ? "DETECTED" : "none", d10, drift_tolerance,
                onset);
  detail = buf;
  return !drift.detected && d10 < drift_tolerance && onset_in_window;
}

bool criterion_fl4_long(std::string& detail) {
  const ExperimentConfig c = preset("fl4_long");
  const SimResult res = run_simulation(c.sim, c.vehicle, c.gains(), c.circle);

  // Post-transient minimum of the error norm.
  const double post_transient_start = 30.0;
  double min_err = std::numeric_limits<double>::infinity();
  for (const SimRecord& r : res.records) {
    if (r.t >= post_transient_start) min_err = std::min(min_err, r.err.norm());
  }

  // First clamp of the second propeller.
  double onset = -1.0;
  for (const Event& e : res.events) {
    if (e.kind == EventKind::SaturationOn && e.channel == 1) {
      onset = e.t;
      break;
    }
  }
  const bool onset_ok = onset > 1.0 && onset < 6.0;

  // Final 20%: binned means of the error norm must rise monotonically.
  const size_t n = res.records.size();
  const size_t tail_start = n - n / 5;
  constexpr int kBins = 10;
  double bins[kBins] = {0.0};
  size_t counts[kBins] = {0};
  for (size_t i = tail_start; i < n; ++i) {
    const size_t b = std::min<size_t>(
        kBins - 1, (i - tail_start) * kBins / (n - tail_start));
    bins[b] += res.records[i].err.norm();
    counts[b] += 1;
  }
  bool rising = true;
  for (int b = 0; b < kBins; ++b) {
    if (counts[b] == 0) {
      rising = false;
      break;
    }
    bins[b] /= static_cast<double>(counts[b]);
    if (b > 0 && bins[b] < bins[b - 1]) rising = false;
  }
  rising = rising && bins[kBins - 1] > bins[0];

  const double final_err = res.records.back().err.norm();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "min post-transient err %.3f (<=0.3), omega2 clamp onset %.2f s "
                "(in (1,6)), final err %.3f (>%.3f), tail trend %s",
                min_err, onset, final_err, 5.0 * min_err,
                rising ? "rising" : "not rising");
  detail = buf;
  return min_err <= 0.3 && onset_ok && final_err > 5.0 * min_err && rising;
}

bool criterion_properties(std::string& detail) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-30.0, 30.0);

  // Rotation identities.
  bool rotations_ok = true;
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(rng);
    const Mat2 prod = rotation(a) * rotation(-a);
    const Mat2 diff = prod + Mat2::identity() * -1.0;
    rotations_ok = rotations_ok && diff.max_abs() < 1e-12 &&
                   std::fabs(rotation(a).det() - 1.0) < 1e-12;
  }

  // Structural coupling, speed nonnegativity and band width on real runs.
  const VehicleParams params;
  size_t samples = 0;
  bool runs_ok = true;
  for (const char* name : {"fl3_10s", "gait_10s"}) {
    const SimResult res = run_preset(name);
    for (const SimRecord& r : res.records) {
      ++samples;
      runs_ok = runs_ok && r.psi == -params.inertia_ratio() * r.state.alpha;
      runs_ok = runs_ok && r.state.omega1 >= 0.0 && r.state.omega2 >= 0.0;
      runs_ok = runs_ok &&
                std::fabs((r.dir_upper - r.dir_lower) - M_PI / 3.0) < 1e-12;
    }
  }

  // Determinism: two identical runs serialize identically.
  const SimResult a = run_preset("fl3_10s");
  const SimResult b = run_preset("fl3_10s");
  const bool deterministic = timeseries_csv(a.records) == timeseries_csv(b.records) &&
                             events_json(a.events) == events_json(b.events);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "rotations %s, %zu run samples %s, determinism %s",
                rotations_ok ? "ok" : "FAIL", samples, runs_ok ? "ok" : "FAIL",
                deterministic ? "ok" : "FAIL");
  detail = buf;
  return rotations_ok && runs_ok && deterministic && samples >= 1000;
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"criterion 1: analytic decompositions, pseudo-inverse and integrator "
       "oracles",
       criterion_oracles, 10.0},
      {"criterion 2: closed-loop equivalence with the linear error dynamics",
       criterion_equivalence, 0.0},
      {"criterion 3: third-derivative law, 10 s tracking run",
       criterion_fl3_short, 1.0},
      {"criterion 4: third-derivative law, 2000 s input-drift run",
       criterion_fl3_long, 30.0},
      {"criterion 5: scheduled-tilt law, saturation without drift",
       criterion_gait, 1.0},
      {"criterion 6: fourth-derivative law, saturation then divergence",
       criterion_fl4_long, 60.0},
      {"criterion 7: randomized invariant suites", criterion_properties, 0.0},
  };

  bool all = true;
  for (const Check& c : checks) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.time_budget_s > 0.0 && secs > c.time_budget_s) {
      pass = false;
      detail += " [over time budget]";
    }
    std::printf("[%s] %s (%.2f s) - %s\n", pass ? "PASS" : "FAIL",
                c.label.c_str(), secs, detail.c_str());
    all = all && pass;
  }
  std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                          : "ACCEPTANCE: FAILURES present");
  return all ? 0 : 1;
}
