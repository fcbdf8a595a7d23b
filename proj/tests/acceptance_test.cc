/* Copyright 2026 The LET Metrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Acceptance suite. Each criterion prints one PASS or FAIL line; the exit
// status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "let_metrics/let_metrics.h"
#include "let_metrics/commands.h"
#include "oracles.h"
#include "test_util.h"

namespace let_metrics {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Criterion 1: rotated-box IoU against point sampling.
Outcome GeometryOracle() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> pos(-1.0, 1.0), dim(0.5, 4.0),
      angle(-kPi, kPi);
  double max_err = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Box3D a({pos(rng), pos(rng), 0.3 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const Box3D b({pos(rng), pos(rng), 0.3 * pos(rng)}, dim(rng), dim(rng),
                  dim(rng), angle(rng));
    const double mc = testing::MonteCarloIou(testing::ToPlain(a),
                                             testing::ToPlain(b), 1000000, rng);
    max_err = std::max(max_err, std::abs(Iou3d(a, b) - mc));
  }
  return {max_err <= 0.01, "500 pairs, 1e6 samples each, max |iou - mc| = " +
                               Fmt("%.5f", max_err)};
}

// Criterion 2: Hungarian matching against exhaustive search.
Outcome MatchingOracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(0, 6), level(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng), m = size(rng);
    std::vector<std::vector<double>> w(n, std::vector<double>(m, 0.0));
    for (auto& row : w) {
      for (double& x : row) {
        // Odd trials use coarse levels so exact ties are common.
        x = trial % 2 ? 0.25 * level(rng) : (u(rng) < 0.3 ? 0.0 : u(rng));
      }
    }
    const auto got = HungarianMatch(WeightMatrix::FromRows(w));
    const auto want = testing::BruteForceAssignment(w);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : got.matches) pairs.emplace_back(p.pred_index, p.gt_index);
    if (pairs != want.pairs) ++mismatches;
  }
  return {mismatches == 0,
          "1000 instances up to 6x6, " + std::to_string(mismatches) +
              " disagreements"};
}

// Criterion 3: accumulation traces.
Outcome FormulaTraces() {
  FrameMatchResult r;
  r.matches = {{0, 0, 1.0, 1.0, 1.0}, {1, 1, 0.5, 1.0, 0.5}};
  r.unmatched_preds = {2};
  r.unmatched_gts = {2};
  const std::vector<FrameMatchResult> one{r};
  const PRPoint p = AccumulateCutoff(one);
  bool ok = std::abs(p.precision - 2.0 / 3.0) <= 1e-12 &&
            std::abs(p.mean_affinity - 0.75) <= 1e-12 &&
            std::abs(p.weighted_precision - 0.5) <= 1e-12 &&
            std::abs(p.recall - 2.0 / 3.0) <= 1e-12 &&
            std::abs(p.tp_p - 1.5) <= 1e-12 && std::abs(p.fp - 1.5) <= 1e-12;

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(0, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double max_dev = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<FrameMatchResult> frames(1 + trial % 5);
    for (auto& f : frames) {
      const int matched = count(rng);
      for (int k = 0; k < matched; ++k) {
        const double a = u(rng) < 0.2 ? 1.0 : u(rng);
        f.matches.push_back({std::size_t(k), std::size_t(k), a, 1.0, a});
      }
      for (int k = count(rng); k > 0; --k) f.unmatched_preds.push_back(k);
      for (int k = count(rng); k > 0; --k) f.unmatched_gts.push_back(k);
    }
    const PRPoint q = AccumulateCutoff(frames);
    max_dev = std::max(max_dev, std::abs(q.weighted_precision -
                                         q.mean_affinity * q.precision));
    if (q.weighted_precision > q.precision) ok = false;
    // Soft counts split every prediction between tp_p and fp.
    if (std::abs(q.tp_p + q.fp - static_cast<double>(q.num_preds)) > 1e-9) {
      ok = false;
    }
  }
  ok = ok && max_dev <= 1e-12;
  return {ok, "hand example exact; 1e4 random accumulations, max |p_L - a*p| = " +
                  Fmt("%.2e", max_dev)};
}

// Criterion 4: pure line-of-sight translations.
Outcome AlignmentInvariant() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> range(5.0, 80.0), angle(-kPi, kPi),
      elev(-0.2, 0.2), scale(0.5, 1.5), dim(0.5, 5.0), frac(0.02, 0.5),
      floor_m(0.0, 2.0);
  double max_iou_err = 0.0, max_aff_err = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double r = range(rng), az = angle(rng), el = elev(rng);
    const Vec3 g{r * std::cos(el) * std::cos(az),
                 r * std::cos(el) * std::sin(az), r * std::sin(el)};
    const Box3D gt(g, dim(rng), dim(rng), dim(rng), angle(rng));
    const double c = scale(rng);
    const Box3D pred = gt.WithCenter(c * g);
    const ToleranceConfig cfg{frac(rng), floor_m(rng)};
    max_iou_err = std::max(max_iou_err, std::abs(LetIou(pred, gt) - 1.0));
    const double range_g = Norm(g);
    const double expected =
        1.0 - std::min(std::abs(c - 1.0) * range_g /
                           std::max(cfg.percentage * range_g, cfg.min_meters),
                       1.0);
    max_aff_err = std::max(
        max_aff_err, std::abs(LongitudinalAffinity(pred.center(), g, cfg) -
                              expected));
  }
  return {max_iou_err <= 1e-9 && max_aff_err <= 1e-12,
          "1e4 pairs, max |let_iou - 1| = " + Fmt("%.2e", max_iou_err) +
              ", max affinity error = " + Fmt("%.2e", max_aff_err)};
}

// Criterion 5: APL never exceeds AP; equal without longitudinal noise.
Outcome AplBoundedByAp() {
  int violations = 0, equality_failures = 0;
  double max_gap_zero_noise = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    NoiseModel noise;
    const bool zero_longitudinal = seed % 2 == 1;
    noise.longitudinal_sigma_fraction =
        zero_longitudinal ? 0.0 : 0.02 * static_cast<double>(1 + seed % 5);
    const Dataset ds = testing::SyntheticDataset(1000 + seed, 20, 10, noise);
    EvalOptions options;
    options.workers = 1;
    options.compute_baseline = false;
    const MetricsReport report = Evaluate(ds, EvalConfig{}, options);
    for (const auto& e : report.entries) {
      if (!e.let_3d_ap) continue;
      if (*e.let_3d_apl > *e.let_3d_ap) ++violations;
      if (zero_longitudinal) {
        const double gap = *e.let_3d_ap - *e.let_3d_apl;
        max_gap_zero_noise = std::max(max_gap_zero_noise, std::abs(gap));
        if (gap != 0.0) ++equality_failures;
      }
    }
  }
  // Diagnostic: with lateral noise also off the centers are exact copies.
  int exact_center_failures = 0;
  for (std::uint64_t seed = 1; seed < 100; seed += 2) {
    NoiseModel noise;
    noise.longitudinal_sigma_fraction = 0.0;
    noise.lateral_sigma_m = 0.0;
    const Dataset ds = testing::SyntheticDataset(1000 + seed, 20, 10, noise);
    const MetricsReport report = Evaluate(ds, EvalConfig{}, {1, false});
    for (const auto& e : report.entries) {
      if (e.let_3d_ap && *e.let_3d_apl != *e.let_3d_ap) ++exact_center_failures;
    }
  }
  return {violations == 0 && equality_failures == 0,
          "100 datasets, " + std::to_string(violations) +
              " slices with APL > AP; zero longitudinal noise: " +
              std::to_string(equality_failures) +
              " slices with APL != AP (max gap " +
              Fmt("%.2e", max_gap_zero_noise) +
              "); lateral also zero: " +
              std::to_string(exact_center_failures) + " slices with APL != AP"};
}

NoiseModel CameraLike() {
  NoiseModel noise;
  noise.longitudinal_sigma_fraction = 0.08;
  noise.lateral_sigma_m = 0.2;
  noise.miss_rate = 0.1;
  noise.false_positive_rate_per_frame = 0.5;
  return noise;
}

// Criterion 6: LET-3D-AP rises with tolerance and levels off after 15%.
Outcome ToleranceTrend() {
  const Dataset ds = testing::SyntheticDataset(2024, 500, 20, CameraLike());
  const std::vector<double> tolerances{0.025, 0.05, 0.10, 0.15, 0.20};
  const auto rows =
      ToleranceSweep(ds, EvalConfig{}, tolerances, DefaultWorkerCount());
  bool increasing = true, saturated = true;
  std::ostringstream detail;
  for (const char* cls : {"vehicle", "pedestrian", "cyclist"}) {
    std::vector<double> ap;
    for (double t : tolerances) {
      for (const auto& r : rows) {
        if (r.tolerance == t && r.class_label == cls &&
            r.range_bin == kAllRanges) {
          ap.push_back(100.0 * r.let_3d_ap.value_or(0.0));
        }
      }
    }
    detail << cls << " [";
    for (std::size_t k = 0; k < ap.size(); ++k) {
      detail << (k ? " " : "") << Fmt("%.1f", ap[k]);
    }
    detail << "] ";
    for (std::size_t k = 1; k < 4; ++k) increasing &= ap[k] > ap[k - 1];
    const double step = ap[4] - ap[3];
    saturated &= std::abs(step) < 1.0;
    detail << "15->20% step " << Fmt("%.2f", step) << " pp; ";
  }
  detail << "increasing to 15%: " << (increasing ? "yes" : "no")
         << ", saturated: " << (saturated ? "yes" : "no");
  return {increasing && saturated, detail.str()};
}

// Criterion 7: LiDAR-like vs camera-like contrast on vehicles.
Outcome LidarCameraContrast() {
  NoiseModel lidar;
  lidar.longitudinal_sigma_fraction = 0.005;
  const Dataset lidar_ds = testing::SyntheticDataset(2024, 500, 20, lidar);
  const MetricsReport lidar_report =
      Evaluate(lidar_ds, EvalConfig{}, {DefaultWorkerCount(), true});
  const auto* lv = lidar_report.Find(kVehicle, kAllRanges);

  const Dataset camera_ds =
      testing::SyntheticDataset(2024, 500, 20, CameraLike());
  EvalConfig strict;
  strict.iou_thresholds[std::string(kVehicle)] = 0.7;
  const MetricsReport camera_report =
      Evaluate(camera_ds, strict, {DefaultWorkerCount(), true});
  const auto* cv = camera_report.Find(kVehicle, kAllRanges);

  const double lidar_gap = 100.0 * (*lv->let_3d_ap - *lv->ap_3d);
  const double camera_gap = 100.0 * (*cv->let_3d_ap - *cv->ap_3d);
  const double lidar_mla = lv->mla.value_or(0.0);
  const double camera_mla = cv->mla.value_or(0.0);
  const bool lidar_ok = lidar_gap <= 3.0 && lidar_mla >= 0.95;
  const bool camera_ok =
      camera_gap >= 15.0 && camera_mla >= 0.6 && camera_mla <= 0.85;
  std::ostringstream detail;
  detail << "lidar-like: 3D AP " << Fmt("%.1f", 100.0 * *lv->ap_3d)
         << ", LET-3D-AP " << Fmt("%.1f", 100.0 * *lv->let_3d_ap) << ", gap "
         << Fmt("%.2f", lidar_gap) << " pp, mLA " << Fmt("%.3f", lidar_mla)
         << (lidar_ok ? " (ok)" : " (out of range)")
         << "; camera-like @0.7: 3D AP " << Fmt("%.1f", 100.0 * *cv->ap_3d)
         << ", LET-3D-AP " << Fmt("%.1f", 100.0 * *cv->let_3d_ap) << ", gap "
         << Fmt("%.2f", camera_gap) << " pp, mLA " << Fmt("%.3f", camera_mla)
         << (camera_ok ? " (ok)" : " (out of range)");
  return {lidar_ok && camera_ok, detail.str()};
}

// Criterion 8: reports do not depend on the worker count.
Outcome Determinism() {
  const std::string dir = LET_METRICS_TEST_DATA_DIR;
  const Dataset ds =
      LoadDataset(dir + "/golden_gt.jsonl", dir + "/golden_pred.jsonl");
  const std::size_t max_workers =
      std::max<std::size_t>(DefaultWorkerCount(), 8);
  std::vector<std::string> texts;
  for (std::size_t w : {std::size_t{1}, std::size_t{4}, max_workers}) {
    texts.push_back(ReportToString(Evaluate(ds, EvalConfig{}, {w, true})));
  }
  const std::string golden = testing::ReadText(dir + "/golden_report.json");
  const bool same = texts[0] == texts[1] && texts[1] == texts[2];
  return {same && texts[0] == golden,
          "workers {1, 4, " + std::to_string(max_workers) + "}: " +
              (same ? "byte-identical" : "DIFFERENT") +
              (texts[0] == golden ? ", equal to golden report"
                                  : ", differs from golden report")};
}

// Criterion 9: decomposition reconstruction and orthogonality.
Outcome DecompositionProperties() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  double max_recon = 0.0, max_ortho = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const Vec3 g{d(rng), d(rng), d(rng)};
    if (Norm(g) < 1e-3) continue;
    const Vec3 p{d(rng), d(rng), d(rng)};
    const auto e = DecomposeError(p, g);
    const Vec3 diff = e.longitudinal + e.lateral - e.localization;
    max_recon = std::max({max_recon, std::abs(diff.x), std::abs(diff.y),
                          std::abs(diff.z)});
    max_ortho = std::max(max_ortho, std::abs(Dot(e.lateral, g / Norm(g))));
  }
  return {max_recon <= 1e-9 && max_ortho <= 1e-9,
          "1e5 pairs, max reconstruction error " + Fmt("%.2e", max_recon) +
              ", max |e_lat . u_G| " + Fmt("%.2e", max_ortho)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 when unbounded
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace let_metrics

int main() {
  using namespace let_metrics;
  const std::vector<Criterion> criteria = {
      {1, "geometry oracle", 120.0, GeometryOracle},
      {2, "matching oracle", 10.0, MatchingOracle},
      {3, "formula traces", 0.0, FormulaTraces},
      {4, "alignment invariant", 0.0, AlignmentInvariant},
      {5, "APL <= AP", 0.0, AplBoundedByAp},
      {6, "tolerance trend", 300.0, ToleranceTrend},
      {7, "lidar/camera contrast", 0.0, LidarCameraContrast},
      {8, "determinism", 0.0, Determinism},
      {9, "error decomposition", 0.0, DecompositionProperties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool pass = outcome.pass;
    std::string timing = Fmt("%.1f s", seconds);
    if (c.time_limit_s > 0.0) {
      timing += " (limit " + Fmt("%.0f s", c.time_limit_s) + ")";
      if (seconds >= c.time_limit_s) pass = false;
    }
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
