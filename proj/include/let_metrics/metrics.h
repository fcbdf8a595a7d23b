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

// Precision/recall curves over score cutoffs and the AP family built on them:
// 3D AP (IoU matching), LET-3D-AP (longitudinal error tolerant matching) and
// LET-3D-APL (LET-3D-AP with precision scaled by mean longitudinal affinity).
//
// Every score cutoff selects the predictions scoring at least the cutoff and
// re-runs the per-frame matching on that subset. A matched prediction adds
// its affinity a_l to the soft true-positive count and 1 - a_l to the soft
// false-positive count; an unmatched prediction adds 1 to the false
// positives. Recall counts matched ground truths without weighting.

#ifndef LET_METRICS_METRICS_H_
#define LET_METRICS_METRICS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "let_metrics/config.h"
#include "let_metrics/dataset.h"
#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"
#include "let_metrics/let_core.h"
#include "let_metrics/matching.h"
#include "let_metrics/parallel.h"

namespace let_metrics {

inline constexpr std::string_view kReportSchemaVersion = "let-metrics-report/1";
// Label of the breakdown entry covering every range.
inline constexpr std::string_view kAllRanges = "all";

struct PRPoint {
  double score_cutoff = 0.0;
  double tp_p = 0.0;  // sum of matched affinities
  double fp = 0.0;    // sum of (1 - affinity) over matches + unmatched preds
  std::int64_t tp_g = 0;
  std::int64_t fn_count = 0;
  std::int64_t num_preds = 0;
  double precision = 0.0;  // tp_g / num_preds, unweighted
  double recall = 0.0;     // tp_g / (tp_g + fn_count)
  double weighted_precision = 0.0;  // mean_affinity * precision
  double mean_affinity = 0.0;       // 0 when nothing matched

  friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

// Neumaier summation.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Folds per-frame match results taken at one cutoff into a PR point.
class CutoffAccumulator {
 public:
  void Add(const FrameMatchResult& result) {
    for (const auto& m : result.matches) {
      affinity_sum_.Add(m.affinity);
      soft_fp_.Add(1.0 - m.affinity);
    }
    matched_ += static_cast<std::int64_t>(result.matches.size());
    unmatched_preds_ += static_cast<std::int64_t>(result.unmatched_preds.size());
    unmatched_gts_ += static_cast<std::int64_t>(result.unmatched_gts.size());
  }

  PRPoint Finish(double score_cutoff) const {
    PRPoint p;
    p.score_cutoff = score_cutoff;
    p.tp_p = affinity_sum_.Value();
    p.fp = soft_fp_.Value() + static_cast<double>(unmatched_preds_);
    p.tp_g = matched_;
    p.fn_count = unmatched_gts_;
    p.num_preds = matched_ + unmatched_preds_;
    if (p.num_preds > 0) {
      p.precision =
          static_cast<double>(matched_) / static_cast<double>(p.num_preds);
    }
    if (matched_ + unmatched_gts_ > 0) {
      p.recall = static_cast<double>(matched_) /
                 static_cast<double>(matched_ + unmatched_gts_);
    }
    if (matched_ > 0) {
      p.mean_affinity =
          std::clamp(p.tp_p / static_cast<double>(matched_), 0.0, 1.0);
    }
    p.weighted_precision = p.mean_affinity * p.precision;
    return p;
  }

 private:
  CompensatedSum affinity_sum_;
  CompensatedSum soft_fp_;
  std::int64_t matched_ = 0;
  std::int64_t unmatched_preds_ = 0;
  std::int64_t unmatched_gts_ = 0;
};

inline PRPoint AccumulateCutoff(std::span<const FrameMatchResult> results,
                                double score_cutoff = 0.0) {
  CutoffAccumulator acc;
  for (const auto& r : results) acc.Add(r);
  return acc.Finish(score_cutoff);
}

// Turns a schedule into a strictly decreasing list of cutoffs for the given
// prediction scores.
inline std::vector<double> ResolveCutoffs(const CutoffSchedule& schedule,
                                          std::span<const double> scores) {
  using Kind = CutoffSchedule::Kind;
  if (schedule.kind == Kind::kExplicit) {
    const auto& c = schedule.cutoffs;
    if (c.empty()) throw InvalidCutoffScheduleError("cutoff schedule is empty");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!(c[i] >= 0.0 && c[i] <= 1.0)) {
        throw InvalidCutoffScheduleError("cutoff " + std::to_string(c[i]) +
                                         " is outside [0, 1]");
      }
      if (i > 0 && !(c[i] < c[i - 1])) {
        throw InvalidCutoffScheduleError(
            "cutoff schedule must be strictly decreasing");
      }
    }
    return c;
  }
  if (scores.empty()) return {0.0};

  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  std::vector<double> cutoffs;
  if (schedule.kind == Kind::kDistinctScores &&
      distinct.size() <= schedule.max_distinct) {
    cutoffs = distinct;
  } else {
    // Nearest-rank quantiles at levels k / n, k = 1..n.
    const std::size_t n = schedule.num_quantiles;
    const std::size_t m = sorted.size();
    if (n == 0) throw InvalidCutoffScheduleError("zero quantiles requested");
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t rank = (k * m + n - 1) / n;  // ceil(k m / n), >= 1
      cutoffs.push_back(sorted[rank - 1]);
    }
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  }
  std::reverse(cutoffs.begin(), cutoffs.end());
  if (sorted.front() < cutoffs.back()) cutoffs.push_back(0.0);
  return cutoffs;
}

// Area under the precision envelope: each point's precision is raised to the
// best precision at any recall at or above it, then integrated as a step
// function over recall from 0. `weighted` integrates the affinity weighted
// precision instead.
inline double AveragePrecision(std::span<const PRPoint> points, bool weighted) {
  if (points.empty()) return 0.0;
  std::vector<PRPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const PRPoint& a, const PRPoint& b) {
                     return a.recall < b.recall;
                   });
  std::vector<double> envelope(sorted.size());
  double best = 0.0;
  for (std::size_t k = sorted.size(); k-- > 0;) {
    best = std::max(best, weighted ? sorted[k].weighted_precision
                                   : sorted[k].precision);
    envelope[k] = best;
  }
  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].recall > prev_recall) {
      area += (sorted[k].recall - prev_recall) * envelope[k];
      prev_recall = sorted[k].recall;
    }
  }
  return std::clamp(area, 0.0, 1.0);
}

enum class MatchingCriterion {
  kLongitudinalErrorTolerant,  // a_l * LET-IoU weights
  kIou,                        // plain 3D IoU weights
};

// One frame restricted to a class and range bin, in the sensor frame.
struct EvalFrame {
  std::vector<Box3D> gts;
  std::vector<Box3D> preds;
  std::vector<double> scores;
};

// Selects boxes of `class_label` whose center range from the frame's sensor
// origin falls in `bin` (every range when unset) and re-centers them on the
// sensor. Ground truths and predictions are filtered by their own range.
inline std::vector<EvalFrame> BuildEvalFrames(
    const Dataset& dataset, const std::string& class_label,
    const std::optional<RangeBin>& bin) {
  std::vector<EvalFrame> frames;
  frames.reserve(dataset.size());
  for (const auto& frame : dataset) {
    EvalFrame ef;
    for (const auto& gt : frame.ground_truths) {
      if (gt.class_label != class_label) continue;
      const Vec3 rel = gt.box.center() - frame.sensor_origin;
      if (bin && !bin->Contains(Norm(rel))) continue;
      ef.gts.push_back(gt.box.WithCenter(rel));
    }
    for (const auto& p : frame.predictions) {
      if (p.class_label != class_label) continue;
      const Vec3 rel = p.box.center() - frame.sensor_origin;
      if (bin && !bin->Contains(Norm(rel))) continue;
      ef.preds.push_back(p.box.WithCenter(rel));
      ef.scores.push_back(p.score);
    }
    frames.push_back(std::move(ef));
  }
  return frames;
}

struct CurveParams {
  MatchingCriterion criterion = MatchingCriterion::kLongitudinalErrorTolerant;
  ToleranceConfig tolerance;
  double iou_threshold = 0.5;
  Matcher matcher = Matcher::kHungarian;
  std::size_t workers = 1;
};

// PR points for a strictly decreasing cutoff list, sorted by increasing
// recall (ties keep decreasing-cutoff order).
inline std::vector<PRPoint> ComputePrCurve(std::span<const EvalFrame> frames,
                                           std::span<const double> cutoffs,
                                           const CurveParams& params) {
  if (cutoffs.empty()) {
    throw InvalidCutoffScheduleError("cutoff schedule is empty");
  }
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] < cutoffs[i - 1])) {
      throw InvalidCutoffScheduleError(
          "cutoff schedule must be strictly decreasing");
    }
  }

  // Per frame: the distinct match results and which one each cutoff uses.
  // The subset at a cutoff is determined by its size since subsets nest.
  struct FrameCurve {
    std::vector<FrameMatchResult> results;
    std::vector<std::size_t> result_for_cutoff;
  };
  std::vector<FrameCurve> per_frame(frames.size());
  ParallelFor(frames.size(), params.workers, [&](std::size_t f) {
    const EvalFrame& frame = frames[f];
    const WeightMatrix full =
        params.criterion == MatchingCriterion::kLongitudinalErrorTolerant
            ? LetWeightMatrix(frame.preds, frame.gts, params.tolerance,
                              params.iou_threshold)
            : BaselineWeightMatrix(frame.preds, frame.gts,
                                   params.iou_threshold);
    FrameCurve& out = per_frame[f];
    out.result_for_cutoff.resize(cutoffs.size());
    std::size_t last_size = SIZE_MAX;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < frame.scores.size(); ++i) {
        if (frame.scores[i] >= cutoffs[c]) rows.push_back(i);
      }
      if (rows.size() != last_size) {
        out.results.push_back(
            MatchFrame(full.SelectPredictions(rows), params.matcher));
        last_size = rows.size();
      }
      out.result_for_cutoff[c] = out.results.size() - 1;
    }
  });

  std::vector<PRPoint> points;
  points.reserve(cutoffs.size());
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    CutoffAccumulator acc;
    for (const auto& fc : per_frame) acc.Add(fc.results[fc.result_for_cutoff[c]]);
    points.push_back(acc.Finish(cutoffs[c]));
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const PRPoint& a, const PRPoint& b) {
                     return a.recall < b.recall;
                   });
  return points;
}

struct EvalOptions {
  std::size_t workers = DefaultWorkerCount();
  // 3D AP needs a second matching pass per cutoff; sweeps can skip it.
  bool compute_baseline = true;
};

// PR curve of one (class, range bin) slice under `cfg`.
inline std::vector<PRPoint> PrCurve(const Dataset& dataset,
                                    const std::string& class_label,
                                    const std::optional<RangeBin>& bin,
                                    const EvalConfig& cfg,
                                    MatchingCriterion criterion,
                                    std::size_t workers = 1) {
  const auto frames = BuildEvalFrames(dataset, class_label, bin);
  std::vector<double> scores;
  for (const auto& f : frames) {
    scores.insert(scores.end(), f.scores.begin(), f.scores.end());
  }
  const auto cutoffs = ResolveCutoffs(cfg.cutoff_schedule, scores);
  CurveParams params{criterion, cfg.tolerance, cfg.IouThreshold(class_label),
                     cfg.matcher, workers};
  return ComputePrCurve(frames, cutoffs, params);
}

struct BreakdownMetrics {
  std::string class_label;
  std::string range_bin;  // kAllRanges or RangeBin::Label()
  double range_min_m = 0.0;
  double range_max_m = std::numeric_limits<double>::infinity();
  std::int64_t num_gts = 0;
  std::int64_t num_preds = 0;
  // Unset when the slice has no ground truth.
  std::optional<double> ap_3d;
  std::optional<double> let_3d_ap;
  std::optional<double> let_3d_apl;
  // LET-3D-APL / LET-3D-AP, unset when LET-3D-AP is 0.
  std::optional<double> mla;
  // Mean affinity of the matches at the lowest cutoff.
  std::optional<double> mean_match_affinity;
  std::vector<PRPoint> pr_curve;     // LET matching
  std::vector<PRPoint> pr_curve_3d;  // IoU matching

  friend bool operator==(const BreakdownMetrics&,
                         const BreakdownMetrics&) = default;
};

struct MetricsReport {
  std::string schema_version{kReportSchemaVersion};
  EvalConfig config;
  std::vector<BreakdownMetrics> entries;

  const BreakdownMetrics* Find(std::string_view class_label,
                               std::string_view range_bin) const {
    for (const auto& e : entries) {
      if (e.class_label == class_label && e.range_bin == range_bin) return &e;
    }
    return nullptr;
  }

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Evaluates every class present in the dataset, first over all ranges and
// then per configured range bin.
inline MetricsReport Evaluate(const Dataset& dataset, const EvalConfig& cfg,
                              const EvalOptions& options = {}) {
  cfg.Validate();
  MetricsReport report;
  report.config = cfg;

  std::set<std::string> classes;
  for (const auto& frame : dataset) {
    for (const auto& gt : frame.ground_truths) classes.insert(gt.class_label);
    for (const auto& p : frame.predictions) classes.insert(p.class_label);
  }

  std::vector<std::optional<RangeBin>> bins = {std::nullopt};
  for (const auto& b : cfg.range_bins) bins.emplace_back(b);

  for (const auto& class_label : classes) {
    for (const auto& bin : bins) {
      BreakdownMetrics m;
      m.class_label = class_label;
      m.range_bin = bin ? bin->Label() : std::string(kAllRanges);
      if (bin) {
        m.range_min_m = bin->min_m;
        m.range_max_m = bin->max_m;
      }
      const auto frames = BuildEvalFrames(dataset, class_label, bin);
      std::vector<double> scores;
      for (const auto& f : frames) {
        m.num_gts += static_cast<std::int64_t>(f.gts.size());
        m.num_preds += static_cast<std::int64_t>(f.preds.size());
        scores.insert(scores.end(), f.scores.begin(), f.scores.end());
      }
      if (m.num_gts > 0) {
        const auto cutoffs = ResolveCutoffs(cfg.cutoff_schedule, scores);
        CurveParams params{MatchingCriterion::kLongitudinalErrorTolerant,
                           cfg.tolerance, cfg.IouThreshold(class_label),
                           cfg.matcher, options.workers};
        m.pr_curve = ComputePrCurve(frames, cutoffs, params);
        m.let_3d_ap = AveragePrecision(m.pr_curve, false);
        m.let_3d_apl = AveragePrecision(m.pr_curve, true);
        if (*m.let_3d_ap > 0.0) m.mla = *m.let_3d_apl / *m.let_3d_ap;
        const auto lowest = std::min_element(
            m.pr_curve.begin(), m.pr_curve.end(),
            [](const PRPoint& a, const PRPoint& b) {
              return a.score_cutoff < b.score_cutoff;
            });
        if (lowest != m.pr_curve.end() && lowest->tp_g > 0) {
          m.mean_match_affinity = lowest->mean_affinity;
        }
        if (options.compute_baseline) {
          params.criterion = MatchingCriterion::kIou;
          m.pr_curve_3d = ComputePrCurve(frames, cutoffs, params);
          m.ap_3d = AveragePrecision(m.pr_curve_3d, false);
        }
      }
      report.entries.push_back(std::move(m));
    }
  }
  return report;
}

}  // namespace let_metrics

#endif  // LET_METRICS_METRICS_H_
