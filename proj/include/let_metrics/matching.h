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

// Per-frame bipartite matching of predictions to ground truths.
//
// A WeightMatrix holds one row per prediction and one column per ground truth.
// A zero weight marks an ineligible pair. Both matchers return only pairs with
// positive weight.

#ifndef LET_METRICS_MATCHING_H_
#define LET_METRICS_MATCHING_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"
#include "let_metrics/let_core.h"

namespace let_metrics {

// Two assignment totals closer than this are treated as equal when breaking
// ties between optimal assignments.
inline constexpr double kAssignmentTieTolerance = 1e-9;

class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t num_preds, std::size_t num_gts)
      : num_preds_(num_preds),
        num_gts_(num_gts),
        weights_(num_preds * num_gts, 0.0),
        affinities_(num_preds * num_gts, 0.0),
        ious_(num_preds * num_gts, 0.0) {}

  // Plain weight matrix, for example from a test. Affinities are 1 and IoUs
  // equal the weights.
  static WeightMatrix FromRows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    WeightMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw std::invalid_argument("weight matrix rows differ in length");
      }
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[i][j] > 0.0) m.Set(i, j, rows[i][j], 1.0, rows[i][j]);
        else m.Set(i, j, rows[i][j], 0.0, 0.0);
      }
    }
    return m;
  }

  std::size_t num_preds() const { return num_preds_; }
  std::size_t num_gts() const { return num_gts_; }

  double weight(std::size_t pred, std::size_t gt) const {
    return weights_[pred * num_gts_ + gt];
  }
  double affinity(std::size_t pred, std::size_t gt) const {
    return affinities_[pred * num_gts_ + gt];
  }
  double iou(std::size_t pred, std::size_t gt) const {
    return ious_[pred * num_gts_ + gt];
  }

  void Set(std::size_t pred, std::size_t gt, double weight, double affinity,
           double iou) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
      std::ostringstream os;
      os << "weight (" << pred << ", " << gt << ") = " << weight
         << " is outside [0, 1]";
      throw std::invalid_argument(os.str());
    }
    const std::size_t k = pred * num_gts_ + gt;
    weights_[k] = weight;
    affinities_[k] = affinity;
    ious_[k] = iou;
  }

  // Sub-matrix with the given prediction rows, in the given order.
  WeightMatrix SelectPredictions(std::span<const std::size_t> rows) const {
    WeightMatrix out(rows.size(), num_gts_);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::size_t src = rows[r] * num_gts_;
      std::copy_n(weights_.begin() + src, num_gts_,
                  out.weights_.begin() + r * num_gts_);
      std::copy_n(affinities_.begin() + src, num_gts_,
                  out.affinities_.begin() + r * num_gts_);
      std::copy_n(ious_.begin() + src, num_gts_,
                  out.ious_.begin() + r * num_gts_);
    }
    return out;
  }

 private:
  std::size_t num_preds_ = 0;
  std::size_t num_gts_ = 0;
  std::vector<double> weights_;
  std::vector<double> affinities_;
  std::vector<double> ious_;
};

struct MatchedPair {
  std::size_t pred_index = 0;
  std::size_t gt_index = 0;
  double affinity = 0.0;  // longitudinal affinity, 1 for baseline matching
  double iou = 0.0;       // LET-IoU, or plain 3D IoU for baseline matching
  double weight = 0.0;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

// Matched pairs sorted by prediction index; unmatched index lists ascending.
struct FrameMatchResult {
  std::vector<MatchedPair> matches;
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;

  double TotalWeight() const {
    double total = 0.0;
    for (const auto& m : matches) total += m.weight;
    return total;
  }

  friend bool operator==(const FrameMatchResult&,
                         const FrameMatchResult&) = default;
};

enum class Matcher { kHungarian, kGreedy };

inline std::string_view MatcherName(Matcher m) {
  return m == Matcher::kHungarian ? "hungarian" : "greedy";
}

inline Matcher ParseMatcher(std::string_view name) {
  if (name == "hungarian") return Matcher::kHungarian;
  if (name == "greedy") return Matcher::kGreedy;
  throw ConfigError("unknown matcher '" + std::string(name) +
                    "', expected hungarian or greedy");
}

namespace internal {

inline void CheckIouThreshold(double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    std::ostringstream os;
    os << "IoU threshold must be in (0, 1), got " << iou_threshold;
    throw ConfigError(os.str());
  }
}

}  // namespace internal

// W(i, j) = a_l * LET-IoU when a_l > 0 and LET-IoU > iou_threshold, else 0.
// LET-IoU is only evaluated for pairs with positive affinity. Boxes are in
// the sensor frame.
inline WeightMatrix LetWeightMatrix(std::span<const Box3D> preds,
                                    std::span<const Box3D> gts,
                                    const ToleranceConfig& cfg,
                                    double iou_threshold) {
  internal::CheckIouThreshold(iou_threshold);
  WeightMatrix w(preds.size(), gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const double affinity =
          LongitudinalAffinity(preds[i].center(), gts[j].center(), cfg);
      if (affinity <= 0.0) continue;
      const double iou = LetIou(preds[i], gts[j]);
      if (iou > iou_threshold) w.Set(i, j, affinity * iou, affinity, iou);
    }
  }
  return w;
}

// W(i, j) = IoU when IoU > iou_threshold, else 0. Affinities are 1.
inline WeightMatrix BaselineWeightMatrix(std::span<const Box3D> preds,
                                         std::span<const Box3D> gts,
                                         double iou_threshold) {
  internal::CheckIouThreshold(iou_threshold);
  WeightMatrix w(preds.size(), gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const double iou = Iou3d(preds[i], gts[j]);
      if (iou > iou_threshold) w.Set(i, j, iou, 1.0, iou);
    }
  }
  return w;
}

namespace internal {

// Dense max-weight assignment over a rows x cols block (row-major weights).
// Returns the column assigned to each row, or -1. Pairs with zero weight are
// reported unassigned.
inline std::vector<int> SolveMaxWeightAssignment(
    const std::vector<double>& weights, int rows, int cols) {
  std::vector<int> row_to_col(rows, -1);
  if (rows == 0 || cols == 0) return row_to_col;
  // Shortest augmenting path Hungarian method with potentials, on the square
  // padding of the minimization problem with cost -weight. 1-based indices.
  const int n = std::max(rows, cols);
  auto cost = [&](int i, int j) -> double {
    if (i > rows || j > cols) return 0.0;
    return -weights[(i - 1) * cols + (j - 1)];
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> col_owner(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    col_owner[0] = i;
    int j0 = 0;
    std::vector<double> min_v(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = col_owner[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const int j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= cols; ++j) {
    const int i = col_owner[j];
    if (i >= 1 && i <= rows && weights[(i - 1) * cols + (j - 1)] > 0.0) {
      row_to_col[i - 1] = j - 1;
    }
  }
  return row_to_col;
}

// Best total weight using only the given rows and columns.
inline double MaxAssignmentWeight(const WeightMatrix& w,
                                  const std::vector<std::size_t>& rows,
                                  const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  std::vector<double> block(rows.size() * cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      block[r * cols.size() + c] = w.weight(rows[r], cols[c]);
    }
  }
  const auto assignment = SolveMaxWeightAssignment(
      block, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  double total = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (assignment[r] >= 0) total += block[r * cols.size() + assignment[r]];
  }
  return total;
}

// Connected components of the bipartite graph of positive-weight pairs.
struct Component {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

inline std::vector<Component> PositiveWeightComponents(const WeightMatrix& w) {
  const std::size_t np = w.num_preds();
  const std::size_t ng = w.num_gts();
  std::vector<std::size_t> parent(np + ng);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<char> has_edge(np + ng, 0);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      if (w.weight(i, j) <= 0.0) continue;
      has_edge[i] = has_edge[np + j] = 1;
      const std::size_t a = find(i);
      const std::size_t b = find(np + j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<Component> components;
  std::vector<std::size_t> slot(np + ng, SIZE_MAX);
  for (std::size_t x = 0; x < np + ng; ++x) {
    if (!has_edge[x]) continue;
    const std::size_t root = find(x);
    if (slot[root] == SIZE_MAX) {
      slot[root] = components.size();
      components.emplace_back();
    }
    Component& c = components[slot[root]];
    if (x < np) c.rows.push_back(x);
    else c.cols.push_back(x - np);
  }
  return components;
}

inline FrameMatchResult BuildResult(
    const WeightMatrix& w, const std::vector<std::ptrdiff_t>& pred_to_gt) {
  FrameMatchResult result;
  std::vector<char> gt_used(w.num_gts(), 0);
  for (std::size_t i = 0; i < w.num_preds(); ++i) {
    const std::ptrdiff_t j = pred_to_gt[i];
    if (j < 0) {
      result.unmatched_preds.push_back(i);
      continue;
    }
    const auto g = static_cast<std::size_t>(j);
    gt_used[g] = 1;
    result.matches.push_back(
        {i, g, w.affinity(i, g), w.iou(i, g), w.weight(i, g)});
  }
  for (std::size_t j = 0; j < w.num_gts(); ++j) {
    if (!gt_used[j]) result.unmatched_gts.push_back(j);
  }
  return result;
}

}  // namespace internal

// Maximum total weight assignment.
//
// Among assignments whose total is within kAssignmentTieTolerance of the
// optimum, returns the one whose (pred_index, gt_index) pair sequence,
// sorted by prediction, is lexicographically smallest. Equivalently, walking
// predictions in index order, each prediction takes the smallest ground
// truth index that still admits an optimal completion, and stays unmatched
// only if no optimal assignment matches it.
inline FrameMatchResult HungarianMatch(const WeightMatrix& w) {
  std::vector<std::ptrdiff_t> pred_to_gt(w.num_preds(), -1);
  for (const auto& component : internal::PositiveWeightComponents(w)) {
    const double optimum =
        internal::MaxAssignmentWeight(w, component.rows, component.cols);
    std::vector<std::size_t> free_cols = component.cols;
    double fixed = 0.0;
    for (std::size_t k = 0; k < component.rows.size(); ++k) {
      const std::size_t row = component.rows[k];
      const std::vector<std::size_t> later_rows(component.rows.begin() + k + 1,
                                                component.rows.end());
      for (auto it = free_cols.begin(); it != free_cols.end(); ++it) {
        const double wij = w.weight(row, *it);
        if (wij <= 0.0) continue;
        std::vector<std::size_t> rest = free_cols;
        rest.erase(rest.begin() + (it - free_cols.begin()));
        const double best =
            fixed + wij + internal::MaxAssignmentWeight(w, later_rows, rest);
        if (best >= optimum - kAssignmentTieTolerance) {
          pred_to_gt[row] = static_cast<std::ptrdiff_t>(*it);
          fixed += wij;
          free_cols = std::move(rest);
          break;
        }
      }
    }
  }
  return internal::BuildResult(w, pred_to_gt);
}

// Repeatedly takes the largest remaining positive weight whose prediction and
// ground truth are both free. Ties go to the smaller (pred, gt) index pair.
inline FrameMatchResult GreedyMatch(const WeightMatrix& w) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < w.num_preds(); ++i) {
    for (std::size_t j = 0; j < w.num_gts(); ++j) {
      if (w.weight(i, j) > 0.0) candidates.emplace_back(w.weight(i, j), i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (std::get<0>(a) != std::get<0>(b)) {
                return std::get<0>(a) > std::get<0>(b);
              }
              return std::make_pair(std::get<1>(a), std::get<2>(a)) <
                     std::make_pair(std::get<1>(b), std::get<2>(b));
            });
  std::vector<std::ptrdiff_t> pred_to_gt(w.num_preds(), -1);
  std::vector<char> gt_used(w.num_gts(), 0);
  for (const auto& [weight, i, j] : candidates) {
    if (pred_to_gt[i] >= 0 || gt_used[j]) continue;
    pred_to_gt[i] = static_cast<std::ptrdiff_t>(j);
    gt_used[j] = 1;
  }
  return internal::BuildResult(w, pred_to_gt);
}

inline FrameMatchResult MatchFrame(const WeightMatrix& w, Matcher matcher) {
  return matcher == Matcher::kHungarian ? HungarianMatch(w) : GreedyMatch(w);
}

}  // namespace let_metrics

#endif  // LET_METRICS_MATCHING_H_
