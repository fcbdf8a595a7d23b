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

// Longitudinal error tolerance: decomposition of a center localization error
// into components along and across the sensor line of sight, the
// longitudinal affinity ramp, and the line-of-sight aligned IoU (LET-IoU).
//
// All positions are relative to the sensor origin.

#ifndef LET_METRICS_LET_CORE_H_
#define LET_METRICS_LET_CORE_H_

#include <algorithm>
#include <cmath>
#include <sstream>

#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"

namespace let_metrics {

// Centers closer than this to the sensor origin have no line of sight.
inline constexpr double kMinCenterRange = 1e-6;

struct ToleranceConfig {
  // Allowed longitudinal error as a fraction of the range to the ground
  // truth, in (0, 1].
  double percentage = 0.1;
  // Lower bound on the allowed longitudinal error, in meters.
  double min_meters = 0.5;

  void Validate() const {
    if (!(percentage > 0.0 && percentage <= 1.0)) {
      std::ostringstream os;
      os << "longitudinal tolerance percentage must be in (0, 1], got "
         << percentage;
      throw ConfigError(os.str());
    }
    if (!(std::isfinite(min_meters) && min_meters >= 0.0)) {
      std::ostringstream os;
      os << "minimum longitudinal tolerance must be >= 0 m, got "
         << min_meters;
      throw ConfigError(os.str());
    }
  }

  friend bool operator==(const ToleranceConfig&,
                         const ToleranceConfig&) = default;
};

struct ErrorDecomposition {
  Vec3 localization;  // P - G
  Vec3 longitudinal;  // component along the line of sight to G
  Vec3 lateral;       // remainder, orthogonal to the line of sight
};

namespace internal {

inline Vec3 UnitLineOfSightToGroundTruth(const Vec3& gt_center) {
  const double range = Norm(gt_center);
  if (!(range >= kMinCenterRange)) {
    std::ostringstream os;
    os << "ground truth center (" << gt_center.x << ", " << gt_center.y
       << ", " << gt_center.z << ") is within " << kMinCenterRange
       << " m of the sensor origin";
    throw DegenerateGroundTruthError(os.str());
  }
  return gt_center / range;
}

}  // namespace internal

// Splits P - G into the projection onto u_G = G / |G| and the orthogonal
// remainder.
inline ErrorDecomposition DecomposeError(const Vec3& pred_center,
                                         const Vec3& gt_center) {
  const Vec3 u_g = internal::UnitLineOfSightToGroundTruth(gt_center);
  ErrorDecomposition out;
  out.localization = pred_center - gt_center;
  out.longitudinal = Dot(out.localization, u_g) * u_g;
  out.lateral = out.localization - out.longitudinal;
  return out;
}

// max(percentage * range, min_meters).
inline double LongitudinalTolerance(double range_to_gt,
                                    const ToleranceConfig& cfg) {
  return std::max(cfg.percentage * range_to_gt, cfg.min_meters);
}

// 1 - min(|e_lon| / T_l, 1). Exactly 1 for zero longitudinal error, and 0
// for any nonzero error when the tolerance is 0.
inline double LongitudinalAffinity(const Vec3& pred_center,
                                   const Vec3& gt_center,
                                   const ToleranceConfig& cfg) {
  const Vec3 u_g = internal::UnitLineOfSightToGroundTruth(gt_center);
  const double lon_error = std::abs(Dot(pred_center - gt_center, u_g));
  if (lon_error == 0.0) return 1.0;
  const double tolerance = LongitudinalTolerance(Norm(gt_center), cfg);
  if (tolerance <= 0.0) return 0.0;
  return 1.0 - std::min(lon_error / tolerance, 1.0);
}

// Moves the prediction along its own line of sight to the point closest to
// `gt_center`: (G . u_P) u_P. Dimensions and heading are untouched.
inline Box3D AlignPrediction(const Box3D& pred, const Vec3& gt_center) {
  const double range = Norm(pred.center());
  if (!(range >= kMinCenterRange)) {
    std::ostringstream os;
    os << "prediction center (" << pred.center().x << ", " << pred.center().y
       << ", " << pred.center().z << ") is within " << kMinCenterRange
       << " m of the sensor origin";
    throw DegeneratePredictionError(os.str());
  }
  const Vec3 u_p = pred.center() / range;
  return pred.WithCenter(Dot(gt_center, u_p) * u_p);
}

// 3D IoU between the line-of-sight aligned prediction and the ground truth.
// No tolerance gating happens here.
inline double LetIou(const Box3D& pred, const Box3D& gt) {
  return Iou3d(AlignPrediction(pred, gt.center()), gt);
}

}  // namespace let_metrics

#endif  // LET_METRICS_LET_CORE_H_
