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

// Synthetic scenes and a noisy detector model.
//
// The detector displaces each ground-truth center along the line of sight by
// a zero-mean Gaussian whose standard deviation is a fixed fraction of the
// range, and across it by a range-independent Gaussian. Scores fall off with
// the longitudinal error: score = clamp(1 - |e_lon| / (3 sigma |G|) + jitter).
//
// Random numbers come from std::mt19937_64 with hand-written uniform, normal
// and Poisson transforms; the standard distribution objects are
// implementation defined, which would make seeded datasets differ between
// standard libraries.

#ifndef LET_METRICS_SYNTH_H_
#define LET_METRICS_SYNTH_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "let_metrics/dataset.h"
#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"

namespace let_metrics {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Box-Muller; one draw per call.
  double Normal(double mean, double stddev) {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  // Knuth's multiplication method; fine for the small rates used here.
  std::int64_t Poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = Uniform();
    while (p > limit) {
      ++k;
      p *= Uniform();
    }
    return k;
  }

  std::size_t Index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(Uniform() * n));
  }

 private:
  std::mt19937_64 engine_;
};

struct ClassPrior {
  std::string class_label;
  double weight = 1.0;  // relative frequency
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
};

inline std::vector<ClassPrior> DefaultClassPriors() {
  return {{std::string(kVehicle), 0.6, 4.5, 2.0, 1.6},
          {std::string(kPedestrian), 0.3, 0.9, 0.9, 1.75},
          {std::string(kCyclist), 0.1, 1.8, 0.8, 1.7}};
}

struct SceneSpec {
  std::size_t frames = 100;
  // Objects per frame are uniform over [min_objects, max_objects].
  std::size_t min_objects = 20;
  std::size_t max_objects = 20;
  // Ground-plane distance of object centers from the sensor, meters.
  double min_range_m = 5.0;
  double max_range_m = 75.0;
  // Azimuth window, radians.
  double min_azimuth = -std::numbers::pi;
  double max_azimuth = std::numbers::pi;
  std::vector<ClassPrior> classes = DefaultClassPriors();
  // Relative standard deviation of object dimensions around the prior.
  double dims_spread_fraction = 0.1;
  // Height of the sensor above the ground plane, meters.
  double sensor_height_m = 1.6;
  std::size_t max_placement_attempts = 1000;
  std::uint64_t seed = 0;

  void Validate() const {
    if (min_objects > max_objects) {
      throw ConfigError("min_objects exceeds max_objects");
    }
    if (!(min_range_m >= 0.0 && min_range_m < max_range_m)) {
      throw ConfigError("range window must satisfy 0 <= min < max");
    }
    if (!(min_azimuth < max_azimuth)) {
      throw ConfigError("azimuth window is empty");
    }
    if (classes.empty()) throw ConfigError("scene needs at least one class");
    double total = 0.0;
    for (const auto& c : classes) {
      if (!(c.weight >= 0.0 && c.length > 0.0 && c.width > 0.0 &&
            c.height > 0.0)) {
        throw ConfigError("invalid prior for class " + c.class_label);
      }
      total += c.weight;
    }
    if (!(total > 0.0)) throw ConfigError("class weights sum to zero");
    if (!(dims_spread_fraction >= 0.0)) {
      throw ConfigError("dims_spread_fraction must be >= 0");
    }
    if (max_placement_attempts == 0) {
      throw ConfigError("max_placement_attempts must be positive");
    }
  }
};

struct NoiseModel {
  // Std of the line-of-sight error as a fraction of the range.
  double longitudinal_sigma_fraction = 0.08;
  // Std of the error across the line of sight, meters.
  double lateral_sigma_m = 0.2;
  // Relative std of each box dimension.
  double dims_sigma_fraction = 0.05;
  double heading_sigma = 0.05;  // radians
  double miss_rate = 0.1;
  double false_positive_rate_per_frame = 0.5;
  // Std of the additive score noise.
  double score_jitter = 0.05;
  // Spurious detections score uniformly in [0, spurious_score_max).
  double spurious_score_max = 0.5;

  void Validate() const {
    for (double s : {longitudinal_sigma_fraction, lateral_sigma_m,
                     dims_sigma_fraction, heading_sigma, score_jitter}) {
      if (!(std::isfinite(s) && s >= 0.0)) {
        throw ConfigError("noise standard deviations must be finite and >= 0");
      }
    }
    if (!(miss_rate >= 0.0 && miss_rate <= 1.0)) {
      throw ConfigError("miss_rate must be in [0, 1]");
    }
    if (!(std::isfinite(false_positive_rate_per_frame) &&
          false_positive_rate_per_frame >= 0.0)) {
      throw ConfigError("false_positive_rate_per_frame must be >= 0");
    }
    if (!(spurious_score_max >= 0.0 && spurious_score_max <= 1.0)) {
      throw ConfigError("spurious_score_max must be in [0, 1]");
    }
  }
};

namespace internal {

inline const ClassPrior& SampleClass(const std::vector<ClassPrior>& classes,
                                     Rng& rng) {
  double total = 0.0;
  for (const auto& c : classes) total += c.weight;
  double pick = rng.Uniform() * total;
  for (const auto& c : classes) {
    if (pick < c.weight) return c;
    pick -= c.weight;
  }
  return classes.back();
}

inline Box3D SampleBox(const SceneSpec& spec, const ClassPrior& prior,
                       Rng& rng) {
  auto jitter = [&](double mean) {
    return std::max(0.2 * mean,
                    mean * (1.0 + rng.Normal(0.0, spec.dims_spread_fraction)));
  };
  const double length = jitter(prior.length);
  const double width = jitter(prior.width);
  const double height = jitter(prior.height);
  const double range = rng.Uniform(spec.min_range_m, spec.max_range_m);
  const double azimuth = rng.Uniform(spec.min_azimuth, spec.max_azimuth);
  const double heading = rng.Uniform(-std::numbers::pi, std::numbers::pi);
  const Vec3 center{range * std::cos(azimuth), range * std::sin(azimuth),
                    -spec.sensor_height_m + 0.5 * height};
  return Box3D(center, length, width, height, heading);
}

inline std::string FrameId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu", index);
  return buf;
}

}  // namespace internal

// Frames of ground-truth boxes whose footprints never overlap within a
// frame. Deterministic for a given spec.
inline Dataset GenerateGroundTruth(const SceneSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  Dataset dataset;
  dataset.reserve(spec.frames);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    FrameRecord frame;
    frame.frame_id = internal::FrameId(f);
    const std::size_t count =
        spec.min_objects +
        rng.Index(spec.max_objects - spec.min_objects + 1);
    std::vector<ConvexPolygon2D> footprints;
    for (std::size_t k = 0; k < count; ++k) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < spec.max_placement_attempts;
           ++attempt) {
        const ClassPrior& prior = internal::SampleClass(spec.classes, rng);
        Box3D box = internal::SampleBox(spec, prior, rng);
        ConvexPolygon2D footprint = BevFootprint(box);
        const bool overlaps = std::any_of(
            footprints.begin(), footprints.end(), [&](const auto& other) {
              return ConvexIntersectionArea(footprint, other) > 0.0;
            });
        if (overlaps) continue;
        footprints.push_back(std::move(footprint));
        frame.ground_truths.push_back({prior.class_label, box});
        placed = true;
        break;
      }
      if (!placed) {
        std::ostringstream os;
        os << "could not place object " << k << " of frame "
           << frame.frame_id << " after " << spec.max_placement_attempts
           << " attempts";
        throw PlacementFailureError(os.str());
      }
    }
    dataset.push_back(std::move(frame));
  }
  return dataset;
}

// Adds noisy detections to every frame of `ground_truth`, replacing any
// predictions already present. Spurious boxes use the class mix and range
// window of `scene`.
inline Dataset SimulateDetector(const Dataset& ground_truth,
                                const NoiseModel& noise, std::uint64_t seed,
                                const SceneSpec& scene = {}) {
  noise.Validate();
  scene.Validate();
  Rng rng(seed);
  Dataset out = ground_truth;
  for (auto& frame : out) {
    frame.predictions.clear();
    for (const auto& gt : frame.ground_truths) {
      const bool missed = rng.Uniform() < noise.miss_rate;
      // Draw every variate even for misses so one object's noise does not
      // depend on earlier misses.
      const Vec3 g = gt.box.center() - frame.sensor_origin;
      const double range = Norm(g);
      const Vec3 u_g = g / range;
      Vec3 e1 = Cross(u_g, Vec3{0.0, 0.0, 1.0});
      if (Norm(e1) < 1e-9) e1 = Cross(u_g, Vec3{1.0, 0.0, 0.0});
      e1 = e1 / Norm(e1);
      const Vec3 e2 = Cross(u_g, e1);
      const double lon =
          rng.Normal(0.0, noise.longitudinal_sigma_fraction * range);
      const double angle = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      const double lat = rng.Normal(0.0, noise.lateral_sigma_m);
      const double dl = rng.Normal(0.0, noise.dims_sigma_fraction);
      const double dw = rng.Normal(0.0, noise.dims_sigma_fraction);
      const double dh = rng.Normal(0.0, noise.dims_sigma_fraction);
      const double dheading = rng.Normal(0.0, noise.heading_sigma);
      const double jitter = rng.Normal(0.0, noise.score_jitter);
      if (missed) continue;

      const Vec3 lateral_dir = std::cos(angle) * e1 + std::sin(angle) * e2;
      const Vec3 center = gt.box.center() + lon * u_g + lat * lateral_dir;
      auto scale = [](double dim, double rel) {
        return std::max(0.2 * dim, dim * (1.0 + rel));
      };
      const Box3D box(center, scale(gt.box.length(), dl),
                      scale(gt.box.width(), dw), scale(gt.box.height(), dh),
                      gt.box.heading() + dheading);
      double score = 1.0;
      if (noise.longitudinal_sigma_fraction > 0.0) {
        score -= std::abs(lon) /
                 (3.0 * noise.longitudinal_sigma_fraction * range);
      }
      score = std::clamp(score + jitter, 0.0, 1.0);
      frame.predictions.push_back({gt.class_label, box, score});
    }
    const std::int64_t spurious =
        rng.Poisson(noise.false_positive_rate_per_frame);
    for (std::int64_t k = 0; k < spurious; ++k) {
      const ClassPrior& prior = internal::SampleClass(scene.classes, rng);
      Box3D box = internal::SampleBox(scene, prior, rng);
      box = box.WithCenter(box.center() + frame.sensor_origin);
      const double score = rng.Uniform(0.0, noise.spurious_score_max);
      frame.predictions.push_back({prior.class_label, box, score});
    }
  }
  return out;
}

}  // namespace let_metrics

#endif  // LET_METRICS_SYNTH_H_
