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

#ifndef LET_METRICS_CONFIG_H_
#define LET_METRICS_CONFIG_H_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "let_metrics/dataset.h"
#include "let_metrics/errors.h"
#include "let_metrics/let_core.h"
#include "let_metrics/matching.h"

namespace let_metrics {

// Half-open interval [min_m, max_m) of distance from the sensor origin.
// max_m may be +infinity.
struct RangeBin {
  double min_m = 0.0;
  double max_m = std::numeric_limits<double>::infinity();

  bool Contains(double range) const { return range >= min_m && range < max_m; }

  std::string Label() const {
    std::ostringstream os;
    os << "[" << min_m << ", ";
    if (std::isinf(max_m)) os << "inf";
    else os << max_m;
    os << ")";
    return os.str();
  }

  friend bool operator==(const RangeBin&, const RangeBin&) = default;
};

// Score thresholds at which prediction subsets are re-matched.
//
//   kDistinctScores: every distinct prediction score, falling back to
//                    `num_quantiles` quantiles above `max_distinct` scores.
//   kQuantiles:      `num_quantiles` score quantiles.
//   kExplicit:       `cutoffs` as given, strictly decreasing, in [0, 1].
//
// The two data-driven schedules also get a cutoff of 0 whenever their
// smallest cutoff would leave some predictions out.
struct CutoffSchedule {
  enum class Kind { kDistinctScores, kQuantiles, kExplicit };
  Kind kind = Kind::kDistinctScores;
  std::size_t max_distinct = 200;
  std::size_t num_quantiles = 200;
  std::vector<double> cutoffs;

  friend bool operator==(const CutoffSchedule&,
                         const CutoffSchedule&) = default;
};

struct EvalConfig {
  ToleranceConfig tolerance;
  std::map<std::string, double> iou_thresholds = {
      {std::string(kVehicle), 0.5},
      {std::string(kPedestrian), 0.3},
      {std::string(kCyclist), 0.3}};
  // Used for classes missing from iou_thresholds.
  double default_iou_threshold = 0.5;
  Matcher matcher = Matcher::kHungarian;
  CutoffSchedule cutoff_schedule;
  std::vector<RangeBin> range_bins = {
      {0.0, 30.0},
      {30.0, 50.0},
      {50.0, std::numeric_limits<double>::infinity()}};

  double IouThreshold(const std::string& class_label) const {
    const auto it = iou_thresholds.find(class_label);
    return it == iou_thresholds.end() ? default_iou_threshold : it->second;
  }

  void Validate() const {
    tolerance.Validate();
    auto check_threshold = [](const std::string& name, double t) {
      if (!(t > 0.0 && t < 1.0)) {
        std::ostringstream os;
        os << "IoU threshold for " << name << " must be in (0, 1), got " << t;
        throw ConfigError(os.str());
      }
    };
    for (const auto& [name, t] : iou_thresholds) check_threshold(name, t);
    check_threshold("unlisted classes", default_iou_threshold);
    if (range_bins.empty()) throw ConfigError("range_bins is empty");
    if (range_bins.front().min_m != 0.0) {
      throw ConfigError("range_bins must start at 0 m");
    }
    for (std::size_t i = 0; i < range_bins.size(); ++i) {
      const RangeBin& b = range_bins[i];
      if (!(b.min_m < b.max_m)) {
        throw ConfigError("range bin " + b.Label() + " is empty");
      }
      if (i + 1 < range_bins.size() && b.max_m != range_bins[i + 1].min_m) {
        throw ConfigError("range bins " + b.Label() + " and " +
                          range_bins[i + 1].Label() +
                          " are not contiguous");
      }
    }
    if (!std::isinf(range_bins.back().max_m)) {
      throw ConfigError("the last range bin must be unbounded");
    }
    const auto& cs = cutoff_schedule;
    if (cs.kind == CutoffSchedule::Kind::kQuantiles && cs.num_quantiles == 0) {
      throw ConfigError("cutoff schedule needs at least one quantile");
    }
    if (cs.kind == CutoffSchedule::Kind::kDistinctScores &&
        (cs.max_distinct == 0 || cs.num_quantiles == 0)) {
      throw ConfigError("cutoff schedule limits must be positive");
    }
    if (cs.kind == CutoffSchedule::Kind::kExplicit) {
      if (cs.cutoffs.empty()) {
        throw InvalidCutoffScheduleError("cutoff schedule is empty");
      }
      for (std::size_t i = 0; i < cs.cutoffs.size(); ++i) {
        if (!(cs.cutoffs[i] >= 0.0 && cs.cutoffs[i] <= 1.0)) {
          throw InvalidCutoffScheduleError("score cutoffs must be in [0, 1]");
        }
        if (i > 0 && !(cs.cutoffs[i] < cs.cutoffs[i - 1])) {
          throw InvalidCutoffScheduleError(
              "cutoff schedule must be strictly decreasing");
        }
      }
    }
  }

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

inline nlohmann::ordered_json ConfigToJson(const EvalConfig& cfg) {
  nlohmann::ordered_json j;
  j["tolerance"] = {{"percentage", cfg.tolerance.percentage},
                    {"min_meters", cfg.tolerance.min_meters}};
  nlohmann::ordered_json thresholds = nlohmann::ordered_json::object();
  for (const auto& [name, t] : cfg.iou_thresholds) thresholds[name] = t;
  j["iou_thresholds"] = thresholds;
  j["default_iou_threshold"] = cfg.default_iou_threshold;
  j["matcher"] = std::string(MatcherName(cfg.matcher));
  nlohmann::ordered_json cs;
  switch (cfg.cutoff_schedule.kind) {
    case CutoffSchedule::Kind::kDistinctScores:
      cs["kind"] = "distinct_scores";
      cs["max_distinct"] = cfg.cutoff_schedule.max_distinct;
      cs["num_quantiles"] = cfg.cutoff_schedule.num_quantiles;
      break;
    case CutoffSchedule::Kind::kQuantiles:
      cs["kind"] = "quantiles";
      cs["num_quantiles"] = cfg.cutoff_schedule.num_quantiles;
      break;
    case CutoffSchedule::Kind::kExplicit:
      cs["kind"] = "explicit";
      cs["cutoffs"] = cfg.cutoff_schedule.cutoffs;
      break;
  }
  j["cutoff_schedule"] = cs;
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  for (const auto& b : cfg.range_bins) {
    nlohmann::ordered_json max = nullptr;
    if (!std::isinf(b.max_m)) max = b.max_m;
    bins.push_back(nlohmann::ordered_json::array({b.min_m, max}));
  }
  j["range_bins"] = bins;
  return j;
}

// Missing keys keep their defaults. Unknown keys are rejected.
inline EvalConfig ConfigFromJson(const nlohmann::json& j) {
  EvalConfig cfg;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "tolerance") {
        for (const auto& [k, v] : value.items()) {
          if (k == "percentage") cfg.tolerance.percentage = v.get<double>();
          else if (k == "min_meters") cfg.tolerance.min_meters = v.get<double>();
          else throw ConfigError("unknown tolerance key '" + k + "'");
        }
      } else if (key == "iou_thresholds") {
        for (const auto& [k, v] : value.items()) {
          cfg.iou_thresholds[internal::NormalizeClassLabel(k)] =
              v.get<double>();
        }
      } else if (key == "default_iou_threshold") {
        cfg.default_iou_threshold = value.get<double>();
      } else if (key == "matcher") {
        cfg.matcher = ParseMatcher(value.get<std::string>());
      } else if (key == "cutoff_schedule") {
        CutoffSchedule cs;
        const std::string kind = value.at("kind").get<std::string>();
        if (kind == "distinct_scores") {
          cs.kind = CutoffSchedule::Kind::kDistinctScores;
          cs.max_distinct = value.value("max_distinct", cs.max_distinct);
          cs.num_quantiles = value.value("num_quantiles", cs.num_quantiles);
        } else if (kind == "quantiles") {
          cs.kind = CutoffSchedule::Kind::kQuantiles;
          cs.num_quantiles = value.value("num_quantiles", cs.num_quantiles);
        } else if (kind == "explicit") {
          cs.kind = CutoffSchedule::Kind::kExplicit;
          cs.cutoffs = value.at("cutoffs").get<std::vector<double>>();
        } else {
          throw ConfigError("unknown cutoff schedule kind '" + kind + "'");
        }
        cfg.cutoff_schedule = cs;
      } else if (key == "range_bins") {
        cfg.range_bins.clear();
        for (const auto& bin : value) {
          if (!bin.is_array() || bin.size() != 2) {
            throw ConfigError("each range bin must be [min, max]");
          }
          RangeBin b;
          b.min_m = bin[0].get<double>();
          b.max_m = bin[1].is_null() ? std::numeric_limits<double>::infinity()
                                     : bin[1].get<double>();
          cfg.range_bins.push_back(b);
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

inline EvalConfig LoadConfig(const std::string& path) {
  if (!std::filesystem::exists(path)) throw MissingFileError(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ConfigFromJson(j);
}

}  // namespace let_metrics

#endif  // LET_METRICS_CONFIG_H_
