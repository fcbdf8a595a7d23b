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

// Detection datasets: record types and the line-delimited JSON format.
//
// Each input line is one JSON object describing a single box:
//
//   {"frame_id": "f0", "class": "vehicle", "cx": 12.0, "cy": -3.5,
//    "cz": 0.8, "length": 4.5, "width": 2.0, "height": 1.6,
//    "heading": 0.3, "score": 0.9,
//    "origin_x": 0.0, "origin_y": 0.0, "origin_z": 0.0}
//
// "score" is required for predictions and ignored for ground truths. The
// origin triple is optional and defaults to (0, 0, 0); every record of a
// frame that carries it must agree. Headings are radians in [-pi, pi].

#ifndef LET_METRICS_DATASET_H_
#define LET_METRICS_DATASET_H_

#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"
#include "let_metrics/let_core.h"

namespace let_metrics {

// Class labels are free-form strings; these are the ones with default IoU
// thresholds.
inline constexpr std::string_view kVehicle = "vehicle";
inline constexpr std::string_view kPedestrian = "pedestrian";
inline constexpr std::string_view kCyclist = "cyclist";

struct GroundTruthRecord {
  std::string class_label;
  Box3D box;

  friend bool operator==(const GroundTruthRecord&,
                         const GroundTruthRecord&) = default;
};

struct DetectionRecord {
  std::string class_label;
  Box3D box;
  double score = 0.0;  // in [0, 1]

  friend bool operator==(const DetectionRecord&,
                         const DetectionRecord&) = default;
};

struct FrameRecord {
  std::string frame_id;
  Vec3 sensor_origin;
  std::vector<GroundTruthRecord> ground_truths;
  std::vector<DetectionRecord> predictions;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

// Frames sorted by frame_id, ids unique.
using Dataset = std::vector<FrameRecord>;

namespace internal {

struct RawRecord {
  std::string frame_id;
  std::string class_label;
  double cx, cy, cz, length, width, height, heading;
  std::optional<double> score;
  std::optional<Vec3> origin;
  std::size_t line = 0;
  std::size_t index = 0;  // position among the file's records
};

inline std::string NormalizeClassLabel(std::string label) {
  std::string lower;
  lower.reserve(label.size());
  for (char c : label) lower.push_back(static_cast<char>(std::tolower(c)));
  for (std::string_view known : {kVehicle, kPedestrian, kCyclist}) {
    if (lower == known) return lower;
  }
  return label;
}

inline double RequireNumber(const nlohmann::json& obj, const char* field,
                            const std::string& path, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(path, line, field, "missing");
  if (!it->is_number()) throw ParseError(path, line, field, "not a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(path, line, field, "not finite");
  return v;
}

inline std::vector<RawRecord> ReadRecords(const std::string& path,
                                          bool predictions) {
  if (!std::filesystem::exists(path)) throw MissingFileError(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<RawRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path, line, "<record>", e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(path, line, "<record>", "expected a JSON object");
    }
    for (const char* deg : {"heading_deg", "heading_degrees"}) {
      if (obj.contains(deg)) {
        throw ParseError(path, line, deg,
                         "degrees are not accepted; give 'heading' in "
                         "radians");
      }
    }
    RawRecord r;
    r.line = line;
    r.index = records.size();
    const auto fid = obj.find("frame_id");
    if (fid == obj.end()) throw ParseError(path, line, "frame_id", "missing");
    if (fid->is_string()) {
      r.frame_id = fid->get<std::string>();
    } else if (fid->is_number_integer()) {
      r.frame_id = std::to_string(fid->get<long long>());
    } else {
      throw ParseError(path, line, "frame_id", "expected a string");
    }
    const auto cls = obj.find("class");
    if (cls == obj.end()) throw ParseError(path, line, "class", "missing");
    if (!cls->is_string() || cls->get<std::string>().empty()) {
      throw ParseError(path, line, "class", "expected a non-empty string");
    }
    r.class_label = NormalizeClassLabel(cls->get<std::string>());
    r.cx = RequireNumber(obj, "cx", path, line);
    r.cy = RequireNumber(obj, "cy", path, line);
    r.cz = RequireNumber(obj, "cz", path, line);
    r.length = RequireNumber(obj, "length", path, line);
    r.width = RequireNumber(obj, "width", path, line);
    r.height = RequireNumber(obj, "height", path, line);
    r.heading = RequireNumber(obj, "heading", path, line);
    if (predictions) r.score = RequireNumber(obj, "score", path, line);
    const int origin_fields = static_cast<int>(obj.contains("origin_x")) +
                              static_cast<int>(obj.contains("origin_y")) +
                              static_cast<int>(obj.contains("origin_z"));
    if (origin_fields == 3) {
      r.origin = Vec3{RequireNumber(obj, "origin_x", path, line),
                      RequireNumber(obj, "origin_y", path, line),
                      RequireNumber(obj, "origin_z", path, line)};
    } else if (origin_fields != 0) {
      throw ParseError(path, line, "origin_x",
                       "origin_x, origin_y and origin_z must appear together");
    }
    records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("error reading " + path);
  return records;
}

inline std::string RecordName(const RawRecord& r, bool prediction,
                              const std::string& path) {
  std::ostringstream os;
  os << "frame '" << r.frame_id << "' " << (prediction ? "prediction" : "ground truth")
     << " record " << r.index << " (" << path << ":" << r.line << ")";
  return os.str();
}

inline Box3D MakeValidatedBox(const RawRecord& r, bool prediction,
                              const std::string& path) {
  if (std::abs(r.heading) > std::numbers::pi + 1e-9) {
    std::ostringstream os;
    os << RecordName(r, prediction, path) << ": heading " << r.heading
       << " is outside [-pi, pi]; headings must be in radians";
    throw ValidationError(os.str());
  }
  try {
    return Box3D({r.cx, r.cy, r.cz}, r.length, r.width, r.height, r.heading);
  } catch (const InvalidBoxError& e) {
    throw ValidationError(RecordName(r, prediction, path) + ": " + e.what());
  }
}

}  // namespace internal

// Reads ground truths and predictions and groups them into frames sorted by
// frame_id. Predictions in frames without ground truth form frames with an
// empty ground-truth list.
inline Dataset LoadDataset(const std::string& gt_path,
                           const std::string& pred_path) {
  const auto gt_records = internal::ReadRecords(gt_path, false);
  const auto pred_records = internal::ReadRecords(pred_path, true);

  std::map<std::string, FrameRecord> frames;
  std::map<std::string, std::optional<Vec3>> origins;
  auto note_origin = [&](const internal::RawRecord& r, bool prediction,
                         const std::string& path) {
    if (!r.origin) return;
    auto& known = origins[r.frame_id];
    if (known && !(*known == *r.origin)) {
      throw ValidationError(internal::RecordName(r, prediction, path) +
                            ": sensor origin disagrees with earlier records "
                            "of the same frame");
    }
    known = r.origin;
  };
  for (const auto& r : gt_records) note_origin(r, false, gt_path);
  for (const auto& r : pred_records) note_origin(r, true, pred_path);

  auto frame_for = [&](const std::string& id) -> FrameRecord& {
    auto [it, inserted] = frames.try_emplace(id);
    if (inserted) {
      it->second.frame_id = id;
      const auto o = origins.find(id);
      if (o != origins.end() && o->second) it->second.sensor_origin = *o->second;
    }
    return it->second;
  };

  for (const auto& r : gt_records) {
    Box3D box = internal::MakeValidatedBox(r, false, gt_path);
    FrameRecord& frame = frame_for(r.frame_id);
    if (Norm(box.center() - frame.sensor_origin) < kMinCenterRange) {
      throw ValidationError(internal::RecordName(r, false, gt_path) +
                            ": center coincides with the sensor origin");
    }
    frame.ground_truths.push_back({r.class_label, box});
  }
  for (const auto& r : pred_records) {
    Box3D box = internal::MakeValidatedBox(r, true, pred_path);
    if (!(*r.score >= 0.0 && *r.score <= 1.0)) {
      std::ostringstream os;
      os << internal::RecordName(r, true, pred_path) << ": score " << *r.score
         << " is outside [0, 1]";
      throw ValidationError(os.str());
    }
    FrameRecord& frame = frame_for(r.frame_id);
    if (Norm(box.center() - frame.sensor_origin) < kMinCenterRange) {
      throw ValidationError(internal::RecordName(r, true, pred_path) +
                            ": center coincides with the sensor origin");
    }
    frame.predictions.push_back({r.class_label, box, *r.score});
  }

  Dataset out;
  out.reserve(frames.size());
  for (auto& [id, frame] : frames) out.push_back(std::move(frame));
  return out;
}

namespace internal {

inline nlohmann::ordered_json BoxRecordJson(const std::string& frame_id,
                                            const std::string& class_label,
                                            const Box3D& box,
                                            std::optional<double> score,
                                            const Vec3& origin) {
  nlohmann::ordered_json j;
  j["frame_id"] = frame_id;
  j["class"] = class_label;
  j["cx"] = box.center().x;
  j["cy"] = box.center().y;
  j["cz"] = box.center().z;
  j["length"] = box.length();
  j["width"] = box.width();
  j["height"] = box.height();
  j["heading"] = box.heading();
  if (score) j["score"] = *score;
  if (!(origin == Vec3{})) {
    j["origin_x"] = origin.x;
    j["origin_y"] = origin.y;
    j["origin_z"] = origin.z;
  }
  return j;
}

inline std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

}  // namespace internal

// Writes the dataset in the line format, frames in order. Frames with
// neither ground truths nor predictions produce no lines.
inline void WriteDataset(const Dataset& dataset, const std::string& gt_path,
                         const std::string& pred_path) {
  auto gt_out = internal::OpenForWrite(gt_path);
  auto pred_out = internal::OpenForWrite(pred_path);
  for (const auto& frame : dataset) {
    for (const auto& gt : frame.ground_truths) {
      gt_out << internal::BoxRecordJson(frame.frame_id, gt.class_label, gt.box,
                                        std::nullopt, frame.sensor_origin)
                    .dump()
             << '\n';
    }
    for (const auto& p : frame.predictions) {
      pred_out << internal::BoxRecordJson(frame.frame_id, p.class_label, p.box,
                                          p.score, frame.sensor_origin)
                      .dump()
               << '\n';
    }
  }
  if (!gt_out.flush()) throw IoError("failed writing " + gt_path);
  if (!pred_out.flush()) throw IoError("failed writing " + pred_path);
}

}  // namespace let_metrics

#endif  // LET_METRICS_DATASET_H_
