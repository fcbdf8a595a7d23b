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

// Report serialization.
//
// The report is a JSON document with a fixed key order:
//
//   {"schema_version": "let-metrics-report/1",
//    "config": {...},
//    "entries": [{"class": ..., "range_bin": ..., "range_min_m": ...,
//                 "range_max_m": <number or null>, "num_gts": ...,
//                 "num_preds": ..., "ap_3d": ..., "let_3d_ap": ...,
//                 "let_3d_apl": ..., "mla": ..., "mean_match_affinity": ...,
//                 "pr_curve": [...], "pr_curve_3d": [...]}, ...]}
//
// Metric keys are absent when the metric is undefined. Numbers use the
// shortest representation that reads back to the same double.

#ifndef LET_METRICS_REPORT_H_
#define LET_METRICS_REPORT_H_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "let_metrics/config.h"
#include "let_metrics/errors.h"
#include "let_metrics/metrics.h"

namespace let_metrics {

namespace internal {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson PointToJson(const PRPoint& p) {
  OrderedJson j;
  j["score_cutoff"] = p.score_cutoff;
  j["tp_p"] = p.tp_p;
  j["fp"] = p.fp;
  j["tp_g"] = p.tp_g;
  j["fn"] = p.fn_count;
  j["num_preds"] = p.num_preds;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["weighted_precision"] = p.weighted_precision;
  j["mean_affinity"] = p.mean_affinity;
  return j;
}

inline PRPoint PointFromJson(const OrderedJson& j) {
  PRPoint p;
  p.score_cutoff = j.at("score_cutoff").get<double>();
  p.tp_p = j.at("tp_p").get<double>();
  p.fp = j.at("fp").get<double>();
  p.tp_g = j.at("tp_g").get<std::int64_t>();
  p.fn_count = j.at("fn").get<std::int64_t>();
  p.num_preds = j.at("num_preds").get<std::int64_t>();
  p.precision = j.at("precision").get<double>();
  p.recall = j.at("recall").get<double>();
  p.weighted_precision = j.at("weighted_precision").get<double>();
  p.mean_affinity = j.at("mean_affinity").get<double>();
  return p;
}

inline void PutOptional(OrderedJson& j, const char* key,
                        const std::optional<double>& v) {
  if (v) j[key] = *v;
}

inline std::optional<double> GetOptional(const OrderedJson& j,
                                         const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

inline void CheckFinite(const MetricsReport& report) {
  auto check = [](double v, const std::string& what) {
    if (!std::isfinite(v)) throw IoError("report value " + what + " is not finite");
  };
  for (const auto& e : report.entries) {
    for (const auto* v : {&e.ap_3d, &e.let_3d_ap, &e.let_3d_apl, &e.mla,
                          &e.mean_match_affinity}) {
      if (*v) check(**v, e.class_label + "/" + e.range_bin);
    }
    for (const auto* curve : {&e.pr_curve, &e.pr_curve_3d}) {
      for (const auto& p : *curve) {
        for (double v : {p.score_cutoff, p.tp_p, p.fp, p.precision, p.recall,
                         p.weighted_precision, p.mean_affinity}) {
          check(v, e.class_label + "/" + e.range_bin + " PR point");
        }
      }
    }
  }
}

}  // namespace internal

inline nlohmann::ordered_json ReportToJson(const MetricsReport& report) {
  internal::OrderedJson j;
  j["schema_version"] = report.schema_version;
  j["config"] = ConfigToJson(report.config);
  internal::OrderedJson entries = internal::OrderedJson::array();
  for (const auto& e : report.entries) {
    internal::OrderedJson je;
    je["class"] = e.class_label;
    je["range_bin"] = e.range_bin;
    je["range_min_m"] = e.range_min_m;
    if (std::isinf(e.range_max_m)) je["range_max_m"] = nullptr;
    else je["range_max_m"] = e.range_max_m;
    je["num_gts"] = e.num_gts;
    je["num_preds"] = e.num_preds;
    internal::PutOptional(je, "ap_3d", e.ap_3d);
    internal::PutOptional(je, "let_3d_ap", e.let_3d_ap);
    internal::PutOptional(je, "let_3d_apl", e.let_3d_apl);
    internal::PutOptional(je, "mla", e.mla);
    internal::PutOptional(je, "mean_match_affinity", e.mean_match_affinity);
    internal::OrderedJson curve = internal::OrderedJson::array();
    for (const auto& p : e.pr_curve) curve.push_back(internal::PointToJson(p));
    je["pr_curve"] = curve;
    internal::OrderedJson curve_3d = internal::OrderedJson::array();
    for (const auto& p : e.pr_curve_3d) {
      curve_3d.push_back(internal::PointToJson(p));
    }
    je["pr_curve_3d"] = curve_3d;
    entries.push_back(std::move(je));
  }
  j["entries"] = entries;
  return j;
}

inline MetricsReport ReportFromJson(const nlohmann::ordered_json& j) {
  MetricsReport report;
  try {
    report.schema_version = j.at("schema_version").get<std::string>();
    if (report.schema_version != kReportSchemaVersion) {
      throw IoError("unsupported report schema '" + report.schema_version +
                    "', expected '" + std::string(kReportSchemaVersion) + "'");
    }
    report.config =
        ConfigFromJson(nlohmann::json::parse(j.at("config").dump()));
    for (const auto& je : j.at("entries")) {
      BreakdownMetrics e;
      e.class_label = je.at("class").get<std::string>();
      e.range_bin = je.at("range_bin").get<std::string>();
      e.range_min_m = je.at("range_min_m").get<double>();
      const auto& max = je.at("range_max_m");
      e.range_max_m = max.is_null() ? std::numeric_limits<double>::infinity()
                                    : max.get<double>();
      e.num_gts = je.at("num_gts").get<std::int64_t>();
      e.num_preds = je.at("num_preds").get<std::int64_t>();
      e.ap_3d = internal::GetOptional(je, "ap_3d");
      e.let_3d_ap = internal::GetOptional(je, "let_3d_ap");
      e.let_3d_apl = internal::GetOptional(je, "let_3d_apl");
      e.mla = internal::GetOptional(je, "mla");
      e.mean_match_affinity = internal::GetOptional(je, "mean_match_affinity");
      for (const auto& p : je.at("pr_curve")) {
        e.pr_curve.push_back(internal::PointFromJson(p));
      }
      for (const auto& p : je.at("pr_curve_3d")) {
        e.pr_curve_3d.push_back(internal::PointFromJson(p));
      }
      report.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
  return report;
}

inline std::string ReportToString(const MetricsReport& report) {
  internal::CheckFinite(report);
  return ReportToJson(report).dump(2) + "\n";
}

inline void WriteReport(const MetricsReport& report, const std::string& path) {
  const std::string text = ReportToString(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path);
}

inline MetricsReport ReadReport(const std::string& path) {
  if (!std::filesystem::exists(path)) throw MissingFileError(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  return ReportFromJson(j);
}

// Shortest round-trip decimal form of `v`.
inline std::string FormatDouble(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, end);
}

// RFC 4180 quoting for fields containing separators or quotes.
inline std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// One row per LET PR point:
// class,range_bin,cutoff,recall,precision,p_L,mean_affinity
inline std::string PrCurveCsv(const MetricsReport& report) {
  std::string csv = "class,range_bin,cutoff,recall,precision,p_L,mean_affinity\n";
  for (const auto& e : report.entries) {
    for (const auto& p : e.pr_curve) {
      csv += CsvField(e.class_label) + "," + CsvField(e.range_bin) + "," +
             FormatDouble(p.score_cutoff) + "," + FormatDouble(p.recall) + "," +
             FormatDouble(p.precision) + "," +
             FormatDouble(p.weighted_precision) + "," +
             FormatDouble(p.mean_affinity) + "\n";
    }
  }
  return csv;
}

inline void WritePrCurveCsv(const MetricsReport& report,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << PrCurveCsv(report);
  if (!out.flush()) throw IoError("failed writing " + path);
}

}  // namespace let_metrics

#endif  // LET_METRICS_REPORT_H_
