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

// Command implementations behind the let_eval tool. Each returns a process
// exit status: 0 on success, 1 on an evaluation error, 2 on a usage or I/O
// error.

#ifndef LET_METRICS_COMMANDS_H_
#define LET_METRICS_COMMANDS_H_

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "let_metrics/config.h"
#include "let_metrics/dataset.h"
#include "let_metrics/errors.h"
#include "let_metrics/metrics.h"
#include "let_metrics/parallel.h"
#include "let_metrics/report.h"
#include "let_metrics/synth.h"

namespace let_metrics {

inline constexpr int kExitOk = 0;
inline constexpr int kExitEvaluationError = 1;
inline constexpr int kExitUsageError = 2;

struct ConfigOverrides {
  std::optional<std::string> config_path;
  std::optional<double> tolerance;
  std::optional<double> min_tolerance_m;
  std::vector<std::string> iou_thresholds;  // "class=value"
  std::optional<std::string> matcher;
};

struct EvaluateOptions {
  std::string gt_path;
  std::string pred_path;
  std::optional<std::string> out_path;
  ConfigOverrides overrides;
  std::size_t workers = DefaultWorkerCount();
};

struct SweepOptions {
  std::string gt_path;
  std::string pred_path;
  std::optional<std::string> out_path;
  std::vector<double> tolerances = {0.025, 0.05, 0.1, 0.15, 0.2};
  ConfigOverrides overrides;
  std::size_t workers = DefaultWorkerCount();
};

struct SynthOptions {
  SceneSpec scene;
  NoiseModel noise;
  std::optional<std::uint64_t> seed;
  std::string out_gt;
  std::string out_pred;
};

struct PrExportOptions {
  std::string report_path;
  std::string out_csv;
};

inline EvalConfig ResolveConfig(const ConfigOverrides& o) {
  EvalConfig cfg = o.config_path ? LoadConfig(*o.config_path) : EvalConfig{};
  if (o.tolerance) cfg.tolerance.percentage = *o.tolerance;
  if (o.min_tolerance_m) cfg.tolerance.min_meters = *o.min_tolerance_m;
  for (const auto& spec : o.iou_thresholds) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ConfigError("--iou-threshold expects class=value, got '" + spec +
                        "'");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(spec.substr(eq + 1), &used);
      if (used != spec.size() - eq - 1) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw ConfigError("--iou-threshold value in '" + spec +
                        "' is not a number");
    }
    cfg.iou_thresholds[internal::NormalizeClassLabel(spec.substr(0, eq))] =
        value;
  }
  if (o.matcher) cfg.matcher = ParseMatcher(*o.matcher);
  cfg.Validate();
  return cfg;
}

namespace internal {

template <typename Fn>
int RunGuarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const MissingFileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitEvaluationError;
  }
}

inline std::string Percent(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * *v);
  return buf;
}

inline std::string Ratio(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

inline std::string Row(const std::vector<std::string>& cells,
                       const std::vector<int>& widths) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    char buf[128];
    if (i < 2) std::snprintf(buf, sizeof(buf), "%-*s", widths[i], cells[i].c_str());
    else std::snprintf(buf, sizeof(buf), "%*s", widths[i], cells[i].c_str());
    if (i > 0) line += "  ";
    line += buf;
  }
  return line + "\n";
}

inline void CheckSweepTolerances(const std::vector<double>& tolerances) {
  if (tolerances.empty()) throw ConfigError("no tolerances to sweep");
  for (double t : tolerances) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw ConfigError("sweep tolerance " + FormatDouble(t) +
                        " is outside (0, 1]");
    }
  }
}

}  // namespace internal

// Class x range table of 3D AP, LET-3D-AP, LET-3D-APL (percent) and mLA.
inline std::string SummaryTable(const MetricsReport& report) {
  const std::vector<int> widths = {12, 12, 7, 9, 10, 6};
  std::string table = internal::Row(
      {"class", "range", "3D AP", "LET-3D-AP", "LET-3D-APL", "mLA"}, widths);
  for (const auto& e : report.entries) {
    table += internal::Row({e.class_label, e.range_bin,
                            internal::Percent(e.ap_3d),
                            internal::Percent(e.let_3d_ap),
                            internal::Percent(e.let_3d_apl),
                            internal::Ratio(e.mla)},
                           widths);
  }
  return table;
}

inline int RunEvaluate(const EvaluateOptions& options, std::ostream& out,
                       std::ostream& err) {
  return internal::RunGuarded(err, [&] {
    const EvalConfig cfg = ResolveConfig(options.overrides);
    const Dataset dataset = LoadDataset(options.gt_path, options.pred_path);
    EvalOptions eval_options;
    eval_options.workers = options.workers;
    const MetricsReport report = Evaluate(dataset, cfg, eval_options);
    if (options.out_path) WriteReport(report, *options.out_path);
    out << SummaryTable(report);
    return kExitOk;
  });
}

struct SweepRow {
  double tolerance = 0.0;
  std::string class_label;
  std::string range_bin;
  std::optional<double> let_3d_ap;
  std::optional<double> let_3d_apl;
};

// LET metrics for each tolerance percentage, everything else fixed.
inline std::vector<SweepRow> ToleranceSweep(const Dataset& dataset,
                                            EvalConfig cfg,
                                            const std::vector<double>& tolerances,
                                            std::size_t workers) {
  internal::CheckSweepTolerances(tolerances);
  std::vector<SweepRow> rows;
  EvalOptions options;
  options.workers = workers;
  options.compute_baseline = false;
  for (double t : tolerances) {
    cfg.tolerance.percentage = t;
    const MetricsReport report = Evaluate(dataset, cfg, options);
    for (const auto& e : report.entries) {
      rows.push_back({t, e.class_label, e.range_bin, e.let_3d_ap, e.let_3d_apl});
    }
  }
  return rows;
}

inline std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string csv = "tolerance,class,range_bin,let_3d_ap,let_3d_apl\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  for (const auto& r : rows) {
    csv += FormatDouble(r.tolerance) + "," + CsvField(r.class_label) + "," +
           CsvField(r.range_bin) + "," + opt(r.let_3d_ap) + "," +
           opt(r.let_3d_apl) + "\n";
  }
  return csv;
}

inline int RunSweep(const SweepOptions& options, std::ostream& out,
                    std::ostream& err) {
  return internal::RunGuarded(err, [&] {
    const EvalConfig cfg = ResolveConfig(options.overrides);
    internal::CheckSweepTolerances(options.tolerances);
    const Dataset dataset = LoadDataset(options.gt_path, options.pred_path);
    const auto rows =
        ToleranceSweep(dataset, cfg, options.tolerances, options.workers);
    const std::string csv = SweepCsv(rows);
    if (options.out_path) {
      std::ofstream f(*options.out_path, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open " + *options.out_path + " for writing");
      f << csv;
      if (!f.flush()) throw IoError("failed writing " + *options.out_path);
    }
    const std::vector<int> widths = {12, 12, 9, 10, 10};
    out << internal::Row({"class", "range", "tolerance", "LET-3D-AP",
                          "LET-3D-APL"},
                         widths);
    for (const auto& r : rows) {
      out << internal::Row({r.class_label, r.range_bin,
                            internal::Percent(r.tolerance),
                            internal::Percent(r.let_3d_ap),
                            internal::Percent(r.let_3d_apl)},
                           widths);
    }
    return kExitOk;
  });
}

inline int RunSynth(const SynthOptions& options, std::ostream& out,
                    std::ostream& err) {
  return internal::RunGuarded(err, [&] {
    const std::uint64_t seed =
        options.seed ? *options.seed
                     : (static_cast<std::uint64_t>(std::random_device{}()) << 32) |
                           std::random_device{}();
    SceneSpec scene = options.scene;
    scene.seed = seed;
    const Dataset gt = GenerateGroundTruth(scene);
    const Dataset with_preds = SimulateDetector(gt, options.noise, seed + 1, scene);
    WriteDataset(with_preds, options.out_gt, options.out_pred);
    std::size_t num_gts = 0;
    std::size_t num_preds = 0;
    for (const auto& f : with_preds) {
      num_gts += f.ground_truths.size();
      num_preds += f.predictions.size();
    }
    out << "seed: " << seed << "\n"
        << "frames: " << with_preds.size() << ", ground truths: " << num_gts
        << ", predictions: " << num_preds << "\n";
    return kExitOk;
  });
}

inline int RunPrExport(const PrExportOptions& options, std::ostream& out,
                       std::ostream& err) {
  return internal::RunGuarded(err, [&] {
    const MetricsReport report = ReadReport(options.report_path);
    WritePrCurveCsv(report, options.out_csv);
    std::size_t rows = 0;
    for (const auto& e : report.entries) rows += e.pr_curve.size();
    out << "wrote " << rows << " PR points to " << options.out_csv << "\n";
    return kExitOk;
  });
}

}  // namespace let_metrics

#endif  // LET_METRICS_COMMANDS_H_
