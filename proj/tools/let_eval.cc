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

// let_eval: evaluate 3D detections with 3D AP, LET-3D-AP and LET-3D-APL.
//
//   let_eval evaluate  --gt gt.jsonl --pred pred.jsonl [--out report.json]
//   let_eval sweep     --gt gt.jsonl --pred pred.jsonl --tolerances 0.05,0.1
//   let_eval synth     --out-gt gt.jsonl --out-pred pred.jsonl [--seed N]
//   let_eval pr-export --report report.json --out curves.csv

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "let_metrics/commands.h"

namespace {

using let_metrics::ConfigOverrides;

void AddConfigFlags(CLI::App* cmd, ConfigOverrides& o, std::size_t& workers) {
  cmd->add_option("--config", o.config_path,
                  "Evaluation config JSON (tolerance, IoU thresholds, matcher, "
                  "cutoff schedule, range bins in meters)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--tolerance", o.tolerance,
                  "Longitudinal tolerance as a fraction of ground-truth range "
                  "(dimensionless, (0, 1]; default 0.1)");
  cmd->add_option("--min-tolerance-m", o.min_tolerance_m,
                  "Minimum longitudinal tolerance in meters (default 0.5)");
  cmd->add_option("--iou-threshold", o.iou_thresholds,
                  "Per-class IoU threshold as class=value (dimensionless, "
                  "(0, 1)); repeatable. Defaults: vehicle=0.5 pedestrian=0.3 "
                  "cyclist=0.3");
  cmd->add_option("--matcher", o.matcher,
                  "Bipartite matcher: hungarian (default) or greedy")
      ->check(CLI::IsMember({"hungarian", "greedy"}));
  cmd->add_option("--workers", workers,
                  "Worker threads (count; default: hardware concurrency). "
                  "Output does not depend on it")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D detection evaluation with longitudinal error tolerant "
               "metrics"};
  app.require_subcommand(1);

  let_metrics::EvaluateOptions eval;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Compute 3D AP, LET-3D-AP, LET-3D-APL and mLA per class and "
                  "range bin");
  evaluate->add_option("--gt", eval.gt_path,
                       "Ground-truth boxes, one JSON object per line")
      ->required();
  evaluate->add_option("--pred", eval.pred_path,
                       "Scored predictions, one JSON object per line")
      ->required();
  evaluate->add_option("--out", eval.out_path, "Report JSON to write");
  AddConfigFlags(evaluate, eval.overrides, eval.workers);

  let_metrics::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "LET-3D-AP and LET-3D-APL over several longitudinal tolerances");
  sweep_cmd->add_option("--gt", sweep.gt_path, "Ground-truth boxes")->required();
  sweep_cmd->add_option("--pred", sweep.pred_path, "Scored predictions")
      ->required();
  sweep_cmd->add_option("--out", sweep.out_path,
                        "CSV to write (tolerance,class,range_bin,let_3d_ap,"
                        "let_3d_apl)");
  sweep_cmd
      ->add_option("--tolerances", sweep.tolerances,
                   "Tolerances as fractions of range (dimensionless, each in "
                   "(0, 1]), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  AddConfigFlags(sweep_cmd, sweep.overrides, sweep.workers);

  let_metrics::SynthOptions synth;
  std::size_t objects_per_frame = synth.scene.max_objects;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a synthetic scene and noisy detections");
  synth_cmd->add_option("--out-gt", synth.out_gt, "Ground-truth file to write")
      ->required();
  synth_cmd->add_option("--out-pred", synth.out_pred,
                        "Prediction file to write")
      ->required();
  synth_cmd->add_option("--seed", synth.seed,
                        "RNG seed (integer; random when omitted, always "
                        "printed)");
  synth_cmd->add_option("--frames", synth.scene.frames, "Frame count")
      ->capture_default_str();
  synth_cmd->add_option("--objects-per-frame", objects_per_frame,
                        "Ground-truth objects per frame (count)")
      ->capture_default_str();
  synth_cmd->add_option("--min-range-m", synth.scene.min_range_m,
                        "Nearest object range in meters")
      ->capture_default_str();
  synth_cmd->add_option("--max-range-m", synth.scene.max_range_m,
                        "Farthest object range in meters")
      ->capture_default_str();
  synth_cmd->add_option("--long-sigma", synth.noise.longitudinal_sigma_fraction,
                        "Std of the line-of-sight error as a fraction of range "
                        "(dimensionless)")
      ->capture_default_str();
  synth_cmd->add_option("--lat-sigma-m", synth.noise.lateral_sigma_m,
                        "Std of the error across the line of sight in meters")
      ->capture_default_str();
  synth_cmd->add_option("--dims-sigma", synth.noise.dims_sigma_fraction,
                        "Relative std of box dimensions (dimensionless)")
      ->capture_default_str();
  synth_cmd->add_option("--heading-sigma", synth.noise.heading_sigma,
                        "Std of the heading error in radians")
      ->capture_default_str();
  synth_cmd->add_option("--miss-rate", synth.noise.miss_rate,
                        "Probability an object is not detected, in [0, 1]")
      ->capture_default_str();
  synth_cmd->add_option("--fp-rate", synth.noise.false_positive_rate_per_frame,
                        "Mean spurious detections per frame (count)")
      ->capture_default_str();
  synth_cmd->add_option("--score-jitter", synth.noise.score_jitter,
                        "Std of additive score noise (score units)")
      ->capture_default_str();

  let_metrics::PrExportOptions pr;
  auto* pr_cmd = app.add_subcommand(
      "pr-export", "Export the LET PR curves of a report as CSV");
  pr_cmd->add_option("--report", pr.report_path, "Report JSON to read")
      ->required();
  pr_cmd->add_option("--out", pr.out_csv,
                     "CSV to write (class,range_bin,cutoff,recall,precision,"
                     "p_L,mean_affinity)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return let_metrics::kExitUsageError;
  }

  if (evaluate->parsed()) {
    return let_metrics::RunEvaluate(eval, std::cout, std::cerr);
  }
  if (sweep_cmd->parsed()) {
    return let_metrics::RunSweep(sweep, std::cout, std::cerr);
  }
  if (synth_cmd->parsed()) {
    synth.scene.min_objects = synth.scene.max_objects = objects_per_frame;
    return let_metrics::RunSynth(synth, std::cout, std::cerr);
  }
  return let_metrics::RunPrExport(pr, std::cout, std::cerr);
}
