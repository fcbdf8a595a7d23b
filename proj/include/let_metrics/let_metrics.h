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

// Umbrella header.

#ifndef LET_METRICS_LET_METRICS_H_
#define LET_METRICS_LET_METRICS_H_

#include "let_metrics/config.h"
#include "let_metrics/dataset.h"
#include "let_metrics/errors.h"
#include "let_metrics/geometry.h"
#include "let_metrics/let_core.h"
#include "let_metrics/matching.h"
#include "let_metrics/metrics.h"
#include "let_metrics/parallel.h"
#include "let_metrics/report.h"
#include "let_metrics/synth.h"

#endif  // LET_METRICS_LET_METRICS_H_
