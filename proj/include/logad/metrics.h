//
// Copyright 2026 The logad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef LOGAD_METRICS_H_
#define LOGAD_METRICS_H_

#include <cstdint>
#include <span>

#include "logad/detector.h"

namespace logad {

struct LabeledVerdict {
  std::int64_t line_no = 0;
  Label predicted = Label::kNormal;
  Label truth = Label::kNormal;
};

// Anomaly is the positive class.
struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  double false_positive_rate() const {
    return fp + tn == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(fp + tn);
  }
};

// Zero denominators yield 0. Throws kEmptyInput.
Metrics ComputeMetrics(std::span<const LabeledVerdict> verdicts);

// Harmonic-mean identity check used on every reported triple.
bool F1Consistent(double precision, double recall, double f1, double tolerance = 0.005);

}  // namespace logad

#endif  // LOGAD_METRICS_H_
