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

#include "logad/metrics.h"

#include <cmath>

#include "logad/error.h"

namespace logad {

Metrics ComputeMetrics(std::span<const LabeledVerdict> verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::kEmptyInput, "no verdicts to score");
  Metrics m;
  for (const LabeledVerdict& v : verdicts) {
    const bool predicted = v.predicted == Label::kAnomaly;
    const bool actual = v.truth == Label::kAnomaly;
    if (predicted && actual) ++m.tp;
    else if (predicted) ++m.fp;
    else if (actual) ++m.fn;
    else ++m.tn;
  }
  const auto ratio = [](std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  const double denom = m.precision + m.recall;
  m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
  return m;
}

bool F1Consistent(double precision, double recall, double f1, double tolerance) {
  const double denom = precision + recall;
  const double expected = denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
  return std::abs(expected - f1) <= tolerance;
}

}  // namespace logad
