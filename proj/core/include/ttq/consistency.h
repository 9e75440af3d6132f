// Copyright 2026 The ttq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TTQ_CONSISTENCY_H_
#define TTQ_CONSISTENCY_H_

#include <optional>
#include <string>
#include <vector>

#include "ttq/adapter.h"
#include "ttq/rubric.h"
#include "ttq/runner.h"
#include "ttq/sqlcheck.h"

namespace ttq {

struct VariantOutcome {
  RecordKey key;
  VerdictStatus status = VerdictStatus::kNotEquivalent;
  // Result digest for executable generations, "invalid" otherwise.
  std::string result_class;
};

inline constexpr std::string_view kInvalidClass = "invalid";

struct StabilityGroup {
  std::string case_id;
  size_t turn_index = 0;
  Regime regime = Regime::kIdentical;
  std::vector<VariantOutcome> variants;

  int64_t correct() const;
  // correct / |variants|
  Ratio stability() const;
  // Size of the largest result class / |variants|.
  Ratio self_consistency() const;
};

// The turns of `test_case` measured under `regime`: every turn for the
// identical and settings regimes, turns with at least two paraphrases for
// the linguistic regime.
std::vector<size_t> MeasuredTurns(const TestCase& test_case, Regime regime);

// Empty when no case opts into `regime` (or the settings regime has fewer
// than two profiles).
std::vector<StabilityGroup> RunRegime(EvaluationSession& session,
                                      Regime regime);

// Unweighted mean of group stabilities; nullopt for no groups.
std::optional<Ratio> StabilityScore(const std::vector<StabilityGroup>& groups);

CategoryResult EvaluateConsistencyCategory(EvaluationSession& session,
                                           const MaturityRubric& rubric);

}  // namespace ttq

#endif  // TTQ_CONSISTENCY_H_
