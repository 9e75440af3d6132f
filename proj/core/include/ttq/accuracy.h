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

#ifndef TTQ_ACCURACY_H_
#define TTQ_ACCURACY_H_

#include <string>
#include <vector>

#include "ttq/adapter.h"
#include "ttq/rubric.h"
#include "ttq/runner.h"
#include "ttq/sqlcheck.h"

namespace ttq {

struct TurnVerdict {
  RecordKey key;
  VerdictStatus status = VerdictStatus::kNotEquivalent;
  std::string diagnostics;
};

struct TierResult {
  Level tier = Level::kI;
  int64_t total = 0;
  int64_t correct = 0;
  std::vector<TurnVerdict> verdicts;

  bool evaluated() const { return total > 0; }
  // correct/total; only meaningful when evaluated().
  Ratio accuracy() const { return Ratio(correct, total > 0 ? total : 1); }
};

// One default-profile, canonical-question, sample-0 generation per turn of
// every case in `tier`, adjudicated against the turn's gold query.
TierResult EvaluateTier(EvaluationSession& session, Level tier);

CategoryResult EvaluateAccuracyCategory(EvaluationSession& session,
                                        const MaturityRubric& rubric);

}  // namespace ttq

#endif  // TTQ_ACCURACY_H_
