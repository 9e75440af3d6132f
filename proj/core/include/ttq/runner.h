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

#ifndef TTQ_RUNNER_H_
#define TTQ_RUNNER_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttq/adapter.h"
#include "ttq/clock.h"
#include "ttq/rubric.h"
#include "ttq/run_log.h"
#include "ttq/sqlcheck.h"
#include "ttq/suite.h"

namespace ttq {

// Outcome of one category evaluation, as it appears in the report.
struct CategoryResult {
  Category category = Category::kAccuracy;
  bool evaluated = false;
  LevelResults levels;
  Level assigned = Level::kNone;
  // Category-specific counts, deterministic and JSON-serializable.
  nlohmann::json metrics = nlohmann::json::object();
};

struct Outcome {
  GenerationRecord record;
  EquivalenceVerdict verdict;
  std::string requested_at;
  std::string responded_at;
};

struct SessionOptions {
  int concurrency = 1;
  QueryLimits limits;
  // Defaults to the system clock.
  const Clock* clock = nullptr;
};

// Shared generation and adjudication for one SUT on one suite. Every
// RecordKey is generated at most once per session; later requests for the
// same key reuse the stored outcome. The run log is appended in key order
// after each batch so that entry ids do not depend on scheduling.
class EvaluationSession {
 public:
  EvaluationSession(const TestSuite& suite, Sut& sut, SessionOptions options);

  // Request for (case, turn) with gold history of earlier turns.
  GenerationRequest MakeRequest(const TestCase& test_case, size_t turn_index,
                                const SettingsProfile& profile,
                                size_t paraphrase_index,
                                int sample_index) const;

  // Generates and adjudicates the requests not seen before. Requests that
  // share (case, profile, paraphrase, sample) run sequentially in turn
  // order; independent chains run on up to `concurrency` workers. Returns
  // outcomes aligned with `requests`. Harness faults (bad gold, fixture
  // failure) are rethrown.
  std::vector<const Outcome*> Run(const std::vector<GenerationRequest>& requests);

  const TestSuite& suite() const { return suite_; }
  const RunLog& log() const { return log_; }
  const Clock& clock() const { return *clock_; }
  std::string_view sut_kind() const { return sut_.kind(); }

  // All outcomes so far, ordered by key.
  std::vector<const Outcome*> outcomes() const;
  std::vector<GenerationRecord> records() const;

  const TestCase& Case(const std::string& case_id) const;

 private:
  Outcome Evaluate(const GenerationRequest& request) const;
  void AppendToLog(const Outcome& outcome);

  const TestSuite& suite_;
  Sut& sut_;
  SessionOptions options_;
  SystemClock system_clock_;
  const Clock* clock_;
  std::map<std::string, const TestCase*> cases_;
  std::map<RecordKey, std::unique_ptr<Outcome>> outcomes_;
  std::mutex log_mu_;
  RunLog log_;
};

}  // namespace ttq

#endif  // TTQ_RUNNER_H_
