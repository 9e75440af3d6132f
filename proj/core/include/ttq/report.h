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

#ifndef TTQ_REPORT_H_
#define TTQ_REPORT_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttq/rubric.h"
#include "ttq/runner.h"

namespace ttq {

inline constexpr int kReportSchemaVersion = 1;

inline constexpr std::string_view kAdjudicationPolicy =
    "execution-match: a generation is correct when its result set on a "
    "freshly provisioned fixture equals the gold query's result set "
    "(multiset equality, or sequence equality for order-sensitive turns); "
    "one default-profile sample per turn for accuracy; gold history for "
    "multi-turn cases; per-tier accuracy slices; SUT failures and "
    "non-executable generations count as incorrect";

struct RunMetadata {
  uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  int64_t generations = 0;
  int64_t failed_generations = 0;
  // Basename of the persisted run log, empty if none was written.
  std::string log_file;

  Ratio failure_rate() const {
    return Ratio(failed_generations, generations > 0 ? generations : 1);
  }

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct AssessmentReport {
  int schema_version = kReportSchemaVersion;
  std::string harness_version;
  MaturityRubric rubric;
  // Override assignments in the order applied, e.g. "accuracy.I=0.70".
  std::vector<std::string> rubric_overrides;
  std::string suite_id;
  nlohmann::json sut = nlohmann::json::object();
  // One entry per category; unevaluated ones have evaluated == false.
  std::map<Category, CategoryResult> categories;
  RunMetadata metadata;
  std::string adjudication_policy = std::string(kAdjudicationPolicy);

  // Assigned levels of evaluated categories only.
  std::map<Category, Level> MaturityVector() const;
};

struct ReportContext {
  std::string harness_version;
  MaturityRubric rubric;
  std::vector<std::string> rubric_overrides;
  std::string suite_id;
  nlohmann::json sut = nlohmann::json::object();
  RunMetadata metadata;
};

// Throws EvaluationError if no result is evaluated.
AssessmentReport BuildReport(const std::vector<CategoryResult>& results,
                             ReportContext context);

nlohmann::json ReportToJson(const AssessmentReport& report);
// Throws LoadError on schema mismatch.
AssessmentReport ReportFromJson(const nlohmann::json& json);

// "json" or "markdown"; anything else throws UsageError.
std::string RenderReport(const AssessmentReport& report,
                         std::string_view format);

// Re-applies the snapshot rubric to every stored measured value of the
// accuracy and consistency categories and returns the criterion ids whose
// stored status disagrees. Empty means the report is self-consistent.
std::vector<std::string> RederivationMismatches(const AssessmentReport& report);

nlohmann::json CategoryResultToJson(const CategoryResult& result);
CategoryResult CategoryResultFromJson(const nlohmann::json& json);

}  // namespace ttq

#endif  // TTQ_REPORT_H_
