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

#ifndef TTQ_CLI_H_
#define TTQ_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttq/adapter.h"
#include "ttq/clock.h"
#include "ttq/database.h"
#include "ttq/report.h"
#include "ttq/rubric.h"
#include "ttq/run_log.h"
#include "ttq/suite.h"
#include "ttq/transparency.h"

namespace ttq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 2;
// Only returned when --min-level is given and not met.
inline constexpr int kExitBelowMinimum = 3;

struct AssessOptions {
  std::set<Category> categories = {kAllCategories.begin(),
                                   kAllCategories.end()};
  int concurrency = 1;
  uint64_t seed = 0;
  // Defaults to the system clock.
  const Clock* clock = nullptr;
  QueryLimits limits;
  // Recorded in the report and used as the log evidence pointer.
  std::string log_name;
  std::vector<std::string> rubric_overrides;
  std::string harness_version = "dev";
};

struct Assessment {
  AssessmentReport report;
  RunLog log;
};

// Runs the selected categories. Transparency audits the records of the
// accuracy and consistency generation passes, which run even when those
// categories are not reported.
Assessment Assess(const TestSuite& suite, Sut& sut,
                  const nlohmann::json& sut_summary,
                  const TransparencyManifest* manifest,
                  const MaturityRubric& rubric, const AssessOptions& options);

// Command-line settings after merging the config file; flags win.
struct HarnessConfig {
  std::filesystem::path suite;
  std::filesystem::path sut;
  std::optional<std::filesystem::path> manifest;
  std::set<Category> categories = {kAllCategories.begin(),
                                   kAllCategories.end()};
  std::vector<std::string> overrides;
  std::optional<int> repeat_count;
  int concurrency = 1;
  uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> log;
  std::vector<std::string> formats = {"json"};
  bool fixed_clock = false;
  std::map<Category, Level> min_level;
  QueryLimits limits;
};

// Reads a JSON config file; relative paths resolve against its directory.
// Throws LoadError or UsageError.
HarnessConfig LoadHarnessConfig(const std::filesystem::path& path);

// Writes `contents` to a sibling temp file, then renames it over `path`.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents);

namespace cli {

// Entry point for the ttq binary. Never throws.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace cli
}  // namespace ttq

#endif  // TTQ_CLI_H_
