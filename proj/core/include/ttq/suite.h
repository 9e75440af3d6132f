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

#ifndef TTQ_SUITE_H_
#define TTQ_SUITE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttq/database.h"
#include "ttq/rubric.h"

namespace ttq {

struct DatabaseFixture {
  std::string db_id;
  std::string schema_script;
  std::string data_script;

  friend bool operator==(const DatabaseFixture&,
                         const DatabaseFixture&) = default;
};

struct Turn {
  std::string question;
  std::vector<std::string> paraphrases;
  std::string gold_query;
  bool order_sensitive = false;
  std::string notes;

  friend bool operator==(const Turn&, const Turn&) = default;
};

inline constexpr std::string_view kImplicitIntentTag = "implicit-intent";

struct TestCase {
  std::string case_id;
  Level tier = Level::kI;
  std::string db_id;
  std::vector<Turn> turns;
  std::set<Regime> consistency_regimes;
  std::vector<std::string> tags;

  bool HasTag(std::string_view tag) const;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct SettingsProfile {
  std::string profile_id;
  // Opaque generation parameters passed through to the SUT.
  nlohmann::json params = nlohmann::json::object();
  bool is_default = false;

  friend bool operator==(const SettingsProfile&,
                         const SettingsProfile&) = default;
};

struct TestSuite {
  std::string suite_id;
  std::string name;
  std::map<std::string, DatabaseFixture> databases;
  // Sorted by (tier, case_id) after loading.
  std::vector<TestCase> cases;
  std::vector<SettingsProfile> settings_variants;
  int repeat_count = 5;

  const DatabaseFixture& Fixture(const std::string& db_id) const;
  const SettingsProfile& DefaultProfile() const;
  std::vector<const TestCase*> CasesInTier(Level tier) const;

  friend bool operator==(const TestSuite&, const TestSuite&) = default;
};

// Reads the suite directory layout:
//   suite.json
//   databases/<db_id>/schema.sql, databases/<db_id>/data.sql
//   cases/<tier>/<case_id>.json
// Throws LoadError with file and field location on missing files, malformed
// records, dangling db references, duplicate case ids, or shape violations
// that make the suite unusable.
TestSuite LoadSuite(const std::filesystem::path& dir);

// Writes `suite` in the same layout. LoadSuite(dir) == suite afterwards.
void RenderSuite(const TestSuite& suite, const std::filesystem::path& dir);

struct Finding {
  std::string case_id;  // empty for suite-level findings
  std::optional<size_t> turn;
  std::string kind;  // e.g. gold-parse-failure, tier-shape
  std::string detail;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Executes every fixture and gold query on fresh databases and checks the
// structural invariants. Empty result means the suite is valid.
std::vector<Finding> ValidateSuite(const TestSuite& suite);

// A fresh, isolated, read-only database seeded from the fixture scripts.
// Throws ProvisionError with the offending statement.
Database Provision(const DatabaseFixture& fixture);

}  // namespace ttq

#endif  // TTQ_SUITE_H_
