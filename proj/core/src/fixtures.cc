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

#include "ttq/fixtures.h"

#include <string>

#include "ttq/error.h"

namespace ttq {

std::vector<RecordKey> AllKeys(const TestSuite& suite) {
  std::vector<RecordKey> keys;
  for (const TestCase& tc : suite.cases) {
    for (size_t t = 0; t < tc.turns.size(); ++t) {
      for (const SettingsProfile& p : suite.settings_variants) {
        for (size_t para = 0; para <= tc.turns[t].paraphrases.size(); ++para) {
          for (int k = 0; k < suite.repeat_count; ++k) {
            keys.push_back({tc.case_id, t, p.profile_id, para, k});
          }
        }
      }
    }
  }
  return keys;
}

nlohmann::json GoldenResponse(const TestSuite& suite, const RecordKey& key) {
  const TestCase* found = nullptr;
  for (const TestCase& tc : suite.cases) {
    if (tc.case_id == key.case_id) found = &tc;
  }
  if (!found || key.turn_index >= found->turns.size()) {
    throw Error("no turn for key " + key.ToString());
  }
  const Turn& turn = found->turns[key.turn_index];
  std::string context =
      key.turn_index == 0
          ? "No earlier turns."
          : "Earlier turns narrow the subject; their filters carry over.";
  nlohmann::json trace = nlohmann::json::array({
      {{"step", 1},
       {"description", "Identify the tables in " + found->db_id +
                           " that hold the requested entities."}},
      {{"step", 2}, {"description", context}},
      {{"step", 3},
       {"description", "Compose the final query."},
       {"query", turn.gold_query}},
  });
  nlohmann::json decisions = nlohmann::json::array();
  for (const nlohmann::json& step : trace) {
    decisions.push_back(
        {{"step", step["step"]}, {"detail", step["description"]}});
  }
  return {
      {"query", turn.gold_query},
      {"explanation", "Answers \"" + turn.question + "\" over " +
                          found->db_id + "."},
      {"trace", std::move(trace)},
      {"metadata",
       {{"model", "golden-replay"},
        {"session_id", "golden-" + key.case_id + "-" + key.profile_id},
        {"decision_log", std::move(decisions)}}},
  };
}

ReplayEntries GoldenReplay(const TestSuite& suite) {
  ReplayEntries entries;
  for (const RecordKey& key : AllKeys(suite)) {
    entries.emplace(key, GoldenResponse(suite, key));
  }
  return entries;
}

void BreakEntries(ReplayEntries* entries,
                  const std::function<bool(const RecordKey&)>& match) {
  for (auto& [key, response] : *entries) {
    if (match(key)) response["query"] = std::string(kBrokenQuery);
  }
}

void StripField(ReplayEntries* entries, std::string_view field) {
  for (auto& [key, response] : *entries) response.erase(std::string(field));
}

}  // namespace ttq
