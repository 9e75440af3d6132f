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

#ifndef TTQ_FIXTURES_H_
#define TTQ_FIXTURES_H_

#include <functional>
#include <map>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttq/adapter.h"
#include "ttq/suite.h"

namespace ttq {

using ReplayEntries = std::map<RecordKey, nlohmann::json>;

// Executes and returns a single NULL cell, which no bundled gold query
// produces.
inline constexpr std::string_view kBrokenQuery = "SELECT NULL AS broken";

// Every key the harness can request for `suite`: all turns of all cases
// crossed with every settings profile, the canonical question and each
// paraphrase, and sample indices 0..repeat_count-1.
std::vector<RecordKey> AllKeys(const TestSuite& suite);

// Gold query for the key's turn plus a synthetic explanation, a contiguous
// trace and metadata carrying session_id and one decision_log entry per
// trace step.
nlohmann::json GoldenResponse(const TestSuite& suite, const RecordKey& key);

ReplayEntries GoldenReplay(const TestSuite& suite);

// Replaces the query of every matching entry with kBrokenQuery.
void BreakEntries(ReplayEntries* entries,
                  const std::function<bool(const RecordKey&)>& match);

// Removes `field` ("explanation", "trace" or "metadata") from every
// response.
void StripField(ReplayEntries* entries, std::string_view field);

}  // namespace ttq

#endif  // TTQ_FIXTURES_H_
