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

#ifndef TTQ_RUN_LOG_H_
#define TTQ_RUN_LOG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ttq {

enum class LogDirection { kRequest, kResponse, kDecision };

std::string_view DirectionName(LogDirection direction);

struct LogEntry {
  int64_t entry_id = 0;
  std::string timestamp;
  // Session the SUT reported for this exchange; empty if none.
  std::string session_id;
  std::string case_id;
  size_t turn_index = 0;
  // RecordKey::ToString() of the generation this entry belongs to.
  std::string record_id;
  LogDirection direction = LogDirection::kRequest;
  // Trace step for decision entries.
  std::optional<int> step_index;
  std::string payload_digest;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

// Append-only sequence with strictly increasing entry ids. Not synchronized;
// the owner serializes appends.
class RunLog {
 public:
  // Assigns the next entry id and returns it.
  int64_t Append(LogEntry entry);

  const std::vector<LogEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  // Removes the entry with `entry_id`; returns false if absent.
  bool Remove(int64_t entry_id);

  std::string ToJsonl() const;
  // Throws LoadError naming the line on malformed input or ids that do not
  // strictly increase.
  static RunLog FromJsonl(std::string_view text);
  static RunLog Read(const std::filesystem::path& path);

  friend bool operator==(const RunLog&, const RunLog&) = default;

 private:
  std::vector<LogEntry> entries_;
};

}  // namespace ttq

#endif  // TTQ_RUN_LOG_H_
