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

#ifndef TTQ_ADAPTER_H_
#define TTQ_ADAPTER_H_

#include <chrono>
#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ttq {

// Identifies one generation. paraphrase_index 0 is the canonical question;
// 1..n are the turn's paraphrases in authored order.
struct RecordKey {
  std::string case_id;
  size_t turn_index = 0;
  std::string profile_id;
  size_t paraphrase_index = 0;
  int sample_index = 0;

  // "case/turn/profile/paraphrase/sample"
  std::string ToString() const;
  nlohmann::json ToJson() const;
  static RecordKey FromJson(const nlohmann::json& j);

  friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

struct HistoryEntry {
  std::string question;
  std::string query;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct GenerationRequest {
  std::string suite_id;
  std::string case_id;
  size_t turn_index = 0;
  std::string question;
  std::string schema_ddl;
  // Prior turns paired with their gold queries; size() == turn_index.
  std::vector<HistoryEntry> history;
  std::string profile_id;
  nlohmann::json settings = nlohmann::json::object();
  size_t paraphrase_index = 0;
  int sample_index = 0;

  RecordKey key() const;
  // Wire form sent to http and process SUTs.
  nlohmann::json ToJson() const;

  friend bool operator==(const GenerationRequest&,
                         const GenerationRequest&) = default;
};

struct TraceStep {
  int step_index = 0;
  std::string description;
  std::optional<std::string> query;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct GenerationRecord {
  GenerationRequest request;
  std::string query;
  std::optional<std::string> explanation;
  std::optional<std::vector<TraceStep>> trace;
  nlohmann::json metadata = nlohmann::json::object();
  std::chrono::milliseconds latency{0};
  std::string adapter_kind;
  // Non-empty when the SUT failed; query is empty then.
  std::string error;

  bool failed() const { return !error.empty(); }
  // Response payload as received (or replayed), without harness fields.
  nlohmann::json ResponseJson() const;
};

// Fills query/explanation/trace/metadata from a response body. Throws
// std::invalid_argument on schema violations.
void ApplyResponse(const nlohmann::json& response, GenerationRecord* record);

struct RetryPolicy {
  int max_attempts = 2;
  std::chrono::milliseconds backoff{50};
};

struct SutDescriptor {
  enum class Kind { kHttp, kProcess, kReplay };

  Kind kind = Kind::kReplay;
  std::string endpoint;              // http
  std::vector<std::string> command;  // process: argv
  std::filesystem::path replay_path;  // replay
  std::optional<std::filesystem::path> manifest_path;
  int max_in_flight = 4;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
  // Sent as "Authorization: Bearer <token>" by the http kind.
  std::string auth_token;

  // Throws UsageError unless exactly one kind's details are populated.
  void Validate() const;
  // Short, path-free description for reports.
  nlohmann::json Summary() const;
};

std::string_view SutKindName(SutDescriptor::Kind kind);

// Loads a descriptor JSON file; relative paths resolve against its
// directory. A ".jsonl" path is taken as a bare replay file.
SutDescriptor LoadSutDescriptor(const std::filesystem::path& path);

class Sut {
 public:
  virtual ~Sut() = default;
  // Never throws for SUT-side failures; those become failure records.
  // Safe to call concurrently.
  virtual GenerationRecord Generate(const GenerationRequest& request) = 0;
  virtual std::string_view kind() const = 0;
  virtual int max_in_flight() const = 0;
};

class ReplaySut : public Sut {
 public:
  // Each line: {"key": {...}, "response": {...}}. Throws LoadError with the
  // line number on malformed lines or duplicate keys.
  static std::unique_ptr<ReplaySut> Load(const std::filesystem::path& path);
  explicit ReplaySut(std::map<RecordKey, nlohmann::json> entries);

  GenerationRecord Generate(const GenerationRequest& request) override;
  std::string_view kind() const override { return "replay"; }
  int max_in_flight() const override { return 1 << 16; }

  size_t size() const { return entries_.size(); }

 private:
  std::map<RecordKey, nlohmann::json> entries_;
};

// Serializes entries in key order, one JSON object per line.
std::string RenderReplay(const std::map<RecordKey, nlohmann::json>& entries);

std::unique_ptr<Sut> MakeSut(const SutDescriptor& descriptor);

}  // namespace ttq

#endif  // TTQ_ADAPTER_H_
