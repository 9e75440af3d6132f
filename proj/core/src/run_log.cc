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

#include "ttq/run_log.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ttq/error.h"

namespace ttq {

std::string_view DirectionName(LogDirection direction) {
  switch (direction) {
    case LogDirection::kRequest:
      return "request";
    case LogDirection::kResponse:
      return "response";
    case LogDirection::kDecision:
      return "decision";
  }
  return "request";
}

int64_t RunLog::Append(LogEntry entry) {
  entry.entry_id = entries_.empty() ? 1 : entries_.back().entry_id + 1;
  entries_.push_back(std::move(entry));
  return entries_.back().entry_id;
}

bool RunLog::Remove(int64_t entry_id) {
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->entry_id == entry_id) {
      entries_.erase(it);
      return true;
    }
  }
  return false;
}

std::string RunLog::ToJsonl() const {
  std::string out;
  for (const LogEntry& e : entries_) {
    nlohmann::ordered_json j;
    j["entry_id"] = e.entry_id;
    j["timestamp"] = e.timestamp;
    j["session_id"] = e.session_id;
    j["case_id"] = e.case_id;
    j["turn_index"] = e.turn_index;
    j["record_id"] = e.record_id;
    j["direction"] = DirectionName(e.direction);
    if (e.step_index) j["step_index"] = *e.step_index;
    j["payload_digest"] = e.payload_digest;
    out += j.dump();
    out += '\n';
  }
  return out;
}

RunLog RunLog::FromJsonl(std::string_view text) {
  RunLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = "line " + std::to_string(line_no);
    LogEntry e;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      e.entry_id = j.at("entry_id").get<int64_t>();
      e.timestamp = j.at("timestamp").get<std::string>();
      e.session_id = j.value("session_id", "");
      e.case_id = j.at("case_id").get<std::string>();
      e.turn_index = j.at("turn_index").get<size_t>();
      e.record_id = j.value("record_id", "");
      std::string dir = j.at("direction").get<std::string>();
      if (dir == "request") {
        e.direction = LogDirection::kRequest;
      } else if (dir == "response") {
        e.direction = LogDirection::kResponse;
      } else if (dir == "decision") {
        e.direction = LogDirection::kDecision;
      } else {
        throw LoadError(where, "unknown direction '" + dir + "'");
      }
      if (j.contains("step_index")) e.step_index = j["step_index"].get<int>();
      e.payload_digest = j.at("payload_digest").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw LoadError(where, ex.what());
    }
    if (!log.entries_.empty() && e.entry_id <= log.entries_.back().entry_id) {
      throw LoadError(where, "entry_id " + std::to_string(e.entry_id) +
                                 " does not increase");
    }
    log.entries_.push_back(std::move(e));
  }
  return log;
}

RunLog RunLog::Read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return FromJsonl(buf.str());
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ":" + e.location(),
                    std::string(e.what()).substr(e.location().size() + 2));
  }
}

}  // namespace ttq
