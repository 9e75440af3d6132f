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

#include "ttq/adapter.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "ttq/error.h"

namespace ttq {

namespace fs = std::filesystem;
using nlohmann::json;
using Millis = std::chrono::milliseconds;

// --- keys, requests, records ---

std::string RecordKey::ToString() const {
  return case_id + "/" + std::to_string(turn_index) + "/" + profile_id + "/" +
         std::to_string(paraphrase_index) + "/" +
         std::to_string(sample_index);
}

json RecordKey::ToJson() const {
  return {{"case_id", case_id},
          {"turn_index", turn_index},
          {"profile_id", profile_id},
          {"paraphrase_index", paraphrase_index},
          {"sample_index", sample_index}};
}

RecordKey RecordKey::FromJson(const json& j) {
  RecordKey key;
  key.case_id = j.at("case_id").get<std::string>();
  key.turn_index = j.at("turn_index").get<size_t>();
  key.profile_id = j.at("profile_id").get<std::string>();
  key.paraphrase_index = j.at("paraphrase_index").get<size_t>();
  key.sample_index = j.at("sample_index").get<int>();
  if (key.sample_index < 0) throw std::invalid_argument("negative sample_index");
  return key;
}

RecordKey GenerationRequest::key() const {
  return {case_id, turn_index, profile_id, paraphrase_index, sample_index};
}

json GenerationRequest::ToJson() const {
  json hist = json::array();
  for (const HistoryEntry& h : history) {
    hist.push_back({{"question", h.question}, {"query", h.query}});
  }
  return {{"suite_id", suite_id},
          {"case_id", case_id},
          {"turn_index", turn_index},
          {"question", question},
          {"schema_ddl", schema_ddl},
          {"history", std::move(hist)},
          {"profile_id", profile_id},
          {"settings", settings},
          {"paraphrase_index", paraphrase_index},
          {"sample_index", sample_index}};
}

json GenerationRecord::ResponseJson() const {
  json out = {{"query", query}};
  if (explanation) out["explanation"] = *explanation;
  if (trace) {
    json steps = json::array();
    for (const TraceStep& s : *trace) {
      json js = {{"step", s.step_index}, {"description", s.description}};
      if (s.query) js["query"] = *s.query;
      steps.push_back(std::move(js));
    }
    out["trace"] = std::move(steps);
  }
  if (!metadata.empty()) out["metadata"] = metadata;
  return out;
}

void ApplyResponse(const json& response, GenerationRecord* record) {
  if (!response.is_object()) {
    throw std::invalid_argument("response must be a JSON object");
  }
  auto q = response.find("query");
  if (q == response.end() || !q->is_string()) {
    throw std::invalid_argument("response.query must be a string");
  }
  record->query = q->get<std::string>();
  record->explanation.reset();
  record->trace.reset();
  record->metadata = json::object();
  if (auto e = response.find("explanation"); e != response.end() && !e->is_null()) {
    if (!e->is_string()) {
      throw std::invalid_argument("response.explanation must be a string");
    }
    record->explanation = e->get<std::string>();
  }
  if (auto t = response.find("trace"); t != response.end() && !t->is_null()) {
    if (!t->is_array()) throw std::invalid_argument("response.trace must be an array");
    std::vector<TraceStep> steps;
    for (const json& js : *t) {
      if (!js.is_object() || !js.contains("step") ||
          !js["step"].is_number_integer() || !js.contains("description") ||
          !js["description"].is_string()) {
        throw std::invalid_argument(
            "trace steps need an integer step and a description");
      }
      TraceStep step;
      step.step_index = js["step"].get<int>();
      step.description = js["description"].get<std::string>();
      if (js.contains("query") && !js["query"].is_null()) {
        step.query = js["query"].get<std::string>();
      }
      steps.push_back(std::move(step));
    }
    record->trace = std::move(steps);
  }
  if (auto m = response.find("metadata"); m != response.end() && !m->is_null()) {
    if (!m->is_object()) {
      throw std::invalid_argument("response.metadata must be an object");
    }
    record->metadata = *m;
  }
}

// --- descriptor ---

std::string_view SutKindName(SutDescriptor::Kind kind) {
  switch (kind) {
    case SutDescriptor::Kind::kHttp:
      return "http";
    case SutDescriptor::Kind::kProcess:
      return "process";
    case SutDescriptor::Kind::kReplay:
      return "replay";
  }
  return "unknown";
}

void SutDescriptor::Validate() const {
  int populated = !endpoint.empty() + !command.empty() + !replay_path.empty();
  if (populated != 1) {
    throw UsageError(
        "SUT descriptor must populate exactly one of endpoint, command, "
        "replay");
  }
  bool consistent = (kind == Kind::kHttp && !endpoint.empty()) ||
                    (kind == Kind::kProcess && !command.empty()) ||
                    (kind == Kind::kReplay && !replay_path.empty());
  if (!consistent) {
    throw UsageError("SUT descriptor details do not match kind " +
                     std::string(SutKindName(kind)));
  }
  if (max_in_flight < 1) throw UsageError("max_in_flight must be >= 1");
  if (timeout.count() <= 0) throw UsageError("timeout must be positive");
  if (retry.max_attempts < 1) throw UsageError("retry.max_attempts must be >= 1");
}

json SutDescriptor::Summary() const {
  json out = {{"kind", std::string(SutKindName(kind))},
              {"max_in_flight", max_in_flight},
              {"timeout_ms", timeout.count()},
              {"retry_attempts", retry.max_attempts}};
  switch (kind) {
    case Kind::kHttp:
      out["endpoint"] = endpoint;
      break;
    case Kind::kProcess:
      out["command"] = command.empty() ? "" : fs::path(command[0]).filename().string();
      break;
    case Kind::kReplay:
      out["replay"] = replay_path.filename().string();
      break;
  }
  out["manifest"] = manifest_path ? manifest_path->filename().string() : "";
  return out;
}

SutDescriptor LoadSutDescriptor(const fs::path& path) {
  SutDescriptor d;
  if (path.extension() == ".jsonl") {
    if (!fs::exists(path)) throw LoadError(path.string(), "replay file not found");
    d.kind = SutDescriptor::Kind::kReplay;
    d.replay_path = path;
    return d;
  }
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "SUT descriptor not found");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(path.string(), std::string("malformed JSON: ") + e.what());
  }
  fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "http") {
      d.kind = SutDescriptor::Kind::kHttp;
    } else if (kind == "process") {
      d.kind = SutDescriptor::Kind::kProcess;
    } else if (kind == "replay") {
      d.kind = SutDescriptor::Kind::kReplay;
    } else {
      throw LoadError(path.string() + ": kind", "unknown SUT kind " + kind);
    }
    if (j.contains("endpoint")) d.endpoint = j["endpoint"].get<std::string>();
    if (j.contains("command")) {
      d.command = j["command"].get<std::vector<std::string>>();
    }
    if (j.contains("replay")) d.replay_path = resolve(j["replay"].get<std::string>());
    if (j.contains("manifest")) d.manifest_path = resolve(j["manifest"].get<std::string>());
    d.max_in_flight = j.value("max_in_flight", d.max_in_flight);
    d.timeout = Millis(j.value("timeout_ms", static_cast<int64_t>(d.timeout.count())));
    if (j.contains("retry")) {
      const json& r = j["retry"];
      d.retry.max_attempts = r.value("max_attempts", d.retry.max_attempts);
      d.retry.backoff =
          Millis(r.value("backoff_ms", static_cast<int64_t>(d.retry.backoff.count())));
    }
  } catch (const json::exception& e) {
    throw LoadError(path.string(), e.what());
  }
  try {
    d.Validate();
  } catch (const UsageError& e) {
    throw LoadError(path.string(), e.what());
  }
  return d;
}

// --- replay ---

ReplaySut::ReplaySut(std::map<RecordKey, json> entries)
    : entries_(std::move(entries)) {}

std::unique_ptr<ReplaySut> ReplaySut::Load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "replay file not found");
  std::map<RecordKey, json> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      RecordKey key = RecordKey::FromJson(j.at("key"));
      const json& response = j.at("response");
      GenerationRecord probe;
      ApplyResponse(response, &probe);
      if (!entries.emplace(key, response).second) {
        throw LoadError(where, "duplicate key " + key.ToString());
      }
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError(where, e.what());
    }
  }
  return std::make_unique<ReplaySut>(std::move(entries));
}

GenerationRecord ReplaySut::Generate(const GenerationRequest& request) {
  GenerationRecord record;
  record.request = request;
  record.adapter_kind = "replay";
  auto it = entries_.find(request.key());
  if (it == entries_.end()) {
    record.error = "no recorded sample";
    return record;
  }
  ApplyResponse(it->second, &record);
  return record;
}

std::string RenderReplay(const std::map<RecordKey, json>& entries) {
  std::string out;
  for (const auto& [key, response] : entries) {
    json line = {{"key", key.ToJson()}, {"response", response}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

namespace {

// --- http ---

class HttpSut : public Sut {
 public:
  explicit HttpSut(const SutDescriptor& d) : descriptor_(d) {
    std::string url = d.endpoint;
    auto scheme_end = url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    size_t path_start = url.find('/', host_start);
    base_ = path_start == std::string::npos ? url : url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  }

  GenerationRecord Generate(const GenerationRequest& request) override {
    GenerationRecord record;
    record.request = request;
    record.adapter_kind = "http";
    std::string body = request.ToJson().dump();
    auto start = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt < descriptor_.retry.max_attempts; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(descriptor_.retry.backoff * attempt);
      httplib::Client client(base_);
      auto secs = std::chrono::duration_cast<std::chrono::seconds>(descriptor_.timeout);
      auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
          descriptor_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      httplib::Headers headers;
      if (!descriptor_.auth_token.empty()) {
        headers.emplace("Authorization", "Bearer " + descriptor_.auth_token);
      }
      auto res = client.Post(path_, headers, body, "application/json");
      if (!res) {
        last_error = "http error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "http status " + std::to_string(res->status);
        continue;
      }
      try {
        ApplyResponse(json::parse(res->body), &record);
        record.latency = std::chrono::duration_cast<Millis>(
            std::chrono::steady_clock::now() - start);
        return record;
      } catch (const std::exception& e) {
        last_error = std::string("bad response: ") + e.what();
      }
    }
    record.query.clear();
    record.error = last_error;
    record.latency = std::chrono::duration_cast<Millis>(
        std::chrono::steady_clock::now() - start);
    return record;
  }

  std::string_view kind() const override { return "http"; }
  int max_in_flight() const override { return descriptor_.max_in_flight; }

 private:
  SutDescriptor descriptor_;
  std::string base_;
  std::string path_;
};

// --- process ---

// One child speaking line-delimited JSON on stdin/stdout.
class ProcessChannel {
 public:
  static std::unique_ptr<ProcessChannel> Spawn(
      const std::vector<std::string>& command) {
    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) return nullptr;
    if (pipe2(from_child, O_CLOEXEC) != 0) {
      close(to_child[0]);
      close(to_child[1]);
      return nullptr;
    }
    std::vector<char*> argv;
    for (const std::string& arg : command) {
      argv.push_back(const_cast<char*>(arg.c_str()));
    }
    argv.push_back(nullptr);
    pid_t pid = fork();
    if (pid < 0) {
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
        close(fd);
      }
      return nullptr;
    }
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    return std::unique_ptr<ProcessChannel>(
        new ProcessChannel(pid, to_child[1], from_child[0]));
  }

  ~ProcessChannel() {
    close(in_fd_);
    close(out_fd_);
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
  }

  bool WriteLine(const std::string& line) {
    std::string data = line + "\n";
    size_t written = 0;
    while (written < data.size()) {
      ssize_t n = write(in_fd_, data.data() + written, data.size() - written);
      if (n <= 0) return false;
      written += static_cast<size_t>(n);
    }
    return true;
  }

  // Empty optional on timeout or EOF.
  std::optional<std::string> ReadLine(Millis timeout) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      auto left = std::chrono::duration_cast<Millis>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) return std::nullopt;
      pollfd pfd{out_fd_, POLLIN, 0};
      int ready = poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready <= 0) {
        if (ready < 0 && errno == EINTR) continue;
        return std::nullopt;
      }
      char chunk[4096];
      ssize_t n = read(out_fd_, chunk, sizeof(chunk));
      if (n <= 0) return std::nullopt;
      buffer_.append(chunk, static_cast<size_t>(n));
    }
  }

 private:
  ProcessChannel(pid_t pid, int in_fd, int out_fd)
      : pid_(pid), in_fd_(in_fd), out_fd_(out_fd) {}

  pid_t pid_;
  int in_fd_;
  int out_fd_;
  std::string buffer_;
};

class ProcessSut : public Sut {
 public:
  explicit ProcessSut(const SutDescriptor& d) : descriptor_(d) {
    signal(SIGPIPE, SIG_IGN);
  }

  GenerationRecord Generate(const GenerationRequest& request) override {
    GenerationRecord record;
    record.request = request;
    record.adapter_kind = "process";
    std::string line = request.ToJson().dump();
    auto start = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt < descriptor_.retry.max_attempts; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(descriptor_.retry.backoff * attempt);
      std::unique_ptr<ProcessChannel> channel = Acquire();
      if (!channel) {
        last_error = "cannot start process";
        Release(nullptr);
        continue;
      }
      if (!channel->WriteLine(line)) {
        last_error = "process closed its input";
        Release(nullptr);
        continue;
      }
      std::optional<std::string> reply = channel->ReadLine(descriptor_.timeout);
      if (!reply) {
        last_error = "process timed out or exited";
        Release(nullptr);  // the child is killed with the channel
        continue;
      }
      try {
        ApplyResponse(json::parse(*reply), &record);
        Release(std::move(channel));
        record.latency = std::chrono::duration_cast<Millis>(
            std::chrono::steady_clock::now() - start);
        return record;
      } catch (const std::exception& e) {
        last_error = std::string("bad response: ") + e.what();
        Release(std::move(channel));
      }
    }
    record.query.clear();
    record.error = last_error;
    record.latency = std::chrono::duration_cast<Millis>(
        std::chrono::steady_clock::now() - start);
    return record;
  }

  std::string_view kind() const override { return "process"; }
  int max_in_flight() const override { return descriptor_.max_in_flight; }

 private:
  std::unique_ptr<ProcessChannel> Acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !idle_.empty() || live_ < descriptor_.max_in_flight; });
    if (!idle_.empty()) {
      auto channel = std::move(idle_.back());
      idle_.pop_back();
      return channel;
    }
    ++live_;
    lock.unlock();
    return ProcessChannel::Spawn(descriptor_.command);
  }

  // A null channel means the slot is gone (dead or never started).
  void Release(std::unique_ptr<ProcessChannel> channel) {
    std::lock_guard lock(mu_);
    if (channel) {
      idle_.push_back(std::move(channel));
    } else {
      --live_;
    }
    cv_.notify_one();
  }

  SutDescriptor descriptor_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<ProcessChannel>> idle_;
  int live_ = 0;
};

}  // namespace

std::unique_ptr<Sut> MakeSut(const SutDescriptor& descriptor) {
  descriptor.Validate();
  switch (descriptor.kind) {
    case SutDescriptor::Kind::kHttp:
      return std::make_unique<HttpSut>(descriptor);
    case SutDescriptor::Kind::kProcess:
      return std::make_unique<ProcessSut>(descriptor);
    case SutDescriptor::Kind::kReplay:
      return ReplaySut::Load(descriptor.replay_path);
  }
  throw UsageError("unknown SUT kind");
}

}  // namespace ttq
