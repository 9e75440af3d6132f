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

#include "ttq/runner.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ttq/digest.h"
#include "ttq/error.h"

namespace ttq {

EvaluationSession::EvaluationSession(const TestSuite& suite, Sut& sut,
                                     SessionOptions options)
    : suite_(suite),
      sut_(sut),
      options_(options),
      clock_(options.clock ? options.clock : &system_clock_) {
  if (options_.concurrency < 1) throw UsageError("concurrency must be >= 1");
  for (const TestCase& tc : suite_.cases) cases_[tc.case_id] = &tc;
}

const TestCase& EvaluationSession::Case(const std::string& case_id) const {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error("unknown case " + case_id);
  return *it->second;
}

GenerationRequest EvaluationSession::MakeRequest(
    const TestCase& test_case, size_t turn_index,
    const SettingsProfile& profile, size_t paraphrase_index,
    int sample_index) const {
  const Turn& turn = test_case.turns.at(turn_index);
  GenerationRequest req;
  req.suite_id = suite_.suite_id;
  req.case_id = test_case.case_id;
  req.turn_index = turn_index;
  req.question = paraphrase_index == 0
                     ? turn.question
                     : turn.paraphrases.at(paraphrase_index - 1);
  req.schema_ddl = suite_.Fixture(test_case.db_id).schema_script;
  for (size_t i = 0; i < turn_index; ++i) {
    req.history.push_back(
        {test_case.turns[i].question, test_case.turns[i].gold_query});
  }
  req.profile_id = profile.profile_id;
  req.settings = profile.params;
  req.paraphrase_index = paraphrase_index;
  req.sample_index = sample_index;
  return req;
}

Outcome EvaluationSession::Evaluate(const GenerationRequest& request) const {
  Outcome outcome;
  outcome.requested_at = clock_->Now();
  outcome.record = sut_.Generate(request);
  outcome.responded_at = clock_->Now();
  const TestCase& tc = Case(request.case_id);
  const Turn& turn = tc.turns.at(request.turn_index);
  if (outcome.record.failed()) {
    outcome.verdict.status = VerdictStatus::kGenParseError;
    outcome.verdict.diagnostics = "no generation: " + outcome.record.error;
    return outcome;
  }
  outcome.verdict =
      Equivalent(suite_.Fixture(tc.db_id), outcome.record.query,
                 turn.gold_query, turn.order_sensitive, options_.limits);
  return outcome;
}

std::vector<const Outcome*> EvaluationSession::Run(
    const std::vector<GenerationRequest>& requests) {
  // Unseen keys, grouped into chains that must run in turn order.
  struct ChainKey {
    std::string case_id;
    std::string profile_id;
    size_t paraphrase_index;
    int sample_index;
    auto operator<=>(const ChainKey&) const = default;
  };
  std::map<ChainKey, std::map<size_t, const GenerationRequest*>> chains;
  for (const GenerationRequest& req : requests) {
    if (outcomes_.contains(req.key())) continue;
    chains[{req.case_id, req.profile_id, req.paraphrase_index,
            req.sample_index}]
        .emplace(req.turn_index, &req);
  }
  std::vector<std::vector<const GenerationRequest*>> work;
  for (auto& [key, turns] : chains) {
    std::vector<const GenerationRequest*> chain;
    for (auto& [turn, req] : turns) chain.push_back(req);
    work.push_back(std::move(chain));
  }

  std::vector<std::vector<Outcome>> results(work.size());
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      try {
        for (const GenerationRequest* req : work[i]) {
          results[i].push_back(Evaluate(*req));
        }
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  size_t threads = std::min<size_t>(
      {static_cast<size_t>(options_.concurrency),
       static_cast<size_t>(std::max(1, sut_.max_in_flight())), work.size()});
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<const Outcome*> fresh;
  for (auto& chain : results) {
    for (Outcome& outcome : chain) {
      RecordKey key = outcome.record.request.key();
      auto [it, inserted] =
          outcomes_.emplace(key, std::make_unique<Outcome>(std::move(outcome)));
      if (inserted) fresh.push_back(it->second.get());
    }
  }
  std::sort(fresh.begin(), fresh.end(), [](const Outcome* a, const Outcome* b) {
    return a->record.request.key() < b->record.request.key();
  });
  for (const Outcome* outcome : fresh) AppendToLog(*outcome);

  std::vector<const Outcome*> aligned;
  aligned.reserve(requests.size());
  for (const GenerationRequest& req : requests) {
    aligned.push_back(outcomes_.at(req.key()).get());
  }
  return aligned;
}

void EvaluationSession::AppendToLog(const Outcome& outcome) {
  std::lock_guard lock(log_mu_);
  const GenerationRecord& record = outcome.record;
  std::string session_id;
  if (auto it = record.metadata.find("session_id");
      it != record.metadata.end() && it->is_string()) {
    session_id = it->get<std::string>();
  }
  std::string record_id = record.request.key().ToString();
  LogEntry base;
  base.session_id = session_id;
  base.case_id = record.request.case_id;
  base.turn_index = record.request.turn_index;
  base.record_id = record_id;

  LogEntry request = base;
  request.timestamp = outcome.requested_at;
  request.direction = LogDirection::kRequest;
  request.payload_digest = Sha256Hex(record.request.ToJson().dump());
  log_.Append(std::move(request));

  LogEntry response = base;
  response.timestamp = outcome.responded_at;
  response.direction = LogDirection::kResponse;
  nlohmann::json payload = record.ResponseJson();
  if (record.failed()) payload["error"] = record.error;
  response.payload_digest = Sha256Hex(payload.dump());
  log_.Append(std::move(response));

  // Decisions the SUT reported alongside its trace.
  auto decisions = record.metadata.find("decision_log");
  if (decisions != record.metadata.end() && decisions->is_array()) {
    for (const nlohmann::json& d : *decisions) {
      if (!d.is_object() || !d.contains("step") ||
          !d["step"].is_number_integer()) {
        continue;
      }
      LogEntry decision = base;
      decision.timestamp = outcome.responded_at;
      decision.direction = LogDirection::kDecision;
      decision.step_index = d["step"].get<int>();
      decision.payload_digest = Sha256Hex(d.dump());
      log_.Append(std::move(decision));
    }
  }
}

std::vector<const Outcome*> EvaluationSession::outcomes() const {
  std::vector<const Outcome*> out;
  for (const auto& [key, outcome] : outcomes_) out.push_back(outcome.get());
  return out;
}

std::vector<GenerationRecord> EvaluationSession::records() const {
  std::vector<GenerationRecord> out;
  for (const auto& [key, outcome] : outcomes_) out.push_back(outcome->record);
  return out;
}

}  // namespace ttq
