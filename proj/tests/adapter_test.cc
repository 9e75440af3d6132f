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

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "httplib.h"
#include "support/test_support.h"
#include "ttq/error.h"

namespace ttq {
namespace {

using nlohmann::json;
using testing::TempDir;
using testing::WriteText;

GenerationRequest Request(const std::string& case_id, size_t turn = 0) {
  GenerationRequest r;
  r.suite_id = "s";
  r.case_id = case_id;
  r.turn_index = turn;
  r.question = "q";
  r.profile_id = "default";
  return r;
}

TEST(RecordKeyTest, StringAndJson) {
  RecordKey key{"c1", 2, "default", 3, 4};
  EXPECT_EQ(key.ToString(), "c1/2/default/3/4");
  EXPECT_EQ(RecordKey::FromJson(key.ToJson()), key);
  json bad = key.ToJson();
  bad["sample_index"] = -1;
  EXPECT_THROW(RecordKey::FromJson(bad), std::invalid_argument);
}

TEST(RecordKeyTest, OrderingIsFieldWise) {
  RecordKey a{"a", 1, "p", 0, 0};
  RecordKey b{"a", 1, "p", 0, 1};
  RecordKey c{"b", 0, "p", 0, 0};
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(ApplyResponseTest, FullResponse) {
  GenerationRecord record;
  ApplyResponse({{"query", "SELECT 1"},
                 {"explanation", "one"},
                 {"trace",
                  {{{"step", 1}, {"description", "a"}},
                   {{"step", 2}, {"description", "b"}, {"query", "SELECT 1"}}}},
                 {"metadata", {{"session_id", "s1"}}}},
                &record);
  EXPECT_EQ(record.query, "SELECT 1");
  EXPECT_EQ(record.explanation, "one");
  ASSERT_TRUE(record.trace);
  ASSERT_EQ(record.trace->size(), 2u);
  EXPECT_FALSE((*record.trace)[0].query);
  EXPECT_EQ((*record.trace)[1].query, "SELECT 1");
  EXPECT_EQ(record.metadata["session_id"], "s1");
  EXPECT_EQ(record.ResponseJson()["trace"][1]["step"], 2);
}

TEST(ApplyResponseTest, SchemaViolations) {
  GenerationRecord record;
  EXPECT_THROW(ApplyResponse(json::array(), &record), std::invalid_argument);
  EXPECT_THROW(ApplyResponse({{"explanation", "x"}}, &record),
               std::invalid_argument);
  EXPECT_THROW(ApplyResponse({{"query", 1}}, &record), std::invalid_argument);
  EXPECT_THROW(ApplyResponse({{"query", "q"}, {"trace", "x"}}, &record),
               std::invalid_argument);
  EXPECT_THROW(
      ApplyResponse({{"query", "q"}, {"trace", {{{"step", "1"}}}}}, &record),
      std::invalid_argument);
  EXPECT_THROW(ApplyResponse({{"query", "q"}, {"metadata", 3}}, &record),
               std::invalid_argument);
}

TEST(ApplyResponseTest, NullOptionalFieldsAreAbsent) {
  GenerationRecord record;
  ApplyResponse({{"query", "q"}, {"explanation", nullptr}, {"trace", nullptr}},
                &record);
  EXPECT_FALSE(record.explanation);
  EXPECT_FALSE(record.trace);
  EXPECT_EQ(record.ResponseJson(), json({{"query", "q"}}));
}

TEST(SutDescriptorTest, Validate) {
  SutDescriptor d;
  EXPECT_THROW(d.Validate(), UsageError);
  d.replay_path = "x.jsonl";
  EXPECT_NO_THROW(d.Validate());
  d.endpoint = "http://localhost:1";
  EXPECT_THROW(d.Validate(), UsageError);
  d.replay_path.clear();
  EXPECT_THROW(d.Validate(), UsageError);  // kind still replay
  d.kind = SutDescriptor::Kind::kHttp;
  EXPECT_NO_THROW(d.Validate());
  d.max_in_flight = 0;
  EXPECT_THROW(d.Validate(), UsageError);
}

TEST(SutDescriptorTest, LoadResolvesRelativePaths) {
  TempDir dir;
  WriteText(dir / "r.jsonl", "");
  WriteText(dir / "sut.json",
            R"({"kind": "replay", "replay": "r.jsonl", "manifest": "m.json",
                "max_in_flight": 3, "timeout_ms": 250,
                "retry": {"max_attempts": 4, "backoff_ms": 1}})");
  SutDescriptor d = LoadSutDescriptor(dir / "sut.json");
  EXPECT_EQ(d.kind, SutDescriptor::Kind::kReplay);
  EXPECT_EQ(d.replay_path, dir / "r.jsonl");
  EXPECT_EQ(d.manifest_path, dir / "m.json");
  EXPECT_EQ(d.max_in_flight, 3);
  EXPECT_EQ(d.timeout.count(), 250);
  EXPECT_EQ(d.retry.max_attempts, 4);
  json summary = d.Summary();
  EXPECT_EQ(summary["replay"], "r.jsonl");
  EXPECT_EQ(summary["manifest"], "m.json");
}

TEST(SutDescriptorTest, LoadErrors) {
  TempDir dir;
  EXPECT_THROW(LoadSutDescriptor(dir / "missing.json"), LoadError);
  EXPECT_THROW(LoadSutDescriptor(dir / "missing.jsonl"), LoadError);
  WriteText(dir / "bad.json", "{");
  EXPECT_THROW(LoadSutDescriptor(dir / "bad.json"), LoadError);
  WriteText(dir / "kind.json", R"({"kind": "carrier-pigeon"})");
  EXPECT_THROW(LoadSutDescriptor(dir / "kind.json"), LoadError);
  WriteText(dir / "two.json",
            R"({"kind": "http", "endpoint": "http://x", "command": ["a"]})");
  EXPECT_THROW(LoadSutDescriptor(dir / "two.json"), LoadError);
}

TEST(ReplaySutTest, RoundTripAndMissingKey) {
  std::map<RecordKey, json> entries;
  entries[Request("a").key()] = testing::QueryOnly("SELECT 1");
  entries[Request("b").key()] = {{"query", "SELECT 2"}, {"explanation", "e"}};
  TempDir dir;
  WriteText(dir / "r.jsonl", RenderReplay(entries));
  auto sut = ReplaySut::Load(dir / "r.jsonl");
  EXPECT_EQ(sut->size(), 2u);
  GenerationRecord b = sut->Generate(Request("b"));
  EXPECT_EQ(b.query, "SELECT 2");
  EXPECT_EQ(b.explanation, "e");
  EXPECT_EQ(b.adapter_kind, "replay");
  GenerationRecord c = sut->Generate(Request("c"));
  EXPECT_TRUE(c.failed());
}

TEST(ReplaySutTest, LoadErrorsNameTheLine) {
  TempDir dir;
  std::string good = RenderReplay({{Request("a").key(), {{"query", "x"}}}});
  WriteText(dir / "dup.jsonl", good + good);
  try {
    ReplaySut::Load(dir / "dup.jsonl");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.location(), "dup.jsonl:2");
  }
  WriteText(dir / "bad.jsonl", good + "\n{\"key\": 1}\n");
  try {
    ReplaySut::Load(dir / "bad.jsonl");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_EQ(e.location(), "bad.jsonl:3");
  }
}

class HttpSutTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/generate", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      ++hits_;
      last_auth_ = req.get_header_value("Authorization");
      json body = json::parse(req.body);
      std::string case_id = body["case_id"];
      if (case_id == "slow") {
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
      } else if (case_id == "error") {
        res.status = 500;
        return;
      } else if (case_id == "garbage") {
        res.set_content("nope", "text/plain");
        return;
      }
      res.set_content(json({{"query", "SELECT '" + case_id + "'"}}).dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  std::unique_ptr<Sut> Make() {
    SutDescriptor d;
    d.kind = SutDescriptor::Kind::kHttp;
    d.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/generate";
    d.timeout = std::chrono::milliseconds(150);
    d.retry = {2, std::chrono::milliseconds(1)};
    d.auth_token = "secret";
    return MakeSut(d);
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_auth_;
};

TEST_F(HttpSutTest, Success) {
  GenerationRecord r = Make()->Generate(Request("ok"));
  EXPECT_FALSE(r.failed()) << r.error;
  EXPECT_EQ(r.query, "SELECT 'ok'");
  EXPECT_EQ(r.adapter_kind, "http");
  EXPECT_EQ(last_auth_, "Bearer secret");
}

TEST_F(HttpSutTest, TimeoutRetriesThenFails) {
  GenerationRecord r = Make()->Generate(Request("slow"));
  EXPECT_TRUE(r.failed());
  EXPECT_TRUE(r.query.empty());
  EXPECT_EQ(hits_.load(), 2);
}

TEST_F(HttpSutTest, StatusAndBodyErrors) {
  auto sut = Make();
  GenerationRecord e = sut->Generate(Request("error"));
  EXPECT_EQ(e.error, "http status 500");
  GenerationRecord g = sut->Generate(Request("garbage"));
  EXPECT_NE(g.error.find("bad response"), std::string::npos);
}

TEST(HttpSutUnreachableTest, ConnectionRefused) {
  SutDescriptor d;
  d.kind = SutDescriptor::Kind::kHttp;
  d.endpoint = "http://127.0.0.1:1/x";
  d.timeout = std::chrono::milliseconds(100);
  d.retry = {1, std::chrono::milliseconds(1)};
  EXPECT_TRUE(MakeSut(d)->Generate(Request("a")).failed());
}

SutDescriptor ProcessDescriptor(const std::string& mode) {
  SutDescriptor d;
  d.kind = SutDescriptor::Kind::kProcess;
  d.command = {TTQ_PROCESS_STUB, mode};
  d.timeout = std::chrono::milliseconds(300);
  d.retry = {2, std::chrono::milliseconds(1)};
  d.max_in_flight = 2;
  return d;
}

TEST(ProcessSutTest, EchoReusesChildren) {
  auto sut = MakeSut(ProcessDescriptor("echo"));
  for (size_t turn = 0; turn < 5; ++turn) {
    GenerationRecord r = sut->Generate(Request("c", turn));
    ASSERT_FALSE(r.failed()) << r.error;
    EXPECT_EQ(r.query, "SELECT " + std::to_string(turn));
    EXPECT_EQ(r.metadata["session_id"], "stub");
  }
}

TEST(ProcessSutTest, ConcurrentCalls) {
  auto sut = MakeSut(ProcessDescriptor("echo"));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&, i] {
      if (sut->Generate(Request("c", i)).query == "SELECT " + std::to_string(i)) {
        ++ok;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 6);
}

TEST(ProcessSutTest, FailuresBecomeRecords) {
  for (const char* mode : {"silent", "garbage", "crash"}) {
    GenerationRecord r = MakeSut(ProcessDescriptor(mode))->Generate(Request("c"));
    EXPECT_TRUE(r.failed()) << mode;
    EXPECT_TRUE(r.query.empty()) << mode;
  }
}

TEST(ProcessSutTest, MissingExecutable) {
  SutDescriptor d = ProcessDescriptor("echo");
  d.command = {"/nonexistent/ttq-sut"};
  EXPECT_TRUE(MakeSut(d)->Generate(Request("c")).failed());
}

}  // namespace
}  // namespace ttq
