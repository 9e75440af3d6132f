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

// Regenerates replays/ from the bundled suites:
//   ttq_make_fixtures <repo-root>

#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include "ttq/cli.h"
#include "ttq/fixtures.h"
#include "ttq/suite.h"

namespace fs = std::filesystem;

namespace {

void Write(const fs::path& path, const ttq::ReplayEntries& entries) {
  ttq::WriteFileAtomically(path, ttq::RenderReplay(entries));
  std::cout << path.string() << ": " << entries.size() << " entries\n";
}

ttq::ReplayEntries Broken(ttq::ReplayEntries entries,
                          const std::function<bool(const ttq::RecordKey&)>& m) {
  ttq::BreakEntries(&entries, m);
  return entries;
}

bool InCases(const ttq::RecordKey& key, const std::set<std::string>& ids) {
  return ids.contains(key.case_id);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: ttq_make_fixtures <repo-root>\n";
    return 1;
  }
  fs::path root = argv[1];
  try {
    ttq::TestSuite les = ttq::LoadSuite(root / "suites" / "les-demo");
    ttq::ReplayEntries golden = ttq::GoldenReplay(les);
    fs::path out = root / "replays" / "les-demo";
    Write(out / "golden.jsonl", golden);

    ttq::ReplayEntries no_explanations = golden;
    ttq::StripField(&no_explanations, "explanation");
    Write(out / "no-explanations.jsonl", no_explanations);

    ttq::ReplayEntries no_traces = golden;
    ttq::StripField(&no_traces, "trace");
    Write(out / "no-traces.jsonl", no_traces);

    Write(out / "tier-ii-broken.jsonl", Broken(golden, [](const auto& k) {
            return k.case_id == "west-top-products";
          }));

    ttq::TestSuite boundary = ttq::LoadSuite(root / "suites" / "boundary");
    ttq::ReplayEntries bgold = ttq::GoldenReplay(boundary);
    fs::path bout = root / "replays" / "boundary";
    Write(bout / "golden.jsonl", bgold);
    Write(bout / "accuracy-i-6of10.jsonl", Broken(bgold, [](const auto& k) {
            return InCases(k, {"b-i-07", "b-i-08", "b-i-09", "b-i-10"});
          }));
    Write(bout / "accuracy-i-5of10.jsonl", Broken(bgold, [](const auto& k) {
            return InCases(k, {"b-i-06", "b-i-07", "b-i-08", "b-i-09",
                               "b-i-10"});
          }));
    Write(bout / "accuracy-iv-9of10.jsonl", Broken(bgold, [](const auto& k) {
            return k.case_id == "b-iv-10";
          }));

    auto identical = [](const ttq::RecordKey& k, int first_broken) {
      return InCases(k, {"b-i-01", "b-i-02"}) && k.profile_id == "default" &&
             k.paraphrase_index == 0 && k.sample_index >= first_broken;
    };
    Write(bout / "identical-4of5.jsonl", Broken(bgold, [&](const auto& k) {
            return identical(k, 4);
          }));
    Write(bout / "identical-3of5.jsonl", Broken(bgold, [&](const auto& k) {
            return identical(k, 3);
          }));
    Write(bout / "linguistic-3of5.jsonl", Broken(bgold, [](const auto& k) {
            return InCases(k, {"b-i-01", "b-i-02"}) &&
                   k.profile_id == "default" && k.sample_index == 0 &&
                   k.paraphrase_index >= 3;
          }));
    Write(bout / "linguistic-9of10.jsonl", Broken(bgold, [](const auto& k) {
            return k.case_id == "b-i-02" && k.profile_id == "default" &&
                   k.sample_index == 0 && k.paraphrase_index == 4;
          }));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
