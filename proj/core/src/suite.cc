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

#include "ttq/suite.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ttq/error.h"
#include "ttq/sql_parser.h"

namespace ttq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string ReadFile(const fs::path& path, const std::string& display) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(display, "missing or unreadable");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

json ParseJson(const std::string& text, const std::string& display) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(display, std::string("malformed JSON: ") + e.what());
  }
}

// Field access that reports "file: field" on failure.
class Fields {
 public:
  Fields(const json& object, std::string file, std::string prefix = "")
      : object_(object), file_(std::move(file)), prefix_(std::move(prefix)) {
    if (!object_.is_object()) throw LoadError(Where(""), "expected an object");
  }

  std::string Where(const std::string& field) const {
    std::string path = prefix_.empty() ? field
                       : field.empty() ? prefix_
                                       : prefix_ + "." + field;
    return path.empty() ? file_ : file_ + ": " + path;
  }

  const json& Required(const std::string& field) const {
    auto it = object_.find(field);
    if (it == object_.end()) throw LoadError(Where(field), "missing field");
    return *it;
  }

  std::string String(const std::string& field) const {
    const json& v = Required(field);
    if (!v.is_string()) throw LoadError(Where(field), "expected a string");
    return v.get<std::string>();
  }

  std::string NonEmptyString(const std::string& field) const {
    std::string s = String(field);
    if (s.empty()) throw LoadError(Where(field), "must not be empty");
    return s;
  }

  std::vector<std::string> StringList(const std::string& field,
                                      bool required) const {
    std::vector<std::string> out;
    auto it = object_.find(field);
    if (it == object_.end()) {
      if (required) throw LoadError(Where(field), "missing field");
      return out;
    }
    if (!it->is_array()) throw LoadError(Where(field), "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) {
        throw LoadError(Where(field + "[" + std::to_string(i) + "]"),
                        "expected a string");
      }
      out.push_back((*it)[i].get<std::string>());
    }
    return out;
  }

  bool Bool(const std::string& field, bool fallback) const {
    auto it = object_.find(field);
    if (it == object_.end()) return fallback;
    if (!it->is_boolean()) throw LoadError(Where(field), "expected a boolean");
    return it->get<bool>();
  }

  const json& object() const { return object_; }
  const std::string& file() const { return file_; }

 private:
  const json& object_;
  std::string file_;
  std::string prefix_;
};

TestCase ParseCase(const json& j, const std::string& file,
                   const std::string& dir_tier) {
  Fields f(j, file);
  TestCase tc;
  tc.case_id = f.NonEmptyString("case_id");
  std::string tier_text = f.String("tier");
  auto tier = ParseLevel(tier_text);
  if (!tier) throw LoadError(f.Where("tier"), "unknown tier " + tier_text);
  tc.tier = *tier;
  if (RomanNumeral(tc.tier) != dir_tier) {
    throw LoadError(f.Where("tier"), "tier " + tier_text +
                                         " does not match directory cases/" +
                                         dir_tier);
  }
  tc.db_id = f.NonEmptyString("db");
  for (const std::string& name : f.StringList("consistency_regimes", false)) {
    auto regime = ParseRegime(name);
    if (!regime) {
      throw LoadError(f.Where("consistency_regimes"),
                      "unknown regime " + name);
    }
    tc.consistency_regimes.insert(*regime);
  }
  tc.tags = f.StringList("tags", false);
  const json& turns = f.Required("turns");
  if (!turns.is_array() || turns.empty()) {
    throw LoadError(f.Where("turns"), "expected a non-empty array");
  }
  for (size_t i = 0; i < turns.size(); ++i) {
    Fields tf(turns[i], file, "turns[" + std::to_string(i) + "]");
    Turn turn;
    turn.question = tf.NonEmptyString("question");
    turn.paraphrases = tf.StringList("paraphrases", false);
    turn.gold_query = tf.NonEmptyString("gold_query");
    turn.order_sensitive = tf.Bool("order_sensitive", false);
    if (tf.object().contains("notes")) turn.notes = tf.String("notes");
    tc.turns.push_back(std::move(turn));
  }
  return tc;
}

json CaseToJson(const TestCase& tc) {
  json regimes = json::array();
  for (Regime r : tc.consistency_regimes) {
    regimes.push_back(std::string(RegimeName(r)));
  }
  json turns = json::array();
  for (const Turn& t : tc.turns) {
    json jt = {{"question", t.question},
               {"paraphrases", t.paraphrases},
               {"gold_query", t.gold_query},
               {"order_sensitive", t.order_sensitive}};
    if (!t.notes.empty()) jt["notes"] = t.notes;
    turns.push_back(std::move(jt));
  }
  return {{"case_id", tc.case_id},
          {"tier", std::string(RomanNumeral(tc.tier))},
          {"db", tc.db_id},
          {"consistency_regimes", std::move(regimes)},
          {"tags", tc.tags},
          {"turns", std::move(turns)}};
}

}  // namespace

bool TestCase::HasTag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const DatabaseFixture& TestSuite::Fixture(const std::string& db_id) const {
  auto it = databases.find(db_id);
  if (it == databases.end()) throw Error("unknown database " + db_id);
  return it->second;
}

const SettingsProfile& TestSuite::DefaultProfile() const {
  for (const SettingsProfile& p : settings_variants) {
    if (p.is_default) return p;
  }
  if (settings_variants.empty()) {
    static const SettingsProfile kImplicit{"default", json::object(), true};
    return kImplicit;
  }
  return settings_variants.front();
}

std::vector<const TestCase*> TestSuite::CasesInTier(Level tier) const {
  std::vector<const TestCase*> out;
  for (const TestCase& tc : cases) {
    if (tc.tier == tier) out.push_back(&tc);
  }
  return out;
}

TestSuite LoadSuite(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw LoadError(dir.string(), "suite directory not found");
  }
  fs::path suite_file = dir / "suite.json";
  if (!fs::exists(suite_file)) {
    throw LoadError(suite_file.string(), "suite.json missing");
  }
  json root = ParseJson(ReadFile(suite_file, "suite.json"), "suite.json");
  Fields f(root, "suite.json");

  TestSuite suite;
  suite.suite_id = f.NonEmptyString("suite_id");
  suite.name = f.String("name");
  if (auto it = root.find("repeat_count"); it != root.end()) {
    if (!it->is_number_integer() || it->get<int>() < 1) {
      throw LoadError(f.Where("repeat_count"), "expected a positive integer");
    }
    suite.repeat_count = it->get<int>();
  }
  if (auto it = root.find("settings_variants"); it != root.end()) {
    if (!it->is_array()) {
      throw LoadError(f.Where("settings_variants"), "expected an array");
    }
    std::set<std::string> seen;
    for (size_t i = 0; i < it->size(); ++i) {
      Fields pf((*it)[i], "suite.json",
                "settings_variants[" + std::to_string(i) + "]");
      SettingsProfile profile;
      profile.profile_id = pf.NonEmptyString("profile_id");
      if (!seen.insert(profile.profile_id).second) {
        throw LoadError(pf.Where("profile_id"),
                        "duplicate profile id " + profile.profile_id);
      }
      if (pf.object().contains("params")) {
        profile.params = pf.Required("params");
        if (!profile.params.is_object()) {
          throw LoadError(pf.Where("params"), "expected an object");
        }
      }
      profile.is_default = pf.Bool("default", false);
      suite.settings_variants.push_back(std::move(profile));
    }
  }

  fs::path db_root = dir / "databases";
  if (fs::is_directory(db_root)) {
    std::vector<fs::path> db_dirs;
    for (const auto& entry : fs::directory_iterator(db_root)) {
      if (entry.is_directory()) db_dirs.push_back(entry.path());
    }
    std::sort(db_dirs.begin(), db_dirs.end());
    for (const fs::path& db_dir : db_dirs) {
      std::string db_id = db_dir.filename().string();
      std::string rel = "databases/" + db_id + "/";
      DatabaseFixture fixture;
      fixture.db_id = db_id;
      fixture.schema_script = ReadFile(db_dir / "schema.sql", rel + "schema.sql");
      fixture.data_script = ReadFile(db_dir / "data.sql", rel + "data.sql");
      suite.databases.emplace(db_id, std::move(fixture));
    }
  }

  fs::path case_root = dir / "cases";
  std::set<std::string> case_ids;
  if (fs::is_directory(case_root)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(case_root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      std::string display = fs::relative(file, dir).generic_string();
      std::string dir_tier = file.parent_path().filename().string();
      TestCase tc = ParseCase(ParseJson(ReadFile(file, display), display),
                              display, dir_tier);
      if (file.stem().string() != tc.case_id) {
        throw LoadError(display + ": case_id",
                        "case_id " + tc.case_id + " does not match file name");
      }
      if (!case_ids.insert(tc.case_id).second) {
        throw LoadError(display + ": case_id",
                        "duplicate case_id " + tc.case_id);
      }
      if (!suite.databases.contains(tc.db_id)) {
        throw LoadError(display + ": db", "case " + tc.case_id +
                                              " references unknown database " +
                                              tc.db_id);
      }
      suite.cases.push_back(std::move(tc));
    }
  }
  std::sort(suite.cases.begin(), suite.cases.end(),
            [](const TestCase& a, const TestCase& b) {
              return std::pair(a.tier, a.case_id) <
                     std::pair(b.tier, b.case_id);
            });
  return suite;
}

void RenderSuite(const TestSuite& suite, const fs::path& dir) {
  json root = {{"suite_id", suite.suite_id},
               {"name", suite.name},
               {"repeat_count", suite.repeat_count}};
  json variants = json::array();
  for (const SettingsProfile& p : suite.settings_variants) {
    json jp = {{"profile_id", p.profile_id}, {"params", p.params}};
    if (p.is_default) jp["default"] = true;
    variants.push_back(std::move(jp));
  }
  root["settings_variants"] = std::move(variants);
  WriteFile(dir / "suite.json", root.dump(2) + "\n");
  for (const auto& [db_id, fixture] : suite.databases) {
    WriteFile(dir / "databases" / db_id / "schema.sql", fixture.schema_script);
    WriteFile(dir / "databases" / db_id / "data.sql", fixture.data_script);
  }
  for (const TestCase& tc : suite.cases) {
    WriteFile(dir / "cases" / std::string(RomanNumeral(tc.tier)) /
                  (tc.case_id + ".json"),
              CaseToJson(tc).dump(2) + "\n");
  }
}

Database Provision(const DatabaseFixture& fixture) {
  Database db = Database::OpenInMemory();
  db.ExecScript(fixture.schema_script);
  db.ExecScript(fixture.data_script);
  db.MakeReadOnly();
  return db;
}

std::vector<Finding> ValidateSuite(const TestSuite& suite) {
  std::vector<Finding> findings;
  auto add = [&](std::string case_id, std::optional<size_t> turn,
                 std::string kind, std::string detail) {
    findings.push_back(
        {std::move(case_id), turn, std::move(kind), std::move(detail)});
  };

  if (suite.suite_id.empty()) add("", std::nullopt, "suite-shape", "empty suite_id");
  int defaults = 0;
  std::set<std::string> profile_ids;
  for (const SettingsProfile& p : suite.settings_variants) {
    if (p.is_default) ++defaults;
    if (!profile_ids.insert(p.profile_id).second) {
      add("", std::nullopt, "settings-shape",
          "duplicate profile id " + p.profile_id);
    }
  }
  if (!suite.settings_variants.empty() && defaults != 1) {
    add("", std::nullopt, "settings-shape",
        "exactly one settings profile must be marked default (found " +
            std::to_string(defaults) + ")");
  }

  std::map<std::string, bool> fixture_ok;
  for (const auto& [db_id, fixture] : suite.databases) {
    try {
      Provision(fixture);
      fixture_ok[db_id] = true;
    } catch (const ProvisionError& e) {
      fixture_ok[db_id] = false;
      add("", std::nullopt, "fixture-failure", db_id + ": " + e.what());
    }
  }

  std::set<std::string> case_ids;
  for (const TestCase& tc : suite.cases) {
    if (!case_ids.insert(tc.case_id).second) {
      add(tc.case_id, std::nullopt, "duplicate-case", "case id reused");
    }
    if (tc.turns.empty()) {
      add(tc.case_id, std::nullopt, "case-shape", "case has no turns");
    }
    if (tc.tier == Level::kIII && tc.turns.size() < 2 &&
        !tc.HasTag(kImplicitIntentTag)) {
      add(tc.case_id, std::nullopt, "tier-shape",
          "tier-III case needs at least two turns or the implicit-intent tag");
    }
    if (tc.consistency_regimes.contains(Regime::kLinguisticVariation)) {
      bool any = false;
      for (size_t i = 0; i < tc.turns.size(); ++i) {
        size_t n = tc.turns[i].paraphrases.size();
        if (n >= 2) any = true;
        if (n == 1) {
          add(tc.case_id, i, "paraphrase-shape",
              "a measured turn needs at least two paraphrases");
        }
      }
      if (!any) {
        add(tc.case_id, std::nullopt, "paraphrase-shape",
            "linguistic-variation case has no turn with paraphrases");
      }
    }
    if (tc.consistency_regimes.contains(Regime::kSettingsVariation) &&
        suite.settings_variants.size() < 2) {
      add(tc.case_id, std::nullopt, "settings-shape",
          "settings-variation needs at least two settings profiles");
    }
    if (tc.consistency_regimes.contains(Regime::kIdentical) &&
        suite.repeat_count < 2) {
      add(tc.case_id, std::nullopt, "repeat-shape",
          "identical regime needs repeat_count of at least 2");
    }
    auto db = suite.databases.find(tc.db_id);
    if (db == suite.databases.end()) {
      add(tc.case_id, std::nullopt, "dangling-db",
          "unknown database " + tc.db_id);
      continue;
    }
    for (size_t i = 0; i < tc.turns.size(); ++i) {
      const Turn& turn = tc.turns[i];
      sql::ParseResult parsed = sql::Parse(turn.gold_query);
      if (!parsed.ok()) {
        add(tc.case_id, i, "gold-parse-failure", parsed.error);
        continue;
      }
      if (parsed.statement->top_level_order_by != turn.order_sensitive) {
        add(tc.case_id, i, "order-sensitivity",
            turn.order_sensitive
                ? "order_sensitive is set but the gold query has no "
                  "top-level ORDER BY"
                : "gold query has a top-level ORDER BY but order_sensitive "
                  "is false");
      }
      if (!fixture_ok[tc.db_id]) continue;
      try {
        Database live = Provision(db->second);
        live.Query(parsed.statement->statement_text, QueryLimits{});
      } catch (const QueryError& e) {
        add(tc.case_id, i, "gold-exec-failure", e.what());
      }
    }
  }
  return findings;
}

}  // namespace ttq
