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

#include "ttq/report.h"

#include <sstream>

#include "ttq/error.h"

namespace ttq {
namespace {

using json = nlohmann::json;

json RatioToJson(const Ratio& r) {
  return {{"numerator", r.numerator()}, {"denominator", r.denominator()}};
}

Ratio RatioFromJson(const json& j) {
  return Ratio(j.at("numerator").get<int64_t>(),
               j.at("denominator").get<int64_t>());
}

json CriterionToJson(const CriterionResult& r) {
  json j = {{"criterion_id", r.criterion_id},
            {"status", std::string(StatusName(r.status))},
            {"evidence", r.evidence},
            {"note", r.note}};
  j["measured"] = r.measured ? RatioToJson(*r.measured) : json(nullptr);
  return j;
}

CriterionResult CriterionFromJson(const json& j) {
  CriterionResult r;
  r.criterion_id = j.at("criterion_id").get<std::string>();
  std::string status = j.at("status").get<std::string>();
  auto parsed = ParseStatus(status);
  if (!parsed) throw LoadError("criterion " + r.criterion_id, "bad status");
  r.status = *parsed;
  r.evidence = j.at("evidence").get<std::vector<std::string>>();
  r.note = j.at("note").get<std::string>();
  if (!j.at("measured").is_null()) r.measured = RatioFromJson(j["measured"]);
  return r;
}

std::string Percent(const Ratio& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << r.ToDouble() * 100 << "%";
  return out.str();
}

std::string Capitalized(std::string_view name) {
  std::string s(name);
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Summary cell for one category at one level.
std::string LevelCell(const std::vector<CriterionResult>& results) {
  if (results.empty()) return "n/a";
  bool any_fail = false;
  bool any_missing = false;
  bool any_attested = false;
  for (const CriterionResult& r : results) {
    any_fail |= r.status == CriterionStatus::kFail;
    any_missing |= r.status == CriterionStatus::kNotEvaluated;
    any_attested |= r.status == CriterionStatus::kAttestedPass;
  }
  if (any_fail) return "fail";
  if (any_missing) return "not evaluated";
  return any_attested ? "pass (attested)" : "pass";
}

std::string StatusMarker(CriterionStatus status) {
  switch (status) {
    case CriterionStatus::kPass:
      return "pass";
    case CriterionStatus::kAttestedPass:
      return "pass (attested)";
    case CriterionStatus::kFail:
      return "fail";
    case CriterionStatus::kNotEvaluated:
      return "not evaluated";
  }
  return "?";
}

std::string FractionCell(const json& j) {
  if (!j.is_string()) return "n/a";
  Ratio r = Ratio::Parse(j.get<std::string>());
  return r.ToString() + " (" + Percent(r) + ")";
}

std::string RenderMarkdown(const AssessmentReport& report) {
  std::ostringstream md;
  md << "# Maturity assessment: " << report.suite_id << "\n\n";
  md << "- Harness version: " << report.harness_version << "\n";
  md << "- SUT: " << report.sut.dump() << "\n";
  md << "- Report schema: " << report.schema_version << "\n\n";

  md << "## Maturity matrix\n\n";
  md << "| Category | Level I | Level II | Level III | Level IV | Assigned |\n";
  md << "|---|---|---|---|---|---|\n";
  for (Category c : kAllCategories) {
    auto it = report.categories.find(c);
    md << "| " << Capitalized(CategoryName(c)) << " |";
    if (it == report.categories.end() || !it->second.evaluated) {
      md << " | | | | not evaluated |\n";
      continue;
    }
    for (Level level : kRubricLevels) {
      auto lv = it->second.levels.find(level);
      md << " "
         << LevelCell(lv == it->second.levels.end()
                          ? std::vector<CriterionResult>{}
                          : lv->second)
         << " |";
    }
    md << " " << RomanNumeral(it->second.assigned) << " |\n";
  }
  md << "\nLevel 0 means the Level I criteria were not all met.\n";

  auto accuracy = report.categories.find(Category::kAccuracy);
  if (accuracy != report.categories.end() && accuracy->second.evaluated) {
    md << "\n## Accuracy by tier\n\n| Tier | Correct | Total | Accuracy |\n"
       << "|---|---|---|---|\n";
    const json& tiers = accuracy->second.metrics.at("tiers");
    for (Level level : kRubricLevels) {
      std::string roman(RomanNumeral(level));
      if (!tiers.contains(roman)) continue;
      const json& t = tiers[roman];
      md << "| " << roman << " | " << t.at("correct").get<int64_t>() << " | "
         << t.at("total").get<int64_t>() << " | "
         << FractionCell(t.value("accuracy", json())) << " |\n";
    }
  }
  auto consistency = report.categories.find(Category::kConsistency);
  if (consistency != report.categories.end() && consistency->second.evaluated) {
    md << "\n## Stability by regime\n\n"
       << "| Regime | Groups | Stability | Self-consistency |\n"
       << "|---|---|---|---|\n";
    const json& regimes = consistency->second.metrics.at("regimes");
    for (Regime regime : kAllRegimes) {
      std::string name(RegimeName(regime));
      if (!regimes.contains(name)) continue;
      const json& r = regimes[name];
      md << "| " << name << " | " << r.at("groups").size() << " | "
         << FractionCell(r.value("stability", json())) << " | "
         << FractionCell(r.value("self_consistency", json())) << " |\n";
    }
  }

  md << "\n## Criteria\n";
  for (const auto& [category, result] : report.categories) {
    if (!result.evaluated) continue;
    md << "\n### " << Capitalized(CategoryName(category)) << "\n\n";
    for (const auto& [level, results] : result.levels) {
      for (const CriterionResult& r : results) {
        md << "- Level " << RomanNumeral(level) << " `" << r.criterion_id
           << "`: " << StatusMarker(r.status);
        if (r.measured) md << ", measured " << r.measured->ToString();
        if (!r.note.empty()) md << ". " << r.note;
        md << "\n";
      }
    }
  }

  const RunMetadata& m = report.metadata;
  md << "\n## Run\n\n";
  md << "- Seed: " << m.seed << "\n";
  md << "- Started: " << m.started_at << "\n";
  md << "- Finished: " << m.finished_at << "\n";
  md << "- Generations: " << m.generations << ", failed "
     << m.failed_generations << " (" << Percent(m.failure_rate()) << ")\n";
  if (!m.log_file.empty()) md << "- Run log: " << m.log_file << "\n";
  for (const std::string& o : report.rubric_overrides) {
    md << "- Rubric override: " << o << "\n";
  }
  md << "- Adjudication: " << report.adjudication_policy << "\n";
  return md.str();
}

}  // namespace

std::map<Category, Level> AssessmentReport::MaturityVector() const {
  std::map<Category, Level> vector;
  for (const auto& [category, result] : categories) {
    if (result.evaluated) vector[category] = result.assigned;
  }
  return vector;
}

AssessmentReport BuildReport(const std::vector<CategoryResult>& results,
                             ReportContext context) {
  AssessmentReport report;
  report.harness_version = std::move(context.harness_version);
  report.rubric = std::move(context.rubric);
  report.rubric_overrides = std::move(context.rubric_overrides);
  report.suite_id = std::move(context.suite_id);
  report.sut = std::move(context.sut);
  report.metadata = std::move(context.metadata);
  for (Category c : kAllCategories) {
    CategoryResult placeholder;
    placeholder.category = c;
    report.categories[c] = placeholder;
  }
  bool any = false;
  for (const CategoryResult& r : results) {
    report.categories[r.category] = r;
    any |= r.evaluated;
  }
  if (!any) throw EvaluationError("no category was evaluated");
  return report;
}

json CategoryResultToJson(const CategoryResult& result) {
  json j = {{"category", std::string(CategoryName(result.category))},
            {"evaluated", result.evaluated},
            {"metrics", result.metrics}};
  j["assigned_level"] =
      result.evaluated ? json(static_cast<int>(result.assigned)) : json(nullptr);
  json levels = json::object();
  for (const auto& [level, results] : result.levels) {
    json list = json::array();
    for (const CriterionResult& r : results) list.push_back(CriterionToJson(r));
    levels[std::string(RomanNumeral(level))] = std::move(list);
  }
  j["levels"] = std::move(levels);
  return j;
}

CategoryResult CategoryResultFromJson(const json& j) {
  CategoryResult r;
  auto category = ParseCategory(j.at("category").get<std::string>());
  if (!category) throw LoadError("report.categories", "unknown category");
  r.category = *category;
  r.evaluated = j.at("evaluated").get<bool>();
  r.metrics = j.at("metrics");
  if (!j.at("assigned_level").is_null()) {
    int level = j["assigned_level"].get<int>();
    if (level < 0 || level > 4) {
      throw LoadError("report.categories", "assigned_level out of range");
    }
    r.assigned = static_cast<Level>(level);
  }
  for (const auto& [name, list] : j.at("levels").items()) {
    auto level = ParseLevel(name);
    if (!level || *level == Level::kNone) {
      throw LoadError("report.categories", "bad level " + name);
    }
    std::vector<CriterionResult> results;
    for (const json& c : list) results.push_back(CriterionFromJson(c));
    r.levels[*level] = std::move(results);
  }
  return r;
}

json ReportToJson(const AssessmentReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["harness_version"] = report.harness_version;
  j["rubric"] = RubricToJson(report.rubric);
  j["rubric_overrides"] = report.rubric_overrides;
  j["suite_id"] = report.suite_id;
  j["sut"] = report.sut;
  json categories = json::object();
  for (const auto& [category, result] : report.categories) {
    categories[std::string(CategoryName(category))] =
        CategoryResultToJson(result);
  }
  j["categories"] = std::move(categories);
  json vector = json::object();
  for (const auto& [category, level] : report.MaturityVector()) {
    vector[std::string(CategoryName(category))] = static_cast<int>(level);
  }
  j["maturity_vector"] = std::move(vector);
  const RunMetadata& m = report.metadata;
  j["run_metadata"] = {{"seed", m.seed},
                       {"started_at", m.started_at},
                       {"finished_at", m.finished_at},
                       {"generations", m.generations},
                       {"failed_generations", m.failed_generations},
                       {"failure_rate", RatioToJson(m.failure_rate())},
                       {"log_file", m.log_file}};
  j["adjudication_policy"] = report.adjudication_policy;
  return j;
}

AssessmentReport ReportFromJson(const json& j) {
  try {
    AssessmentReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != kReportSchemaVersion) {
      throw LoadError("report.schema_version",
                      "unsupported version " +
                          std::to_string(report.schema_version));
    }
    report.harness_version = j.at("harness_version").get<std::string>();
    report.rubric = RubricFromJson(j.at("rubric"));
    report.rubric_overrides =
        j.at("rubric_overrides").get<std::vector<std::string>>();
    report.suite_id = j.at("suite_id").get<std::string>();
    report.sut = j.at("sut");
    for (const auto& [name, c] : j.at("categories").items()) {
      CategoryResult r = CategoryResultFromJson(c);
      if (CategoryName(r.category) != name) {
        throw LoadError("report.categories." + name, "category mismatch");
      }
      report.categories[r.category] = std::move(r);
    }
    for (const auto& [name, level] : j.at("maturity_vector").items()) {
      auto c = ParseCategory(name);
      if (!c || !report.categories.contains(*c) ||
          static_cast<int>(report.categories[*c].assigned) !=
              level.get<int>()) {
        throw LoadError("report.maturity_vector." + name,
                        "disagrees with the category result");
      }
    }
    const json& m = j.at("run_metadata");
    report.metadata.seed = m.at("seed").get<uint64_t>();
    report.metadata.started_at = m.at("started_at").get<std::string>();
    report.metadata.finished_at = m.at("finished_at").get<std::string>();
    report.metadata.generations = m.at("generations").get<int64_t>();
    report.metadata.failed_generations =
        m.at("failed_generations").get<int64_t>();
    report.metadata.log_file = m.at("log_file").get<std::string>();
    report.adjudication_policy = j.at("adjudication_policy").get<std::string>();
    return report;
  } catch (const json::exception& e) {
    throw LoadError("report", e.what());
  }
}

std::string RenderReport(const AssessmentReport& report,
                         std::string_view format) {
  if (format == "json") return ReportToJson(report).dump(2) + "\n";
  if (format == "markdown" || format == "md") return RenderMarkdown(report);
  throw UsageError("unknown report format '" + std::string(format) + "'");
}

std::vector<std::string> RederivationMismatches(
    const AssessmentReport& report) {
  std::vector<std::string> mismatches;
  for (const auto& [category, result] : report.categories) {
    if (!result.evaluated) continue;
    for (const auto& [level, results] : result.levels) {
      for (const CriterionResult& r : results) {
        if (!r.measured) continue;
        if (r.status != CriterionStatus::kPass &&
            r.status != CriterionStatus::kFail) {
          continue;
        }
        const Threshold* threshold = nullptr;
        if (category == Category::kAccuracy) {
          threshold = &report.rubric.accuracy_thresholds.at(level);
        } else if (category == Category::kConsistency) {
          threshold = &report.rubric.stability_thresholds.at(level).threshold;
        } else {
          threshold = &report.rubric.presence_threshold;
        }
        bool pass = Meets(*threshold, *r.measured);
        if (pass != (r.status == CriterionStatus::kPass)) {
          mismatches.push_back(r.criterion_id);
        }
      }
    }
  }
  return mismatches;
}

}  // namespace ttq
