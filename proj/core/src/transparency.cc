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

#include "ttq/transparency.h"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "ttq/error.h"

namespace ttq {
namespace {

using Check = std::function<CriterionResult(const CriterionSpec&)>;

const std::set<std::string, std::less<>>& DocumentKinds() {
  static const std::set<std::string, std::less<>> kinds = {
      std::string(kModelDocumentation), std::string(kDataDocumentation),
      std::string(kPerformanceLimitations), std::string(kEthicalSocietal),
      std::string(kBiasMitigation)};
  return kinds;
}

bool NonEmptyFile(const std::filesystem::path& path) {
  std::error_code ec;
  return std::filesystem::is_regular_file(path, ec) &&
         std::filesystem::file_size(path, ec) > 0 && !ec;
}

bool ContiguousTrace(const std::vector<TraceStep>& steps) {
  if (steps.empty()) return false;
  for (size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].step_index != steps[i - 1].step_index + 1) return false;
  }
  return true;
}

CriterionResult Result(const CriterionSpec& spec, bool ok,
                       std::vector<std::string> evidence, std::string note) {
  CriterionResult r;
  r.criterion_id = spec.id;
  if (ok) {
    r.status = spec.kind == CheckKind::kAttested ? CriterionStatus::kAttestedPass
                                                 : CriterionStatus::kPass;
  } else {
    r.status = CriterionStatus::kFail;
  }
  r.evidence = std::move(evidence);
  r.note = std::move(note);
  return r;
}

class Auditor {
 public:
  Auditor(const std::vector<GenerationRecord>& records, const RunLog& log,
          const TransparencyManifest* manifest, const MaturityRubric& rubric,
          std::string_view log_name)
      : records_(records),
        log_(log),
        manifest_(manifest),
        rubric_(rubric),
        log_name_(log_name) {
    for (const GenerationRecord& r : records_) {
      if (!r.failed()) successful_.push_back(&r);
    }
  }

  CategoryResult Run() {
    std::map<std::string, Check, std::less<>> checks = {
        {"query-logging", [this](auto& s) { return QueryLogging(s); }},
        {"basic-model-documentation",
         [this](auto& s) { return Document(s, kModelDocumentation, false); }},
        {"minimal-traceability",
         [this](auto& s) { return Feature(s, kMinimalTraceabilityFeature); }},
        {"enhanced-logging", [this](auto& s) { return EnhancedLogging(s); }},
        {"interpretability-signal",
         [this](auto& s) { return Interpretability(s); }},
        {"data-documentation",
         [this](auto& s) { return Document(s, kDataDocumentation, false); }},
        {"stepwise-reasoning", [this](auto& s) { return Stepwise(s); }},
        {"feedback-observability",
         [this](auto& s) { return Feature(s, kFeedbackUiFeature); }},
        {"comprehensive-documentation",
         [this](auto& s) {
           return Document(s, kPerformanceLimitations, false);
         }},
        {"disclosure-standards",
         [this](auto& s) { return Feature(s, kDisclosureFeature); }},
        {"per-decision-logs", [this](auto& s) { return DecisionLogs(s); }},
        {"ethical-documentation",
         [this](auto& s) { return Document(s, kEthicalSocietal, false); }},
        {"bias-mitigation",
         [this](auto& s) { return Document(s, kBiasMitigation, true); }},
    };
    CategoryResult out;
    out.category = Category::kTransparency;
    out.evaluated = true;
    for (Level level : kRubricLevels) {
      std::vector<CriterionResult> results;
      for (const CriterionSpec& spec :
           rubric_.CriteriaAt(Category::kTransparency, level)) {
        auto it = checks.find(spec.id);
        if (it == checks.end()) {
          CriterionResult r;
          r.criterion_id = spec.id;
          r.note = "no audit check is defined for this criterion";
          results.push_back(std::move(r));
          continue;
        }
        results.push_back(it->second(spec));
      }
      out.levels[level] = std::move(results);
    }
    out.assigned = AssignLevel(out.levels);
    out.metrics = metrics_;
    out.metrics["records"] = records_.size();
    out.metrics["successful_records"] = successful_.size();
    out.metrics["log_entries"] = log_.size();
    out.metrics["user_identity"] = "session_id + case_id";
    return out;
  }

 private:
  CriterionResult QueryLogging(const CriterionSpec& spec) {
    std::map<std::string, std::pair<int, int>> counts;
    for (const LogEntry& e : log_.entries()) {
      if (e.direction == LogDirection::kRequest) ++counts[e.record_id].first;
      if (e.direction == LogDirection::kResponse) ++counts[e.record_id].second;
    }
    int64_t complete = 0;
    std::vector<std::string> incomplete;
    for (const GenerationRecord& r : records_) {
      std::string id = r.request.key().ToString();
      auto it = counts.find(id);
      if (it != counts.end() && it->second == std::pair{1, 1}) {
        ++complete;
      } else {
        incomplete.push_back(id);
      }
    }
    metrics_["logged_records"] = complete;
    if (records_.empty()) {
      return Result(spec, false, {}, "no generation records");
    }
    if (!incomplete.empty()) {
      return Result(spec, false, incomplete,
                    std::to_string(incomplete.size()) +
                        " record(s) lack exactly one request and one "
                        "response entry");
    }
    return Result(spec, true, {log_name_},
                  std::to_string(complete) + "/" +
                      std::to_string(records_.size()) +
                      " records logged in both directions");
  }

  CriterionResult EnhancedLogging(const CriterionSpec& spec) {
    int64_t complete = 0;
    std::vector<std::string> bad;
    for (const LogEntry& e : log_.entries()) {
      if (!e.timestamp.empty() && !e.session_id.empty() && !e.case_id.empty()) {
        ++complete;
      } else {
        bad.push_back(log_name_ + "#" + std::to_string(e.entry_id));
      }
    }
    metrics_["enhanced_log_entries"] = complete;
    if (log_.size() == 0) return Result(spec, false, {}, "log is empty");
    if (!bad.empty()) {
      if (bad.size() > 20) bad.resize(20);
      return Result(spec, false, bad,
                    std::to_string(log_.size() - complete) +
                        " entries lack timestamp, session_id or case_id");
    }
    return Result(spec, true, {log_name_},
                  "all " + std::to_string(complete) +
                      " entries carry timestamp, session_id and case_id");
  }

  CriterionResult Presence(const CriterionSpec& spec, std::string_view metric,
                           const std::function<bool(const GenerationRecord&)>&
                               has) {
    int64_t present = 0;
    std::vector<std::string> evidence;
    for (const GenerationRecord* r : successful_) {
      if (has(*r)) {
        ++present;
        evidence.push_back(r->request.key().ToString());
      }
    }
    int64_t total = static_cast<int64_t>(successful_.size());
    metrics_[std::string(metric)] = {{"present", present}, {"total", total}};
    if (total == 0) return Result(spec, false, {}, "no successful generations");
    CriterionResult r = Result(
        spec, Meets(rubric_.presence_threshold, present, total),
        std::move(evidence),
        std::to_string(present) + "/" + std::to_string(total) + " vs " +
            std::string(
                ComparisonSymbol(rubric_.presence_threshold.comparison)) +
            " " + rubric_.presence_threshold.fraction.ToString());
    r.measured = Ratio(present, total);
    if (r.status == CriterionStatus::kFail) r.evidence.clear();
    return r;
  }

  CriterionResult Interpretability(const CriterionSpec& spec) {
    return Presence(spec, "explanations", [](const GenerationRecord& r) {
      return r.explanation && !r.explanation->empty();
    });
  }

  CriterionResult Stepwise(const CriterionSpec& spec) {
    return Presence(spec, "traces", [](const GenerationRecord& r) {
      return r.trace && ContiguousTrace(*r.trace);
    });
  }

  CriterionResult DecisionLogs(const CriterionSpec& spec) {
    std::set<std::pair<std::string, int>> logged;
    for (const LogEntry& e : log_.entries()) {
      if (e.direction == LogDirection::kDecision && e.step_index) {
        logged.emplace(e.record_id, *e.step_index);
      }
    }
    int64_t steps = 0;
    int64_t matched = 0;
    std::vector<std::string> missing;
    for (const GenerationRecord* r : successful_) {
      if (!r->trace) continue;
      std::string id = r->request.key().ToString();
      for (const TraceStep& s : *r->trace) {
        ++steps;
        if (logged.contains({id, s.step_index})) {
          ++matched;
        } else if (missing.size() < 20) {
          missing.push_back(id + "#step" + std::to_string(s.step_index));
        }
      }
    }
    metrics_["decision_steps"] = {{"matched", matched}, {"total", steps}};
    if (steps == 0) return Result(spec, false, {}, "no trace steps to match");
    if (matched != steps) {
      return Result(spec, false, missing,
                    std::to_string(steps - matched) +
                        " trace step(s) without a decision entry");
    }
    return Result(spec, true, {log_name_},
                  "all " + std::to_string(steps) +
                      " trace steps have decision entries");
  }

  CriterionResult Document(const CriterionSpec& spec, std::string_view kind,
                           bool require_attested) {
    if (!manifest_) return Result(spec, false, {}, "no manifest");
    std::vector<std::string> missing;
    bool unattested = false;
    for (const ManifestDocument& d : manifest_->documents) {
      if (d.kind != kind) continue;
      if (!NonEmptyFile(d.resolved)) {
        missing.push_back("missing file: " + d.path);
        continue;
      }
      if (require_attested && !d.attested) {
        unattested = true;
        continue;
      }
      return Result(spec, true, {d.path},
                    std::string(kind) + " document " + d.doc_id);
    }
    if (unattested) {
      return Result(spec, false, {},
                    std::string(kind) + " document present but not attested");
    }
    if (!missing.empty()) {
      return Result(spec, false, missing,
                    "registered " + std::string(kind) +
                        " document is missing or empty");
    }
    return Result(spec, false, {},
                  "no " + std::string(kind) + " document registered");
  }

  CriterionResult Feature(const CriterionSpec& spec, std::string_view id) {
    if (!manifest_) return Result(spec, false, {}, "no manifest");
    if (!manifest_->Feature(id)) {
      return Result(spec, false, {},
                    "feature " + std::string(id) + " not attested");
    }
    return Result(spec, true, {"manifest#features/" + std::string(id)},
                  "attested by manifest");
  }

  const std::vector<GenerationRecord>& records_;
  const RunLog& log_;
  const TransparencyManifest* manifest_;
  const MaturityRubric& rubric_;
  std::string log_name_;
  std::vector<const GenerationRecord*> successful_;
  nlohmann::json metrics_ = nlohmann::json::object();
};

}  // namespace

bool TransparencyManifest::Feature(std::string_view id) const {
  auto it = features.find(std::string(id));
  return it != features.end() && it->second;
}

TransparencyManifest ParseManifest(const nlohmann::json& json,
                                   const std::filesystem::path& base_dir) {
  TransparencyManifest manifest;
  if (!json.is_object()) throw LoadError("manifest", "expected an object");
  if (json.contains("documents")) {
    const nlohmann::json& docs = json["documents"];
    if (!docs.is_object()) {
      throw LoadError("manifest.documents", "expected an object");
    }
    for (const auto& [id, d] : docs.items()) {
      std::string where = "manifest.documents." + id;
      if (!d.is_object() || !d.contains("path") || !d["path"].is_string() ||
          !d.contains("kind") || !d["kind"].is_string()) {
        throw LoadError(where, "needs string fields path and kind");
      }
      ManifestDocument doc;
      doc.doc_id = id;
      doc.path = d["path"].get<std::string>();
      doc.kind = d["kind"].get<std::string>();
      if (!DocumentKinds().contains(doc.kind)) {
        throw LoadError(where, "unknown kind '" + doc.kind + "'");
      }
      if (d.contains("attested")) {
        if (!d["attested"].is_boolean()) {
          throw LoadError(where + ".attested", "expected a boolean");
        }
        doc.attested = d["attested"].get<bool>();
      }
      std::filesystem::path p(doc.path);
      doc.resolved = p.is_absolute() ? p : base_dir / p;
      manifest.documents.push_back(std::move(doc));
    }
  }
  if (json.contains("features")) {
    const nlohmann::json& features = json["features"];
    if (!features.is_object()) {
      throw LoadError("manifest.features", "expected an object");
    }
    for (const auto& [id, v] : features.items()) {
      if (!v.is_boolean()) {
        throw LoadError("manifest.features." + id, "expected a boolean");
      }
      manifest.features[id] = v.get<bool>();
    }
  }
  return manifest;
}

TransparencyManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string(), e.what());
  }
  try {
    return ParseManifest(json, path.parent_path());
  } catch (const LoadError& e) {
    throw LoadError(path.string(), e.what());
  }
}

CategoryResult Audit(const std::vector<GenerationRecord>& records,
                     const RunLog& log, const TransparencyManifest* manifest,
                     const MaturityRubric& rubric, std::string_view log_name) {
  return Auditor(records, log, manifest, rubric, log_name).Run();
}

}  // namespace ttq
