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

#include "ttq/accuracy.h"

#include <string_view>

namespace ttq {
namespace {

// The second and third criteria per level, keyed by level.
std::string_view CompositionCriterion(Level level) {
  switch (level) {
    case Level::kI:
      return "basic-queries";
    case Level::kII:
      return "complex-queries";
    case Level::kIII:
      return "contextual-understanding";
    default:
      return "domain-expertise";
  }
}

std::string LevelSuffix(Level level) {
  return "-" + std::string(RomanNumeral(level));
}

}  // namespace

TierResult EvaluateTier(EvaluationSession& session, Level tier) {
  TierResult result;
  result.tier = tier;
  const TestSuite& suite = session.suite();
  const SettingsProfile& profile = suite.DefaultProfile();
  std::vector<GenerationRequest> requests;
  for (const TestCase* tc : suite.CasesInTier(tier)) {
    for (size_t t = 0; t < tc->turns.size(); ++t) {
      requests.push_back(session.MakeRequest(*tc, t, profile, 0, 0));
    }
  }
  std::vector<const Outcome*> outcomes = session.Run(requests);
  for (const Outcome* outcome : outcomes) {
    ++result.total;
    if (outcome->verdict.correct()) ++result.correct;
    result.verdicts.push_back({outcome->record.request.key(),
                               outcome->verdict.status,
                               outcome->verdict.diagnostics});
  }
  return result;
}

CategoryResult EvaluateAccuracyCategory(EvaluationSession& session,
                                        const MaturityRubric& rubric) {
  CategoryResult out;
  out.category = Category::kAccuracy;
  out.evaluated = true;
  nlohmann::json tiers = nlohmann::json::object();
  for (Level level : kRubricLevels) {
    TierResult tier = EvaluateTier(session, level);
    const Threshold& threshold = rubric.accuracy_thresholds.at(level);

    std::vector<std::string> evidence;
    nlohmann::json verdicts = nlohmann::json::array();
    for (const TurnVerdict& v : tier.verdicts) {
      evidence.push_back(v.key.ToString());
      nlohmann::json jv = {{"record_id", v.key.ToString()},
                           {"verdict", std::string(VerdictName(v.status))}};
      if (!v.diagnostics.empty()) jv["diagnostics"] = v.diagnostics;
      verdicts.push_back(std::move(jv));
    }
    std::string roman(RomanNumeral(level));
    nlohmann::json jt = {{"correct", tier.correct},
                         {"total", tier.total},
                         {"verdicts", std::move(verdicts)}};
    if (tier.evaluated()) jt["accuracy"] = tier.accuracy().ToString();
    tiers[roman] = std::move(jt);

    std::vector<CriterionResult> criteria;
    for (const CriterionSpec& spec : rubric.CriteriaAt(Category::kAccuracy,
                                                      level)) {
      CriterionResult r;
      r.criterion_id = spec.id;
      if (!tier.evaluated()) {
        r.status = CriterionStatus::kNotEvaluated;
        r.note = "no tier-" + roman + " cases in suite";
        criteria.push_back(std::move(r));
        continue;
      }
      bool known = spec.id == "accuracy-threshold" + LevelSuffix(level) ||
                   spec.id == CompositionCriterion(level) ||
                   spec.id == "dataset-performance" + LevelSuffix(level);
      if (!known) {
        r.status = CriterionStatus::kNotEvaluated;
        r.note = "no accuracy check is defined for this criterion";
        criteria.push_back(std::move(r));
        continue;
      }
      // All three criteria at a level read the same tier slice; the
      // composition criteria additionally require the slice to be non-empty,
      // which evaluated() already guarantees.
      r.measured = tier.accuracy();
      r.status = Meets(threshold, tier.correct, tier.total)
                     ? CriterionStatus::kPass
                     : CriterionStatus::kFail;
      r.evidence = evidence;
      r.note = "tier-" + roman + " execution accuracy " +
               std::to_string(tier.correct) + "/" + std::to_string(tier.total) +
               " vs " + std::string(ComparisonSymbol(threshold.comparison)) +
               " " + threshold.fraction.ToString();
      criteria.push_back(std::move(r));
    }
    out.levels[level] = std::move(criteria);
  }
  out.metrics["tiers"] = std::move(tiers);
  out.assigned = AssignLevel(out.levels);
  return out;
}

}  // namespace ttq
