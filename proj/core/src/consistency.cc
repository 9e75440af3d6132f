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

#include "ttq/consistency.h"

#include <algorithm>
#include <map>

#include "ttq/error.h"

namespace ttq {

int64_t StabilityGroup::correct() const {
  return std::count_if(variants.begin(), variants.end(),
                       [](const VariantOutcome& v) {
                         return v.status == VerdictStatus::kEquivalent;
                       });
}

Ratio StabilityGroup::stability() const {
  if (variants.empty()) throw EvaluationError("stability of an empty group");
  return Ratio(correct(), static_cast<int64_t>(variants.size()));
}

Ratio StabilityGroup::self_consistency() const {
  if (variants.empty()) throw EvaluationError("stability of an empty group");
  std::map<std::string, int64_t> classes;
  int64_t largest = 0;
  for (const VariantOutcome& v : variants) {
    largest = std::max(largest, ++classes[v.result_class]);
  }
  return Ratio(largest, static_cast<int64_t>(variants.size()));
}

std::vector<size_t> MeasuredTurns(const TestCase& test_case, Regime regime) {
  std::vector<size_t> turns;
  for (size_t t = 0; t < test_case.turns.size(); ++t) {
    if (regime == Regime::kLinguisticVariation &&
        test_case.turns[t].paraphrases.size() < 2) {
      continue;
    }
    turns.push_back(t);
  }
  return turns;
}

std::vector<StabilityGroup> RunRegime(EvaluationSession& session,
                                      Regime regime) {
  const TestSuite& suite = session.suite();
  if (regime == Regime::kSettingsVariation &&
      suite.settings_variants.size() < 2) {
    return {};
  }
  const SettingsProfile& default_profile = suite.DefaultProfile();

  struct Slot {
    const TestCase* test_case;
    size_t turn;
    size_t first;
    size_t count;
  };
  std::vector<Slot> slots;
  std::vector<GenerationRequest> requests;
  for (const TestCase& tc : suite.cases) {
    if (!tc.consistency_regimes.contains(regime)) continue;
    for (size_t t : MeasuredTurns(tc, regime)) {
      size_t first = requests.size();
      switch (regime) {
        case Regime::kIdentical:
          for (int k = 0; k < suite.repeat_count; ++k) {
            requests.push_back(
                session.MakeRequest(tc, t, default_profile, 0, k));
          }
          break;
        case Regime::kSettingsVariation:
          for (const SettingsProfile& p : suite.settings_variants) {
            requests.push_back(session.MakeRequest(tc, t, p, 0, 0));
          }
          break;
        case Regime::kLinguisticVariation:
          for (size_t p = 0; p <= tc.turns[t].paraphrases.size(); ++p) {
            requests.push_back(
                session.MakeRequest(tc, t, default_profile, p, 0));
          }
          break;
      }
      slots.push_back({&tc, t, first, requests.size() - first});
    }
  }

  std::vector<const Outcome*> outcomes = session.Run(requests);
  std::vector<StabilityGroup> groups;
  for (const Slot& slot : slots) {
    StabilityGroup group;
    group.case_id = slot.test_case->case_id;
    group.turn_index = slot.turn;
    group.regime = regime;
    bool order_sensitive = slot.test_case->turns[slot.turn].order_sensitive;
    for (size_t i = slot.first; i < slot.first + slot.count; ++i) {
      const Outcome& o = *outcomes[i];
      VariantOutcome v;
      v.key = o.record.request.key();
      v.status = o.verdict.status;
      if (o.verdict.generated) {
        v.result_class = order_sensitive ? o.verdict.generated->sequence_digest
                                         : o.verdict.generated->multiset_digest;
      } else {
        v.result_class = std::string(kInvalidClass);
      }
      group.variants.push_back(std::move(v));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::optional<Ratio> StabilityScore(const std::vector<StabilityGroup>& groups) {
  if (groups.empty()) return std::nullopt;
  std::vector<Ratio> values;
  values.reserve(groups.size());
  for (const StabilityGroup& g : groups) values.push_back(g.stability());
  return MeanOf(values);
}

CategoryResult EvaluateConsistencyCategory(EvaluationSession& session,
                                           const MaturityRubric& rubric) {
  CategoryResult out;
  out.category = Category::kConsistency;
  out.evaluated = true;

  std::map<Regime, std::vector<StabilityGroup>> by_regime;
  nlohmann::json regimes = nlohmann::json::object();
  for (Regime regime : kAllRegimes) {
    std::vector<StabilityGroup> groups = RunRegime(session, regime);
    nlohmann::json jr = {{"groups", nlohmann::json::array()}};
    std::vector<Ratio> self;
    for (const StabilityGroup& g : groups) {
      nlohmann::json variants = nlohmann::json::array();
      for (const VariantOutcome& v : g.variants) {
        variants.push_back({{"record_id", v.key.ToString()},
                            {"verdict", std::string(VerdictName(v.status))},
                            {"result_class", v.result_class}});
      }
      jr["groups"].push_back(
          {{"case_id", g.case_id},
           {"turn_index", g.turn_index},
           {"correct", g.correct()},
           {"total", g.variants.size()},
           {"stability", g.stability().ToString()},
           {"self_consistency", g.self_consistency().ToString()},
           {"variants", std::move(variants)}});
      self.push_back(g.self_consistency());
    }
    if (auto score = StabilityScore(groups)) {
      jr["stability"] = score->ToString();
      jr["self_consistency"] = MeanOf(self).ToString();
    }
    regimes[std::string(RegimeName(regime))] = std::move(jr);
    by_regime[regime] = std::move(groups);
  }
  out.metrics["regimes"] = std::move(regimes);

  for (Level level : kRubricLevels) {
    const StabilityThreshold& st = rubric.stability_thresholds.at(level);
    const std::vector<StabilityGroup>& groups = by_regime[st.regime];
    std::optional<Ratio> score = StabilityScore(groups);
    std::vector<CriterionResult> criteria;
    for (const CriterionSpec& spec :
         rubric.CriteriaAt(Category::kConsistency, level)) {
      CriterionResult r;
      r.criterion_id = spec.id;
      if (!score) {
        r.status = CriterionStatus::kNotEvaluated;
        r.note = "no " + std::string(RegimeName(st.regime)) + " groups";
      } else {
        r.measured = score;
        r.status = Meets(st.threshold, *score) ? CriterionStatus::kPass
                                               : CriterionStatus::kFail;
        for (const StabilityGroup& g : groups) {
          for (const VariantOutcome& v : g.variants) {
            r.evidence.push_back(v.key.ToString());
          }
        }
        r.note = std::string(RegimeName(st.regime)) + " stability " +
                 score->ToString() + " vs " +
                 std::string(ComparisonSymbol(st.threshold.comparison)) + " " +
                 st.threshold.fraction.ToString();
      }
      criteria.push_back(std::move(r));
    }
    out.levels[level] = std::move(criteria);
  }
  out.assigned = AssignLevel(out.levels);
  return out;
}

}  // namespace ttq
