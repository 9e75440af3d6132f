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

#ifndef TTQ_RUBRIC_H_
#define TTQ_RUBRIC_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ttq {

enum class Category { kAccuracy, kConsistency, kTransparency };

inline constexpr std::array<Category, 3> kAllCategories = {
    Category::kAccuracy, Category::kConsistency, Category::kTransparency};

// "accuracy", "consistency", "transparency".
std::string_view CategoryName(Category category);
std::optional<Category> ParseCategory(std::string_view name);

// Maturity level. kNone is "below Level I"; it is only ever an assignment
// result and never a rubric row.
enum class Level : int { kNone = 0, kI = 1, kII = 2, kIII = 3, kIV = 4 };

inline constexpr std::array<Level, 4> kRubricLevels = {Level::kI, Level::kII,
                                                      Level::kIII, Level::kIV};

// "I".."IV"; kNone renders as "0".
std::string_view RomanNumeral(Level level);
// Accepts "I".."IV" and "1".."4".
std::optional<Level> ParseLevel(std::string_view text);

// An exact rational with a positive denominator. Values are kept as given
// (6/10 stays 6/10) so reports can show raw counts; comparisons are by value.
class Ratio {
 public:
  Ratio() = default;
  // Throws EvaluationError when denominator <= 0 or numerator < 0.
  Ratio(int64_t numerator, int64_t denominator);

  // Exact parse of "0.60", "1", "3/5". Throws std::invalid_argument.
  static Ratio Parse(std::string_view text);

  int64_t numerator() const { return numerator_; }
  int64_t denominator() const { return denominator_; }

  Ratio Reduced() const;
  double ToDouble() const;
  // "num/den" exactly as stored.
  std::string ToString() const;

  friend bool operator==(const Ratio& a, const Ratio& b);
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  int64_t numerator_ = 0;
  int64_t denominator_ = 1;
};

// Unweighted mean of the given ratios, reduced. Throws on empty input.
Ratio MeanOf(const std::vector<Ratio>& values);

enum class Comparison { kAtLeast, kAbove };

std::string_view ComparisonSymbol(Comparison comparison);  // ">=" or ">"

struct Threshold {
  Ratio fraction;
  Comparison comparison = Comparison::kAtLeast;

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

// Exact comparison of numerator/denominator against the threshold using
// integer cross-multiplication. Throws EvaluationError if denominator <= 0.
bool Meets(const Threshold& threshold, int64_t numerator, int64_t denominator);
bool Meets(const Threshold& threshold, const Ratio& value);

enum class Regime { kIdentical, kSettingsVariation, kLinguisticVariation };

inline constexpr std::array<Regime, 3> kAllRegimes = {
    Regime::kIdentical, Regime::kSettingsVariation,
    Regime::kLinguisticVariation};

std::string_view RegimeName(Regime regime);
std::optional<Regime> ParseRegime(std::string_view name);

struct StabilityThreshold {
  Regime regime = Regime::kIdentical;
  Threshold threshold;

  friend bool operator==(const StabilityThreshold&,
                         const StabilityThreshold&) = default;
};

enum class CheckKind { kMachine, kAttested };

struct CriterionSpec {
  std::string id;
  std::string description;
  CheckKind kind = CheckKind::kMachine;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

enum class CriterionStatus { kPass, kFail, kAttestedPass, kNotEvaluated };

std::string_view StatusName(CriterionStatus status);
std::optional<CriterionStatus> ParseStatus(std::string_view name);

struct CriterionResult {
  std::string criterion_id;
  CriterionStatus status = CriterionStatus::kNotEvaluated;
  // Log paths, record ids, document paths.
  std::vector<std::string> evidence;
  std::optional<Ratio> measured;
  std::string note;

  friend bool operator==(const CriterionResult&,
                         const CriterionResult&) = default;
};

using LevelResults = std::map<Level, std::vector<CriterionResult>>;

struct MaturityRubric {
  std::map<Level, Threshold> accuracy_thresholds;
  std::map<Level, StabilityThreshold> stability_thresholds;
  // Presence fraction required of explanations and traces among successful
  // generations. Not a maturity-model number; a harness default.
  Threshold presence_threshold;
  std::map<Category, std::map<Level, std::vector<CriterionSpec>>> criteria;

  const CriterionSpec* FindCriterion(std::string_view id) const;
  const std::vector<CriterionSpec>& CriteriaAt(Category category,
                                               Level level) const;

  friend bool operator==(const MaturityRubric&,
                         const MaturityRubric&) = default;
};

MaturityRubric DefaultRubric();

// Throws EvaluationError when accuracy thresholds decrease with level, when
// a level row is missing, or when criterion ids collide.
void ValidateRubric(const MaturityRubric& rubric);

// Highest L such that every level 1..L has at least one result and all of
// its results are pass or attested-pass. Missing levels cap below them.
Level AssignLevel(const LevelResults& results);

// A well-formed result: pass needs evidence; attested-pass only for
// attested criteria and machine pass only for machine criteria.
bool IsWellFormed(const CriterionResult& result, const CriterionSpec& spec);

nlohmann::json RubricToJson(const MaturityRubric& rubric);
MaturityRubric RubricFromJson(const nlohmann::json& json);

// Overrides in the config-file form:
//   {"accuracy": {"I": "0.70"}, "accuracy_comparison": {"IV": ">="},
//    "consistency": {"III": 0.65}, "presence": "0.9"}
// Values may be JSON numbers or exact strings. Throws UsageError.
void ApplyRubricOverrides(const nlohmann::json& overrides,
                          MaturityRubric* rubric);

// Flag form: "accuracy.I=0.70", "consistency.IV=0.95", "presence=0.9".
void ApplyRubricOverride(std::string_view assignment, MaturityRubric* rubric);

}  // namespace ttq

#endif  // TTQ_RUBRIC_H_
