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

#include "ttq/rubric.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ttq/error.h"

namespace ttq {

namespace {

using Int128 = __int128;

int64_t Narrow(Int128 value) {
  if (value > INT64_MAX || value < INT64_MIN) {
    throw EvaluationError("rational arithmetic overflow");
  }
  return static_cast<int64_t>(value);
}

template <typename Enum, size_t N>
std::optional<Enum> LookupByName(
    std::string_view name, const std::array<Enum, N>& values,
    std::string_view (*namer)(Enum)) {
  for (Enum v : values) {
    if (namer(v) == name) return v;
  }
  return std::nullopt;
}

CriterionSpec Machine(std::string id, std::string description) {
  return {std::move(id), std::move(description), CheckKind::kMachine};
}

CriterionSpec Attested(std::string id, std::string description) {
  return {std::move(id), std::move(description), CheckKind::kAttested};
}

}  // namespace

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kAccuracy:
      return "accuracy";
    case Category::kConsistency:
      return "consistency";
    case Category::kTransparency:
      return "transparency";
  }
  return "unknown";
}

std::optional<Category> ParseCategory(std::string_view name) {
  return LookupByName(name, kAllCategories, &CategoryName);
}

std::string_view RomanNumeral(Level level) {
  switch (level) {
    case Level::kNone:
      return "0";
    case Level::kI:
      return "I";
    case Level::kII:
      return "II";
    case Level::kIII:
      return "III";
    case Level::kIV:
      return "IV";
  }
  return "?";
}

std::optional<Level> ParseLevel(std::string_view text) {
  for (Level level : kRubricLevels) {
    if (RomanNumeral(level) == text) return level;
    if (text.size() == 1 && text[0] - '0' == static_cast<int>(level)) {
      return level;
    }
  }
  return std::nullopt;
}

// --- Ratio ---

Ratio::Ratio(int64_t numerator, int64_t denominator)
    : numerator_(numerator), denominator_(denominator) {
  if (denominator <= 0) {
    throw EvaluationError("ratio with non-positive denominator");
  }
  if (numerator < 0) throw EvaluationError("ratio with negative numerator");
}

Ratio Ratio::Parse(std::string_view text) {
  auto parse_int = [&](std::string_view digits) -> int64_t {
    int64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() ||
        ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("not a fraction: " + std::string(text));
    }
    return value;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    int64_t den = parse_int(text.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("zero denominator");
    return Ratio(parse_int(text.substr(0, slash)), den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Ratio(parse_int(text), 1);
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 15) {
    throw std::invalid_argument("too many decimal places: " +
                                std::string(text));
  }
  int64_t scale = 1;
  for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
  int64_t w = whole.empty() ? 0 : parse_int(whole);
  int64_t f = frac.empty() ? 0 : parse_int(frac);
  return Ratio(Narrow(Int128{w} * scale + f), scale).Reduced();
}

Ratio Ratio::Reduced() const {
  int64_t g = std::gcd(numerator_, denominator_);
  if (g == 0) return *this;
  return Ratio(numerator_ / g, denominator_ / g);
}

double Ratio::ToDouble() const {
  return static_cast<double>(numerator_) / static_cast<double>(denominator_);
}

std::string Ratio::ToString() const {
  return std::to_string(numerator_) + "/" + std::to_string(denominator_);
}

bool operator==(const Ratio& a, const Ratio& b) {
  return Int128{a.numerator_} * b.denominator_ ==
         Int128{b.numerator_} * a.denominator_;
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  Int128 lhs = Int128{a.numerator_} * b.denominator_;
  Int128 rhs = Int128{b.numerator_} * a.denominator_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ratio MeanOf(const std::vector<Ratio>& values) {
  if (values.empty()) throw EvaluationError("mean of an empty set");
  // Sum as a reduced fraction, then divide by the count.
  int64_t num = 0;
  int64_t den = 1;
  for (const Ratio& v : values) {
    Ratio r = v.Reduced();
    int64_t g = std::gcd(den, r.denominator());
    Int128 lcm = Int128{den / g} * r.denominator();
    Int128 sum = Int128{num} * (lcm / den) +
                 Int128{r.numerator()} * (lcm / r.denominator());
    Ratio reduced = Ratio(Narrow(sum), Narrow(lcm)).Reduced();
    num = reduced.numerator();
    den = reduced.denominator();
  }
  return Ratio(num, Narrow(Int128{den} * static_cast<int64_t>(values.size())))
      .Reduced();
}

std::string_view ComparisonSymbol(Comparison comparison) {
  return comparison == Comparison::kAbove ? ">" : ">=";
}

bool Meets(const Threshold& threshold, int64_t numerator,
           int64_t denominator) {
  if (denominator <= 0) {
    throw EvaluationError("threshold check with zero denominator");
  }
  Int128 lhs = Int128{numerator} * threshold.fraction.denominator();
  Int128 rhs = Int128{threshold.fraction.numerator()} * denominator;
  return threshold.comparison == Comparison::kAbove ? lhs > rhs : lhs >= rhs;
}

bool Meets(const Threshold& threshold, const Ratio& value) {
  return Meets(threshold, value.numerator(), value.denominator());
}

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kIdentical:
      return "identical";
    case Regime::kSettingsVariation:
      return "settings-variation";
    case Regime::kLinguisticVariation:
      return "linguistic-variation";
  }
  return "unknown";
}

std::optional<Regime> ParseRegime(std::string_view name) {
  return LookupByName(name, kAllRegimes, &RegimeName);
}

std::string_view StatusName(CriterionStatus status) {
  switch (status) {
    case CriterionStatus::kPass:
      return "pass";
    case CriterionStatus::kFail:
      return "fail";
    case CriterionStatus::kAttestedPass:
      return "attested-pass";
    case CriterionStatus::kNotEvaluated:
      return "not-evaluated";
  }
  return "unknown";
}

std::optional<CriterionStatus> ParseStatus(std::string_view name) {
  static constexpr std::array<CriterionStatus, 4> kAll = {
      CriterionStatus::kPass, CriterionStatus::kFail,
      CriterionStatus::kAttestedPass, CriterionStatus::kNotEvaluated};
  return LookupByName(name, kAll, &StatusName);
}

// --- MaturityRubric ---

const CriterionSpec* MaturityRubric::FindCriterion(std::string_view id) const {
  for (const auto& [category, levels] : criteria) {
    for (const auto& [level, specs] : levels) {
      for (const CriterionSpec& spec : specs) {
        if (spec.id == id) return &spec;
      }
    }
  }
  return nullptr;
}

const std::vector<CriterionSpec>& MaturityRubric::CriteriaAt(
    Category category, Level level) const {
  static const std::vector<CriterionSpec> kEmpty;
  auto c = criteria.find(category);
  if (c == criteria.end()) return kEmpty;
  auto l = c->second.find(level);
  return l == c->second.end() ? kEmpty : l->second;
}

MaturityRubric DefaultRubric() {
  MaturityRubric rubric;
  auto at_least = [](std::string_view f) {
    return Threshold{Ratio::Parse(f), Comparison::kAtLeast};
  };
  rubric.accuracy_thresholds = {
      {Level::kI, at_least("0.60")},
      {Level::kII, at_least("0.80")},
      {Level::kIII, at_least("0.90")},
      {Level::kIV, Threshold{Ratio::Parse("0.90"), Comparison::kAbove}},
  };
  rubric.stability_thresholds = {
      {Level::kI, {Regime::kIdentical, at_least("0.80")}},
      {Level::kII, {Regime::kSettingsVariation, at_least("0.80")}},
      {Level::kIII, {Regime::kLinguisticVariation, at_least("0.60")}},
      {Level::kIV, {Regime::kLinguisticVariation, at_least("0.90")}},
  };
  rubric.presence_threshold = at_least("0.95");

  auto& accuracy = rubric.criteria[Category::kAccuracy];
  accuracy[Level::kI] = {
      Machine("accuracy-threshold-I",
              "Execution accuracy on tier-I turns meets the Level I threshold"),
      Machine("basic-queries",
              "Tier-I cases exist and simple questions translate correctly"),
      Machine("dataset-performance-I",
              "Threshold reached on the suite's straightforward-schema slice"),
  };
  accuracy[Level::kII] = {
      Machine("accuracy-threshold-II",
              "Execution accuracy on tier-II turns meets the Level II "
              "threshold"),
      Machine("complex-queries",
              "Tier-II cases (joins, aggregation, nesting) exist and "
              "translate correctly"),
      Machine("dataset-performance-II",
              "Threshold reached on the suite's complex-schema slice"),
  };
  accuracy[Level::kIII] = {
      Machine("accuracy-threshold-III",
              "Execution accuracy on tier-III turns meets the Level III "
              "threshold"),
      Machine("contextual-understanding",
              "Multi-turn and implicit-intent cases exist and translate "
              "correctly with gold history"),
      Machine("dataset-performance-III",
              "Threshold reached on the suite's contextual slice"),
  };
  accuracy[Level::kIV] = {
      Machine("accuracy-threshold-IV",
              "Execution accuracy on tier-IV turns meets the Level IV "
              "threshold"),
      Machine("domain-expertise",
              "Domain-jargon cases exist and translate correctly"),
      Machine("dataset-performance-IV",
              "Threshold reached on the suite's domain-specific slice"),
  };

  auto& consistency = rubric.criteria[Category::kConsistency];
  consistency[Level::kI] = {Machine(
      "identical-stability",
      "Stability under repeated identical requests meets the Level I "
      "threshold")};
  consistency[Level::kII] = {Machine(
      "settings-stability",
      "Stability across settings profiles meets the Level II threshold")};
  consistency[Level::kIII] = {Machine(
      "linguistic-stability-III",
      "Stability across paraphrases meets the Level III threshold")};
  consistency[Level::kIV] = {Machine(
      "linguistic-stability-IV",
      "Stability across paraphrases meets the Level IV threshold")};

  auto& transparency = rubric.criteria[Category::kTransparency];
  transparency[Level::kI] = {
      Machine("query-logging",
              "Every generation has one request and one response log entry"),
      Machine("basic-model-documentation",
              "A model-documentation file is registered and non-empty"),
      Attested("minimal-traceability",
               "Manifest attests a minimal traceability standard"),
  };
  transparency[Level::kII] = {
      Machine("enhanced-logging",
              "Every log entry carries timestamp, session id and case id"),
      Machine("interpretability-signal",
              "Successful generations carry a non-empty explanation"),
      Machine("data-documentation",
              "A data-documentation file is registered and non-empty"),
  };
  transparency[Level::kIII] = {
      Machine("stepwise-reasoning",
              "Successful generations carry a contiguous step trace"),
      Attested("feedback-observability",
               "Manifest attests an observability or feedback UI"),
      Machine("comprehensive-documentation",
              "A performance-limitations file is registered and non-empty"),
      Attested("disclosure-standards",
               "Manifest attests that disclosure standards are met"),
  };
  transparency[Level::kIV] = {
      Machine("per-decision-logs",
              "Every trace step has a matching decision log entry"),
      Machine("ethical-documentation",
              "An ethical-societal file is registered and non-empty"),
      Attested("bias-mitigation",
               "A bias-mitigation file is registered and its framework is "
               "attested"),
  };
  return rubric;
}

void ValidateRubric(const MaturityRubric& rubric) {
  for (Level level : kRubricLevels) {
    if (!rubric.accuracy_thresholds.contains(level) ||
        !rubric.stability_thresholds.contains(level)) {
      throw EvaluationError("rubric is missing Level " +
                            std::string(RomanNumeral(level)));
    }
  }
  // Ordering over (fraction, strictness): ">= x" < "> x".
  auto key = [](const Threshold& t) {
    return std::pair(t.fraction, t.comparison == Comparison::kAbove);
  };
  for (size_t i = 1; i < kRubricLevels.size(); ++i) {
    const Threshold& lo = rubric.accuracy_thresholds.at(kRubricLevels[i - 1]);
    const Threshold& hi = rubric.accuracy_thresholds.at(kRubricLevels[i]);
    if (key(hi) < key(lo)) {
      throw EvaluationError(
          "accuracy thresholds must be nondecreasing in level (Level " +
          std::string(RomanNumeral(kRubricLevels[i])) + ")");
    }
  }
  for (const auto& [level, threshold] : rubric.accuracy_thresholds) {
    if (threshold.fraction > Ratio(1, 1)) {
      throw EvaluationError("accuracy threshold above 1");
    }
  }
  for (const auto& [level, st] : rubric.stability_thresholds) {
    if (st.threshold.fraction > Ratio(1, 1)) {
      throw EvaluationError("stability threshold above 1");
    }
  }
  std::set<std::string> seen;
  for (const auto& [category, levels] : rubric.criteria) {
    for (const auto& [level, specs] : levels) {
      for (const CriterionSpec& spec : specs) {
        if (!seen.insert(spec.id).second) {
          throw EvaluationError("duplicate criterion id " + spec.id);
        }
      }
    }
  }
}

Level AssignLevel(const LevelResults& results) {
  Level assigned = Level::kNone;
  for (Level level : kRubricLevels) {
    auto it = results.find(level);
    if (it == results.end() || it->second.empty()) break;
    bool all_pass = std::all_of(
        it->second.begin(), it->second.end(), [](const CriterionResult& r) {
          return r.status == CriterionStatus::kPass ||
                 r.status == CriterionStatus::kAttestedPass;
        });
    if (!all_pass) break;
    assigned = level;
  }
  return assigned;
}

bool IsWellFormed(const CriterionResult& result, const CriterionSpec& spec) {
  switch (result.status) {
    case CriterionStatus::kPass:
      return spec.kind == CheckKind::kMachine && !result.evidence.empty();
    case CriterionStatus::kAttestedPass:
      return spec.kind == CheckKind::kAttested && !result.evidence.empty();
    case CriterionStatus::kFail:
    case CriterionStatus::kNotEvaluated:
      return true;
  }
  return false;
}

// --- Serialization ---

namespace {

nlohmann::json ThresholdToJson(const Threshold& t) {
  return {{"fraction", t.fraction.ToString()},
          {"comparison", std::string(ComparisonSymbol(t.comparison))}};
}

Comparison ParseComparison(const std::string& symbol) {
  if (symbol == ">=") return Comparison::kAtLeast;
  if (symbol == ">") return Comparison::kAbove;
  throw LoadError("rubric", "unknown comparison '" + symbol + "'");
}

Threshold ThresholdFromJson(const nlohmann::json& j) {
  return Threshold{Ratio::Parse(j.at("fraction").get<std::string>()),
                   ParseComparison(j.at("comparison").get<std::string>())};
}

Level LevelKey(const std::string& key) {
  auto level = ParseLevel(key);
  if (!level) throw LoadError("rubric", "unknown level '" + key + "'");
  return *level;
}

std::string_view CheckKindName(CheckKind kind) {
  return kind == CheckKind::kAttested ? "attested" : "machine";
}

// Accepts JSON numbers (via their shortest decimal form) or strings.
Ratio RatioFromOverride(const nlohmann::json& value) {
  try {
    if (value.is_string()) return Ratio::Parse(value.get<std::string>());
    if (value.is_number()) return Ratio::Parse(value.dump());
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad threshold value: ") + e.what());
  }
  throw UsageError("threshold override must be a number or string");
}

}  // namespace

nlohmann::json RubricToJson(const MaturityRubric& rubric) {
  nlohmann::json out;
  for (const auto& [level, t] : rubric.accuracy_thresholds) {
    out["accuracy_thresholds"][std::string(RomanNumeral(level))] =
        ThresholdToJson(t);
  }
  for (const auto& [level, st] : rubric.stability_thresholds) {
    nlohmann::json j = ThresholdToJson(st.threshold);
    j["regime"] = std::string(RegimeName(st.regime));
    out["stability_thresholds"][std::string(RomanNumeral(level))] = j;
  }
  out["presence_threshold"] = ThresholdToJson(rubric.presence_threshold);
  for (const auto& [category, levels] : rubric.criteria) {
    for (const auto& [level, specs] : levels) {
      nlohmann::json list = nlohmann::json::array();
      for (const CriterionSpec& spec : specs) {
        list.push_back({{"id", spec.id},
                        {"description", spec.description},
                        {"check", std::string(CheckKindName(spec.kind))}});
      }
      out["criteria"][std::string(CategoryName(category))]
         [std::string(RomanNumeral(level))] = std::move(list);
    }
  }
  return out;
}

MaturityRubric RubricFromJson(const nlohmann::json& json) {
  MaturityRubric rubric;
  try {
    for (const auto& [key, t] : json.at("accuracy_thresholds").items()) {
      rubric.accuracy_thresholds[LevelKey(key)] = ThresholdFromJson(t);
    }
    for (const auto& [key, t] : json.at("stability_thresholds").items()) {
      auto regime = ParseRegime(t.at("regime").get<std::string>());
      if (!regime) throw LoadError("rubric", "unknown regime");
      rubric.stability_thresholds[LevelKey(key)] = {*regime,
                                                    ThresholdFromJson(t)};
    }
    rubric.presence_threshold =
        ThresholdFromJson(json.at("presence_threshold"));
    for (const auto& [cat_name, levels] : json.at("criteria").items()) {
      auto category = ParseCategory(cat_name);
      if (!category) throw LoadError("rubric", "unknown category " + cat_name);
      for (const auto& [level_name, specs] : levels.items()) {
        auto& list = rubric.criteria[*category][LevelKey(level_name)];
        for (const auto& spec : specs) {
          std::string check = spec.at("check").get<std::string>();
          if (check != "machine" && check != "attested") {
            throw LoadError("rubric", "unknown check kind " + check);
          }
          list.push_back({spec.at("id").get<std::string>(),
                          spec.at("description").get<std::string>(),
                          check == "attested" ? CheckKind::kAttested
                                              : CheckKind::kMachine});
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("rubric", e.what());
  } catch (const std::invalid_argument& e) {
    throw LoadError("rubric", e.what());
  }
  return rubric;
}

void ApplyRubricOverrides(const nlohmann::json& overrides,
                          MaturityRubric* rubric) {
  if (!overrides.is_object()) {
    throw UsageError("rubric overrides must be a JSON object");
  }
  auto level_of = [](const std::string& key) {
    auto level = ParseLevel(key);
    if (!level) throw UsageError("unknown level '" + key + "' in override");
    return *level;
  };
  for (const auto& [section, body] : overrides.items()) {
    if (section == "presence") {
      rubric->presence_threshold.fraction = RatioFromOverride(body);
      continue;
    }
    if (!body.is_object()) {
      throw UsageError("override section '" + section + "' must be an object");
    }
    for (const auto& [key, value] : body.items()) {
      Level level = level_of(key);
      if (section == "accuracy") {
        rubric->accuracy_thresholds[level].fraction = RatioFromOverride(value);
      } else if (section == "accuracy_comparison") {
        rubric->accuracy_thresholds[level].comparison =
            ParseComparison(value.get<std::string>());
      } else if (section == "consistency") {
        rubric->stability_thresholds[level].threshold.fraction =
            RatioFromOverride(value);
      } else {
        throw UsageError("unknown override section '" + section + "'");
      }
    }
  }
  try {
    ValidateRubric(*rubric);
  } catch (const EvaluationError& e) {
    throw UsageError(std::string("rubric override rejected: ") + e.what());
  }
}

void ApplyRubricOverride(std::string_view assignment, MaturityRubric* rubric) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw UsageError("override must look like accuracy.I=0.70");
  }
  std::string lhs(assignment.substr(0, eq));
  std::string rhs(assignment.substr(eq + 1));
  nlohmann::json overrides;
  if (auto dot = lhs.find('.'); dot != std::string::npos) {
    overrides[lhs.substr(0, dot)][lhs.substr(dot + 1)] = rhs;
  } else {
    overrides[lhs] = rhs;
  }
  ApplyRubricOverrides(overrides, rubric);
}

}  // namespace ttq
