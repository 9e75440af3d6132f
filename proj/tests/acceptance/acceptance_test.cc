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

// Acceptance suite: one gtest suite per criterion, one PASS/FAIL line per
// criterion on stdout.

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "acceptance/oracle.h"
#include "httplib.h"
#include "support/test_support.h"
#include "ttq/accuracy.h"
#include "ttq/cli.h"
#include "ttq/consistency.h"
#include "ttq/fixtures.h"
#include "ttq/report.h"
#include "ttq/rubric.h"
#include "ttq/sqlcheck.h"
#include "ttq/transparency.h"

namespace ttq {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::ReadText;
using testing::ReplayDir;
using testing::SuiteDir;
using testing::TempDir;

// Independent threshold check: value n/d against p/q by cross-multiplying.
bool AtLeast(int64_t n, int64_t d, int64_t p, int64_t q) { return n * q >= p * d; }
bool Above(int64_t n, int64_t d, int64_t p, int64_t q) { return n * q > p * d; }

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "ttq");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const CriterionResult& Find(const CategoryResult& r, Level level,
                            const std::string& id) {
  for (const CriterionResult& c : r.levels.at(level)) {
    if (c.criterion_id == id) return c;
  }
  throw std::runtime_error("no criterion " + id);
}

AssessmentReport AssessReplay(const TestSuite& suite, const fs::path& replay,
                              std::set<Category> categories) {
  auto sut = ReplaySut::Load(replay);
  FixedClock clock;
  AssessOptions options;
  options.categories = std::move(categories);
  options.clock = &clock;
  return Assess(suite, *sut, {{"kind", "replay"}}, nullptr, DefaultRubric(),
                options)
      .report;
}

// --- 1. Rubric fidelity -----------------------------------------------------

// Transcribed from the maturity model's level definitions, as percentages.
struct Transcribed {
  Level level;
  int64_t percent;
  bool strict;
};
constexpr Transcribed kAccuracyLevels[] = {
    {Level::kI, 60, false},
    {Level::kII, 80, false},
    {Level::kIII, 90, false},
    {Level::kIV, 90, true},
};
constexpr struct {
  Level level;
  Regime regime;
  int64_t percent;
} kStabilityLevels[] = {
    {Level::kI, Regime::kIdentical, 80},
    {Level::kII, Regime::kSettingsVariation, 80},
    {Level::kIII, Regime::kLinguisticVariation, 60},
    {Level::kIV, Regime::kLinguisticVariation, 90},
};

TEST(Criterion1, AccuracyThresholdsFieldByField) {
  MaturityRubric rubric = DefaultRubric();
  ASSERT_EQ(rubric.accuracy_thresholds.size(), 4u);
  for (const Transcribed& t : kAccuracyLevels) {
    const Threshold& th = rubric.accuracy_thresholds.at(t.level);
    EXPECT_EQ(th.fraction, Ratio(t.percent, 100)) << RomanNumeral(t.level);
    EXPECT_EQ(th.comparison, t.strict ? Comparison::kAbove : Comparison::kAtLeast)
        << RomanNumeral(t.level);
  }
}

TEST(Criterion1, StabilityThresholdsFieldByField) {
  MaturityRubric rubric = DefaultRubric();
  ASSERT_EQ(rubric.stability_thresholds.size(), 4u);
  for (const auto& t : kStabilityLevels) {
    const StabilityThreshold& st = rubric.stability_thresholds.at(t.level);
    EXPECT_EQ(st.regime, t.regime) << RomanNumeral(t.level);
    EXPECT_EQ(st.threshold.fraction, Ratio(t.percent, 100));
    EXPECT_EQ(st.threshold.comparison, Comparison::kAtLeast);
  }
}

TEST(Criterion1, ThresholdsAreExactRationals) {
  MaturityRubric rubric = DefaultRubric();
  // 0.9 exactly: 9/10 meets ">= 0.90" and fails "> 0.90".
  EXPECT_TRUE(Meets(rubric.accuracy_thresholds.at(Level::kIII), 9, 10));
  EXPECT_FALSE(Meets(rubric.accuracy_thresholds.at(Level::kIV), 9, 10));
  EXPECT_TRUE(Meets(rubric.accuracy_thresholds.at(Level::kIV), 901, 1000));
  EXPECT_FALSE(Meets(rubric.accuracy_thresholds.at(Level::kI), 599999, 1000000));
}

// --- 2. Golden end-to-end ---------------------------------------------------

TEST(Criterion2, GoldenReplayReachesLevelFourEverywhere) {
  TempDir a;
  TempDir b;
  std::vector<std::string> args = {
      "assess", "--suite", SuiteDir("les-demo").string(), "--sut",
      (ReplayDir("les-demo") / "golden.json").string(), "--fixed-clock",
      "--seed", "7"};
  auto with_out = [&](const TempDir& dir) {
    std::vector<std::string> v = args;
    v.push_back("--out");
    v.push_back((dir / "report.json").string());
    return v;
  };
  CliRun first = RunCli(with_out(a));
  ASSERT_EQ(first.code, kExitOk) << first.err;
  CliRun second = RunCli(with_out(b));
  ASSERT_EQ(second.code, kExitOk) << second.err;

  json report = json::parse(ReadText(a / "report.json"));
  EXPECT_EQ(report["maturity_vector"],
            json({{"accuracy", 4}, {"consistency", 4}, {"transparency", 4}}));
  EXPECT_NE(first.err.find("accuracy=IV consistency=IV transparency=IV"),
            std::string::npos);
  EXPECT_EQ(ReadText(a / "report.json"), ReadText(b / "report.json"));
  EXPECT_EQ(ReadText(a / "report.log.jsonl"), ReadText(b / "report.log.jsonl"));
  EXPECT_TRUE(RederivationMismatches(ReportFromJson(report)).empty());
}

// --- 3. Boundary fixtures ---------------------------------------------------

class Criterion3 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    suite_ = new TestSuite(testing::LoadBundledSuite("boundary"));
  }
  static void TearDownTestSuite() { delete suite_; }

  static CategoryResult Run(const std::string& fixture, Category category) {
    AssessmentReport report = AssessReplay(
        *suite_, ReplayDir("boundary") / (fixture + ".jsonl"), {category});
    return report.categories.at(category);
  }

  static TestSuite* suite_;
};
TestSuite* Criterion3::suite_ = nullptr;

TEST_F(Criterion3, TierOneSixOfTenPassesLevelOne) {
  CategoryResult r = Run("accuracy-i-6of10", Category::kAccuracy);
  const CriterionResult& c = Find(r, Level::kI, "accuracy-threshold-I");
  ASSERT_TRUE(c.measured);
  EXPECT_EQ(c.measured->numerator(), 6);
  EXPECT_EQ(c.measured->denominator(), 10);
  EXPECT_TRUE(AtLeast(6, 10, 60, 100));
  EXPECT_EQ(c.status, CriterionStatus::kPass);
  EXPECT_GE(r.assigned, Level::kI);
}

TEST_F(Criterion3, TierOneFiveOfTenIsLevelZero) {
  CategoryResult r = Run("accuracy-i-5of10", Category::kAccuracy);
  const CriterionResult& c = Find(r, Level::kI, "accuracy-threshold-I");
  EXPECT_EQ(*c.measured, Ratio(5, 10));
  EXPECT_FALSE(AtLeast(5, 10, 60, 100));
  EXPECT_EQ(c.status, CriterionStatus::kFail);
  EXPECT_EQ(r.assigned, Level::kNone);
}

TEST_F(Criterion3, IdenticalFourOfFivePassesLevelOne) {
  CategoryResult r = Run("identical-4of5", Category::kConsistency);
  const CriterionResult& c = Find(r, Level::kI, "identical-stability");
  EXPECT_EQ(*c.measured, Ratio(4, 5));
  EXPECT_TRUE(AtLeast(4, 5, 80, 100));
  EXPECT_EQ(c.status, CriterionStatus::kPass);
  EXPECT_GE(r.assigned, Level::kI);
}

TEST_F(Criterion3, IdenticalThreeOfFiveFails) {
  CategoryResult r = Run("identical-3of5", Category::kConsistency);
  const CriterionResult& c = Find(r, Level::kI, "identical-stability");
  EXPECT_EQ(*c.measured, Ratio(3, 5));
  EXPECT_FALSE(AtLeast(3, 5, 80, 100));
  EXPECT_EQ(c.status, CriterionStatus::kFail);
  EXPECT_EQ(r.assigned, Level::kNone);
}

TEST_F(Criterion3, LinguisticThreeOfFivePassesThreeFailsFour) {
  CategoryResult r = Run("linguistic-3of5", Category::kConsistency);
  const CriterionResult& l3 = Find(r, Level::kIII, "linguistic-stability-III");
  const CriterionResult& l4 = Find(r, Level::kIV, "linguistic-stability-IV");
  EXPECT_EQ(*l3.measured, Ratio(3, 5));
  EXPECT_TRUE(AtLeast(3, 5, 60, 100));
  EXPECT_FALSE(AtLeast(3, 5, 90, 100));
  EXPECT_EQ(l3.status, CriterionStatus::kPass);
  EXPECT_EQ(l4.status, CriterionStatus::kFail);
  EXPECT_EQ(r.assigned, Level::kIII);
}

TEST_F(Criterion3, LinguisticNineOfTenMeetsInclusiveLevelFour) {
  // The linguistic Level IV bound is inclusive, so 9/10 passes there; the
  // strict 0.90 boundary lives on the accuracy side (next test).
  CategoryResult r = Run("linguistic-9of10", Category::kConsistency);
  const CriterionResult& l4 = Find(r, Level::kIV, "linguistic-stability-IV");
  EXPECT_EQ(*l4.measured, Ratio(9, 10));
  EXPECT_TRUE(AtLeast(9, 10, 90, 100));
  EXPECT_EQ(l4.status, CriterionStatus::kPass);
}

TEST_F(Criterion3, TierFourNineOfTenStopsAtLevelThree) {
  CategoryResult r = Run("accuracy-iv-9of10", Category::kAccuracy);
  const CriterionResult& c = Find(r, Level::kIV, "accuracy-threshold-IV");
  EXPECT_EQ(*c.measured, Ratio(9, 10));
  EXPECT_FALSE(Above(9, 10, 90, 100));
  EXPECT_EQ(c.status, CriterionStatus::kFail);
  EXPECT_EQ(r.assigned, Level::kIII);
}

// --- 4. Cumulativity --------------------------------------------------------

TEST(Criterion4, BrokenTierTwoCapsAtLevelOne) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  AssessmentReport report =
      AssessReplay(suite, ReplayDir("les-demo") / "tier-ii-broken.jsonl",
                   {Category::kAccuracy});
  const CategoryResult& r = report.categories.at(Category::kAccuracy);
  for (Level level : {Level::kI, Level::kIII, Level::kIV}) {
    for (const CriterionResult& c : r.levels.at(level)) {
      EXPECT_EQ(c.status, CriterionStatus::kPass) << c.criterion_id;
    }
  }
  const json& tier_two = r.metrics["tiers"]["II"];
  EXPECT_EQ(tier_two["correct"], 0);
  EXPECT_GT(tier_two["total"].get<int>(), 0);
  EXPECT_EQ(r.assigned, Level::kI);
}

// --- 5. Equivalence oracle --------------------------------------------------

struct Pair {
  const char* suite;
  const char* db;
  const char* generated;
  const char* gold;
  bool ordered;
};

// Generated/gold pairs over the bundled fixtures; verdicts come from the
// oracle, not from this table.
const Pair kPairs[] = {
    {"les-demo", "hr", "SELECT first_name FROM employees WHERE dept_id = 1",
     "SELECT e.first_name FROM employees e JOIN departments d ON d.dept_id = "
     "e.dept_id WHERE d.name = 'Human Resources'",
     false},
    {"les-demo", "hr", "SELECT first_name FROM employees WHERE age > 30",
     "SELECT first_name FROM employees WHERE age >= 30", false},
    {"les-demo", "hr",
     "SELECT dept_id, COUNT(*) FROM employees GROUP BY dept_id",
     "SELECT dept_id, COUNT(emp_id) FROM employees GROUP BY 1", false},
    {"les-demo", "hr", "SELECT DISTINCT region FROM sales",
     "SELECT region FROM sales GROUP BY region", false},
    {"les-demo", "hr", "SELECT region FROM sales",
     "SELECT DISTINCT region FROM sales", false},
    {"les-demo", "hr",
     "SELECT last_name FROM employees ORDER BY salary DESC LIMIT 3",
     "SELECT last_name FROM employees ORDER BY salary DESC LIMIT 3", true},
    {"les-demo", "hr",
     "SELECT last_name FROM employees ORDER BY salary ASC LIMIT 3",
     "SELECT last_name FROM employees ORDER BY salary DESC LIMIT 3", true},
    {"les-demo", "hr", "SELECT last_name FROM employees ORDER BY emp_id DESC",
     "SELECT last_name FROM employees ORDER BY emp_id", false},
    {"les-demo", "hr", "SELECT last_name FROM employees ORDER BY emp_id DESC",
     "SELECT last_name FROM employees ORDER BY emp_id", true},
    {"les-demo", "hr", "SELECT SUM(amount) FROM sales",
     "SELECT SUM(amount) * 1.0 FROM sales", false},
    {"les-demo", "hr", "SELECT AVG(salary) FROM employees",
     "SELECT SUM(salary) / COUNT(*) FROM employees", false},
    {"les-demo", "retail",
     "SELECT name FROM customers WHERE region IN ('West', 'East')",
     "SELECT name FROM customers WHERE region = 'West' OR region = 'East'",
     false},
    {"les-demo", "retail",
     "SELECT p.name FROM products p WHERE p.product_id IN (SELECT product_id "
     "FROM order_items)",
     "SELECT DISTINCT p.name FROM products p JOIN order_items oi ON "
     "oi.product_id = p.product_id",
     false},
    {"les-demo", "retail",
     "SELECT name FROM products WHERE unit_price BETWEEN 5 AND 20",
     "SELECT name FROM products WHERE unit_price >= 5 AND unit_price < 20",
     false},
    {"les-demo", "retail", "SELECT COUNT(*) FROM orders",
     "SELECT COUNT(order_id) FROM orders", false},
    {"les-demo", "retail", "SELECT name, region FROM customers",
     "SELECT region, name FROM customers", false},
    {"les-demo", "retail", "SELECT name FROM customers WHERE region = 'west'",
     "SELECT name FROM customers WHERE region = 'West'", false},
    {"les-demo", "les",
     "SELECT \"Number\" FROM PHONENUMBERS WHERE \"SubjectID\" = 1",
     "SELECT Number FROM phonenumbers WHERE SubjectID = 1", false},
    {"les-demo", "les",
     "SELECT \"CalledNumber\", COUNT(*) AS n FROM TOLLS GROUP BY "
     "\"CalledNumber\" ORDER BY n DESC, \"CalledNumber\" LIMIT 5",
     "SELECT CalledNumber, COUNT(ID) FROM TOLLS GROUP BY CalledNumber ORDER "
     "BY 2 DESC, 1 LIMIT 5",
     true},
    {"les-demo", "les", "SELECT fullname FROM NAMES WHERE fullname LIKE 'B%'",
     "SELECT fullname FROM NAMES WHERE substr(fullname, 1, 1) = 'B'", false},
    {"les-demo", "les", "SELECT COUNT(*) FROM TOLLS WHERE \"Duration\" > 60",
     "SELECT COUNT(*) FROM TOLLS WHERE \"Duration\" >= 60", false},
    {"les-demo", "exercise",
     "SELECT designation FROM units WHERE force = 'Red'",
     "SELECT designation FROM units WHERE force <> 'Blue'", false},
    {"les-demo", "exercise",
     "SELECT u.designation, COUNT(m.maneuver_id) FROM units u LEFT JOIN "
     "maneuvers m ON m.unit_id = u.unit_id GROUP BY u.unit_id",
     "SELECT u.designation, COUNT(*) FROM units u JOIN maneuvers m ON "
     "m.unit_id = u.unit_id GROUP BY u.unit_id",
     false},
    {"les-demo", "exercise",
     "WITH red AS (SELECT unit_id FROM units WHERE force = 'Red') SELECT "
     "COUNT(*) FROM maneuvers WHERE unit_id IN (SELECT unit_id FROM red)",
     "SELECT COUNT(*) FROM maneuvers m JOIN units u USING (unit_id) WHERE "
     "u.force = 'Red'",
     false},
    {"boundary", "staff",
     "SELECT e.name FROM employees e WHERE e.manager_id IS NULL",
     "SELECT name FROM employees WHERE NOT manager_id IS NOT NULL", false},
    {"boundary", "staff",
     "SELECT name FROM employees WHERE manager_id = NULL",
     "SELECT name FROM employees WHERE manager_id IS NULL", false},
    {"boundary", "staff",
     "SELECT d.name, MAX(e.salary) FROM departments d JOIN employees e ON "
     "e.dept_id = d.dept_id GROUP BY d.name",
     "SELECT d.name, (SELECT MAX(salary) FROM employees x WHERE x.dept_id = "
     "d.dept_id) FROM departments d",
     false},
    {"boundary", "staff", "SELECT name FROM employees WHERE nope = 1",
     "SELECT name FROM employees", false},
    {"boundary", "staff",
     "SELECT name FROM employees UNION SELECT name FROM departments",
     "SELECT name FROM employees UNION ALL SELECT name FROM departments",
     false},
    {"boundary", "staff", "SELECT CAST(age AS REAL) FROM employees",
     "SELECT age FROM employees", false},
};

TEST(Criterion5, VerdictsMatchDirectExecutionOracle) {
  std::map<std::string, TestSuite> suites;
  int equivalent = 0;
  int different = 0;
  for (const Pair& p : kPairs) {
    if (!suites.contains(p.suite)) {
      suites.emplace(p.suite, testing::LoadBundledSuite(p.suite));
    }
    const DatabaseFixture& fixture = suites.at(p.suite).Fixture(p.db);
    bool expected = oracle::SameResult(fixture, p.generated, p.gold, p.ordered);
    EquivalenceVerdict v = Equivalent(fixture, p.generated, p.gold, p.ordered);
    EXPECT_EQ(v.correct(), expected)
        << p.generated << " vs " << p.gold << ": " << v.diagnostics;
    (expected ? equivalent : different)++;
  }
  EXPECT_GE(std::size(kPairs), 20u);
  // The table exercises both outcomes.
  EXPECT_GE(equivalent, 5);
  EXPECT_GE(different, 5);
}

struct CorpusQuery {
  const char* db;
  const char* sql;
};

const CorpusQuery kCorpus[] = {
    {"hr", "select * from departments"},
    {"hr", "SELECT first_name,last_name FROM employees WHERE age<30"},
    {"hr", "select  first_name\n  from employees -- trailing comment\n"},
    {"hr", "/* lead */ SELECT emp_id FROM employees ORDER BY emp_id DESC"},
    {"hr", "SELECT count(*) AS n FROM sales"},
    {"hr", "select region, sum(amount) from sales group by region having "
           "sum(amount) > 1000"},
    {"hr", "SELECT e.first_name, d.name FROM employees e JOIN departments d "
           "ON e.dept_id=d.dept_id"},
    {"hr", "SELECT first_name FROM employees WHERE hire_date BETWEEN "
           "'2013-01-01' AND '2016-12-31'"},
    {"hr", "SELECT first_name || ' ' || last_name FROM employees"},
    {"hr", "SELECT CASE WHEN age < 30 THEN 'young' ELSE 'senior' END, "
           "COUNT(*) FROM employees GROUP BY 1"},
    {"hr", "select max(salary)-min(salary) from employees"},
    {"hr", "SELECT first_name FROM employees WHERE salary > (SELECT "
           "AVG(salary) FROM employees)"},
    {"hr", "SELECT DISTINCT dept_id FROM employees ORDER BY 1"},
    {"hr", "SELECT region FROM sales WHERE amount IN (100,200,  300)"},
    {"hr", "SELECT emp_id FROM sales EXCEPT SELECT emp_id FROM employees "
           "WHERE dept_id = 1"},
    {"hr", "SELECT emp_id, RANK() OVER (ORDER BY salary DESC) FROM "
           "employees"},
    {"hr", "SELECT last_name FROM employees WHERE last_name LIKE '%a%' "
           "ORDER BY last_name LIMIT 4 OFFSET 1"},
    {"hr", "SELECT -age, +salary, NOT (age > 40) FROM employees"},
    {"hr", "SELECT age - -1 FROM employees"},
    {"hr", "SELECT 'it''s', \"first_name\" FROM employees LIMIT 1;"},
    {"retail", "SELECT * FROM customers WHERE region='West';;"},
    {"retail", "select p.name, sum(oi.quantity) as units from products p "
               "join order_items oi on oi.product_id = p.product_id group "
               "by p.name order by units desc, p.name"},
    {"retail", "SELECT name FROM products WHERE unit_price >= 10.5"},
    {"retail", "SELECT ROUND(AVG(unit_price), 2) FROM products"},
    {"retail", "SELECT category, COUNT(*) FROM products GROUP BY category"},
    {"retail", "SELECT c.name FROM customers c WHERE EXISTS (SELECT 1 FROM "
               "orders o WHERE o.customer_id = c.customer_id)"},
    {"retail", "SELECT c.name FROM customers c LEFT OUTER JOIN orders o ON "
               "o.customer_id = c.customer_id WHERE o.order_id IS NULL"},
    {"retail", "SELECT `name` FROM [customers]"},
    {"retail", "SELECT CAST(unit_price AS INTEGER) FROM products"},
    {"retail", "SELECT name FROM customers WHERE region NOT IN ('West')"},
    {"retail", "SELECT COALESCE(NULL, name) FROM customers"},
    {"retail", "SELECT order_date, COUNT(*) FROM orders GROUP BY "
               "order_date ORDER BY order_date"},
    {"retail", "SELECT name FROM customers UNION SELECT name FROM products "
               "ORDER BY 1"},
    {"retail", "SELECT o.order_id, SUM(oi.quantity * p.unit_price) FROM "
               "orders o JOIN order_items oi ON oi.order_id = o.order_id "
               "JOIN products p ON p.product_id = oi.product_id GROUP BY "
               "o.order_id"},
    {"retail", "select upper(name), lower(region) from customers"},
    {"les", "SELECT \"Number\" FROM PHONENUMBERS"},
    {"les", "SELECT \"SubjectID\", \"City\" FROM ADDRESSES WHERE \"State\" "
            "= 'VA'"},
    {"les", "select n.fullname, s.DOB from SUBJECTS s join NAMES n on "
            "n.ID = s.NAMED"},
    {"les", "SELECT \"CalledNumber\", COUNT(*) FROM TOLLS GROUP BY 1 ORDER "
            "BY 2 DESC LIMIT 10"},
    {"les", "SELECT \"Latitude\", \"Longitude\" FROM ADDRESSES"},
    {"les", "SELECT SUM(\"Duration\") / 60.0 FROM TOLLS"},
    {"les", "SELECT \"Direction\", AVG(\"Duration\") FROM TOLLS GROUP BY "
            "\"Direction\""},
    {"les", "SELECT ID FROM SUBJECTS WHERE SEX IS NOT NULL AND DOB < "
            "'1980-01-01'"},
    {"les", "WITH calls AS (SELECT \"Target\" t FROM TOLLS) SELECT t, "
            "COUNT(*) FROM calls GROUP BY t"},
    {"les", "SELECT fullname FROM NAMES WHERE fullname GLOB '*son*'"},
    {"exercise", "SELECT * FROM units ORDER BY unit_id"},
    {"exercise", "SELECT u.designation, a.code FROM maneuvers m JOIN units u "
                 "ON u.unit_id = m.unit_id JOIN training_areas a ON "
                 "a.area_id = m.area_id"},
    {"exercise", "SELECT threat_level, COUNT(*) FROM incursions GROUP BY "
                 "threat_level ORDER BY COUNT(*) DESC"},
    {"exercise", "SELECT name FROM exercises WHERE start_date <= "
                 "'2024-06-01' AND end_date >= '2024-06-01'"},
    {"exercise", "SELECT force, COUNT(DISTINCT echelon) FROM units GROUP BY "
                 "force"},
    {"exercise", "SELECT maneuver_id FROM maneuvers WHERE activity LIKE "
                 "'%recon%' COLLATE NOCASE"},
    {"exercise", "SELECT m.grid_ref FROM maneuvers m NATURAL JOIN units u "
                 "WHERE u.force = 'Red'"},
};

TEST(Criterion5, CanonicalizationPreservesSemantics) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  EXPECT_GE(std::size(kCorpus), 50u);
  for (const CorpusQuery& q : kCorpus) {
    const DatabaseFixture& fixture = suite.Fixture(q.db);
    CanonicalQuery canon = Canonicalize(q.sql);
    ASSERT_TRUE(canon.ok()) << q.sql << ": " << canon.detail;
    Database db = Provision(fixture);
    ResultFingerprint original = Execute(db, q.sql);
    ResultFingerprint canonical = Execute(db, canon.canonical);
    EXPECT_EQ(original, canonical) << q.sql << "\n -> " << canon.canonical;
    std::optional<oracle::Rows> direct = oracle::Run(fixture, q.sql);
    ASSERT_TRUE(direct) << q.sql;
    EXPECT_EQ(direct, oracle::Run(fixture, canon.canonical)) << q.sql;
  }
}

// --- 6. Transparency ladder -------------------------------------------------

TEST(Criterion6, LadderFixturesProduceLevelsOneToFour) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  const Level expected[] = {Level::kI, Level::kII, Level::kIII, Level::kIV};
  for (int i = 0; i < 4; ++i) {
    fs::path descriptor_path = ReplayDir("les-demo") /
                               ("transparency-level" + std::to_string(i + 1) +
                                ".json");
    SutDescriptor d = LoadSutDescriptor(descriptor_path);
    ASSERT_TRUE(d.manifest_path);
    TransparencyManifest manifest = LoadManifest(*d.manifest_path);
    auto sut = MakeSut(d);
    FixedClock clock;
    AssessOptions options;
    options.categories = {Category::kTransparency};
    options.clock = &clock;
    AssessmentReport report = Assess(suite, *sut, d.Summary(), &manifest,
                                     DefaultRubric(), options)
                                  .report;
    EXPECT_EQ(report.categories.at(Category::kTransparency).assigned,
              expected[i])
        << descriptor_path.filename();
  }
}

TEST(Criterion6, RemovingOneLogEntryFailsQueryLogging) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  auto sut = ReplaySut::Load(ReplayDir("les-demo") / "golden.jsonl");
  TransparencyManifest manifest =
      LoadManifest(ReplayDir("les-demo") / "manifests" / "complete.json");
  FixedClock clock;
  EvaluationSession session(suite, *sut, {1, {}, &clock});
  EvaluateAccuracyCategory(session, DefaultRubric());
  EvaluateConsistencyCategory(session, DefaultRubric());

  RunLog log = session.log();
  CategoryResult intact =
      Audit(session.records(), log, &manifest, DefaultRubric());
  EXPECT_EQ(Find(intact, Level::kI, "query-logging").status,
            CriterionStatus::kPass);
  EXPECT_EQ(intact.assigned, Level::kIV);

  // Drop the response entry of the middle generation.
  int64_t victim = 0;
  size_t responses = 0;
  for (const LogEntry& e : log.entries()) {
    if (e.direction != LogDirection::kResponse) continue;
    if (++responses == session.records().size() / 2) victim = e.entry_id;
  }
  ASSERT_TRUE(log.Remove(victim));
  CategoryResult tampered =
      Audit(session.records(), log, &manifest, DefaultRubric());
  const CriterionResult& logging = Find(tampered, Level::kI, "query-logging");
  EXPECT_EQ(logging.status, CriterionStatus::kFail);
  EXPECT_EQ(logging.evidence.size(), 1u);
  EXPECT_EQ(tampered.assigned, Level::kNone);
}

// --- 7. Robustness ----------------------------------------------------------

uint64_t Fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

TEST(Criterion7, TimeoutsBecomeIncorrectTurnsAndAFailureRate) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  std::mutex mu;
  std::condition_variable release;
  bool released = false;
  std::set<std::string> stalled;
  std::set<std::string> seen;
  httplib::Server server;
  server.new_task_queue = [] { return new httplib::ThreadPool(32); };
  server.Post("/generate", [&](const httplib::Request& req,
                               httplib::Response& res) {
    json body = json::parse(req.body);
    RecordKey key{body["case_id"], body["turn_index"], body["profile_id"],
                  body["paraphrase_index"], body["sample_index"]};
    std::string id = key.ToString();
    bool stall = Fnv1a(id) % 5 == 0;
    {
      std::unique_lock lock(mu);
      seen.insert(id);
      if (stall) {
        // Held until the run is over, well past the client timeout.
        stalled.insert(id);
        release.wait(lock, [&] { return released; });
      }
    }
    res.set_content(GoldenResponse(suite, key).dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir dir;
  json descriptor = {
      {"kind", "http"},
      {"endpoint", "http://127.0.0.1:" + std::to_string(port) + "/generate"},
      {"timeout_ms", 1000},
      {"retry", {{"max_attempts", 1}}},
      {"max_in_flight", 8},
      {"manifest",
       (ReplayDir("les-demo") / "manifests" / "complete.json").string()}};
  testing::WriteText(dir / "sut.json", descriptor.dump());
  CliRun run = RunCli({"assess", "--suite", SuiteDir("les-demo").string(),
                       "--sut", (dir / "sut.json").string(), "--out",
                       (dir / "report.json").string(), "--concurrency", "8",
                       "--fixed-clock"});
  {
    std::lock_guard lock(mu);
    released = true;
  }
  release.notify_all();
  server.stop();
  listener.join();

  ASSERT_EQ(run.code, kExitOk) << run.err;
  json report = json::parse(ReadText(dir / "report.json"));
  const json& meta = report["run_metadata"];
  int64_t generations = meta["generations"];
  int64_t failed = meta["failed_generations"];
  EXPECT_EQ(generations, static_cast<int64_t>(seen.size()));
  EXPECT_EQ(failed, static_cast<int64_t>(stalled.size()));
  EXPECT_EQ(meta["failure_rate"],
            json({{"numerator", failed}, {"denominator", generations}}));
  // Roughly one in five keys stalls.
  EXPECT_GE(failed * 10, generations);
  EXPECT_LE(failed * 10, generations * 3);
  EXPECT_NE(run.err.find("failed " + std::to_string(failed)), std::string::npos);

  int scored = 0;
  for (const auto& [tier, t] : report["categories"]["accuracy"]["metrics"]
                                     ["tiers"]
                                         .items()) {
    for (const json& v : t["verdicts"]) {
      bool was_stalled = stalled.contains(v["record_id"].get<std::string>());
      EXPECT_EQ(v["verdict"] == "equivalent", !was_stalled) << v.dump();
      if (was_stalled) ++scored;
    }
  }
  EXPECT_GT(scored, 0);
}

// --- 8. Concurrency determinism ---------------------------------------------

TEST(Criterion8, CliReportsIdenticalAtOneAndEightWorkers) {
  for (const char* descriptor : {"golden.json", "tier-ii-broken.json"}) {
    TempDir one;
    TempDir eight;
    auto run = [&](const TempDir& dir, const char* workers) {
      return RunCli({"assess", "--suite", SuiteDir("les-demo").string(),
                     "--sut", (ReplayDir("les-demo") / descriptor).string(),
                     "--out", (dir / "report.json").string(), "--fixed-clock",
                     "--concurrency", workers});
    };
    ASSERT_EQ(run(one, "1").code, kExitOk);
    ASSERT_EQ(run(eight, "8").code, kExitOk);
    EXPECT_EQ(ReadText(one / "report.json"), ReadText(eight / "report.json"))
        << descriptor;
    EXPECT_EQ(ReadText(one / "report.log.jsonl"),
              ReadText(eight / "report.log.jsonl"))
        << descriptor;
  }
}

TEST(Criterion8, JitteredSutStillDeterministic) {
  TestSuite suite = testing::LoadBundledSuite("les-demo");
  TransparencyManifest manifest =
      LoadManifest(ReplayDir("les-demo") / "manifests" / "complete.json");
  auto assess = [&](int concurrency) {
    std::mutex mu;
    std::mt19937 rng(static_cast<unsigned>(concurrency));
    testing::FakeSut sut([&](const GenerationRequest& r) {
      int delay;
      {
        std::lock_guard lock(mu);
        delay = static_cast<int>(rng() % 4);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      json response = GoldenResponse(suite, r.key());
      // Every third sample answers wrongly so outcomes differ per key.
      if (r.sample_index % 3 == 2) response["query"] = std::string(kBrokenQuery);
      return std::optional<json>(response);
    });
    FixedClock clock;
    AssessOptions options;
    options.concurrency = concurrency;
    options.clock = &clock;
    Assessment a = Assess(suite, sut, {{"kind", "fake"}}, &manifest,
                          DefaultRubric(), options);
    return RenderReport(a.report, "json") + a.log.ToJsonl();
  };
  EXPECT_EQ(assess(1), assess(8));
}

// --- reporting --------------------------------------------------------------

class CriterionPrinter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestSuiteEnd(const ::testing::TestSuite& suite) override {
    static const std::map<std::string, std::string> kNames = {
        {"Criterion1", "rubric fidelity"},
        {"Criterion2", "golden end-to-end"},
        {"Criterion3", "boundary fixtures"},
        {"Criterion4", "cumulativity"},
        {"Criterion5", "equivalence oracle"},
        {"Criterion6", "transparency ladder"},
        {"Criterion7", "robustness"},
        {"Criterion8", "concurrency determinism"},
    };
    auto it = kNames.find(suite.name());
    if (it == kNames.end()) return;
    std::printf("%s criterion %c: %s\n", suite.Passed() ? "PASS" : "FAIL",
                it->first.back(), it->second.c_str());
    std::fflush(stdout);
  }
};

}  // namespace
}  // namespace ttq

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(
      new ttq::CriterionPrinter);
  return RUN_ALL_TESTS();
}
