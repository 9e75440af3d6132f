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

#include "ttq/cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ttq/accuracy.h"
#include "ttq/consistency.h"
#include "ttq/error.h"
#include "ttq/fixtures.h"
#include "ttq/runner.h"

#ifndef TTQ_VERSION
#define TTQ_VERSION "dev"
#endif

namespace ttq {

namespace fs = std::filesystem;
using json = nlohmann::json;

Assessment Assess(const TestSuite& suite, Sut& sut, const json& sut_summary,
                  const TransparencyManifest* manifest,
                  const MaturityRubric& rubric, const AssessOptions& options) {
  if (options.categories.empty()) throw UsageError("no categories selected");
  SystemClock system_clock;
  const Clock* clock = options.clock ? options.clock : &system_clock;
  EvaluationSession session(suite, sut,
                            {options.concurrency, options.limits, clock});
  RunMetadata metadata;
  metadata.seed = options.seed;
  metadata.started_at = clock->Now();
  metadata.log_file = options.log_name;

  auto wants = [&](Category c) { return options.categories.contains(c); };
  bool transparency = wants(Category::kTransparency);
  std::vector<CategoryResult> results;
  if (wants(Category::kAccuracy) || transparency) {
    CategoryResult r = EvaluateAccuracyCategory(session, rubric);
    if (wants(Category::kAccuracy)) results.push_back(std::move(r));
  }
  if (wants(Category::kConsistency) || transparency) {
    CategoryResult r = EvaluateConsistencyCategory(session, rubric);
    if (wants(Category::kConsistency)) results.push_back(std::move(r));
  }
  std::vector<GenerationRecord> records = session.records();
  if (transparency) {
    results.push_back(Audit(
        records, session.log(), manifest, rubric,
        options.log_name.empty() ? "run-log (not persisted)" : options.log_name));
  }
  metadata.finished_at = clock->Now();
  metadata.generations = static_cast<int64_t>(records.size());
  for (const GenerationRecord& r : records) {
    if (r.failed()) ++metadata.failed_generations;
  }

  ReportContext context;
  context.harness_version = options.harness_version;
  context.rubric = rubric;
  context.rubric_overrides = options.rubric_overrides;
  context.suite_id = suite.suite_id;
  context.sut = sut_summary;
  context.metadata = std::move(metadata);
  return {BuildReport(results, std::move(context)), session.log()};
}

namespace {

std::optional<Category> CategoryArg(const std::string& name) {
  return ParseCategory(name);
}

std::set<Category> ParseCategories(const std::vector<std::string>& names) {
  std::set<Category> out;
  for (const std::string& n : names) {
    auto c = CategoryArg(n);
    if (!c) throw UsageError("unknown category '" + n + "'");
    out.insert(*c);
  }
  if (out.empty()) throw UsageError("no categories selected");
  return out;
}

std::pair<Category, Level> ParseMinLevel(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw UsageError("--min-level expects category=LEVEL, got '" + text + "'");
  }
  auto c = CategoryArg(text.substr(0, eq));
  auto l = ParseLevel(text.substr(eq + 1));
  if (!c || !l) throw UsageError("bad --min-level '" + text + "'");
  return {*c, *l};
}

void CheckFormat(const std::string& format) {
  if (format != "json" && format != "markdown" && format != "md") {
    throw UsageError("unknown report format '" + format + "'");
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

HarnessConfig LoadHarnessConfig(const fs::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw LoadError(path.string(), e.what());
  }
  if (!j.is_object()) throw LoadError(path.string(), "expected an object");
  fs::path base = path.parent_path();
  auto resolve = [&](const json& v) {
    fs::path p(v.get<std::string>());
    return p.is_absolute() ? p : base / p;
  };
  HarnessConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "suite") {
        c.suite = resolve(v);
      } else if (key == "sut") {
        c.sut = resolve(v);
      } else if (key == "manifest") {
        c.manifest = resolve(v);
      } else if (key == "categories") {
        c.categories = ParseCategories(v.get<std::vector<std::string>>());
      } else if (key == "overrides") {
        c.overrides = v.get<std::vector<std::string>>();
      } else if (key == "repeat_count") {
        c.repeat_count = v.get<int>();
      } else if (key == "concurrency") {
        c.concurrency = v.get<int>();
      } else if (key == "seed") {
        c.seed = v.get<uint64_t>();
      } else if (key == "out") {
        c.out = resolve(v);
      } else if (key == "log") {
        c.log = resolve(v);
      } else if (key == "formats") {
        c.formats = v.get<std::vector<std::string>>();
        for (const std::string& f : c.formats) CheckFormat(f);
      } else if (key == "fixed_clock") {
        c.fixed_clock = v.get<bool>();
      } else if (key == "min_level") {
        for (const auto& [cat, lvl] : v.items()) {
          c.min_level.insert(ParseMinLevel(cat + "=" + lvl.get<std::string>()));
        }
      } else if (key == "timeout_ms") {
        c.limits.timeout = std::chrono::milliseconds(v.get<int64_t>());
      } else if (key == "row_cap") {
        c.limits.row_cap = v.get<size_t>();
      } else {
        throw LoadError(path.string(), "unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw LoadError(path.string(), e.what());
  }
  return c;
}

void WriteFileAtomically(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace cli {
namespace {

// Raw flag values; only those given on the command line override the config.
struct Flags {
  std::string config;
  std::string suite;
  std::string sut;
  std::string manifest;
  std::vector<std::string> categories;
  std::vector<std::string> overrides;
  int repeat_count = 0;
  int concurrency = 1;
  uint64_t seed = 0;
  std::string out;
  std::string log;
  std::vector<std::string> formats;
  bool fixed_clock = false;
  std::vector<std::string> min_levels;
  int64_t timeout_ms = 0;
  size_t row_cap = 0;

  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const {
    auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

void AddEvaluationFlags(CLI::App* sub, Flags* f, bool with_categories) {
  f->options["config"] =
      sub->add_option("--config", f->config, "JSON config file");
  f->options["suite"] = sub->add_option("--suite", f->suite, "Suite directory");
  f->options["sut"] = sub->add_option(
      "--sut", f->sut, "SUT descriptor (.json) or replay file (.jsonl)");
  f->options["manifest"] = sub->add_option(
      "--manifest", f->manifest, "Transparency manifest; overrides the SUT's");
  if (with_categories) {
    f->options["categories"] =
        sub->add_option("--categories", f->categories,
                        "Subset of accuracy,consistency,transparency")
            ->delimiter(',');
  }
  f->options["override"] = sub->add_option(
      "--override", f->overrides, "Rubric override, e.g. accuracy.I=0.70");
  f->options["repeat-count"] = sub->add_option(
      "--repeat-count", f->repeat_count, "Identical-regime sample count");
  f->options["concurrency"] = sub->add_option(
      "--concurrency", f->concurrency, "Maximum requests in flight");
  f->options["seed"] = sub->add_option("--seed", f->seed, "Recorded run seed");
  f->options["out"] = sub->add_option("--out", f->out, "Report output path");
  f->options["log"] = sub->add_option("--log", f->log, "Run log output path");
  f->options["format"] =
      sub->add_option("--format", f->formats, "json and/or markdown")
          ->delimiter(',');
  f->options["fixed-clock"] = sub->add_flag(
      "--fixed-clock", f->fixed_clock, "Use a constant timestamp");
  f->options["min-level"] = sub->add_option(
      "--min-level", f->min_levels,
      "Exit 3 unless category reaches LEVEL, e.g. accuracy=II");
  f->options["timeout-ms"] = sub->add_option(
      "--query-timeout-ms", f->timeout_ms, "Per-query execution timeout");
  f->options["row-cap"] = sub->add_option(
      "--row-cap", f->row_cap, "Maximum rows read per query");
}

HarnessConfig Merge(const Flags& f) {
  HarnessConfig c;
  if (f.given("config")) c = LoadHarnessConfig(f.config);
  if (f.given("suite")) c.suite = f.suite;
  if (f.given("sut")) c.sut = f.sut;
  if (f.given("manifest")) c.manifest = f.manifest;
  if (f.given("categories")) c.categories = ParseCategories(f.categories);
  if (f.given("override")) c.overrides = f.overrides;
  if (f.given("repeat-count")) c.repeat_count = f.repeat_count;
  if (f.given("concurrency")) c.concurrency = f.concurrency;
  if (f.given("seed")) c.seed = f.seed;
  if (f.given("out")) c.out = f.out;
  if (f.given("log")) c.log = f.log;
  if (f.given("format")) {
    for (const std::string& fmt : f.formats) CheckFormat(fmt);
    c.formats = f.formats;
  }
  if (f.given("fixed-clock")) c.fixed_clock = f.fixed_clock;
  if (f.given("min-level")) {
    c.min_level.clear();
    for (const std::string& m : f.min_levels) c.min_level.insert(ParseMinLevel(m));
  }
  if (f.given("timeout-ms")) {
    c.limits.timeout = std::chrono::milliseconds(f.timeout_ms);
  }
  if (f.given("row-cap")) c.limits.row_cap = f.row_cap;

  if (c.suite.empty()) throw UsageError("--suite is required");
  if (c.sut.empty()) throw UsageError("--sut is required");
  if (c.concurrency < 1) throw UsageError("--concurrency must be >= 1");
  if (c.repeat_count && *c.repeat_count < 1) {
    throw UsageError("--repeat-count must be >= 1");
  }
  if (c.formats.empty()) throw UsageError("no output format");
  return c;
}

std::string VectorLine(const AssessmentReport& report) {
  std::string line = "maturity vector:";
  for (Category c : kAllCategories) {
    const CategoryResult& r = report.categories.at(c);
    line += " " + std::string(CategoryName(c)) + "=";
    line += r.evaluated ? std::string(RomanNumeral(r.assigned))
                        : std::string("not-evaluated");
  }
  return line;
}

TestSuite LoadValidSuite(const fs::path& dir, std::ostream& err) {
  TestSuite suite = LoadSuite(dir);
  std::vector<Finding> findings = ValidateSuite(suite);
  if (!findings.empty()) {
    for (const Finding& f : findings) {
      err << "finding: " << f.kind << " " << f.case_id
          << (f.turn ? " turn " + std::to_string(*f.turn) : "") << ": "
          << f.detail << "\n";
    }
    throw UsageError("suite " + dir.string() + " has " +
                     std::to_string(findings.size()) + " finding(s)");
  }
  return suite;
}

int RunEvaluation(const Flags& flags, std::optional<Category> only,
                  std::ostream& out, std::ostream& err) {
  HarnessConfig cfg = Merge(flags);
  if (only) cfg.categories = {*only};

  TestSuite suite = LoadValidSuite(cfg.suite, err);
  if (cfg.repeat_count) suite.repeat_count = *cfg.repeat_count;

  SutDescriptor descriptor = LoadSutDescriptor(cfg.sut);
  if (const char* token = std::getenv("TTQ_SUT_TOKEN")) {
    descriptor.auth_token = token;
  }
  descriptor.Validate();

  std::optional<TransparencyManifest> manifest;
  std::optional<fs::path> manifest_path = cfg.manifest
                                              ? cfg.manifest
                                              : descriptor.manifest_path;
  if (cfg.categories.contains(Category::kTransparency) && manifest_path) {
    manifest = LoadManifest(*manifest_path);
  }

  MaturityRubric rubric = DefaultRubric();
  for (const std::string& o : cfg.overrides) ApplyRubricOverride(o, &rubric);
  ValidateRubric(rubric);

  std::optional<fs::path> log_path = cfg.log;
  if (!log_path && cfg.out) {
    log_path = *cfg.out;
    log_path->replace_extension(".log.jsonl");
  }

  FixedClock fixed;
  AssessOptions options;
  options.categories = cfg.categories;
  options.concurrency = cfg.concurrency;
  options.seed = cfg.seed;
  options.clock = cfg.fixed_clock ? static_cast<const Clock*>(&fixed) : nullptr;
  options.limits = cfg.limits;
  options.log_name = log_path ? log_path->filename().string() : "";
  options.rubric_overrides = cfg.overrides;
  options.harness_version = TTQ_VERSION;

  std::unique_ptr<Sut> sut = MakeSut(descriptor);
  Assessment a = Assess(suite, *sut, descriptor.Summary(),
                        manifest ? &*manifest : nullptr, rubric, options);

  if (log_path) WriteFileAtomically(*log_path, a.log.ToJsonl());
  for (const std::string& format : cfg.formats) {
    std::string text = RenderReport(a.report, format);
    if (!cfg.out) {
      out << text;
      continue;
    }
    fs::path path = *cfg.out;
    if (cfg.formats.size() > 1) {
      path.replace_extension(format == "json" ? ".json" : ".md");
    }
    WriteFileAtomically(path, text);
  }
  err << VectorLine(a.report) << "\n";
  err << "generations: " << a.report.metadata.generations << ", failed "
      << a.report.metadata.failed_generations << "\n";

  for (const auto& [category, minimum] : cfg.min_level) {
    const CategoryResult& r = a.report.categories.at(category);
    if (!r.evaluated || r.assigned < minimum) {
      err << CategoryName(category) << " below minimum level "
          << RomanNumeral(minimum) << "\n";
      return kExitBelowMinimum;
    }
  }
  return kExitOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Maturity assessment harness for text-to-query systems", "ttq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TTQ_VERSION));

  struct EvalCommand {
    CLI::App* app;
    std::optional<Category> only;
    Flags flags;
  };
  std::vector<std::unique_ptr<EvalCommand>> evals;
  auto add_eval = [&](const std::string& name, const std::string& help,
                      std::optional<Category> only) {
    auto cmd = std::make_unique<EvalCommand>();
    cmd->app = app.add_subcommand(name, help);
    cmd->only = only;
    AddEvaluationFlags(cmd->app, &cmd->flags, !only.has_value());
    evals.push_back(std::move(cmd));
  };
  add_eval("assess", "Evaluate all (or --categories) categories", std::nullopt);
  add_eval("accuracy", "Evaluate the accuracy category", Category::kAccuracy);
  add_eval("consistency", "Evaluate the consistency category",
           Category::kConsistency);
  add_eval("transparency", "Audit the transparency category",
           Category::kTransparency);

  std::string validate_suite;
  CLI::App* validate = app.add_subcommand("validate-suite", "Check a suite");
  validate->add_option("--suite", validate_suite, "Suite directory")
      ->required();

  std::string render_report;
  std::string render_format = "markdown";
  std::string render_out;
  CLI::App* render = app.add_subcommand("render", "Re-render a json report");
  render->add_option("--report", render_report, "Stored json report")
      ->required();
  render->add_option("--format", render_format, "json or markdown");
  render->add_option("--out", render_out, "Output path (default stdout)");

  std::string golden_suite;
  std::string golden_out;
  CLI::App* golden = app.add_subcommand(
      "golden-replay", "Write a replay file answering every key with gold");
  golden->add_option("--suite", golden_suite, "Suite directory")->required();
  golden->add_option("--out", golden_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& cmd : evals) {
      if (cmd->app->parsed()) {
        return RunEvaluation(cmd->flags, cmd->only, out, err);
      }
    }
    if (validate->parsed()) {
      TestSuite suite = LoadSuite(validate_suite);
      std::vector<Finding> findings = ValidateSuite(suite);
      for (const Finding& f : findings) {
        out << f.kind << " " << f.case_id
            << (f.turn ? " turn " + std::to_string(*f.turn) : "") << ": "
            << f.detail << "\n";
      }
      out << findings.size() << " findings\n";
      return findings.empty() ? kExitOk : kExitUsage;
    }
    if (render->parsed()) {
      json j;
      try {
        j = json::parse(ReadFile(render_report));
      } catch (const json::exception& e) {
        throw LoadError(render_report, e.what());
      }
      std::string text = RenderReport(ReportFromJson(j), render_format);
      if (render_out.empty()) {
        out << text;
      } else {
        WriteFileAtomically(render_out, text);
      }
      return kExitOk;
    }
    if (golden->parsed()) {
      TestSuite suite = LoadSuite(golden_suite);
      std::string text = RenderReplay(GoldenReplay(suite));
      if (golden_out.empty()) {
        out << text;
      } else {
        WriteFileAtomically(golden_out, text);
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace cli
}  // namespace ttq
