// Copyright 2026 The fuzzyref Authors.
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

#include "fuzzyref/cli.h"

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fuzzyref/analysis.h"
#include "fuzzyref/measures.h"
#include "fuzzyref/reg.h"
#include "fuzzyref/scene.h"
#include "fuzzyref/service.h"

namespace fuzzyref {
namespace {

using nlohmann::json;

std::vector<std::string> SplitList(const std::string &text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

class Context {
 public:
  Context(std::istream &in, std::ostream &out) : in_(in), out_(out) {}

  std::string config_path;
  std::string out_path;
  bool pretty = false;

  PropertyConfig Properties() const {
    return config_path.empty() ? PropertyConfig{} : PropertyConfig::Load(config_path);
  }

  // Contents of `path`, or of stdin when it is empty or "-".
  std::string ReadInput(const std::string &path) const {
    if (path.empty() || path == "-") {
      std::stringstream buffer;
      buffer << in_.rdbuf();
      return buffer.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
  }

  std::ostream &Out() {
    if (out_path.empty()) return out_;
    if (!file_) {
      file_ = std::make_unique<std::ofstream>(out_path, std::ios::binary);
      if (!*file_) throw Error("cannot write " + out_path);
    }
    return *file_;
  }

  void Emit(const json &j) { Out() << (pretty ? j.dump(2) : j.dump()) << "\n"; }

 private:
  std::istream &in_;
  std::ostream &out_;
  std::unique_ptr<std::ofstream> file_;
};

// A single JSON document, or one document per line.
std::vector<json> ParseDocuments(const std::string &text) {
  try {
    return {json::parse(text)};
  } catch (const json::parse_error &) {
  }
  std::vector<json> docs;
  std::stringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(json::parse(line));
    } catch (const json::parse_error &e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (docs.empty()) throw Error("no JSON input");
  return docs;
}

struct SceneGenArgs {
  std::string property, similarity;
  int level = 0;
  uint64_t seed = 1;
  int batch = 0;
};

void SceneGen(Context &ctx, const SceneGenArgs &args) {
  const Condition condition{ParsePropertyKind(args.property), ParseSimilarity(args.similarity), args.level};
  condition.Check();
  const PropertyConfig cfg = ctx.Properties();
  if (args.batch <= 0) {
    ctx.Emit(SceneToJson(GenerateItem(condition, args.seed, cfg)));
    return;
  }
  // Items are independent; output keeps item order.
  const size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), args.batch));
  std::vector<std::string> lines(args.batch);
  std::vector<std::future<void>> jobs;
  for (size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (size_t i = w; i < lines.size(); i += workers) {
        lines[i] = SceneToJson(GenerateItem(condition, args.seed + i, cfg)).dump();
      }
    }));
  }
  for (auto &job : jobs) job.get();
  for (const auto &line : lines) ctx.Out() << line << "\n";
}

int SceneValidate(Context &ctx, const std::string &path) {
  const PropertyConfig cfg = ctx.Properties();
  const auto docs = ParseDocuments(ctx.ReadInput(path));
  bool all_valid = true;
  for (size_t i = 0; i < docs.size(); ++i) {
    std::vector<std::string> violations;
    try {
      violations = ValidateScene(SceneFromJson(docs[i], cfg), cfg);
    } catch (const Error &e) {
      violations = {std::string("malformed: ") + e.what()};
    }
    all_valid = all_valid && violations.empty();
    json report = {{"v", 1}, {"valid", violations.empty()}, {"violations", violations}};
    if (docs.size() > 1) report["index"] = i;
    ctx.Emit(report);
  }
  return all_valid ? 0 : 1;
}

struct MeasureArgs {
  std::string dist, dist_file, kind, target, combiner = "min", m7 = "verbatim";
};

void MeasureEval(Context &ctx, const MeasureArgs &args) {
  const std::string text = args.dist.empty() ? ctx.ReadInput(args.dist_file) : args.dist;
  nlohmann::ordered_json parsed;
  try {
    parsed = nlohmann::ordered_json::parse(text);
  } catch (const json::exception &e) {
    throw Error(std::string("--dist is not a JSON object: ") + e.what());
  }
  if (!parsed.is_object()) throw Error("--dist must be a JSON object of id -> degree");
  std::vector<PossibilityDistribution::Entry> entries;
  for (const auto &[id, degree] : parsed.items()) {
    if (!degree.is_number()) throw Error("degree of " + id + " is not a number");
    entries.emplace_back(id, MembershipDegree(degree.get<double>()));
  }
  const PossibilityDistribution dist(std::move(entries));
  const RankedMemberships ranked = Rank(dist);
  SuccessConfig cfg;
  cfg.combiner = ParseTNorm(args.combiner);
  cfg.m7_variant = ParseM7Variant(args.m7);

  if (!args.kind.empty()) {
    cfg.measure = ParseMeasure(args.kind);
    const double value = args.target.empty() ? Specificity(cfg.measure, ranked, cfg.m7_variant).value()
                                             : ReferentialSuccess(dist, args.target, cfg).value();
    ctx.Out() << FormatNumber(value) << "\n";
    return;
  }
  json measures = json::object();
  json success = json::object();
  const MeasureValues values = AllMeasures(ranked, cfg.m7_variant);
  for (MeasureKind kind : kAllMeasures) {
    measures[MeasureName(kind)] = values[MeasureIndex(kind)];
    if (!args.target.empty()) {
      cfg.measure = kind;
      success[MeasureName(kind)] = ReferentialSuccess(dist, args.target, cfg).value();
    }
  }
  json report = {{"v", 1}, {"ranked", ranked.values()}, {"measures", measures}};
  if (!args.target.empty()) report["success"] = success;
  ctx.Emit(report);
}

struct RegArgs {
  std::string scene, measure = "m2", target, tnorm = "min", order, m7 = "verbatim";
  double theta = 0.8;
  bool render = false;
  bool bruteforce = false;
};

void RegRun(Context &ctx, const RegArgs &args) {
  RegConfig cfg;
  cfg.properties = ctx.Properties();
  cfg.measure = ParseMeasure(args.measure);
  cfg.theta = args.theta;
  cfg.tnorm = ParseTNorm(args.tnorm);
  cfg.m7_variant = ParseM7Variant(args.m7);
  if (!args.order.empty()) {
    cfg.preference.clear();
    for (const auto &name : SplitList(args.order)) cfg.preference.push_back(ParsePropertyKind(name));
  }
  const Scene scene = SceneFromJson(ParseDocuments(ctx.ReadInput(args.scene)).front(), cfg.properties);
  const ObjectId target = args.target.empty() ? scene.target : args.target;
  const RegResult result =
      args.bruteforce ? BestExpressionBruteForce(scene, target, cfg) : GenerateExpression(scene, target, cfg);
  ctx.Emit(RegResultToJson(result, args.render));
}

struct AnalyzeArgs {
  std::string records, group_by = "property,similarity,level", format = "json", section = "summary";
};

std::vector<GroupField> ParseGrouping(const std::string &text) {
  std::vector<GroupField> fields;
  if (text == "none") return fields;
  for (const auto &name : SplitList(text)) fields.push_back(ParseGroupField(name));
  return fields;
}

void Analyse(Context &ctx, const AnalyzeArgs &args) {
  std::istringstream input(ctx.ReadInput(args.records));
  const auto records = ReadRecordsJsonl(input);
  const auto grouping = ParseGrouping(args.group_by);
  const AnalysisReport report = Analyze(records, grouping);
  if (args.format == "json") {
    ctx.Emit(ReportToJson(report));
  } else if (args.format == "table") {
    PrintReport(report, ctx.Out());
  } else if (args.section == "summary") {
    WriteSummaryCsv(report.summary, grouping, ctx.Out());
  } else if (args.section == "sensitivity") {
    if (!report.sensitivity) throw Error("degenerate split");
    WriteSensitivityCsv(*report.sensitivity, ctx.Out());
  } else {
    WriteCorrelationCsv(report.correlations, ctx.Out());
  }
}

struct FigureArgs {
  std::string figure, records, property = "colour";
  int scenes = 20;
  uint64_t seed = 1;
};

void ExportFigure(Context &ctx, const FigureArgs &args) {
  const Figure figure = ParseFigure(args.figure);
  FigureOptions options;
  options.property = ParsePropertyKind(args.property);
  options.scenes_per_point = args.scenes;
  options.seed = args.seed;
  options.properties = ctx.Properties();
  std::vector<TrialRecord> records;
  if (figure != Figure::kSpecCurve) {
    std::istringstream input(ctx.ReadInput(args.records));
    records = ReadRecordsJsonl(input);
  }
  ExportFigureData(records, figure, options, ctx.Out());
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err) {
  Context ctx(in, out);
  CLI::App app{"Fuzzy referential success toolkit", "fuzzyref"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", ctx.config_path, "Property config file (key = value)")->envname("FUZZYREF_CONFIG");
  app.add_option("--out", ctx.out_path, "Write machine output to this file instead of stdout");
  app.add_flag("--pretty", ctx.pretty, "Indent JSON output");

  std::function<int()> action;

  auto *scene = app.add_subcommand("scene", "Generate or validate experimental scenes");
  scene->require_subcommand(1);
  SceneGenArgs gen;
  auto *scene_gen = scene->add_subcommand("gen", "Generate a scene for one design cell");
  scene_gen->add_option("--property", gen.property, "colour|size|vertical|horizontal")->required();
  scene_gen->add_option("--similarity", gen.similarity, "similar|dissimilar")->required();
  scene_gen->add_option("--level", gen.level, "Membership level 1..5")->required()->check(CLI::Range(1, 5));
  scene_gen->add_option("--seed", gen.seed, "Random seed");
  scene_gen->add_option("--batch", gen.batch, "Emit N scenes (seeds seed..seed+N-1) as JSON lines");
  scene_gen->callback([&] { action = [&] { return SceneGen(ctx, gen), 0; }; });

  std::string validate_path;
  auto *scene_validate = scene->add_subcommand("validate", "Check scene invariants");
  scene_validate->add_option("--scene", validate_path, "Scene JSON or JSON lines (default stdin)");
  scene_validate->callback([&] { action = [&] { return SceneValidate(ctx, validate_path); }; });

  auto *measure = app.add_subcommand("measure", "Specificity and referential success");
  measure->require_subcommand(1);
  MeasureArgs margs;
  auto *measure_eval = measure->add_subcommand("eval", "Evaluate measures on a possibility distribution");
  measure_eval->add_option("--dist", margs.dist, "JSON object of object id -> degree");
  measure_eval->add_option("--dist-file", margs.dist_file, "Read the distribution from a file");
  measure_eval->add_option("--kind", margs.kind, "m1..m8; prints a single number");
  measure_eval->add_option("--target", margs.target, "Report referential success for this object");
  measure_eval->add_option("--combiner", margs.combiner, "min|product");
  measure_eval->add_option("--m7-variant", margs.m7, "verbatim|bounded");
  measure_eval->callback([&] { action = [&] { return MeasureEval(ctx, margs), 0; }; });

  auto *reg = app.add_subcommand("reg", "Referring expression generation");
  reg->require_subcommand(1);
  RegArgs rargs;
  auto *reg_run = reg->add_subcommand("run", "Generate an expression for a scene's target");
  reg_run->add_option("--scene", rargs.scene, "Scene JSON (default stdin)");
  reg_run->add_option("--measure", rargs.measure, "m1..m8");
  reg_run->add_option("--theta", rargs.theta, "Success threshold in (0,1]");
  reg_run->add_option("--target", rargs.target, "Object id (default: the scene's target)");
  reg_run->add_option("--tnorm", rargs.tnorm, "min|product");
  reg_run->add_option("--order", rargs.order, "Preference order, e.g. colour,size,vertical,horizontal");
  reg_run->add_option("--m7-variant", rargs.m7, "verbatim|bounded");
  reg_run->add_flag("--render", rargs.render, "Add the English surface form");
  reg_run->add_flag("--bruteforce", rargs.bruteforce, "Exhaustive search instead of greedy");
  reg_run->callback([&] { action = [&] { return RegRun(ctx, rargs), 0; }; });

  auto *design = app.add_subcommand("design", "Latin-square design plans");
  design->require_subcommand(1);
  int groups = kNumConditions;
  uint64_t design_seed = 1;
  auto *design_make = design->add_subcommand("make", "Generate a 40-item plan");
  design_make->add_option("--groups", groups, "Participant groups")->check(CLI::PositiveNumber);
  design_make->add_option("--seed", design_seed, "Random seed");
  design_make->callback([&] { action = [&] { return ctx.Emit(PlanToJson(GenerateDesign(groups, design_seed))), 0; }; });

  AnalyzeArgs aargs;
  auto *analyze = app.add_subcommand("analyze", "Summaries, sensitivity and correlations of trial records");
  analyze->add_option("--records", aargs.records, "Trial records JSONL (default stdin)");
  analyze->add_option("--group-by", aargs.group_by, "Comma list of property,similarity,level or 'none'");
  analyze->add_option("--format", aargs.format, "json|table|csv")->check(CLI::IsMember({"json", "table", "csv"}));
  analyze->add_option("--section", aargs.section, "CSV section: summary|sensitivity|correlations")
      ->check(CLI::IsMember({"summary", "sensitivity", "correlations"}));
  analyze->callback([&] { action = [&] { return Analyse(ctx, aargs), 0; }; });

  FigureArgs fargs;
  auto *figure = app.add_subcommand("export-figure", "Tidy CSV for plotting");
  figure->add_option("--figure", fargs.figure, "accuracy-time|time-vs-measure|spec-curve")->required();
  figure->add_option("--records", fargs.records, "Trial records JSONL (default stdin)");
  figure->add_option("--property", fargs.property, "Property for spec-curve");
  figure->add_option("--scenes-per-point", fargs.scenes, "Generated scenes averaged per spec-curve point");
  figure->add_option("--seed", fargs.seed, "Random seed for spec-curve");
  figure->callback([&] { action = [&] { return ExportFigure(ctx, fargs), 0; }; });

  ServeOptions serve_opts;
  auto *serve = app.add_subcommand("serve", "Run the experiment HTTP service");
  serve->add_option("--host", serve_opts.host, "Bind address")->envname("FUZZYREF_HOST");
  serve->add_option("--port", serve_opts.port, "Port")->envname("FUZZYREF_PORT");
  serve->add_option("--plan", serve_opts.plan_path, "Design plan JSON")->envname("FUZZYREF_PLAN");
  serve->add_option("--data-dir", serve_opts.data_dir, "Directory for the append-only logs")
      ->envname("FUZZYREF_DATA_DIR");
  serve->add_option("--ui-dir", serve_opts.ui_dir, "Static UI bundle")->envname("FUZZYREF_UI_DIR");
  serve->callback([&] {
    action = [&] {
      serve_opts.properties = ctx.Properties();
      if (!Serve(serve_opts)) throw Error("cannot listen on " + serve_opts.host + ":" + std::to_string(serve_opts.port));
      return 0;
    };
  });

  std::vector<const char *> argv = {"fuzzyref"};
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fuzzyref
