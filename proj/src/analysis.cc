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

#include "fuzzyref/analysis.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "fuzzyref/random.h"

namespace fuzzyref {
namespace {

using nlohmann::json;

int FieldCode(const Condition &c, GroupField field) {
  switch (field) {
    case GroupField::kProperty:
      return static_cast<int>(c.property);
    case GroupField::kSimilarity:
      return static_cast<int>(c.similarity);
    case GroupField::kLevel:
      return c.level;
  }
  return 0;
}

std::string FieldValue(const Condition &c, GroupField field) {
  switch (field) {
    case GroupField::kProperty:
      return PropertyKindName(c.property);
    case GroupField::kSimilarity:
      return SimilarityName(c.similarity);
    case GroupField::kLevel:
      return std::to_string(c.level);
  }
  return "";
}

double Mean(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

std::string OptionalNumber(const std::optional<double> &v) { return v ? FormatNumber(*v) : ""; }

}  // namespace

void TrialRecord::Check() const {
  if (correct != (chosen == target)) throw Error("record " + item + ": correct flag disagrees with chosen/target");
  if (!(id_time > 0.0)) throw Error("record " + item + ": id_time must be > 0");
  for (double m : measures) {
    if (!(m >= 0.0 && m <= 1.0)) throw Error("record " + item + ": measure out of [0,1]");
  }
  condition.Check();
}

json RecordToJson(const TrialRecord &record) {
  json measures = json::object();
  for (MeasureKind kind : kAllMeasures) measures[MeasureName(kind)] = record.measures[MeasureIndex(kind)];
  json j = {{"v", 1},
            {"participant", record.participant},
            {"item", record.item},
            {"condition", ConditionToJson(record.condition)},
            {"target", record.target},
            {"chosen", record.chosen},
            {"correct", record.correct},
            {"id_time", record.id_time},
            {"measures", measures}};
  if (record.group >= 0) j["group"] = record.group;
  if (record.trial_index >= 0) j["trial_index"] = record.trial_index;
  if (record.server_time_ms != 0) j["server_time_ms"] = record.server_time_ms;
  return j;
}

TrialRecord RecordFromJson(const json &j) {
  try {
    TrialRecord r;
    r.participant = j.at("participant").get<std::string>();
    r.item = j.at("item").get<std::string>();
    r.condition = ConditionFromJson(j.at("condition"));
    r.target = j.at("target").get<std::string>();
    r.chosen = j.at("chosen").get<std::string>();
    r.correct = j.at("correct").get<bool>();
    r.id_time = j.at("id_time").get<double>();
    const json &m = j.at("measures");
    for (MeasureKind kind : kAllMeasures) r.measures[MeasureIndex(kind)] = m.at(MeasureName(kind)).get<double>();
    r.group = j.value("group", -1);
    r.trial_index = j.value("trial_index", -1);
    r.server_time_ms = j.value("server_time_ms", int64_t{0});
    r.Check();
    return r;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed trial record: ") + e.what());
  }
}

std::vector<TrialRecord> ReadRecordsJsonl(std::istream &in) {
  std::vector<TrialRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(RecordFromJson(json::parse(line)));
    } catch (const std::exception &e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

GroupField ParseGroupField(const std::string &name) {
  if (name == "property") return GroupField::kProperty;
  if (name == "similarity") return GroupField::kSimilarity;
  if (name == "level") return GroupField::kLevel;
  throw Error("unknown grouping field: " + name);
}

const char *GroupFieldName(GroupField field) {
  switch (field) {
    case GroupField::kProperty:
      return "property";
    case GroupField::kSimilarity:
      return "similarity";
    case GroupField::kLevel:
      return "level";
  }
  return "?";
}

std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records, std::span<const GroupField> group_by) {
  if (records.empty()) throw Error("no records to summarize");
  struct Tally {
    SummaryRow row;
    size_t correct = 0;
    double time = 0.0;
  };
  std::map<std::vector<int>, Tally> cells;
  for (const auto &r : records) {
    std::vector<int> key;
    for (GroupField f : group_by) key.push_back(FieldCode(r.condition, f));
    Tally &t = cells[key];
    if (t.row.n == 0) {
      for (GroupField f : group_by) t.row.cell.emplace_back(f, FieldValue(r.condition, f));
    }
    ++t.row.n;
    t.correct += r.correct ? 1 : 0;
    t.time += r.id_time;
  }
  std::vector<SummaryRow> rows;
  for (auto &[key, t] : cells) {
    t.row.accuracy = static_cast<double>(t.correct) / t.row.n;
    t.row.mean_time = t.time / t.row.n;
    rows.push_back(std::move(t.row));
  }
  return rows;
}

SensitivityTable Sensitivity(std::span<const TrialRecord> records) {
  MeasureValues sum_correct{}, sum_incorrect{};
  size_t n_correct = 0, n_incorrect = 0;
  for (const auto &r : records) {
    auto &sums = r.correct ? sum_correct : sum_incorrect;
    (r.correct ? n_correct : n_incorrect)++;
    for (int i = 0; i < kNumMeasures; ++i) sums[i] += r.measures[i];
  }
  if (n_correct == 0 || n_incorrect == 0) throw Error("degenerate split");

  SensitivityTable table;
  for (MeasureKind kind : kAllMeasures) {
    const int i = MeasureIndex(kind);
    SensitivityRow row{kind, sum_correct[i] / n_correct, sum_incorrect[i] / n_incorrect, 0.0};
    row.diff = row.mean_correct - row.mean_incorrect;
    table.rows.push_back(row);
  }
  std::vector<SensitivityRow> sorted = table.rows;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SensitivityRow &a, const SensitivityRow &b) { return a.diff < b.diff; });
  for (const auto &row : sorted) table.ordering.push_back(row.measure);
  return table;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("correlation inputs differ in length");
  if (xs.size() < 2) throw Error("correlation needs at least two points");
  const double mx = Mean(xs), my = Mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> MidRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean(i+1 .. j+1).
    const double rank = (i + j) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("correlation inputs differ in length");
  const auto rx = MidRanks(xs), ry = MidRanks(ys);
  return Pearson(rx, ry);
}

std::vector<CorrelationRow> TimeCorrelations(std::span<const TrialRecord> records) {
  std::vector<double> times;
  for (const auto &r : records) times.push_back(r.id_time);
  std::vector<CorrelationRow> rows;
  for (MeasureKind kind : kAllMeasures) {
    std::vector<double> values;
    for (const auto &r : records) values.push_back(r.measures[MeasureIndex(kind)]);
    CorrelationRow row{kind, std::nullopt, std::nullopt};
    try {
      row.pearson = Pearson(times, values);
      row.spearman = Spearman(times, values);
    } catch (const Error &) {
    }
    rows.push_back(row);
  }
  return rows;
}

AnalysisReport Analyze(std::span<const TrialRecord> records, std::span<const GroupField> group_by) {
  AnalysisReport report;
  report.records = records.size();
  report.summary = Summarize(records, group_by);
  try {
    report.sensitivity = Sensitivity(records);
  } catch (const Error &e) {
    report.warnings.push_back(std::string("sensitivity: ") + e.what());
  }
  report.correlations = TimeCorrelations(records);
  for (const auto &row : report.correlations) {
    if (!row.pearson) report.warnings.push_back("correlation undefined for " + MeasureName(row.measure));
  }
  return report;
}

json ReportToJson(const AnalysisReport &report) {
  json summary = json::array();
  for (const auto &row : report.summary) {
    json cell = json::object();
    for (const auto &[field, value] : row.cell) {
      if (field == GroupField::kLevel) {
        cell[GroupFieldName(field)] = std::stoi(value);
      } else {
        cell[GroupFieldName(field)] = value;
      }
    }
    summary.push_back({{"cell", cell}, {"n", row.n}, {"accuracy", row.accuracy}, {"mean_id_time", row.mean_time}});
  }
  json sensitivity = nullptr;
  if (report.sensitivity) {
    json rows = json::array();
    for (const auto &row : report.sensitivity->rows) {
      rows.push_back({{"measure", MeasureName(row.measure)},
                      {"mean_correct", row.mean_correct},
                      {"mean_incorrect", row.mean_incorrect},
                      {"diff", row.diff}});
    }
    json ordering = json::array();
    for (MeasureKind kind : report.sensitivity->ordering) ordering.push_back(MeasureName(kind));
    sensitivity = {{"rows", rows}, {"ordering", ordering}};
  }
  json correlations = json::array();
  for (const auto &row : report.correlations) {
    correlations.push_back({{"measure", MeasureName(row.measure)},
                            {"pearson", row.pearson ? json(*row.pearson) : json(nullptr)},
                            {"spearman", row.spearman ? json(*row.spearman) : json(nullptr)}});
  }
  return {{"v", 1},
          {"records", report.records},
          {"summary", summary},
          {"sensitivity", sensitivity},
          {"correlations", correlations},
          {"warnings", report.warnings}};
}

void PrintReport(const AnalysisReport &report, std::ostream &out) {
  out << "records: " << report.records << "\n\n";
  out << std::fixed;
  for (const auto &row : report.summary) {
    std::string cell;
    for (const auto &[field, value] : row.cell) cell += (cell.empty() ? "" : " ") + value;
    if (cell.empty()) cell = "(all)";
    out << std::left << std::setw(28) << cell << std::right << " n=" << std::setw(5) << row.n
        << "  acc=" << std::setprecision(3) << row.accuracy << "  time=" << std::setprecision(1) << row.mean_time
        << " ms\n";
  }
  if (report.sensitivity) {
    out << "\nmeasure  mean(correct)  mean(incorrect)     diff\n";
    for (const auto &row : report.sensitivity->rows) {
      out << std::left << std::setw(7) << MeasureName(row.measure) << std::right << std::setprecision(4)
          << std::setw(15) << row.mean_correct << std::setw(17) << row.mean_incorrect << std::setw(9) << row.diff
          << "\n";
    }
    out << "ordering:";
    for (size_t i = 0; i < report.sensitivity->ordering.size(); ++i) {
      out << (i ? " < " : " ") << MeasureName(report.sensitivity->ordering[i]);
    }
    out << "\n";
  }
  out << "\nmeasure  pearson  spearman\n";
  for (const auto &row : report.correlations) {
    out << std::left << std::setw(7) << MeasureName(row.measure) << std::right << std::setprecision(3);
    out << std::setw(9) << (row.pearson ? FormatNumber(std::round(*row.pearson * 1000) / 1000) : "-");
    out << std::setw(10) << (row.spearman ? FormatNumber(std::round(*row.spearman * 1000) / 1000) : "-") << "\n";
  }
  for (const auto &w : report.warnings) out << "warning: " << w << "\n";
  out << std::defaultfloat;
}

std::string CsvField(const std::string &field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << CsvField(fields[i]);
  }
  out << "\r\n";
}

std::string FormatNumber(double value) { return json(value).dump(); }

void WriteSummaryCsv(std::span<const SummaryRow> rows, std::span<const GroupField> group_by, std::ostream &out) {
  std::vector<std::string> header;
  for (GroupField f : group_by) header.push_back(GroupFieldName(f));
  for (const char *h : {"n", "accuracy", "mean_id_time"}) header.push_back(h);
  WriteCsvRow(out, header);
  for (const auto &row : rows) {
    std::vector<std::string> fields;
    for (const auto &[field, value] : row.cell) fields.push_back(value);
    fields.push_back(std::to_string(row.n));
    fields.push_back(FormatNumber(row.accuracy));
    fields.push_back(FormatNumber(row.mean_time));
    WriteCsvRow(out, fields);
  }
}

void WriteSensitivityCsv(const SensitivityTable &table, std::ostream &out) {
  WriteCsvRow(out, {"measure", "mean_correct", "mean_incorrect", "diff"});
  for (const auto &row : table.rows) {
    WriteCsvRow(out, {MeasureName(row.measure), FormatNumber(row.mean_correct), FormatNumber(row.mean_incorrect),
                      FormatNumber(row.diff)});
  }
}

void WriteCorrelationCsv(std::span<const CorrelationRow> rows, std::ostream &out) {
  WriteCsvRow(out, {"measure", "pearson", "spearman"});
  for (const auto &row : rows) {
    WriteCsvRow(out, {MeasureName(row.measure), OptionalNumber(row.pearson), OptionalNumber(row.spearman)});
  }
}

std::vector<SpecCurvePoint> SpecCurve(PropertyKind property, int scenes_per_point, uint64_t seed,
                                      const PropertyConfig &cfg) {
  if (scenes_per_point < 1) throw Error("need at least one scene per point");
  std::vector<SpecCurvePoint> points;
  for (Similarity similarity : {Similarity::kDissimilar, Similarity::kSimilar}) {
    for (int level = 1; level <= kNumLevels; ++level) {
      const Condition condition{property, similarity, level};
      SpecCurvePoint point{similarity, level, {}};
      for (int s = 0; s < scenes_per_point; ++s) {
        const Scene scene = GenerateItem(condition, MixSeed(seed, condition.Index() * 100003ULL + s), cfg);
        const MeasureValues values = AllMeasures(Rank(IdentifyingDistribution(scene, cfg)));
        for (int i = 0; i < kNumMeasures; ++i) point.mean[i] += values[i];
      }
      for (double &m : point.mean) m /= scenes_per_point;
      points.push_back(point);
    }
  }
  return points;
}

Figure ParseFigure(const std::string &name) {
  if (name == "accuracy-time") return Figure::kAccuracyTime;
  if (name == "time-vs-measure") return Figure::kTimeVsMeasure;
  if (name == "spec-curve") return Figure::kSpecCurve;
  throw Error("unknown figure: " + name);
}

void ExportFigureData(std::span<const TrialRecord> records, Figure figure, const FigureOptions &options,
                      std::ostream &out) {
  switch (figure) {
    case Figure::kAccuracyTime: {
      const GroupField all[] = {GroupField::kProperty, GroupField::kSimilarity, GroupField::kLevel};
      WriteCsvRow(out, {"property", "similarity", "level", "n", "accuracy", "mean_id_time"});
      if (records.empty()) return;
      for (const auto &row : Summarize(records, all)) {
        WriteCsvRow(out, {row.cell[0].second, row.cell[1].second, row.cell[2].second, std::to_string(row.n),
                          FormatNumber(row.accuracy), FormatNumber(row.mean_time)});
      }
      return;
    }
    case Figure::kTimeVsMeasure:
      WriteCsvRow(out, {"participant", "item", "correct", "id_time", "measure", "value"});
      for (const auto &r : records) {
        for (MeasureKind kind : kAllMeasures) {
          WriteCsvRow(out, {r.participant, r.item, r.correct ? "1" : "0", FormatNumber(r.id_time),
                            MeasureName(kind), FormatNumber(r.measures[MeasureIndex(kind)])});
        }
      }
      return;
    case Figure::kSpecCurve:
      WriteCsvRow(out, {"property", "similarity", "level", "membership", "measure", "value"});
      for (const auto &p :
           SpecCurve(options.property, options.scenes_per_point, options.seed, options.properties)) {
        for (MeasureKind kind : kAllMeasures) {
          WriteCsvRow(out, {PropertyKindName(options.property), SimilarityName(p.similarity),
                            std::to_string(p.level), FormatNumber(LevelDegree(p.level)), MeasureName(kind),
                            FormatNumber(p.mean[MeasureIndex(kind)])});
        }
      }
      return;
  }
}

}  // namespace fuzzyref
