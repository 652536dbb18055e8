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

#ifndef FUZZYREF_ANALYSIS_H_
#define FUZZYREF_ANALYSIS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzyref/measures.h"
#include "fuzzyref/scene.h"
#include "json.hpp"

namespace fuzzyref {

// One identification response.
struct TrialRecord {
  std::string participant;
  std::string item;
  Condition condition;
  ObjectId target;
  ObjectId chosen;
  bool correct = false;
  // Milliseconds from stimulus onset to selection; > 0.
  double id_time = 0.0;
  // Specificity of the trial's expression under each measure.
  MeasureValues measures{};

  // Optional bookkeeping written by the experiment service.
  int group = -1;
  int trial_index = -1;
  int64_t server_time_ms = 0;

  // Throws Error if correct disagrees with chosen == target, id_time <= 0 or a
  // measure falls outside [0, 1].
  void Check() const;
};

nlohmann::json RecordToJson(const TrialRecord &record);
TrialRecord RecordFromJson(const nlohmann::json &j);
// One record per non-blank line. Errors carry the line number.
std::vector<TrialRecord> ReadRecordsJsonl(std::istream &in);

enum class GroupField { kProperty, kSimilarity, kLevel };

GroupField ParseGroupField(const std::string &name);
const char *GroupFieldName(GroupField field);

struct SummaryRow {
  // (field, value) for each grouping field, in the requested order.
  std::vector<std::pair<GroupField, std::string>> cell;
  size_t n = 0;
  double accuracy = 0.0;
  double mean_time = 0.0;
};

// Per-cell count, accuracy and mean id-time. Empty cells are omitted; cells
// come out in design order.
std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records, std::span<const GroupField> group_by);

struct SensitivityRow {
  MeasureKind measure = MeasureKind::kM1;
  double mean_correct = 0.0;
  double mean_incorrect = 0.0;
  double diff = 0.0;
};

struct SensitivityTable {
  std::vector<SensitivityRow> rows;
  // Measures by ascending diff; ties by measure index.
  std::vector<MeasureKind> ordering;
};

// Throws Error("degenerate split") without both correct and incorrect trials.
SensitivityTable Sensitivity(std::span<const TrialRecord> records);

// Sample Pearson correlation. Throws Error on length mismatch, n < 2 or zero
// variance.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// 1-based mid-ranks: tied values share the average of their positions.
std::vector<double> MidRanks(std::span<const double> values);

// Pearson correlation of mid-ranks.
double Spearman(std::span<const double> xs, std::span<const double> ys);

struct CorrelationRow {
  MeasureKind measure = MeasureKind::kM1;
  std::optional<double> pearson;
  std::optional<double> spearman;
};

// id-time against each measure. Undefined coefficients (zero variance) are
// left empty.
std::vector<CorrelationRow> TimeCorrelations(std::span<const TrialRecord> records);

struct AnalysisReport {
  size_t records = 0;
  std::vector<SummaryRow> summary;
  std::optional<SensitivityTable> sensitivity;
  std::vector<CorrelationRow> correlations;
  std::vector<std::string> warnings;
};

AnalysisReport Analyze(std::span<const TrialRecord> records, std::span<const GroupField> group_by);
nlohmann::json ReportToJson(const AnalysisReport &report);
void PrintReport(const AnalysisReport &report, std::ostream &out);

// RFC 4180 rows: fields quoted when they hold a comma, quote or line break;
// lines end in CRLF.
std::string CsvField(const std::string &field);
void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields);
// Shortest representation that round-trips.
std::string FormatNumber(double value);

void WriteSummaryCsv(std::span<const SummaryRow> rows, std::span<const GroupField> group_by, std::ostream &out);
void WriteSensitivityCsv(const SensitivityTable &table, std::ostream &out);
void WriteCorrelationCsv(std::span<const CorrelationRow> rows, std::ostream &out);

// Mean specificity of the identifying expression over generated scenes, per
// similarity condition and membership level.
struct SpecCurvePoint {
  Similarity similarity = Similarity::kDissimilar;
  int level = 1;
  MeasureValues mean{};
};

std::vector<SpecCurvePoint> SpecCurve(PropertyKind property, int scenes_per_point, uint64_t seed,
                                      const PropertyConfig &cfg = {});

enum class Figure { kAccuracyTime, kTimeVsMeasure, kSpecCurve };

Figure ParseFigure(const std::string &name);

struct FigureOptions {
  PropertyKind property = PropertyKind::kColour;
  int scenes_per_point = 20;
  uint64_t seed = 1;
  PropertyConfig properties;
};

// Tidy CSV for external plotting:
//   accuracy-time:   property,similarity,level,n,accuracy,mean_id_time
//   time-vs-measure: participant,item,correct,id_time,measure,value
//   spec-curve:      property,similarity,level,membership,measure,value
// spec-curve ignores `records`.
void ExportFigureData(std::span<const TrialRecord> records, Figure figure, const FigureOptions &options,
                      std::ostream &out);

}  // namespace fuzzyref

#endif  // FUZZYREF_ANALYSIS_H_
