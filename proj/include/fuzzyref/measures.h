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

#ifndef FUZZYREF_MEASURES_H_
#define FUZZYREF_MEASURES_H_

#include <array>
#include <string>

#include "fuzzyref/fuzzy.h"

namespace fuzzyref {

// Specificity measures over the top two ranked degrees a1 >= a2.
//
//   m1 = a1 - a2            m2 = m1 / a1
//   m3 = a1 (a1 - a2)       m4 = m3 / a1
//   m5 = a1 (1 - a2)        m6 = m5 / a1
//   m7 = min{1, 1 - a2}     m8 = min{1, (1 - a2) / a1}
//
// Even-numbered measures are normalised by a1 and are 0 when a1 = 0.
enum class MeasureKind { kM1 = 0, kM2, kM3, kM4, kM5, kM6, kM7, kM8 };

inline constexpr int kNumMeasures = 8;
inline constexpr std::array<MeasureKind, kNumMeasures> kAllMeasures = {
    MeasureKind::kM1, MeasureKind::kM2, MeasureKind::kM3, MeasureKind::kM4,
    MeasureKind::kM5, MeasureKind::kM6, MeasureKind::kM7, MeasureKind::kM8};

// "m1".."m8".
std::string MeasureName(MeasureKind kind);
MeasureKind ParseMeasure(const std::string &name);
inline int MeasureIndex(MeasureKind kind) { return static_cast<int>(kind); }

// kVerbatim: m7 = min{1, 1 - a2}. kBounded: m7 = min{a1, 1 - a2}, which keeps
// m7 below a1 like m1, m3 and m5.
enum class M7Variant { kVerbatim, kBounded };

M7Variant ParseM7Variant(const std::string &name);

double Specificity(MeasureKind kind, double a1, double a2, M7Variant m7 = M7Variant::kVerbatim);
MembershipDegree Specificity(MeasureKind kind, const RankedMemberships &ranked,
                             M7Variant m7 = M7Variant::kVerbatim);

// Values indexed by MeasureIndex().
using MeasureValues = std::array<double, kNumMeasures>;

MeasureValues AllMeasures(const RankedMemberships &ranked, M7Variant m7 = M7Variant::kVerbatim);

struct SuccessConfig {
  MeasureKind measure = MeasureKind::kM2;
  TNorm combiner = TNorm::kMinimum;
  M7Variant m7_variant = M7Variant::kVerbatim;
};

// combiner(specificity of the expression's extension, target's degree in it).
MembershipDegree ReferentialSuccess(const PossibilityDistribution &re_dist, const ObjectId &target,
                                    const SuccessConfig &cfg);

}  // namespace fuzzyref

#endif  // FUZZYREF_MEASURES_H_
