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

#include "fuzzyref/measures.h"

#include <algorithm>

namespace fuzzyref {

std::string MeasureName(MeasureKind kind) { return "m" + std::to_string(MeasureIndex(kind) + 1); }

MeasureKind ParseMeasure(const std::string &name) {
  if (name.size() == 2 && (name[0] == 'm' || name[0] == 'M') && name[1] >= '1' && name[1] <= '8') {
    return static_cast<MeasureKind>(name[1] - '1');
  }
  throw Error("unknown measure kind: " + name);
}

M7Variant ParseM7Variant(const std::string &name) {
  if (name == "verbatim") return M7Variant::kVerbatim;
  if (name == "bounded") return M7Variant::kBounded;
  throw Error("unknown m7 variant: " + name);
}

double Specificity(MeasureKind kind, double a1, double a2, M7Variant m7) {
  if (!(a1 >= 0.0 && a1 <= 1.0 && a2 >= 0.0 && a2 <= a1)) {
    throw Error("specificity needs 0 <= a2 <= a1 <= 1");
  }
  const double seven = m7 == M7Variant::kBounded ? std::min(a1, 1.0 - a2) : std::min(1.0, 1.0 - a2);
  switch (kind) {
    case MeasureKind::kM1:
      return a1 - a2;
    case MeasureKind::kM3:
      return a1 * (a1 - a2);
    case MeasureKind::kM5:
      return a1 * (1.0 - a2);
    case MeasureKind::kM7:
      return seven;
    default:
      break;
  }
  if (a1 == 0.0) return 0.0;
  switch (kind) {
    case MeasureKind::kM2:
      return (a1 - a2) / a1;
    // a1 (a1 - a2) / a1 and a1 (1 - a2) / a1, cancelled so m4 == m1 bit for bit.
    case MeasureKind::kM4:
      return a1 - a2;
    case MeasureKind::kM6:
      return 1.0 - a2;
    case MeasureKind::kM8:
      return std::min(1.0, (1.0 - a2) / a1);
    default:
      break;
  }
  throw Error("unknown measure kind");
}

MembershipDegree Specificity(MeasureKind kind, const RankedMemberships &ranked, M7Variant m7) {
  return MembershipDegree(Specificity(kind, ranked.first(), ranked.second(), m7));
}

MeasureValues AllMeasures(const RankedMemberships &ranked, M7Variant m7) {
  MeasureValues values{};
  for (MeasureKind kind : kAllMeasures) {
    values[MeasureIndex(kind)] = Specificity(kind, ranked.first(), ranked.second(), m7);
  }
  return values;
}

MembershipDegree ReferentialSuccess(const PossibilityDistribution &re_dist, const ObjectId &target,
                                    const SuccessConfig &cfg) {
  const MembershipDegree fulfilment = re_dist.Degree(target);
  const MembershipDegree specificity = Specificity(cfg.measure, Rank(re_dist), cfg.m7_variant);
  return MembershipDegree(ApplyTNorm(cfg.combiner, specificity, fulfilment));
}

}  // namespace fuzzyref
