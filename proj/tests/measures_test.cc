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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace fuzzyref {
namespace {

constexpr double kTol = 1e-12;

// Literal transcription of the two measure tables, normalised entries written
// as (base formula) / a1. m8 is capped at 1.
double Oracle(int index, double a1, double a2) {
  const double base[4] = {a1 - a2, a1 * (a1 - a2), a1 * (1 - a2), std::min(1.0, 1 - a2)};
  if (index % 2 == 0) return base[index / 2];
  if (a1 == 0) return 0;
  const double normalised = base[index / 2] / a1;
  return index == 7 ? std::min(1.0, normalised) : normalised;
}

std::vector<double> Grid() {
  std::vector<double> g;
  for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
  return g;
}

PossibilityDistribution Dist(std::vector<ObjectId> ids, std::vector<double> degrees) {
  return PossibilityDistribution(std::move(ids), degrees);
}

TEST(MeasureKindTest, NamesRoundTrip) {
  for (MeasureKind k : kAllMeasures) EXPECT_EQ(ParseMeasure(MeasureName(k)), k);
  EXPECT_EQ(MeasureName(MeasureKind::kM7), "m7");
  EXPECT_THROW(ParseMeasure("m9"), Error);
  EXPECT_THROW(ParseMeasure("x1"), Error);
}

TEST(SpecificityTest, SameM1ForDifferentSituations) {
  EXPECT_EQ(Specificity(MeasureKind::kM1, 1.0, 0.5), 0.5);
  EXPECT_EQ(Specificity(MeasureKind::kM1, 0.5, 0.0), 0.5);
}

TEST(SpecificityTest, NormalisedMeasureDistinguishesTheTiedCases) {
  EXPECT_EQ(Specificity(MeasureKind::kM2, 0.5, 0.0), 1.0);
  EXPECT_EQ(Specificity(MeasureKind::kM2, 1.0, 0.5), 0.5);
}

TEST(SpecificityTest, TwinAtFullMembershipGivesZero) {
  for (MeasureKind k : kAllMeasures) EXPECT_EQ(Specificity(k, 1.0, 1.0), 0.0) << MeasureName(k);
}

TEST(SpecificityTest, ZeroTopNormalisedIsZero) {
  for (MeasureKind k : {MeasureKind::kM2, MeasureKind::kM4, MeasureKind::kM6, MeasureKind::kM8}) {
    EXPECT_EQ(Specificity(k, 0.0, 0.0), 0.0);
  }
}

TEST(SpecificityTest, RejectsUnrankedInput) {
  EXPECT_THROW(Specificity(MeasureKind::kM1, 0.3, 0.5), Error);
  EXPECT_THROW(Specificity(MeasureKind::kM1, 1.2, 0.5), Error);
}

TEST(SpecificityTest, MatchesTableTranscriptionOnGrid) {
  for (double a1 : Grid()) {
    for (double a2 : Grid()) {
      if (a2 > a1) continue;
      for (MeasureKind k : kAllMeasures) {
        ASSERT_NEAR(Specificity(k, a1, a2), Oracle(MeasureIndex(k), a1, a2), kTol)
            << MeasureName(k) << " a1=" << a1 << " a2=" << a2;
      }
    }
  }
}

TEST(SpecificityTest, GridProperties) {
  for (double a1 : Grid()) {
    for (double a2 : Grid()) {
      if (a2 > a1) continue;
      const auto v = AllMeasures(RankedMemberships({a1, a2}));
      EXPECT_EQ(v[0], v[3]);
      for (double x : v) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
      for (int i : {0, 2, 4}) EXPECT_LE(v[i], a1 + kTol);
      if (a1 == 1.0) {
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(v[2 * k + 1], v[2 * k], kTol);
      }
    }
  }
}

TEST(SpecificityTest, Monotonicity) {
  const auto grid = Grid();
  for (MeasureKind k : kAllMeasures) {
    for (double a1 : grid) {
      double prev = 2.0;
      for (double a2 : grid) {
        if (a2 > a1) break;
        const double v = Specificity(k, a1, a2);
        EXPECT_LE(v, prev + kTol) << MeasureName(k);
        prev = v;
      }
    }
  }
  for (MeasureKind k : {MeasureKind::kM1, MeasureKind::kM3, MeasureKind::kM5, MeasureKind::kM7}) {
    for (double a2 : grid) {
      double prev = -1.0;
      for (double a1 : grid) {
        if (a1 < a2) continue;
        const double v = Specificity(k, a1, a2);
        EXPECT_GE(v, prev - kTol) << MeasureName(k);
        prev = v;
      }
    }
  }
}

TEST(SpecificityTest, M7VerbatimExceedsTopButBoundedVariantDoesNot) {
  EXPECT_NEAR(Specificity(MeasureKind::kM7, 0.3, 0.1), 0.9, kTol);
  EXPECT_NEAR(Specificity(MeasureKind::kM7, 0.3, 0.1, M7Variant::kBounded), 0.3, kTol);
  EXPECT_NEAR(Specificity(MeasureKind::kM8, 0.3, 0.1, M7Variant::kBounded), 1.0, kTol);
}

TEST(AllMeasuresTest, Examples) {
  for (double v : AllMeasures(RankedMemberships({1.0, 0.0}))) EXPECT_EQ(v, 1.0);
  for (double v : AllMeasures(RankedMemberships({1.0, 1.0}))) EXPECT_EQ(v, 0.0);
  // Hand-evaluated.
  const MeasureValues expected = {0.25, 0.5, 0.125, 0.25, 0.375, 0.75, 0.75, 1.0};
  const auto got = AllMeasures(RankedMemberships({0.5, 0.25}));
  for (int i = 0; i < kNumMeasures; ++i) EXPECT_NEAR(got[i], expected[i], kTol) << "m" << i + 1;
}

TEST(AllMeasuresTest, SingleObjectIsPerfectSingleton) {
  const auto v = AllMeasures(Rank(Dist({"x"}, {1.0})));
  for (double x : v) EXPECT_EQ(x, 1.0);
}

TEST(ReferentialSuccessTest, Examples) {
  SuccessConfig cfg;
  cfg.measure = MeasureKind::kM1;
  EXPECT_EQ(ReferentialSuccess(Dist({"t", "d"}, {1, 0}), "t", cfg).value(), 1.0);
  for (MeasureKind k : kAllMeasures) {
    cfg.measure = k;
    EXPECT_EQ(ReferentialSuccess(Dist({"t", "d"}, {0, 1}), "t", cfg).value(), 0.0);
  }
  cfg.measure = MeasureKind::kM2;
  EXPECT_NEAR(ReferentialSuccess(Dist({"t", "d"}, {0.8, 0.3}), "t", cfg).value(), 0.625, kTol);
}

TEST(ReferentialSuccessTest, UnknownTarget) {
  EXPECT_THROW(ReferentialSuccess(Dist({"t"}, {1}), "nope", SuccessConfig{}), Error);
}

TEST(ReferentialSuccessTest, BoundedByBothFactors) {
  SuccessConfig cfg;
  for (double t = 0; t <= 1.0; t += 0.05) {
    for (double d = 0; d <= 1.0; d += 0.05) {
      const auto dist = Dist({"t", "d"}, {t, d});
      for (MeasureKind k : kAllMeasures) {
        cfg.measure = k;
        const double s = ReferentialSuccess(dist, "t", cfg);
        EXPECT_LE(s, t);
        EXPECT_LE(s, Specificity(k, Rank(dist)).value());
      }
    }
  }
}

}  // namespace
}  // namespace fuzzyref
