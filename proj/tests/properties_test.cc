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

#include "fuzzyref/properties.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace fuzzyref {
namespace {

constexpr double kTol = 1e-12;

SceneObject At(double x, double y, double size = 0.5) {
  SceneObject o;
  o.id = "o";
  o.x = x;
  o.y = y;
  o.size = size;
  return o;
}

SceneObject Coloured(double hue, double saturation) {
  SceneObject o;
  o.id = "o";
  o.colour = {hue, saturation, 0.9};
  return o;
}

// Piecewise form of the three band shapes with width 1/3.
double BandOracle(Band band, double c) {
  switch (band) {
    case Band::kLow:
      return c >= 1.0 / 3 ? 0.0 : 1.0 - 3 * c;
    case Band::kHigh:
      return c <= 2.0 / 3 ? 0.0 : 3 * c - 2.0;
    case Band::kMid:
      if (c <= 1.0 / 6 || c >= 5.0 / 6) return 0.0;
      return c < 0.5 ? 3 * c - 0.5 : 2.5 - 3 * c;
  }
  return -1;
}

TEST(MembershipTest, VerticalExamples) {
  const auto middle = PropertyTerm::Banded(PropertyKind::kVertical, Band::kMid);
  const auto top = PropertyTerm::Banded(PropertyKind::kVertical, Band::kHigh);
  EXPECT_NEAR(Membership(At(0.5, 0.5), middle).value(), 1.0, kTol);
  EXPECT_NEAR(Membership(At(0.5, 5.0 / 6), middle).value(), 0.0, kTol);
  EXPECT_NEAR(Membership(At(0.5, 5.0 / 6), top).value(), 0.5, kTol);
  EXPECT_EQ(Membership(At(0.5, 1.0), top).value(), 1.0);
}

TEST(MembershipTest, BandsMatchPiecewiseOracle) {
  for (int i = 0; i <= 1000; ++i) {
    const double c = i / 1000.0;
    for (Band b : {Band::kLow, Band::kMid, Band::kHigh}) {
      ASSERT_NEAR(BandMembership(b, c, 1.0 / 3), BandOracle(b, c), 1e-9) << "c=" << c;
    }
  }
}

TEST(MembershipTest, AxesUseTheirCoordinate) {
  const SceneObject o = At(0.1, 0.9, 0.5);
  EXPECT_NEAR(Membership(o, PropertyTerm::Banded(PropertyKind::kHorizontal, Band::kLow)).value(), 0.7, kTol);
  EXPECT_NEAR(Membership(o, PropertyTerm::Banded(PropertyKind::kVertical, Band::kHigh)).value(), 0.7, kTol);
  EXPECT_NEAR(Membership(o, PropertyTerm::Banded(PropertyKind::kSize, Band::kMid)).value(), 1.0, kTol);
}

TEST(MembershipTest, ColourIsSaturationInsideHueWindow) {
  const auto red = PropertyTerm::Colour("red", 0.0);
  EXPECT_EQ(Membership(Coloured(0.0, 0.7), red).value(), 0.7);
  EXPECT_EQ(Membership(Coloured(350.0, 0.4), red).value(), 0.4);
  EXPECT_EQ(Membership(Coloured(15.0, 0.4), red).value(), 0.4);
  EXPECT_EQ(Membership(Coloured(16.0, 0.4), red).value(), 0.0);
  EXPECT_EQ(Membership(Coloured(120.0, 1.0), red).value(), 0.0);
  EXPECT_EQ(Membership(Coloured(0.0, 0.0), red).value(), 0.0);
}

TEST(MembershipTest, ShapeIsCrisp) {
  SceneObject o;
  o.shape = Shape::kSquare;
  EXPECT_EQ(ShapeMembership(o, Shape::kSquare).value(), 1.0);
  EXPECT_EQ(ShapeMembership(o, Shape::kCircle).value(), 0.0);
}

TEST(PropertyDistributionTest, MatchesPerObjectLoop) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PropertyConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SceneObject> objs;
    for (int i = 0; i < 5; ++i) {
      SceneObject o;
      o.id = "o" + std::to_string(i);
      o.colour = {std::floor(u(gen) * 360.0), u(gen), 0.9};
      o.size = u(gen);
      o.x = u(gen);
      o.y = u(gen);
      objs.push_back(o);
    }
    for (PropertyKind kind : kAllPropertyKinds) {
      for (const auto &term : cfg.Vocabulary(kind)) {
        const auto dist = PropertyDistribution(objs, term, cfg);
        ASSERT_EQ(dist.size(), objs.size());
        size_t i = 0;
        for (const auto &[id, degree] : dist) {
          EXPECT_EQ(id, objs[i].id);
          EXPECT_EQ(degree.value(), Membership(objs[i], term, cfg).value());
          ++i;
        }
      }
    }
  }
}

TEST(SimilarTest, InclusiveBoundary) {
  const SimilarityConfig cfg;
  EXPECT_TRUE(Similar(MembershipDegree(0.6), MembershipDegree(0.45), PropertyKind::kVertical, cfg));
  EXPECT_FALSE(Similar(MembershipDegree(0.6), MembershipDegree(0.44), PropertyKind::kVertical, cfg));
  EXPECT_TRUE(Similar(MembershipDegree(0.6), MembershipDegree(0.4), PropertyKind::kColour, cfg));
}

TEST(SimilarTest, ReflexiveAndSymmetric) {
  const SimilarityConfig cfg;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const MembershipDegree a(i / 100.0), b(j / 100.0);
      for (PropertyKind k : kAllPropertyKinds) {
        EXPECT_TRUE(Similar(a, a, k, cfg));
        EXPECT_EQ(Similar(a, b, k, cfg), Similar(b, a, k, cfg));
      }
    }
  }
}

TEST(SimilarityConfigTest, MissingAndInvalidAlpha) {
  SimilarityConfig cfg;
  EXPECT_EQ(cfg.alpha(PropertyKind::kSize), 0.2);
  EXPECT_EQ(cfg.alpha(PropertyKind::kHorizontal), 0.15);
  EXPECT_THROW(cfg.set_alpha(PropertyKind::kSize, 0.0), Error);
  EXPECT_THROW(cfg.set_alpha(PropertyKind::kSize, 1.0), Error);
  cfg.erase(PropertyKind::kSize);
  EXPECT_THROW(cfg.alpha(PropertyKind::kSize), Error);
}

TEST(PropertyConfigTest, Parse) {
  const auto cfg = PropertyConfig::Parse(
      "# thresholds\n"
      "alpha.size = 0.3\n"
      "alpha.color = 0.1  # alias\n"
      "hue_window = 20\n"
      "colour.purple = 280\n"
      "colour.orange = 30\n");
  EXPECT_EQ(cfg.similarity.alpha(PropertyKind::kSize), 0.3);
  EXPECT_EQ(cfg.similarity.alpha(PropertyKind::kColour), 0.1);
  EXPECT_EQ(cfg.hue_window, 20.0);
  ASSERT_EQ(cfg.colours.size(), 2u);
  EXPECT_EQ(cfg.colours[0].colour_name, "orange");
  EXPECT_EQ(cfg.ColourTerm("purple").hue, 280.0);
  EXPECT_THROW(cfg.ColourTerm("red"), Error);
}

TEST(PropertyConfigTest, ParseErrors) {
  EXPECT_THROW(PropertyConfig::Parse("alpha.size 0.3"), Error);
  EXPECT_THROW(PropertyConfig::Parse("alpha.size = 1.5"), Error);
  EXPECT_THROW(PropertyConfig::Parse("alpha.weight = 0.1"), Error);
  EXPECT_THROW(PropertyConfig::Parse("band_width = abc"), Error);
  EXPECT_THROW(PropertyConfig::Parse("colour.red = 360"), Error);
  EXPECT_THROW(PropertyConfig::Parse("speed = 3"), Error);
}

TEST(PropertyConfigTest, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "fuzzyref_properties_test.conf";
  {
    std::ofstream out(path);
    out << "alpha.vertical = 0.25\n";
  }
  EXPECT_EQ(PropertyConfig::Load(path.string()).similarity.alpha(PropertyKind::kVertical), 0.25);
  std::filesystem::remove(path);
  EXPECT_THROW(PropertyConfig::Load(path.string()), Error);
}

TEST(PropertyTermTest, NamesAndParsing) {
  EXPECT_EQ(PropertyTerm::Banded(PropertyKind::kSize, Band::kLow).Name(), "small");
  EXPECT_EQ(PropertyTerm::Banded(PropertyKind::kVertical, Band::kHigh).Name(), "top");
  EXPECT_EQ(PropertyTerm::Banded(PropertyKind::kHorizontal, Band::kMid).Name(), "center");
  EXPECT_THROW(PropertyTerm::Banded(PropertyKind::kColour, Band::kLow), Error);
  EXPECT_EQ(ParsePropertyKind("color"), PropertyKind::kColour);
  EXPECT_THROW(ParsePropertyKind("weight"), Error);
  EXPECT_EQ(ParseShape("triangle"), Shape::kTriangle);
  EXPECT_THROW(ParseShape("hexagon"), Error);
}

TEST(SceneObjectTest, Validate) {
  SceneObject o = At(0.2, 0.2);
  EXPECT_NO_THROW(o.Validate());
  o.x = 1.2;
  EXPECT_THROW(o.Validate(), Error);
  o = Coloured(360.0, 0.5);
  EXPECT_THROW(o.Validate(), Error);
}

}  // namespace
}  // namespace fuzzyref
