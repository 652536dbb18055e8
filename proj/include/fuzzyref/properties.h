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

#ifndef FUZZYREF_PROPERTIES_H_
#define FUZZYREF_PROPERTIES_H_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fuzzyref/fuzzy.h"

namespace fuzzyref {

enum class Shape { kTriangle, kCircle, kSquare };

inline constexpr std::array<Shape, 3> kAllShapes = {Shape::kTriangle, Shape::kCircle, Shape::kSquare};

const char *ShapeName(Shape shape);
Shape ParseShape(const std::string &name);

// Hue in degrees [0, 360); saturation and brightness in [0, 1].
struct Hsb {
  double hue = 0.0;
  double saturation = 0.0;
  double brightness = 1.0;
};

// Size and position are normalised to [0, 1]. y = 0 is the bottom of the
// display, x = 0 its left edge.
struct SceneObject {
  ObjectId id;
  Shape shape = Shape::kCircle;
  Hsb colour;
  double size = 0.5;
  double x = 0.5;
  double y = 0.5;

  // Throws Error if any field is out of range.
  void Validate() const;
};

enum class PropertyKind { kColour, kSize, kVertical, kHorizontal };

inline constexpr std::array<PropertyKind, 4> kAllPropertyKinds = {
    PropertyKind::kColour, PropertyKind::kSize, PropertyKind::kVertical, PropertyKind::kHorizontal};

const char *PropertyKindName(PropertyKind kind);
PropertyKind ParsePropertyKind(const std::string &name);

// Position of a term within its kind's three-way partition: small/medium/large,
// bottom/middle/top, left/center/right.
enum class Band { kLow, kMid, kHigh };

// A gradual property term. Colour terms carry a name and reference hue; the
// other kinds are identified by band.
struct PropertyTerm {
  PropertyKind kind = PropertyKind::kColour;
  Band band = Band::kMid;
  std::string colour_name;
  double hue = 0.0;

  static PropertyTerm Colour(std::string name, double hue);
  static PropertyTerm Banded(PropertyKind kind, Band band);

  // "red", "small", "top", "left", ...
  std::string Name() const;

  bool operator==(const PropertyTerm &other) const;
};

// Similarity thresholds per property kind, each in (0, 1).
class SimilarityConfig {
 public:
  // colour 0.2, size 0.2, vertical 0.15, horizontal 0.15.
  SimilarityConfig();

  double alpha(PropertyKind kind) const;
  void set_alpha(PropertyKind kind, double alpha);
  void erase(PropertyKind kind) { alpha_.erase(kind); }

 private:
  std::map<PropertyKind, double> alpha_;
};

// Tunables of the membership functions plus the colour vocabulary.
struct PropertyConfig {
  SimilarityConfig similarity;
  // Half-width of the hue window within which a colour term applies.
  double hue_window = 15.0;
  // Distance from a band's peak at which membership reaches 0.
  double band_width = 1.0 / 3.0;
  // Brightness used for generated objects.
  double brightness = 0.9;
  std::vector<PropertyTerm> colours = {
      PropertyTerm::Colour("red", 0.0), PropertyTerm::Colour("yellow", 60.0),
      PropertyTerm::Colour("green", 120.0), PropertyTerm::Colour("blue", 240.0)};

  // Reads "key = value" lines; '#' starts a comment. Recognised keys:
  //   alpha.<kind>, hue_window, band_width, brightness, colour.<name> = <hue>
  // Any colour.* key replaces the default vocabulary.
  static PropertyConfig Load(const std::string &path);
  static PropertyConfig Parse(const std::string &text);

  const PropertyTerm &ColourTerm(const std::string &name) const;

  // All terms of one kind, in a fixed order.
  std::vector<PropertyTerm> Vocabulary(PropertyKind kind) const;
};

// Triangular / shoulder membership over a normalised coordinate. Low bands
// peak at 0, high bands at 1, mid at 0.5; each falls linearly to 0 at
// band_width from its peak.
double BandMembership(Band band, double coordinate, double band_width);

// Coordinate of the peak of a band.
double BandPeak(Band band);

MembershipDegree Membership(const SceneObject &obj, const PropertyTerm &term,
                            const PropertyConfig &cfg = {});

// Crisp head-noun membership.
MembershipDegree ShapeMembership(const SceneObject &obj, Shape shape);

// One entry per object, in scene order.
PossibilityDistribution PropertyDistribution(std::span<const SceneObject> objects,
                                             const PropertyTerm &term, const PropertyConfig &cfg = {});
PossibilityDistribution ShapeDistribution(std::span<const SceneObject> objects, Shape shape);

// |m - m'| <= alpha(kind), inclusive up to kDegreeTolerance.
bool Similar(MembershipDegree m, MembershipDegree m_prime, PropertyKind kind,
             const SimilarityConfig &cfg);

}  // namespace fuzzyref

#endif  // FUZZYREF_PROPERTIES_H_
