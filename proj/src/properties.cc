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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fuzzyref {
namespace {

constexpr const char *kBandNames[4][3] = {
    {"", "", ""},
    {"small", "medium", "large"},
    {"bottom", "middle", "top"},
    {"left", "center", "right"},
};

std::string Trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ParseNumber(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw Error("config: bad number for " + key + ": " + value);
  }
}

double HueDistance(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

const char *ShapeName(Shape shape) {
  switch (shape) {
    case Shape::kTriangle:
      return "triangle";
    case Shape::kCircle:
      return "circle";
    case Shape::kSquare:
      return "square";
  }
  return "?";
}

Shape ParseShape(const std::string &name) {
  for (Shape s : kAllShapes) {
    if (name == ShapeName(s)) return s;
  }
  throw Error("unknown shape: " + name);
}

void SceneObject::Validate() const {
  auto unit = [this](double v, const char *field) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("object " + id + ": " + field + " out of [0,1]");
  };
  if (id.empty()) throw Error("object with empty id");
  if (!(colour.hue >= 0.0 && colour.hue < 360.0)) throw Error("object " + id + ": hue out of [0,360)");
  unit(colour.saturation, "saturation");
  unit(colour.brightness, "brightness");
  unit(size, "size");
  unit(x, "x");
  unit(y, "y");
}

const char *PropertyKindName(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::kColour:
      return "colour";
    case PropertyKind::kSize:
      return "size";
    case PropertyKind::kVertical:
      return "vertical";
    case PropertyKind::kHorizontal:
      return "horizontal";
  }
  return "?";
}

PropertyKind ParsePropertyKind(const std::string &name) {
  if (name == "color") return PropertyKind::kColour;
  for (PropertyKind k : kAllPropertyKinds) {
    if (name == PropertyKindName(k)) return k;
  }
  throw Error("unknown property kind: " + name);
}

PropertyTerm PropertyTerm::Colour(std::string name, double hue) {
  PropertyTerm term;
  term.kind = PropertyKind::kColour;
  term.colour_name = std::move(name);
  term.hue = hue;
  return term;
}

PropertyTerm PropertyTerm::Banded(PropertyKind kind, Band band) {
  if (kind == PropertyKind::kColour) throw Error("colour terms are not banded");
  PropertyTerm term;
  term.kind = kind;
  term.band = band;
  return term;
}

std::string PropertyTerm::Name() const {
  if (kind == PropertyKind::kColour) return colour_name;
  return kBandNames[static_cast<int>(kind)][static_cast<int>(band)];
}

bool PropertyTerm::operator==(const PropertyTerm &other) const {
  if (kind != other.kind) return false;
  if (kind == PropertyKind::kColour) return colour_name == other.colour_name && hue == other.hue;
  return band == other.band;
}

SimilarityConfig::SimilarityConfig() {
  alpha_ = {{PropertyKind::kColour, 0.2},
            {PropertyKind::kSize, 0.2},
            {PropertyKind::kVertical, 0.15},
            {PropertyKind::kHorizontal, 0.15}};
}

double SimilarityConfig::alpha(PropertyKind kind) const {
  auto it = alpha_.find(kind);
  if (it == alpha_.end()) throw Error(std::string("no similarity threshold for ") + PropertyKindName(kind));
  return it->second;
}

void SimilarityConfig::set_alpha(PropertyKind kind, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("similarity threshold must be in (0,1)");
  alpha_[kind] = alpha;
}

PropertyConfig PropertyConfig::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

PropertyConfig PropertyConfig::Parse(const std::string &text) {
  PropertyConfig cfg;
  std::vector<PropertyTerm> colours;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.rfind("alpha.", 0) == 0) {
      cfg.similarity.set_alpha(ParsePropertyKind(key.substr(6)), ParseNumber(key, value));
    } else if (key.rfind("colour.", 0) == 0 || key.rfind("color.", 0) == 0) {
      const double hue = ParseNumber(key, value);
      if (!(hue >= 0.0 && hue < 360.0)) throw Error("config: hue out of [0,360) for " + key);
      colours.push_back(PropertyTerm::Colour(key.substr(key.find('.') + 1), hue));
    } else if (key == "hue_window") {
      cfg.hue_window = ParseNumber(key, value);
      if (!(cfg.hue_window > 0.0 && cfg.hue_window <= 180.0)) throw Error("config: hue_window out of (0,180]");
    } else if (key == "band_width") {
      cfg.band_width = ParseNumber(key, value);
      if (!(cfg.band_width > 0.0 && cfg.band_width <= 0.5)) throw Error("config: band_width out of (0,0.5]");
    } else if (key == "brightness") {
      cfg.brightness = ParseNumber(key, value);
      if (!(cfg.brightness >= 0.0 && cfg.brightness <= 1.0)) throw Error("config: brightness out of [0,1]");
    } else {
      throw Error("config: unknown key " + key);
    }
  }
  if (!colours.empty()) {
    std::sort(colours.begin(), colours.end(),
              [](const PropertyTerm &a, const PropertyTerm &b) { return a.colour_name < b.colour_name; });
    cfg.colours = std::move(colours);
  }
  return cfg;
}

const PropertyTerm &PropertyConfig::ColourTerm(const std::string &name) const {
  for (const auto &term : colours) {
    if (term.colour_name == name) return term;
  }
  throw Error("unknown colour term: " + name);
}

std::vector<PropertyTerm> PropertyConfig::Vocabulary(PropertyKind kind) const {
  if (kind == PropertyKind::kColour) return colours;
  return {PropertyTerm::Banded(kind, Band::kLow), PropertyTerm::Banded(kind, Band::kMid),
          PropertyTerm::Banded(kind, Band::kHigh)};
}

double BandPeak(Band band) {
  switch (band) {
    case Band::kLow:
      return 0.0;
    case Band::kMid:
      return 0.5;
    case Band::kHigh:
      return 1.0;
  }
  return 0.5;
}

double BandMembership(Band band, double coordinate, double band_width) {
  const double distance = std::fabs(coordinate - BandPeak(band));
  return std::clamp(1.0 - distance / band_width, 0.0, 1.0);
}

MembershipDegree Membership(const SceneObject &obj, const PropertyTerm &term, const PropertyConfig &cfg) {
  switch (term.kind) {
    case PropertyKind::kColour:
      if (HueDistance(obj.colour.hue, term.hue) > cfg.hue_window) return MembershipDegree(0.0);
      return MembershipDegree(obj.colour.saturation);
    case PropertyKind::kSize:
      return MembershipDegree(BandMembership(term.band, obj.size, cfg.band_width));
    case PropertyKind::kVertical:
      return MembershipDegree(BandMembership(term.band, obj.y, cfg.band_width));
    case PropertyKind::kHorizontal:
      return MembershipDegree(BandMembership(term.band, obj.x, cfg.band_width));
  }
  throw Error("unknown property kind");
}

MembershipDegree ShapeMembership(const SceneObject &obj, Shape shape) {
  return MembershipDegree(obj.shape == shape ? 1.0 : 0.0);
}

PossibilityDistribution PropertyDistribution(std::span<const SceneObject> objects, const PropertyTerm &term,
                                             const PropertyConfig &cfg) {
  std::vector<PossibilityDistribution::Entry> entries;
  entries.reserve(objects.size());
  for (const auto &obj : objects) entries.emplace_back(obj.id, Membership(obj, term, cfg));
  return PossibilityDistribution(std::move(entries));
}

PossibilityDistribution ShapeDistribution(std::span<const SceneObject> objects, Shape shape) {
  std::vector<PossibilityDistribution::Entry> entries;
  entries.reserve(objects.size());
  for (const auto &obj : objects) entries.emplace_back(obj.id, ShapeMembership(obj, shape));
  return PossibilityDistribution(std::move(entries));
}

bool Similar(MembershipDegree m, MembershipDegree m_prime, PropertyKind kind, const SimilarityConfig &cfg) {
  return std::fabs(m.value() - m_prime.value()) <= cfg.alpha(kind) + kDegreeTolerance;
}

}  // namespace fuzzyref
