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

#include "fuzzyref/scene.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fuzzyref/random.h"

namespace fuzzyref {
namespace {

using nlohmann::json;

// Dissimilar distractors keep this much extra distance beyond alpha.
constexpr double kDissimilarMargin = 0.05;
// The similar distractor sits at least this far inside alpha and below the target.
constexpr double kSimilarGap = 0.02;
constexpr double kMinSeparation = 0.12;
// Distractors sharing the target's shape, when the level leaves room for them.
constexpr size_t kSameShapeDistractors = 2;
constexpr double kEdge = 0.08;
constexpr double kLevelTolerance = 1e-9;

const std::vector<double> kStandardSizes = {0.0, 0.5, 1.0};

// A coordinate whose band membership is exactly `degree` (up to rounding).
double CoordinateFor(Band band, double degree, double width, Rng &rng) {
  if (degree > 0.0) {
    const double offset = (1.0 - degree) * width;
    switch (band) {
      case Band::kLow:
        return offset;
      case Band::kHigh:
        return 1.0 - offset;
      case Band::kMid:
        return rng.Coin() ? 0.5 + offset : 0.5 - offset;
    }
  }
  switch (band) {
    case Band::kLow:
      return rng.Uniform(width, 1.0);
    case Band::kHigh:
      return rng.Uniform(0.0, 1.0 - width);
    case Band::kMid: {
      const double reach = std::max(0.0, 0.5 - width);
      return rng.Coin() ? rng.Uniform(0.5 + width, 0.5 + width + reach) : rng.Uniform(0.0, reach);
    }
  }
  return 0.0;
}

struct Placement {
  Shape shape;
  double degree;
};

// Fills every attribute of `obj`; the identifying attribute realises `degree`.
void Realise(const PropertyTerm &term, double degree, const PropertyConfig &cfg, Rng &rng, SceneObject &obj) {
  if (term.kind == PropertyKind::kColour) {
    obj.colour = {term.hue, degree, cfg.brightness};
  } else {
    obj.colour = {rng.Pick(cfg.colours).hue, rng.Uniform(0.4, 1.0), cfg.brightness};
  }
  obj.size = term.kind == PropertyKind::kSize ? CoordinateFor(term.band, degree, cfg.band_width, rng)
                                              : rng.Uniform(0.25, 0.75);
  obj.x = term.kind == PropertyKind::kHorizontal ? CoordinateFor(term.band, degree, cfg.band_width, rng)
                                                 : rng.Uniform(kEdge, 1.0 - kEdge);
  obj.y = term.kind == PropertyKind::kVertical ? CoordinateFor(term.band, degree, cfg.band_width, rng)
                                               : rng.Uniform(kEdge, 1.0 - kEdge);
}

bool Separated(const SceneObject &obj, const std::vector<SceneObject> &placed) {
  return std::all_of(placed.begin(), placed.end(), [&](const SceneObject &other) {
    return std::hypot(obj.x - other.x, obj.y - other.y) >= kMinSeparation;
  });
}

std::optional<Scene> TryGenerate(const Condition &condition, const PropertyConfig &cfg, Rng &rng,
                                 std::string &failure) {
  const PropertyKind kind = condition.property;
  const double alpha = cfg.similarity.alpha(kind);
  const double target_degree = LevelDegree(condition.level);

  const Shape target_shape = kAllShapes[rng.Below(kAllShapes.size())];
  const PropertyTerm term = kind == PropertyKind::kColour
                                ? rng.Pick(cfg.colours)
                                : PropertyTerm::Banded(kind, static_cast<Band>(rng.Below(3)));

  std::vector<Placement> distractors;
  if (condition.similarity == Similarity::kSimilar) {
    const double lo = std::min(kSimilarGap, alpha / 2.0);
    const double hi = std::min(std::max(lo, alpha - kSimilarGap), target_degree);
    distractors.push_back({target_shape, target_degree - rng.Uniform(lo, hi)});
  }
  const bool zero_is_dissimilar = target_degree > alpha + kDissimilarMargin;
  while (zero_is_dissimilar && distractors.size() < kSameShapeDistractors) {
    distractors.push_back({target_shape, 0.0});
  }

  std::vector<double> far_levels;
  for (int level = 0; level <= kNumLevels; ++level) {
    const double d = level == 0 ? 0.0 : LevelDegree(level);
    if (std::fabs(d - target_degree) > alpha + kDissimilarMargin) far_levels.push_back(d);
  }
  if (far_levels.empty()) {
    failure = "dissimilar-levels";
    return std::nullopt;
  }
  std::vector<Shape> other_shapes;
  for (Shape s : kAllShapes) {
    if (s != target_shape) other_shapes.push_back(s);
  }
  while (distractors.size() < kObjectsPerScene - 1) {
    distractors.push_back({rng.Pick(other_shapes), rng.Pick(far_levels)});
  }

  std::vector<Placement> all = {{target_shape, target_degree}};
  all.insert(all.end(), distractors.begin(), distractors.end());

  std::vector<SceneObject> placed;
  for (const Placement &p : all) {
    SceneObject obj;
    obj.shape = p.shape;
    bool ok = false;
    for (int tries = 0; tries < 50 && !ok; ++tries) {
      Realise(term, p.degree, cfg, rng, obj);
      ok = Separated(obj, placed);
    }
    if (!ok) {
      failure = "overlap";
      return std::nullopt;
    }
    placed.push_back(obj);
  }

  std::vector<size_t> order(placed.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);

  Scene scene;
  for (size_t slot = 0; slot < order.size(); ++slot) {
    SceneObject obj = placed[order[slot]];
    obj.id = "o" + std::to_string(slot + 1);
    if (order[slot] == 0) scene.target = obj.id;
    scene.objects.push_back(std::move(obj));
  }
  scene.identifying_term = term;
  scene.condition = condition;
  if (kind == PropertyKind::kSize) scene.standard_sizes = kStandardSizes;

  const auto violations = ValidateScene(scene, cfg);
  if (!violations.empty()) {
    failure = violations.front();
    return std::nullopt;
  }
  return scene;
}

}  // namespace

const char *SimilarityName(Similarity similarity) {
  return similarity == Similarity::kSimilar ? "similar" : "dissimilar";
}

Similarity ParseSimilarity(const std::string &name) {
  if (name == "similar") return Similarity::kSimilar;
  if (name == "dissimilar") return Similarity::kDissimilar;
  throw Error("unknown similarity: " + name);
}

double LevelDegree(int level) {
  if (level < 1 || level > kNumLevels) throw Error("membership level out of 1..5: " + std::to_string(level));
  return level / 5.0;
}

int Condition::Index() const {
  Check();
  return static_cast<int>(property) * 10 + static_cast<int>(similarity) * 5 + (level - 1);
}

Condition Condition::FromIndex(int index) {
  if (index < 0 || index >= kNumConditions) throw Error("condition index out of range");
  Condition c;
  c.property = static_cast<PropertyKind>(index / 10);
  c.similarity = static_cast<Similarity>((index / 5) % 2);
  c.level = index % 5 + 1;
  return c;
}

void Condition::Check() const {
  if (level < 1 || level > kNumLevels) throw Error("membership level out of 1..5: " + std::to_string(level));
}

const SceneObject &Scene::Object(const ObjectId &id) const {
  for (const auto &obj : objects) {
    if (obj.id == id) return obj;
  }
  throw Error("unknown object id: " + id);
}

bool Scene::Contains(const ObjectId &id) const {
  return std::any_of(objects.begin(), objects.end(), [&](const SceneObject &o) { return o.id == id; });
}

std::vector<ObjectId> Scene::Ids() const {
  std::vector<ObjectId> ids;
  for (const auto &obj : objects) ids.push_back(obj.id);
  return ids;
}

PossibilityDistribution IdentifyingDistribution(const Scene &scene, const PropertyConfig &cfg) {
  if (!scene.identifying_term) throw Error("scene has no identifying term");
  const PossibilityDistribution parts[] = {ShapeDistribution(scene.objects, scene.TargetShape()),
                                           PropertyDistribution(scene.objects, *scene.identifying_term, cfg)};
  return Intersect(parts, TNorm::kMinimum);
}

std::vector<std::string> ValidateScene(const Scene &scene, const PropertyConfig &cfg) {
  std::vector<std::string> violations;
  if (scene.objects.size() != kObjectsPerScene) violations.push_back("object-count");
  std::set<ObjectId> ids;
  bool ranges_ok = true;
  for (const auto &obj : scene.objects) {
    try {
      obj.Validate();
    } catch (const Error &) {
      ranges_ok = false;
    }
    if (!ids.insert(obj.id).second) {
      violations.push_back("duplicate-id");
      return violations;
    }
  }
  if (!ranges_ok) {
    violations.push_back("object-range");
    return violations;
  }
  if (!scene.Contains(scene.target)) {
    violations.push_back("target-missing");
    return violations;
  }
  if (!scene.condition || !scene.identifying_term) {
    violations.push_back("missing-condition");
    return violations;
  }
  const Condition &cond = *scene.condition;
  if (cond.level < 1 || cond.level > kNumLevels) {
    violations.push_back("target-level");
    return violations;
  }
  const PropertyTerm &term = *scene.identifying_term;
  if (term.kind != cond.property) {
    violations.push_back("term-kind");
    return violations;
  }

  const SceneObject &target = scene.Object(scene.target);
  const MembershipDegree target_degree = Membership(target, term, cfg);
  if (std::fabs(target_degree - LevelDegree(cond.level)) > kLevelTolerance) violations.push_back("target-level");

  int similar = 0;
  for (const auto &obj : scene.objects) {
    if (obj.id == scene.target) continue;
    if (Similar(target_degree, Membership(obj, term, cfg), cond.property, cfg.similarity)) ++similar;
  }
  if (similar != (cond.similarity == Similarity::kSimilar ? 1 : 0)) violations.push_back("similar-count");

  const PossibilityDistribution identifying = IdentifyingDistribution(scene, cfg);
  const double top = identifying.Degree(scene.target);
  for (const auto &[id, degree] : identifying) {
    if (id != scene.target && degree.value() >= top - kDegreeTolerance) {
      violations.push_back("target-not-unique-argmax");
      break;
    }
  }

  if (cond.property == PropertyKind::kSize ? scene.standard_sizes != kStandardSizes
                                           : !scene.standard_sizes.empty()) {
    violations.push_back("standard-sizes");
  }
  return violations;
}

Scene GenerateItem(const Condition &condition, uint64_t seed, const PropertyConfig &cfg) {
  condition.Check();
  Rng rng(seed);
  std::string failure = "unknown";
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    if (auto scene = TryGenerate(condition, cfg, rng, failure)) return *std::move(scene);
  }
  throw Error("scene generation failed after " + std::to_string(kGenerationAttempts) +
              " attempts; last violated constraint: " + failure);
}

std::vector<std::vector<int>> LatinSquare(int n) {
  if (n < 1) throw Error("latin square size must be >= 1");
  std::vector<std::vector<int>> square(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) square[r][c] = (r + c) % n;
  }
  return square;
}

Condition DesignPlan::ConditionFor(int group, int item) const {
  if (group < 0 || group >= groups()) throw Error("group out of range");
  if (item < 0 || item >= static_cast<int>(items.size())) throw Error("item out of range");
  return Condition::FromIndex(assignments[group][item]);
}

std::vector<int> DesignPlan::TrialOrder(uint64_t participant) const {
  std::vector<int> order(items.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  Rng rng(MixSeed(seed, participant));
  rng.Shuffle(order);
  return order;
}

Scene DesignPlan::SceneFor(int item, const Condition &condition, const PropertyConfig &cfg) const {
  if (item < 0 || item >= static_cast<int>(items.size())) throw Error("item out of range");
  return GenerateItem(condition, MixSeed(items[item].seed, condition.Index()), cfg);
}

DesignPlan GenerateDesign(int groups, uint64_t seed) {
  if (groups < 1) throw Error("need at least one group");
  DesignPlan plan;
  plan.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < kNumConditions; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "item%02d", i + 1);
    plan.items.push_back({id, rng.Next()});
  }
  const auto square = LatinSquare(kNumConditions);
  for (int g = 0; g < groups; ++g) plan.assignments.push_back(square[g % kNumConditions]);
  return plan;
}

json ObjectToJson(const SceneObject &obj) {
  return {{"id", obj.id},
          {"shape", ShapeName(obj.shape)},
          {"colour", {{"h", obj.colour.hue}, {"s", obj.colour.saturation}, {"b", obj.colour.brightness}}},
          {"size", obj.size},
          {"x", obj.x},
          {"y", obj.y}};
}

SceneObject ObjectFromJson(const json &j) {
  SceneObject obj;
  obj.id = j.at("id").get<std::string>();
  obj.shape = ParseShape(j.at("shape").get<std::string>());
  const json &c = j.at("colour");
  obj.colour = {c.at("h").get<double>(), c.at("s").get<double>(), c.at("b").get<double>()};
  obj.size = j.at("size").get<double>();
  obj.x = j.at("x").get<double>();
  obj.y = j.at("y").get<double>();
  obj.Validate();
  return obj;
}

json TermToJson(const PropertyTerm &term) {
  json j = {{"kind", PropertyKindName(term.kind)}, {"value", term.Name()}};
  if (term.kind == PropertyKind::kColour) j["hue"] = term.hue;
  return j;
}

PropertyTerm TermFromJson(const json &j, const PropertyConfig &cfg) {
  const PropertyKind kind = ParsePropertyKind(j.at("kind").get<std::string>());
  const std::string value = j.at("value").get<std::string>();
  if (kind == PropertyKind::kColour) {
    if (j.contains("hue")) return PropertyTerm::Colour(value, j.at("hue").get<double>());
    return cfg.ColourTerm(value);
  }
  for (const auto &term : cfg.Vocabulary(kind)) {
    if (term.Name() == value) return term;
  }
  throw Error("unknown " + std::string(PropertyKindName(kind)) + " term: " + value);
}

json ConditionToJson(const Condition &condition) {
  return {{"property", PropertyKindName(condition.property)},
          {"similarity", SimilarityName(condition.similarity)},
          {"level", condition.level}};
}

Condition ConditionFromJson(const json &j) {
  Condition c;
  c.property = ParsePropertyKind(j.at("property").get<std::string>());
  c.similarity = ParseSimilarity(j.at("similarity").get<std::string>());
  c.level = j.at("level").get<int>();
  c.Check();
  return c;
}

json SceneToJson(const Scene &scene) {
  json objects = json::array();
  for (const auto &obj : scene.objects) objects.push_back(ObjectToJson(obj));
  json j = {{"v", 1}, {"objects", objects}, {"target", scene.target}};
  if (scene.identifying_term) j["term"] = TermToJson(*scene.identifying_term);
  if (scene.condition) j["condition"] = ConditionToJson(*scene.condition);
  if (!scene.standard_sizes.empty()) j["standard_sizes"] = scene.standard_sizes;
  return j;
}

Scene SceneFromJson(const json &j, const PropertyConfig &cfg) {
  try {
    Scene scene;
    for (const auto &o : j.at("objects")) scene.objects.push_back(ObjectFromJson(o));
    scene.target = j.at("target").get<std::string>();
    if (j.contains("term")) scene.identifying_term = TermFromJson(j.at("term"), cfg);
    if (j.contains("condition")) scene.condition = ConditionFromJson(j.at("condition"));
    if (j.contains("standard_sizes")) scene.standard_sizes = j.at("standard_sizes").get<std::vector<double>>();
    return scene;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed scene JSON: ") + e.what());
  }
}

json PlanToJson(const DesignPlan &plan) {
  json items = json::array();
  for (const auto &item : plan.items) items.push_back({{"id", item.id}, {"seed", item.seed}});
  return {{"v", 1}, {"seed", plan.seed}, {"items", items}, {"assignments", plan.assignments}};
}

DesignPlan PlanFromJson(const json &j) {
  try {
    DesignPlan plan;
    plan.seed = j.at("seed").get<uint64_t>();
    for (const auto &item : j.at("items")) {
      plan.items.push_back({item.at("id").get<std::string>(), item.at("seed").get<uint64_t>()});
    }
    plan.assignments = j.at("assignments").get<std::vector<std::vector<int>>>();
    for (const auto &row : plan.assignments) {
      if (row.size() != plan.items.size()) throw Error("plan: assignment row length differs from item count");
      for (int c : row) Condition::FromIndex(c);
    }
    if (plan.items.empty() || plan.assignments.empty()) throw Error("plan: no items or no groups");
    return plan;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed plan JSON: ") + e.what());
  }
}

}  // namespace fuzzyref
