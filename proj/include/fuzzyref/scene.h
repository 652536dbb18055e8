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

#ifndef FUZZYREF_SCENE_H_
#define FUZZYREF_SCENE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyref/properties.h"
#include "json.hpp"

namespace fuzzyref {

enum class Similarity { kSimilar, kDissimilar };

const char *SimilarityName(Similarity similarity);
Similarity ParseSimilarity(const std::string &name);

inline constexpr int kNumLevels = 5;
inline constexpr int kNumConditions = 4 * 2 * kNumLevels;
inline constexpr int kObjectsPerScene = 5;

// Degree of membership level 1..5: 0.2, 0.4, ..., 1.0.
double LevelDegree(int level);

// One cell of the property x similarity x level design.
struct Condition {
  PropertyKind property = PropertyKind::kColour;
  Similarity similarity = Similarity::kDissimilar;
  int level = 5;

  // Dense index in [0, 40): property-major, then similarity, then level.
  int Index() const;
  static Condition FromIndex(int index);
  void Check() const;

  bool operator==(const Condition &) const = default;
};

struct Scene {
  std::vector<SceneObject> objects;
  ObjectId target;
  std::optional<PropertyTerm> identifying_term;
  std::optional<Condition> condition;
  // Normalised sizes of the small/medium/large comparison standard. Present on
  // size items only.
  std::vector<double> standard_sizes;

  const SceneObject &Object(const ObjectId &id) const;
  bool Contains(const ObjectId &id) const;
  std::vector<ObjectId> Ids() const;
  Shape TargetShape() const { return Object(target).shape; }
};

// The head noun and identifying term of the item, intersected under min.
PossibilityDistribution IdentifyingDistribution(const Scene &scene, const PropertyConfig &cfg = {});

// Every violated invariant, by name: object-count, object-range, duplicate-id,
// target-missing, missing-condition, term-kind, target-level, similar-count,
// target-not-unique-argmax, standard-sizes. Empty when the scene is valid.
std::vector<std::string> ValidateScene(const Scene &scene, const PropertyConfig &cfg = {});

inline constexpr int kGenerationAttempts = 10000;

// Deterministic in (condition, seed, cfg). Throws Error naming the last
// violated constraint when no valid scene is found within the attempt budget.
Scene GenerateItem(const Condition &condition, uint64_t seed, const PropertyConfig &cfg = {});

// Cyclic n x n latin square: cell (r, c) = (r + c) mod n.
std::vector<std::vector<int>> LatinSquare(int n);

struct ItemTemplate {
  std::string id;
  uint64_t seed = 0;
};

struct DesignPlan {
  uint64_t seed = 0;
  std::vector<ItemTemplate> items;
  // assignments[group][item] = condition index.
  std::vector<std::vector<int>> assignments;

  int groups() const { return static_cast<int>(assignments.size()); }
  Condition ConditionFor(int group, int item) const;
  // Seeded shuffle of item indices for the given participant.
  std::vector<int> TrialOrder(uint64_t participant) const;
  // The scene shown for (item, condition); deterministic.
  Scene SceneFor(int item, const Condition &condition, const PropertyConfig &cfg = {}) const;
};

// 40 items; group g sees item i in condition (g + i) mod 40.
DesignPlan GenerateDesign(int groups, uint64_t seed);

nlohmann::json ObjectToJson(const SceneObject &obj);
SceneObject ObjectFromJson(const nlohmann::json &j);
nlohmann::json TermToJson(const PropertyTerm &term);
PropertyTerm TermFromJson(const nlohmann::json &j, const PropertyConfig &cfg = {});
nlohmann::json ConditionToJson(const Condition &condition);
Condition ConditionFromJson(const nlohmann::json &j);
nlohmann::json SceneToJson(const Scene &scene);
Scene SceneFromJson(const nlohmann::json &j, const PropertyConfig &cfg = {});
nlohmann::json PlanToJson(const DesignPlan &plan);
DesignPlan PlanFromJson(const nlohmann::json &j);

}  // namespace fuzzyref

#endif  // FUZZYREF_SCENE_H_
