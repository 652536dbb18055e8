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

#ifndef FUZZYREF_REG_H_
#define FUZZYREF_REG_H_

#include <string>
#include <vector>

#include "fuzzyref/measures.h"
#include "fuzzyref/properties.h"
#include "fuzzyref/scene.h"
#include "json.hpp"

namespace fuzzyref {

// A head noun plus at most one term per property kind.
class ReferringExpression {
 public:
  explicit ReferringExpression(Shape head) : head_(head) {}
  ReferringExpression(Shape head, std::vector<PropertyTerm> terms);

  Shape head() const { return head_; }
  const std::vector<PropertyTerm> &terms() const { return terms_; }
  bool HasKind(PropertyKind kind) const;

  // Throws Error if a term of the same kind is already present.
  void Add(const PropertyTerm &term);

  // "the <size> <colour> <shape> at the <vertical> <horizontal>".
  std::string Render() const;

 private:
  Shape head_;
  std::vector<PropertyTerm> terms_;
};

struct RegConfig {
  MeasureKind measure = MeasureKind::kM2;
  // Stop once referential success reaches this value; in (0, 1].
  double theta = 0.8;
  std::vector<PropertyKind> preference = {PropertyKind::kColour, PropertyKind::kSize,
                                          PropertyKind::kVertical, PropertyKind::kHorizontal};
  TNorm tnorm = TNorm::kMinimum;
  M7Variant m7_variant = M7Variant::kVerbatim;
  PropertyConfig properties;

  // Throws Error unless theta is in (0, 1] and preference is a permutation of
  // the property kinds.
  void Check() const;
  SuccessConfig success() const { return {measure, TNorm::kMinimum, m7_variant}; }
};

// Head-noun distribution intersected with every term's distribution.
PossibilityDistribution ExpressionDistribution(const Scene &scene, const ReferringExpression &re,
                                               TNorm tnorm = TNorm::kMinimum, const PropertyConfig &cfg = {});

double ExpressionSuccess(const Scene &scene, const ObjectId &target, const ReferringExpression &re,
                         const RegConfig &cfg);

struct RegStep {
  PropertyTerm term;
  double success_before = 0.0;
  double success_after = 0.0;
};

struct RegResult {
  ReferringExpression expression{Shape::kCircle};
  double success = 0.0;
  double initial_success = 0.0;
  std::vector<RegStep> steps;
  // "unsatisfied-threshold" when success < theta at the end,
  // "target-not-top" when some distractor ties or beats the target in O_re.
  std::vector<std::string> flags;
};

// Greedy content determination. Starts from the target's shape and repeatedly
// adds the best term among the kinds not yet used until success >= theta or no
// term makes progress.
RegResult GenerateExpression(const Scene &scene, const ObjectId &target, const RegConfig &cfg);

// Exhaustive maximisation of success over every combination of at most one
// term per kind. Ties prefer fewer terms, then preference order and name.
RegResult BestExpressionBruteForce(const Scene &scene, const ObjectId &target, const RegConfig &cfg,
                                   size_t max_terms = 4);

nlohmann::json ExpressionToJson(const ReferringExpression &re);
nlohmann::json RegResultToJson(const RegResult &result, bool render);

}  // namespace fuzzyref

#endif  // FUZZYREF_REG_H_
