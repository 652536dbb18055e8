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

#include "fuzzyref/reg.h"

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>

namespace fuzzyref {
namespace {

using nlohmann::json;

int PreferenceRank(const RegConfig &cfg, PropertyKind kind) {
  const auto it = std::find(cfg.preference.begin(), cfg.preference.end(), kind);
  return static_cast<int>(it - cfg.preference.begin());
}

// Terms of a kind sorted by name, so candidate order is the tie-break order.
std::vector<PropertyTerm> SortedVocabulary(const RegConfig &cfg, PropertyKind kind) {
  auto terms = cfg.properties.Vocabulary(kind);
  std::sort(terms.begin(), terms.end(),
            [](const PropertyTerm &a, const PropertyTerm &b) { return a.Name() < b.Name(); });
  return terms;
}

// How far the target stands above the distractors: sum of max(0, mu_t - mu_d).
double Discrimination(const PossibilityDistribution &dist, const ObjectId &target) {
  const double top = dist.Degree(target);
  double sum = 0.0;
  for (const auto &[id, degree] : dist) {
    if (id != target) sum += std::max(0.0, top - degree.value());
  }
  return sum;
}

struct Score {
  double success = 0.0;
  double discrimination = 0.0;

  bool Beats(const Score &other) const {
    if (success > other.success + kDegreeTolerance) return true;
    if (success < other.success - kDegreeTolerance) return false;
    return discrimination > other.discrimination + kDegreeTolerance;
  }
};

Score Evaluate(const Scene &scene, const ObjectId &target, const ReferringExpression &re, const RegConfig &cfg) {
  const auto dist = ExpressionDistribution(scene, re, cfg.tnorm, cfg.properties);
  return {ReferentialSuccess(dist, target, cfg.success()).value(), Discrimination(dist, target)};
}

void AddFlags(const Scene &scene, const ObjectId &target, const RegConfig &cfg, RegResult &result) {
  if (result.success < cfg.theta - kDegreeTolerance) result.flags.push_back("unsatisfied-threshold");
  const auto dist = ExpressionDistribution(scene, result.expression, cfg.tnorm, cfg.properties);
  const double top = dist.Degree(target);
  for (const auto &[id, degree] : dist) {
    if (id != target && degree.value() >= top) {
      result.flags.push_back("target-not-top");
      break;
    }
  }
}

using TermKey = std::vector<std::pair<int, std::string>>;

TermKey KeyOf(const ReferringExpression &re, const RegConfig &cfg) {
  TermKey key;
  for (const auto &term : re.terms()) key.emplace_back(PreferenceRank(cfg, term.kind), term.Name());
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

ReferringExpression::ReferringExpression(Shape head, std::vector<PropertyTerm> terms) : head_(head) {
  for (const auto &term : terms) Add(term);
}

bool ReferringExpression::HasKind(PropertyKind kind) const {
  return std::any_of(terms_.begin(), terms_.end(), [kind](const PropertyTerm &t) { return t.kind == kind; });
}

void ReferringExpression::Add(const PropertyTerm &term) {
  if (HasKind(term.kind)) {
    throw Error(std::string("expression already has a ") + PropertyKindName(term.kind) + " term");
  }
  terms_.push_back(term);
}

std::string ReferringExpression::Render() const {
  auto word = [this](PropertyKind kind) -> std::string {
    for (const auto &t : terms_) {
      if (t.kind == kind) return t.Name();
    }
    return "";
  };
  std::string text = "the";
  for (PropertyKind kind : {PropertyKind::kSize, PropertyKind::kColour}) {
    if (const auto w = word(kind); !w.empty()) text += " " + w;
  }
  text += " ";
  text += ShapeName(head_);
  std::string location;
  for (PropertyKind kind : {PropertyKind::kVertical, PropertyKind::kHorizontal}) {
    if (const auto w = word(kind); !w.empty()) location += " " + w;
  }
  if (!location.empty()) text += " at the" + location;
  return text;
}

void RegConfig::Check() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error("theta must be in (0,1]");
  std::set<PropertyKind> seen(preference.begin(), preference.end());
  if (preference.size() != kAllPropertyKinds.size() || seen.size() != kAllPropertyKinds.size()) {
    throw Error("preference order must be a permutation of colour, size, vertical, horizontal");
  }
}

PossibilityDistribution ExpressionDistribution(const Scene &scene, const ReferringExpression &re, TNorm tnorm,
                                               const PropertyConfig &cfg) {
  std::vector<PossibilityDistribution> parts = {ShapeDistribution(scene.objects, re.head())};
  for (const auto &term : re.terms()) parts.push_back(PropertyDistribution(scene.objects, term, cfg));
  return Intersect(parts, tnorm);
}

double ExpressionSuccess(const Scene &scene, const ObjectId &target, const ReferringExpression &re,
                         const RegConfig &cfg) {
  return Evaluate(scene, target, re, cfg).success;
}

RegResult GenerateExpression(const Scene &scene, const ObjectId &target, const RegConfig &cfg) {
  cfg.Check();
  if (!scene.Contains(target)) throw Error("target not in scene: " + target);

  RegResult result;
  result.expression = ReferringExpression(scene.Object(target).shape);
  Score current = Evaluate(scene, target, result.expression, cfg);
  result.initial_success = current.success;

  while (current.success < cfg.theta - kDegreeTolerance) {
    std::optional<PropertyTerm> best_term;
    Score best;
    for (PropertyKind kind : cfg.preference) {
      if (result.expression.HasKind(kind)) continue;
      for (const auto &term : SortedVocabulary(cfg, kind)) {
        ReferringExpression candidate = result.expression;
        candidate.Add(term);
        const Score score = Evaluate(scene, target, candidate, cfg);
        if (!best_term || score.Beats(best)) {
          best_term = term;
          best = score;
        }
      }
    }
    if (!best_term || !best.Beats(current)) break;
    result.expression.Add(*best_term);
    result.steps.push_back({*best_term, current.success, best.success});
    current = best;
  }
  result.success = current.success;
  AddFlags(scene, target, cfg, result);
  return result;
}

RegResult BestExpressionBruteForce(const Scene &scene, const ObjectId &target, const RegConfig &cfg,
                                   size_t max_terms) {
  cfg.Check();
  if (!scene.Contains(target)) throw Error("target not in scene: " + target);

  std::vector<std::vector<PropertyTerm>> vocab;
  for (PropertyKind kind : cfg.preference) vocab.push_back(SortedVocabulary(cfg, kind));

  const Shape head = scene.Object(target).shape;
  std::optional<ReferringExpression> best;
  double best_success = -1.0;
  TermKey best_key;

  // choice[k] == 0 leaves kind k out; otherwise picks vocab[k][choice[k] - 1].
  std::vector<size_t> choice(vocab.size(), 0);
  while (true) {
    ReferringExpression re(head);
    for (size_t k = 0; k < vocab.size(); ++k) {
      if (choice[k] > 0) re.Add(vocab[k][choice[k] - 1]);
    }
    if (re.terms().size() <= max_terms) {
      const double success = ExpressionSuccess(scene, target, re, cfg);
      const TermKey key = KeyOf(re, cfg);
      bool better = !best || success > best_success + kDegreeTolerance;
      if (!better && best && success >= best_success - kDegreeTolerance) {
        better = std::make_tuple(key.size(), key) < std::make_tuple(best_key.size(), best_key);
      }
      if (better) {
        best = re;
        best_success = success;
        best_key = key;
      }
    }
    size_t k = 0;
    while (k < vocab.size() && ++choice[k] > vocab[k].size()) choice[k++] = 0;
    if (k == vocab.size()) break;
  }

  RegResult result;
  result.expression = *best;
  result.success = best_success;
  result.initial_success = ExpressionSuccess(scene, target, ReferringExpression(head), cfg);
  AddFlags(scene, target, cfg, result);
  return result;
}

json ExpressionToJson(const ReferringExpression &re) {
  json terms = json::array();
  for (const auto &term : re.terms()) terms.push_back(TermToJson(term));
  return {{"head", ShapeName(re.head())}, {"terms", terms}};
}

json RegResultToJson(const RegResult &result, bool render) {
  json trace = json::array();
  for (const auto &step : result.steps) {
    trace.push_back({{"term", TermToJson(step.term)},
                     {"success_before", step.success_before},
                     {"success_after", step.success_after}});
  }
  json j = {{"v", 1},
            {"expression", ExpressionToJson(result.expression)},
            {"success", result.success},
            {"initial_success", result.initial_success},
            {"trace", trace},
            {"flags", result.flags}};
  if (render) j["text"] = result.expression.Render();
  return j;
}

}  // namespace fuzzyref
