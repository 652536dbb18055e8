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

#include "fuzzyref/fuzzy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

namespace fuzzyref {

MembershipDegree::MembershipDegree(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error("membership degree out of [0,1]: " + std::to_string(value));
  }
}

double ApplyTNorm(TNorm tnorm, double a, double b) {
  switch (tnorm) {
    case TNorm::kMinimum:
      return std::min(a, b);
    case TNorm::kProduct:
      return a * b;
  }
  throw Error("unknown t-norm");
}

const char *TNormName(TNorm tnorm) {
  return tnorm == TNorm::kProduct ? "product" : "min";
}

TNorm ParseTNorm(const std::string &name) {
  if (name == "min" || name == "minimum") return TNorm::kMinimum;
  if (name == "product" || name == "prod") return TNorm::kProduct;
  throw Error("unknown t-norm: " + name);
}

PossibilityDistribution::PossibilityDistribution(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::unordered_set<ObjectId> seen;
  for (const auto &[id, degree] : entries_) {
    if (!seen.insert(id).second) throw Error("duplicate object id: " + id);
  }
}

PossibilityDistribution::PossibilityDistribution(std::vector<ObjectId> ids,
                                                 std::span<const double> degrees) {
  if (ids.size() != degrees.size()) throw Error("id/degree count mismatch");
  std::vector<Entry> entries;
  entries.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    entries.emplace_back(std::move(ids[i]), MembershipDegree(degrees[i]));
  }
  *this = PossibilityDistribution(std::move(entries));
}

bool PossibilityDistribution::Contains(const ObjectId &id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry &e) { return e.first == id; });
}

MembershipDegree PossibilityDistribution::Degree(const ObjectId &id) const {
  for (const auto &[key, degree] : entries_) {
    if (key == id) return degree;
  }
  throw Error("unknown object id: " + id);
}

bool PossibilityDistribution::SameDomain(const PossibilityDistribution &other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first != other.entries_[i].first) return false;
  }
  return true;
}

bool PossibilityDistribution::IsCrisp() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry &e) {
    return e.second.value() == 0.0 || e.second.value() == 1.0;
  });
}

RankedMemberships::RankedMemberships(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("empty domain");
  for (size_t i = 0; i < values_.size(); ++i) {
    MembershipDegree check(values_[i]);
    (void)check;
    if (i > 0 && values_[i] > values_[i - 1]) throw Error("ranked memberships must be non-increasing");
  }
}

RankedMemberships Rank(const PossibilityDistribution &dist) {
  if (dist.empty()) throw Error("empty domain");
  std::vector<double> values;
  values.reserve(dist.size());
  for (const auto &entry : dist) values.push_back(entry.second.value());
  std::sort(values.begin(), values.end(), std::greater<>());
  return RankedMemberships(std::move(values));
}

PossibilityDistribution Intersect(std::span<const PossibilityDistribution> dists, TNorm tnorm) {
  if (dists.empty()) throw Error("intersect of an empty list");
  const PossibilityDistribution &first = dists.front();
  for (const auto &d : dists.subspan(1)) {
    if (!d.SameDomain(first)) throw Error("domain mismatch");
  }
  std::vector<PossibilityDistribution::Entry> out = first.entries();
  for (const auto &d : dists.subspan(1)) {
    for (size_t i = 0; i < out.size(); ++i) {
      out[i].second = MembershipDegree(ApplyTNorm(tnorm, out[i].second, d.entries()[i].second));
    }
  }
  return PossibilityDistribution(std::move(out));
}

bool CrispSuccess(const PossibilityDistribution &dist, const ObjectId &target) {
  if (!dist.IsCrisp()) throw Error("crisp predicate on fuzzy distribution");
  if (!dist.Contains(target)) throw Error("unknown object id: " + target);
  for (const auto &[id, degree] : dist) {
    const bool in_support = degree.value() == 1.0;
    if (in_support != (id == target)) return false;
  }
  return true;
}

}  // namespace fuzzyref
