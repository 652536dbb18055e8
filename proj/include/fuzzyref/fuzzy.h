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

#ifndef FUZZYREF_FUZZY_H_
#define FUZZYREF_FUZZY_H_

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fuzzyref {

// Raised for domain errors: invalid degrees, unknown ids, unsatisfiable
// constraints. Usage errors in the CLI are reported separately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ObjectId = std::string;

// Absolute tolerance used when comparing degrees.
inline constexpr double kDegreeTolerance = 1e-12;

// A real number in [0, 1].
class MembershipDegree {
 public:
  constexpr MembershipDegree() = default;
  explicit MembershipDegree(double value);

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

enum class TNorm { kMinimum, kProduct };

double ApplyTNorm(TNorm tnorm, double a, double b);
const char *TNormName(TNorm tnorm);
TNorm ParseTNorm(const std::string &name);

// Fuzzy set over an ordered, duplicate-free object domain. Iteration order is
// the order the ids were given in.
class PossibilityDistribution {
 public:
  using Entry = std::pair<ObjectId, MembershipDegree>;

  PossibilityDistribution() = default;
  explicit PossibilityDistribution(std::vector<Entry> entries);
  PossibilityDistribution(std::vector<ObjectId> ids, std::span<const double> degrees);

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry> &entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool Contains(const ObjectId &id) const;
  // Throws Error for ids outside the domain.
  MembershipDegree Degree(const ObjectId &id) const;

  // True when both distributions have the same ids in the same order.
  bool SameDomain(const PossibilityDistribution &other) const;

  // All degrees are exactly 0 or 1.
  bool IsCrisp() const;

 private:
  std::vector<Entry> entries_;
};

// Degrees a1 >= a2 >= ... >= am.
class RankedMemberships {
 public:
  explicit RankedMemberships(std::vector<double> values);

  const std::vector<double> &values() const { return values_; }
  size_t size() const { return values_.size(); }
  double operator[](size_t i) const { return values_[i]; }

  // Top two degrees; a lone object is treated as having a2 = 0.
  double first() const { return values_.front(); }
  double second() const { return values_.size() > 1 ? values_[1] : 0.0; }

 private:
  std::vector<double> values_;
};

RankedMemberships Rank(const PossibilityDistribution &dist);

// Pointwise t-norm fold. All inputs must share one domain.
PossibilityDistribution Intersect(std::span<const PossibilityDistribution> dists,
                                  TNorm tnorm = TNorm::kMinimum);

// Boolean referential success: the support is exactly {target}.
bool CrispSuccess(const PossibilityDistribution &dist, const ObjectId &target);

}  // namespace fuzzyref

#endif  // FUZZYREF_FUZZY_H_
