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

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace fuzzyref {
namespace {

const std::vector<ObjectId> kFive = {"o1", "o2", "o3", "o4", "o5"};

PossibilityDistribution Dist(std::vector<ObjectId> ids, std::vector<double> degrees) {
  return PossibilityDistribution(std::move(ids), degrees);
}

PossibilityDistribution RandomDist(std::mt19937 &gen, const std::vector<ObjectId> &ids) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> degrees;
  for (size_t i = 0; i < ids.size(); ++i) degrees.push_back(u(gen));
  return Dist(ids, degrees);
}

// Selection sort, descending.
std::vector<double> NaiveSortDescending(std::vector<double> v) {
  for (size_t i = 0; i < v.size(); ++i) {
    size_t best = i;
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (v[j] > v[best]) best = j;
    }
    std::swap(v[i], v[best]);
  }
  return v;
}

TEST(MembershipDegreeTest, RejectsOutOfRange) {
  EXPECT_THROW(MembershipDegree(-0.01), Error);
  EXPECT_THROW(MembershipDegree(1.0001), Error);
  EXPECT_THROW(MembershipDegree(std::nan("")), Error);
  EXPECT_DOUBLE_EQ(MembershipDegree(0.3).value(), 0.3);
}

TEST(PossibilityDistributionTest, RejectsDuplicateIds) {
  EXPECT_THROW(Dist({"a", "a"}, {0.1, 0.2}), Error);
}

TEST(PossibilityDistributionTest, UnknownIdThrows) {
  EXPECT_THROW(Dist({"a"}, {0.1}).Degree("b"), Error);
}

TEST(RankTest, Examples) {
  EXPECT_EQ(Rank(Dist({"o1", "o2", "o3"}, {0.5, 1.0, 0.0})).values(), (std::vector<double>{1.0, 0.5, 0.0}));
  EXPECT_EQ(Rank(Dist({"o1"}, {0.7})).values(), (std::vector<double>{0.7}));
}

TEST(RankTest, EmptyDomain) {
  try {
    Rank(PossibilityDistribution());
    FAIL();
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "empty domain");
  }
}

TEST(RankTest, MatchesNaiveSortAndIsIdempotent) {
  std::mt19937 gen(42);
  for (int trial = 0; trial < 500; ++trial) {
    const auto dist = RandomDist(gen, kFive);
    std::vector<double> raw;
    for (const auto &e : dist) raw.push_back(e.second);
    const auto ranked = Rank(dist);
    EXPECT_EQ(ranked.values(), NaiveSortDescending(raw));
    EXPECT_EQ(ranked.first(), *std::max_element(raw.begin(), raw.end()));
    EXPECT_EQ(ranked.values().back(), *std::min_element(raw.begin(), raw.end()));
    EXPECT_EQ(Rank(Dist(kFive, ranked.values())).values(), ranked.values());
  }
}

TEST(RankTest, SingletonPadsSecondWithZero) {
  EXPECT_EQ(Rank(Dist({"x"}, {0.4})).second(), 0.0);
}

TEST(IntersectTest, PointwiseMin) {
  const std::vector<PossibilityDistribution> dists = {Dist({"o1", "o2"}, {1.0, 0.4}), Dist({"o1", "o2"}, {0.6, 1.0})};
  const auto out = Intersect(dists);
  EXPECT_EQ(out.Degree("o1").value(), 0.6);
  EXPECT_EQ(out.Degree("o2").value(), 0.4);
}

TEST(IntersectTest, SingleIsIdentity) {
  const std::vector<PossibilityDistribution> dists = {Dist({"o1", "o2"}, {0.3, 0.9})};
  const auto out = Intersect(dists);
  EXPECT_EQ(out.Degree("o1").value(), 0.3);
  EXPECT_EQ(out.Degree("o2").value(), 0.9);
}

TEST(IntersectTest, ProductTNorm) {
  const std::vector<PossibilityDistribution> dists = {Dist({"a"}, {0.5}), Dist({"a"}, {0.4})};
  EXPECT_DOUBLE_EQ(Intersect(dists, TNorm::kProduct).Degree("a").value(), 0.2);
}

TEST(IntersectTest, Errors) {
  EXPECT_THROW(Intersect(std::span<const PossibilityDistribution>()), Error);
  const std::vector<PossibilityDistribution> mismatch = {Dist({"a", "b"}, {1, 1}), Dist({"a", "c"}, {1, 1})};
  EXPECT_THROW(Intersect(mismatch), Error);
}

// Every Boolean assignment of two distributions over 3 objects.
TEST(IntersectTest, CrispMatchesSetIntersection) {
  const std::vector<ObjectId> ids = {"a", "b", "c"};
  for (int m1 = 0; m1 < 8; ++m1) {
    for (int m2 = 0; m2 < 8; ++m2) {
      std::vector<double> d1, d2;
      std::set<ObjectId> s1, s2;
      for (int i = 0; i < 3; ++i) {
        d1.push_back((m1 >> i) & 1);
        d2.push_back((m2 >> i) & 1);
        if ((m1 >> i) & 1) s1.insert(ids[i]);
        if ((m2 >> i) & 1) s2.insert(ids[i]);
      }
      const std::vector<PossibilityDistribution> dists = {Dist(ids, d1), Dist(ids, d2)};
      for (TNorm t : {TNorm::kMinimum, TNorm::kProduct}) {
        const auto out = Intersect(dists, t);
        EXPECT_TRUE(out.IsCrisp());
        for (const auto &id : ids) {
          EXPECT_EQ(out.Degree(id).value() == 1.0, s1.count(id) && s2.count(id));
        }
      }
    }
  }
}

TEST(IntersectTest, MinIsCommutativeAssociativeAndBelowInputs) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = RandomDist(gen, kFive), b = RandomDist(gen, kFive), c = RandomDist(gen, kFive);
    const std::vector<PossibilityDistribution> ab = {a, b}, ba = {b, a};
    const auto x = Intersect(ab), y = Intersect(ba);
    const std::vector<PossibilityDistribution> left = {x, c}, bc = {b, c};
    const auto bc_out = Intersect(bc);
    const std::vector<PossibilityDistribution> right = {a, bc_out};
    const auto l = Intersect(left), r = Intersect(right);
    for (const auto &id : kFive) {
      EXPECT_EQ(x.Degree(id).value(), y.Degree(id).value());
      EXPECT_EQ(l.Degree(id).value(), r.Degree(id).value());
      EXPECT_LE(x.Degree(id).value(), a.Degree(id).value());
      EXPECT_LE(x.Degree(id).value(), b.Degree(id).value());
    }
  }
}

TEST(CrispSuccessTest, Examples) {
  EXPECT_TRUE(CrispSuccess(Dist({"o1", "o2", "o3"}, {1, 0, 0}), "o1"));
  EXPECT_FALSE(CrispSuccess(Dist({"o1", "o2"}, {1, 1}), "o1"));
  EXPECT_FALSE(CrispSuccess(Dist({"o1", "o2"}, {0, 0}), "o1"));
  EXPECT_FALSE(CrispSuccess(Dist({"o1", "o2"}, {0, 1}), "o1"));
}

TEST(CrispSuccessTest, RejectsFuzzyInput) {
  try {
    CrispSuccess(Dist({"o1", "o2"}, {1, 0.5}), "o1");
    FAIL();
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "crisp predicate on fuzzy distribution");
  }
}

// For k <= 3 properties over 5 objects, every Boolean extension assignment:
// the intersected distribution succeeds iff the target is the only object
// satisfying all properties.
TEST(CrispSuccessTest, AgreesWithBooleanEvaluationExhaustively) {
  for (int k = 1; k <= 3; ++k) {
    const int bits = 5 * k;
    for (int mask = 0; mask < (1 << bits); ++mask) {
      std::vector<PossibilityDistribution> dists;
      for (int p = 0; p < k; ++p) {
        std::vector<double> d;
        for (int o = 0; o < 5; ++o) d.push_back((mask >> (p * 5 + o)) & 1);
        dists.push_back(Dist(kFive, d));
      }
      const auto meet = Intersect(dists);
      for (int t = 0; t < 5; ++t) {
        std::set<int> satisfying;
        for (int o = 0; o < 5; ++o) {
          bool all = true;
          for (int p = 0; p < k; ++p) all = all && ((mask >> (p * 5 + o)) & 1);
          if (all) satisfying.insert(o);
        }
        const bool expected = satisfying == std::set<int>{t};
        ASSERT_EQ(CrispSuccess(meet, kFive[t]), expected) << "k=" << k << " mask=" << mask << " t=" << t;
      }
    }
  }
}

}  // namespace
}  // namespace fuzzyref
