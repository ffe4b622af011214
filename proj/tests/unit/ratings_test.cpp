#include <gtest/gtest.h>

#include <map>

#include "sdkit/ratings.hpp"

namespace sdkit {
namespace {

constexpr ClassPair k12{1, 2};

LabeledDataset ten_points() {
  std::vector<Point> pts;
  for (PointId i = 0; i < 10; ++i) pts.emplace_back(std::vector<double>{double(i)}, i);
  return LabeledDataset("ten", std::move(pts), {1, 1, 1, 2, 2, 2, 2, 1, 1, 2}, 2);
}

TEST(Rate, ModelOne) {
  const ModelRating r = rate(WeakModel::subset({3, 5, 6, 8, 9}, 10), ten_points());
  EXPECT_EQ(r.rating_exact(1), Rational(1, 5));
  EXPECT_EQ(r.rating_exact(2), Rational(4, 5));
  EXPECT_EQ(r.enrichment_exact(k12), Rational(-3, 5));
  EXPECT_DOUBLE_EQ(r.rating(1), 0.2);
  EXPECT_DOUBLE_EQ(r.enrichment(k12), -0.6);
  EXPECT_EQ(r.enrichment_exact({2, 1}), -r.enrichment_exact(k12));
}

TEST(Rate, PerfectModel) {
  const ModelRating r = rate(WeakModel::subset({0, 1, 2, 7, 8}, 10), ten_points());
  EXPECT_EQ(r.rating_exact(1), 1);
  EXPECT_EQ(r.rating_exact(2), 0);
  EXPECT_EQ(r.posterior_exact(1), Rational(1));
  EXPECT_EQ(r.posterior_exact(2), Rational(0));
}

TEST(Rate, Model242) {
  const ModelRating r = rate(WeakModel::subset({3, 6, 7, 8, 9}, 10), ten_points());
  EXPECT_EQ(r.rating_exact(1), Rational(2, 5));
  EXPECT_EQ(r.rating_exact(2), Rational(3, 5));
}

TEST(Rate, EmptyClassRefused) {
  LabeledDataset ds("d", {Point({0.0}, 0), Point({1.0}, 1)}, {1, 1}, 2);
  EXPECT_THROW(rate(WeakModel::subset({0}, 2), ds), ContractError);
  EXPECT_THROW(ModelRating({1, 0}, {1, 0}), ContractError);
  EXPECT_THROW(ModelRating({3, 0}, {2, 2}), ContractError);
}

TEST(Rate, UncoveringModelHasNoPosterior) {
  const ModelRating r({0, 0}, {5, 5});
  EXPECT_FALSE(r.covers_training());
  EXPECT_FALSE(r.posterior_exact(1).has_value());
  EXPECT_FALSE(r.posterior(2).has_value());
}

TEST(Rate, CountsMatchMembershipSums) {
  const LabeledDataset ds = ten_points();
  for (const WeakModel& m : enumerate_k_subsets(10, 4)) {
    const ModelRating r = rate(m, ds);
    std::map<ClassLabel, std::size_t> count;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (membership(m, ds.points()[i])) ++count[ds.labels()[i]];
    }
    EXPECT_EQ(r.rating_exact(1) * 5, Rational(count[1]));
    EXPECT_EQ(r.rating_exact(2) * 5, Rational(count[2]));
  }
}

TEST(Rate, EnrichmentZeroIsExact) {
  // 1/3 and 2/6: zero enrichment decided on integer counts.
  const ModelRating r({1, 2}, {3, 6});
  EXPECT_FALSE(r.enriched(k12));
  EXPECT_EQ(r.enrichment_sign(k12), 0);
  EXPECT_EQ(x_value(r, true, k12), 0.0);
  EXPECT_EQ(x_value(r, false, k12), 0.0);
  EXPECT_EQ(x_value_rescaled(r, true, k12), 0.0);
}

TEST(XValue, ModelOneInAndOut) {
  const ModelRating r({1, 4}, {5, 5});
  EXPECT_EQ(x_value_exact(r, true, k12), Rational(-1, 3));
  EXPECT_EQ(x_value_exact(r, false, k12), Rational(4, 3));
  EXPECT_NEAR(x_value(r, true, k12), -1.0 / 3.0, 1e-15);
}

TEST(XValue, Model199) {
  const ModelRating r({0, 5}, {5, 5});
  EXPECT_EQ(x_value_exact(r, true, k12), 0);
  EXPECT_EQ(x_value_exact(r, false, k12), 1);
}

TEST(XValue, BareRatings) {
  EXPECT_NEAR(x_value(0.2, 0.8, true), -1.0 / 3.0, 1e-15);
  EXPECT_EQ(x_value(0.5, 0.5, true), 0.0);
}

TEST(XValue, Rescaled) {
  const ModelRating r({1, 4}, {5, 5});
  EXPECT_EQ(x_value_rescaled_exact(r, false, k12), Rational(5, 3));
  EXPECT_EQ(x_value_rescaled_exact(r, true, k12), Rational(-5, 3));
  EXPECT_NEAR(x_value_rescaled(r, false, k12), 5.0 / 3.0, 1e-15);
  // No model yields X = 1/2, so the midpoint of the map is checked on 2X - 1 in
  // the inversion sweep below.
}

TEST(XValue, AlgebraicInversion) {
  for (std::size_t n1 = 1; n1 <= 6; ++n1) {
    for (std::size_t n2 = 1; n2 <= 6; ++n2) {
      for (std::size_t c1 = 0; c1 <= n1; ++c1) {
        for (std::size_t c2 = 0; c2 <= n2; ++c2) {
          const ModelRating r({c1, c2}, {n1, n2});
          if (!r.enriched(k12)) continue;
          const double d = r.rating(1) - r.rating(2);
          EXPECT_NEAR(x_value(r, true, k12) * d + r.rating(2), 1.0, 1e-12);
          EXPECT_NEAR(x_value(r, false, k12) * d + r.rating(2), 0.0, 1e-12);
          EXPECT_EQ(x_value_exact(r, true, k12) * r.enrichment_exact(k12) + r.rating_exact(2), 1);
          EXPECT_EQ(x_value_rescaled_exact(r, false, k12), 2 * x_value_exact(r, false, k12) - 1);
        }
      }
    }
  }
}

TEST(XValue, ExpectationIdentityOverFullStrata) {
  // Independent check: group all k-subsets of n <= 8 points by (c1, c2). Within
  // an enriched stratum, a TR1 point has mean X exactly 1 and a TR2 point 0.
  for (std::size_t n = 2; n <= 8; ++n) {
    for (unsigned labels = 1; labels + 1 < (1u << n); ++labels) {
      std::vector<bool> is1(n);
      std::size_t n1 = 0;
      for (std::size_t q = 0; q < n; ++q) {
        is1[q] = (labels >> q) & 1u;
        n1 += is1[q] ? 1 : 0;
      }
      const std::size_t n2 = n - n1;
      if (n > 6 && labels % 7 != 0) continue;  // thin the larger cases
      std::map<std::pair<std::size_t, std::size_t>, std::vector<unsigned>> strata;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::size_t c1 = 0, c2 = 0;
        for (std::size_t q = 0; q < n; ++q) {
          if ((mask >> q) & 1u) (is1[q] ? c1 : c2) += 1;
        }
        strata[{c1, c2}].push_back(mask);
      }
      for (const auto& [key, masks] : strata) {
        const ModelRating r({key.first, key.second}, {n1, n2});
        if (!r.enriched(k12)) continue;
        for (std::size_t q = 0; q < n; ++q) {
          Rational sum(0);
          for (unsigned mask : masks) sum += x_value_exact(r, (mask >> q) & 1u, k12);
          EXPECT_EQ(sum / static_cast<long>(masks.size()), Rational(is1[q] ? 1 : 0));
        }
      }
    }
  }
}

TEST(Posterior, SumsToOne) {
  for (std::size_t a = 0; a <= 3; ++a) {
    for (std::size_t b = 0; b <= 4; ++b) {
      for (std::size_t c = 0; c <= 2; ++c) {
        const ModelRating r({a, b, c}, {3, 4, 2});
        if (!r.covers_training()) continue;
        Rational sum(0);
        for (ClassLabel i = 1; i <= 3; ++i) sum += *r.posterior_exact(i);
        EXPECT_EQ(sum, 1);
      }
    }
  }
}

TEST(Pairs, AllPairsLexicographic) {
  EXPECT_EQ(all_pairs(2), (std::vector<ClassPair>{{1, 2}}));
  EXPECT_EQ(all_pairs(3), (std::vector<ClassPair>{{1, 2}, {1, 3}, {2, 3}}));
  EXPECT_TRUE(all_pairs(1).empty());
}

}  // namespace
}  // namespace sdkit
