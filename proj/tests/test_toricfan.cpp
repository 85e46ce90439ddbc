#include <gtest/gtest.h>

#include "cqsmooth/toricfan.hpp"
#include "support/oracles.hpp"

using namespace cqs;
using Seq = HJSequence;
using Rays = std::vector<LatticeVector>;

namespace {

std::vector<Seq> chains(int max_sum) {
  std::vector<Seq> out, frontier{{}};
  while (!frontier.empty()) {
    std::vector<Seq> next;
    for (const Seq& a : frontier) {
      int sum = 0;
      for (auto v : a) sum += static_cast<int>(v);
      for (int v = 2; sum + v <= max_sum; ++v) {
        Seq b = a;
        b.push_back(v);
        out.push_back(b);
        next.push_back(b);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST(BuildFan, Examples) {
  EXPECT_EQ(build_fan(ZeroSequence::from({1, 2, 2, 1})).rays,
            (Rays{{-1, -1}, {1, 0}, {1, 1}, {1, 2}, {1, 3}, {0, 1}}));
  EXPECT_EQ(build_fan(ZeroSequence::from({0})).rays,
            (Rays{{-1, -1}, {1, 0}, {0, 1}}));
  EXPECT_EQ(build_fan(ZeroSequence::from({1, 1})).rays,
            (Rays{{-1, -1}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST(BuildFan, RejectsNonMembers) {
  EXPECT_THROW(build_fan(Seq{2, 1, 1, 1, 1, 2}), InvalidInput);
  EXPECT_THROW(build_fan(Seq{1, 2}), InvalidInput);
  EXPECT_THROW(build_fan(Seq{}), InvalidInput);
}

TEST(BuildFan, RelationsClosedFormAndUnimodularity) {
  for (int r = 1; r <= 9; ++r)
    for (const auto& k : enumerate_zero_sequences(r)) {
      const Fan fan = build_fan(k);
      const Rays& u = fan.rays;
      const std::size_t n = u.size();
      ASSERT_EQ(n, static_cast<std::size_t>(r) + 2);
      EXPECT_EQ(u[0] + u[2], BigInt(k[0] - 1) * u[1]);
      for (int j = 2; j <= r; ++j)
        EXPECT_EQ(u[j - 1] + u[j + 1], BigInt(k[j - 1]) * u[j]);
      EXPECT_EQ(u[r + 1] + u[1], -u[0]);
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_EQ(det(u[j], u[(j + 1) % n]), 1);
      for (int j = 1; j <= r + 1; ++j)
        EXPECT_EQ(u[j], (LatticeVector{oracle::continuant(k.values(), 1, j - 1),
                                       oracle::continuant(k.values(), 2, j - 1)}));
    }
}

TEST(ChartExponents, Examples) {
  const Seq a{2, 3, 2, 2};
  const ChartExponentTable m = chart_exponents(a, ZeroSequence::from({1, 2, 2, 1}));
  EXPECT_EQ(m(1, 1), 0);
  EXPECT_EQ(m(2, 1), -1);
  for (std::size_t j = 1; j <= 4; ++j) {
    EXPECT_EQ(m(j, j), 0);
    EXPECT_EQ(m(j, j + 1), 1);
  }
  EXPECT_EQ(m(5, 1), -7);  // -(p - q)
}

TEST(Pullback, ExponentsAndShapeInSweep) {
  for (const Seq& a : chains(11))
    for (const auto& k : enumerate_K(a)) {
      const auto chain = deformation_chain(a, k);
      const ChartExponentTable m(a, k);
      std::int64_t total = 0;
      for (std::size_t j = 1; j <= a.size(); ++j) {
        const auto pulled = pullback_chain(a, k, j, chain);
        for (std::size_t i = 1; i <= a.size() + 1; ++i) {
          EXPECT_EQ(BigInt(pulled[i - 1].x_shift), m(i, j));
          EXPECT_EQ(BigInt(pulled[i - 1].y_shift), m(i, j + 1));
        }
        const ChartCheck c = check_chart(a, k, j, chain);
        EXPECT_TRUE(c.ok()) << to_string(a) << to_string(k.values()) << " " << c.failure;
        EXPECT_EQ(c.taylor_checked, a[j - 1] - k[j - 1] == 1);
        total += indeterminacy_count(a, k, j, chain);
      }
      EXPECT_EQ(total, picture_point_count(a, k) -
                           (static_cast<std::int64_t>(a.size()) - 1));
    }
}

TEST(Pullback, RestrictionForLowIndices) {
  const Seq a{2, 3, 2, 2};
  const ZeroSequence k = ZeroSequence::from({1, 3, 1, 2});
  const auto chain = deformation_chain(a, k);
  for (std::size_t j = 1; j <= 4; ++j) {
    const auto pulled = pullback_chain(a, k, j, chain);
    for (std::size_t i = 1; i <= j; ++i) {
      const MultiPoly r = pulled[i - 1].body.at_zero(Var::z0);
      EXPECT_FALSE(r.is_zero());
      EXPECT_EQ(r.degree(Var::z1), 0);
    }
  }
  EXPECT_THROW(pullback_chain(a, k, 0, chain), InvalidInput);
  EXPECT_THROW(pullback_chain(a, k, 5, chain), InvalidInput);
}

TEST(Indeterminacy, Examples) {
  const Seq a{2, 3, 2, 2};
  EXPECT_EQ(indeterminacy_count(a, ZeroSequence::from({1, 2, 2, 1}), 1), 1);
  EXPECT_EQ(indeterminacy_count(a, ZeroSequence::from({1, 3, 1, 2}), 4), 0);
  EXPECT_EQ(indeterminacy_count(a, ZeroSequence::from({1, 2, 2, 1}), 3), 0);
}

TEST(Chart, TamperedChainFails) {
  const Seq a{2, 3, 2, 2};
  const ZeroSequence k = ZeroSequence::from({1, 2, 2, 1});
  auto chain = deformation_chain(a, k);
  chain[3] = chain[3] + MultiPoly::variable(Var::z0);
  bool any_failed = false;
  for (std::size_t j = 1; j <= 4; ++j) any_failed |= !check_chart(a, k, j, chain).ok();
  EXPECT_TRUE(any_failed);
}
