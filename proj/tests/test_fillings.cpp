#include <gtest/gtest.h>

#include <map>
#include <set>

#include "cqsmooth/fillings.hpp"
#include "support/oracles.hpp"

using namespace cqs;
using Seq = HJSequence;

namespace {

ZeroSequence K(Seq k) { return ZeroSequence::from(std::move(k)); }

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

TEST(ChainGraph, Examples) {
  EXPECT_EQ(chain_graph(11, 4, ChainFlavor::b_chain).weights, (Seq{-3, -4}));
  EXPECT_EQ(chain_graph(11, 4, ChainFlavor::a_chain).weights, (Seq{-2, -3, -2, -2}));
  EXPECT_EQ(chain_graph(2, 1, ChainFlavor::a_chain).weights, (Seq{-2}));
  EXPECT_EQ(chain_graph(2, 1, ChainFlavor::b_chain).weights, (Seq{-2}));
  EXPECT_THROW(chain_graph(6, 3, ChainFlavor::a_chain), InvalidInput);
}

TEST(Gram, Examples) {
  const Seq a{2, 3, 2, 2};
  EXPECT_EQ(gram_from_blocks(a, K({1, 2, 2, 1})), tridiagonal_matrix(a));
  EXPECT_EQ(gram_from_blocks(a, K({1, 3, 1, 2})), tridiagonal_matrix(a));
  const IntegerMatrix g = gram_from_blocks(Seq{5}, K({0}));
  EXPECT_EQ(g.rows(), 1u);
  EXPECT_EQ(g(0, 0), 5);
}

TEST(Gram, IntersectionFormIsNegativeM) {
  for (const Seq& a : chains(18))
    for (const auto& k : enumerate_K(a)) {
      const auto model = DiagonalLatticeModel::from_blocks(a, k);
      const IntegerMatrix form = model.intersection_form();
      const auto m = oracle::gram(a);
      const std::size_t r = a.size();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          ASSERT_EQ(form(i, j), -m[i * r + j]) << to_string(a) << to_string(k.values());
      EXPECT_EQ(static_cast<std::int64_t>(model.rank), picture_point_count(a, k));
    }
}

TEST(Fingerprint, Examples) {
  const Seq a{2, 3, 2, 2};
  EXPECT_EQ(lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, K({1, 2, 2, 1}))),
            (Seq{2, 2, 0, 2}));
  EXPECT_EQ(lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, K({1, 3, 1, 2}))),
            (Seq{2, 0, 2, 0}));
  DiagonalLatticeModel zero;
  zero.class_rows = IntegerMatrix(3, 4);
  zero.rank = 4;
  EXPECT_EQ(lisca_fingerprint(zero), (Seq{0, 0, 0}));
}

TEST(Fingerprint, LawRoundTripAndInjectivity) {
  for (const Seq& a : chains(18)) {
    std::set<Seq> seen;
    for (const auto& k : enumerate_K(a)) {
      const Seq fp = lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, k));
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(fp[i], 2 * (a[i] - k[i]));
      EXPECT_EQ(recover_k(a, fp), k);
      EXPECT_TRUE(seen.insert(fp).second);
    }
  }
}

TEST(RecoverK, Examples) {
  const Seq a{2, 3, 2, 2};
  EXPECT_EQ(recover_k(a, Seq{2, 2, 0, 2}).values(), (Seq{1, 2, 2, 1}));
  EXPECT_EQ(recover_k(a, Seq{2, 0, 2, 0}).values(), (Seq{1, 3, 1, 2}));
  EXPECT_THROW(recover_k(a, Seq{0, 0, 0, 0}), InvalidInput);
  EXPECT_THROW(recover_k(a, Seq{1, 2, 0, 2}), InvalidInput);
  EXPECT_THROW(recover_k(a, Seq{2, 2, 0}), InvalidInput);
}

TEST(Classify, Examples) {
  const auto d1 = FillingDescriptor::make(11, 4, K({1, 2, 2, 1}));
  const auto d2 = FillingDescriptor::make(11, 3, K({1, 2, 2, 1}));
  const auto d3 = FillingDescriptor::make(11, 4, K({1, 3, 1, 2}));
  const auto d4 = FillingDescriptor::make(11, 3, K({2, 1, 3, 1}));
  EXPECT_TRUE(classify(d1, d2, false));
  EXPECT_TRUE(classify(d3, d4, false));
  EXPECT_FALSE(classify(d1, d3, false));
  EXPECT_FALSE(classify(d1, d2, true));
  for (const auto& d : {d1, d2, d3, d4}) {
    EXPECT_TRUE(classify(d, d, false));
    EXPECT_TRUE(classify(d, d, true));
  }
  EXPECT_THROW(FillingDescriptor::make(11, 4, K({1, 1})), InvalidInput);
  const auto other = FillingDescriptor::make(5, 2, K({1, 1}));
  EXPECT_FALSE(classify(d1, other, false));
}

TEST(Classify, OrderTagNormalisation) {
  const auto d = FillingDescriptor::make(11, 4, K({1, 3, 1, 2}));
  const auto c = d.conjugate();
  EXPECT_EQ(c.q, 3);
  EXPECT_EQ(c.k.values(), (Seq{2, 1, 3, 1}));
  EXPECT_EQ(c.order_type, OrderType::conjugated);
  EXPECT_EQ(c.normalized(), d);
  EXPECT_EQ(c.conjugate(), d);
  EXPECT_TRUE(classify(d, c, true));
  EXPECT_TRUE(classify(d, c, false));
}

TEST(Classify, EquivalenceClassesWithoutOrder) {
  for (int p = 2; p <= 40; ++p) {
    std::vector<FillingDescriptor> all;
    for (int q = 1; q < p; ++q) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      for (const auto& k : enumerate_K(hj_expand(p, p - q)))
        all.push_back(FillingDescriptor::make(p, q, k));
    }
    for (const auto& x : all) {
      std::size_t size = 0;
      for (const auto& y : all) {
        EXPECT_EQ(classify(x, y, false), classify(y, x, false));
        if (classify(x, y, false)) {
          ++size;
          for (const auto& z : all)
            if (classify(y, z, false)) {
              EXPECT_TRUE(classify(x, z, false));
            }
        }
        if (classify(x, y, true)) {
          EXPECT_EQ(x, y);
        }
      }
      const bool self = q_conjugate(x.p, x.q) == x.q && x.k.reversed() == x.k;
      EXPECT_EQ(size, self ? 1u : 2u) << p << " " << to_string(x.q);
    }
  }
}

TEST(CountComponents, Examples) {
  EXPECT_EQ(count_components(11, 4), 2u);
  EXPECT_EQ(count_components(2, 1), 1u);
  // The all-2 chain has a second component only for p = 4.
  for (int p = 2; p <= 12; ++p) EXPECT_EQ(count_components(p, 1), p == 4 ? 2u : 1u);
}

TEST(CountComponents, InvariantUnderConjugation) {
  for (int p = 2; p <= 60; ++p)
    for (int q = 1; q < p; ++q)
      if (gcd(BigInt(p), BigInt(q)) == 1) {
        EXPECT_EQ(count_components(p, q), count_components(p, q_conjugate(p, q)));
      }
}

TEST(Milnor, Examples) {
  const Seq a{2, 3, 2, 2};
  EXPECT_EQ(milnor_numbers(a, K({1, 2, 2, 1})), (MilnorNumbers{3, 2, 6}));
  EXPECT_EQ(milnor_numbers(a, K({1, 3, 1, 2})), (MilnorNumbers{2, 1, 5}));
  // a = (2, 2), k = (1, 1): three points, chi = 2.
  EXPECT_EQ(milnor_numbers(Seq{2, 2}, K({1, 1})).mu, 1);
  EXPECT_EQ(milnor_numbers(Seq{2}, K({0})).mu, 1);
  // Single excess: the rational ball smoothing of (4, 1).
  EXPECT_EQ(milnor_numbers(Seq{2, 2, 2}, K({2, 1, 2})), (MilnorNumbers{1, 0, 3}));
  EXPECT_THROW(milnor_numbers(Seq{2, 2}, K({1, 2, 2, 1})), InvalidInput);
}

TEST(Milnor, Consistency) {
  for (const Seq& a : chains(14))
    for (const auto& k : enumerate_K(a)) {
      const MilnorNumbers m = milnor_numbers(a, k);
      std::int64_t excess = 0;
      for (std::size_t i = 0; i < a.size(); ++i) excess += a[i] - k[i];
      EXPECT_EQ(m.n_points - (static_cast<std::int64_t>(a.size()) - 1),
                m.euler_characteristic_fiber);
      EXPECT_EQ(m.euler_characteristic_fiber, excess);
      EXPECT_EQ(m.mu, excess - 1);
      EXPECT_GE(m.mu, 0);
    }
}
