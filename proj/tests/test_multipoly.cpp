#include <gtest/gtest.h>

#include <map>
#include <random>
#include <tuple>

#include "cqsmooth/multipoly.hpp"

using namespace cqs;

namespace {

using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

// Schoolbook product over an ordered map.
MultiPoly naive_mul(const MultiPoly& a, const MultiPoly& b) {
  std::map<Key, BigInt> acc;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      const Exponents ex = MultiPoly::unpack(x.key), ey = MultiPoly::unpack(y.key);
      acc[{ex.t + ey.t, ex.z0 + ey.z0, ex.z1 + ey.z1}] += x.coeff * y.coeff;
    }
  std::vector<std::pair<Exponents, BigInt>> terms;
  for (auto& [k, c] : acc)
    terms.push_back({Exponents{std::get<0>(k), std::get<1>(k), std::get<2>(k)}, c});
  return MultiPoly::from_terms(std::move(terms));
}

struct Shape {
  int terms;
  std::int64_t max_exp;
  int coeff_bits;
};

MultiPoly random_poly(std::mt19937_64& rng, const Shape& s) {
  std::uniform_int_distribution<std::int64_t> e(0, s.max_exp);
  std::vector<std::pair<Exponents, BigInt>> terms;
  for (int i = 0; i < s.terms; ++i) {
    BigInt c = 0;
    for (int b = 0; b < s.coeff_bits; b += 32) c = (c << 32) + (rng() & 0xFFFFFFFFu);
    c >>= (s.coeff_bits + 31) / 32 * 32 - s.coeff_bits;
    if (rng() & 1) c = -c;
    terms.push_back({Exponents{e(rng), e(rng), e(rng)}, c});
  }
  return MultiPoly::from_terms(std::move(terms));
}

// Coefficient sizes and boxes chosen to land in each multiplication tier:
// 128-bit cells, split 128-bit cells, 256-bit cells, dense BigInt, sparse.
const Shape kShapes[] = {
    {40, 6, 20},   {40, 6, 62},    {30, 8, 100},  {30, 8, 124},
    {25, 5, 200},  {12, 300, 30},  {12, 300, 150}, {1, 4, 40},
    {60, 12, 2},   {200, 20, 8},
};

}  // namespace

TEST(MultiPoly, Basics) {
  const MultiPoly t = MultiPoly::variable(Var::t);
  const MultiPoly z0 = MultiPoly::variable(Var::z0);
  const MultiPoly z1 = MultiPoly::variable(Var::z1);
  const MultiPoly p = z1 * z1 + t * z1;
  EXPECT_EQ(p.to_string(), "t*z1 + z1^2");
  EXPECT_EQ(p.total_degree(), 2);
  EXPECT_EQ(p.degree(Var::z1), 2);
  EXPECT_EQ(p.at_zero(Var::t), z1 * z1);
  EXPECT_TRUE(p.divisible_by(Var::z1));
  EXPECT_FALSE(p.divisible_by(Var::z0));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((z0 + 1).pow(3), z0 * z0 * z0 + 3 * z0 * z0 + 3 * z0 + 1);
  EXPECT_EQ(MultiPoly(0), MultiPoly());
  EXPECT_THROW(z0.pow(-1), InvalidInput);
  EXPECT_THROW(MultiPoly::variable(Var::t, 70000), InvalidInput);
}

TEST(MultiPoly, ProductsMatchSchoolbook) {
  std::mt19937_64 rng(12345);
  for (const Shape& sa : kShapes)
    for (const Shape& sb : kShapes) {
      const MultiPoly a = random_poly(rng, sa), b = random_poly(rng, sb);
      EXPECT_EQ(a * b, naive_mul(a, b))
          << sa.terms << "/" << sa.coeff_bits << " x " << sb.terms << "/"
          << sb.coeff_bits;
    }
}

TEST(MultiPoly, SquaresMatchSchoolbook) {
  std::mt19937_64 rng(777);
  for (const Shape& s : kShapes)
    for (int rep = 0; rep < 3; ++rep) {
      const MultiPoly a = random_poly(rng, s);
      EXPECT_EQ(a * a, naive_mul(a, a)) << s.terms << "/" << s.coeff_bits;
      EXPECT_EQ(a.pow(2), naive_mul(a, a));
    }
}

TEST(MultiPoly, PowersOfBinomials) {
  const MultiPoly t = MultiPoly::variable(Var::t);
  const MultiPoly z1 = MultiPoly::variable(Var::z1);
  const MultiPoly f = z1 + t;
  MultiPoly slow(1);
  for (int n = 1; n <= 60; ++n) {
    slow = naive_mul(slow, f);
    ASSERT_EQ(f.pow(n), slow) << n;
  }
}

TEST(MultiPoly, ExactDivisionRecoversFactor) {
  std::mt19937_64 rng(99);
  for (const Shape& sa : kShapes)
    for (const Shape& sb : kShapes) {
      const MultiPoly a = random_poly(rng, sa), b = random_poly(rng, sb);
      if (b.is_zero()) continue;
      EXPECT_EQ(exact_div(a * b, b), a)
          << sa.terms << "/" << sa.coeff_bits << " / " << sb.terms;
    }
}

TEST(MultiPoly, InexactDivisionThrows) {
  const MultiPoly t = MultiPoly::variable(Var::t);
  const MultiPoly z0 = MultiPoly::variable(Var::z0);
  const MultiPoly z1 = MultiPoly::variable(Var::z1);
  EXPECT_THROW(exact_div(z1 * z1 + t, z1 + 1), VerificationError);
  EXPECT_THROW(exact_div(z1 + 1, 2 * z0), VerificationError);
  EXPECT_THROW(exact_div(3 * z1 + 1, MultiPoly(2)), VerificationError);
  EXPECT_THROW(exact_div(z1, MultiPoly()), InvalidInput);
  std::mt19937_64 rng(5);
  const MultiPoly a = random_poly(rng, {30, 8, 120});
  const MultiPoly b = random_poly(rng, {10, 4, 40});
  EXPECT_THROW(exact_div(a * b + z1, b), VerificationError);
}
