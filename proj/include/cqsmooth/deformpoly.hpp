#pragma once

// The one-parameter deformation of X_{p,q} attached to k in K_r(a):
// z_{i-1} z_{i+1} = z_i^{a_i} + t z_i^{k_i}, restricted to the (z0, z1)
// chart where z_i = z0^{-E_i} P_i with E_i = Z_{i-2}(a_2..a_{i-1}).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqsmooth/contfrac.hpp"
#include "cqsmooth/multipoly.hpp"
#include "cqsmooth/zeroseq.hpp"

namespace cqs {

inline constexpr std::int64_t kDefaultDegreeCap = 400;

struct WeightVector {
  std::vector<BigInt> w;  // w_0 .. w_{r+1}
  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

namespace detail {

// Z_{hi-lo+1}(x_lo..x_hi) for 1-based bounds; an empty slice gives 1 and
// hi = lo - 2 gives 0.
inline BigInt zs(std::span<const std::int64_t> x, std::ptrdiff_t lo,
                 std::ptrdiff_t hi) {
  return z_slice(x, lo, hi);
}

inline std::int64_t small(const BigInt& v, const char* what) {
  return to_int64(v, what);
}

}  // namespace detail

/// w_i = Z_{i-1}(a_1..a_{i-1}) - Z_{i-2}(a_2..a_{i-1}) for i >= 1, w_0 = 1;
/// validates 1 = w_0 = w_1 <= w_2 <= ... <= w_{r+1} = q.
inline WeightVector weights(std::span<const std::int64_t> a, const BigInt& p,
                            const BigInt& q) {
  require_coprime_pair(p, q);
  if (HJSequence(a.begin(), a.end()) != hj_expand(p, p - q))
    throw InvalidInput("a = " + to_string(a) + " is not the expansion of " +
                       to_string(p) + "/" + to_string(p - q));
  const auto r = static_cast<std::ptrdiff_t>(a.size());
  WeightVector out;
  out.w.push_back(1);
  for (std::ptrdiff_t i = 1; i <= r + 1; ++i)
    out.w.push_back(detail::zs(a, 1, i - 1) - detail::zs(a, 2, i - 1));
  if (out.w[1] != 1)
    throw VerificationError("weight chain does not start at 1");
  for (std::size_t i = 1; i < out.w.size(); ++i)
    if (out.w[i] < out.w[i - 1])
      throw VerificationError("weight chain is not monotone");
  if (out.w.back() != q)
    throw VerificationError("weight chain does not end at q");
  return out;
}

/// E_i = Z_{i-2}(a_2..a_{i-1}) for i = 2..r+1, a strictly increasing chain
/// starting at 1 and ending at p - q.
inline std::vector<BigInt> z0_exponents(std::span<const std::int64_t> a) {
  require_chain(a, "a-chain");
  const auto r = static_cast<std::ptrdiff_t>(a.size());
  std::vector<BigInt> out;
  for (std::ptrdiff_t i = 2; i <= r + 1; ++i)
    out.push_back(detail::zs(a, 2, i - 1));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1])
      throw VerificationError("z0 exponents are not strictly increasing");
  const Fraction f = hj_eval(a);  // p / (p - q)
  if (out.front() != 1 || out.back() != f.denominator)
    throw VerificationError("z0 exponents do not end at p - q");
  return out;
}

namespace detail {

inline void require_component(std::span<const std::int64_t> a,
                              const ZeroSequence& k) {
  require_chain(a, "a-chain");
  if (k.size() != a.size() || !entrywise_leq(k.values(), a))
    throw InvalidInput("k " + to_string(k.values()) + " is not in K_r(" +
                       to_string(a) + ")");
}

// E_i for i = 1..r+1 (E_1 = Z_{-1} = 0) as machine integers.
inline std::vector<std::int64_t> z0_exponent_table(
    std::span<const std::int64_t> a) {
  const auto r = static_cast<std::ptrdiff_t>(a.size());
  std::vector<std::int64_t> e{0, 0};  // index 0 unused
  for (std::ptrdiff_t i = 2; i <= r + 1; ++i)
    e.push_back(small(zs(a, 2, i - 1), "z0 exponent"));
  return e;
}

}  // namespace detail

namespace detail {

// (base^k * inner) / divisor. In a deformation chain the divisor already
// divides base^k, so the quotient is taken before multiplying by inner;
// the expanded numerator is the fallback.
inline MultiPoly divide_product(const MultiPoly& base, std::int64_t k,
                                const MultiPoly& inner,
                                const MultiPoly& divisor) {
  const MultiPoly power = base.pow(k);
  try {
    return exact_div(power, divisor) * inner;
  } catch (const VerificationError&) {
    return exact_div(power * inner, divisor);
  }
}

}  // namespace detail

/// (P_0, ..., P_{r+1}) with P_0 = 1, P_1 = z1 and
/// P_{i+1} = (P_i^{a_i} + t P_i^{k_i} z0^{(a_i-k_i) E_i}) / P_{i-1}.
/// Every division must be exact and z0 must divide no P_i. degree_cap
/// bounds p = deg_{z1} P_{r+1}(t = 0).
inline std::vector<MultiPoly> deformation_chain(
    std::span<const std::int64_t> a, const ZeroSequence& k,
    std::int64_t degree_cap = kDefaultDegreeCap) {
  detail::require_component(a, k);
  const BigInt p = z_value(a);
  if (p > degree_cap)
    throw InvalidInput("degree " + to_string(p) + " exceeds the degree cap " +
                       std::to_string(degree_cap));
  const std::size_t r = a.size();
  const auto e = detail::z0_exponent_table(a);
  const MultiPoly t = MultiPoly::variable(Var::t);
  std::vector<MultiPoly> chain{MultiPoly(1), MultiPoly::variable(Var::z1)};
  for (std::size_t i = 1; i <= r; ++i) {
    const std::int64_t d = a[i - 1] - k[i - 1];
    const MultiPoly& pi = chain[i];
    const MultiPoly inner =
        pi.pow(d) + t * MultiPoly::variable(Var::z0, d * e[i]);
    MultiPoly next = detail::divide_product(pi, k[i - 1], inner, chain[i - 1]);
    if (next.divisible_by(Var::z0))
      throw VerificationError("z0 divides P_" + std::to_string(i + 1));
    chain.push_back(std::move(next));
  }
  return chain;
}

/// P_i(t = 0) = z1^{Z_{i-1}(a_1..a_{i-1})} for every i.
inline bool check_specialization(std::span<const std::int64_t> a,
                                 const std::vector<MultiPoly>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const BigInt deg = z_slice(a, 1, static_cast<std::ptrdiff_t>(i) - 1);
    Exponents ex;
    ex.z1 = detail::small(deg, "degree");
    if (chain[i].at_zero(Var::t) != MultiPoly::monomial(1, ex)) return false;
  }
  return true;
}

/// The deformation has non-positive weight: with w(z0) = w(z1) = 1 every
/// monomial of P_i has (z0, z1)-degree at most Z_{i-1}(a_1..a_{i-1}), the
/// degree of its t = 0 part.
inline bool check_negative_weight(std::span<const std::int64_t> a,
                                  const std::vector<MultiPoly>& chain) {
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const std::int64_t bound = detail::small(
        z_slice(a, 1, static_cast<std::ptrdiff_t>(i) - 1), "degree");
    for (const auto& term : chain[i].terms()) {
      const Exponents ex = MultiPoly::unpack(term.key);
      if (ex.z0 + ex.z1 > bound) return false;
    }
  }
  return true;
}

/// Right-hand side of the factorization of P_{r+1}:
/// prod_j (P_j^{d_j} + t z0^{d_j E_j})^{Z_{j-1}(k_1..k_{j-1})}, d_j = a_j - k_j.
/// A factor with d_j = 0 is (1 + t)^{Z_{j-1}(k_1..k_{j-1})}.
inline MultiPoly factorization_rhs(std::span<const std::int64_t> a,
                                   const ZeroSequence& k,
                                   const std::vector<MultiPoly>& chain) {
  const std::size_t r = a.size();
  const auto e = detail::z0_exponent_table(a);
  const MultiPoly t = MultiPoly::variable(Var::t);
  MultiPoly rhs(1);
  for (std::size_t j = 1; j <= r; ++j) {
    const std::int64_t mult = detail::small(
        z_slice(k.values(), 1, static_cast<std::ptrdiff_t>(j) - 1),
        "factor multiplicity");
    if (mult == 0) continue;
    const std::int64_t d = a[j - 1] - k[j - 1];
    const MultiPoly factor =
        chain[j].pow(d) + t * MultiPoly::variable(Var::z0, d * e[j]);
    rhs = rhs * factor.pow(mult);
  }
  return rhs;
}

inline bool verify_factorization(std::span<const std::int64_t> a,
                                 const ZeroSequence& k,
                                 const std::vector<MultiPoly>& chain) {
  detail::require_component(a, k);
  if (chain.size() != a.size() + 2) return false;
  const MultiPoly rhs = factorization_rhs(a, k, chain);
  if (rhs.total_degree() != chain.back().total_degree()) return false;
  return rhs == chain.back();
}

inline bool verify_factorization(std::span<const std::int64_t> a,
                                 const ZeroSequence& k,
                                 std::int64_t degree_cap = kDefaultDegreeCap) {
  return verify_factorization(a, k, deformation_chain(a, k, degree_cap));
}

/// One instance of the implication: if nu_{i+1} >= x_i nu_i - nu_{i-1} for
/// all 1 <= i <= n, then nu_{i+1} >= Z_i(x_i..x_1) nu_1 - Z_{i-1}(x_i..x_2)
/// nu_0 for all i. Returns false only on a counterexample.
inline bool check_valuation_bound(std::span<const std::int64_t> x,
                                  std::span<const BigInt> nu) {
  const std::size_t n = x.size();
  if (nu.size() != n + 2)
    throw InvalidInput("nu must have length len(x) + 2");
  for (std::size_t i = 1; i <= n; ++i)
    if (nu[i + 1] < BigInt(x[i - 1]) * nu[i] - nu[i - 1]) return true;
  const HJSequence rev = reversed(x);  // rev[j-1] = x_{n+1-j}
  for (std::size_t i = 1; i <= n; ++i) {
    // (x_i..x_1) is the slice rev[n-i+1 .. n] (1-based).
    const auto lo = static_cast<std::ptrdiff_t>(n - i + 1);
    const auto hi = static_cast<std::ptrdiff_t>(n);
    const BigInt zi = z_slice(rev, lo, hi);
    const BigInt zi1 = z_slice(rev, lo, hi - 1);
    if (nu[i + 1] < zi * nu[1] - zi1 * nu[0]) return false;
  }
  return true;
}

}  // namespace cqs
