#pragma once

// The smooth complete fan F_k attached to k in K_r, its chart exponent table
// and the pull-backs of z_i to the charts (x_j, y_j) of the toric surface.
//
// Coordinate model: u_1 = (1, 0), u_{r+1} = (0, 1), u_0 = (-1, -1).
// In chart polynomials the MultiPoly slots are reused as (t, x, y):
// Var::z0 carries x and Var::z1 carries y.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqsmooth/conegeom.hpp"
#include "cqsmooth/deformpoly.hpp"
#include "cqsmooth/zeroseq.hpp"

namespace cqs {

struct Fan {
  std::vector<LatticeVector> rays;  // u_0 .. u_{r+1}
  friend bool operator==(const Fan&, const Fan&) = default;
};

/// Rays from u_0 + u_2 = (k_1 - 1) u_1 and u_{j-1} + u_{j+1} = k_j u_j.
/// Validates the end point u_{r+1} = (0, 1), the closed form
/// u_j = Z_{j-1}(k_1..k_{j-1}) u_1 + Z_{j-2}(k_2..k_{j-1}) u_{r+1},
/// primitivity, cyclic unimodularity and that u_2..u_r turn once from u_1
/// to u_{r+1}. Throws InvalidInput when k does not give a fan.
inline Fan build_fan(std::span<const std::int64_t> k) {
  const std::size_t r = k.size();
  if (r == 0) throw InvalidInput("empty sequence");
  const LatticeVector u0{-1, -1}, u1{1, 0}, last{0, 1};
  Fan fan;
  fan.rays = {u0, u1, BigInt(k[0] - 1) * u1 - u0};
  for (std::size_t j = 2; j <= r; ++j)
    fan.rays.push_back(BigInt(k[j - 1]) * fan.rays[j] - fan.rays[j - 1]);
  const auto reject = [&](const std::string& why) {
    return InvalidInput("sequence " + to_string(k) + " gives no fan: " + why);
  };
  if (fan.rays.back() != last) throw reject("u_{r+1} != (0,1)");
  if (fan.rays[r + 1] + fan.rays[1] != -fan.rays[0])
    throw reject("closing relation fails");
  for (std::size_t j = 2; j <= r; ++j) {
    const LatticeVector& u = fan.rays[j];
    if (u.x <= 0 || u.y <= 0) throw reject("rays wind more than once");
  }
  for (std::size_t j = 1; j <= r; ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    const LatticeVector closed = z_slice(k, 1, jj - 1) * u1 +
                                 z_slice(k, 2, jj - 1) * last;
    if (closed != fan.rays[j])
      throw VerificationError("ray closed form fails at j = " +
                              std::to_string(j));
  }
  const std::size_t n = fan.rays.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_primitive(fan.rays[j])) throw reject("ray not primitive");
    if (det(fan.rays[j], fan.rays[(j + 1) % n]) != 1)
      throw reject("adjacent rays not unimodular");
  }
  return fan;
}

inline Fan build_fan(const ZeroSequence& k) { return build_fan(k.values()); }

/// m_i^{(j)} for i = 1..r+1 and j = 1..r+1 (the column j = r+1 gives the
/// y-exponents of the last chart).
class ChartExponentTable {
 public:
  ChartExponentTable(std::span<const std::int64_t> a, const ZeroSequence& k)
      : r_(a.size()) {
    detail::require_component(a, k);
    m_.resize((r_ + 1) * (r_ + 1));
    for (std::size_t i = 1; i <= r_ + 1; ++i)
      for (std::size_t j = 1; j <= r_ + 1; ++j) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const auto jj = static_cast<std::ptrdiff_t>(j);
        at(i, j) = i <= j ? z_slice(k.values(), ii + 1, jj - 1)
                          : BigInt(-z_slice(a, jj + 1, ii - 1));
      }
  }

  std::size_t r() const { return r_; }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return m_[(i - 1) * (r_ + 1) + (j - 1)];
  }

 private:
  BigInt& at(std::size_t i, std::size_t j) {
    return m_[(i - 1) * (r_ + 1) + (j - 1)];
  }

  std::size_t r_;
  std::vector<BigInt> m_;
};

inline ChartExponentTable chart_exponents(std::span<const std::int64_t> a,
                                          const ZeroSequence& k) {
  return ChartExponentTable(a, k);
}

/// x^{x_shift} y^{y_shift} body with body in Z[t, x, y] divisible by
/// neither x nor y.
struct LaurentPoly {
  std::int64_t x_shift = 0;
  std::int64_t y_shift = 0;
  MultiPoly body;

  /// Coefficients in Z[t] indexed by (deg_x, deg_y).
  std::map<std::pair<std::int64_t, std::int64_t>, MultiPoly> coefficients()
      const {
    std::map<std::pair<std::int64_t, std::int64_t>,
             std::vector<std::pair<Exponents, BigInt>>>
        grouped;
    for (const auto& term : body.terms()) {
      const Exponents e = MultiPoly::unpack(term.key);
      grouped[{e.z0 + x_shift, e.z1 + y_shift}].push_back(
          {Exponents{e.t, 0, 0}, term.coeff});
    }
    std::map<std::pair<std::int64_t, std::int64_t>, MultiPoly> out;
    for (auto& [key, terms] : grouped)
      out.emplace(key, MultiPoly::from_terms(std::move(terms)));
    return out;
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;
};

namespace detail {

// Substitution z0 = x^A y^B, z1 = x^C y^D applied to z0^{-E} P.
inline LaurentPoly substitute_chart(const MultiPoly& poly, std::int64_t e,
                                    std::int64_t A, std::int64_t B,
                                    std::int64_t C, std::int64_t D) {
  if (poly.is_zero()) return {};
  std::vector<std::pair<Exponents, BigInt>> raw;
  std::vector<std::pair<std::int64_t, std::int64_t>> xy;
  std::int64_t min_x = INT64_MAX, min_y = INT64_MAX;
  for (const auto& term : poly.terms()) {
    const Exponents ex = MultiPoly::unpack(term.key);
    const std::int64_t x = A * (ex.z0 - e) + C * ex.z1;
    const std::int64_t y = B * (ex.z0 - e) + D * ex.z1;
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    xy.emplace_back(x, y);
  }
  std::size_t idx = 0;
  for (const auto& term : poly.terms()) {
    const Exponents ex = MultiPoly::unpack(term.key);
    raw.push_back({Exponents{ex.t, xy[idx].first - min_x,
                             xy[idx].second - min_y},
                   term.coeff});
    ++idx;
  }
  LaurentPoly out{min_x, min_y, MultiPoly::from_terms(std::move(raw))};
  // Cancellation may leave a further common monomial.
  if (!out.body.is_zero()) {
    const std::int64_t dx = out.body.min_degree(Var::z0);
    const std::int64_t dy = out.body.min_degree(Var::z1);
    if (dx > 0 || dy > 0) {
      out.body = exact_div(out.body, MultiPoly::monomial(1, {0, dx, dy}));
      out.x_shift += dx;
      out.y_shift += dy;
    }
  }
  return out;
}

}  // namespace detail

/// z_i o psi_j for i = 1..r+1 (index 0 of the result is z_1), written as
/// x^{m_i^{(j)}} y^{m_i^{(j+1)}} Q_i^{(j)}. Throws VerificationError if the
/// exponents differ from the chart exponent table.
inline std::vector<LaurentPoly> pullback_chain(
    std::span<const std::int64_t> a, const ZeroSequence& k, std::size_t j,
    const std::vector<MultiPoly>& chain) {
  detail::require_component(a, k);
  const std::size_t r = a.size();
  if (j < 1 || j > r) throw InvalidInput("chart index out of range");
  if (chain.size() != r + 2) throw InvalidInput("chain has the wrong length");
  const auto jj = static_cast<std::ptrdiff_t>(j);
  const auto ks = k.values();
  const std::int64_t A = detail::small(z_slice(ks, 1, jj - 1), "exponent");
  const std::int64_t B = detail::small(z_slice(ks, 1, jj), "exponent");
  const std::int64_t C = detail::small(z_slice(ks, 2, jj - 1), "exponent");
  const std::int64_t D = detail::small(z_slice(ks, 2, jj), "exponent");
  const auto e = detail::z0_exponent_table(a);
  const ChartExponentTable m(a, k);
  std::vector<LaurentPoly> out;
  for (std::size_t i = 1; i <= r + 1; ++i) {
    LaurentPoly z = detail::substitute_chart(chain[i], e[i], A, B, C, D);
    if (BigInt(z.x_shift) != m(i, j) || BigInt(z.y_shift) != m(i, j + 1))
      throw VerificationError(
          "chart " + std::to_string(j) + ": z_" + std::to_string(i) +
          " has exponents (" + std::to_string(z.x_shift) + "," +
          std::to_string(z.y_shift) + "), expected (" + to_string(m(i, j)) +
          "," + to_string(m(i, j + 1)) + ")");
    out.push_back(std::move(z));
  }
  return out;
}

inline std::vector<LaurentPoly> pullback_chain(
    std::span<const std::int64_t> a, const ZeroSequence& k, std::size_t j,
    std::int64_t degree_cap = kDefaultDegreeCap) {
  return pullback_chain(a, k, j, deformation_chain(a, k, degree_cap));
}

struct ChartCheck {
  bool exponents_ok = false;  // x^{m_i^{(j)}} y^{m_i^{(j+1)}} factors exactly
  bool restriction_ok = false;  // shape of Q_i^{(j)} at x = 0
  bool taylor_ok = true;        // order at the indeterminacy point
  bool taylor_checked = false;  // false when a_j - k_j != 1
  std::string failure;

  bool ok() const { return exponents_ok && restriction_ok && taylor_ok; }
};

namespace detail {

// Coefficient of y^n in a polynomial in (t, y) (x already set to 0).
inline MultiPoly y_coefficient(const MultiPoly& poly, std::int64_t n) {
  std::vector<std::pair<Exponents, BigInt>> raw;
  for (const auto& term : poly.terms()) {
    const Exponents e = MultiPoly::unpack(term.key);
    if (e.z1 == n) raw.push_back({Exponents{e.t, 0, 0}, term.coeff});
  }
  return MultiPoly::from_terms(std::move(raw));
}

// Order of vanishing of Q at (x, y) = (0, -q0/q1) over Z(t), capped at
// limit + 1; also reports whether the lowest homogeneous part is free of a
// factor x. With y = (q1 Y - q0) / q1 and Q scaled by q1^N, only the
// monomials x^u Y^v with u + v <= limit are expanded.
inline std::pair<std::int64_t, bool> taylor_order(const MultiPoly& q,
                                                  const MultiPoly& q0,
                                                  const MultiPoly& q1,
                                                  std::int64_t limit) {
  const std::int64_t n = q.degree(Var::z1);
  const MultiPoly minus_q0 = -q0;
  std::vector<MultiPoly> q0_pow{MultiPoly(1)}, q1_pow{MultiPoly(1)};
  for (std::int64_t s = 1; s <= n; ++s) {
    q0_pow.push_back(q0_pow.back() * minus_q0);
    q1_pow.push_back(q1_pow.back() * q1);
  }
  std::map<std::pair<std::int64_t, std::int64_t>,
           std::vector<std::pair<Exponents, BigInt>>>
      by_xy;
  for (const auto& term : q.terms()) {
    const Exponents e = MultiPoly::unpack(term.key);
    if (e.z0 <= limit)
      by_xy[{e.z0, e.z1}].push_back({Exponents{e.t, 0, 0}, term.coeff});
  }
  std::map<std::pair<std::int64_t, std::int64_t>, MultiPoly> total;
  for (auto& [xy, terms] : by_xy) {
    const auto [u, deg] = xy;
    const MultiPoly c = MultiPoly::from_terms(std::move(terms));
    BigInt binom = 1;  // C(deg, v)
    for (std::int64_t v = 0; v <= std::min(deg, limit - u); ++v) {
      const auto idx = [](std::int64_t s) { return static_cast<std::size_t>(s); };
      total[{u, v}] = total[{u, v}] + MultiPoly::constant(binom) * c *
                                          q0_pow[idx(deg - v)] *
                                          q1_pow[idx(n - deg + v)];
      binom = binom * (deg - v) / (v + 1);
    }
  }
  std::int64_t order = limit + 1;
  for (const auto& [xy, coeff] : total)
    if (!coeff.is_zero()) order = std::min(order, xy.first + xy.second);
  bool x_free = false;
  for (const auto& [xy, coeff] : total)
    if (!coeff.is_zero() && xy.first == 0 && xy.second == order) x_free = true;
  return {order, x_free};
}

}  // namespace detail

/// Checks the structure of Q_i^{(j)} for all i in chart j: exact exponents,
/// Q_i|_{x=0} a nonzero element of Z[t] for i <= j and proportional to
/// (c_2 y^{a_j-k_j} + c_3 t)^{Z_{i-j-1}(a_{j+1}..a_{i-1})} for i > j, and,
/// when a_j - k_j = 1, the vanishing order at the indeterminacy point.
inline ChartCheck check_chart(std::span<const std::int64_t> a,
                              const ZeroSequence& k, std::size_t j,
                              const std::vector<MultiPoly>& chain) {
  ChartCheck out;
  std::vector<LaurentPoly> pulled;
  try {
    pulled = pullback_chain(a, k, j, chain);
  } catch (const VerificationError& err) {
    out.failure = err.what();
    return out;
  }
  out.exponents_ok = true;
  const std::size_t r = a.size();
  const std::int64_t d = a[j - 1] - k[j - 1];
  const auto fail = [&](const std::string& why) {
    out.failure = "chart " + std::to_string(j) + ": " + why;
    return out;
  };
  for (const LaurentPoly& z : pulled)
    if (z.body.divisible_by(Var::z0) || z.body.divisible_by(Var::z1))
      return fail("Q divisible by x or y");

  // Q_{j+1}|_{x=0} = q1 y^d + q0.
  const MultiPoly base = pulled[j].body.at_zero(Var::z0);
  const MultiPoly q1 = detail::y_coefficient(base, d);
  const MultiPoly q0 = d > 0 ? detail::y_coefficient(base, 0) : MultiPoly();
  if (d > 0) {
    if (q1.is_zero() || q0.is_zero() ||
        q1 * MultiPoly::variable(Var::z1, d) + q0 != base)
      return fail("Q_{j+1} at x = 0 is not a binomial in y^d");
    if (!q0.divisible_by(Var::t))
      return fail("constant term of Q_{j+1} at x = 0 is not a multiple of t");
  }
  for (std::size_t i = 1; i <= r + 1; ++i) {
    const MultiPoly restricted = pulled[i - 1].body.at_zero(Var::z0);
    if (restricted.is_zero()) return fail("Q vanishes on x = 0");
    if (i <= j || d == 0) {
      if (restricted.degree(Var::z1) != 0)
        return fail("Q_" + std::to_string(i) + " at x = 0 depends on y");
      continue;
    }
    const std::int64_t h = detail::small(
        z_slice(a, static_cast<std::ptrdiff_t>(j) + 1,
                static_cast<std::ptrdiff_t>(i) - 1),
        "exponent");
    const MultiPoly top = detail::y_coefficient(restricted, d * h);
    if (top.is_zero()) return fail("Q_" + std::to_string(i) + " has wrong degree");
    if (restricted * q1.pow(h) != top * base.pow(h))
      return fail("Q_" + std::to_string(i) +
                  " at x = 0 is not a power of the binomial");
  }
  out.restriction_ok = true;

  if (d == 1) {
    out.taylor_checked = true;
    for (std::size_t i = j + 1; i <= r + 1; ++i) {
      const std::int64_t h = detail::small(
          z_slice(a, static_cast<std::ptrdiff_t>(j) + 1,
                  static_cast<std::ptrdiff_t>(i) - 1),
          "exponent");
      const auto [order, x_free] =
          detail::taylor_order(pulled[i - 1].body, q0, q1, h);
      if (order != h || !x_free) {
        out.taylor_ok = false;
        return fail("Q_" + std::to_string(i) + " vanishes to order " +
                    (order > h ? "> " + std::to_string(h)
                               : std::to_string(order)) +
                    ", expected " + std::to_string(h));
      }
    }
  }
  return out;
}

/// Number of indeterminacy points on the orbit O_j: the y-degree of the
/// binomial Q_{j+1}^{(j)}|_{x=0}, which must equal a_j - k_j.
inline std::int64_t indeterminacy_count(std::span<const std::int64_t> a,
                                        const ZeroSequence& k, std::size_t j,
                                        const std::vector<MultiPoly>& chain) {
  const auto pulled = pullback_chain(a, k, j, chain);
  const std::int64_t count = pulled[j].body.at_zero(Var::z0).degree(Var::z1);
  if (count != a[j - 1] - k[j - 1])
    throw VerificationError("indeterminacy count differs from a_j - k_j");
  return count;
}

inline std::int64_t indeterminacy_count(
    std::span<const std::int64_t> a, const ZeroSequence& k, std::size_t j,
    std::int64_t degree_cap = kDefaultDegreeCap) {
  return indeterminacy_count(a, k, j, deformation_chain(a, k, degree_cap));
}

}  // namespace cqs
