#pragma once

// Hirzebruch-Jung (minus-sign) continued fractions.
//
//   [x_1, ..., x_n] = x_1 - 1 / (x_2 - 1 / (... - 1 / x_n))
//
// The continuant Z_n(x_1, ..., x_n) is the determinant of the tridiagonal
// matrix with diagonal x and off-diagonal entries -1. It obeys
//   Z_{-1} = 0,  Z_0 = 1,  Z_i = x_i Z_{i-1} - Z_{i-2}.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cqsmooth/bigint.hpp"

namespace cqs {

using HJSequence = std::vector<std::int64_t>;

struct Fraction {
  BigInt numerator;
  BigInt denominator;  // >= 0; zero only for the value "infinity"

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Fraction& f) {
  return os << f.numerator << '/' << f.denominator;
}

/// Run-length description of an a-chain:
///   a = [(2)^{m_1-1}, n_1, (2)^{m_2-1}, ..., n_t, (2)^{m_{t+1}-1}].
struct EdgeData {
  std::vector<std::int64_t> m;  // t + 1 entries, each >= 1
  std::vector<std::int64_t> n;  // t entries, each >= 3

  std::size_t t_count() const { return n.size(); }
  friend bool operator==(const EdgeData&, const EdgeData&) = default;
};

inline BigInt z_value(std::span<const std::int64_t> x) {
  BigInt prev = 0, cur = 1;
  for (std::int64_t v : x) {
    BigInt next = cur * v - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Continuant of the 1-based slice x_first..x_last. A slice of length 0 gives
/// Z_0 = 1 and a slice of length -1 (last == first - 2) gives Z_{-1} = 0.
inline BigInt z_slice(std::span<const std::int64_t> x, std::ptrdiff_t first,
                      std::ptrdiff_t last) {
  const std::ptrdiff_t len = last - first + 1;
  if (len == -1) return 0;
  if (len < -1) throw InvalidInput("continuant of a slice with length < -1");
  if (len == 0) return 1;
  if (first < 1 || last > static_cast<std::ptrdiff_t>(x.size()))
    throw InvalidInput("continuant slice out of range");
  return z_value(x.subspan(static_cast<std::size_t>(first - 1),
                           static_cast<std::size_t>(len)));
}

/// All leading continuants Z_0, Z_1(x_1), ..., Z_n(x_1..x_n).
inline std::vector<BigInt> leading_continuants(
    std::span<const std::int64_t> x) {
  std::vector<BigInt> out;
  out.reserve(x.size() + 1);
  BigInt prev = 0, cur = 1;
  out.push_back(cur);
  for (std::int64_t v : x) {
    BigInt next = cur * v - prev;
    prev = std::move(cur);
    cur = std::move(next);
    out.push_back(cur);
  }
  return out;
}

inline Fraction make_fraction(BigInt num, BigInt den) {
  if (num == 0 && den == 0) throw InvalidInput("0/0 is not a fraction");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  BigInt g = gcd(num, den);
  return {num / g, den / g};
}

inline Fraction hj_eval(std::span<const std::int64_t> x) {
  if (x.empty()) throw InvalidInput("empty continued fraction has no value");
  BigInt num = z_value(x);
  BigInt den = z_value(x.subspan(1));
  if (num == 0 && den == 0)
    throw InvalidInput("continued fraction value is undefined");
  return make_fraction(std::move(num), std::move(den));
}

inline void require_coprime_pair(const BigInt& p, const BigInt& q) {
  if (!(q > 0 && p > q))
    throw InvalidInput("expected p > q > 0, got p=" + p.str() +
                       " q=" + q.str());
  if (gcd(p, q) != 1)
    throw InvalidInput("p=" + p.str() + " and q=" + q.str() +
                       " are not coprime");
}

/// The unique expansion p/q = [x_1, ..., x_n] with every x_i >= 2.
inline HJSequence hj_expand(BigInt p, BigInt q) {
  require_coprime_pair(p, q);
  HJSequence out;
  while (q != 0) {
    BigInt x = ceil_div(p, q);
    out.push_back(to_int64(x, "continued fraction entry"));
    BigInt rest = x * q - p;
    p = std::move(q);
    q = std::move(rest);
  }
  return out;
}

/// M(x) is positive semi-definite of rank >= n - 1. For these tridiagonal
/// matrices this is equivalent to Z_i(x_1..x_i) > 0 for i < n and Z_n >= 0.
inline bool is_admissible(std::span<const std::int64_t> x) {
  const auto z = leading_continuants(x);
  const std::size_t n = x.size();
  for (std::size_t i = 1; i < n; ++i)
    if (z[i] <= 0) return false;
  return z[n] >= 0;
}

inline void require_chain(std::span<const std::int64_t> a, const char* what) {
  if (a.empty()) throw InvalidInput(std::string(what) + " must be nonempty");
  for (std::int64_t v : a)
    if (v < 2)
      throw InvalidInput(std::string(what) + " entries must all be >= 2");
}

inline EdgeData edge_data(std::span<const std::int64_t> a) {
  require_chain(a, "edge_data input");
  EdgeData e;
  std::int64_t run = 0;
  for (std::int64_t v : a) {
    if (v == 2) {
      ++run;
    } else {
      e.m.push_back(run + 1);
      e.n.push_back(v);
      run = 0;
    }
  }
  e.m.push_back(run + 1);
  return e;
}

/// Inverse of edge_data.
inline HJSequence from_edge_data(const EdgeData& e) {
  HJSequence a;
  for (std::size_t i = 0; i < e.m.size(); ++i) {
    a.insert(a.end(), static_cast<std::size_t>(e.m[i] - 1), 2);
    if (i < e.n.size()) a.push_back(e.n[i]);
  }
  return a;
}

/// Riemenschneider point-diagram duality: [a] = p/(p-q) maps to [b] = p/q.
inline HJSequence riemenschneider_dual(std::span<const std::int64_t> a) {
  require_chain(a, "riemenschneider_dual input");
  const EdgeData e = edge_data(a);
  const std::size_t t = e.t_count();
  if (t == 0) return {e.m[0]};
  HJSequence b;
  b.push_back(e.m[0] + 1);
  for (std::size_t j = 0; j < t; ++j) {
    b.insert(b.end(), static_cast<std::size_t>(e.n[j] - 3), 2);
    b.push_back(j + 1 == t ? e.m[j + 1] + 1 : e.m[j + 1] + 2);
  }
  return b;
}

/// q' with 0 < q' < p and q q' = 1 (mod p).
inline BigInt q_conjugate(const BigInt& p, const BigInt& q) {
  require_coprime_pair(p, q);
  BigInt r0 = p, r1 = q, s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt quo = r0 / r1;
    BigInt r2 = r0 - quo * r1;
    BigInt s2 = s0 - quo * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  return mod_positive(s0, p);
}

inline HJSequence reversed(std::span<const std::int64_t> x) {
  return HJSequence(x.rbegin(), x.rend());
}

inline std::string to_string(std::span<const std::int64_t> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(x[i]);
  }
  return s + ")";
}

}  // namespace cqs
