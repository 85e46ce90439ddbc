#pragma once

// Rank-2 lattice geometry of an oriented cone of type p/q and of its
// supplementary cone.
//
// Coordinate model: v_0 = e_1 = (1, 0), v_1 = (0, 1), so that
// e_2 = -q v_0 + p v_1 = (-q, p). The supplementary cone is generated by
// -e_1 = (-1, 0) and e_2.

#include <cstdint>
#include <ostream>
#include <vector>

#include "cqsmooth/bigint.hpp"
#include "cqsmooth/contfrac.hpp"

namespace cqs {

struct LatticeVector {
  BigInt x;
  BigInt y;

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend LatticeVector operator+(const LatticeVector& a,
                                 const LatticeVector& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend LatticeVector operator-(const LatticeVector& a,
                                 const LatticeVector& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend LatticeVector operator*(const BigInt& s, const LatticeVector& v) {
    return {s * v.x, s * v.y};
  }
  friend LatticeVector operator-(const LatticeVector& v) {
    return {-v.x, -v.y};
  }
};

inline std::ostream& operator<<(std::ostream& os, const LatticeVector& v) {
  return os << '(' << v.x << ',' << v.y << ')';
}

inline BigInt det(const LatticeVector& a, const LatticeVector& b) {
  return a.x * b.y - a.y * b.x;
}

inline bool is_primitive(const LatticeVector& v) {
  return gcd(v.x, v.y) == 1;
}

/// Lattice points v_0..v_{s+1} on the compact boundary of a cone together
/// with the associated sequence (v_{i-1} + v_{i+1} = b_i v_i).
struct ConePolyline {
  std::vector<LatticeVector> points;
  HJSequence b;

  friend bool operator==(const ConePolyline&, const ConePolyline&) = default;
};

/// True iff v_{i-1} + v_{i+1} = b_i v_i holds for every interior point.
inline bool satisfies_basic_relations(const ConePolyline& line) {
  if (line.points.size() != line.b.size() + 2) return false;
  for (std::size_t i = 1; i + 1 < line.points.size(); ++i) {
    if (line.points[i - 1] + line.points[i + 1] !=
        BigInt(line.b[i - 1]) * line.points[i])
      return false;
  }
  return true;
}

inline ConePolyline sigma_polyline(const BigInt& p, const BigInt& q) {
  ConePolyline out;
  out.b = hj_expand(p, q);
  out.points = {{1, 0}, {0, 1}};
  for (std::size_t i = 1; i <= out.b.size(); ++i) {
    out.points.push_back(BigInt(out.b[i - 1]) * out.points[i] -
                         out.points[i - 1]);
  }
  if (out.points.back() != LatticeVector{-q, p})
    throw VerificationError("sigma polyline does not end at e_2");
  return out;
}

namespace detail {

// w_l = v_{1 + sum_{j<l} (n_j - 2)} for l = 1..t+1.
inline std::vector<LatticeVector> precdual_steps(const ConePolyline& sigma,
                                                 const EdgeData& edges) {
  std::vector<LatticeVector> w;
  std::size_t index = 1;
  for (std::size_t l = 0; l <= edges.t_count(); ++l) {
    if (index >= sigma.points.size())
      throw VerificationError("edge data does not match sigma polyline");
    w.push_back(sigma.points[index]);
    if (l < edges.t_count())
      index += static_cast<std::size_t>(edges.n[l] - 2);
  }
  return w;
}

}  // namespace detail

/// Boundary of the supplementary cone, built by adding the steps w_l in
/// blocks of lengths m_1, ..., m_{t+1} starting from -e_1.
inline ConePolyline supplementary_polyline(const BigInt& p, const BigInt& q) {
  const ConePolyline sigma = sigma_polyline(p, q);
  ConePolyline out;
  out.b = hj_expand(p, p - q);
  const EdgeData edges = edge_data(out.b);
  const auto w = detail::precdual_steps(sigma, edges);
  out.points = {{-1, 0}};
  for (std::size_t l = 0; l < w.size(); ++l)
    for (std::int64_t step = 0; step < edges.m[l]; ++step)
      out.points.push_back(out.points.back() + w[l]);
  if (!satisfies_basic_relations(out))
    throw VerificationError("supplementary polyline violates a-relations");
  if (out.points.back() != LatticeVector{-q, p})
    throw VerificationError("supplementary polyline does not end at e_2");
  return out;
}

/// Checks the block difference pattern of the supplementary polyline against
/// the points of the original cone. The supplementary points are rebuilt
/// here from the a-recursion alone: v̄_1 is solved from
/// v̄_{r+1} = Z_r(a) v̄_1 - Z_{r-1}(a_2..a_r) v̄_0.
inline bool verify_precdual(const BigInt& p, const BigInt& q) {
  const ConePolyline sigma = sigma_polyline(p, q);
  const HJSequence a = hj_expand(p, p - q);
  const std::size_t r = a.size();
  const LatticeVector start{-1, 0};
  const LatticeVector end{-q, p};
  const BigInt zr = z_value(a);
  const BigInt ztail = z_slice(a, 2, static_cast<std::ptrdiff_t>(r));
  const LatticeVector numer = end + ztail * start;
  if (numer.x % zr != 0 || numer.y % zr != 0) return false;
  std::vector<LatticeVector> bar = {start, {numer.x / zr, numer.y / zr}};
  for (std::size_t i = 1; i <= r; ++i)
    bar.push_back(BigInt(a[i - 1]) * bar[i] - bar[i - 1]);
  if (bar.back() != end) return false;

  const EdgeData edges = edge_data(a);
  const auto w = detail::precdual_steps(sigma, edges);
  std::size_t i = 0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    for (std::int64_t step = 0; step < edges.m[l]; ++step, ++i) {
      if (i + 1 >= bar.size()) return false;
      if (bar[i + 1] - bar[i] != w[l]) return false;
    }
  }
  return i + 1 == bar.size();
}

/// Image of a lattice vector in H_1(L) = Z/p, obtained by killing
/// e_1 = v_0 and e_2 = -q v_0 + p v_1: the v_1-coordinate modulo p.
inline BigInt homology_class(const LatticeVector& v, const BigInt& p) {
  return mod_positive(v.y, p);
}

/// Chooses the global sign making the first nonzero class lie in
/// [1, floor(p/2)].
inline std::vector<BigInt> canonical_sign(std::vector<BigInt> classes,
                                          const BigInt& p) {
  for (const BigInt& c : classes) {
    if (c == 0) continue;
    if (c > p / 2)
      for (BigInt& d : classes) d = mod_positive(-d, p);
    break;
  }
  return classes;
}

/// Classes of v_1..v_s in Z/p, defined up to a simultaneous sign.
inline std::vector<BigInt> alpha_classes(const BigInt& p, const BigInt& q) {
  const ConePolyline sigma = sigma_polyline(p, q);
  std::vector<BigInt> out;
  for (std::size_t i = 1; i + 1 < sigma.points.size(); ++i)
    out.push_back(homology_class(sigma.points[i], p));
  return canonical_sign(std::move(out), p);
}

/// Classes of v̄_1..v̄_r (the supplementary cone) in Z/p.
inline std::vector<BigInt> alpha_bar_classes(const BigInt& p,
                                             const BigInt& q) {
  const ConePolyline bar = supplementary_polyline(p, q);
  std::vector<BigInt> out;
  for (std::size_t i = 1; i + 1 < bar.points.size(); ++i)
    out.push_back(homology_class(bar.points[i], p));
  return canonical_sign(std::move(out), p);
}

/// Two class vectors agree up to a simultaneous sign.
inline bool equal_up_to_sign(const std::vector<BigInt>& u,
                             const std::vector<BigInt>& v, const BigInt& p) {
  if (u.size() != v.size()) return false;
  bool same = true, opposite = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    same = same && mod_positive(u[i] - v[i], p) == 0;
    opposite = opposite && mod_positive(u[i] + v[i], p) == 0;
  }
  return same || opposite;
}

}  // namespace cqs
