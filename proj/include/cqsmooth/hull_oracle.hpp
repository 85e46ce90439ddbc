#pragma once

// Brute-force reference for the cone boundary polylines: enumerate the
// lattice points of the cone inside the box |x|, |y| <= p, take their convex
// hull and read off the compact edges facing the origin. Only meant for
// cross-checking sigma_polyline / supplementary_polyline.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cqsmooth/conegeom.hpp"

namespace cqs {

enum class ConeSide { sigma, supplementary };

inline constexpr std::int64_t kDefaultOracleLimit = 10000;

namespace detail {

struct P64 {
  std::int64_t x, y;
  friend bool operator==(const P64&, const P64&) = default;
  friend auto operator<=>(const P64&, const P64&) = default;
};

inline std::int64_t cross(const P64& o, const P64& a, const P64& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline std::int64_t fdiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t cdiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

// Strict convex hull (no collinear points), counter-clockwise.
inline std::vector<P64> convex_hull(std::vector<P64> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P64> hull(2 * pts.size());
  std::size_t k = 0;
  for (const P64& pt : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0) --k;
    hull[k++] = pt;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

inline ConePolyline hull_polyline_oracle(
    const BigInt& p_big, const BigInt& q_big, ConeSide which,
    std::int64_t oracle_limit = kDefaultOracleLimit) {
  require_coprime_pair(p_big, q_big);
  if (p_big > oracle_limit)
    throw InvalidInput("p exceeds the hull oracle limit of " +
                       std::to_string(oracle_limit));
  using detail::P64;
  const std::int64_t p = static_cast<std::int64_t>(p_big);
  const std::int64_t q = static_cast<std::int64_t>(q_big);

  // Ordered generators (g1, g2) with det(g1, g2) > 0; a point P lies in the
  // cone iff det(g1, P) >= 0 and det(P, g2) >= 0.
  const P64 e1{1, 0}, e2{-q, p}, minus_e1{-1, 0};
  const P64 g1 = which == ConeSide::sigma ? e1 : e2;
  const P64 g2 = which == ConeSide::sigma ? e2 : minus_e1;
  const P64 start = which == ConeSide::sigma ? e1 : minus_e1;

  // Per row only the two extreme points can be hull vertices.
  const std::int64_t box = p;
  std::vector<P64> pts;
  for (std::int64_t y = 0; y <= box; ++y) {
    std::int64_t lo = -box, hi = box;
    // det(g1, P) = g1.x*y - g1.y*x >= 0
    if (g1.y > 0) hi = std::min(hi, detail::fdiv(g1.x * y, g1.y));
    else if (g1.y < 0) lo = std::max(lo, detail::cdiv(g1.x * y, g1.y));
    else if (g1.x * y < 0) continue;
    // det(P, g2) = x*g2.y - y*g2.x >= 0
    if (g2.y > 0) lo = std::max(lo, detail::cdiv(y * g2.x, g2.y));
    else if (g2.y < 0) hi = std::min(hi, detail::fdiv(y * g2.x, g2.y));
    else if (y * g2.x > 0) continue;
    if (y == 0) {
      // drop the origin
      if (lo == 0 && hi == 0) continue;
      if (lo == 0) lo = 1;
      if (hi == 0) hi = -1;
    }
    if (lo > hi) continue;
    pts.push_back({lo, y});
    pts.push_back({hi, y});
  }

  const auto hull = detail::convex_hull(std::move(pts));
  const std::size_t h = hull.size();
  const auto find = [&](const P64& v) {
    for (std::size_t i = 0; i < h; ++i)
      if (hull[i] == v) return i;
    throw VerificationError("cone generator is not a hull vertex");
  };
  const std::size_t ia = find(start), ib = find(e2);

  // Of the two arcs between the generators, the compact one has the origin
  // strictly outside each of its edges.
  const P64 origin{0, 0};
  const auto arc = [&](std::size_t from, std::size_t to) {
    std::vector<P64> path{hull[from]};
    for (std::size_t i = from; i != to;) {
      i = (i + 1) % h;
      path.push_back(hull[i]);
    }
    return path;
  };
  const auto faces_origin = [&](const std::vector<P64>& path) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (detail::cross(path[i], path[i + 1], origin) >= 0) return false;
    return true;
  };
  // Arcs are tested in counter-clockwise order (hull interior on the left).
  std::vector<P64> path = arc(ia, ib);
  if (!faces_origin(path)) {
    path = arc(ib, ia);
    if (!faces_origin(path))
      throw VerificationError("no compact boundary arc found");
    std::reverse(path.begin(), path.end());
  }

  ConePolyline out;
  out.points.push_back({path.front().x, path.front().y});
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const std::int64_t dx = path[i + 1].x - path[i].x;
    const std::int64_t dy = path[i + 1].y - path[i].y;
    const std::int64_t g = std::gcd(dx, dy);
    for (std::int64_t s = 1; s <= g; ++s)
      out.points.push_back({path[i].x + s * dx / g, path[i].y + s * dy / g});
  }
  for (std::size_t i = 1; i + 1 < out.points.size(); ++i) {
    const LatticeVector sum = out.points[i - 1] + out.points[i + 1];
    const LatticeVector& mid = out.points[i];
    const BigInt& num = mid.x != 0 ? sum.x : sum.y;
    const BigInt& den = mid.x != 0 ? mid.x : mid.y;
    out.b.push_back(static_cast<std::int64_t>(num / den));
  }
  if (!satisfies_basic_relations(out))
    throw VerificationError("hull boundary points are not collinear-chained");
  return out;
}

}  // namespace cqs
