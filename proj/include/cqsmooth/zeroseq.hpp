#pragma once

// Zero-representing admissible sequences K_r, their triangulations of the
// convex (r+1)-gon A_1..A_{r+1}, and the sign-incidence / incidence matrices
// of picture deformations.
//
// A triangulation theta gives k_i = #{triangles containing A_i} for
// i = 1..r; the vertex A_{r+1} is not recorded. This is a bijection onto K_r
// for r >= 2. K_1 = {(0)} is witnessed by the degenerate two-vertex
// "polygon" with no triangles.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "cqsmooth/contfrac.hpp"
#include "cqsmooth/matrix.hpp"

namespace cqs {

using Triangle = std::array<int, 3>;  // 1-based vertex labels, increasing

struct Triangulation {
  int polygon_size = 0;
  std::vector<Triangle> triangles;  // sorted lexicographically

  /// Diagonals (i, j), i < j, not polygon sides; sorted.
  std::vector<std::pair<int, int>> diagonals() const {
    std::vector<std::pair<int, int>> out;
    const auto is_side = [&](int i, int j) {
      return j == i + 1 || (i == 1 && j == polygon_size);
    };
    for (const Triangle& t : triangles) {
      const std::pair<int, int> edges[] = {
          {t[0], t[1]}, {t[1], t[2]}, {t[0], t[2]}};
      for (const auto& e : edges)
        if (!is_side(e.first, e.second)) out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

/// An element of K_r: admissible with [k_1, ..., k_r] = 0.
class ZeroSequence {
 public:
  ZeroSequence() = default;

  /// Validates membership in K_r.
  static ZeroSequence from(HJSequence k) {
    if (!is_zero_sequence(k))
      throw InvalidInput("sequence " + to_string(k) +
                         " is not an admissible sequence representing 0");
    ZeroSequence z;
    z.k_ = std::move(k);
    return z;
  }

  static bool is_zero_sequence(std::span<const std::int64_t> k) {
    if (k.empty()) return false;
    for (std::int64_t v : k)
      if (v < 0) return false;
    return is_admissible(k) && z_value(k) == 0;
  }

  const HJSequence& values() const { return k_; }
  std::size_t size() const { return k_.size(); }
  std::int64_t operator[](std::size_t i) const { return k_[i]; }

  ZeroSequence reversed() const {
    ZeroSequence z;
    z.k_ = cqs::reversed(k_);
    return z;
  }

  friend bool operator==(const ZeroSequence&, const ZeroSequence&) = default;
  friend auto operator<=>(const ZeroSequence&, const ZeroSequence&) = default;

 private:
  HJSequence k_;
};

namespace detail {

inline void triangulate_range(int lo, int hi, std::vector<Triangle>& acc,
                              std::vector<std::vector<Triangle>>& out) {
  // Emits every triangulation of the sub-polygon lo..hi appended to acc.
  if (hi - lo < 2) {
    out.push_back(acc);
    return;
  }
  for (int m = lo + 1; m < hi; ++m) {
    acc.push_back({lo, m, hi});
    std::vector<std::vector<Triangle>> left;
    std::vector<Triangle> empty;
    triangulate_range(lo, m, empty, left);
    for (const auto& l : left) {
      std::vector<Triangle> with_left = acc;
      with_left.insert(with_left.end(), l.begin(), l.end());
      triangulate_range(m, hi, with_left, out);
    }
    acc.pop_back();
  }
}

}  // namespace detail

/// All triangulations of the convex polygon with the given number of
/// vertices, ordered lexicographically by their sorted diagonal lists.
/// There are Catalan(polygon_size - 2) of them.
inline std::vector<Triangulation> enumerate_triangulations(int polygon_size) {
  if (polygon_size < 3) throw InvalidInput("polygon needs at least 3 vertices");
  std::vector<std::vector<Triangle>> raw;
  std::vector<Triangle> acc;
  detail::triangulate_range(1, polygon_size, acc, raw);
  std::vector<std::pair<std::vector<std::pair<int, int>>, Triangulation>> keyed;
  keyed.reserve(raw.size());
  for (auto& tris : raw) {
    std::sort(tris.begin(), tris.end());
    Triangulation t{polygon_size, std::move(tris)};
    auto key = t.diagonals();
    keyed.emplace_back(std::move(key), std::move(t));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Triangulation> out;
  out.reserve(keyed.size());
  for (auto& kv : keyed) out.push_back(std::move(kv.second));
  return out;
}

inline ZeroSequence triangulation_to_k(const Triangulation& theta) {
  if (theta.polygon_size == 2 && theta.triangles.empty())
    return ZeroSequence::from({0});
  if (theta.polygon_size < 3 ||
      static_cast<int>(theta.triangles.size()) != theta.polygon_size - 2)
    throw InvalidInput("not a triangulation");
  const int r = theta.polygon_size - 1;
  HJSequence k(static_cast<std::size_t>(r), 0);
  for (const Triangle& t : theta.triangles)
    for (int v : t)
      if (v <= r) ++k[static_cast<std::size_t>(v - 1)];
  return ZeroSequence::from(std::move(k));
}

/// Inverse of triangulation_to_k, by repeatedly cutting ears (vertices lying
/// in exactly one triangle). Throws if k does not come from a triangulation.
inline Triangulation triangulation_from_k(std::span<const std::int64_t> k) {
  const int r = static_cast<int>(k.size());
  if (r == 1) {
    if (k[0] != 0) throw InvalidInput("K_1 = {(0)}");
    return {2, {}};
  }
  if (r < 1) throw InvalidInput("empty sequence");
  // Full cyclic counts: the counts over all r+1 vertices sum to 3(r-1).
  std::int64_t total = 0;
  for (std::int64_t v : k) total += v;
  std::vector<std::int64_t> count(k.begin(), k.end());
  count.push_back(3 * (r - 1) - total);
  std::vector<int> alive(static_cast<std::size_t>(r + 1));
  std::iota(alive.begin(), alive.end(), 1);
  Triangulation theta{r + 1, {}};
  const auto fail = [&] {
    return InvalidInput("sequence " + to_string(k) +
                        " does not come from a triangulation");
  };
  while (alive.size() > 3) {
    const std::size_t n = alive.size();
    std::size_t ear = n;
    for (std::size_t i = 0; i < n; ++i)
      if (count[static_cast<std::size_t>(alive[i] - 1)] == 1) {
        ear = i;
        break;
      }
    if (ear == n) throw fail();
    const int prev = alive[(ear + n - 1) % n], next = alive[(ear + 1) % n];
    Triangle t{prev, alive[ear], next};
    std::sort(t.begin(), t.end());
    theta.triangles.push_back(t);
    --count[static_cast<std::size_t>(prev - 1)];
    --count[static_cast<std::size_t>(next - 1)];
    count[static_cast<std::size_t>(alive[ear] - 1)] = 0;
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(ear));
  }
  for (int v : alive)
    if (count[static_cast<std::size_t>(v - 1)] != 1) throw fail();
  theta.triangles.push_back({alive[0], alive[1], alive[2]});
  std::sort(theta.triangles.begin(), theta.triangles.end());
  return theta;
}

inline bool entrywise_leq(std::span<const std::int64_t> k,
                          std::span<const std::int64_t> a) {
  if (k.size() != a.size()) return false;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] > a[i]) return false;
  return true;
}

namespace detail {

// Interval dynamic programme over sub-polygons A_lo..A_hi. For each interval
// the list of vertex-count vectors of its triangulations, pruned by the
// bound: interior counts are final, endpoint counts only grow.
class BoundedTriangulationCounts {
 public:
  explicit BoundedTriangulationCounts(std::vector<std::int64_t> bound)
      : bound_(std::move(bound)),
        n_(static_cast<int>(bound_.size())),
        memo_(static_cast<std::size_t>(n_ + 1) *
              static_cast<std::size_t>(n_ + 1)),
        done_(memo_.size(), false) {}

  const std::vector<std::vector<std::int64_t>>& get(int lo, int hi) {
    const std::size_t key = static_cast<std::size_t>(lo) *
                                static_cast<std::size_t>(n_ + 1) +
                            static_cast<std::size_t>(hi);
    if (done_[key]) return memo_[key];
    std::vector<std::vector<std::int64_t>> out;
    if (hi - lo == 1) {
      out.push_back({0, 0});
    } else {
      for (int m = lo + 1; m < hi; ++m) {
        const auto& left = get(lo, m);
        const auto& right = get(m, hi);
        for (const auto& l : left) {
          if (l.front() + 1 > bound(lo)) continue;
          if (l.back() + 1 > bound(m)) continue;
          for (const auto& r : right) {
            if (l.back() + r.front() + 1 > bound(m)) continue;
            if (r.back() + 1 > bound(hi)) continue;
            std::vector<std::int64_t> c(l);
            c.back() += r.front();
            c.insert(c.end(), r.begin() + 1, r.end());
            ++c.front();
            ++c[static_cast<std::size_t>(m - lo)];
            ++c.back();
            out.push_back(std::move(c));
          }
        }
      }
    }
    memo_[key] = std::move(out);
    done_[key] = true;
    return memo_[key];
  }

 private:
  std::int64_t bound(int v) const {
    return bound_[static_cast<std::size_t>(v - 1)];
  }

  std::vector<std::int64_t> bound_;
  int n_;
  std::vector<std::vector<std::vector<std::int64_t>>> memo_;
  std::vector<bool> done_;
};

inline std::vector<ZeroSequence> bounded_zero_sequences(
    std::span<const std::int64_t> bound) {
  const int r = static_cast<int>(bound.size());
  if (r < 1) throw InvalidInput("empty bound");
  if (r == 1) {
    if (bound[0] < 0) return {};
    return {ZeroSequence::from({0})};
  }
  std::vector<std::int64_t> full(bound.begin(), bound.end());
  full.push_back(INT64_MAX / 4);  // A_{r+1} is not recorded
  BoundedTriangulationCounts dp(std::move(full));
  std::vector<ZeroSequence> out;
  for (const auto& c : dp.get(1, r + 1))
    out.push_back(ZeroSequence::from(HJSequence(c.begin(), c.end() - 1)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// K_r(a) = {k in K_r : k <= a}, sorted lexicographically.
inline std::vector<ZeroSequence> enumerate_K(std::span<const std::int64_t> a) {
  require_chain(a, "a-chain");
  return detail::bounded_zero_sequences(a);
}

/// All of K_r, sorted lexicographically.
inline std::vector<ZeroSequence> enumerate_zero_sequences(int r) {
  if (r < 1) throw InvalidInput("r must be >= 1");
  // Vertex counts never exceed r - 1 for r >= 2.
  std::vector<std::int64_t> bound(static_cast<std::size_t>(r),
                                  std::max(r - 1, 0));
  return detail::bounded_zero_sequences(bound);
}

/// K_r(a) by filtering every triangulation of P_{r+1}. Exponential; kept as
/// an independent reference for enumerate_K.
inline std::vector<ZeroSequence> enumerate_K_by_triangulations(
    std::span<const std::int64_t> a) {
  require_chain(a, "a-chain");
  const int r = static_cast<int>(a.size());
  if (r == 1) return {ZeroSequence::from({0})};
  std::vector<ZeroSequence> out;
  for (const auto& theta : enumerate_triangulations(r + 1)) {
    ZeroSequence k = triangulation_to_k(theta);
    if (entrywise_leq(k.values(), a)) out.push_back(std::move(k));
  }
  return out;
}

/// D(k): rows A_1..A_r, one column per triangle (in the stored triangle
/// order); +1 at the first and third vertex of a triangle, -1 at the second.
inline IntegerMatrix sign_incidence(const Triangulation& theta) {
  const int r = theta.polygon_size - 1;
  IntegerMatrix d(static_cast<std::size_t>(r), theta.triangles.size());
  for (std::size_t j = 0; j < theta.triangles.size(); ++j) {
    const Triangle& t = theta.triangles[j];
    const int sign[3] = {+1, -1, +1};
    for (int s = 0; s < 3; ++s)
      if (t[static_cast<std::size_t>(s)] <= r)
        d(static_cast<std::size_t>(t[static_cast<std::size_t>(s)] - 1), j) =
            sign[s];
  }
  return d;
}

/// D(a; k) = (D(k) | M_{r,a_1-k_1}(1) | ... | M_{r,a_r-k_r}(r)), where
/// M_{r,l}(i) has l columns with ones on row i only.
inline IntegerMatrix block_matrix(std::span<const std::int64_t> a,
                                  const ZeroSequence& k,
                                  const Triangulation& theta) {
  if (triangulation_to_k(theta) != k)
    throw InvalidInput("triangulation does not match k");
  if (!entrywise_leq(k.values(), a))
    throw InvalidInput("k " + to_string(k.values()) + " is not <= a " +
                       to_string(a));
  const std::size_t r = a.size();
  std::int64_t extra = 0;
  for (std::size_t i = 0; i < r; ++i) extra += a[i] - k[i];
  IntegerMatrix blocks(r, static_cast<std::size_t>(extra));
  std::size_t col = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::int64_t c = 0; c < a[i] - k[i]; ++c) blocks(i, col++) = 1;
  return sign_incidence(theta).hconcat(blocks);
}

inline IntegerMatrix block_matrix(std::span<const std::int64_t> a,
                                  const ZeroSequence& k) {
  return block_matrix(a, k, triangulation_from_k(k.values()));
}

/// Row i of the result is the sum of rows 1..i of m.
inline IntegerMatrix cumsum_rows(const IntegerMatrix& m) {
  IntegerMatrix out = m;
  for (std::size_t i = 1; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) += out(i - 1, j);
  return out;
}

/// l_i = 2 + sum_{j <= i} (a_j - 2).
inline std::vector<std::int64_t> weights_l(std::span<const std::int64_t> a) {
  require_chain(a, "a-chain");
  std::vector<std::int64_t> l;
  std::int64_t acc = 2;
  for (std::int64_t v : a) {
    acc += v - 2;
    l.push_back(acc);
  }
  return l;
}

/// The same weights read off the edge data: l_i = 2 + sum_{j<h} (n_j - 2)
/// for m_1 + ... + m_{h-1} <= i < m_1 + ... + m_h.
inline std::vector<std::int64_t> weights_l_from_edges(const EdgeData& e) {
  std::vector<std::int64_t> l;
  std::int64_t lower = 0, value = 2;
  for (std::size_t h = 0; h < e.m.size(); ++h) {
    const std::int64_t upper = lower + e.m[h];
    for (std::int64_t i = std::max<std::int64_t>(lower, 1); i < upper; ++i)
      l.push_back(value);
    if (h < e.n.size()) value += e.n[h] - 2;
    lower = upper;
  }
  return l;
}

/// Number of points of the picture deformation: r - 1 + sum (a_i - k_i).
inline std::int64_t picture_point_count(std::span<const std::int64_t> a,
                                        const ZeroSequence& k) {
  std::int64_t n = static_cast<std::int64_t>(a.size()) - 1;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] - k[i];
  return n;
}

}  // namespace cqs
