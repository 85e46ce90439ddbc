#pragma once

// Sparse polynomials over the integers in three variables (t, z0, z1).
//
// Monomials are packed into a 64-bit key [total | t | z0 | z1], 16 bits per
// field, so that integer order on keys is the graded-lexicographic order and
// multiplying monomials is adding keys. Every exponent, and the total degree,
// must stay below 2^16.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqsmooth/bigint.hpp"

namespace cqs {

enum class Var : int { t = 0, z0 = 1, z1 = 2 };

struct Exponents {
  std::int64_t t = 0, z0 = 0, z1 = 0;

  std::int64_t operator[](Var v) const {
    return v == Var::t ? t : (v == Var::z0 ? z0 : z1);
  }
  std::int64_t total() const { return t + z0 + z1; }
  friend bool operator==(const Exponents&, const Exponents&) = default;
};

class MultiPoly {
 public:
  static constexpr std::int64_t kMaxExponent = 0xFFFF;

  struct Term {
    std::uint64_t key;
    BigInt coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  MultiPoly() = default;
  MultiPoly(long long c) { *this = constant(BigInt(c)); }  // NOLINT

  static MultiPoly constant(const BigInt& c) {
    MultiPoly p;
    if (c != 0) p.terms_.push_back({0, c});
    return p;
  }

  static MultiPoly monomial(const BigInt& c, Exponents e) {
    MultiPoly p;
    if (c != 0) p.terms_.push_back({pack(e), c});
    return p;
  }

  static MultiPoly variable(Var v, std::int64_t power = 1) {
    Exponents e;
    if (v == Var::t) e.t = power;
    else if (v == Var::z0) e.z0 = power;
    else e.z1 = power;
    return monomial(1, e);
  }

  /// Sum of the given terms; repeated monomials are combined.
  static MultiPoly from_terms(
      std::vector<std::pair<Exponents, BigInt>> terms) {
    std::vector<Term> raw;
    raw.reserve(terms.size());
    for (auto& [e, c] : terms) raw.push_back({pack(e), std::move(c)});
    std::sort(raw.begin(), raw.end(),
              [](const Term& x, const Term& y) { return x.key < y.key; });
    MultiPoly out;
    for (Term& term : raw) {
      if (!out.terms_.empty() && out.terms_.back().key == term.key) {
        out.terms_.back().coeff += term.coeff;
        if (out.terms_.back().coeff == 0) out.terms_.pop_back();
      } else if (term.coeff != 0) {
        out.terms_.push_back(std::move(term));
      }
    }
    return out;
  }

  static std::uint64_t pack(const Exponents& e) {
    if (e.t < 0 || e.z0 < 0 || e.z1 < 0)
      throw InvalidInput("negative exponent in polynomial");
    if (e.total() > kMaxExponent)
      throw InvalidInput("polynomial degree exceeds 65535");
    return (static_cast<std::uint64_t>(e.total()) << 48) |
           (static_cast<std::uint64_t>(e.t) << 32) |
           (static_cast<std::uint64_t>(e.z0) << 16) |
           static_cast<std::uint64_t>(e.z1);
  }

  static Exponents unpack(std::uint64_t key) {
    return {static_cast<std::int64_t>((key >> 32) & 0xFFFF),
            static_cast<std::int64_t>((key >> 16) & 0xFFFF),
            static_cast<std::int64_t>(key & 0xFFFF)};
  }

  /// Terms in increasing graded-lex order.
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::int64_t total_degree() const {
    return terms_.empty() ? -1 : unpack(terms_.back().key).total();
  }

  std::int64_t degree(Var v) const {
    std::int64_t d = -1;
    for (const Term& term : terms_) d = std::max(d, unpack(term.key)[v]);
    return d;
  }

  std::int64_t min_degree(Var v) const {
    std::int64_t d = -1;
    for (const Term& term : terms_) {
      const std::int64_t e = unpack(term.key)[v];
      d = d < 0 ? e : std::min(d, e);
    }
    return d;
  }

  /// Coefficient of the monomial with the given exponents.
  BigInt coefficient(const Exponents& e) const {
    const std::uint64_t key = pack(e);
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), key,
        [](const Term& term, std::uint64_t k) { return term.key < k; });
    return (it != terms_.end() && it->key == key) ? it->coeff : BigInt(0);
  }

  /// Setting v = 0.
  MultiPoly at_zero(Var v) const {
    MultiPoly out;
    for (const Term& term : terms_)
      if (unpack(term.key)[v] == 0) out.terms_.push_back(term);
    return out;
  }

  /// The variable v divides every term (false for the zero polynomial).
  bool divisible_by(Var v) const {
    if (terms_.empty()) return false;
    return min_degree(v) > 0;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    return merge(a, b, false);
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    return merge(a, b, true);
  }
  MultiPoly operator-() const {
    MultiPoly out = *this;
    for (Term& term : out.terms_) term.coeff = -term.coeff;
    return out;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const MultiPoly& small = a.size() <= b.size() ? a : b;
    const MultiPoly& large = a.size() <= b.size() ? b : a;
    if (small.size() == 1) {
      MultiPoly out;
      out.terms_.reserve(large.size());
      const Term& m = small.terms_.front();
      for (const Term& term : large.terms_)
        out.terms_.push_back({add_keys(m.key, term.key), m.coeff * term.coeff});
      return out;
    }
    const Box box = Box::sum(Box::of(a), Box::of(b));
    // |coefficient| of the product <= max|a| max|b| min(#a, #b), so the
    // accumulator width can be chosen up front.
    const int ba = max_bits(a), bb = max_bits(b);
    const int bound = ba + bb + std::bit_width(small.size()) + 1;
    const bool square = &a == &b;
    if (bound <= 126 && box.cells() <= kDenseBytes / sizeof(Small))
      return dense_mul_slabs(a, b, box, square, SmallPolicy{});
    const int half = (std::max(ba, bb) + 1) / 2;
    if (2 * half + 4 + std::bit_width(small.size()) <= 126 &&
        box.cells() <= kDenseBytes / sizeof(SplitPolicy::Cell))
      return dense_mul_slabs(a, b, box, square, SplitPolicy{half});
    if (bound <= 254 && ba <= 125 && bb <= 125 &&
        box.cells() <= kDenseBytes / sizeof(Acc256))
      return dense_mul_slabs(a, b, box, square, WidePolicy{});
    if (box.cells() <= kDenseCells) return *dense_mul<BigInt>(a, b, box);
    return sparse_mul(small, large);
  }

  MultiPoly pow(std::int64_t n) const {
    if (n < 0) throw InvalidInput("negative polynomial power");
    MultiPoly result = constant(1), base = *this;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  /// Exact quotient a / b by reduction against the leading term of b
  /// (lexicographic t > z0 > z1 in the dense kernels, graded-lex in the
  /// sparse one). Throws VerificationError if b does not divide a.
  friend MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw InvalidInput("division by the zero polynomial");
    if (a.is_zero()) return {};
    if (b.size() == 1) {
      const Term& m = b.terms_.front();
      MultiPoly out;
      out.terms_.reserve(a.size());
      for (const Term& term : a.terms_) {
        if (!key_divides(m.key, term.key) || term.coeff % m.coeff != 0)
          throw VerificationError("inexact polynomial division");
        out.terms_.push_back({term.key - m.key, term.coeff / m.coeff});
      }
      return out;
    }
    const Box box = Box::of(a);
    if (box.cells() <= kDenseBytes / sizeof(Small) && fits_small(a) &&
        fits_small(b)) {
      if (auto out = dense_div<Small>(a, b, box)) return *out;
    }
    if (box.cells() <= kDenseBytes / sizeof(Acc256)) {
      if (auto out = dense_div_acc(a, b, box)) return *out;
    }
    if (box.cells() <= kDenseCells) {
      if (fits_wide(a) && fits_wide(b)) {
        if (auto out = dense_div<Wide>(a, b, box)) return *out;
      }
      return *dense_div<BigInt>(a, b, box);
    }
    return sparse_div(a, b);
  }

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const Exponents e = unpack(it->key);
      BigInt c = it->coeff;
      if (first) {
        if (c < 0) {
          os << '-';
          c = -c;
        }
      } else {
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
      }
      first = false;
      const bool unit = e.total() > 0 && c == 1;
      if (!unit) os << c;
      bool need_star = !unit;
      const auto factor = [&](const char* name, std::int64_t power) {
        if (power == 0) return;
        if (need_star) os << '*';
        os << name;
        if (power > 1) os << '^' << power;
        need_star = true;
      };
      factor("t", e.t);
      factor("z0", e.z0);
      factor("z1", e.z1);
    }
    return os.str();
  }

 private:
  // Dense kernels work on the bounding box of the exponents; machine-integer
  // accumulation is tried first and abandoned on overflow.
  using Small = __int128;
  using Wide = boost::multiprecision::checked_int512_t;
  static constexpr std::size_t kDenseCells = std::size_t{1} << 21;
  static constexpr std::size_t kDenseBytes = std::size_t{1} << 28;

  struct Box {
    std::array<std::int64_t, 3> lo{}, hi{};  // t, z0, z1

    static Box of(const MultiPoly& p) {
      Box box;
      box.lo = {kMaxExponent, kMaxExponent, kMaxExponent};
      box.hi = {0, 0, 0};
      for (const Term& term : p.terms_) {
        const Exponents e = unpack(term.key);
        const std::array<std::int64_t, 3> v{e.t, e.z0, e.z1};
        for (int i = 0; i < 3; ++i) {
          box.lo[i] = std::min(box.lo[i], v[i]);
          box.hi[i] = std::max(box.hi[i], v[i]);
        }
      }
      return box;
    }
    static Box sum(const Box& x, const Box& y) {
      Box box;
      for (int i = 0; i < 3; ++i) {
        box.lo[i] = x.lo[i] + y.lo[i];
        box.hi[i] = x.hi[i] + y.hi[i];
      }
      return box;
    }
    std::int64_t extent(int i) const { return hi[i] - lo[i] + 1; }
    std::size_t cells() const {
      return static_cast<std::size_t>(extent(0)) *
             static_cast<std::size_t>(extent(1)) *
             static_cast<std::size_t>(extent(2));
    }
    Exponents exponents(std::size_t idx) const {
      const auto n2 = static_cast<std::size_t>(extent(2));
      const auto n1 = static_cast<std::size_t>(extent(1));
      const auto z1 = static_cast<std::int64_t>(idx % n2);
      idx /= n2;
      const auto z0 = static_cast<std::int64_t>(idx % n1);
      const auto t = static_cast<std::int64_t>(idx / n1);
      return {lo[0] + t, lo[1] + z0, lo[2] + z1};
    }
    bool contains(const Exponents& e) const {
      return e.t >= lo[0] && e.t <= hi[0] && e.z0 >= lo[1] && e.z0 <= hi[1] &&
             e.z1 >= lo[2] && e.z1 <= hi[2];
    }
    std::size_t index(const Exponents& e) const {
      return (static_cast<std::size_t>(e.t - lo[0]) *
                  static_cast<std::size_t>(extent(1)) +
              static_cast<std::size_t>(e.z0 - lo[1])) *
                 static_cast<std::size_t>(extent(2)) +
             static_cast<std::size_t>(e.z1 - lo[2]);
    }
    // Offset of a monomial relative to the origin of the box (may be used
    // as a signed displacement between cells).
    std::ptrdiff_t offset(const Exponents& e) const {
      return (static_cast<std::ptrdiff_t>(e.t) * extent(1) + e.z0) * extent(2) +
             e.z1;
    }
  };

  static bool fits_wide(const MultiPoly& p) {
    for (const Term& term : p.terms_)
      if (boost::multiprecision::msb(abs(term.coeff)) >= 250) return false;
    return true;
  }

  static bool fits_small(const MultiPoly& p) {
    for (const Term& term : p.terms_)
      if (boost::multiprecision::msb(abs(term.coeff)) >= 120) return false;
    return true;
  }

  template <typename T>
  static T from_big(const BigInt& v) {
    if constexpr (std::is_same_v<T, BigInt> || std::is_same_v<T, Wide>) {
      return static_cast<T>(v);
    } else {
      const BigInt mag = abs(v);
      const auto lo = static_cast<unsigned long long>(mag & ~0ULL);
      const auto hi = static_cast<unsigned long long>(mag >> 64);
      const T out = static_cast<T>((static_cast<unsigned __int128>(hi) << 64) | lo);
      return v < 0 ? -out : out;
    }
  }

  template <typename T>
  static BigInt to_big(const T& v) {
    if constexpr (std::is_same_v<T, BigInt> || std::is_same_v<T, Wide>) {
      return static_cast<BigInt>(v);
    } else {
      const bool negative = v < 0;
      unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(v)
                                       : static_cast<unsigned __int128>(v);
      BigInt out = static_cast<unsigned long long>(mag >> 64);
      out <<= 64;
      out += static_cast<unsigned long long>(mag);
      return negative ? BigInt(-out) : out;
    }
  }

  // acc += x * y (or -=); false on overflow.
  template <typename T>
  static bool fma(T& acc, const T& x, const T& y, bool subtract) {
    if constexpr (std::is_same_v<T, BigInt>) {
      if (subtract) acc -= x * y;
      else acc += x * y;
      return true;
    } else if constexpr (std::is_same_v<T, Wide>) {
      try {
        if (subtract) acc -= x * y;
        else acc += x * y;
      } catch (const std::overflow_error&) {
        return false;
      }
      return true;
    } else {
      T prod;
      const auto x64 = static_cast<std::int64_t>(x);
      const auto y64 = static_cast<std::int64_t>(y);
      if (x64 == x && y64 == y) {
        prod = static_cast<T>(x64) * y64;
      } else if (__builtin_mul_overflow(x, y, &prod)) {
        return false;
      }
      return subtract ? !__builtin_sub_overflow(acc, prod, &acc)
                      : !__builtin_add_overflow(acc, prod, &acc);
    }
  }

  template <typename T>
  static MultiPoly collect(const std::vector<T>& cells, const Box& box) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    for (std::size_t idx = 0; idx < cells.size(); ++idx)
      if (cells[idx] != 0) keyed.emplace_back(pack(box.exponents(idx)), idx);
    std::sort(keyed.begin(), keyed.end());
    MultiPoly out;
    out.terms_.reserve(keyed.size());
    for (const auto& [key, idx] : keyed)
      out.terms_.push_back({key, to_big(cells[idx])});
    return out;
  }

  static int max_bits(const MultiPoly& p) {
    int bits = 0;
    for (const Term& term : p.terms_)
      if (term.coeff != 0)
        bits = std::max(
            bits,
            static_cast<int>(boost::multiprecision::msb(abs(term.coeff))) + 1);
    return bits;
  }

  // Two's-complement 256-bit accumulator for products of 128-bit integers.
  struct Acc256 {
    std::array<std::uint64_t, 4> w{};

    void add(Small x, Small y) {
      const bool negative = (x < 0) != (y < 0);
      const auto ux = x < 0 ? -static_cast<unsigned __int128>(x)
                            : static_cast<unsigned __int128>(x);
      const auto uy = y < 0 ? -static_cast<unsigned __int128>(y)
                            : static_cast<unsigned __int128>(y);
      std::array<std::uint64_t, 4> m{};
      const auto x0 = static_cast<std::uint64_t>(ux), x1 = static_cast<std::uint64_t>(ux >> 64);
      const auto y0 = static_cast<std::uint64_t>(uy), y1 = static_cast<std::uint64_t>(uy >> 64);
      const unsigned __int128 p00 = static_cast<unsigned __int128>(x0) * y0;
      if ((x1 | y1) == 0) {
        m[0] = static_cast<std::uint64_t>(p00);
        m[1] = static_cast<std::uint64_t>(p00 >> 64);
      } else {
        const unsigned __int128 p01 = static_cast<unsigned __int128>(x0) * y1;
        const unsigned __int128 p10 = static_cast<unsigned __int128>(x1) * y0;
        const unsigned __int128 p11 = static_cast<unsigned __int128>(x1) * y1;
        m[0] = static_cast<std::uint64_t>(p00);
        const unsigned __int128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) +
                                      static_cast<std::uint64_t>(p10);
        m[1] = static_cast<std::uint64_t>(mid);
        const unsigned __int128 mid2 = (mid >> 64) + (p01 >> 64) + (p10 >> 64) +
                                       static_cast<std::uint64_t>(p11);
        m[2] = static_cast<std::uint64_t>(mid2);
        m[3] = static_cast<std::uint64_t>(mid2 >> 64) +
               static_cast<std::uint64_t>(p11 >> 64);
      }
      // w += negative ? -m : m, as w + (m ^ mask) + negative.
      const std::uint64_t mask = negative ? ~std::uint64_t{0} : 0;
      unsigned __int128 carry = negative ? 1 : 0;
      for (int i = 0; i < 4; ++i) {
        carry += static_cast<unsigned __int128>(w[i]) + (m[i] ^ mask);
        w[i] = static_cast<std::uint64_t>(carry);
        carry >>= 64;
      }
    }

    static Acc256 from_big(const BigInt& v) {
      Acc256 out;
      BigInt mag = abs(v);
      for (auto& limb : out.w) {
        limb = static_cast<std::uint64_t>(mag & ~std::uint64_t{0});
        mag >>= 64;
      }
      if (v < 0) {
        std::uint64_t carry = 1;
        for (auto& limb : out.w) {
          limb = ~limb;
          carry = __builtin_add_overflow(limb, carry, &limb) ? 1 : 0;
        }
      }
      return out;
    }

    bool nonzero() const { return (w[0] | w[1] | w[2] | w[3]) != 0; }

    BigInt to_big() const {
      const bool negative = (w[3] >> 63) != 0;
      std::array<std::uint64_t, 4> m = w;
      if (negative) {
        std::uint64_t carry = 1;
        for (auto& limb : m) {
          limb = ~limb;
          carry = __builtin_add_overflow(limb, carry, &limb) ? 1 : 0;
        }
      }
      BigInt out = 0;
      for (int i = 3; i >= 0; --i) {
        out <<= 64;
        out += static_cast<unsigned long long>(m[i]);
      }
      return negative ? BigInt(-out) : out;
    }
  };

  // Accumulator policies for dense_mul_slabs; each is overflow-free under
  // the bound checked by operator*.
  struct SmallPolicy {
    using Cell = Small;
    using Coeff = Small;
    Coeff load(const BigInt& v, int scale) const {
      return from_big<Small>(v) * scale;
    }
    static void add(Cell& cell, const Coeff& x, const Coeff& y) {
      cell += x * y;
    }
    static bool nonzero(const Cell& cell) { return cell != 0; }
    BigInt read(const Cell& cell) const { return to_big(cell); }
  };

  struct WidePolicy {
    using Cell = Acc256;
    using Coeff = Small;
    Coeff load(const BigInt& v, int scale) const {
      return from_big<Small>(v) * scale;
    }
    static void add(Cell& cell, const Coeff& x, const Coeff& y) {
      cell.add(x, y);
    }
    static bool nonzero(const Cell& cell) { return cell.nonzero(); }
    BigInt read(const Cell& cell) const { return cell.to_big(); }
  };

  // x = x1 2^h + x0 with 0 <= x0 < 2^h: the products x0 y0, x1 y1 and
  // (x0 + x1)(y0 + y1) are summed separately in 128 bits.
  struct SplitPolicy {
    struct Coeff {
      std::int64_t lo, hi, sum;
    };
    using Cell = std::array<Small, 3>;
    int h;
    Coeff load(const BigInt& v, int scale) const {
      const Small x = from_big<Small>(v) * scale;
      const Small hi = x >> h;  // floor
      const Small lo = x - (hi << h);
      return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi),
              static_cast<std::int64_t>(lo + hi)};
    }
    static void add(Cell& cell, const Coeff& x, const Coeff& y) {
      cell[0] += static_cast<Small>(x.lo) * y.lo;
      cell[1] += static_cast<Small>(x.sum) * y.sum;
      cell[2] += static_cast<Small>(x.hi) * y.hi;
    }
    static bool nonzero(const Cell& cell) {
      return (cell[0] | cell[1] | cell[2]) != 0;
    }
    BigInt read(const Cell& cell) const {
      const BigInt lo = to_big(cell[0]), hi = to_big(cell[2]);
      return (hi << (2 * h)) + ((to_big(cell[1]) - lo - hi) << h) + lo;
    }
  };

  // Terms of one factor in cell order, grouped by their t exponent.
  template <typename Policy>
  struct Slabs {
    std::vector<std::ptrdiff_t> offset;
    std::vector<typename Policy::Coeff> coeff, twice;
    std::int64_t t_lo = 0;
    std::vector<std::pair<std::size_t, std::size_t>> range;  // by t - t_lo

    Slabs(const MultiPoly& p, const Box& box, const Policy& policy,
          bool doubled) {
      std::vector<std::pair<std::ptrdiff_t, const Term*>> keyed;
      keyed.reserve(p.terms_.size());
      for (const Term& term : p.terms_)
        keyed.emplace_back(box.offset(unpack(term.key)), &term);
      std::sort(keyed.begin(), keyed.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      t_lo = unpack(keyed.front().second->key).t;
      const std::int64_t t_hi = unpack(keyed.back().second->key).t;
      range.assign(static_cast<std::size_t>(t_hi - t_lo + 1), {0, 0});
      for (std::size_t i = 0; i < keyed.size(); ++i) {
        offset.push_back(keyed[i].first);
        coeff.push_back(policy.load(keyed[i].second->coeff, 1));
        if (doubled) twice.push_back(policy.load(keyed[i].second->coeff, 2));
        auto& slot = range[static_cast<std::size_t>(
            unpack(keyed[i].second->key).t - t_lo)];
        if (slot.first == slot.second) slot.first = i;
        slot.second = i + 1;
      }
    }
  };

  // Dense product over the bounding box, produced one output t-slab at a
  // time so that the accumulators being written stay cache-resident. For
  // squares only the pairs i <= j are visited.
  template <typename Policy>
  static MultiPoly dense_mul_slabs(const MultiPoly& a, const MultiPoly& b,
                                   const Box& box, bool square,
                                   const Policy& policy) {
    using Cell = typename Policy::Cell;
    (void)pack({box.hi[0], box.hi[1], box.hi[2]});  // degree range check
    std::vector<Cell> cells(box.cells());
    const Slabs<Policy> sb(b, box, policy, square);
    std::optional<Slabs<Policy>> own;
    const Slabs<Policy>& sa =
        square ? sb : own.emplace(a, box, policy, false);
    const std::ptrdiff_t base =
        box.offset(Exponents{box.lo[0], box.lo[1], box.lo[2]});
    const auto na = static_cast<std::int64_t>(sa.range.size());
    const auto nb = static_cast<std::int64_t>(sb.range.size());
    for (std::int64_t tt = 0; tt < na + nb - 1; ++tt) {
      for (std::int64_t ta = std::max<std::int64_t>(0, tt - nb + 1);
           ta < std::min(na, tt + 1); ++ta) {
        const std::int64_t tb = tt - ta;
        if (square && ta > tb) break;
        const auto [a0, a1] = sa.range[static_cast<std::size_t>(ta)];
        const auto [b0, b1] = sb.range[static_cast<std::size_t>(tb)];
        if (a0 == a1 || b0 == b1) continue;
        for (std::size_t i = a0; i < a1; ++i) {
          Cell* row = cells.data() + (sa.offset[i] - base);
          if (!square) {
            const auto& x = sa.coeff[i];
            for (std::size_t m = b0; m < b1; ++m)
              Policy::add(row[sb.offset[m]], x, sb.coeff[m]);
          } else if (ta < tb) {
            const auto& x = sa.twice[i];
            for (std::size_t m = b0; m < b1; ++m)
              Policy::add(row[sb.offset[m]], x, sb.coeff[m]);
          } else {
            Policy::add(row[sb.offset[i]], sa.coeff[i], sb.coeff[i]);
            const auto& x = sa.twice[i];
            for (std::size_t m = i + 1; m < b1; ++m)
              Policy::add(row[sb.offset[m]], x, sb.coeff[m]);
          }
        }
      }
    }
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    for (std::size_t idx = 0; idx < cells.size(); ++idx)
      if (Policy::nonzero(cells[idx]))
        keyed.emplace_back(pack(box.exponents(idx)), idx);
    std::sort(keyed.begin(), keyed.end());
    MultiPoly out;
    out.terms_.reserve(keyed.size());
    for (const auto& [key, idx] : keyed) {
      BigInt v = policy.read(cells[idx]);
      if (v != 0) out.terms_.push_back({key, std::move(v)});
    }
    return out;
  }

  template <typename T>
  static std::optional<MultiPoly> dense_mul(const MultiPoly& a,
                                            const MultiPoly& b,
                                            const Box& box) {
    (void)pack({box.hi[0], box.hi[1], box.hi[2]});  // degree range check
    std::vector<T> cells(box.cells());
    std::vector<std::size_t> bidx;
    std::vector<T> bc;
    const Exponents origin{box.lo[0], box.lo[1], box.lo[2]};
    const std::ptrdiff_t base = box.offset(origin);
    for (const Term& y : b.terms_) {
      bidx.push_back(static_cast<std::size_t>(box.offset(unpack(y.key))));
      bc.push_back(from_big<T>(y.coeff));
    }
    for (const Term& x : a.terms_) {
      const std::ptrdiff_t shift = box.offset(unpack(x.key)) - base;
      const T xc = from_big<T>(x.coeff);
      for (std::size_t m = 0; m < bidx.size(); ++m) {
        T& cell = cells[static_cast<std::size_t>(
            shift + static_cast<std::ptrdiff_t>(bidx[m]))];
        if (!fma(cell, xc, bc[m], false)) return std::nullopt;
      }
    }
    return collect(cells, box);
  }

  // Division with 256-bit remainder cells. Each cell starts below 2^ba and
  // receives fewer than #b updates q * c with |q| < 2^qbits and |c| < 2^bb,
  // so capping the quotient coefficients keeps every cell below 2^255.
  static std::optional<MultiPoly> dense_div_acc(const MultiPoly& a,
                                                const MultiPoly& b,
                                                const Box& box) {
    const int ba = max_bits(a), bb = max_bits(b);
    const int qbits =
        std::min(125, 253 - bb - static_cast<int>(std::bit_width(b.size())));
    if (ba > 253 || bb > 125 || qbits < 1) return std::nullopt;
    std::vector<Acc256> rem(box.cells());
    for (const Term& x : a.terms_)
      rem[box.index(unpack(x.key))] = Acc256::from_big(x.coeff);
    const auto lex_less = [](const Term& x, const Term& y) {
      const Exponents ex = unpack(x.key), ey = unpack(y.key);
      return std::tie(ex.t, ex.z0, ex.z1) < std::tie(ey.t, ey.z0, ey.z1);
    };
    const Term& lead_term =
        *std::max_element(b.terms_.begin(), b.terms_.end(), lex_less);
    const Exponents lead = unpack(lead_term.key);
    const Box bbox = Box::of(b);
    const auto lead_index = static_cast<std::ptrdiff_t>(box.offset(lead));
    std::vector<std::pair<std::ptrdiff_t, Small>> rest;
    for (const Term& term : b.terms_)
      if (term.key != lead_term.key)
        rest.emplace_back(box.offset(unpack(term.key)) - lead_index,
                          -from_big<Small>(term.coeff));

    const auto inexact = [] {
      return VerificationError("inexact polynomial division");
    };
    std::vector<Term> quotient;
    for (std::size_t idx = rem.size(); idx-- > 0;) {
      if (!rem[idx].nonzero()) continue;
      const BigInt cell = rem[idx].to_big();
      const Exponents here = box.exponents(idx);
      if (here.t < lead.t || here.z0 < lead.z0 || here.z1 < lead.z1)
        throw inexact();
      if (cell % lead_term.coeff != 0) throw inexact();
      const BigInt q = cell / lead_term.coeff;
      if (static_cast<int>(boost::multiprecision::msb(abs(q))) + 1 > qbits)
        return std::nullopt;
      const Exponents qe{here.t - lead.t, here.z0 - lead.z0,
                         here.z1 - lead.z1};
      for (int v = 0; v < 3; ++v) {
        const std::int64_t e = v == 0 ? qe.t : v == 1 ? qe.z0 : qe.z1;
        if (e + bbox.lo[v] < box.lo[v] || e + bbox.hi[v] > box.hi[v])
          throw inexact();
      }
      const Small qc = from_big<Small>(q);
      const auto at = static_cast<std::ptrdiff_t>(idx);
      for (const auto& [shift, bc] : rest)
        rem[static_cast<std::size_t>(at + shift)].add(qc, bc);
      quotient.push_back({pack(qe), q});
    }
    MultiPoly out;
    out.terms_ = std::move(quotient);
    std::sort(out.terms_.begin(), out.terms_.end(),
              [](const Term& x, const Term& y) { return x.key < y.key; });
    return out;
  }

  // Reduction in the lexicographic order t > z0 > z1, which is the reverse
  // of the cell layout, so the remainder is scanned once from the top.
  template <typename T>
  static std::optional<MultiPoly> dense_div(const MultiPoly& a,
                                            const MultiPoly& b,
                                            const Box& box) {
    std::vector<T> rem(box.cells());
    for (const Term& x : a.terms_)
      rem[box.index(unpack(x.key))] = from_big<T>(x.coeff);
    const auto lex_less = [](const Term& x, const Term& y) {
      const Exponents ex = unpack(x.key), ey = unpack(y.key);
      return std::tie(ex.t, ex.z0, ex.z1) < std::tie(ey.t, ey.z0, ey.z1);
    };
    const Term& lead_term =
        *std::max_element(b.terms_.begin(), b.terms_.end(), lex_less);
    const Exponents lead = unpack(lead_term.key);
    const T lead_coeff = from_big<T>(lead_term.coeff);
    // Every quotient term q satisfies q + box(b) inside box(a) when the
    // division is exact, so one containment test per term suffices and
    // the remaining terms of b become fixed cell displacements.
    const Box bbox = Box::of(b);
    const auto lead_index = static_cast<std::ptrdiff_t>(box.offset(lead));
    std::vector<std::pair<std::ptrdiff_t, T>> rest;
    for (const Term& term : b.terms_)
      if (term.key != lead_term.key)
        rest.emplace_back(box.offset(unpack(term.key)) - lead_index,
                          from_big<T>(term.coeff));

    const auto inexact = [] {
      return VerificationError("inexact polynomial division");
    };
    std::vector<Term> quotient;
    for (std::size_t idx = rem.size(); idx-- > 0;) {
      T& cell = rem[idx];
      if (cell == 0) continue;
      const Exponents here = box.exponents(idx);
      if (here.t < lead.t || here.z0 < lead.z0 || here.z1 < lead.z1)
        throw inexact();
      if (cell % lead_coeff != 0) throw inexact();
      const T qc = cell / lead_coeff;
      const Exponents qe{here.t - lead.t, here.z0 - lead.z0,
                         here.z1 - lead.z1};
      for (int v = 0; v < 3; ++v) {
        const std::int64_t q = v == 0 ? qe.t : v == 1 ? qe.z0 : qe.z1;
        if (q + bbox.lo[v] < box.lo[v] || q + bbox.hi[v] > box.hi[v])
          throw inexact();
      }
      cell = 0;
      const auto at = static_cast<std::ptrdiff_t>(idx);
      for (const auto& [shift, bc] : rest)
        if (!fma(rem[static_cast<std::size_t>(at + shift)], qc, bc, true))
          return std::nullopt;
      quotient.push_back({pack(qe), to_big(qc)});
    }
    MultiPoly out;
    out.terms_ = std::move(quotient);
    std::sort(out.terms_.begin(), out.terms_.end(),
              [](const Term& x, const Term& y) { return x.key < y.key; });
    return out;
  }

  static MultiPoly sparse_mul(const MultiPoly& small, const MultiPoly& large) {
    std::unordered_map<std::uint64_t, BigInt> acc;
    acc.reserve(small.size() * 4 + large.size());
    for (const Term& x : small.terms_)
      for (const Term& y : large.terms_)
        acc[add_keys(x.key, y.key)] += x.coeff * y.coeff;
    MultiPoly out;
    out.terms_.reserve(acc.size());
    for (auto& [key, coeff] : acc)
      if (coeff != 0) out.terms_.push_back({key, std::move(coeff)});
    std::sort(out.terms_.begin(), out.terms_.end(),
              [](const Term& x, const Term& y) { return x.key < y.key; });
    return out;
  }

  static MultiPoly sparse_div(const MultiPoly& a, const MultiPoly& b) {
    std::map<std::uint64_t, BigInt> rem;
    for (const Term& term : a.terms_)
      rem.emplace_hint(rem.end(), term.key, term.coeff);
    const Term& lead = b.terms_.back();
    std::vector<Term> quotient;
    while (!rem.empty()) {
      auto top = std::prev(rem.end());
      if (!key_divides(lead.key, top->first) || top->second % lead.coeff != 0)
        throw VerificationError("inexact polynomial division");
      const std::uint64_t qkey = top->first - lead.key;
      const BigInt qcoeff = top->second / lead.coeff;
      rem.erase(top);
      for (std::size_t i = 0; i + 1 < b.terms_.size(); ++i) {
        const Term& term = b.terms_[i];
        auto [it, inserted] = rem.try_emplace(add_keys(qkey, term.key));
        it->second -= qcoeff * term.coeff;
        if (it->second == 0) rem.erase(it);
      }
      quotient.push_back({qkey, qcoeff});
    }
    MultiPoly out;
    out.terms_.assign(quotient.rbegin(), quotient.rend());
    return out;
  }

  static std::uint64_t add_keys(std::uint64_t x, std::uint64_t y) {
    const Exponents ex = unpack(x), ey = unpack(y);
    if (ex.total() + ey.total() > kMaxExponent)
      throw InvalidInput("polynomial degree exceeds 65535");
    return x + y;
  }

  static bool key_divides(std::uint64_t d, std::uint64_t n) {
    const Exponents ed = unpack(d), en = unpack(n);
    return ed.t <= en.t && ed.z0 <= en.z0 && ed.z1 <= en.z1;
  }

  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b,
                         bool negate_b) {
    MultiPoly out;
    out.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a.terms_[i].key < b.terms_[j].key)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.size() || b.terms_[j].key < a.terms_[i].key) {
        Term term = b.terms_[j++];
        if (negate_b) term.coeff = -term.coeff;
        out.terms_.push_back(std::move(term));
      } else {
        BigInt c = negate_b ? a.terms_[i].coeff - b.terms_[j].coeff
                            : a.terms_[i].coeff + b.terms_[j].coeff;
        if (c != 0) out.terms_.push_back({a.terms_[i].key, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;  // sorted by key, no zero coefficients
};

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) {
  return os << p.to_string();
}

}  // namespace cqs
