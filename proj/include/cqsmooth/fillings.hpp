#pragma once

// Lattice models of the Milnor fibres: chain plumbing graphs, the diagonal
// <-1>-lattice carrying the classes c_i, Lisca's fingerprint and the
// classification of the fillings of a lens space L(p, q) up to
// diffeomorphism, with and without order.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqsmooth/contfrac.hpp"
#include "cqsmooth/matrix.hpp"
#include "cqsmooth/zeroseq.hpp"

namespace cqs {

enum class ChainFlavor { b_chain, a_chain };
enum class Marking { forward, reversed };

/// Linear plumbing graph; weights[0] is vertex 1 under the marking.
struct PlumbingChain {
  std::vector<std::int64_t> weights;
  Marking marking = Marking::forward;

  friend bool operator==(const PlumbingChain&, const PlumbingChain&) = default;
};

/// G(b) (weights -b_i, from p/q) or G(a) (weights -a_i, from p/(p-q)).
inline PlumbingChain chain_graph(const BigInt& p, const BigInt& q,
                                 ChainFlavor flavor) {
  require_coprime_pair(p, q);
  const HJSequence x =
      flavor == ChainFlavor::b_chain ? hj_expand(p, q) : hj_expand(p, p - q);
  PlumbingChain out;
  for (std::int64_t v : x) out.weights.push_back(-v);
  return out;
}

/// Classes c_1..c_r in the lattice n<-1> with basis E_1..E_n; row i holds
/// the coordinates of c_i. The pairing is u.v = -(dot product).
struct DiagonalLatticeModel {
  std::size_t rank = 0;
  IntegerMatrix class_rows;

  static DiagonalLatticeModel from_blocks(std::span<const std::int64_t> a,
                                          const ZeroSequence& k) {
    DiagonalLatticeModel m;
    m.class_rows = block_matrix(a, k);
    m.rank = m.class_rows.cols();
    return m;
  }

  /// (c_i . c_j)_{ij}.
  IntegerMatrix intersection_form() const {
    IntegerMatrix g = class_rows * class_rows.transpose();
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = -g(i, j);
    return g;
  }
};

/// D(a;k) D(a;k)^T, which must be M(a) (so that c_i^2 = -a_i and
/// consecutive classes meet once).
inline IntegerMatrix gram_from_blocks(std::span<const std::int64_t> a,
                                      const ZeroSequence& k) {
  const IntegerMatrix d = block_matrix(a, k);
  IntegerMatrix g = d * d.transpose();
  if (g != tridiagonal_matrix(a))
    throw VerificationError("D D^T differs from M(a) for a = " + to_string(a) +
                            ", k = " + to_string(k.values()));
  return g;
}

/// For each c_i, the number of classes e with e^2 = -1, e.c_i != 0 and
/// e.c_j = 0 for j != i. In a diagonal lattice these are the +-E_m, so the
/// count is twice the number of columns supported on row i alone.
inline std::vector<std::int64_t> lisca_fingerprint(
    const DiagonalLatticeModel& model) {
  const IntegerMatrix& c = model.class_rows;
  std::vector<std::int64_t> out(c.rows(), 0);
  for (std::size_t m = 0; m < c.cols(); ++m) {
    std::size_t hits = 0, row = 0;
    for (std::size_t i = 0; i < c.rows(); ++i)
      if (c(i, m) != 0) {
        ++hits;
        row = i;
      }
    if (hits == 1) out[row] += 2;
  }
  return out;
}

/// k_i = a_i - fingerprint_i / 2, validated as an element of K_r(a).
inline ZeroSequence recover_k(std::span<const std::int64_t> a,
                              std::span<const std::int64_t> fingerprint) {
  require_chain(a, "a-chain");
  if (fingerprint.size() != a.size())
    throw InvalidInput("fingerprint length differs from the a-chain");
  HJSequence k;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t f = fingerprint[i];
    if (f % 2 != 0 || f < 0 || f / 2 > a[i])
      throw InvalidInput("fingerprint entry " + std::to_string(f) +
                         " is not an even number in [0, 2 a_i]");
    k.push_back(a[i] - f / 2);
  }
  if (!ZeroSequence::is_zero_sequence(k))
    throw InvalidInput("recovered k = " + to_string(k) +
                       " is not an admissible sequence representing 0");
  return ZeroSequence::from(std::move(k));
}

// Which of p/q, p/q' the order points to.
enum class OrderType { as_given, conjugated };

struct FillingDescriptor {
  BigInt p, q;
  ZeroSequence k;
  OrderType order_type = OrderType::as_given;

  /// Validates gcd(p, q) = 1, 0 < q < p and k in K_r(hj_expand(p, p - q)).
  static FillingDescriptor make(const BigInt& p, const BigInt& q,
                                const ZeroSequence& k,
                                OrderType order = OrderType::as_given) {
    require_coprime_pair(p, q);
    const HJSequence a = hj_expand(p, p - q);
    if (k.size() != a.size() || !entrywise_leq(k.values(), a))
      throw InvalidInput("k " + to_string(k.values()) + " is not in K_r(" +
                         to_string(a) + ")");
    return {p, q, k, order};
  }

  /// The same filling seen from the other end of the chain: (q', k').
  FillingDescriptor conjugate() const {
    return {p, q_conjugate(p, q), k.reversed(),
            order_type == OrderType::as_given ? OrderType::conjugated
                                              : OrderType::as_given};
  }

  /// Representative with order_type = as_given.
  FillingDescriptor normalized() const {
    return order_type == OrderType::as_given ? *this : conjugate();
  }

  friend bool operator==(const FillingDescriptor&,
                         const FillingDescriptor&) = default;
};

/// Without order: (q2,k2) = (q1,k1) or (q2,k2) = (q1',k1'). With order: the
/// normalized descriptors coincide.
inline bool classify(const FillingDescriptor& d1, const FillingDescriptor& d2,
                     bool respect_order) {
  if (d1.p != d2.p) return false;
  if (respect_order) return d1.normalized() == d2.normalized();
  if (d1.q == d2.q && d1.k == d2.k) return true;
  return d2.q == q_conjugate(d1.p, d1.q) && d2.k == d1.k.reversed();
}

struct MilnorNumbers {
  std::int64_t euler_characteristic_fiber = 0;
  std::int64_t mu = 0;
  std::int64_t n_points = 0;

  friend bool operator==(const MilnorNumbers&, const MilnorNumbers&) = default;
};

/// n = r - 1 + sum (a_i - k_i) points are blown up; the fibre is the
/// blown-up plane minus the chain of r + 1 curves, so chi = n - (r - 1) and,
/// taking b_1 = 0, mu = b_2 = chi - 1.
inline MilnorNumbers milnor_numbers(std::span<const std::int64_t> a,
                                    const ZeroSequence& k) {
  require_chain(a, "a-chain");
  if (k.size() != a.size() || !entrywise_leq(k.values(), a))
    throw InvalidInput("k " + to_string(k.values()) + " is not in K_r(" +
                       to_string(a) + ")");
  MilnorNumbers out;
  out.n_points = picture_point_count(a, k);
  out.euler_characteristic_fiber =
      out.n_points - (static_cast<std::int64_t>(a.size()) - 1);
  out.mu = out.euler_characteristic_fiber - 1;
  return out;
}

/// |K_r(a)| for a = hj_expand(p, p - q): the number of smoothing components.
inline std::size_t count_components(const BigInt& p, const BigInt& q) {
  require_coprime_pair(p, q);
  return enumerate_K(hj_expand(p, p - q)).size();
}

}  // namespace cqs
