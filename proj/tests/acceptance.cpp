// Acceptance suite: one PASS/FAIL line per criterion, each against its own
// time budget. Exit status is the number of failed criteria (capped).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cqsmooth/cli.hpp"
#include "cqsmooth/cqsmooth.hpp"
#include "support/oracles.hpp"

#ifndef CQS_GOLDEN_DIR
#define CQS_GOLDEN_DIR "tests/golden"
#endif

namespace {

using namespace cqs;
using Seq = std::vector<std::int64_t>;

struct Failure {
  std::string what;
};

// Throws on the first violated condition; the message names the instance.
void expect(bool cond, const std::string& what) {
  if (!cond) throw Failure{what};
}

std::string str(std::span<const std::int64_t> x) { return to_string(x); }

std::string ak(const Seq& a, const ZeroSequence& k) {
  return "a=" + str(a) + " k=" + str(k.values());
}

// Multiset of columns of a JSON {rows, cols, data} matrix.
std::multiset<std::vector<long long>> columns_of(const Json& m) {
  const auto rows = m.at("rows").get<std::size_t>();
  const auto cols = m.at("cols").get<std::size_t>();
  std::multiset<std::vector<long long>> out;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<long long> col;
    for (std::size_t r = 0; r < rows; ++r)
      col.push_back(m.at("data").at(r * cols + c).get<long long>());
    out.insert(col);
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::string& out_text) {
  args.insert(args.begin(), "cqsmooth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  out_text = out.str() + err.str();
  return rc;
}

// (a, K_r(a)) for every a-chain with sum <= max_sum.
std::vector<std::pair<Seq, std::vector<ZeroSequence>>> sweep(int max_sum) {
  std::vector<std::pair<Seq, std::vector<ZeroSequence>>> out;
  for (const Seq& a : enumerate_a_chains(max_sum)) out.emplace_back(a, enumerate_K(a));
  return out;
}

void golden_example() {
  const std::string golden = std::string(CQS_GOLDEN_DIR) + "/x11_4.json";
  std::string text;
  expect(run_cli({"components", "11", "4", "--emit-matrices", "--perm-eq",
                  "--golden", golden},
                 text) == 0,
         "components 11 4 --emit-matrices --perm-eq failed:\n" + text);
  expect(text.find("perm-eq against displayed matrices: match") !=
             std::string::npos,
         "no perm-eq match line");
  expect(run_cli({"components", "11", "4", "--json"}, text) == 0,
         "components --json failed");
  const Json doc = Json::parse(text);
  std::ifstream in(golden);
  expect(bool(in), "cannot open " + golden);
  const Json gold = Json::parse(in);
  const Json& comps = doc.at("components");
  expect(comps.size() == 2, "expected 2 components");
  expect(comps[0].at("k") == Json({1, 2, 2, 1}) &&
             comps[1].at("k") == Json({1, 3, 1, 2}),
         "K_4(2,3,2,2) differs");
  const long long expected_n[] = {6, 5};
  for (std::size_t i = 0; i < 2; ++i) {
    const Json& c = comps[i];
    expect(c.at("l") == Json({2, 3, 3, 3}), "l differs");
    expect(c.at("n").get<long long>() == expected_n[i], "n differs");
    const Json& g = gold.at("components")[i];
    expect(g.at("k") == c.at("k"), "golden order differs");
    for (const char* key : {"D", "cumD"}) {
      expect(c.at(key).at("rows") == g.at(key).at("rows") &&
                 c.at(key).at("cols") == g.at(key).at("cols"),
             std::string(key) + " shape differs");
      expect(columns_of(c.at(key)) == columns_of(g.at(key)),
             std::string(key) + " differs beyond column order for k=" +
                 c.at("k").dump());
    }
  }
}

void catalan_counts() {
  for (int r = 2; r <= 10; ++r) {
    const auto tri = enumerate_triangulations(r + 1);
    expect(BigInt(tri.size()) == oracle::binomial_catalan(r - 1),
           "triangulation count for r=" + std::to_string(r));
    std::set<Seq> ks;
    for (const auto& t : tri) {
      const Seq k = triangulation_to_k(t).values();
      expect(oracle::continuant(k) == 0 && oracle::admissible(k),
             "triangulation gives k=" + str(k) + " outside K_r");
      ks.insert(k);
    }
    expect(ks.size() == tri.size(), "triangulation_to_k not injective");
    std::set<Seq> lib;
    for (const auto& z : enumerate_zero_sequences(r)) lib.insert(z.values());
    expect(lib == ks, "K_" + std::to_string(r) + " differs from triangulations");
  }
}

void incidence_laws() {
  for (const auto& [a, ks] : sweep(18)) {
    const std::size_t r = a.size();
    if (r <= 10) {
      std::set<Seq> filtered;
      // A single vertex has no polygon; K_1 = {(0)}.
      if (r >= 2)
        for (const auto& t : enumerate_triangulations(static_cast<int>(r) + 1)) {
          const Seq k = triangulation_to_k(t).values();
          bool ok = true;
          for (std::size_t i = 0; i < r; ++i) ok = ok && k[i] <= a[i];
          if (ok) filtered.insert(k);
        }
      if (r == 1) filtered.insert(Seq{0});
      std::set<Seq> got;
      for (const auto& k : ks) got.insert(k.values());
      expect(got == filtered, "K_r(a) differs for a=" + str(a));
    }
    std::vector<std::int64_t> l;
    std::int64_t acc = 2;
    for (std::int64_t v : a) l.push_back(acc += v - 2);
    for (const auto& k : ks) {
      const IntegerMatrix cum = cumsum_rows(block_matrix(a, k));
      std::int64_t n = static_cast<std::int64_t>(r) - 1;
      for (std::size_t i = 0; i < r; ++i) n += a[i] - k[i];
      expect(cum.rows() == r && static_cast<std::int64_t>(cum.cols()) == n,
             "shape of cumD for " + ak(a, k));
      for (std::size_t i = 0; i < r; ++i) {
        BigInt sum = 0;
        for (std::size_t c = 0; c < cum.cols(); ++c) {
          expect(cum(i, c) == 0 || cum(i, c) == 1, "cumD entry for " + ak(a, k));
          sum += cum(i, c);
        }
        expect(sum == l[i], "row sum " + std::to_string(i + 1) + " for " + ak(a, k));
      }
    }
  }
}

void gram_identity() {
  for (const auto& [a, ks] : sweep(18)) {
    const auto m = oracle::gram(a);
    const std::size_t r = a.size();
    for (const auto& k : ks) {
      const IntegerMatrix d = block_matrix(a, k);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          BigInt s = 0;
          for (std::size_t c = 0; c < d.cols(); ++c) s += d(i, c) * d(j, c);
          expect(s == m[i * r + j], "D D^T != M(a) for " + ak(a, k));
        }
    }
  }
}

void fingerprint_law() {
  for (const auto& [a, ks] : sweep(18)) {
    std::set<Seq> seen;
    for (const auto& k : ks) {
      const auto fp = lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, k));
      Seq expected;
      for (std::size_t i = 0; i < a.size(); ++i) expected.push_back(2 * (a[i] - k[i]));
      expect(fp == expected, "fingerprint for " + ak(a, k));
      expect(recover_k(a, fp) == k, "recover_k for " + ak(a, k));
      expect(seen.insert(fp).second, "repeated fingerprint for " + ak(a, k));
    }
  }
}

void polynomial_chain() {
  for (const auto& [a, ks] : sweep(16)) {
    for (const auto& k : ks) {
      const auto chain = deformation_chain(a, k);
      expect(chain.size() == a.size() + 2, "chain length for " + ak(a, k));
      for (std::size_t i = 1; i < chain.size(); ++i) {
        expect(!chain[i].divisible_by(Var::z0),
               "z0 divides P_" + std::to_string(i) + " for " + ak(a, k));
        Exponents e;
        e.z1 = static_cast<std::int64_t>(
            oracle::continuant(a, 1, static_cast<std::ptrdiff_t>(i) - 1));
        expect(chain[i].at_zero(Var::t) == MultiPoly::monomial(1, e),
               "P_" + std::to_string(i) + "(t=0) for " + ak(a, k));
      }
      expect(verify_factorization(a, k, chain), "factorization for " + ak(a, k));
    }
  }
}

void cone_duality() {
  for (int p = 2; p <= 200; ++p)
    for (int q = 1; q < p; ++q) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      const std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      expect(sigma_polyline(p, q).points ==
                 hull_polyline_oracle(p, q, ConeSide::sigma).points,
             "sigma polyline at " + at);
      expect(supplementary_polyline(p, q).points ==
                 hull_polyline_oracle(p, q, ConeSide::supplementary).points,
             "supplementary polyline at " + at);
      expect(verify_precdual(p, q), "precdual at " + at);
    }
}

void continued_fraction_laws() {
  for (int p = 2; p <= 500; ++p)
    for (int q = 1; q < p; ++q) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      const std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      const Seq b = hj_expand(p, q);
      expect(b == oracle::hj_expand(p, q), "hj_expand at " + at);
      expect(hj_eval(b) == Fraction{p, q}, "hj_eval o hj_expand at " + at);
      expect(oracle::hj_value(b) == oracle::Rational(p, q), "value at " + at);
      const Seq a = hj_expand(p, p - q);
      expect(riemenschneider_dual(a) == b && riemenschneider_dual(b) == a,
             "Riemenschneider duality at " + at);
      const BigInt qc = q_conjugate(p, q);
      expect(qc > 0 && qc < p && (qc * q) % p == 1, "q' at " + at);
      expect(hj_expand(p, qc) == reversed(b), "reversal law at " + at);
    }
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> len(0, 14), entry(-6, 12);
  for (int trial = 0; trial < 20000; ++trial) {
    Seq x(static_cast<std::size_t>(len(rng)));
    for (auto& v : x) v = entry(rng);
    expect(z_value(x) == z_value(reversed(x)), "Z symmetry for " + str(x));
    expect(z_value(x) == oracle::continuant(x), "Z value for " + str(x));
  }
}

void admissibility() {
  for (std::size_t n = 1; n <= 6; ++n) {
    Seq x(n, 0);
    for (;;) {
      expect(is_admissible(x) == oracle::admissible(x),
             "admissibility of " + str(x));
      std::size_t i = n;
      while (i > 0 && x[i - 1] == 4) x[--i] = 0;
      if (i == 0) break;
      ++x[i - 1];
    }
  }
  const Seq bad{2, 1, 1, 1, 1, 2};
  expect(z_value(bad) == 0 && hj_eval(bad).numerator == 0, "[2,1,1,1,1,2] = 0");
  expect(!is_admissible(bad) && !oracle::admissible(bad),
         "(2,1,1,1,1,2) accepted");
  expect(!ZeroSequence::is_zero_sequence(bad), "(2,1,1,1,1,2) in K_6");
}

void fan_laws() {
  for (const auto& [a, ks] : sweep(18)) {
    for (const auto& k : ks) {
      const Fan fan = build_fan(k);
      const std::size_t r = k.size(), n = fan.rays.size();
      expect(n == r + 2, "ray count for " + ak(a, k));
      for (std::size_t j = 0; j < n; ++j)
        expect(det(fan.rays[j], fan.rays[(j + 1) % n]) == 1,
               "adjacent det for " + ak(a, k));
      for (std::size_t j = 1; j <= r + 1; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        const LatticeVector u{oracle::continuant(k.values(), 1, jj - 1),
                              oracle::continuant(k.values(), 2, jj - 1)};
        expect(fan.rays[j] == u, "closed form of u_" + std::to_string(j) +
                                     " for " + ak(a, k));
      }
    }
  }
  for (const auto& [a, ks] : sweep(12)) {
    const std::size_t r = a.size();
    for (const auto& k : ks) {
      const auto chain = deformation_chain(a, k);
      const auto m = [&](std::size_t i, std::size_t j) -> BigInt {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const auto jj = static_cast<std::ptrdiff_t>(j);
        return i <= j ? oracle::continuant(k.values(), ii + 1, jj - 1)
                      : BigInt(-oracle::continuant(a, jj + 1, ii - 1));
      };
      for (std::size_t j = 1; j <= r; ++j) {
        const auto pulled = pullback_chain(a, k, j, chain);
        for (std::size_t i = 1; i <= r + 1; ++i) {
          const LaurentPoly& z = pulled[i - 1];
          expect(BigInt(z.x_shift) == m(i, j) && BigInt(z.y_shift) == m(i, j + 1),
                 "chart " + std::to_string(j) + " exponents of z_" +
                     std::to_string(i) + " for " + ak(a, k));
          expect(!z.body.divisible_by(Var::z0) && !z.body.divisible_by(Var::z1),
                 "chart " + std::to_string(j) + " Q_" + std::to_string(i) +
                     " divisible by x or y for " + ak(a, k));
        }
        const ChartCheck c = check_chart(a, k, j, chain);
        expect(c.ok(), "chart check for " + ak(a, k) + ": " + c.failure);
      }
    }
  }
}

void classification() {
  for (int p = 2; p <= 100; ++p) {
    std::vector<FillingDescriptor> all;
    for (int q = 1; q < p; ++q) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      for (const auto& k : enumerate_K(hj_expand(p, p - q)))
        all.push_back(FillingDescriptor::make(p, q, k));
    }
    for (const auto& d : all) {
      const BigInt qc = oracle::inverse_mod(d.q, p);
      const Seq kc(d.k.values().rbegin(), d.k.values().rend());
      const bool self = qc == d.q && kc == d.k.values();
      std::size_t without = 0, with = 0;
      bool partner_found = false;
      for (const auto& e : all) {
        const bool is_d = e.q == d.q && e.k == d.k;
        const bool is_partner = e.q == qc && e.k.values() == kc;
        partner_found = partner_found || is_partner;
        if (classify(d, e, false)) {
          ++without;
          expect(is_d || is_partner, "unexpected equivalence at p=" +
                                         std::to_string(p));
        }
        if (classify(d, e, true)) {
          ++with;
          expect(is_d, "with-order class not a singleton at p=" +
                           std::to_string(p));
        }
      }
      const std::string at = "p=" + std::to_string(p) + " q=" + to_string(d.q) +
                             " k=" + str(d.k.values());
      expect(partner_found, "conjugate filling missing at " + at);
      expect(without == (self ? 1u : 2u), "class size without order at " + at);
      expect(with == 1, "class size with order at " + at);
    }
  }
}

void weight_chain() {
  for (int p = 2; p <= 200; ++p)
    for (int q = 1; q < p; ++q) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      const Seq a = hj_expand(p, p - q);
      const auto w = weights(a, p, q).w;
      const std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      expect(w.size() == a.size() + 2, "weight count at " + at);
      expect(w[0] == 1 && w[1] == 1, "weights start at " + at);
      for (std::size_t i = 1; i < w.size(); ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        expect(w[i] == oracle::continuant(a, 1, ii - 1) -
                           oracle::continuant(a, 2, ii - 1),
               "w_" + std::to_string(i) + " at " + at);
        expect(w[i - 1] <= w[i], "monotonicity at " + at);
      }
      expect(w.back() == q, "endpoint at " + at);
    }
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "worked example X_{11,4}: K, D, cumD, l, n", 1, golden_example},
      {2, "Catalan counts 2 <= r <= 10", 30, catalan_counts},
      {3, "incidence laws, sum(a) <= 18", 120, incidence_laws},
      {4, "Gram identity D D^T = M(a), sum(a) <= 18", 120, gram_identity},
      {5, "fingerprint law and round trip, sum(a) <= 18", 120, fingerprint_law},
      {6, "polynomial chain and factorization, sum(a) <= 16", 300, polynomial_chain},
      {7, "cone duality against hull oracle, p <= 200", 60, cone_duality},
      {8, "continued-fraction laws, p <= 500", 60, continued_fraction_laws},
      {9, "admissibility against PSD-rank oracle", 60, admissibility},
      {10, "fan laws and chart pull-backs", 180, fan_laws},
      {11, "classification of fillings, p <= 100", 60, classification},
      {12, "weight chain, p <= 200", 10, weight_chain},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::string why;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const Failure& f) {
      why = f.what;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && s > c.budget_s)
      why = "over budget (" + std::to_string(c.budget_s) + " s)";
    if (!why.empty()) ++failed;
    std::printf("%s %2d  %-52s %8.2f s%s%s\n", why.empty() ? "PASS" : "FAIL",
                c.id, c.name, s, why.empty() ? "" : "  -- ", why.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return std::min(failed, 125);
}
