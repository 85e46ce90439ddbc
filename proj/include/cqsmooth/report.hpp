#pragma once

// JSON records for the command-line front end and the exhaustive sweep
// driver. nlohmann::json objects are std::map backed, so keys come out
// sorted and the dump is deterministic.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqsmooth/conegeom.hpp"
#include "cqsmooth/contfrac.hpp"
#include "cqsmooth/deformpoly.hpp"
#include "cqsmooth/fillings.hpp"
#include "cqsmooth/hull_oracle.hpp"
#include "cqsmooth/toricfan.hpp"
#include "cqsmooth/zeroseq.hpp"

namespace cqs {

using Json = nlohmann::json;

/// Machine integers as numbers, anything larger as a decimal string.
inline Json to_json(const BigInt& v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<std::int64_t>(v);
  return v.str();
}

inline Json to_json(std::span<const std::int64_t> x) {
  return Json(std::vector<std::int64_t>(x.begin(), x.end()));
}

inline Json to_json(const std::vector<BigInt>& x) {
  Json out = Json::array();
  for (const BigInt& v : x) out.push_back(to_json(v));
  return out;
}

inline Json to_json(const LatticeVector& v) {
  return Json::array({to_json(v.x), to_json(v.y)});
}

/// {rows, cols, data} with data row-major.
inline Json to_json(const IntegerMatrix& m) {
  Json data = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline IntegerMatrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const Json& data = j.at("data");
  if (data.size() != rows * cols)
    throw InvalidInput("matrix data length differs from rows * cols");
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = data[i * cols + c].get<std::int64_t>();
  return m;
}

inline Json input_json(const BigInt& p, const BigInt& q) {
  return {{"p", to_json(p)},
          {"q", to_json(q)},
          {"a", to_json(hj_expand(p, p - q))},
          {"b", to_json(hj_expand(p, q))},
          {"q_prime", to_json(q_conjugate(p, q))}};
}

struct ComponentOptions {
  bool emit_poly = false;
  bool verify = false;
  std::int64_t degree_cap = kDefaultDegreeCap;
};

// Verification outcomes of one component; "ok" entries are booleans.
struct ComponentChecks {
  std::map<std::string, bool> ok;
  std::vector<std::string> failures;

  void record(const std::string& name, bool passed, const std::string& why) {
    ok[name] = passed;
    if (!passed) failures.push_back(name + ": " + why);
  }
  bool all_ok() const { return failures.empty(); }
};

namespace detail {

inline std::string what_of(const std::exception& e) { return e.what(); }

// Runs f, turning library errors into a failed check.
inline void run_check(ComponentChecks& checks, const std::string& name,
                      const std::function<bool(std::string&)>& f) {
  std::string why = "check failed";
  try {
    checks.record(name, f(why), why);
  } catch (const std::exception& e) {
    checks.record(name, false, what_of(e));
  }
}

}  // namespace detail

/// Per-k record: k, l, n, D, cumD, fingerprint, mu, fan_rays and
/// factorization_ok (null unless the chain was computed), plus "checks"
/// when verifying and "poly" when emitting the chain.
inline Json component_record(std::span<const std::int64_t> a,
                             const ZeroSequence& k,
                             const ComponentOptions& opt,
                             ComponentChecks* checks_out = nullptr) {
  const IntegerMatrix d = block_matrix(a, k);
  const IntegerMatrix cum = cumsum_rows(d);
  const DiagonalLatticeModel model = DiagonalLatticeModel::from_blocks(a, k);
  const auto fp = lisca_fingerprint(model);
  const MilnorNumbers milnor = milnor_numbers(a, k);
  Json rec;
  rec["k"] = to_json(k.values());
  rec["l"] = to_json(weights_l(a));
  rec["n"] = milnor.n_points;
  rec["mu"] = milnor.mu;
  rec["euler_characteristic_fiber"] = milnor.euler_characteristic_fiber;
  rec["D"] = to_json(d);
  rec["cumD"] = to_json(cum);
  rec["fingerprint"] = to_json(fp);
  Json rays = Json::array();
  for (const LatticeVector& u : build_fan(k).rays) rays.push_back(to_json(u));
  rec["fan_rays"] = rays;
  rec["factorization_ok"] = nullptr;

  ComponentChecks checks;
  std::optional<std::vector<MultiPoly>> chain;
  if (opt.emit_poly || opt.verify) {
    chain = deformation_chain(a, k, opt.degree_cap);
    rec["factorization_ok"] = verify_factorization(a, k, *chain);
  }
  if (opt.emit_poly) {
    Json poly;
    Json ps = Json::array(), degrees = Json::array(), sizes = Json::array();
    for (const MultiPoly& pi : *chain) {
      ps.push_back(pi.to_string());
      degrees.push_back(pi.total_degree());
      sizes.push_back(pi.size());
    }
    poly["P"] = ps;
    poly["total_degrees"] = degrees;
    poly["terms"] = sizes;
    rec["poly"] = poly;
  }
  if (opt.verify) {
    detail::run_check(checks, "gram", [&](std::string&) {
      gram_from_blocks(a, k);
      return true;
    });
    detail::run_check(checks, "incidence", [&](std::string& why) {
      const auto l = weights_l(a);
      for (std::size_t i = 0; i < cum.rows(); ++i) {
        BigInt row = 0;
        for (std::size_t j = 0; j < cum.cols(); ++j) {
          if (cum(i, j) != 0 && cum(i, j) != 1) {
            why = "cumD entry outside {0,1}";
            return false;
          }
          row += cum(i, j);
        }
        if (row != l[i]) {
          why = "row sum of cumD differs from l";
          return false;
        }
      }
      why = "column count differs from r - 1 + sum(a - k)";
      return static_cast<std::int64_t>(cum.cols()) == milnor.n_points;
    });
    detail::run_check(checks, "fingerprint", [&](std::string& why) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (fp[i] != 2 * (a[i] - k[i])) {
          why = "fingerprint differs from 2(a - k)";
          return false;
        }
      why = "recover_k does not invert the fingerprint";
      return recover_k(a, fp) == k;
    });
    detail::run_check(checks, "factorization", [&](std::string& why) {
      if (!check_specialization(a, *chain)) {
        why = "P_i at t = 0 is not a power of z1";
        return false;
      }
      if (!check_negative_weight(a, *chain)) {
        why = "a monomial exceeds the weight bound";
        return false;
      }
      why = "P_{r+1} differs from the product of factors";
      return rec["factorization_ok"].get<bool>();
    });
    detail::run_check(checks, "fan", [&](std::string& why) {
      build_fan(k);
      for (std::size_t j = 1; j <= a.size(); ++j) {
        const ChartCheck c = check_chart(a, k, j, *chain);
        if (!c.ok()) {
          why = c.failure;
          return false;
        }
      }
      return true;
    });
    Json cj;
    for (const auto& [name, passed] : checks.ok) cj[name] = passed;
    rec["checks"] = cj;
  }
  if (checks_out) *checks_out = std::move(checks);
  return rec;
}

/// All a-chains (entries >= 2) with entry sum <= max_sum, ordered by sum
/// and then lexicographically.
inline std::vector<HJSequence> enumerate_a_chains(int max_sum) {
  std::vector<std::vector<HJSequence>> by_sum(
      static_cast<std::size_t>(std::max(max_sum, 0) + 1));
  const std::function<void(HJSequence&, int)> grow = [&](HJSequence& cur,
                                                         int sum) {
    if (!cur.empty()) by_sum[static_cast<std::size_t>(sum)].push_back(cur);
    for (int v = 2; sum + v <= max_sum; ++v) {
      cur.push_back(v);
      grow(cur, sum + v);
      cur.pop_back();
    }
  };
  HJSequence cur;
  grow(cur, 0);
  std::vector<HJSequence> out;
  for (auto& group : by_sum) {
    std::sort(group.begin(), group.end());
    for (auto& a : group) out.push_back(std::move(a));
  }
  return out;
}

/// (p, q) with p/(p - q) = [a].
inline std::pair<BigInt, BigInt> pair_of_chain(std::span<const std::int64_t> a) {
  const Fraction f = hj_eval(a);
  return {f.numerator, f.numerator - f.denominator};
}

inline BigInt catalan(int n) {
  BigInt c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

inline constexpr int kSweepCap = 30;
inline constexpr int kCatalanMaxR = 11;
inline constexpr std::size_t kEnumerationMaxR = 10;

inline const std::vector<std::string>& sweep_check_names() {
  static const std::vector<std::string> names{
      "catalan", "charts",      "cone",  "enumeration", "factorization",
      "fan",     "fingerprint", "gram",  "incidence",   "milnor",
      "weights"};
  return names;
}

struct SweepOptions {
  int max_sum_a = 0;
  std::set<std::string> checks;
  std::int64_t degree_cap = kDefaultDegreeCap;
  std::int64_t oracle_limit = kDefaultOracleLimit;
  std::size_t max_counterexamples = 20;
};

struct CheckTally {
  std::int64_t passed = 0, failed = 0, skipped = 0;
  std::vector<std::string> counterexamples;
};

struct SweepResult {
  int max_sum_a = 0;
  std::int64_t chains = 0, components = 0;
  std::map<std::string, CheckTally> checks;

  bool ok() const {
    for (const auto& [name, t] : checks)
      if (t.failed) return false;
    return true;
  }

  Json to_json() const {
    Json cj = Json::object();
    for (const auto& [name, t] : checks)
      cj[name] = {{"passed", t.passed},
                  {"failed", t.failed},
                  {"skipped", t.skipped},
                  {"counterexamples", t.counterexamples}};
    return {{"max_sum_a", max_sum_a},
            {"chains", chains},
            {"components", components},
            {"checks", cj},
            {"ok", ok()}};
  }
};

namespace detail {

inline void tally(CheckTally& t, std::size_t limit, const std::string& where,
                  const std::function<bool(std::string&)>& f) {
  std::string why = "check failed";
  bool passed = false;
  try {
    passed = f(why);
  } catch (const std::exception& e) {
    why = e.what();
  }
  if (passed) {
    ++t.passed;
    return;
  }
  ++t.failed;
  if (t.counterexamples.size() < limit)
    t.counterexamples.push_back(where + ": " + why);
}

inline bool same_polyline(const ConePolyline& x, const ConePolyline& y) {
  return x.points == y.points;
}

}  // namespace detail

/// Every a-chain with sum <= max_sum_a and every k in K_r(a), running the
/// selected checks. Counterexamples are kept verbatim.
inline SweepResult run_sweep(const SweepOptions& opt) {
  if (opt.max_sum_a < 2 || opt.max_sum_a > kSweepCap)
    throw InvalidInput("max_sum_a must lie in [2, " +
                       std::to_string(kSweepCap) + "]");
  for (const auto& c : opt.checks)
    if (std::find(sweep_check_names().begin(), sweep_check_names().end(), c) ==
        sweep_check_names().end())
      throw InvalidInput("unknown check '" + c + "'");
  SweepResult res;
  res.max_sum_a = opt.max_sum_a;
  const auto want = [&](const char* c) { return opt.checks.count(c) > 0; };
  for (const auto& c : opt.checks) res.checks[c];
  const std::size_t lim = opt.max_counterexamples;

  if (want("catalan")) {
    CheckTally& t = res.checks["catalan"];
    for (int r = 2; r <= opt.max_sum_a; ++r) {
      if (r > kCatalanMaxR) {
        ++t.skipped;
        continue;
      }
      detail::tally(t, lim, "r=" + std::to_string(r), [&](std::string& why) {
        const auto tri = enumerate_triangulations(r + 1);
        std::set<ZeroSequence> ks;
        for (const auto& theta : tri) ks.insert(triangulation_to_k(theta));
        const auto dp = enumerate_zero_sequences(r);
        std::ostringstream os;
        os << "triangulations " << tri.size() << ", distinct k " << ks.size()
           << ", K_r " << dp.size() << ", Catalan " << catalan(r - 1);
        why = os.str();
        return BigInt(tri.size()) == catalan(r - 1) &&
               ks.size() == tri.size() &&
               std::vector<ZeroSequence>(ks.begin(), ks.end()) == dp;
      });
    }
  }

  const bool per_chain =
      want("charts") || want("cone") || want("enumeration") ||
      want("factorization") || want("fan") || want("fingerprint") ||
      want("gram") || want("incidence") || want("milnor") || want("weights");
  if (!per_chain) return res;

  for (const HJSequence& a : enumerate_a_chains(opt.max_sum_a)) {
    ++res.chains;
    const auto [p, q] = pair_of_chain(a);
    const std::string at = "a=" + to_string(a);
    const auto ks = enumerate_K(a);
    res.components += static_cast<std::int64_t>(ks.size());

    if (want("weights"))
      detail::tally(res.checks["weights"], lim, at, [&](std::string&) {
        weights(a, p, q);
        z0_exponents(a);
        return true;
      });
    if (want("cone")) {
      CheckTally& t = res.checks["cone"];
      if (p > opt.oracle_limit) {
        ++t.skipped;
      } else {
        detail::tally(t, lim, at, [&](std::string& why) {
          why = "polyline differs from the hull oracle or duality fails";
          return detail::same_polyline(
                     sigma_polyline(p, q),
                     hull_polyline_oracle(p, q, ConeSide::sigma,
                                          opt.oracle_limit)) &&
                 detail::same_polyline(
                     supplementary_polyline(p, q),
                     hull_polyline_oracle(p, q, ConeSide::supplementary,
                                          opt.oracle_limit)) &&
                 verify_precdual(p, q);
        });
      }
    }
    if (want("enumeration")) {
      CheckTally& t = res.checks["enumeration"];
      if (a.size() > kEnumerationMaxR) {
        ++t.skipped;
      } else {
        detail::tally(t, lim, at, [&](std::string& why) {
          auto brute = enumerate_K_by_triangulations(a);
          std::sort(brute.begin(), brute.end());
          why = "interval recursion and triangulation filter disagree";
          return brute == ks;
        });
      }
    }
    if (want("fingerprint"))
      detail::tally(res.checks["fingerprint"], lim, at, [&](std::string& why) {
        std::set<std::vector<std::int64_t>> seen;
        for (const auto& k : ks)
          seen.insert(
              lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, k)));
        why = "two components share a fingerprint";
        return seen.size() == ks.size();
      });

    for (const auto& k : ks) {
      const std::string where = at + " k=" + to_string(k.values());
      if (want("gram"))
        detail::tally(res.checks["gram"], lim, where, [&](std::string&) {
          gram_from_blocks(a, k);
          return true;
        });
      if (want("incidence") || want("fingerprint") || want("milnor")) {
        const IntegerMatrix cum = cumsum_rows(block_matrix(a, k));
        const auto fp =
            lisca_fingerprint(DiagonalLatticeModel::from_blocks(a, k));
        if (want("incidence"))
          detail::tally(res.checks["incidence"], lim, where,
                        [&](std::string& why) {
                          const auto l = weights_l(a);
                          for (std::size_t i = 0; i < cum.rows(); ++i) {
                            std::int64_t row = 0;
                            for (std::size_t j = 0; j < cum.cols(); ++j) {
                              const BigInt& v = cum(i, j);
                              if (v != 0 && v != 1) {
                                why = "cumD entry outside {0,1}";
                                return false;
                              }
                              row += static_cast<std::int64_t>(v);
                            }
                            if (row != l[i]) {
                              why = "row " + std::to_string(i + 1) +
                                    " of cumD sums to " + std::to_string(row);
                              return false;
                            }
                          }
                          why = "cumD has " + std::to_string(cum.cols()) +
                                " columns";
                          return static_cast<std::int64_t>(cum.cols()) ==
                                 picture_point_count(a, k);
                        });
        if (want("fingerprint"))
          detail::tally(res.checks["fingerprint"], lim, where,
                        [&](std::string& why) {
                          for (std::size_t i = 0; i < a.size(); ++i)
                            if (fp[i] != 2 * (a[i] - k[i])) {
                              why = "fingerprint " + to_string(fp);
                              return false;
                            }
                          why = "recover_k does not invert the fingerprint";
                          return recover_k(a, fp) == k;
                        });
        if (want("milnor"))
          detail::tally(res.checks["milnor"], lim, where, [&](std::string& why) {
            const MilnorNumbers m = milnor_numbers(a, k);
            why = "n - (r - 1) differs from chi";
            return m.n_points - (static_cast<std::int64_t>(a.size()) - 1) ==
                       m.euler_characteristic_fiber &&
                   m.mu == m.euler_characteristic_fiber - 1 &&
                   m.n_points == picture_point_count(a, k);
          });
      }
      if (want("fan"))
        detail::tally(res.checks["fan"], lim, where, [&](std::string&) {
          build_fan(k);
          return true;
        });
      if (want("factorization") || want("charts")) {
        if (p > opt.degree_cap) {
          if (want("factorization")) ++res.checks["factorization"].skipped;
          if (want("charts")) ++res.checks["charts"].skipped;
          continue;
        }
        std::vector<MultiPoly> chain;
        std::string chain_error;
        try {
          chain = deformation_chain(a, k, opt.degree_cap);
        } catch (const std::exception& e) {
          chain_error = e.what();
        }
        const auto with_chain = [&](const char* name,
                                    const std::function<bool(std::string&)>& f) {
          detail::tally(res.checks[name], lim, where, [&](std::string& why) {
            if (!chain_error.empty()) {
              why = chain_error;
              return false;
            }
            return f(why);
          });
        };
        if (want("factorization"))
          with_chain("factorization", [&](std::string& why) {
            for (std::size_t i = 1; i < chain.size(); ++i)
              if (chain[i].divisible_by(Var::z0)) {
                why = "z0 divides P_" + std::to_string(i);
                return false;
              }
            if (!check_specialization(a, chain)) {
              why = "P_i at t = 0 is not z1^{Z_{i-1}}";
              return false;
            }
            if (!check_negative_weight(a, chain)) {
              why = "a monomial exceeds the weight bound";
              return false;
            }
            why = "P_{r+1} differs from the product of factors";
            return verify_factorization(a, k, chain);
          });
        if (want("charts"))
          with_chain("charts", [&](std::string& why) {
            for (std::size_t j = 1; j <= a.size(); ++j) {
              const ChartCheck c = check_chart(a, k, j, chain);
              if (!c.ok()) {
                why = c.failure;
                return false;
              }
              if (indeterminacy_count(a, k, j, chain) != a[j - 1] - k[j - 1]) {
                why = "indeterminacy count";
                return false;
              }
            }
            return true;
          });
      }
    }
  }
  return res;
}

}  // namespace cqs
