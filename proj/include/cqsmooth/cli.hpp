#pragma once

// Command-line front end: expand, components, sweep, fan, poly, classify.
// Exit codes: 0 success, 2 usage or input error, 3 verification failure.

#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cqsmooth/report.hpp"

namespace cqs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitVerify = 3;

namespace detail {

inline BigInt parse_big(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789-+") != std::string::npos)
    throw InvalidInput(std::string(what) + " must be an integer, got '" + s +
                       "'");
  try {
    return BigInt(s);
  } catch (const std::exception&) {
    throw InvalidInput(std::string(what) + " must be an integer, got '" + s +
                       "'");
  }
}

// "1,2,2,1", "(1,2,2,1)" or "[1,2,2,1]".
inline HJSequence parse_sequence(std::string s) {
  for (char& c : s)
    if (c == '(' || c == ')' || c == '[' || c == ']') c = ' ';
  HJSequence out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw InvalidInput("empty sequence entry");
    out.push_back(
        to_int64(parse_big(item.substr(b, e - b + 1), "sequence entry"),
                 "sequence entry"));
  }
  if (out.empty()) throw InvalidInput("empty sequence");
  return out;
}

inline std::string seq_text(const Json& j) {
  std::string s = "(";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) s += ',';
    s += j[i].dump();
  }
  return s + ")";
}

inline std::string json_scalar(const Json& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

inline void print_matrix(std::ostream& out, const Json& m,
                         const std::string& indent, char sep) {
  const auto rows = m["rows"].get<std::size_t>();
  const auto cols = m["cols"].get<std::size_t>();
  for (std::size_t i = 0; i < rows; ++i) {
    out << indent;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out << sep;
      const std::string v = json_scalar(m["data"][i * cols + c]);
      if (sep == ' ' && v.size() < 2) out << ' ';
      out << v;
    }
    out << '\n';
  }
}

// Generic key: value rendering for the human-readable mode.
inline void print_tree(std::ostream& out, const Json& j,
                       const std::string& indent) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out << indent << it.key() << ":\n";
      print_tree(out, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v[0].is_array()) {
      out << indent << it.key() << ":";
      for (const Json& row : v) out << ' ' << seq_text(row);
      out << '\n';
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
      out << indent << it.key() << ":\n";
      for (const Json& e : v) {
        print_tree(out, e, indent + "  - ");
      }
    } else if (v.is_array()) {
      out << indent << it.key() << ": " << seq_text(v) << '\n';
    } else {
      out << indent << it.key() << ": " << json_scalar(v) << '\n';
    }
  }
}

// The matrices displayed for X_{11,4} in the worked example, per k.
inline Json builtin_golden() {
  return Json::parse(R"({
    "p": 11, "q": 4,
    "components": [
      {"k": [1,2,2,1],
       "D": {"rows": 4, "cols": 6, "data": [ 1, 0, 0, 1, 0, 0,
                                            -1, 1, 0, 0, 1, 0,
                                             0,-1, 1, 0, 0, 0,
                                             0, 0,-1, 0, 0, 1]},
       "cumD": {"rows": 4, "cols": 6, "data": [1,0,0,1,0,0,
                                               0,1,0,1,1,0,
                                               0,0,1,1,1,0,
                                               0,0,0,1,1,1]}},
      {"k": [1,3,1,2],
       "D": {"rows": 4, "cols": 5, "data": [ 1, 0, 0, 1, 0,
                                            -1, 1, 1, 0, 0,
                                             0, 0,-1, 0, 1,
                                             0,-1, 1, 0, 0]},
       "cumD": {"rows": 4, "cols": 5, "data": [1,0,0,1,0,
                                               0,1,1,1,0,
                                               0,1,0,1,1,
                                               0,0,1,1,1]}}
    ]})");
}

// Compares the D and cumD of every golden component with the computed one
// up to column permutation. Returns the list of mismatches.
inline std::vector<std::string> compare_golden(const Json& report,
                                               const Json& golden) {
  std::vector<std::string> bad;
  const Json& comps = report["components"];
  if (golden["components"].size() != comps.size())
    bad.push_back("golden has " + std::to_string(golden["components"].size()) +
                  " components, computed " + std::to_string(comps.size()));
  for (const Json& g : golden["components"]) {
    const Json* match = nullptr;
    for (const Json& c : comps)
      if (c["k"] == g["k"]) match = &c;
    if (!match) {
      bad.push_back("k=" + seq_text(g["k"]) + " not computed");
      continue;
    }
    for (const char* key : {"D", "cumD"})
      if (!equal_up_to_column_permutation(matrix_from_json((*match)[key]),
                                          matrix_from_json(g[key])))
        bad.push_back(std::string(key) + " for k=" + seq_text(g["k"]) +
                      " differs beyond column order");
  }
  return bad;
}

inline ZeroSequence component_in(const HJSequence& a, const HJSequence& k) {
  const ZeroSequence z = ZeroSequence::from(k);
  if (z.size() != a.size() || !entrywise_leq(z.values(), a))
    throw InvalidInput("k " + to_string(k) + " is not in K_r(" + to_string(a) +
                       ")");
  return z;
}

}  // namespace detail

struct Options {
  std::string p, q;
  bool json = false, tsv = false;
  bool emit_matrices = false, emit_poly = false, verify = false;
  bool perm_eq = false;
  std::string golden;
  std::int64_t degree_cap = kDefaultDegreeCap;
  std::int64_t oracle_limit = kDefaultOracleLimit;
  int max_sum = 0;
  std::string checks = "gram,incidence,fingerprint";
  std::string k;
  bool respect_order = false;
  std::vector<std::string> compare;
};

inline int cmd_expand(const Options& o, std::ostream& out) {
  const BigInt p = detail::parse_big(o.p, "p"), q = detail::parse_big(o.q, "q");
  require_coprime_pair(p, q);
  Json doc;
  doc["input"] = input_json(p, q);
  const HJSequence a = hj_expand(p, p - q);
  const EdgeData e = edge_data(a);
  doc["edge_data"] = {{"m", to_json(e.m)}, {"n", to_json(e.n)}};
  const ConePolyline sigma = sigma_polyline(p, q);
  const ConePolyline supp = supplementary_polyline(p, q);
  doc["sigma_polyline"] = {{"first", to_json(sigma.points.front())},
                           {"last", to_json(sigma.points.back())},
                           {"points", sigma.points.size()}};
  doc["supplementary_polyline"] = {{"first", to_json(supp.points.front())},
                                   {"last", to_json(supp.points.back())},
                                   {"points", supp.points.size()}};
  bool ok = true;
  if (o.verify) {
    Json checks;
    const bool dual = verify_precdual(p, q);
    checks["precdual"] = dual;
    ok = ok && dual;
    if (p <= o.oracle_limit) {
      const bool s = hull_polyline_oracle(p, q, ConeSide::sigma,
                                          o.oracle_limit).points ==
                     sigma.points;
      const bool t = hull_polyline_oracle(p, q, ConeSide::supplementary,
                                          o.oracle_limit).points ==
                     supp.points;
      checks["hull_oracle"] = s && t;
      ok = ok && s && t;
    } else {
      checks["hull_oracle"] = "skipped";
    }
    doc["checks"] = checks;
  }
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else if (o.tsv) {
    const Json& in = doc["input"];
    for (auto it = in.begin(); it != in.end(); ++it)
      out << it.key() << '\t'
          << (it.value().is_array() ? detail::seq_text(it.value())
                                    : detail::json_scalar(it.value()))
          << '\n';
  } else {
    const Json& in = doc["input"];
    out << "p = " << detail::json_scalar(in["p"])
        << ", q = " << detail::json_scalar(in["q"])
        << ", q' = " << detail::json_scalar(in["q_prime"]) << '\n';
    out << "b = " << detail::seq_text(in["b"]) << '\n';
    out << "a = " << detail::seq_text(in["a"]) << '\n';
    out << "edge data m = " << detail::seq_text(doc["edge_data"]["m"])
        << ", n = " << detail::seq_text(doc["edge_data"]["n"]) << '\n';
    out << "sigma polyline " << detail::seq_text(doc["sigma_polyline"]["first"])
        << " .. " << detail::seq_text(doc["sigma_polyline"]["last"]) << '\n';
    out << "supplementary polyline "
        << detail::seq_text(doc["supplementary_polyline"]["first"]) << " .. "
        << detail::seq_text(doc["supplementary_polyline"]["last"]) << '\n';
    if (o.verify) detail::print_tree(out, {{"checks", doc["checks"]}}, "");
  }
  return ok ? kExitOk : kExitVerify;
}

inline int cmd_components(const Options& o, std::ostream& out,
                          std::ostream& err) {
  const BigInt p = detail::parse_big(o.p, "p"), q = detail::parse_big(o.q, "q");
  require_coprime_pair(p, q);
  const HJSequence a = hj_expand(p, p - q);
  ComponentOptions copt;
  copt.emit_poly = o.emit_poly;
  copt.verify = o.verify;
  copt.degree_cap = o.degree_cap;
  if ((o.emit_poly || o.verify) && p > o.degree_cap)
    throw InvalidInput("p = " + to_string(p) + " exceeds the degree cap " +
                       std::to_string(o.degree_cap));
  Json doc;
  doc["input"] = input_json(p, q);
  doc["components"] = Json::array();
  std::vector<std::string> failures;
  for (const ZeroSequence& k : enumerate_K(a)) {
    ComponentChecks checks;
    doc["components"].push_back(component_record(a, k, copt, &checks));
    for (const auto& f : checks.failures)
      failures.push_back("k=" + to_string(k.values()) + " " + f);
  }
  if (o.perm_eq) {
    Json golden;
    if (!o.golden.empty()) {
      std::ifstream in(o.golden);
      if (!in) throw InvalidInput("cannot read golden file " + o.golden);
      try {
        golden = Json::parse(in);
      } catch (const Json::exception& e) {
        throw InvalidInput("malformed golden file: " + std::string(e.what()));
      }
    } else if (p == 11 && q == 4) {
      golden = detail::builtin_golden();
    } else {
      throw InvalidInput("--perm-eq needs --golden FILE for this (p, q)");
    }
    if (golden.contains("p") && (golden["p"] != doc["input"]["p"] ||
                                 golden["q"] != doc["input"]["q"]))
      throw InvalidInput("golden file is for a different (p, q)");
    const auto bad = detail::compare_golden(doc, golden);
    doc["perm_eq"] = {{"matched", bad.empty()}, {"mismatches", bad}};
    for (const auto& b : bad) failures.push_back("perm-eq: " + b);
  }

  if (o.json) {
    out << doc.dump(2) << '\n';
  } else if (o.tsv) {
    for (const Json& c : doc["components"]) {
      const std::string k = detail::seq_text(c["k"]);
      out << "# k=" << k << " D\n";
      detail::print_matrix(out, c["D"], "", '\t');
      out << "# k=" << k << " cumD\n";
      detail::print_matrix(out, c["cumD"], "", '\t');
    }
  } else {
    const Json& in = doc["input"];
    out << "X_{" << detail::json_scalar(in["p"]) << ","
        << detail::json_scalar(in["q"]) << "}: a = " << detail::seq_text(in["a"])
        << ", " << doc["components"].size() << " component(s)\n";
    for (const Json& c : doc["components"]) {
      out << "k = " << detail::seq_text(c["k"]) << "  n = " << c["n"]
          << "  mu = " << c["mu"]
          << "  fingerprint = " << detail::seq_text(c["fingerprint"]) << '\n';
      out << "  l = " << detail::seq_text(c["l"]) << '\n';
      out << "  fan rays:";
      for (const Json& u : c["fan_rays"]) out << ' ' << detail::seq_text(u);
      out << '\n';
      if (o.emit_matrices) {
        out << "  D =\n";
        detail::print_matrix(out, c["D"], "    ", ' ');
        out << "  cumD =\n";
        detail::print_matrix(out, c["cumD"], "    ", ' ');
      }
      if (!c["factorization_ok"].is_null())
        out << "  factorization: "
            << (c["factorization_ok"].get<bool>() ? "ok" : "FAILED") << '\n';
      if (c.contains("poly")) {
        const Json& poly = c["poly"];
        for (std::size_t i = 0; i < poly["P"].size(); ++i)
          out << "  P_" << i << " = " << poly["P"][i].get<std::string>()
              << '\n';
      }
      if (c.contains("checks"))
        for (auto it = c["checks"].begin(); it != c["checks"].end(); ++it)
          out << "  check " << it.key() << ": "
              << (it.value().get<bool>() ? "pass" : "FAIL") << '\n';
    }
    if (doc.contains("perm_eq"))
      out << "perm-eq against displayed matrices: "
          << (doc["perm_eq"]["matched"].get<bool>() ? "match" : "MISMATCH")
          << '\n';
  }
  for (const auto& f : failures) err << "verification failed: " << f << '\n';
  return failures.empty() ? kExitOk : kExitVerify;
}

inline int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  SweepOptions s;
  s.max_sum_a = o.max_sum;
  s.degree_cap = o.degree_cap;
  s.oracle_limit = o.oracle_limit;
  for (const auto& c : CLI::detail::split(o.checks, ',')) {
    const std::string name = CLI::detail::trim_copy(c);
    if (name == "all") {
      for (const auto& n : sweep_check_names()) s.checks.insert(n);
    } else if (!name.empty()) {
      s.checks.insert(name);
    }
  }
  if (s.checks.empty()) throw InvalidInput("no checks selected");
  const SweepResult res = run_sweep(s);
  const Json doc = res.to_json();
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    const char sep = o.tsv ? '\t' : ' ';
    if (o.tsv) out << "check\tpassed\tfailed\tskipped\n";
    else
      out << "sweep sum(a) <= " << res.max_sum_a << ": " << res.chains
          << " chains, " << res.components << " components\n";
    for (const auto& [name, t] : res.checks) {
      if (o.tsv)
        out << name << sep << t.passed << sep << t.failed << sep << t.skipped
            << '\n';
      else
        out << "  " << name << ": " << t.passed << " passed, " << t.failed
            << " failed, " << t.skipped << " skipped\n";
      for (const auto& c : t.counterexamples)
        (o.tsv ? err : out) << "    counterexample " << name << " " << c
                            << '\n';
    }
  }
  return res.ok() ? kExitOk : kExitVerify;
}

inline int cmd_fan(const Options& o, std::ostream& out) {
  const BigInt p = detail::parse_big(o.p, "p"), q = detail::parse_big(o.q, "q");
  require_coprime_pair(p, q);
  const HJSequence a = hj_expand(p, p - q);
  std::vector<ZeroSequence> ks;
  if (!o.k.empty()) ks.push_back(detail::component_in(a, detail::parse_sequence(o.k)));
  else ks = enumerate_K(a);
  Json doc;
  doc["input"] = input_json(p, q);
  doc["fans"] = Json::array();
  bool ok = true;
  for (const ZeroSequence& k : ks) {
    const Fan fan = build_fan(k);
    Json f;
    f["k"] = to_json(k.values());
    Json rays = Json::array(), dets = Json::array();
    for (std::size_t j = 0; j < fan.rays.size(); ++j) {
      rays.push_back(to_json(fan.rays[j]));
      dets.push_back(
          to_json(det(fan.rays[j], fan.rays[(j + 1) % fan.rays.size()])));
    }
    f["rays"] = rays;
    f["adjacent_det"] = dets;
    const ChartExponentTable m(a, k);
    IntegerMatrix table(a.size() + 1, a.size() + 1);
    for (std::size_t i = 1; i <= a.size() + 1; ++i)
      for (std::size_t j = 1; j <= a.size() + 1; ++j) table(i - 1, j - 1) = m(i, j);
    f["chart_exponents"] = to_json(table);
    if (o.verify) {
      if (p > o.degree_cap)
        throw InvalidInput("p = " + to_string(p) + " exceeds the degree cap " +
                           std::to_string(o.degree_cap));
      const auto chain = deformation_chain(a, k, o.degree_cap);
      Json charts = Json::array(), counts = Json::array();
      for (std::size_t j = 1; j <= a.size(); ++j) {
        const ChartCheck c = check_chart(a, k, j, chain);
        charts.push_back(c.ok());
        ok = ok && c.ok();
        counts.push_back(c.ok() ? Json(indeterminacy_count(a, k, j, chain))
                                : Json(nullptr));
      }
      f["charts_ok"] = charts;
      f["indeterminacy_counts"] = counts;
    }
    doc["fans"].push_back(f);
  }
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    for (const Json& f : doc["fans"]) {
      out << "k = " << detail::seq_text(f["k"]) << '\n';
      out << "  rays:";
      for (const Json& u : f["rays"]) out << ' ' << detail::seq_text(u);
      out << "\n  adjacent det: " << detail::seq_text(f["adjacent_det"]) << '\n';
      if (o.emit_matrices || o.tsv) {
        out << "  chart exponents m_i^(j):\n";
        detail::print_matrix(out, f["chart_exponents"], o.tsv ? "" : "    ",
                             o.tsv ? '\t' : ' ');
      }
      if (f.contains("charts_ok")) {
        out << "  charts ok: " << detail::seq_text(f["charts_ok"]) << '\n';
        out << "  indeterminacy counts: "
            << detail::seq_text(f["indeterminacy_counts"]) << '\n';
      }
    }
  }
  return ok ? kExitOk : kExitVerify;
}

inline int cmd_poly(const Options& o, std::ostream& out) {
  const BigInt p = detail::parse_big(o.p, "p"), q = detail::parse_big(o.q, "q");
  require_coprime_pair(p, q);
  if (p > o.degree_cap)
    throw InvalidInput("p = " + to_string(p) + " exceeds the degree cap " +
                       std::to_string(o.degree_cap));
  const HJSequence a = hj_expand(p, p - q);
  std::vector<ZeroSequence> ks;
  if (!o.k.empty()) ks.push_back(detail::component_in(a, detail::parse_sequence(o.k)));
  else ks = enumerate_K(a);
  Json doc;
  doc["input"] = input_json(p, q);
  doc["weights"] = to_json(weights(a, p, q).w);
  doc["z0_exponents"] = to_json(z0_exponents(a));
  doc["chains"] = Json::array();
  bool ok = true;
  for (const ZeroSequence& k : ks) {
    const auto chain = deformation_chain(a, k, o.degree_cap);
    Json c;
    c["k"] = to_json(k.values());
    Json ps = Json::array();
    for (const MultiPoly& pi : chain) ps.push_back(pi.to_string());
    c["P"] = ps;
    c["factorization_ok"] = nullptr;
    if (o.verify) {
      const bool f = verify_factorization(a, k, chain) &&
                     check_specialization(a, chain) &&
                     check_negative_weight(a, chain);
      c["factorization_ok"] = f;
      ok = ok && f;
    }
    doc["chains"].push_back(c);
  }
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << "weights w = " << detail::seq_text(doc["weights"]) << '\n';
    out << "z0 exponents E_2.. = " << detail::seq_text(doc["z0_exponents"])
        << '\n';
    for (const Json& c : doc["chains"]) {
      out << "k = " << detail::seq_text(c["k"]) << '\n';
      for (std::size_t i = 0; i < c["P"].size(); ++i)
        out << (o.tsv ? "" : "  ") << "P_" << i << (o.tsv ? "\t" : " = ")
            << c["P"][i].get<std::string>() << '\n';
      if (!c["factorization_ok"].is_null())
        out << "  factorization: "
            << (c["factorization_ok"].get<bool>() ? "ok" : "FAILED") << '\n';
    }
  }
  return ok ? kExitOk : kExitVerify;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  const BigInt p = detail::parse_big(o.p, "p");
  if (p < 2) throw InvalidInput("p must be >= 2");
  Json doc;
  doc["p"] = to_json(p);
  doc["respect_order"] = o.respect_order;
  if (!o.compare.empty()) {
    if (o.compare.size() != 4)
      throw InvalidInput("--compare takes Q1 K1 Q2 K2");
    const auto make = [&](const std::string& qs, const std::string& ks) {
      const BigInt q = detail::parse_big(qs, "q");
      require_coprime_pair(p, q);
      return FillingDescriptor::make(
          p, q, ZeroSequence::from(detail::parse_sequence(ks)));
    };
    const FillingDescriptor d1 = make(o.compare[0], o.compare[1]);
    const FillingDescriptor d2 = make(o.compare[2], o.compare[3]);
    const bool eq = classify(d1, d2, o.respect_order);
    doc["equivalent"] = eq;
    if (o.json) out << doc.dump(2) << '\n';
    else out << (eq ? "equivalent" : "not equivalent") << '\n';
    return kExitOk;
  }
  // All descriptors (q, k), grouped into classes; each class is listed once,
  // starting from its smallest member.
  std::vector<FillingDescriptor> all;
  for (BigInt q = 1; q < p; ++q) {
    if (gcd(p, q) != 1) continue;
    for (const ZeroSequence& k : enumerate_K(hj_expand(p, p - q)))
      all.push_back(FillingDescriptor::make(p, q, k));
  }
  std::vector<bool> used(all.size(), false);
  Json classes = Json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (used[i]) continue;
    Json cls = Json::array();
    for (std::size_t j = i; j < all.size(); ++j)
      if (!used[j] && classify(all[i], all[j], o.respect_order)) {
        used[j] = true;
        cls.push_back({{"q", to_json(all[j].q)}, {"k", to_json(all[j].k.values())}});
      }
    classes.push_back(cls);
  }
  doc["classes"] = classes;
  doc["descriptors"] = all.size();
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << all.size() << " fillings (q, k) of L(" << to_string(p) << ", q), "
        << classes.size() << " classes "
        << (o.respect_order ? "with" : "without") << " order\n";
    for (const Json& cls : classes) {
      out << " ";
      for (const Json& d : cls)
        out << " (" << detail::json_scalar(d["q"]) << ", "
            << detail::seq_text(d["k"]) << ")";
      out << '\n';
    }
  }
  return kExitOk;
}

/// Parses argv and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Smoothing components of cyclic quotient surface singularities"};
  app.require_subcommand(1, 1);
  Options o;
  const auto add_pair = [&](CLI::App* sub) {
    sub->add_option("p", o.p, "numerator p")->required();
    sub->add_option("q", o.q, "0 < q < p, coprime to p")->required();
  };
  const auto add_format = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "single JSON document");
    sub->add_flag("--tsv", o.tsv, "tab-separated output");
  };

  CLI::App* expand = app.add_subcommand("expand", "continued fractions of p/q");
  add_pair(expand);
  add_format(expand);
  expand->add_flag("--verify", o.verify, "check cone duality and the hull oracle");
  expand->add_option("--oracle-limit", o.oracle_limit, "largest p for the hull oracle");

  CLI::App* comps = app.add_subcommand("components", "one record per k in K_r(a)");
  add_pair(comps);
  add_format(comps);
  comps->add_flag("--emit-matrices", o.emit_matrices, "print D and cumD");
  comps->add_flag("--emit-poly", o.emit_poly, "emit the polynomial chain");
  comps->add_flag("--verify", o.verify, "run gram, incidence, fingerprint, factorization and fan checks");
  comps->add_flag("--perm-eq", o.perm_eq, "compare D and cumD with displayed matrices up to column order");
  comps->add_option("--golden", o.golden, "golden JSON for --perm-eq");
  comps->add_option("--degree-cap", o.degree_cap, "largest p for polynomial work");

  CLI::App* sweep = app.add_subcommand("sweep", "exhaustive checks over sum(a) <= N");
  sweep->add_option("max_sum_a", o.max_sum, "bound on sum(a)")->required();
  add_format(sweep);
  sweep->add_option("--checks", o.checks,
                    "comma list of: all, " + [] {
                      std::string s;
                      for (const auto& n : sweep_check_names())
                        s += (s.empty() ? "" : ", ") + n;
                      return s;
                    }());
  sweep->add_option("--degree-cap", o.degree_cap, "largest p for polynomial work");
  sweep->add_option("--oracle-limit", o.oracle_limit, "largest p for the hull oracle");

  CLI::App* fan = app.add_subcommand("fan", "fans F_k and chart exponents");
  add_pair(fan);
  add_format(fan);
  fan->add_option("--k", o.k, "a single k, e.g. 1,2,2,1");
  fan->add_flag("--emit-matrices", o.emit_matrices, "print the chart exponent table");
  fan->add_flag("--verify", o.verify, "check the chart pull-backs");
  fan->add_option("--degree-cap", o.degree_cap, "largest p for polynomial work");

  CLI::App* poly = app.add_subcommand("poly", "deformation polynomials P_i");
  add_pair(poly);
  add_format(poly);
  poly->add_option("--k", o.k, "a single k, e.g. 1,2,2,1");
  poly->add_flag("--verify", o.verify, "check the factorization of P_{r+1}");
  poly->add_option("--degree-cap", o.degree_cap, "largest p for polynomial work");

  CLI::App* cls = app.add_subcommand("classify", "fillings of L(p, q) up to diffeomorphism");
  cls->add_option("p", o.p, "order of the lens space")->required();
  add_format(cls);
  cls->add_flag("--respect-order", o.respect_order, "classify with order");
  cls->add_option("--compare", o.compare, "Q1 K1 Q2 K2: compare two descriptors")
      ->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (o.json && o.tsv) {
    err << "error: --json and --tsv are exclusive\n";
    return kExitInput;
  }
  try {
    if (expand->parsed()) return cmd_expand(o, out);
    if (comps->parsed()) return cmd_components(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (fan->parsed()) return cmd_fan(o, out);
    if (poly->parsed()) return cmd_poly(o, out);
    if (cls->parsed()) return cmd_classify(o, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitInput;
}

}  // namespace cqs::cli
