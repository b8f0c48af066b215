#pragma once
// The obstruction engine: Alexander divisibility, the double-branched-cover
// exact-sequence test, the Levine-Tristram signature inequalities, and the
// metabelian twisted-polynomial comparison, aggregated per ordered pair with
// machine-checkable witnesses.

#include "ribcon/linkform.hpp"
#include "ribcon/twisted.hpp"

#include <json.hpp>

#include <atomic>
#include <optional>
#include <thread>

namespace ribcon {

using json = nlohmann::ordered_json;

enum class Verdict { Obstructed, NotObstructed, Inconclusive };

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Obstructed: return "Obstructed";
    case Verdict::NotObstructed: return "NotObstructed";
    default: return "Inconclusive";
  }
}

inline std::optional<Verdict> verdict_from(const std::string& s) {
  if (s == "Obstructed") return Verdict::Obstructed;
  if (s == "NotObstructed") return Verdict::NotObstructed;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  return std::nullopt;
}

struct KnotRecord {
  std::string name;
  SeifertMatrix seifert;
  std::optional<PDCode> pd;

  // cached invariants
  ZPoly delta;
  Int det = 1;
  AbelianGroup double_cover;
  PrimaryPartition primary;
  SignatureProfile profile;

  KnotRecord() = default;
  KnotRecord(std::string nm, SeifertMatrix v, std::optional<PDCode> code = std::nullopt)
      : name(std::move(nm)), seifert(std::move(v)), pd(std::move(code)) {
    delta = alexander_poly(seifert);
    det = knot_determinant(seifert);
    double_cover = double_cover_homology(seifert);
    primary = double_cover.is_trivial() ? PrimaryPartition{} : primary_decomposition(double_cover);
    profile = signature_profile(seifert);
    if (pd) {
      ZPoly from_pd = alexander_poly_from_pd(*pd);
      if (!assoc_eq(from_pd, delta))
        throw std::domain_error("KnotRecord " + name +
                                ": PD code and Seifert matrix disagree on the Alexander polynomial");
    }
  }

  KnotRecord concordance_inverse(const std::string& new_name) const {
    return KnotRecord(new_name, seifert.concordance_inverse());
  }
};

inline KnotRecord connected_sum(const std::string& name, const KnotRecord& a,
                                const KnotRecord& b) {
  SeifertMatrix v = SeifertMatrix::connected_sum(a.seifert, b.seifert);
  std::optional<PDCode> pd;
  if (a.pd && b.pd && !a.pd->crossings.empty() && !b.pd->crossings.empty())
    pd = pd_connected_sum(*a.pd, *b.pd);
  return KnotRecord(name, v, pd);
}

struct TestOutcome {
  Verdict verdict = Verdict::Inconclusive;
  json witness;  // machine-checkable data
  std::string notes;
};

struct ObstructionOptions {
  bool alexander = true;
  bool double_cover = true;
  bool signature = true;
  bool metabelian = false;
  int r = 2;
  long long p = 3;
  bool metabelian_applicable = false;  // caller-asserted hypothesis
  long long group_order_cap = 2000;
};

struct ObstructionReport {
  std::string j_name, k_name;
  std::vector<std::pair<std::string, TestOutcome>> tests;
  Verdict aggregate = Verdict::NotObstructed;
};

// ---- individual tests ----

// Obstructed iff Delta_K does not divide Delta_J.
inline TestOutcome alexander_obstruction(const KnotRecord& j, const KnotRecord& k) {
  TestOutcome out;
  bool div = divides(k.delta, j.delta);
  out.verdict = div ? Verdict::NotObstructed : Verdict::Obstructed;
  out.witness = json{{"delta_j", to_string(j.delta)},
                     {"delta_k", to_string(k.delta)},
                     {"divides", div}};
  return out;
}

namespace detail {
inline json partition_json(const Partition& p) {
  json a = json::array();
  for (int x : p) a.push_back(x);
  return a;
}
inline Partition partition_from_json(const json& a) {
  Partition p;
  for (auto& v : a) p.push_back(v.get<int>());
  return p;
}
}  // namespace detail

// Per prime p dividing det(J) * det(K): feasible iff some cokernel type nu of
// an embedding H_1(Sigma_{K,2})_p -> H_1(Sigma_{J,2})_p admits the square
// extension 0 -> G -> W -> G -> 0.
inline TestOutcome double_cover_obstruction(const KnotRecord& j, const KnotRecord& k) {
  TestOutcome out;
  json primes = json::array();
  // fast necessary checks
  bool det_divides = (j.det % k.det == 0);
  bool quotient_square = det_divides && is_perfect_square(j.det / k.det);
  std::optional<Int> bad_prime;
  json bad_detail;
  std::set<Int> prime_set;
  for (auto& [p, e] : factorize(j.det * k.det)) prime_set.insert(p);
  for (auto& p : prime_set) {
    Partition lj = j.primary.count(p) ? j.primary.at(p) : Partition{};
    Partition lk = k.primary.count(p) ? k.primary.at(p) : Partition{};
    auto types = embedding_cokernel_types(lj, lk);
    bool feasible = false;
    json tried = json::array();
    for (auto& nu : types) {
      bool sq = square_extension_exists(nu);
      tried.push_back(json{{"nu", detail::partition_json(nu)}, {"square_extension", sq}});
      if (sq) feasible = true;
    }
    json entry{{"p", p.get_str()},
               {"lambda_j", detail::partition_json(lj)},
               {"lambda_k", detail::partition_json(lk)},
               {"cokernel_types", tried},
               {"feasible", feasible}};
    primes.push_back(entry);
    if (!feasible && !bad_prime) {
      bad_prime = p;
      bad_detail = entry;
    }
  }
  out.witness = json{{"det_j", j.det.get_str()},
                     {"det_k", k.det.get_str()},
                     {"det_divides", det_divides},
                     {"quotient_square", quotient_square},
                     {"primes", primes}};
  if (bad_prime) {
    out.verdict = Verdict::Obstructed;
    out.witness["failing_prime"] = bad_prime->get_str();
  } else {
    out.verdict = Verdict::NotObstructed;
  }
  return out;
}

namespace detail {

struct SigPoint {
  double x;
  int deg_j, eta_j, sig_j;
  int deg_k, eta_k, sig_k;
  bool shaky = false;
};

inline SigPoint signature_data_at(const KnotRecord& j, const KnotRecord& k, double x) {
  SigPoint pt;
  pt.x = x;
  auto sj = signature_nullity(j.seifert, x);
  auto sk = signature_nullity(k.seifert, x);
  pt.sig_j = sj.sigma;
  pt.sig_k = sk.sigma;
  pt.eta_j = sj.eta;
  pt.eta_k = sk.eta;
  pt.shaky = sj.near_threshold || sk.near_threshold;
  pt.deg_j = j.delta.is_zero() ? 0 : circle_root_multiplicity(j.delta, x);
  pt.deg_k = k.delta.is_zero() ? 0 : circle_root_multiplicity(k.delta, x);
  if (auto zeta = rational_cos_minpoly(x)) {
    // exact eta via the zeta-adic elementary divisors
    auto bj = zeta_elementary_divisors(j.seifert, *zeta);
    auto bk = zeta_elementary_divisors(k.seifert, *zeta);
    int ej = 0, ek = 0;
    for (auto& [v, c] : bj) ej += c;
    for (auto& [v, c] : bk) ek += c;
    pt.eta_j = ej;
    pt.eta_k = ek;
  }
  return pt;
}

}  // namespace detail

// Checks deg_x(J) - deg_x(K) >= eta_x(J) - eta_x(K) >= |sigma_x(J) -
// sigma_x(K)| at every shared jump candidate, and sigma equality on the open
// arcs between candidates.
inline TestOutcome signature_obstruction(const KnotRecord& j, const KnotRecord& k) {
  TestOutcome out;
  std::vector<double> xs;
  if (j.seifert.size() > 0)
    for (auto& [x, m] : unit_circle_roots(j.delta)) xs.push_back(x);
  if (k.seifert.size() > 0)
    for (auto& [x, m] : unit_circle_roots(k.delta)) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
           xs.end());
  json points = json::array();
  bool shaky_violation = false;
  std::optional<json> violation;
  for (double x : xs) {
    auto pt = detail::signature_data_at(j, k, x);
    json pj{{"x", x},
            {"deg_j", pt.deg_j},
            {"deg_k", pt.deg_k},
            {"eta_j", pt.eta_j},
            {"eta_k", pt.eta_k},
            {"sigma_j", pt.sig_j},
            {"sigma_k", pt.sig_k}};
    bool first_ok = (pt.deg_j - pt.deg_k) >= (pt.eta_j - pt.eta_k);
    bool second_ok = (pt.eta_j - pt.eta_k) >= std::abs(pt.sig_j - pt.sig_k);
    pj["first_inequality"] = first_ok;
    pj["second_inequality"] = second_ok;
    points.push_back(pj);
    if ((!first_ok || !second_ok) && !violation) {
      pj["violated"] = !first_ok ? "first" : "second";
      violation = pj;
      if (pt.shaky) shaky_violation = true;
    }
  }
  // sigma must agree on arcs (deg = eta = 0 there)
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double x : xs) cuts.push_back(x);
  cuts.push_back(2.0);
  json arcs = json::array();
  for (size_t i = 0; i + 1 < cuts.size(); i++) {
    double mid = (cuts[i] + cuts[i + 1]) / 2;
    auto sj = signature_nullity(j.seifert, mid);
    auto sk = signature_nullity(k.seifert, mid);
    json aj{{"x", mid}, {"sigma_j", sj.sigma}, {"sigma_k", sk.sigma}};
    arcs.push_back(aj);
    if (sj.sigma != sk.sigma && !violation) {
      aj["violated"] = "arc_sigma_equality";
      violation = aj;
      if (sj.near_threshold || sk.near_threshold) shaky_violation = true;
    }
  }
  out.witness = json{{"points", points}, {"arcs", arcs}};
  if (violation) {
    out.witness["violation"] = *violation;
    if (shaky_violation) {
      out.verdict = Verdict::Inconclusive;
      out.notes = "numeric signature within 10x of the zero threshold; no exact fallback";
    } else {
      out.verdict = Verdict::Obstructed;
    }
  } else {
    out.verdict = Verdict::NotObstructed;
  }
  return out;
}

// Twisted-polynomial comparison for the metabelian representations; the
// applicability hypothesis (isomorphic metabelian quotients) is asserted by
// the caller and recorded.
inline TestOutcome metabelian_comparison(const KnotRecord& j, const KnotRecord& k, int r,
                                         long long p, bool applicable,
                                         long long group_order_cap = 2000) {
  TestOutcome out;
  if (!j.pd || !k.pd) {
    out.verdict = Verdict::Inconclusive;
    out.notes = "metabelian test requires PD codes for both knots";
    return out;
  }
  try {
    Presentation pj = wirtinger_from_pd(*j.pd);
    Presentation pk = wirtinger_from_pd(*k.pd);
    ZPoly dj = delta_rp(pj, r, p, group_order_cap);
    ZPoly dk = delta_rp(pk, r, p, group_order_cap);
    bool div = divides(dk, dj);
    out.witness = json{{"r", r},
                       {"p", p},
                       {"delta_rp_j", to_string(dj)},
                       {"delta_rp_k", to_string(dk)},
                       {"divides", div},
                       {"applicability_asserted", applicable}};
    if (div)
      out.verdict = Verdict::NotObstructed;
    else if (applicable)
      out.verdict = Verdict::Obstructed;
    else {
      out.verdict = Verdict::Inconclusive;
      out.notes = "divisibility fails but the applicability hypothesis was not asserted";
    }
  } catch (const std::exception& e) {
    out.verdict = Verdict::Inconclusive;
    out.notes = std::string("computation aborted: ") + e.what();
  }
  return out;
}

inline ObstructionReport full_report(const KnotRecord& j, const KnotRecord& k,
                                     const ObstructionOptions& opt = {}) {
  ObstructionReport rep;
  rep.j_name = j.name;
  rep.k_name = k.name;
  if (opt.alexander) rep.tests.push_back({"alexander", alexander_obstruction(j, k)});
  if (opt.double_cover) rep.tests.push_back({"double_cover", double_cover_obstruction(j, k)});
  if (opt.signature) rep.tests.push_back({"signature", signature_obstruction(j, k)});
  if (opt.metabelian)
    rep.tests.push_back({"metabelian", metabelian_comparison(j, k, opt.r, opt.p,
                                                             opt.metabelian_applicable,
                                                             opt.group_order_cap)});
  rep.aggregate = Verdict::NotObstructed;
  for (auto& [name, t] : rep.tests)
    if (t.verdict == Verdict::Obstructed) rep.aggregate = Verdict::Obstructed;
  return rep;
}

inline json report_to_json(const ObstructionReport& rep) {
  json tests = json::object();
  for (auto& [name, t] : rep.tests) {
    json tj{{"verdict", verdict_str(t.verdict)}};
    if (!t.witness.is_null()) tj["witness"] = t.witness;
    if (!t.notes.empty()) tj["notes"] = t.notes;
    tests[name] = tj;
  }
  return json{{"j", rep.j_name},
              {"k", rep.k_name},
              {"aggregate", verdict_str(rep.aggregate)},
              {"tests", tests}};
}

inline std::string report_to_text(const ObstructionReport& rep) {
  std::string s = rep.j_name + " >= " + rep.k_name + " : " + verdict_str(rep.aggregate) + "\n";
  for (auto& [name, t] : rep.tests) {
    s += "  " + name + ": " + verdict_str(t.verdict);
    if (!t.notes.empty()) s += " (" + t.notes + ")";
    s += "\n";
  }
  return s;
}

// All ordered pairs, deterministically sorted by name; optional parallelism
// with a result layout independent of the worker count.
inline json scan_table(const std::vector<KnotRecord>& records, const ObstructionOptions& opt,
                       int jobs = 1) {
  std::vector<const KnotRecord*> sorted;
  for (auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const KnotRecord* a, const KnotRecord* b) { return a->name < b->name; });
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < sorted.size(); i++)
    for (size_t j2 = 0; j2 < sorted.size(); j2++)
      if (i != j2) pairs.push_back({(int)i, (int)j2});
  std::vector<ObstructionReport> reports(pairs.size());
  std::vector<std::string> errors(pairs.size());
  auto work = [&](int tid, int nthreads) {
    for (size_t ix = tid; ix < pairs.size(); ix += nthreads) {
      try {
        reports[ix] = full_report(*sorted[pairs[ix].first], *sorted[pairs[ix].second], opt);
      } catch (const std::exception& e) {
        errors[ix] = e.what();
        reports[ix].j_name = sorted[pairs[ix].first]->name;
        reports[ix].k_name = sorted[pairs[ix].second]->name;
        reports[ix].aggregate = Verdict::Inconclusive;
      }
    }
  };
  if (jobs <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; t++) threads.emplace_back(work, t, jobs);
    for (auto& t : threads) t.join();
  }
  json out;
  out["schema"] = 1;
  json jpairs = json::array();
  std::map<std::string, int> killed_by;
  int obstructed = 0;
  for (size_t ix = 0; ix < pairs.size(); ix++) {
    json pj = report_to_json(reports[ix]);
    if (!errors[ix].empty()) pj["error"] = errors[ix];
    jpairs.push_back(pj);
    if (reports[ix].aggregate == Verdict::Obstructed) {
      obstructed++;
      for (auto& [name, t] : reports[ix].tests)
        if (t.verdict == Verdict::Obstructed) killed_by[name]++;
    }
  }
  out["pairs"] = jpairs;
  json summary;
  summary["pair_count"] = (int)pairs.size();
  summary["obstructed"] = obstructed;
  json kb = json::object();
  for (auto& [name, c] : killed_by) kb[name] = c;
  summary["obstructed_by_test"] = kb;
  out["summary"] = summary;
  return out;
}

// Re-verifies the machine-checkable parts of a report against the records.
inline bool verify_report_witnesses(const json& rep, const KnotRecord& j, const KnotRecord& k) {
  if (!rep.contains("tests")) return false;
  for (auto& [name, t] : rep["tests"].items()) {
    std::string verdict = t["verdict"].get<std::string>();
    if (verdict != "Obstructed") continue;
    const json& w = t["witness"];
    if (name == "alexander") {
      auto dj = parse_laurent_int(w["delta_j"].get<std::string>());
      auto dk = parse_laurent_int(w["delta_k"].get<std::string>());
      if (!dj || !dk) return false;
      if (!assoc_eq(*dj, j.delta) || !assoc_eq(*dk, k.delta)) return false;
      if (divides(*dk, *dj)) return false;
    } else if (name == "double_cover") {
      Int p(w["failing_prime"].get<std::string>());
      Partition lj = j.primary.count(p) ? j.primary.at(p) : Partition{};
      Partition lk = k.primary.count(p) ? k.primary.at(p) : Partition{};
      for (auto& nu : embedding_cokernel_types(lj, lk))
        if (square_extension_exists(nu)) return false;
    } else if (name == "signature") {
      const json& v = w["violation"];
      if (v.contains("violated") && v["violated"] == "arc_sigma_equality") {
        double x = v["x"].get<double>();
        if (signature_nullity(j.seifert, x).sigma == signature_nullity(k.seifert, x).sigma)
          return false;
      } else {
        double x = v["x"].get<double>();
        auto pt = detail::signature_data_at(j, k, x);
        bool first_ok = (pt.deg_j - pt.deg_k) >= (pt.eta_j - pt.eta_k);
        bool second_ok = (pt.eta_j - pt.eta_k) >= std::abs(pt.sig_j - pt.sig_k);
        if (first_ok && second_ok) return false;
      }
    } else if (name == "metabelian") {
      auto dj = parse_laurent_int(w["delta_rp_j"].get<std::string>());
      auto dk = parse_laurent_int(w["delta_rp_k"].get<std::string>());
      if (!dj || !dk) return false;
      if (divides(*dk, *dj)) return false;
    }
  }
  return true;
}

}  // namespace ribcon
