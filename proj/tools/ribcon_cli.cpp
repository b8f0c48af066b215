// Command-line front end: knot-table ingestion, invariant printing, pairwise
// obstruction runs, table scans, metabelian polynomials and the q-power
// satellite family.
//
// Exit codes: 0 success (verdicts are data, not errors), 1 usage, 2 data.

#include "ribcon/knotio.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace ribcon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Loaded {
  std::vector<KnotRecord> records;
};

int load_or_die(const std::string& path, Loaded& out, bool tolerate_bad_records = false) {
  TableLoadResult res = load_table_file(path);
  for (auto& e : res.errors) std::cerr << "warning: " << path << ": " << e << "\n";
  if (!res.errors.empty() && !tolerate_bad_records) return kExitData;
  if (res.records.empty()) {
    std::cerr << "error: no valid records in " << path << "\n";
    return kExitData;
  }
  out.records = std::move(res.records);
  return kExitOk;
}

const KnotRecord* need(const Loaded& t, const std::string& name) {
  const KnotRecord* r = find_record(t.records, name);
  if (!r) std::cerr << "error: no knot named '" << name << "' in the table\n";
  return r;
}

ObstructionOptions parse_tests(const std::string& tests, int r, long long p, bool applicable,
                               bool& ok) {
  ObstructionOptions opt;
  opt.r = r;
  opt.p = p;
  opt.metabelian_applicable = applicable;
  ok = true;
  if (tests.empty()) return opt;
  opt.alexander = opt.double_cover = opt.signature = opt.metabelian = false;
  std::istringstream in(tests);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok == "alexander")
      opt.alexander = true;
    else if (tok == "double")
      opt.double_cover = true;
    else if (tok == "signature")
      opt.signature = true;
    else if (tok == "metabelian")
      opt.metabelian = true;
    else if (tok == "all") {
      opt.alexander = opt.double_cover = opt.signature = opt.metabelian = true;
    } else {
      std::cerr << "error: unknown test '" << tok << "'\n";
      ok = false;
    }
  }
  return opt;
}

int cmd_invariants(const std::string& file, const std::string& name) {
  Loaded t;
  if (int rc = load_or_die(file, t)) return rc;
  const KnotRecord* k = need(t, name);
  if (!k) return kExitData;
  std::cout << "knot:          " << k->name << "\n";
  std::cout << "genus bound:   " << k->seifert.size() / 2 << "\n";
  std::cout << "alexander:     " << to_string(k->delta) << "\n";
  std::cout << "determinant:   " << k->det.get_str() << "\n";
  std::cout << "H1(Sigma_2):   " << k->double_cover.str() << "\n";
  for (int r = 2; r <= 6; r++) {
    Int o = k->seifert.size() ? branched_cover_order(k->seifert, r) : Int(1);
    std::cout << "|H1(Sigma_" << r << ")|: " << (o == 0 ? std::string("infinite") : o.get_str())
              << "\n";
  }
  std::cout << "signature profile:\n";
  auto& pr = k->profile;
  for (size_t i = 0; i < pr.arc_sigma.size(); i++) {
    std::cout << "  arc sigma = " << pr.arc_sigma[i] << "  (sampled at x = " << pr.arc_samples[i]
              << ")\n";
    if (i < pr.jumps.size()) {
      auto& j = pr.jumps[i];
      std::cout << "  jump x = " << j.x << ": deg = " << j.deg << ", eta = " << j.eta
                << ", sigma = " << j.sigma << ", d = " << j.d << "\n";
    }
  }
  if (k->pd) std::cout << "pd:            " << pd_to_string(*k->pd) << "\n";
  return kExitOk;
}

int cmd_obstruct(const std::string& file, const std::string& jname, const std::string& kname,
                 const std::string& tests, int r, long long p, bool both, bool applicable,
                 bool as_json, long long cap) {
  Loaded t;
  if (int rc = load_or_die(file, t)) return rc;
  const KnotRecord* j = need(t, jname);
  const KnotRecord* k = need(t, kname);
  if (!j || !k) return kExitData;
  bool ok = true;
  ObstructionOptions opt = parse_tests(tests, r, p, applicable, ok);
  if (!ok) return kExitUsage;
  opt.group_order_cap = cap;
  auto rep = full_report(*j, *k, opt);
  if (as_json) {
    json out = report_to_json(rep);
    if (both) {
      json arr = json::array();
      arr.push_back(out);
      arr.push_back(report_to_json(full_report(*k, *j, opt)));
      std::cout << json{{"schema", 1}, {"reports", arr}}.dump(2) << "\n";
    } else {
      std::cout << json{{"schema", 1}, {"reports", json::array({out})}}.dump(2) << "\n";
    }
  } else {
    std::cout << report_to_text(rep);
    if (both) std::cout << report_to_text(full_report(*k, *j, opt));
  }
  return kExitOk;
}

int cmd_scan(const std::string& file, const std::string& tests, int r, long long p, int jobs,
             const std::string& output, bool applicable, long long cap) {
  Loaded t;
  if (int rc = load_or_die(file, t, /*tolerate_bad_records=*/true)) return rc;
  if (t.records.size() < 2) std::cerr << "warning: fewer than two records; empty scan\n";
  bool ok = true;
  ObstructionOptions opt = parse_tests(tests, r, p, applicable, ok);
  if (!ok) return kExitUsage;
  opt.group_order_cap = cap;
  json out = scan_table(t.records, opt, jobs);
  std::string text = out.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << output << "\n";
      return kExitData;
    }
    f << text;
    std::cout << "wrote " << output << " (" << out["summary"]["pair_count"] << " pairs, "
              << out["summary"]["obstructed"] << " obstructed)\n";
  }
  return kExitOk;
}

int cmd_metabelian(const std::string& file, const std::string& name, int r, long long p,
                   long long cap) {
  Loaded t;
  if (int rc = load_or_die(file, t)) return rc;
  const KnotRecord* k = need(t, name);
  if (!k) return kExitData;
  if (!k->pd) {
    std::cerr << "error: " << name << " has no PD code; the metabelian polynomial needs one\n";
    return kExitData;
  }
  try {
    Presentation pres = wirtinger_from_pd(*k->pd);
    MetabelianRep mrep = metabelian_rep(pres, r, p, cap);
    std::cout << "knot " << name << ", r = " << r << ", p = " << p << "\n";
    std::cout << "module dimension d = " << mrep.d << ", |Gamma| = " << mrep.group_order << "\n";
    ZPoly d = delta_rp(pres, r, p, cap);
    std::cout << "Delta^{" << r << "," << p << "} = " << to_string(d) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_satellite_family(const std::string& file, const std::string& name, int r, long long p,
                         const std::string& qlist, const std::string& aclass, long long cap) {
  Loaded t;
  if (int rc = load_or_die(file, t)) return rc;
  const KnotRecord* k = need(t, name);
  if (!k) return kExitData;
  if (!k->pd) {
    std::cerr << "error: " << name << " has no PD code\n";
    return kExitData;
  }
  try {
    Presentation pres = wirtinger_from_pd(*k->pd);
    MetabelianRep mrep = metabelian_rep(pres, r, p, cap);
    if (mrep.d == 0) {
      std::cerr << "error: the module is trivial for r = " << r << ", p = " << p
                << "; no nonzero axis class exists\n";
      return kExitData;
    }
    std::vector<long long> a(mrep.d, 0);
    if (aclass.empty()) {
      a[0] = 1;
    } else {
      std::istringstream in(aclass);
      std::string tok;
      size_t i = 0;
      while (std::getline(in, tok, ',')) {
        if (i >= a.size()) {
          std::cerr << "error: A class has more than d = " << mrep.d << " coordinates\n";
          return kExitData;
        }
        a[i++] = std::stoll(tok);
      }
    }
    std::vector<long long> qs;
    {
      std::istringstream in(qlist);
      std::string tok;
      while (std::getline(in, tok, ',')) qs.push_back(std::stoll(tok));
    }
    std::cout << "base knot " << name << ", r = " << r << ", p = " << p << ", d = " << mrep.d
              << "\n";
    std::vector<std::pair<long long, ZPoly>> results;
    for (long long q : qs) {
      auto res = satellite_family_delta(pres, r, p, a, q, cap);
      std::cout << "q = " << q << ": Delta = q^" << res.m_q << " * Delta^{r,p} = "
                << to_string(res.delta) << "\n";
      results.push_back({q, res.delta});
    }
    for (size_t i = 0; i < results.size(); i++)
      for (size_t j = 0; j < results.size(); j++)
        if (i != j) {
          bool div = divides(results[j].second, results[i].second);
          std::cout << "Delta_{q=" << results[j].first << "} | Delta_{q=" << results[i].first
                    << "} : " << (div ? "yes" : "no") << "\n";
        }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knot concordance obstruction toolkit"};
  app.require_subcommand(1);

  std::string file, name, jname, kname, tests, output, qlist = "5,7", aclass;
  int r = 2, jobs = 1;
  long long p = 3, cap = 2000;
  bool both = false, applicable = false, as_json = false;

  auto* inv = app.add_subcommand("invariants", "print classical invariants of one knot");
  inv->add_option("file", file, "knot table (JSON or CSV)")->required();
  inv->add_option("name", name, "knot name")->required();

  auto* obs = app.add_subcommand("obstruct", "run the obstruction tests on an ordered pair");
  obs->add_option("file", file)->required();
  obs->add_option("J", jname, "the larger knot (tests J >= K)")->required();
  obs->add_option("K", kname, "the smaller knot")->required();
  obs->add_option("--tests", tests, "comma list: alexander,double,signature,metabelian,all");
  obs->add_option("--r", r, "cyclic cover degree for the metabelian test");
  obs->add_option("--p", p, "prime for the metabelian test");
  obs->add_option("--cap", cap, "metabelian group order cap");
  obs->add_flag("--both-directions", both, "also test K >= J");
  obs->add_flag("--assert-metabelian-applicable", applicable,
                "affirm the isomorphic-metabelian-quotient hypothesis");
  obs->add_flag("--json", as_json, "emit JSON instead of text");

  auto* scan = app.add_subcommand("scan", "run all ordered pairs of a table");
  scan->add_option("file", file)->required();
  scan->add_option("--tests", tests);
  scan->add_option("--r", r);
  scan->add_option("--p", p);
  scan->add_option("--cap", cap);
  scan->add_option("--jobs", jobs, "worker threads");
  scan->add_option("--output,-o", output, "output path (default stdout)");
  scan->add_flag("--assert-metabelian-applicable", applicable);

  auto* met = app.add_subcommand("metabelian", "print Delta^{r,p} of one knot");
  met->add_option("file", file)->required();
  met->add_option("name", name)->required();
  met->add_option("--r", r);
  met->add_option("--p", p);
  met->add_option("--cap", cap);

  auto* sat = app.add_subcommand("satellite-family", "q-power satellite family data");
  sat->add_option("file", file)->required();
  sat->add_option("name", name)->required();
  sat->add_option("--r", r);
  sat->add_option("--p", p);
  sat->add_option("--q", qlist, "comma list of primes");
  sat->add_option("--a-class", aclass, "axis class in F_p^d (comma list, default e_1)");
  sat->add_option("--cap", cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (inv->parsed()) return cmd_invariants(file, name);
    if (obs->parsed())
      return cmd_obstruct(file, jname, kname, tests, r, p, both, applicable, as_json, cap);
    if (scan->parsed()) return cmd_scan(file, tests, r, p, jobs, output, applicable, cap);
    if (met->parsed()) return cmd_metabelian(file, name, r, p, cap);
    if (sat->parsed()) return cmd_satellite_family(file, name, r, p, qlist, aclass, cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
