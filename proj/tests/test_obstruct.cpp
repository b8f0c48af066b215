#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ribcon;

namespace {

const std::vector<KnotRecord>& table() {
  static std::vector<KnotRecord> t = testsupport::load_fixture_table();
  return t;
}

const KnotRecord& rec(const std::string& name) {
  const KnotRecord* r = find_record(table(), name);
  REQUIRE(r != nullptr);
  return *r;
}

KnotRecord twist_knot_243() {
  IntMatrix v(2, 2);
  v(0, 0) = 1;
  v(0, 1) = 1;
  v(1, 0) = 0;
  v(1, 1) = 61;
  return KnotRecord("tw243", SeifertMatrix(v));
}

}  // namespace

TEST_CASE("knot record construction and caching") {
  auto& k = rec("3_1");
  CHECK(k.det == 3);
  CHECK(to_string(k.delta) == "t^2 - t + 1");
  CHECK(k.pd.has_value());
  // inconsistent PD is rejected
  IntMatrix v(2, 2);
  v(0, 0) = -1;
  v(0, 1) = 1;
  v(1, 0) = 0;
  v(1, 1) = -1;
  auto pd41 = *parse_pd("PD[X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]]");
  CHECK_THROWS(KnotRecord("bad", SeifertMatrix(v), pd41));
}

TEST_CASE("alexander obstruction") {
  CHECK(alexander_obstruction(rec("8_18"), rec("8_20")).verdict == Verdict::NotObstructed);
  CHECK(alexander_obstruction(rec("unknot"), rec("3_1")).verdict == Verdict::Obstructed);
  CHECK(alexander_obstruction(rec("3_1"), rec("3_1")).verdict == Verdict::NotObstructed);
  CHECK(alexander_obstruction(rec("3_1"), rec("unknot")).verdict == Verdict::NotObstructed);
}

TEST_CASE("double cover obstruction: the worked example pair") {
  auto out = double_cover_obstruction(rec("8_18s"), rec("8_20s"));
  CHECK(out.verdict == Verdict::Obstructed);
  CHECK(out.witness["failing_prime"] == "3");
  // the 5-primary parts alone are feasible
  CHECK(out.witness["det_divides"] == true);
  CHECK(out.witness["quotient_square"] == true);
  // reflexive case
  CHECK(double_cover_obstruction(rec("8_18s"), rec("8_18s")).verdict ==
        Verdict::NotObstructed);
  // (Z/3)^2 does not inject into Z/9
  CHECK(double_cover_obstruction(rec("6_1"), rec("12n_582")).verdict == Verdict::Obstructed);
}

TEST_CASE("double cover obstruction: the (5,1) vs (2) pair is feasible") {
  // the 3-parts are Z/3 + Z/243 vs Z/9; both cokernel types (3,1) and (4)
  // occur and both admit square extensions, so no obstruction arises
  KnotRecord j = connected_sum("j", rec("3_1"), twist_knot_243());
  auto pj = primary_decomposition(j.double_cover);
  CHECK(pj[Int(3)] == Partition({5, 1}));
  auto out = double_cover_obstruction(j, rec("6_1"));
  CHECK(out.verdict == Verdict::NotObstructed);
}

TEST_CASE("double cover obstruction: stabilization by a square summand stays feasible") {
  for (const char* base : {"3_1", "4_1", "6_1", "12n_582"}) {
    for (const char* extra : {"3_1", "4_1", "8_20"}) {
      KnotRecord l = rec(extra);
      KnotRecord lml = connected_sum("lml", l, l.concordance_inverse("ml"));
      KnotRecord j = connected_sum("j", rec(base), lml);
      CHECK(double_cover_obstruction(j, rec(base)).verdict == Verdict::NotObstructed);
    }
  }
}

TEST_CASE("signature obstruction") {
  // second inequality kills the mirror pair at x = 1/3
  auto out = signature_obstruction(rec("12n_582m"), rec("12n_582"));
  CHECK(out.verdict == Verdict::Obstructed);
  REQUIRE(out.witness.contains("violation"));
  CHECK(out.witness["violation"]["violated"] == "second");
  CHECK(out.witness["violation"]["x"].get<double>() == doctest::Approx(1.0 / 3));
  // first inequality kills deg_{1/3} = 0 knots
  auto out2 = signature_obstruction(rec("4_1"), rec("12n_582"));
  CHECK(out2.verdict == Verdict::Obstructed);
  CHECK(out2.witness["violation"]["violated"] == "first");
  // reflexive
  CHECK(signature_obstruction(rec("12n_582"), rec("12n_582")).verdict ==
        Verdict::NotObstructed);
  CHECK(signature_obstruction(rec("10_99"), rec("12n_582")).verdict == Verdict::NotObstructed);
}

TEST_CASE("metabelian comparison") {
  ObstructionOptions opt;
  auto same = metabelian_comparison(rec("3_1"), rec("3_1"), 2, 3, false);
  CHECK(same.verdict == Verdict::NotObstructed);
  // missing PD codes
  auto nopd = metabelian_comparison(rec("8_20"), rec("3_1"), 2, 3, true);
  CHECK(nopd.verdict == Verdict::Inconclusive);
  // policy: without the applicability flag a failed divisibility is
  // inconclusive-with-data
  auto raw = metabelian_comparison(rec("3_1"), rec("4_1"), 2, 3, false);
  if (raw.witness.contains("divides") && raw.witness["divides"] == false) {
    CHECK(raw.verdict == Verdict::Inconclusive);
    auto flagged = metabelian_comparison(rec("3_1"), rec("4_1"), 2, 3, true);
    CHECK(flagged.verdict == Verdict::Obstructed);
  } else {
    CHECK(raw.verdict == Verdict::NotObstructed);
  }
  // cap exceeded reports inconclusive
  auto capped = metabelian_comparison(rec("3_1"), rec("6_1"), 2, 3, false, 2);
  CHECK(capped.verdict == Verdict::Inconclusive);
}

TEST_CASE("full report aggregation and reflexivity") {
  for (auto& k : table()) {
    ObstructionOptions opt;
    opt.metabelian = k.pd.has_value() && !k.pd->crossings.empty() && k.seifert.size() <= 2;
    auto repv = full_report(k, k, opt);
    CHECK(repv.aggregate == Verdict::NotObstructed);
    for (auto& [name, t] : repv.tests) CHECK(t.verdict != Verdict::Obstructed);
  }
  // ribbon-type pairs against the unknot stay unobstructed
  for (const char* name : {"8_18s", "8_20s", "12n_582", "6_1"}) {
    auto repv = full_report(rec(name), rec("unknot"));
    CHECK(repv.aggregate == Verdict::NotObstructed);
  }
  // aggregate obstructed iff some test is
  auto bad = full_report(rec("8_18s"), rec("8_20s"));
  CHECK(bad.aggregate == Verdict::Obstructed);
  bool some = false;
  for (auto& [name, t] : bad.tests) some |= (t.verdict == Verdict::Obstructed);
  CHECK(some);
}

TEST_CASE("witnesses re-verify") {
  for (auto pair : std::vector<std::pair<std::string, std::string>>{
           {"8_18s", "8_20s"}, {"12n_582m", "12n_582"}, {"unknot", "3_1"},
           {"10_99", "12n_582"}, {"4_1", "12n_582"}, {"6_1", "12n_582"}}) {
    auto repv = full_report(rec(pair.first), rec(pair.second));
    json j = report_to_json(repv);
    CHECK(verify_report_witnesses(j, rec(pair.first), rec(pair.second)));
  }
}

TEST_CASE("scan table") {
  std::vector<KnotRecord> three{rec("3_1"), rec("4_1"), rec("6_1")};
  ObstructionOptions opt;
  json out = scan_table(three, opt, 1);
  CHECK(out["schema"] == 1);
  CHECK(out["pairs"].size() == 6);
  CHECK(out["summary"]["pair_count"] == 6);
  // deterministic across worker counts
  json out4 = scan_table(three, opt, 4);
  CHECK(out.dump() == out4.dump());
  // empty table
  json empty = scan_table({}, opt, 1);
  CHECK(empty["pairs"].empty());
  // pair ordering is by name
  CHECK(out["pairs"][0]["j"] == "3_1");
  CHECK(out["pairs"][0]["k"] == "4_1");
}

TEST_CASE("report text rendering") {
  auto repv = full_report(rec("unknot"), rec("3_1"));
  std::string text = report_to_text(repv);
  CHECK(text.find("Obstructed") != std::string::npos);
  CHECK(text.find("alexander") != std::string::npos);
}
