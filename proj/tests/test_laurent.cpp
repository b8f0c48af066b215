#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ribcon;
using testsupport::Rng;

static ZPoly zp(const std::string& s) {
  auto p = parse_laurent_int(s);
  REQUIRE(p.has_value());
  return *p;
}

TEST_CASE("normalize_units canonical representatives") {
  CHECK(normalize_units(zp("-t^-1 + 1 - t")) == zp("t^2 - t + 1"));
  CHECK(normalize_units(ZPoly()) == ZPoly());
  // over Rat: only shift and sign, no scaling
  QPoly q = QPoly::monomial(Rat(3), 3);
  CHECK(normalize_units(q) == QPoly(Rat(3)));
  // idempotent and constant on unit classes
  Rng rng(42);
  for (int i = 0; i < 200; i++) {
    ZPoly p = testsupport::random_zpoly(rng, 6, 9);
    if (p.is_zero()) continue;
    ZPoly n = normalize_units(p);
    CHECK(normalize_units(n) == n);
    int k = (int)rng.range(-3, 3);
    ZPoly u = ZPoly::monomial(Int(rng.range(0, 1) ? 1 : -1), k);
    CHECK(normalize_units(u * p) == n);
  }
}

TEST_CASE("normalize_units over F_p is monic") {
  FpPoly p(1, {Fp(2, 5), Fp(3, 5)});
  FpPoly n = normalize_units(p);
  CHECK(n.low == 0);
  CHECK(n.leading() == Fp(1, 5));
}

TEST_CASE("divides over Int") {
  ZPoly f = zp("t^2 - t + 1");
  ZPoly g = f * f * zp("t^2 - 3*t + 1");
  CHECK(divides(f, g));
  CHECK_FALSE(divides(g, f));
  CHECK(divides(ZPoly(), ZPoly()));
  CHECK_FALSE(divides(ZPoly(), zp("1")));
  CHECK(divides(zp("1"), ZPoly()));
  // integrality matters: (t^2-1)/(2t+2) = (t-1)/2
  CHECK_FALSE(divides(zp("2*t + 2"), zp("t^2 - 1")));
  CHECK(divides(zp("2*t + 2"), zp("2*t^2 - 2")));
  // laurent shifts are units
  CHECK(divides(zp("t^-3 - t^-4"), zp("t - 1")));
}

TEST_CASE("mutual divisibility is unit equality") {
  Rng rng(7);
  int checked = 0;
  for (int i = 0; i < 300; i++) {
    ZPoly a = testsupport::random_zpoly(rng, 4, 4);
    ZPoly b = testsupport::random_zpoly(rng, 4, 4);
    if (a.is_zero() || b.is_zero()) continue;
    bool mutual = divides(a, b) && divides(b, a);
    CHECK(mutual == (normalize_units(a) == normalize_units(b)));
    checked++;
  }
  CHECK(checked > 200);
}

TEST_CASE("involution") {
  CHECK(involution(zp("t^2 - t + 1")) == zp("t^-2 - t^-1 + 1"));
  CHECK(involution(ZPoly()) == ZPoly());
  CHECK(involution(zp("2*t")) == zp("2*t^-1"));
  Rng rng(11);
  for (int i = 0; i < 100; i++) {
    ZPoly p = testsupport::random_zpoly(rng, 6, 9).shifted((int)rng.range(-3, 3));
    CHECK(involution(involution(p)) == p);
  }
}

TEST_CASE("resultant basics") {
  CHECK(resultant(zp("t - 1"), zp("t + 1")) == 2);
  CHECK(resultant(cyclotomic(2), cyclotomic(6)) == 3);
  CHECK(resultant(cyclotomic(2), cyclotomic(3)) == 1);
  CHECK_THROWS(resultant(ZPoly(), zp("t")));
}

TEST_CASE("resultant vs Sylvester oracle, swap sign, multiplicativity") {
  Rng rng(13);
  int done = 0;
  for (int i = 0; i < 200; i++) {
    ZPoly f = testsupport::random_zpoly(rng, 5, 6);
    ZPoly g = testsupport::random_zpoly(rng, 5, 6);
    ZPoly h = testsupport::random_zpoly(rng, 3, 4);
    if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
    Int r = resultant(f, g);
    CHECK(r == testsupport::sylvester_resultant(f, g));
    int m = f.degree() - f.low, n = g.degree() - g.low;
    Int sign = ((m * n) % 2 == 0) ? 1 : -1;
    CHECK(resultant(g, f) == sign * r);
    CHECK(resultant(f, g * h) == r * resultant(f, h));
    done++;
  }
  CHECK(done > 100);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == zp("t - 1"));
  CHECK(cyclotomic(6) == zp("t^2 - t + 1"));
  // Phi_pq formula at p=2, q=3
  ZPoly lhs = cyclotomic(6);
  auto num = *div_exact(zp("t^6 - 1") * zp("t - 1"), zp("t^2 - 1"));
  auto q = *div_exact(num, zp("t^3 - 1"));
  CHECK(lhs == q);
  CHECK_THROWS(cyclotomic(0));
  for (int n = 1; n <= 60; n++) {
    ZPoly prod{Int(1)};
    for (int d = 1; d <= n; d++)
      if (n % d == 0) prod = prod * cyclotomic(d);
    std::vector<Int> cs(n + 1, Int(0));
    cs[0] = -1;
    cs[n] = 1;
    CHECK(prod == ZPoly(0, std::move(cs)));
    CHECK(cyclotomic(n).degree() == euler_phi(n));
  }
}

TEST_CASE("circle root multiplicity") {
  ZPoly z = zp("t^2 - t + 1");
  CHECK(circle_root_multiplicity(z * z, 1.0 / 3) == 2);
  CHECK(circle_root_multiplicity(zp("t^2 - 3*t + 1"), 0.77) == 0);
  CHECK(circle_root_multiplicity(zp("t^2 - 3*t + 1"), 1.0 / 3) == 0);
  CHECK(circle_root_multiplicity(zp("t - 1"), 1.0) == 0);
  CHECK(circle_root_multiplicity(zp("t + 1"), 1.0) == 1);
  CHECK_THROWS(circle_root_multiplicity(ZPoly(), 0.5));
  // irrational cos path
  ZPoly phi5 = cyclotomic(5);
  CHECK(circle_root_multiplicity(phi5 * phi5 * phi5, 2.0 / 5) == 3);
}

TEST_CASE("unit circle roots with multiplicities") {
  ZPoly z = zp("t^2 - t + 1");
  auto roots = unit_circle_roots(z * z * zp("t^2 - 3*t + 1"));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].first == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(roots[0].second == 2);
  CHECK(roots[1].first == doctest::Approx(5.0 / 3).epsilon(1e-9));
  CHECK(roots[1].second == 2);
  // total multiplicity bounded by degree
  Rng rng(17);
  for (int i = 0; i < 60; i++) {
    ZPoly p = testsupport::random_zpoly(rng, 8, 5);
    if (p.is_zero()) continue;
    int total = 0;
    for (auto& [x, m] : unit_circle_roots(p)) total += m;
    CHECK(total <= p.degree() - p.low);
  }
}

TEST_CASE("squarefree decomposition reassembles") {
  Rng rng(23);
  for (int i = 0; i < 60; i++) {
    ZPoly a = testsupport::random_zpoly(rng, 3, 3);
    ZPoly b = testsupport::random_zpoly(rng, 2, 3);
    if (a.is_zero() || b.is_zero() || a.degree() == 0 || b.degree() == 0) continue;
    ZPoly p = a * a * b;
    auto parts = squarefree_decomposition(p);
    ZPoly prod{Int(1)};
    for (size_t k = 0; k < parts.size(); k++)
      for (size_t rep = 0; rep <= k; rep++) prod = prod * parts[k];
    CHECK(assoc_eq(primitive_part(prod), primitive_part(p)));
  }
}

TEST_CASE("gcd over Z[t]") {
  ZPoly a = zp("t^2 - 1") * zp("3*t + 6");
  ZPoly b = zp("t^2 + 2*t + 1") * zp("3");
  ZPoly g = poly_gcd(a, b);
  CHECK(assoc_eq(g, zp("3*t + 3")));
}

TEST_CASE("rendering and parsing round-trip") {
  Rng rng(31);
  for (int i = 0; i < 150; i++) {
    ZPoly p = testsupport::random_zpoly(rng, 6, 20).shifted((int)rng.range(-4, 4));
    auto q = parse_laurent_int(to_string(p));
    REQUIRE(q.has_value());
    CHECK(*q == p);
  }
  CHECK(parse_laurent_rat("1/2*t^-2 + 3")->coeff_at(-2) == Rat(1, 2));
  CHECK_FALSE(parse_laurent_rat("t +").has_value());
  CHECK(to_string(ZPoly()) == "0");
}

TEST_CASE("Fp arithmetic") {
  Fp a(7, 5), b(4, 5);
  CHECK((a * b).v == 3);
  CHECK((a + b).v == 1);
  CHECK((a / b).v == 3);  // 2 * inv(4) = 2 * 4 = 8 = 3
  CHECK_THROWS(Fp(0, 5).inv());
  FpPoly f(0, {Fp(1, 5), Fp(1, 5)});   // t + 1
  FpPoly g(0, {Fp(4, 5), Fp(1, 5)});   // t + 4 = t - 1
  CHECK(divides(f * g, (f * g) * f));
  CHECK_FALSE(divides(f * f, f * g));
}
