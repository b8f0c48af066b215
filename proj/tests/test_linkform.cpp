#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ribcon;
using testsupport::Rng;

namespace {

// random nonsingular form over a local context: random diagonal with the given
// unit choices, then a random filtered change of basis applied to gram and to
// a family of isotropic generators picked in the diagonal basis.
template <class Ctx>
struct RandomForm {
  TorsionLinkingForm<Ctx> form;
  std::vector<int> diag_orders;
  std::vector<typename Ctx::Elem> diag_units;
  std::vector<typename TorsionLinkingForm<Ctx>::Vec> isotropic;  // G with G c G^perp
};

template <class Ctx>
RandomForm<Ctx> random_form(const Ctx& c, Rng& rng, int maxn, int maxk,
                            const std::vector<typename Ctx::Elem>& unit_pool,
                            const std::vector<typename Ctx::Elem>& coef_pool = {}) {
  using Vec = typename TorsionLinkingForm<Ctx>::Vec;
  int n = (int)rng.range(1, maxn);
  std::vector<int> orders(n);
  for (auto& k : orders) k = (int)rng.range(1, maxk);
  std::sort(orders.begin(), orders.end(), std::greater<int>());
  RandomForm<Ctx> out;
  out.diag_orders = orders;
  TorsionLinkingForm<Ctx> f;
  f.ctx = c;
  f.orders = orders;
  f.gram = Mat<QmodR<Ctx>>(n, n, qm_zero(c));
  for (int i = 0; i < n; i++) {
    auto u = unit_pool[rng.range(0, (long long)unit_pool.size() - 1)];
    out.diag_units.push_back(u);
    f.gram(i, i) = qm_make(c, u, orders[i]);
  }
  // random filtered transvections: e_j -> e_j + coef e_i with
  // val(coef) >= max(0, k_i - k_j)
  Mat<typename Ctx::Elem> b(n, n, c.zero());
  for (int i = 0; i < n; i++) b(i, i) = c.one();
  for (int step = 0; step < 2 * n; step++) {
    int i = (int)rng.range(0, n - 1), j = (int)rng.range(0, n - 1);
    if (i == j) continue;
    auto coef = coef_pool.empty() ? c.from_int(rng.range(-2, 2))
                                  : coef_pool[rng.range(0, (long long)coef_pool.size() - 1)];
    int minval = std::max(0, orders[i] - orders[j]);
    coef = c.mul_tau_pow(coef, minval);
    // column op on b: col_j += coef * col_i
    for (int t = 0; t < n; t++) b(t, j) = c.add(b(t, j), c.mul(coef, b(t, i)));
  }
  // transformed gram: lambda'(a,b) = lambda(B a, B b)
  TorsionLinkingForm<Ctx> g;
  g.ctx = c;
  g.orders = orders;
  g.gram = Mat<QmodR<Ctx>>(n, n, qm_zero(c));
  auto col = [&](int j) {
    Vec v(n);
    for (int t = 0; t < n; t++) v[t] = b(t, j);
    return v;
  };
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) g.gram(i, j) = f.pairing(col(i), col(j));
  // isotropic generators directly in the final coordinates: half-order
  // multiples of basis vectors pair to zero since nu lambda <= min order
  for (int i = 0; i < n; i++) {
    if (rng.range(0, 1)) continue;
    Vec v(n, c.zero());
    v[i] = c.mul_tau_pow(c.one(), (orders[i] + 1) / 2);
    out.isotropic.push_back(v);
  }
  out.form = g;
  return out;
}

TorsionLinkingForm<ZpLocal> hyperbolic_plane(long long p) {
  ZpLocal c(p, 2);
  TorsionLinkingForm<ZpLocal> f;
  f.ctx = c;
  f.orders = {1, 1};
  f.gram = Mat<QmodR<ZpLocal>>(2, 2, qm_zero(c));
  f.gram(0, 1) = qm_make(c, c.one(), 1);
  f.gram(1, 0) = qm_make(c, c.one(), 1);
  return f;
}

}  // namespace

TEST_CASE("condition (T) rejects p = 2") {
  CHECK_THROWS(ZpLocal(2, 3));
  CHECK_THROWS(FpULocal(2, 3));
  ZpLocal c(7, 3);
  CHECK(c.add(c.s_half(), c.conj(c.s_half())) == c.one());
}

TEST_CASE("nu and pairing basics") {
  ZpLocal c(3, 3);
  TorsionLinkingForm<ZpLocal> f;
  f.ctx = c;
  f.orders = {3};
  f.gram = Mat<QmodR<ZpLocal>>(1, 1, qm_zero(c));
  f.gram(0, 0) = qm_make(c, c.one(), 3);
  auto e = f.unit_vec(0);
  CHECK(f.nu(e) == 3);
  CHECK(f.nu(f.zero_vec()) == 0);
  auto te = e;
  te[0] = c.mul_tau_pow(te[0], 1);
  CHECK(f.nu(te) == 2);
  CHECK(qm_eq(c, f.pairing(e, e), f.gram(0, 0)));
  // linearity in the first slot: lambda(tau a, b) = tau lambda(a, b)
  CHECK(qm_eq(c, f.pairing(te, e), qm_scale(c, c.mul_tau_pow(c.one(), 1), f.pairing(e, e))));
  CHECK(qm_is_zero(f.pairing(e, f.zero_vec())));
}

TEST_CASE("diagonalize single generator and hyperbolic plane") {
  ZpLocal c(3, 2);
  TorsionLinkingForm<ZpLocal> line;
  line.ctx = c;
  line.orders = {2};
  line.gram = Mat<QmodR<ZpLocal>>(1, 1, qm_zero(c));
  line.gram(0, 0) = qm_make(c, c.from_int(1), 2);
  auto d = diagonalize(line);
  REQUIRE(d.size() == 1);
  CHECK(d[0].order == 2);
  CHECK(d[0].residue == 1);

  auto h = hyperbolic_plane(3);
  auto dh = diagonalize(h);
  REQUIRE(dh.size() == 2);
  CHECK(dh[0].order == 1);
  CHECK(dh[1].order == 1);
  // discriminant of the hyperbolic plane is -1 modulo squares
  long long prod = dh[0].residue * dh[1].residue % 3;
  long long legendre_prod = mod_pow_ll(prod, 1, 3);  // p=3: squares are {1}
  CHECK(legendre_prod == 2);  // -1 mod 3
}

TEST_CASE("diagonalize rejects singular input") {
  ZpLocal c(3, 2);
  TorsionLinkingForm<ZpLocal> f;
  f.ctx = c;
  f.orders = {2};
  f.gram = Mat<QmodR<ZpLocal>>(1, 1, qm_zero(c));
  f.gram(0, 0) = qm_make(c, c.mul_tau_pow(c.one(), 1), 2);  // tau/tau^2: nu = 1 < 2
  CHECK_THROWS(diagonalize(f));
}

TEST_CASE("randomized diagonalization over the 3- and 5-local integers") {
  for (long long p : {3LL, 5LL}) {
    ZpLocal c(p, 6);
    std::vector<long long> units;
    for (long long u = 1; u < p; u++) units.push_back(u);
    Rng rng(211 + p);
    for (int trial = 0; trial < 100; trial++) {
      auto rf = random_form(c, rng, 4, 3, units);
      CHECK(rf.form.hermitian());
      CHECK(rf.form.annihilation_ok());
      auto diag = diagonalize(rf.form);
      // orders multiset preserved
      std::vector<int> got;
      for (auto& d : diag) got.push_back(d.order);
      std::sort(got.begin(), got.end(), std::greater<int>());
      CHECK(got == rf.diag_orders);
      // returned basis diagonalizes the form with nu lambda(e,e) = nu e
      for (size_t i = 0; i < diag.size(); i++) {
        auto pii = rf.form.pairing(diag[i].basis, diag[i].basis);
        CHECK(qm_nu(pii) == diag[i].order);
        CHECK(rf.form.nu(diag[i].basis) == diag[i].order);
        for (size_t j = 0; j < i; j++)
          CHECK(qm_is_zero(rf.form.pairing(diag[i].basis, diag[j].basis)));
      }
    }
  }
}

TEST_CASE("orthogonal complements: order product and double complement") {
  for (long long p : {3LL, 5LL}) {
    ZpLocal c(p, 6);
    std::vector<long long> units;
    for (long long u = 1; u < p; u++) units.push_back(u);
    Rng rng(331 + p);
    for (int trial = 0; trial < 60; trial++) {
      auto rf = random_form(c, rng, 4, 3, units);
      auto& f = rf.form;
      int n = f.n();
      // random submodule
      std::vector<typename TorsionLinkingForm<ZpLocal>::Vec> gens;
      int ngens = (int)rng.range(0, 2);
      for (int g = 0; g < ngens; g++) {
        typename TorsionLinkingForm<ZpLocal>::Vec v(n);
        for (int i = 0; i < n; i++) v[i] = c.from_int(rng.range(0, 8));
        gens.push_back(v);
      }
      auto perp = orthogonal_complement(f, gens);
      int lm = gens.empty() ? 0 : submodule_length(f, gens);
      int lp = perp.empty() ? 0 : submodule_length(f, perp);
      CHECK(lm + lp == f.total_length());
      // M^perp-perp == M
      auto perp2 = orthogonal_complement(f, perp);
      int l2 = perp2.empty() ? 0 : submodule_length(f, perp2);
      CHECK(l2 == lm);
      auto both = gens;
      both.insert(both.end(), perp2.begin(), perp2.end());
      int lb = both.empty() ? 0 : submodule_length(f, both);
      CHECK(lb == lm);
    }
  }
}

TEST_CASE("complement edge cases") {
  auto h = hyperbolic_plane(3);
  // M = 0 -> whole module
  auto whole = orthogonal_complement(h, {});
  CHECK(submodule_length(h, whole) == 2);
  // M = whole -> 0
  std::vector<TorsionLinkingForm<ZpLocal>::Vec> all{h.unit_vec(0), h.unit_vec(1)};
  auto zero = orthogonal_complement(h, all);
  CHECK((zero.empty() || submodule_length(h, zero) == 0));
  // <tau e> inside <e> of order tau^2 is self-orthogonal
  ZpLocal c(3, 2);
  TorsionLinkingForm<ZpLocal> g;
  g.ctx = c;
  g.orders = {2};
  g.gram = Mat<QmodR<ZpLocal>>(1, 1, qm_zero(c));
  g.gram(0, 0) = qm_make(c, c.one(), 2);
  std::vector<TorsionLinkingForm<ZpLocal>::Vec> sub{{c.mul_tau_pow(c.one(), 1)}};
  auto comp = orthogonal_complement(g, sub);
  CHECK(submodule_length(g, comp) == 1);
  auto qf = quotient_form(g, sub);
  CHECK(qf.n() == 0);  // G = G^perp: trivial quotient
}

TEST_CASE("quotient by zero and by a metabolizer") {
  auto h = hyperbolic_plane(3);
  auto same = quotient_form(h, {});
  CHECK(same.total_length() == 2);
  auto d0 = phi_fp(h);
  auto d1 = phi_fp(same);
  CHECK(d0 == d1);
  std::vector<TorsionLinkingForm<ZpLocal>::Vec> met{h.unit_vec(0)};
  auto trivial = quotient_form(h, met);
  CHECK(trivial.n() == 0);
  // not self-orthogonal: rejected
  std::vector<TorsionLinkingForm<ZpLocal>::Vec> bad{h.unit_vec(0), h.unit_vec(1)};
  CHECK_THROWS(quotient_form(h, bad));
}

TEST_CASE("phi graded data") {
  ZpLocal c(3, 3);
  TorsionLinkingForm<ZpLocal> f;
  f.ctx = c;
  f.orders = {2, 1, 1};
  f.gram = Mat<QmodR<ZpLocal>>(3, 3, qm_zero(c));
  f.gram(0, 0) = qm_make(c, c.one(), 2);
  f.gram(1, 1) = qm_make(c, c.one(), 1);
  f.gram(2, 2) = qm_make(c, c.from_int(2), 1);
  auto phi = phi_graded(f);
  CHECK(phi[1].size() == 2);
  CHECK(phi[2].size() == 1);
  auto fp = phi_fp(f);
  CHECK(fp[1].first == 2);
  CHECK(fp[2].first == 1);
  // trivial form
  TorsionLinkingForm<ZpLocal> t;
  t.ctx = c;
  t.gram = Mat<QmodR<ZpLocal>>(0, 0, qm_zero(c));
  CHECK(phi_graded(t).empty());
}

TEST_CASE("phi dims and discriminants are congruence invariants") {
  ZpLocal c(5, 6);
  std::vector<long long> units{1, 2, 3, 4};
  Rng rng(401);
  for (int trial = 0; trial < 60; trial++) {
    auto rf = random_form(c, rng, 4, 3, units);
    // reference form: plain diagonal with the same data
    TorsionLinkingForm<ZpLocal> ref;
    ref.ctx = c;
    ref.orders = rf.diag_orders;
    int n = (int)rf.diag_orders.size();
    ref.gram = Mat<QmodR<ZpLocal>>(n, n, qm_zero(c));
    for (int i = 0; i < n; i++) ref.gram(i, i) = qm_make(c, rf.diag_units[i], rf.diag_orders[i]);
    CHECK(phi_fp(ref) == phi_fp(rf.form));
  }
}

TEST_CASE("metabolizer search") {
  auto h = hyperbolic_plane(3);
  auto met = find_metabolizer_brute(h);
  REQUIRE(met.has_value());
  CHECK(submodule_length(h, *met) == 1);
  for (auto& a : *met)
    for (auto& b : *met) CHECK(qm_is_zero(h.pairing(a, b)));

  // anisotropic planes have none: <1> + <2> over Z_(5), -2 = 3 is a nonsquare
  ZpLocal c5(5, 1);
  TorsionLinkingForm<ZpLocal> ani;
  ani.ctx = c5;
  ani.orders = {1, 1};
  ani.gram = Mat<QmodR<ZpLocal>>(2, 2, qm_zero(c5));
  ani.gram(0, 0) = qm_make(c5, c5.one(), 1);
  ani.gram(1, 1) = qm_make(c5, c5.from_int(2), 1);
  CHECK_FALSE(find_metabolizer_brute(ani).has_value());

  // odd length: no metabolizer
  ZpLocal c3(3, 1);
  TorsionLinkingForm<ZpLocal> line;
  line.ctx = c3;
  line.orders = {1};
  line.gram = Mat<QmodR<ZpLocal>>(1, 1, qm_zero(c3));
  line.gram(0, 0) = qm_make(c3, c3.from_int(2), 1);
  CHECK_FALSE(find_metabolizer_brute(line).has_value());

  // the exhaustive search is capped at length 8
  ZpLocal c9(3, 3);
  TorsionLinkingForm<ZpLocal> big;
  big.ctx = c9;
  big.orders = {3, 3, 3};
  big.gram = Mat<QmodR<ZpLocal>>(3, 3, qm_zero(c9));
  for (int i = 0; i < 3; i++) big.gram(i, i) = qm_make(c9, c9.one(), 3);
  CHECK_THROWS(find_metabolizer_brute(big));

  // lambda + (-lambda) has the graph metabolizer
  ZpLocal c(3, 2);
  TorsionLinkingForm<ZpLocal> d;
  d.ctx = c;
  d.orders = {2, 2};
  d.gram = Mat<QmodR<ZpLocal>>(2, 2, qm_zero(c));
  d.gram(0, 0) = qm_make(c, c.one(), 2);
  d.gram(1, 1) = qm_make(c, c.from_int(-1), 2);
  auto metd = find_metabolizer_brute(d);
  REQUIRE(metd.has_value());
  CHECK(submodule_length(d, *metd) == 2);
}

TEST_CASE("geq_M_feasible spec cases") {
  PhiN2 empty;
  CHECK(geq_M_feasible(empty, empty).has_value());
  PhiN2 some{{1, {2, 1}}, {3, {1, 0}}};
  auto w = geq_M_feasible(some, some);
  REQUIRE(w.has_value());
  // identical sides admit the all-zero certificate
  bool allzero = true;
  for (auto& [tp, tm] : w->t)
    if (tp || tm) allzero = false;
  CHECK(allzero);
  PhiN2 hyp{{1, {1, 1}}};
  auto wh = geq_M_feasible(hyp, empty);
  REQUIRE(wh.has_value());
  CHECK(wh->h[0] == 1);  // h_1 = 1 absorbs the hyperbolic plane
  CHECK_FALSE(geq_M_feasible(PhiN2{{1, {1, 0}}}, PhiN2{{1, {0, 1}}}).has_value());
  // signature slack bounded by nullity slack
  CHECK_FALSE(geq_M_feasible(PhiN2{{1, {3, 0}}}, PhiN2{{1, {1, 0}}, {2, {1, 1}}}).has_value());
}

TEST_CASE("lemma feasibility on randomized quotients over the Gaussian-rational DVR") {
  GaussLocal c(6);
  std::vector<GaussLocal::Elem> units;
  for (long v : {1L, -1L, 2L, -2L, 3L, -3L}) units.push_back(c.from_int(v));
  std::vector<GaussLocal::Elem> coefs;
  for (long re = -1; re <= 1; re++)
    for (long im = -1; im <= 1; im++) {
      GaussLocal::Elem e = c.zero();
      e[0] = GaussRat(Rat(re), Rat(im));
      coefs.push_back(e);
    }
  Rng rng(701);
  int done = 0;
  for (int trial = 0; trial < 200; trial++) {
    auto rf = random_form(c, rng, 4, 3, units, coefs);
    CHECK(rf.form.hermitian());
    auto lhs = phi_signature(rf.form);
    auto qf = quotient_form(rf.form, rf.isotropic);
    auto rhs = phi_signature(qf);
    auto w = geq_M_feasible(lhs, rhs);
    CHECK(w.has_value());
    done++;
  }
  CHECK(done == 200);
}

TEST_CASE("diagonalize over F_p[u] localized at u") {
  FpULocal c(3, 4);
  TorsionLinkingForm<FpULocal> f;
  f.ctx = c;
  f.orders = {2, 1};
  f.gram = Mat<QmodR<FpULocal>>(2, 2, qm_zero(c));
  f.gram(0, 0) = qm_make(c, c.from_int(2), 2);
  f.gram(0, 1) = qm_make(c, c.one(), 1);
  f.gram(1, 0) = qm_make(c, c.one(), 1);
  f.gram(1, 1) = qm_make(c, c.one(), 1);
  CHECK(f.hermitian());
  auto d = diagonalize(f);
  REQUIRE(d.size() == 2);
  CHECK(d[0].order + d[1].order == 3);
  for (size_t i = 0; i < d.size(); i++) {
    auto pii = f.pairing(d[i].basis, d[i].basis);
    CHECK(qm_nu(pii) == d[i].order);
  }
  // randomized round over F_p[u]
  std::vector<FpULocal::Elem> units{c.from_int(1), c.from_int(2)};
  Rng rng(811);
  for (int trial = 0; trial < 40; trial++) {
    auto rf = random_form(c, rng, 3, 3, units);
    auto diag = diagonalize(rf.form);
    std::vector<int> got;
    for (auto& dd : diag) got.push_back(dd.order);
    std::sort(got.begin(), got.end(), std::greater<int>());
    CHECK(got == rf.diag_orders);
  }
}

TEST_CASE("quotient form composes with the lemma over Z_(3) dimension data") {
  // dimension-level consequence of the devissage identity:
  // sum_i (i-1) dim Phi_i and sum_i dim Phi_i never grow under quotients
  ZpLocal c(3, 6);
  std::vector<long long> units{1, 2};
  Rng rng(907);
  for (int trial = 0; trial < 60; trial++) {
    auto rf = random_form(c, rng, 4, 3, units);
    auto lhs = phi_fp(rf.form);
    auto qf = quotient_form(rf.form, rf.isotropic);
    auto rhs = phi_fp(qf);
    auto weighted = [](const std::map<int, std::pair<int, int>>& m, int shift) {
      int s = 0;
      for (auto& [k, pr] : m) s += (k - shift) * pr.first;
      return s;
    };
    // eta-type and deg-type sums can only drop
    int deg_l = weighted(lhs, 0), deg_r = weighted(rhs, 0);
    int eta_l = 0, eta_r = 0;
    for (auto& [k, pr] : lhs) eta_l += pr.first;
    for (auto& [k, pr] : rhs) eta_r += pr.first;
    CHECK(deg_l - deg_r >= eta_l - eta_r);
    CHECK(eta_l >= eta_r);
  }
}
