#pragma once
// Twisted Alexander polynomials for integral representations via Fox calculus,
// metabelian representations of knot groups through finite p-group quotients,
// the satellite/resultant formula and the cyclotomic resultant closed form.

#include "ribcon/seifert.hpp"
#include "ribcon/wirtinger.hpp"

#include <numeric>
#include <optional>

namespace ribcon {

// Integer inverse via the adjugate; the matrix must be unimodular.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  int n = m.rows;
  Int det = bareiss_det(m, Int(1));
  if (det != 1 && det != -1) throw std::domain_error("unimodular_inverse: |det| != 1");
  IntMatrix adj(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      IntMatrix sub = m.submatrix_erase(j, i);
      Int c = (n == 1) ? Int(1) : bareiss_det(sub, Int(1));
      if ((i + j) % 2 == 1) c = -c;
      adj(i, j) = det == 1 ? c : Int(-c);
    }
  return adj;
}

// Representation by invertible integer matrices, one image per generator.
// Inverses are derived lazily from the current images; mutating `images`
// invalidates nothing because nothing is cached across calls.
struct Representation {
  int dim = 1;
  std::vector<IntMatrix> images;  // one per generator
  std::vector<int> phi;

  IntMatrix inverse_image(int g) const { return unimodular_inverse(images[g]); }

  IntMatrix image_of(const FreeWord& w) const {
    IntMatrix m = IntMatrix::identity(dim, 1, 0);
    std::map<int, IntMatrix> local_inv;
    for (auto& [g, e] : w.letters) {
      if (e == 1) {
        m = m * images[g];
      } else {
        auto it = local_inv.find(g);
        if (it == local_inv.end()) it = local_inv.emplace(g, inverse_image(g)).first;
        m = m * it->second;
      }
    }
    return m;
  }

  static Representation trivial(const Presentation& p) {
    Representation r;
    r.dim = 1;
    r.images.assign(p.gens, IntMatrix::identity(1, 1, 0));
    r.phi = p.phi;
    return r;
  }
};

inline bool validate_representation(const Presentation& p, const Representation& rho) {
  if ((int)rho.images.size() != p.gens) return false;
  IntMatrix id = IntMatrix::identity(rho.dim, 1, 0);
  for (auto& r : p.relators)
    if (!(rho.image_of(r) == id)) return false;
  return true;
}

// ---- metabelian representations ----

// The finite group (H_K tensor F_p[t]/(t^r - 1)) x| Z/r with its left-regular
// representation; elements are written m(v) sigma^a with sigma the meridian
// class, multiplied by (a, v)(b, w) = (a + b, v + T^a w).
struct MetabelianRep {
  int r = 1;
  long long p = 3;
  int d = 0;                 // F_p-dimension of the module M
  Mat<long long> t_action;   // T, d x d over F_p, T^r = I
  std::vector<std::vector<long long>> gen_vectors;  // v_i per generator, v_1 = 0
  long long group_order = 1;                        // N = r * p^d
  std::vector<int> phi;

  std::vector<Mat<long long>> t_powers;  // T^0..T^{r-1}

  long long module_card() const {
    long long c = 1;
    for (int i = 0; i < d; i++) c *= p;
    return c;
  }

  // element index: (a, v) -> a * p^d + lex(v)
  long long index_of(int a, const std::vector<long long>& v) const {
    long long ix = a;
    for (int i = 0; i < d; i++) ix = ix * p + v[i];
    return ix;
  }
  std::pair<int, std::vector<long long>> element_at(long long ix) const {
    std::vector<long long> v(d);
    for (int i = d - 1; i >= 0; i--) {
      v[i] = ix % p;
      ix /= p;
    }
    return {(int)ix, v};
  }

  std::vector<long long> apply_t_power(int a, const std::vector<long long>& v) const {
    const auto& m = t_powers[((a % r) + r) % r];
    std::vector<long long> w(d, 0);
    for (int i = 0; i < d; i++) {
      long long acc = 0;
      for (int j = 0; j < d; j++) acc += m(i, j) * v[j];
      w[i] = acc % p;
    }
    return w;
  }

  // (a, v) * (b, w) = (a + b, v + T^a w)
  std::pair<int, std::vector<long long>> mul(const std::pair<int, std::vector<long long>>& x,
                                             const std::pair<int, std::vector<long long>>& y) const {
    int a = (x.first + y.first) % r;
    auto tw = apply_t_power(x.first, y.second);
    std::vector<long long> v(d);
    for (int i = 0; i < d; i++) v[i] = (x.second[i] + tw[i]) % p;
    return {a, v};
  }

  std::pair<int, std::vector<long long>> inverse(
      const std::pair<int, std::vector<long long>>& x) const {
    int a = (r - x.first) % r;
    auto tv = apply_t_power(a, x.second);
    std::vector<long long> v(d);
    for (int i = 0; i < d; i++) v[i] = (p - tv[i]) % p;
    return {a, v};
  }

  std::pair<int, std::vector<long long>> generator_element(int g) const {
    return {1 % r, gen_vectors[g]};
  }

  std::pair<int, std::vector<long long>> eval_word(const FreeWord& w) const {
    std::pair<int, std::vector<long long>> acc{0, std::vector<long long>(d, 0)};
    for (auto& [g, e] : w.letters) {
      auto el = generator_element(g);
      if (e == -1) el = inverse(el);
      acc = mul(acc, el);
    }
    return acc;
  }

  // left-regular permutation: gamma acting by delta -> gamma * delta
  std::vector<long long> regular_permutation(const std::pair<int, std::vector<long long>>& gamma) const {
    std::vector<long long> perm(group_order);
    for (long long ix = 0; ix < group_order; ix++) {
      auto delta = element_at(ix);
      perm[ix] = index_of(mul(gamma, delta).first, mul(gamma, delta).second);
    }
    return perm;
  }

  // permutation matrices as a Representation over Z
  Representation to_representation() const {
    Representation rep;
    rep.dim = (int)group_order;
    rep.phi = phi;
    for (size_t g = 0; g < gen_vectors.size(); g++) {
      auto perm = regular_permutation(generator_element((int)g));
      IntMatrix m((int)group_order, (int)group_order, 0);
      for (long long j = 0; j < group_order; j++) m((int)perm[j], (int)j) = 1;
      rep.images.push_back(std::move(m));
    }
    return rep;
  }

  // cycle type of the left-multiplication by gamma (all cycles share the
  // length ord(gamma)); characteristic polynomial = prod (t^len - 1).
  ZPoly permutation_charpoly(const std::pair<int, std::vector<long long>>& gamma) const {
    auto perm = regular_permutation(gamma);
    std::vector<char> seen(group_order, 0);
    ZPoly f(Int(1));
    for (long long s = 0; s < group_order; s++) {
      if (seen[s]) continue;
      int len = 0;
      long long cur = s;
      while (!seen[cur]) {
        seen[cur] = 1;
        cur = perm[cur];
        len++;
      }
      std::vector<Int> cs(len + 1, Int(0));
      cs[0] = -1;
      cs[len] = 1;
      f = f * ZPoly(0, std::move(cs));
    }
    return f;
  }
};

// Builds Gamma_K^{r,p} from a Wirtinger presentation: the Alexander module
// presentation over F_p[t]/(t^r - 1) provides the module, its t-action and the
// generator classes of x_i x_1^{-1}. Relators are validated; failure is a
// construction bug, not an input error.
inline MetabelianRep metabelian_rep(const Presentation& pres, int r, long long p,
                                    long long group_order_cap = 2000) {
  if (r < 1) throw std::domain_error("metabelian_rep: r must be >= 1");
  MetabelianRep rep;
  rep.r = r;
  rep.p = p;
  rep.phi = pres.phi;
  if (pres.gens == 1 || r == 1) {
    rep.d = 0;
    rep.t_action = Mat<long long>(0, 0);
    rep.gen_vectors.assign(pres.gens, {});
    rep.group_order = r;
    rep.t_powers.assign(r, Mat<long long>(0, 0));
    return rep;
  }
  // the Jacobian has rows indexed by relators; the module presentation wants
  // columns as relations, so feed the transpose (rows = generator classes)
  auto presm = alexander_module_presentation(pres, 0).transpose();
  FpModuleWithT mod = fp_module_with_t(presm, r, p);
  rep.d = mod.dim;
  rep.t_action = mod.t_action;
  long long order = r;
  for (int i = 0; i < rep.d; i++) {
    order *= p;
    if (order > group_order_cap)
      throw std::domain_error("metabelian_rep: group order " + std::to_string(order) +
                              "+ exceeds cap " + std::to_string(group_order_cap));
  }
  rep.group_order = order;
  rep.t_powers.clear();
  Mat<long long> tp = Mat<long long>(rep.d, rep.d, 0);
  for (int i = 0; i < rep.d; i++) tp(i, i) = 1;
  for (int a = 0; a < r; a++) {
    rep.t_powers.push_back(tp);
    if (a + 1 < r) {
      Mat<long long> nx(rep.d, rep.d, 0);
      for (int i = 0; i < rep.d; i++)
        for (int j = 0; j < rep.d; j++) {
          long long acc = 0;
          for (int k = 0; k < rep.d; k++) acc += rep.t_action(i, k) * tp(k, j);
          nx(i, j) = acc % p;
        }
      tp = nx;
    }
  }
  // generator vectors: v_1 = 0; v_i = class of presentation generator i-1
  // (the class of x_i x_1^{-1}), i.e. unit vector (gen i-1, shift 0)
  rep.gen_vectors.assign(pres.gens, std::vector<long long>(rep.d, 0));
  for (int g = 1; g < pres.gens; g++) {
    auto coords = mod.project_unit((g - 1) * r + 0);
    rep.gen_vectors[g] = coords;
  }
  // validate: relators map to the identity of Gamma
  for (auto& rel : pres.relators) {
    auto e = rep.eval_word(rel);
    bool iszero = (e.first == 0);
    for (auto v : e.second)
      if (v % p != 0) iszero = false;
    if (!iszero) throw std::runtime_error("metabelian_rep: relator validation failed");
  }
  return rep;
}

// ---- twisted Alexander polynomial ----

namespace detail {

// Block (alpha tensor phi)(x_g)^{e} as a matrix of Laurent polynomials.
inline Mat<ZPoly> rep_block(const Representation& rho, int g, int e) {
  int n = rho.dim;
  Mat<ZPoly> out(n, n, ZPoly());
  if (e == 1) {
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (rho.images[g](i, j) != 0)
          out(i, j) = ZPoly::monomial(rho.images[g](i, j), rho.phi[g]);
    return out;
  }
  // inverse block: alpha(x_g)^{-1} t^{-phi}
  IntMatrix inv = rho.image_of(FreeWord::gen(g, -1));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      if (inv(i, j) != 0) out(i, j) = ZPoly::monomial(inv(i, j), -rho.phi[g]);
  return out;
}

inline Mat<ZPoly> word_block(const Representation& rho, const FreeWord& w) {
  int n = rho.dim;
  IntMatrix m = rho.image_of(w);
  int ph = 0;
  for (auto& [g, e] : w.letters) ph += e * rho.phi[g];
  Mat<ZPoly> out(n, n, ZPoly());
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      if (m(i, j) != 0) out(i, j) = ZPoly::monomial(m(i, j), ph);
  return out;
}

inline Mat<ZPoly> fox_block(const Representation& rho, const Presentation& p, const FreeWord& rel,
                            int j) {
  int n = rho.dim;
  Mat<ZPoly> acc(n, n, ZPoly());
  for (auto& [w, c] : fox_derivative(rel, j)) {
    Mat<ZPoly> b = word_block(rho, w);
    for (int u = 0; u < n; u++)
      for (int v = 0; v < n; v++) acc(u, v) = acc(u, v) + Int(c) * b(u, v);
  }
  return acc;
}

// det((alpha tensor phi)(x_j) - I) as a Laurent polynomial.
inline ZPoly denominator_det(const Representation& rho, const Presentation& p, int j) {
  int n = rho.dim;
  Mat<ZPoly> b = rep_block(rho, j, 1);
  for (int i = 0; i < n; i++) b(i, i) = b(i, i) - ZPoly(Int(1));
  return bareiss_det(b, ZPoly(Int(1)));
}

}  // namespace detail

// Order of the twisted zeroth homology: gcd of the maximal minors of the
// block row [(alpha tensor phi)(x_i) - I]_i. Incremental gcd with early
// termination at a unit; full enumeration below a size threshold; beyond it
// the gcd factors as gcd(contents) * primitive(Q[t]-order), both exact.
inline ZPoly twisted_order_h0(const Presentation& p, const Representation& rho,
                              long long full_enum_threshold = 5000) {
  int n = rho.dim, m = p.gens;
  Mat<ZPoly> row(n, n * m, ZPoly());
  for (int g = 0; g < m; g++) {
    Mat<ZPoly> b = detail::rep_block(rho, g, 1);
    for (int i = 0; i < n; i++) {
      b(i, i) = b(i, i) - ZPoly(Int(1));
      for (int j = 0; j < n; j++) row(i, g * n + j) = b(i, j);
    }
  }
  // aligned block minors first
  ZPoly g0;
  for (int g = 0; g < m; g++) {
    Mat<ZPoly> b(n, n);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) b(i, j) = row(i, g * n + j);
    ZPoly d = bareiss_det(b, ZPoly(Int(1)));
    g0 = g0.is_zero() ? normalize_units(d) : poly_gcd(g0, d);
    if (!g0.is_zero() && g0.degree() - g0.low == 0 && (g0.coeffs[0] == 1)) return g0;
  }
  int total_cols = n * m;
  // count column subsets
  double combos = 1;
  for (int i = 0; i < n; i++) combos = combos * (total_cols - i) / (i + 1);
  if (combos <= (double)full_enum_threshold) {
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (!g0.is_zero() && g0.degree() - g0.low == 0 && g0.coeffs[0] == 1) return;
      if (pos == n) {
        Mat<ZPoly> b(n, n);
        for (int i = 0; i < n; i++)
          for (int j = 0; j < n; j++) b(i, j) = row(i, idx[j]);
        ZPoly d = bareiss_det(b, ZPoly(Int(1)));
        if (!d.is_zero()) g0 = g0.is_zero() ? normalize_units(d) : poly_gcd(g0, d);
        return;
      }
      for (int c = start; c < total_cols; c++) {
        idx[pos] = c;
        rec(pos + 1, c + 1);
      }
    };
    rec(0, 0);
    return normalize_units(g0);
  }
  // UFD factorization: gcd over Z[t] of all maximal minors equals
  // gcd_Z(contents) * primitive(gcd over Q[t]); an aligned block minor is
  // primitive (product of cyclotomic-like factors), so the content factor is
  // gcd of the block-minor contents, and the Q[t] part is the product of the
  // Smith divisors of the row over Q[t].
  Int content_gcd = 0;
  for (int g = 0; g < m; g++) {
    Mat<ZPoly> b(n, n);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) b(i, j) = row(i, g * n + j);
    content_gcd = gcd(content_gcd, content(bareiss_det(b, ZPoly(Int(1)))));
  }
  Mat<QPoly> qrow(n, total_cols);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < total_cols; j++) qrow(i, j) = to_rational(row(i, j));
  auto divisors = smith_rational_poly(qrow);
  QPoly prod{Rat(1)};
  for (auto& d : divisors) {
    if (d.is_zero()) throw std::runtime_error("twisted_order_h0: row not of full rank");
    prod = prod * d;
  }
  // clear denominators to the primitive integer representative
  Int den = 1;
  for (auto& c : prod.coeffs) den = lcm(den, Int(c.get_den()));
  std::vector<Int> cs;
  for (auto& c : prod.coeffs) cs.push_back(Int(c * Rat(den)));
  ZPoly prim = primitive_part(ZPoly(prod.low, std::move(cs)));
  return normalize_units(content_gcd * prim);
}

// Twisted Alexander polynomial as the order of the twisted first homology:
// W_j * Delta_0 with W_j = det(Jacobian block matrix minus column j) /
// det((alpha tensor phi)(x_j) - I), reduced exactly.
inline ZPoly twisted_alexander(const Presentation& p, const Representation& rho, int j = 0) {
  int n = rho.dim, m = p.gens;
  assert((int)p.relators.size() == m - 1);
  ZPoly den = detail::denominator_det(rho, p, j);
  if (den.is_zero()) throw std::domain_error("twisted_alexander: deleted column is singular");
  ZPoly delta0 = twisted_order_h0(p, rho);
  if (m == 1) {
    auto q = div_exact_field(to_rational(delta0), to_rational(den));
    if (!q) throw std::runtime_error("twisted_alexander: order division failed");
    auto z = to_integral(*q);
    if (!z) throw std::runtime_error("twisted_alexander: nonintegral order");
    return normalize_units(*z);
  }
  Mat<ZPoly> big(n * (m - 1), n * (m - 1), ZPoly());
  for (int i = 0; i < m - 1; i++) {
    int cj = 0;
    for (int g = 0; g < m; g++) {
      if (g == j) continue;
      Mat<ZPoly> b = detail::fox_block(rho, p, p.relators[i], g);
      for (int u = 0; u < n; u++)
        for (int v = 0; v < n; v++) big(i * n + u, cj * n + v) = b(u, v);
      cj++;
    }
  }
  ZPoly num = bareiss_det(big, ZPoly(Int(1)));
  // Delta = num * Delta_0 / den, exact in Q[t], integral up to units
  QPoly prod = to_rational(num) * to_rational(delta0);
  auto q = div_exact_field(prod, to_rational(den));
  if (!q) throw std::runtime_error("twisted_alexander: Wada quotient not exact");
  auto z = to_integral(normalize_units(*q));
  if (!z) throw std::runtime_error("twisted_alexander: nonintegral twisted order");
  return normalize_units(*z);
}

// Delta_K^{r,p}: twisted polynomial of the regular metabelian representation;
// never zero (hard postcondition).
inline ZPoly delta_rp(const Presentation& pres, int r, long long p,
                      long long group_order_cap = 2000) {
  MetabelianRep mrep = metabelian_rep(pres, r, p, group_order_cap);
  Representation rho = mrep.to_representation();
  if (!validate_representation(pres, rho))
    throw std::runtime_error("delta_rp: representation validation failed");
  ZPoly d = twisted_alexander(pres, rho, 0);
  if (d.is_zero()) throw std::runtime_error("delta_rp: twisted polynomial vanished");
  return d;
}

// Satellite formula: (1/c^n) res(Delta_J, charpoly_A) * Delta_K^alpha where c
// is the leading coefficient of Delta_J and n = deg charpoly_A.
inline ZPoly satellite_twisted_alexander(const ZPoly& delta_k_alpha, const ZPoly& delta_j,
                                         const ZPoly& charpoly_a, int n_dim) {
  if (delta_j.is_zero()) throw std::domain_error("satellite_twisted_alexander: Delta_J = 0");
  ZPoly dj = delta_j.shifted(-delta_j.low);
  ZPoly fa = charpoly_a.shifted(-charpoly_a.low);
  assert(fa.degree() == n_dim && fa.leading() == 1);
  Int res = resultant(dj, fa);
  Int cn = 1;
  for (int i = 0; i < n_dim; i++) cn *= dj.leading();
  Int q, rem;
  mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), res.get_mpz_t(), cn.get_mpz_t());
  if (rem != 0) throw std::runtime_error("satellite_twisted_alexander: nonintegral scale");
  return normalize_units(q * delta_k_alpha);
}

// res(Phi_m, Phi_n) for m < n: q^{phi(m)} when m | n and n/m is a prime power
// q^j, and 1 otherwise.
inline Int cyclotomic_resultant(int m, int n) {
  if (m >= n) throw std::domain_error("cyclotomic_resultant: requires m < n");
  if (n % m != 0) return 1;
  int ratio = n / m;
  auto f = factorize(ratio);
  if (f.size() != 1) return 1;
  Int q = f.begin()->first;
  return pow_int(q, euler_phi(m));
}

// The q-power satellite family: the twisted polynomial of the satellite with
// companion T(p,q) # -T(p,q) along an axis with nonzero class A in the module.
struct SatelliteFamilyResult {
  ZPoly delta;   // q^{m_q} * Delta_K^{r,p}
  int m_q = 0;   // positive exponent
  ZPoly base;    // Delta_K^{r,p}
  ZPoly charpoly;  // characteristic polynomial of alpha([A])
};

inline SatelliteFamilyResult satellite_family_delta(const Presentation& pres, int r, long long p,
                                                    const std::vector<long long>& a_class,
                                                    long long q,
                                                    long long group_order_cap = 2000) {
  MetabelianRep mrep = metabelian_rep(pres, r, p, group_order_cap);
  bool zero = true;
  for (auto v : a_class)
    if (v % p != 0) zero = false;
  if (zero || (int)a_class.size() != mrep.d)
    throw std::domain_error("satellite_family_delta: A class must be nonzero in the module");
  if (q == p || !is_probab_prime(Int((long)q)))
    throw std::domain_error("satellite_family_delta: q must be a prime different from p");
  SatelliteFamilyResult out;
  std::vector<long long> v(a_class);
  for (auto& x : v) x = ((x % p) + p) % p;
  auto gamma = std::make_pair(0, v);
  out.charpoly = mrep.permutation_charpoly(gamma);
  ZPoly phi_pq = cyclotomic((int)(p * q));
  Int res = resultant(out.charpoly, phi_pq);
  Int res2 = res * res;
  // must be a positive q-power
  Int val = res2 < 0 ? Int(-res2) : res2;
  int mq = 0;
  while (mod_ll(val, q) == 0) {
    val /= (long)q;
    mq++;
  }
  if (val != 1 || mq <= 0)
    throw std::runtime_error("satellite_family_delta: resultant is not a nontrivial q-power");
  out.m_q = mq;
  out.base = delta_rp(pres, r, p, group_order_cap);
  out.delta = normalize_units(res2 * out.base);
  return out;
}

}  // namespace ribcon
