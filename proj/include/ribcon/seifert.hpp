#pragma once
// Classical knot invariants from a Seifert matrix: Alexander polynomial,
// determinant, branched cover homology, Levine-Tristram signature profile and
// exact elementary-divisor cross-checks.

#include "ribcon/zmodules.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <optional>

namespace ribcon {

struct SeifertMatrix {
  IntMatrix v;  // square, even size, det(V - V^T) = 1

  SeifertMatrix() = default;
  explicit SeifertMatrix(IntMatrix m) : v(std::move(m)) {
    if (!valid()) throw std::domain_error("SeifertMatrix: V - V^T must be unimodular skew");
  }

  int size() const { return v.rows; }

  bool valid() const {
    if (v.rows != v.cols) return false;
    if (v.rows % 2 != 0) return false;
    IntMatrix s(v.rows, v.cols);
    for (int i = 0; i < v.rows; i++)
      for (int j = 0; j < v.cols; j++) s(i, j) = v(i, j) - v(j, i);
    return bareiss_det(s, Int(1)) == 1;
  }

  // reverse mirror (-K): V -> -V; size is even so V - V^T stays unimodular
  SeifertMatrix concordance_inverse() const {
    IntMatrix m = v;
    for (auto& x : m.a) x = -x;
    return SeifertMatrix(m);
  }

  // mirror image: V -> -V^T
  SeifertMatrix mirror() const {
    IntMatrix m(v.rows, v.cols);
    for (int i = 0; i < v.rows; i++)
      for (int j = 0; j < v.cols; j++) m(i, j) = -v(j, i);
    return SeifertMatrix(m);
  }

  static SeifertMatrix connected_sum(const SeifertMatrix& a, const SeifertMatrix& b) {
    return SeifertMatrix(block_diag(a.v, b.v, Int(0)));
  }
};

inline Mat<ZPoly> t_v_minus_vt(const SeifertMatrix& s) {
  int n = s.size();
  Mat<ZPoly> m(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      ZPoly e = ZPoly::monomial(s.v(i, j), 1) - ZPoly(Int(s.v(j, i)));
      m(i, j) = e;
    }
  return m;
}

// normalize_units(det(tV - V^T))
inline ZPoly alexander_poly(const SeifertMatrix& s) {
  if (s.size() == 0) return ZPoly(Int(1));
  return normalize_units(bareiss_det(t_v_minus_vt(s), ZPoly(Int(1))));
}

// |det(V + V^T)|
inline Int knot_determinant(const SeifertMatrix& s) {
  if (s.size() == 0) return 1;
  IntMatrix m(s.size(), s.size());
  for (int i = 0; i < s.size(); i++)
    for (int j = 0; j < s.size(); j++) m(i, j) = s.v(i, j) + s.v(j, i);
  return abs(bareiss_det(m, Int(1)));
}

// cokernel(-V - V^T) = H_1 of the double branched cover
inline AbelianGroup double_cover_homology(const SeifertMatrix& s) {
  IntMatrix m(s.size(), s.size());
  for (int i = 0; i < s.size(); i++)
    for (int j = 0; j < s.size(); j++) m(i, j) = -s.v(i, j) - s.v(j, i);
  return cokernel(m);
}

// |H_1(Sigma_r)| = |prod_{j=1}^{r-1} Delta(e^{2 pi i j / r})|, exactly as a
// resultant with (t^r - 1)/(t - 1); 0 encodes infinite homology.
inline Int branched_cover_order(const SeifertMatrix& s, int r) {
  assert(r >= 2);
  ZPoly delta = alexander_poly(s);
  std::vector<Int> cs(r, Int(1));  // 1 + t + ... + t^{r-1}
  ZPoly cyc(0, std::move(cs));
  return abs(resultant(cyc, delta));
}

// H_K tensor F_p[t]/(t^r - 1) as an F_p-space with its t-action, from the
// presentation matrix tV - V^T. Returns dimension and the t-endomorphism.
struct FpModuleWithT {
  int dim = 0;
  Mat<long long> t_action;  // dim x dim over F_p
  long long p = 0;
  // projection data: coker basis indices inside the big F_p space
  std::vector<int> basis_index;
  Mat<long long> reducer;  // echelon columns of the relation space
  std::vector<int> pivot_rows;
  int big_dim = 0;
  int block_rows = 0;  // generators of the presentation
  int r = 0;

  // class of a unit vector (gen g, shift s) in coker coordinates
  std::vector<long long> project_unit(int flat_index) const {
    std::vector<long long> v(big_dim, 0);
    v[flat_index] = 1;
    return project(v);
  }

  std::vector<long long> project(std::vector<long long> v) const {
    // reduce against echelon columns, read off non-pivot coordinates
    for (size_t k = 0; k < pivot_rows.size(); k++) {
      long long x = v[pivot_rows[k]] % p;
      if (x < 0) x += p;
      if (x)
        for (int i = 0; i < big_dim; i++) {
          v[i] = (v[i] - x * reducer(i, (int)k)) % p;
          if (v[i] < 0) v[i] += p;
        }
    }
    std::vector<long long> out(basis_index.size());
    for (size_t i = 0; i < basis_index.size(); i++) out[i] = v[basis_index[i]] % p;
    return out;
  }
};

// Generic version over any square presentation matrix over Z[t^{\pm 1}].
inline FpModuleWithT fp_module_with_t(const Mat<ZPoly>& pres, int r, long long p) {
  int g = pres.rows;
  int big = g * r;
  Mat<long long> m(big, big, 0);
  for (int i = 0; i < g; i++)
    for (int j = 0; j < pres.cols; j++) {
      const ZPoly& e = pres(i, j);
      if (e.is_zero()) continue;
      for (int k = 0; k < e.length(); k++) {
        long long c = mod_ll(e.coeffs[k], p);
        if (!c) continue;
        int deg = e.low + k;
        for (int s = 0; s < r; s++) {
          int srow = ((deg + s) % r + r) % r;
          // column (j, s) contributes c * t^{deg+s} g_i
          m(i * r + srow, j * r + s) = (m(i * r + srow, j * r + s) + c) % p;
        }
      }
    }
  FpEchelon e = fp_column_echelon(m, p);
  FpModuleWithT out;
  out.p = p;
  out.big_dim = big;
  out.block_rows = g;
  out.r = r;
  out.reducer = e.cols;
  out.pivot_rows = e.pivot_rows;
  std::vector<char> is_pivot(big, 0);
  for (int pr : e.pivot_rows) is_pivot[pr] = 1;
  for (int i = 0; i < big; i++)
    if (!is_pivot[i]) out.basis_index.push_back(i);
  out.dim = (int)out.basis_index.size();
  // t-action: t * (gen i, shift s) = (gen i, shift s+1 mod r)
  out.t_action = Mat<long long>(out.dim, out.dim, 0);
  for (int bcol = 0; bcol < out.dim; bcol++) {
    int flat = out.basis_index[bcol];
    int gen = flat / r, shift = flat % r;
    int tflat = gen * r + (shift + 1) % r;
    auto coords = out.project_unit(tflat);
    for (int i = 0; i < out.dim; i++) out.t_action(i, bcol) = coords[i];
  }
  return out;
}

inline FpModuleWithT branched_cover_fp(const SeifertMatrix& s, int r, long long p) {
  return fp_module_with_t(t_v_minus_vt(s), r, p);
}

// ---- Levine-Tristram signatures ----

namespace detail {

using cplx = std::complex<long double>;

// Cyclic Jacobi for Hermitian matrices; returns real eigenvalues.
inline std::vector<long double> hermitian_eigenvalues(std::vector<std::vector<cplx>> a) {
  int n = (int)a.size();
  for (int sweep = 0; sweep < 100; sweep++) {
    long double off = 0;
    for (int i = 0; i < n; i++)
      for (int j = i + 1; j < n; j++) off += std::norm(a[i][j]);
    if (off < 1e-40L) break;
    for (int pq = 0; pq < n; pq++)
      for (int q = pq + 1; q < n; q++) {
        int p = pq;
        cplx apq = a[p][q];
        if (std::abs(apq) < 1e-24L) continue;
        long double app = a[p][p].real(), aqq = a[q][q].real();
        long double absapq = std::abs(apq);
        cplx phase = apq / absapq;
        long double theta = (aqq - app) / (2 * absapq);
        long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        long double c = 1 / std::sqrt(t * t + 1);
        long double sr = t * c;
        cplx s = sr * phase;
        // G = [[c, conj(s)], [-s, c]] applied on rows/cols p,q
        for (int k = 0; k < n; k++) {
          cplx akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - std::conj(s) * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; k++) {
          cplx apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = std::conj(s) * apk + c * aqk;
        }
      }
  }
  std::vector<long double> ev(n);
  for (int i = 0; i < n; i++) ev[i] = a[i][i].real();
  return ev;
}

}  // namespace detail

struct SignatureResult {
  int sigma = 0;
  int eta = 0;
  bool near_threshold = false;  // an eigenvalue fell within 10x of the zero cut
};

// Signature and nullity of (1-w)V + (1-wbar)V^T at w = e^{i pi x}. Sign
// convention: the right-handed trefoil [[-1,1],[0,-1]] has sigma_1 = -2.
inline SignatureResult signature_nullity(const SeifertMatrix& s, double x) {
  int n = s.size();
  SignatureResult res;
  if (n == 0) return res;
  using detail::cplx;
  long double c = std::cos((long double)M_PI * x), si = std::sin((long double)M_PI * x);
  cplx w(c, si), wb(c, -si), one(1, 0);
  std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n));
  long double maxnorm = 0;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      m[i][j] = (one - w) * (long double)s.v(i, j).get_d() +
                (one - wb) * (long double)s.v(j, i).get_d();
      maxnorm = std::max(maxnorm, std::abs(m[i][j]));
    }
  auto ev = detail::hermitian_eigenvalues(std::move(m));
  long double thr = 1e-8L * std::max(maxnorm, (long double)1);
  for (auto e : ev) {
    if (e > thr)
      res.sigma++;
    else if (e < -thr)
      res.sigma--;
    else
      res.eta++;
    if (std::fabs(e) >= thr && std::fabs(e) < 10 * thr) res.near_threshold = true;
  }
  return res;
}

// zeta-power multiplicities among the elementary divisors of tV - V^T over
// Q[t]; zeta must be irreducible over Q with zeta = involution(zeta) up to
// units. Returns {i : count of zeta^i blocks}.
inline std::map<int, int> zeta_elementary_divisors(const SeifertMatrix& s, const ZPoly& zeta) {
  if (zeta.is_zero() || zeta.degree() - zeta.low < 1)
    throw std::domain_error("zeta_elementary_divisors: bad zeta");
  {
    ZPoly z = normalize_units(zeta);
    if (z.degree() == 2) {
      // quadratic is reducible over Q iff the discriminant is a square
      Int a = z.coeff_at(2), b = z.coeff_at(1), c = z.coeff_at(0);
      if (is_perfect_square(b * b - 4 * a * c))
        throw std::domain_error("zeta_elementary_divisors: reducible zeta");
    }
  }
  int n = s.size();
  Mat<QPoly> m(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      m(i, j) = to_rational(ZPoly::monomial(s.v(i, j), 1) - ZPoly(Int(s.v(j, i))));
  auto divisors = smith_rational_poly(m);
  QPoly zq = to_rational(normalize_units(zeta));
  std::map<int, int> out;
  for (auto d : divisors) {
    if (d.is_zero()) continue;
    int v = 0;
    while (true) {
      auto q = div_exact_field(d, zq);
      if (!q) break;
      d = *q;
      v++;
    }
    if (v > 0) out[v]++;
  }
  return out;
}

struct SignatureProfile {
  struct Jump {
    double x;
    int deg, eta, sigma;
    int d;  // sigma_x minus the two-sided average
  };
  std::vector<Jump> jumps;
  std::vector<int> arc_sigma;       // sigma on the open arcs between jumps
  std::vector<double> arc_samples;  // sample point per arc
};

// Candidate jumps are the unit-circle roots of Delta; sigma on arcs is
// sampled at midpoints.
inline SignatureProfile signature_profile(const SeifertMatrix& s) {
  SignatureProfile out;
  if (s.size() == 0) {
    out.arc_sigma.push_back(0);
    out.arc_samples.push_back(1.0);
    return out;
  }
  ZPoly delta = alexander_poly(s);
  auto roots = unit_circle_roots(delta);
  std::vector<double> xs;
  for (auto& [x, mult] : roots) xs.push_back(x);
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double x : xs) cuts.push_back(x);
  cuts.push_back(2.0);
  for (size_t i = 0; i + 1 < cuts.size(); i++) {
    double mid = (cuts[i] + cuts[i + 1]) / 2;
    auto sr = signature_nullity(s, mid);
    out.arc_sigma.push_back(sr.sigma);
    out.arc_samples.push_back(mid);
  }
  for (size_t i = 0; i < xs.size(); i++) {
    auto sr = signature_nullity(s, xs[i]);
    int deg = circle_root_multiplicity(delta, xs[i]);
    // exact eta when 2cos(pi x) is rational
    int eta = sr.eta;
    if (auto zeta = rational_cos_minpoly(xs[i])) {
      auto blocks = zeta_elementary_divisors(s, *zeta);
      int exact_eta = 0;
      for (auto& [v, cnt] : blocks) exact_eta += cnt;
      eta = exact_eta;
    }
    int d = sr.sigma - (out.arc_sigma[i] + out.arc_sigma[i + 1]) / 2;
    out.jumps.push_back({xs[i], deg, eta, sr.sigma, d});
  }
  return out;
}

}  // namespace ribcon
