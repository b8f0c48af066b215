#pragma once
// Sesquilinear Hermitian nonsingular linking forms on finite-length torsion
// modules over a DVR with involution satisfying s + conj(s) = 1: valuation,
// constructive diagonalization, graded residue forms, orthogonal complements,
// quotient forms, metabolizer search, and the module-monoid feasibility test.

#include "ribcon/matrix.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace ribcon {

inline long long exgcd_inv(long long a, long long m) {
  long long old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  assert(old_r == 1);
  long long inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

// ---- DVR instances, truncated at precision K ----

// p-local integers Z_(p) for odd p, elements mod p^K, trivial involution,
// uniformizer tau = p, s = (p^K + 1)/2.
struct ZpLocal {
  long long p = 3;
  int K = 1;
  long long pk = 3;  // p^K
  using Elem = long long;
  using Residue = long long;

  ZpLocal() = default;
  ZpLocal(long long prime, int precision) : p(prime), K(precision) {
    if (prime == 2) throw std::domain_error("ZpLocal: p = 2 violates condition (T)");
    pk = 1;
    for (int i = 0; i < K; i++) pk *= p;
  }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long long v) const {
    v %= pk;
    if (v < 0) v += pk;
    return v;
  }
  Elem add(Elem a, Elem b) const { return (a + b) % pk; }
  Elem sub(Elem a, Elem b) const { return ((a - b) % pk + pk) % pk; }
  Elem mul(Elem a, Elem b) const { return (long long)((__int128)a * b % pk); }
  Elem neg(Elem a) const { return (pk - a) % pk; }
  Elem conj(Elem a) const { return a; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  int val(Elem a) const {
    if (a == 0) return K;
    int v = 0;
    while (a % p == 0) {
      a /= p;
      v++;
    }
    return v;
  }
  Elem unit_inv(Elem a) const { return exgcd_inv(a, pk); }
  Elem mul_tau_pow(Elem a, int j) const {
    for (int i = 0; i < j; i++) a = (long long)((__int128)a * p % pk);
    return a;
  }
  Elem div_tau_pow(Elem a, int j) const {
    for (int i = 0; i < j; i++) {
      assert(a % p == 0);
      a /= p;
    }
    return a;
  }
  Elem s_half() const { return (pk + 1) / 2; }
  Residue residue(Elem a) const { return a % p; }
  std::string str(Elem a) const { return std::to_string(a); }

  long long residue_count(int k) const {
    long long n = 1;
    for (int i = 0; i < k; i++) n *= p;
    return n;
  }
  Elem nth_element(int /*k*/, long long ix) const { return ix; }

  ZpLocal resized(int K2) const { return ZpLocal(p, K2); }
  Elem to_precision(Elem e, const ZpLocal& target) const { return e % target.pk; }
};

// F_p[u] localized at (u), odd p, truncated series of length K.
struct FpULocal {
  long long p = 3;
  int K = 1;
  using Elem = std::vector<long long>;  // coefficients of u^0..u^{K-1} mod p
  using Residue = long long;

  FpULocal() = default;
  FpULocal(long long prime, int precision) : p(prime), K(precision) {
    if (prime == 2) throw std::domain_error("FpULocal: p = 2 violates condition (T)");
  }
  Elem zero() const { return Elem(K, 0); }
  Elem one() const {
    Elem e(K, 0);
    e[0] = 1;
    return e;
  }
  Elem from_int(long long v) const {
    Elem e(K, 0);
    v %= p;
    if (v < 0) v += p;
    e[0] = v;
    return e;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = (a[i] + b[i]) % p;
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = ((a[i] - b[i]) % p + p) % p;
    return c;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    Elem c(K, 0);
    for (int i = 0; i < K; i++) {
      if (!a[i]) continue;
      for (int j = 0; i + j < K; j++) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    return c;
  }
  Elem neg(const Elem& a) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = (p - a[i]) % p;
    return c;
  }
  Elem conj(const Elem& a) const { return a; }
  bool is_zero(const Elem& a) const {
    for (auto x : a)
      if (x) return false;
    return true;
  }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  int val(const Elem& a) const {
    for (int i = 0; i < K; i++)
      if (a[i]) return i;
    return K;
  }
  Elem unit_inv(const Elem& a) const {
    assert(a[0] != 0);
    Elem r(K, 0);
    long long inv0 = exgcd_inv(a[0], p);
    r[0] = inv0;
    for (int i = 1; i < K; i++) {
      long long acc = 0;
      for (int j = 1; j <= i; j++) acc = (acc + a[j] * r[i - j]) % p;
      r[i] = (p - acc) % p * inv0 % p;
    }
    return r;
  }
  Elem mul_tau_pow(const Elem& a, int j) const {
    Elem c(K, 0);
    for (int i = 0; i + j < K; i++) c[i + j] = a[i];
    return c;
  }
  Elem div_tau_pow(const Elem& a, int j) const {
    Elem c(K, 0);
    for (int i = j; i < K; i++) c[i - j] = a[i];
    return c;
  }
  Elem s_half() const { return from_int((p + 1) / 2); }
  Residue residue(const Elem& a) const { return a[0]; }
  std::string str(const Elem& a) const {
    std::string s;
    for (int i = 0; i < K; i++) {
      if (!s.empty()) s += ",";
      s += std::to_string(a[i]);
    }
    return "[" + s + "]";
  }

  long long residue_count(int k) const {
    long long n = 1;
    for (int i = 0; i < k; i++) n *= p;
    return n;
  }
  Elem nth_element(int k, long long ix) const {
    Elem e(K, 0);
    for (int i = 0; i < k; i++) {
      e[i] = ix % p;
      ix /= p;
    }
    return e;
  }

  FpULocal resized(int K2) const { return FpULocal(p, K2); }
  Elem to_precision(const Elem& e, const FpULocal& target) const {
    Elem out(target.K, 0);
    for (int i = 0; i < std::min(K, target.K); i++) out[i] = e[i];
    return out;
  }
};

// Q(i)[u] localized at (u): exact stand-in for the real-coefficient DVRs whose
// residue field is C; Hermitian residue classes are real rationals, so the
// monoid of residue forms is the signature monoid N^2.
struct GaussRat {
  Rat re, im;
  GaussRat() : re(0), im(0) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRat conj() const { return {re, Rat(0) - im}; }
  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat inv() const {
    Rat n = re * re + im * im;
    return {re / n, (Rat(0) - im) / n};
  }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
};

struct GaussLocal {
  int K = 1;
  using Elem = std::vector<GaussRat>;
  using Residue = GaussRat;

  GaussLocal() = default;
  explicit GaussLocal(int precision) : K(precision) {}
  Elem zero() const { return Elem(K); }
  Elem one() const {
    Elem e(K);
    e[0] = GaussRat(Rat(1), Rat(0));
    return e;
  }
  Elem from_int(long long v) const {
    Elem e(K);
    e[0] = GaussRat(Rat((long)v), Rat(0));
    return e;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = a[i] + b[i];
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = a[i] - b[i];
    return c;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    Elem c(K);
    for (int i = 0; i < K; i++) {
      if (a[i].is_zero()) continue;
      for (int j = 0; i + j < K; j++) c[i + j] = c[i + j] + a[i] * b[j];
    }
    return c;
  }
  Elem neg(const Elem& a) const {
    Elem c(K);
    GaussRat m1(Rat(-1), Rat(0));
    for (int i = 0; i < K; i++) c[i] = m1 * a[i];
    return c;
  }
  Elem conj(const Elem& a) const {
    Elem c(K);
    for (int i = 0; i < K; i++) c[i] = a[i].conj();
    return c;
  }
  bool is_zero(const Elem& a) const {
    for (auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }
  bool eq(const Elem& a, const Elem& b) const {
    for (int i = 0; i < K; i++)
      if (!(a[i] == b[i])) return false;
    return true;
  }
  int val(const Elem& a) const {
    for (int i = 0; i < K; i++)
      if (!a[i].is_zero()) return i;
    return K;
  }
  Elem unit_inv(const Elem& a) const {
    assert(!a[0].is_zero());
    Elem r(K);
    GaussRat inv0 = a[0].inv();
    r[0] = inv0;
    for (int i = 1; i < K; i++) {
      GaussRat acc;
      for (int j = 1; j <= i; j++) acc = acc + a[j] * r[i - j];
      GaussRat m1(Rat(-1), Rat(0));
      r[i] = m1 * acc * inv0;
    }
    return r;
  }
  Elem mul_tau_pow(const Elem& a, int j) const {
    Elem c(K);
    for (int i = 0; i + j < K; i++) c[i + j] = a[i];
    return c;
  }
  Elem div_tau_pow(const Elem& a, int j) const {
    Elem c(K);
    for (int i = j; i < K; i++) c[i - j] = a[i];
    return c;
  }
  Elem s_half() const {
    Elem e(K);
    e[0] = GaussRat(Rat(1, 2), Rat(0));
    return e;
  }
  Residue residue(const Elem& a) const { return a[0]; }
  std::string str(const Elem& a) const {
    std::string s;
    for (int i = 0; i < K; i++) {
      if (!s.empty()) s += ",";
      s += a[i].re.get_str() + (a[i].im != 0 ? "+" + a[i].im.get_str() + "i" : "");
    }
    return "[" + s + "]";
  }

  GaussLocal resized(int K2) const { return GaussLocal(K2); }
  Elem to_precision(const Elem& e, const GaussLocal& target) const {
    Elem out(target.K);
    for (int i = 0; i < std::min(K, target.K); i++) out[i] = e[i];
    return out;
  }
};

// ---- Q(R)/R values: num / tau^den with num tracked mod tau^K ----

template <class Ctx>
struct QmodR {
  typename Ctx::Elem num;
  int den = 0;  // 0 encodes the zero class
};

template <class Ctx>
QmodR<Ctx> qm_make(const Ctx& c, typename Ctx::Elem num, int den) {
  // reduce: strip common tau factors, clamp vanishing numerators
  while (den > 0 && c.val(num) >= 1) {
    num = c.div_tau_pow(num, 1);
    den--;
  }
  if (den == 0) return {c.zero(), 0};
  // numerator only matters mod tau^den
  return {num, den};
}

template <class Ctx>
QmodR<Ctx> qm_zero(const Ctx& c) {
  return {c.zero(), 0};
}

template <class Ctx>
bool qm_is_zero(const QmodR<Ctx>& q) {
  return q.den == 0;
}

template <class Ctx>
int qm_nu(const QmodR<Ctx>& q) {
  return q.den;
}

template <class Ctx>
QmodR<Ctx> qm_add(const Ctx& c, const QmodR<Ctx>& a, const QmodR<Ctx>& b) {
  if (a.den == 0) return b;
  if (b.den == 0) return a;
  int d = std::max(a.den, b.den);
  auto na = c.mul_tau_pow(a.num, d - a.den);
  auto nb = c.mul_tau_pow(b.num, d - b.den);
  return qm_make(c, c.add(na, nb), d);
}

template <class Ctx>
QmodR<Ctx> qm_neg(const Ctx& c, const QmodR<Ctx>& a) {
  if (a.den == 0) return a;
  return {c.neg(a.num), a.den};
}

template <class Ctx>
QmodR<Ctx> qm_scale(const Ctx& c, const typename Ctx::Elem& r, const QmodR<Ctx>& a) {
  if (a.den == 0) return a;
  return qm_make(c, c.mul(r, a.num), a.den);
}

template <class Ctx>
QmodR<Ctx> qm_conj(const Ctx& c, const QmodR<Ctx>& a) {
  if (a.den == 0) return a;
  return {c.conj(a.num), a.den};
}

template <class Ctx>
bool qm_eq(const Ctx& c, const QmodR<Ctx>& a, const QmodR<Ctx>& b) {
  if (a.den != b.den) return false;
  if (a.den == 0) return true;
  // compare numerators mod tau^den
  auto d = c.sub(a.num, b.num);
  return c.val(d) >= a.den;
}

// ---- The torsion linking form ----

template <class Ctx>
struct TorsionLinkingForm {
  Ctx ctx;
  std::vector<int> orders;  // k_i >= 1, generator e_i annihilated by tau^{k_i}
  Mat<QmodR<Ctx>> gram;     // lambda(e_i, e_j), nu <= min(k_i, k_j)

  using Elem = typename Ctx::Elem;
  using Vec = std::vector<Elem>;  // coordinates w.r.t. e_1..e_n

  int n() const { return (int)orders.size(); }
  int total_length() const {
    int s = 0;
    for (int k : orders) s += k;
    return s;
  }

  Vec zero_vec() const { return Vec(n(), ctx.zero()); }
  Vec unit_vec(int i) const {
    Vec v = zero_vec();
    v[i] = ctx.one();
    return v;
  }

  // minimal k with tau^k a = 0, honestly from coordinates
  int nu(const Vec& a) const {
    int m = 0;
    for (int i = 0; i < n(); i++) {
      int vi = std::min(ctx.val(a[i]), orders[i]);
      m = std::max(m, orders[i] - vi);
    }
    return m;
  }

  bool vec_is_zero(const Vec& a) const { return nu(a) == 0; }

  QmodR<Ctx> pairing(const Vec& a, const Vec& b) const {
    QmodR<Ctx> s = qm_zero(ctx);
    for (int i = 0; i < n(); i++) {
      if (ctx.is_zero(a[i])) continue;
      for (int j = 0; j < n(); j++) {
        if (ctx.is_zero(b[j])) continue;
        auto term = qm_scale(ctx, ctx.mul(a[i], ctx.conj(b[j])), gram(i, j));
        s = qm_add(ctx, s, term);
      }
    }
    return s;
  }

  bool hermitian() const {
    for (int i = 0; i < n(); i++)
      for (int j = 0; j < n(); j++)
        if (!qm_eq(ctx, gram(i, j), qm_conj(ctx, gram(j, i)))) return false;
    return true;
  }

  bool annihilation_ok() const {
    for (int i = 0; i < n(); i++)
      for (int j = 0; j < n(); j++)
        if (qm_nu(gram(i, j)) > std::min(orders[i], orders[j])) return false;
    return true;
  }
};

// diag summand: cyclic of order tau^k with lambda(e,e) = unit/tau^k
template <class Ctx>
struct DiagonalSummand {
  int order;
  typename Ctx::Elem unit;        // lambda(e,e) * tau^order, a unit
  typename Ctx::Residue residue;  // its class in the residue field
  std::vector<typename Ctx::Elem> basis;  // e in original coordinates
};

// Constructive orthogonal diagonalization (maximal-nu pivot, lowest index,
// s-correction when no generator is norm-maximal). Throws on singular input.
template <class Ctx>
std::vector<DiagonalSummand<Ctx>> diagonalize(const TorsionLinkingForm<Ctx>& f) {
  const Ctx& c = f.ctx;
  using Vec = typename TorsionLinkingForm<Ctx>::Vec;
  std::vector<Vec> gens;
  for (int i = 0; i < f.n(); i++) gens.push_back(f.unit_vec(i));
  std::vector<DiagonalSummand<Ctx>> out;
  int guard = f.total_length() + 1;
  while (guard-- > 0) {
    // drop dead generators
    std::vector<Vec> live;
    for (auto& g : gens)
      if (!f.vec_is_zero(g)) live.push_back(g);
    gens = live;
    if (gens.empty()) break;
    int k = 0, bi = -1;
    for (int i = 0; i < (int)gens.size(); i++) {
      int v = f.nu(gens[i]);
      if (v > k) {
        k = v;
        bi = i;
      }
    }
    Vec a = gens[bi];
    if (qm_nu(f.pairing(a, a)) != k) {
      int cj = -1;
      for (int j = 0; j < (int)gens.size(); j++)
        if (qm_nu(f.pairing(a, gens[j])) == k) {
          cj = j;
          break;
        }
      if (cj < 0) throw std::domain_error("diagonalize: singular form");
      if (qm_nu(f.pairing(gens[cj], gens[cj])) == k) {
        a = gens[cj];
      } else {
        // a = b + s * conj(r)^{-1} * c with lambda(b,c) = r / tau^k
        auto r = f.pairing(a, gens[cj]).num;
        auto coef = c.mul(c.s_half(), c.unit_inv(c.conj(r)));
        Vec na = a;
        for (int t = 0; t < f.n(); t++) na[t] = c.add(na[t], c.mul(coef, gens[cj][t]));
        a = na;
      }
    }
    auto paa = f.pairing(a, a);
    assert(qm_nu(paa) == k);
    DiagonalSummand<Ctx> d;
    d.order = k;
    d.unit = paa.num;
    d.residue = c.residue(paa.num);
    d.basis = a;
    out.push_back(d);
    auto w_inv = c.unit_inv(paa.num);
    // project every generator into <a>^perp
    for (auto& g : gens) {
      auto pga = f.pairing(g, a);
      if (qm_is_zero(pga)) continue;
      int m = qm_nu(pga);
      auto coef = c.mul_tau_pow(c.mul(pga.num, w_inv), k - m);
      for (int t = 0; t < f.n(); t++) g[t] = c.sub(g[t], c.mul(coef, a[t]));
    }
  }
  int total = 0;
  for (auto& d : out) total += d.order;
  if (total != f.total_length()) throw std::domain_error("diagonalize: singular form");
  return out;
}

// ---- local Smith decomposition over R/tau^K (chain ring) ----

template <class Ctx>
struct LocalSmith {
  std::vector<int> dvals;                // valuations of the diagonal
  std::vector<typename Ctx::Elem> diag;  // the diagonal entries (tau^d * unit)
  Mat<typename Ctx::Elem> ul;            // left transform: D = UL * M * VR
  Mat<typename Ctx::Elem> ulinv;         // UL^{-1}
  Mat<typename Ctx::Elem> vr;            // right transform
};

// Smith decomposition over R/tau^K. Elimination stops once the best pivot
// valuation reaches stop_val: quotients by a pivot of valuation v are only
// determined modulo tau^{K-v}, so callers needing exact transforms run this
// at doubled precision with stop_val at the original K.
template <class Ctx>
LocalSmith<Ctx> local_smith(const Ctx& c, Mat<typename Ctx::Elem> m, int stop_val = -1) {
  using E = typename Ctx::Elem;
  if (stop_val < 0) stop_val = c.K;
  int r = m.rows, cc = m.cols;
  auto ident = [&](int n) {
    Mat<E> id(n, n, c.zero());
    for (int i = 0; i < n; i++) id(i, i) = c.one();
    return id;
  };
  LocalSmith<Ctx> out;
  out.ul = ident(r);
  out.ulinv = ident(r);
  out.vr = ident(cc);
  int nmin = std::min(r, cc);
  for (int k = 0; k < nmin; k++) {
    int pi = -1, pj = -1, best = c.K + 1;
    for (int i = k; i < r; i++)
      for (int j = k; j < cc; j++) {
        int v = c.val(m(i, j));
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0 || best >= stop_val) break;  // rest counts as zero
    // swap into place
    if (pi != k) {
      for (int j = 0; j < cc; j++) std::swap(m(pi, j), m(k, j));
      for (int j = 0; j < r; j++) std::swap(out.ul(pi, j), out.ul(k, j));
      for (int i = 0; i < r; i++) std::swap(out.ulinv(i, pi), out.ulinv(i, k));
    }
    if (pj != k) {
      for (int i = 0; i < r; i++) std::swap(m(i, pj), m(i, k));
      for (int i = 0; i < cc; i++) std::swap(out.vr(i, pj), out.vr(i, k));
    }
    int v = best;
    E upart = c.div_tau_pow(m(k, k), v);
    E uinv = c.unit_inv(upart);
    for (int i = k + 1; i < r; i++) {
      if (c.val(m(i, k)) >= c.K) continue;
      // m(i,:) -= q * m(k,:) with q = m(i,k)/m(k,k)
      E q = c.mul(c.div_tau_pow(m(i, k), v), uinv);
      for (int j = 0; j < cc; j++) m(i, j) = c.sub(m(i, j), c.mul(q, m(k, j)));
      for (int j = 0; j < r; j++) out.ul(i, j) = c.sub(out.ul(i, j), c.mul(q, out.ul(k, j)));
      for (int i2 = 0; i2 < r; i2++)
        out.ulinv(i2, k) = c.add(out.ulinv(i2, k), c.mul(q, out.ulinv(i2, i)));
    }
    for (int j = k + 1; j < cc; j++) {
      if (c.val(m(k, j)) >= c.K) continue;
      E q = c.mul(c.div_tau_pow(m(k, j), v), uinv);
      for (int i = 0; i < r; i++) m(i, j) = c.sub(m(i, j), c.mul(q, m(i, k)));
      for (int i = 0; i < cc; i++) out.vr(i, j) = c.sub(out.vr(i, j), c.mul(q, out.vr(i, k)));
    }
  }
  for (int k = 0; k < nmin; k++) {
    out.dvals.push_back(c.val(m(k, k)));
    out.diag.push_back(m(k, k));
  }
  return out;
}

// Generators of { x in (R/tau^K)^n : x * M = 0 } as rows. Entries are taken
// as exact lifts into precision 2K so that the transform rows are exact
// modulo tau^K.
template <class Ctx>
Mat<typename Ctx::Elem> local_left_kernel(const Ctx& c, const Mat<typename Ctx::Elem>& m) {
  using E = typename Ctx::Elem;
  Ctx big = c.resized(2 * c.K);
  Mat<E> m2(m.rows, m.cols, big.zero());
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) m2(i, j) = c.to_precision(m(i, j), big);
  auto sm = local_smith(big, m2, c.K);
  int n = m.rows;
  Mat<E> out(n, n, c.zero());
  for (int i = 0; i < n; i++) {
    // rows beyond the diagonal meet no column: unconstrained
    int d = (i < (int)sm.dvals.size()) ? std::min(sm.dvals[i], c.K) : c.K;
    int e = (i < (int)sm.dvals.size()) ? std::max(c.K - d, 0) : 0;
    for (int j = 0; j < n; j++)
      out(i, j) = big.to_precision(big.mul_tau_pow(sm.ul(i, j), e), c);
  }
  return out;
}

// ---- module-level operations ----

// Orthogonal complement of the submodule generated by the given coordinate
// vectors; exact linear algebra over R/tau^K with per-coordinate moduli.
template <class Ctx>
std::vector<typename TorsionLinkingForm<Ctx>::Vec> orthogonal_complement(
    const TorsionLinkingForm<Ctx>& f,
    const std::vector<typename TorsionLinkingForm<Ctx>::Vec>& gens) {
  const Ctx& c = f.ctx;
  using E = typename Ctx::Elem;
  int n = f.n(), m = (int)gens.size();
  // condition: for all j, sum_i x_i * u_ij == 0 mod tau^K,
  // where u_ij = lambda(e_i, m_j) scaled to denominator K
  Mat<E> u(n, std::max(m, 1), c.zero());
  for (int j = 0; j < m; j++)
    for (int i = 0; i < n; i++) {
      auto q = f.pairing(f.unit_vec(i), gens[j]);
      if (q.den == 0) continue;
      u(i, j) = c.mul_tau_pow(q.num, c.K - q.den);
    }
  auto ker = local_left_kernel(c, u);
  std::vector<typename TorsionLinkingForm<Ctx>::Vec> out;
  for (int i = 0; i < ker.rows; i++) {
    typename TorsionLinkingForm<Ctx>::Vec v(ker.cols);
    for (int j = 0; j < ker.cols; j++) v[j] = ker(i, j);
    if (!f.vec_is_zero(v)) out.push_back(v);
  }
  // ensure the trivial relations are representable: tau^{k_i} e_i are zero in
  // the module, so nothing else is needed
  return out;
}

// Length of the submodule generated by the given vectors.
template <class Ctx>
int submodule_length(const TorsionLinkingForm<Ctx>& f,
                     const std::vector<typename TorsionLinkingForm<Ctx>::Vec>& gens) {
  const Ctx& c = f.ctx;
  using E = typename Ctx::Elem;
  int n = f.n();
  int rows = (int)gens.size() + n;
  Mat<E> rel(rows, n, c.zero());
  for (int i = 0; i < (int)gens.size(); i++)
    for (int j = 0; j < n; j++) rel(i, j) = gens[i][j];
  for (int i = 0; i < n; i++) rel((int)gens.size() + i, i) = c.mul_tau_pow(c.one(), f.orders[i]);
  auto sm = local_smith(c, rel);
  int quot = 0;  // length of A / S
  for (int j = 0; j < n; j++) quot += (j < (int)sm.dvals.size()) ? sm.dvals[j] : c.K;
  return f.total_length() - quot;
}

// The induced form on G^perp / G for G with G subset G^perp. The linear
// algebra runs at precision 2K (with elimination stopped at valuation K) so
// that transform rows, solution vectors and generator lifts are exact modulo
// tau^K.
template <class Ctx>
TorsionLinkingForm<Ctx> quotient_form(
    const TorsionLinkingForm<Ctx>& f,
    const std::vector<typename TorsionLinkingForm<Ctx>::Vec>& g_gens) {
  const Ctx& c = f.ctx;
  using E = typename Ctx::Elem;
  using Vec = typename TorsionLinkingForm<Ctx>::Vec;
  for (auto& x : g_gens)
    for (auto& y : g_gens)
      if (!qm_is_zero(f.pairing(x, y)))
        throw std::domain_error("quotient_form: G not contained in G^perp");
  auto h_gens = orthogonal_complement(f, g_gens);
  int s = (int)h_gens.size(), n = f.n();
  Ctx big = c.resized(2 * c.K);
  // relation rows over generators h_1..h_s:
  //   (a) syzygies: r with sum r_j h_j = 0 in A
  //   (b) each g expressed in the h-basis
  Mat<E> hmat(s, n, big.zero());
  for (int j = 0; j < s; j++)
    for (int i = 0; i < n; i++)
      hmat(j, i) = big.mul_tau_pow(c.to_precision(h_gens[j][i], big), c.K - f.orders[i]);
  auto sm = local_smith(big, hmat, c.K);
  std::vector<std::vector<E>> rel_rows;  // entries at precision K
  for (int i = 0; i < s; i++) {
    int d = (i < (int)sm.dvals.size()) ? std::min(sm.dvals[i], c.K) : c.K;
    int e = std::max(c.K - d, 0);
    std::vector<E> row(s);
    for (int j = 0; j < s; j++)
      row[j] = big.to_precision(big.mul_tau_pow(sm.ul(i, j), e), c);
    rel_rows.push_back(row);
  }
  for (auto& g : g_gens) {
    // solve r * hmat = g' with g'_i = g_i * tau^{K - k_i}
    std::vector<E> gp(n);
    for (int i = 0; i < n; i++)
      gp[i] = big.mul_tau_pow(c.to_precision(g[i], big), c.K - f.orders[i]);
    // z = g' * VR ; y_i = z_i / tau^{d_i} ; r = y * UL
    std::vector<E> z(n, big.zero());
    for (int j = 0; j < n; j++) {
      E acc = big.zero();
      for (int i = 0; i < n; i++) acc = big.add(acc, big.mul(gp[i], sm.vr(i, j)));
      z[j] = acc;
    }
    std::vector<E> y(s, big.zero());
    for (int i = 0; i < s; i++) {
      if (i >= (int)sm.dvals.size() || i >= n) continue;
      if (sm.dvals[i] >= c.K) {
        // zero diagonal mod tau^K: consistency only, y_i free (take 0)
        if (big.val(z[i]) < c.K)
          throw std::domain_error("quotient_form: G not inside G^perp span");
        continue;
      }
      int d = sm.dvals[i];
      if (big.val(z[i]) < d) throw std::domain_error("quotient_form: G not inside G^perp span");
      // y_i = z_i / D_ii: strip tau^d, then invert the unit part
      E unit = big.div_tau_pow(sm.diag[i], d);
      y[i] = big.mul(big.div_tau_pow(z[i], d), big.unit_inv(unit));
    }
    for (int i = (int)sm.dvals.size(); i < n; i++)
      if (big.val(z[i]) < c.K) throw std::domain_error("quotient_form: inconsistent system");
    std::vector<E> r(s, c.zero());
    for (int j = 0; j < s; j++) {
      E acc = big.zero();
      for (int i = 0; i < s; i++) acc = big.add(acc, big.mul(y[i], sm.ul(i, j)));
      r[j] = big.to_precision(acc, c);
    }
    rel_rows.push_back(r);
  }
  // present Q = R^s / row-span(rel) and extract adapted generators;
  // column convention: Q = coker(rel^T)
  Mat<E> ct(s, (int)rel_rows.size(), big.zero());
  for (int i = 0; i < (int)rel_rows.size(); i++)
    for (int j = 0; j < s; j++) ct(j, i) = c.to_precision(rel_rows[i][j], big);
  auto smq = local_smith(big, ct, c.K);
  // Q ~ sum R/tau^{d_i} with generator q_i = sum_j ULinv(j,i) h_j
  std::vector<int> qorders;
  std::vector<Vec> qgens;
  for (int i = 0; i < s; i++) {
    int d = (i < (int)smq.dvals.size()) ? std::min(smq.dvals[i], c.K) : c.K;
    if (d <= 0) continue;
    Vec lift(n, c.zero());
    for (int j = 0; j < s; j++) {
      E coef = big.to_precision(smq.ulinv(j, i), c);
      if (c.is_zero(coef)) continue;
      for (int t = 0; t < n; t++) lift[t] = c.add(lift[t], c.mul(coef, h_gens[j][t]));
    }
    qorders.push_back(d);
    qgens.push_back(lift);
  }
  // sort by decreasing order
  std::vector<int> perm(qorders.size());
  for (size_t i = 0; i < perm.size(); i++) perm[i] = (int)i;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return qorders[a] > qorders[b]; });
  TorsionLinkingForm<Ctx> out;
  out.ctx = c;
  for (int i : perm) out.orders.push_back(qorders[i]);
  int qn = (int)out.orders.size();
  out.gram = Mat<QmodR<Ctx>>(qn, qn, qm_zero(c));
  for (int i = 0; i < qn; i++)
    for (int j = 0; j < qn; j++) out.gram(i, j) = f.pairing(qgens[perm[i]], qgens[perm[j]]);
  return out;
}

// ---- graded residue data ----

// Residue classes of the diagonal units, grouped by order k.
template <class Ctx>
std::map<int, std::vector<typename Ctx::Residue>> phi_graded(const TorsionLinkingForm<Ctx>& f) {
  std::map<int, std::vector<typename Ctx::Residue>> out;
  for (auto& d : diagonalize(f)) out[d.order].push_back(d.residue);
  return out;
}

// Signature-monoid Phi data: per order k, (dim+, dim-). Only meaningful for
// contexts whose residue classes are real (GaussLocal).
using PhiN2 = std::map<int, std::pair<int, int>>;

inline PhiN2 phi_signature(const TorsionLinkingForm<GaussLocal>& f) {
  PhiN2 out;
  for (auto& d : diagonalize(f)) {
    assert(d.residue.im == 0);
    auto& slot = out[d.order];
    if (d.residue.re > 0)
      slot.first++;
    else
      slot.second++;
  }
  return out;
}

// F_p Phi data: per order k, (dim, discriminant square class in {+1,-1}).
inline std::map<int, std::pair<int, int>> phi_fp(const TorsionLinkingForm<ZpLocal>& f) {
  std::map<int, std::pair<int, int>> out;
  for (auto& d : diagonalize(f)) {
    auto& slot = out[d.order];
    slot.first++;
    if (slot.second == 0) slot.second = 1;
    long long ls = mod_pow_ll(d.residue, (f.ctx.p - 1) / 2, f.ctx.p);  // Legendre
    slot.second *= (ls == 1 ? 1 : -1);
  }
  return out;
}

// ---- metabolizer search (brute force) ----

// Exhaustive search for P with P = P^perp; module order capped at p^8.
template <class Ctx>
std::optional<std::vector<typename TorsionLinkingForm<Ctx>::Vec>> find_metabolizer_brute(
    const TorsionLinkingForm<Ctx>& f) {
  const Ctx& c = f.ctx;
  using Vec = typename TorsionLinkingForm<Ctx>::Vec;
  int total = f.total_length();
  if (total > 8) throw std::domain_error("find_metabolizer_brute: size bound exceeded");
  if (total % 2 != 0) return std::nullopt;
  int target = total / 2;
  int n = f.n();
  // enumerate all module elements
  std::vector<Vec> elements;
  std::function<void(int, Vec&)> enumerate = [&](int i, Vec& cur) {
    if (i == n) {
      elements.push_back(cur);
      return;
    }
    long long cnt = c.residue_count(f.orders[i]);
    for (long long ix = 0; ix < cnt; ix++) {
      cur[i] = c.nth_element(f.orders[i], ix);
      enumerate(i + 1, cur);
    }
  };
  Vec scratch = f.zero_vec();
  enumerate(0, scratch);
  auto canon_key = [&](const Vec& v) {
    std::string key;
    for (int i = 0; i < n; i++) {
      // canonical residue of coordinate i mod tau^{k_i}
      auto e = v[i];
      int excess = c.K - f.orders[i];
      e = c.mul_tau_pow(e, excess);  // kills info above k_i uniformly
      key += c.str(e) + "|";
    }
    return key;
  };
  std::function<bool(std::vector<Vec>&, size_t, std::set<std::string>&)> rec =
      [&](std::vector<Vec>& gens, size_t start, std::set<std::string>& seen) -> bool {
    int len = gens.empty() ? 0 : submodule_length(f, gens);
    if (len == target) return true;
    if (len > target) return false;
    for (size_t ei = start; ei < elements.size(); ei++) {
      const Vec& g = elements[ei];
      if (f.vec_is_zero(g)) continue;
      bool iso = qm_is_zero(f.pairing(g, g));
      if (!iso) continue;
      bool orth = true;
      for (auto& h : gens)
        if (!qm_is_zero(f.pairing(g, h))) {
          orth = false;
          break;
        }
      if (!orth) continue;
      gens.push_back(g);
      std::string key;
      for (auto& gg : gens) key += canon_key(gg) + "#";
      if (!seen.count(key)) {
        seen.insert(key);
        if (rec(gens, ei + 1, seen)) return true;
      }
      gens.pop_back();
    }
    return false;
  };
  std::vector<Vec> gens;
  std::set<std::string> seen;
  if (target == 0) return gens;  // trivial form: empty metabolizer
  if (rec(gens, 0, seen)) return gens;
  return std::nullopt;
}

// ---- Lemma-style feasibility over the signature monoid N^2, H = (1,1) ----

struct GeqWitness {
  std::vector<int> h;                        // h_1 .. h_{N+1}
  std::vector<std::pair<int, int>> t;        // T_1 .. T_N
};

// Decides whether T_n, h_n exist with T_1 = 0, h_n >= h_{n+2} and
//   T_n + h_n H + sum_i Phi_{n+2i}(rhs) = h_{n+1} H + sum_i Phi_{n+2i}(lhs).
// Infeasibility is a proof; feasibility alone is inconclusive.
inline std::optional<GeqWitness> geq_M_feasible(const PhiN2& lhs, const PhiN2& rhs) {
  int maxk = 0, dim = 0;
  for (auto& [k, pr] : lhs) {
    maxk = std::max(maxk, k);
    dim += pr.first + pr.second;
  }
  for (auto& [k, pr] : rhs) maxk = std::max(maxk, k);
  int nmax = maxk + 2;
  int bound = dim + 2;
  auto tail_sum = [&](const PhiN2& p, int from) {
    std::pair<int, int> s{0, 0};
    for (auto& [k, pr] : p)
      if (k >= from && (k - from) % 2 == 0) {
        s.first += pr.first;
        s.second += pr.second;
      }
    return s;
  };
  // search over h_1..h_{nmax+1} by DFS over consecutive pairs, memoizing
  // failed (n, h_{n-1}, h_n) states
  std::vector<int> h(nmax + 2, 0);
  std::vector<std::pair<int, int>> tw(nmax + 1, {0, 0});
  std::set<std::tuple<int, int, int>> failed;
  std::function<bool(int)> rec = [&](int n) -> bool {
    if (n > nmax) return h[n] <= h[n - 1];  // constant tail requires h_{N+1} <= h_N
    auto key = std::make_tuple(n, n >= 2 ? h[n - 1] : 0, h[n]);
    if (failed.count(key)) return false;
    auto sl = tail_sum(lhs, n), sr = tail_sum(rhs, n);
    // T_n = h_{n+1} H + S_n(lhs) - h_n H - S_n(rhs)
    for (int hn1 = 0; hn1 <= bound; hn1++) {
      if (n >= 2 && hn1 > h[n - 1]) continue;  // h_{n-1} >= h_{n+1}
      int tp = hn1 + sl.first - h[n] - sr.first;
      int tm = hn1 + sl.second - h[n] - sr.second;
      if (tp < 0 || tm < 0) continue;
      if (n == 1 && (tp != 0 || tm != 0)) continue;
      h[n + 1] = hn1;
      tw[n] = {tp, tm};
      if (rec(n + 1)) return true;
    }
    failed.insert(key);
    return false;
  };
  for (int h1 = 0; h1 <= bound; h1++) {
    h[1] = h1;
    if (rec(1)) {
      GeqWitness w;
      for (int i = 1; i <= nmax + 1; i++) w.h.push_back(h[i]);
      for (int i = 1; i <= nmax; i++) w.t.push_back(tw[i]);
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace ribcon
