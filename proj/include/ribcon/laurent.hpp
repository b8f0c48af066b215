#pragma once
// Exact Laurent polynomials over Z, Q and F_p: unit normalization, divisibility
// up to units, involution, resultants, cyclotomic polynomials and
// root-multiplicity analysis on the unit circle.

#include "ribcon/rings.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

namespace ribcon {

template <class R>
class Laurent {
 public:
  // coeffs[i] is the coefficient of t^(low+i); first/last entries nonzero
  // unless the polynomial is zero (empty coeffs, low == 0).
  int low = 0;
  std::vector<R> coeffs;

  Laurent() = default;
  explicit Laurent(const R& c) {
    if (!ring_traits<R>::is_zero(c)) coeffs.push_back(c);
  }
  Laurent(int lo, std::vector<R> cs) : low(lo), coeffs(std::move(cs)) { trim(); }

  static Laurent monomial(const R& c, int e) {
    Laurent p;
    if (!ring_traits<R>::is_zero(c)) {
      p.low = e;
      p.coeffs = {c};
    }
    return p;
  }

  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return low + (int)coeffs.size() - 1; }  // undefined on zero
  int length() const { return (int)coeffs.size(); }

  const R& leading() const { return coeffs.back(); }
  const R& trailing() const { return coeffs.front(); }

  R coeff_at(int e) const {
    if (is_zero() || e < low || e > degree()) return sample_zero();
    return coeffs[e - low];
  }

  R sample_zero() const {
    if (!coeffs.empty()) return ring_traits<R>::zero(coeffs[0]);
    return R{};
  }

  void trim() {
    size_t a = 0, b = coeffs.size();
    while (b > a && ring_traits<R>::is_zero(coeffs[b - 1])) --b;
    while (a < b && ring_traits<R>::is_zero(coeffs[a])) ++a;
    if (a == b) {
      coeffs.clear();
      low = 0;
      return;
    }
    if (a > 0 || b < coeffs.size()) {
      std::vector<R> out(coeffs.begin() + a, coeffs.begin() + b);
      coeffs = std::move(out);
      low += (int)a;
    }
  }

  Laurent shifted(int k) const {
    Laurent p = *this;
    if (!p.is_zero()) p.low += k;
    return p;
  }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int lo = std::min(a.low, b.low);
    int hi = std::max(a.degree(), b.degree());
    std::vector<R> cs(hi - lo + 1, ring_traits<R>::zero(a.coeffs[0]));
    for (int i = 0; i < a.length(); i++) cs[a.low - lo + i] = cs[a.low - lo + i] + a.coeffs[i];
    for (int i = 0; i < b.length(); i++) cs[b.low - lo + i] = cs[b.low - lo + i] + b.coeffs[i];
    return Laurent(lo, std::move(cs));
  }

  friend Laurent operator-(const Laurent& a) {
    Laurent p = a;
    for (auto& c : p.coeffs) c = -c;
    return p;
  }

  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return Laurent();
    std::vector<R> cs(a.length() + b.length() - 1, ring_traits<R>::zero(a.coeffs[0]));
    for (int i = 0; i < a.length(); i++)
      for (int j = 0; j < b.length(); j++) cs[i + j] = cs[i + j] + a.coeffs[i] * b.coeffs[j];
    return Laurent(a.low + b.low, std::move(cs));
  }

  friend Laurent operator*(const R& c, const Laurent& a) {
    Laurent p = a;
    for (auto& x : p.coeffs) x = c * x;
    p.trim();
    return p;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) {
    if (a.coeffs.size() != b.coeffs.size()) return false;
    if (a.is_zero()) return true;
    if (a.low != b.low) return false;
    for (size_t i = 0; i < a.coeffs.size(); i++)
      if (!(a.coeffs[i] == b.coeffs[i])) return false;
    return true;
  }
  friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

  friend bool operator<(const Laurent& a, const Laurent& b) {
    if (a.low != b.low) return a.low < b.low;
    if (a.coeffs.size() != b.coeffs.size()) return a.coeffs.size() < b.coeffs.size();
    for (size_t i = 0; i < a.coeffs.size(); i++) {
      if (a.coeffs[i] == b.coeffs[i]) continue;
      return less_coeff(a.coeffs[i], b.coeffs[i]);
    }
    return false;
  }

 private:
  static bool less_coeff(const Int& x, const Int& y) { return x < y; }
  static bool less_coeff(const Rat& x, const Rat& y) { return x < y; }
  static bool less_coeff(const Fp& x, const Fp& y) { return x.v < y.v; }
};

using ZPoly = Laurent<Int>;
using QPoly = Laurent<Rat>;
using FpPoly = Laurent<Fp>;

// p(t) -> p(t^{-1})
template <class R>
Laurent<R> involution(const Laurent<R>& p) {
  if (p.is_zero()) return p;
  Laurent<R> q;
  q.coeffs.assign(p.coeffs.rbegin(), p.coeffs.rend());
  q.low = -p.degree();
  return q;
}

// Canonical representative of the unit-equivalence class: low = 0 and
// positive top coefficient over Z/Q, monic over F_p.
inline ZPoly normalize_units(const ZPoly& p) {
  if (p.is_zero()) return p;
  ZPoly q = p.shifted(-p.low);
  if (q.leading() < 0) q = -q;
  return q;
}

inline QPoly normalize_units(const QPoly& p) {
  if (p.is_zero()) return p;
  QPoly q = p.shifted(-p.low);
  if (q.leading() < 0) q = -q;
  return q;
}

inline FpPoly normalize_units(const FpPoly& p) {
  if (p.is_zero()) return p;
  FpPoly q = p.shifted(-p.low);
  Fp inv = q.leading().inv();
  return inv * q;
}

template <class R>
bool assoc_eq(const Laurent<R>& a, const Laurent<R>& b) {
  return normalize_units(a) == normalize_units(b);
}

// Ordinary-polynomial division with remainder over a field.
template <class R>
void poly_divmod(const Laurent<R>& a, const Laurent<R>& b, Laurent<R>& q, Laurent<R>& r) {
  assert(!b.is_zero() && b.low >= 0 && a.low >= 0);
  q = Laurent<R>();
  r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    R c = r.leading() / b.leading();
    int e = r.degree() - b.degree();
    Laurent<R> m = Laurent<R>::monomial(c, e);
    q = q + m;
    r = r - m * b;
  }
}

// Exact Laurent division: a / b when b divides a, else nullopt. Over Int the
// quotient must have integer coefficients.
inline std::optional<ZPoly> div_exact(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) return a.is_zero() ? std::optional<ZPoly>(ZPoly()) : std::nullopt;
  if (a.is_zero()) return ZPoly();
  ZPoly num = a.shifted(-a.low), den = b.shifted(-b.low);
  if (num.degree() < den.degree()) return std::nullopt;
  std::vector<Int> q(num.degree() - den.degree() + 1, Int(0));
  std::vector<Int> r(num.coeffs);
  int dd = den.degree();
  for (int k = (int)q.size() - 1; k >= 0; k--) {
    Int top = r[k + dd];
    Int c, rem;
    mpz_tdiv_qr(c.get_mpz_t(), rem.get_mpz_t(), top.get_mpz_t(),
                den.leading().get_mpz_t());
    if (rem != 0) return std::nullopt;
    q[k] = c;
    if (c != 0)
      for (int i = 0; i <= dd; i++) r[k + i] -= c * den.coeffs[i];
  }
  for (auto& c : r)
    if (c != 0) return std::nullopt;
  return ZPoly(a.low - b.low, std::move(q));
}

template <class R>
std::optional<Laurent<R>> div_exact_field(const Laurent<R>& a, const Laurent<R>& b) {
  if (b.is_zero()) return a.is_zero() ? std::optional<Laurent<R>>(Laurent<R>()) : std::nullopt;
  if (a.is_zero()) return Laurent<R>();
  Laurent<R> na = a.shifted(-a.low), nb = b.shifted(-b.low), q, r;
  if (na.degree() < nb.degree()) return std::nullopt;
  poly_divmod(na, nb, q, r);
  if (!r.is_zero()) return std::nullopt;
  return q.shifted(a.low - b.low);
}

// f | g in the Laurent ring; 0 | g iff g = 0.
inline bool divides(const ZPoly& f, const ZPoly& g) {
  if (f.is_zero()) return g.is_zero();
  return div_exact(g, f).has_value();
}

inline bool divides(const QPoly& f, const QPoly& g) {
  if (f.is_zero()) return g.is_zero();
  return div_exact_field(g, f).has_value();
}

inline bool divides(const FpPoly& f, const FpPoly& g) {
  if (f.is_zero()) return g.is_zero();
  return div_exact_field(g, f).has_value();
}

inline Int content(const ZPoly& p) {
  Int g = 0;
  for (const auto& c : p.coeffs) g = gcd(g, c);
  return g;
}

inline ZPoly primitive_part(const ZPoly& p) {
  if (p.is_zero()) return p;
  Int c = content(p);
  ZPoly q = p;
  for (auto& x : q.coeffs) x /= c;
  if (q.leading() < 0) q = -q;
  return q;
}

template <class R>
Laurent<R> derivative(const Laurent<R>& p) {
  if (p.is_zero()) return p;
  Laurent<R> q;
  q.low = p.low - 1;
  q.coeffs.resize(p.coeffs.size(), ring_traits<R>::zero(p.coeffs[0]));
  for (int i = 0; i < p.length(); i++) {
    long e = p.low + i;
    R c = p.coeffs[i];
    R mult = ring_traits<R>::zero(c);
    // e * c without relying on int->R conversion for Fp
    if constexpr (std::is_same_v<R, Fp>) {
      mult = Fp(e, c.p) * c;
    } else {
      mult = R((long)e) * c;
    }
    q.coeffs[i] = mult;
  }
  q.trim();
  return q;
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) a = q b + r. Ordinary polys.
inline ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
  assert(a.low >= 0 && b.low >= 0 && !b.is_zero());
  int db = b.degree();
  Int lb = b.leading();
  int steps = a.is_zero() ? 0 : a.degree() - db + 1;
  if (steps <= 0) {
    // still must scale to match the definition
    return a;
  }
  for (int s = 0; s < steps; s++) {
    if (a.is_zero() || a.degree() < db) {
      a = lb * a;
      continue;
    }
    Int la = a.leading();
    int e = a.degree() - db;
    a = lb * a - la * b.shifted(e);
  }
  return a;
}

// gcd over Z[t] by primitive PRS; result primitive with positive lead.
inline ZPoly poly_gcd(ZPoly a, ZPoly b) {
  a = normalize_units(a);
  b = normalize_units(b);
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  Int ca = content(a), cb = content(b), cg = gcd(ca, cb);
  a = primitive_part(a);
  b = primitive_part(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    ZPoly r = pseudo_rem(a, b);
    a = b;
    b = r.is_zero() ? ZPoly() : primitive_part(r);
    if (!b.is_zero() && a.degree() < b.degree()) std::swap(a, b);
  }
  ZPoly g = primitive_part(a);
  return cg * g;
}

template <class R>
Laurent<R> poly_gcd_field(Laurent<R> a, Laurent<R> b) {
  a = a.is_zero() ? a : a.shifted(-a.low);
  b = b.is_zero() ? b : b.shifted(-b.low);
  while (!b.is_zero()) {
    Laurent<R> q, r;
    poly_divmod(a, b, q, r);
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  return normalize_units(a);
}

// Resultant via the subresultant PRS (fraction-free); Sylvester-determinant
// oracle lives in the tests. Inputs are taken as the ordinary representatives
// with low = 0; zero input is a caller error.
inline Int resultant(const ZPoly& f0, const ZPoly& g0) {
  if (f0.is_zero() || g0.is_zero()) throw std::domain_error("resultant: zero input");
  ZPoly a = f0.shifted(-f0.low), b = g0.shifted(-g0.low);
  int sign = 1;
  if (a.degree() < b.degree()) {
    if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
    std::swap(a, b);
  }
  if (b.degree() == 0) {
    Int lb = b.leading();
    Int r;
    mpz_pow_ui(r.get_mpz_t(), lb.get_mpz_t(), a.degree());
    return sign * r;
  }
  Int g = 1, h = 1;
  while (true) {
    int da = a.degree(), db = b.degree();
    int d = da - db;
    if ((da & 1) && (db & 1)) sign = -sign;
    ZPoly r = pseudo_rem(a, b);
    if (r.is_zero()) return 0;
    a = b;
    // b = r / (g * h^d)
    Int denom = g;
    for (int i = 0; i < d; i++) denom *= h;
    ZPoly nb = r;
    for (auto& c : nb.coeffs) {
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), denom.get_mpz_t());
      assert(rem == 0);
      c = q;
    }
    nb.trim();
    b = nb;
    g = a.leading();
    // h = g^d h^(1-d)
    if (d == 0) {
      // h unchanged
    } else if (d == 1) {
      h = g;
    } else {
      Int num;
      mpz_pow_ui(num.get_mpz_t(), g.get_mpz_t(), d);
      Int den;
      mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), d - 1);
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      assert(rem == 0);
      h = q;
    }
    if (b.degree() == 0) {
      // res = h^(1 - deg a) * lc(b)^(deg a)
      Int lb = b.leading();
      Int num;
      mpz_pow_ui(num.get_mpz_t(), lb.get_mpz_t(), a.degree());
      if (a.degree() <= 1) {
        Int scale = (a.degree() == 0) ? h : Int(1);
        return sign * num * scale;
      }
      Int den;
      mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), a.degree() - 1);
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      assert(rem == 0);
      return sign * q;
    }
  }
}

// n-th cyclotomic polynomial, by exact division of t^n - 1.
inline ZPoly cyclotomic(int n) {
  if (n < 1) throw std::domain_error("cyclotomic: n must be >= 1");
  static std::vector<ZPoly> cache;  // cache[k] = Phi_{k+1}
  if ((int)cache.size() >= n && !cache[n - 1].is_zero()) return cache[n - 1];
  if ((int)cache.size() < n) cache.resize(n);
  std::function<ZPoly(int)> phi = [&](int m) -> ZPoly {
    if (!cache[m - 1].is_zero()) return cache[m - 1];
    std::vector<Int> tm(m + 1, Int(0));
    tm[0] = -1;
    tm[m] = 1;
    ZPoly num(0, std::move(tm));
    for (int d = 1; d < m; d++) {
      if (m % d == 0) {
        auto q = div_exact(num, phi(d));
        assert(q.has_value());
        num = *q;
      }
    }
    cache[m - 1] = num;
    return num;
  };
  return phi(n);
}

inline int euler_phi(int n) {
  int r = n;
  for (int p = 2; p * p <= n; p++) {
    if (n % p == 0) {
      r -= r / p;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

// Squarefree decomposition over Q of a primitive integer polynomial:
// p = prod_i part[i]^(i+1) with part[i] squarefree and pairwise coprime
// (Yun's algorithm). Input must be nonzero; Laurent part is split off first.
inline std::vector<ZPoly> squarefree_decomposition(const ZPoly& p0) {
  assert(!p0.is_zero());
  ZPoly p = primitive_part(p0.shifted(-p0.low));
  std::vector<ZPoly> parts;
  if (p.degree() == 0) return parts;
  ZPoly dp = derivative(p);
  ZPoly a = poly_gcd(p, dp);
  ZPoly b = *div_exact(p, a);
  ZPoly c = *div_exact(dp, a);
  ZPoly d = c - derivative(b);
  while (!(b.degree() == 0)) {
    ZPoly g = poly_gcd(b, d);
    parts.push_back(g);
    b = *div_exact(b, g);
    c = *div_exact(d, g);
    d = c - derivative(b);
  }
  return parts;
}

// All complex roots of a squarefree integer polynomial (Durand-Kerner).
inline std::vector<std::complex<double>> poly_roots(const ZPoly& p0) {
  ZPoly p = p0.shifted(-p0.low);
  int n = p.degree();
  std::vector<std::complex<double>> c(n + 1);
  for (int i = 0; i <= n; i++) c[i] = p.coeff_at(i).get_d();
  for (int i = 0; i <= n; i++) c[i] /= p.coeffs.back().get_d();
  if (n == 0) return {};
  std::vector<std::complex<double>> z(n);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> w(1.0, 0.0);
  for (int i = 0; i < n; i++) {
    w *= seed;
    z[i] = w;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> r = 0;
    for (int i = n; i >= 0; i--) r = r * x + c[i];
    return r;
  };
  for (int iter = 0; iter < 600; iter++) {
    double shift = 0;
    for (int i = 0; i < n; i++) {
      std::complex<double> num = eval(z[i]);
      std::complex<double> den(1, 0);
      for (int j = 0; j < n; j++)
        if (j != i) den *= (z[i] - z[j]);
      std::complex<double> dz = num / den;
      z[i] -= dz;
      shift = std::max(shift, std::abs(dz));
    }
    if (shift < 1e-14) break;
  }
  return z;
}

// Arguments x in (0,2) with e^{i pi x} a root of p, together with exact
// multiplicities read off the squarefree decomposition. Clustering tolerance
// 1e-9 on arguments.
inline std::vector<std::pair<double, int>> unit_circle_roots(const ZPoly& p) {
  if (p.is_zero()) throw std::domain_error("unit_circle_roots: zero polynomial");
  auto parts = squarefree_decomposition(p);
  std::vector<std::pair<double, int>> raw;
  for (size_t k = 0; k < parts.size(); k++) {
    if (parts[k].degree() == 0) continue;
    for (auto z : poly_roots(parts[k])) {
      if (std::fabs(std::abs(z) - 1.0) > 1e-7) continue;
      double theta = std::atan2(z.imag(), z.real());
      double x = theta / M_PI;
      if (x <= 0) x += 2.0;
      if (x <= 0 || x >= 2.0) continue;
      raw.push_back({x, (int)k + 1});
    }
  }
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, int>> out;
  for (auto& r : raw) {
    if (!out.empty() && std::fabs(out.back().first - r.first) < 1e-9)
      out.back().second += r.second;
    else
      out.push_back(r);
  }
  return out;
}

// For x with 2cos(pi x) rational the minimal polynomial of e^{i pi x} over Q.
inline std::optional<ZPoly> rational_cos_minpoly(double x) {
  auto near = [&](double a, double b) { return std::fabs(a - b) < 1e-12; };
  auto mk = [](std::vector<Int> cs) { return ZPoly(0, std::move(cs)); };
  if (near(x, 1.0)) return mk({1, 1});                    // t + 1
  if (near(x, 1.0 / 3) || near(x, 5.0 / 3)) return mk({1, -1, 1});   // t^2 - t + 1
  if (near(x, 0.5) || near(x, 1.5)) return mk({1, 0, 1});            // t^2 + 1
  if (near(x, 2.0 / 3) || near(x, 4.0 / 3)) return mk({1, 1, 1});    // t^2 + t + 1
  return std::nullopt;
}

// Multiplicity of e^{i pi x} as a root of p. Exact squarefree decomposition,
// then numeric matching of the squarefree factors (exact division when
// 2cos(pi x) is rational).
inline int circle_root_multiplicity(const ZPoly& p, double x) {
  if (p.is_zero()) throw std::domain_error("circle_root_multiplicity: zero polynomial");
  if (auto zeta = rational_cos_minpoly(x)) {
    ZPoly q = normalize_units(p);
    int m = 0;
    while (true) {
      auto d = div_exact_field(QPoly(0, [&] {
                                 std::vector<Rat> cs;
                                 for (auto& c : q.coeffs) cs.push_back(Rat(c));
                                 return cs;
                               }()),
                               QPoly(0, [&] {
                                 std::vector<Rat> cs;
                                 for (auto& c : zeta->coeffs) cs.push_back(Rat(c));
                                 return cs;
                               }()));
      if (!d.has_value()) break;
      m++;
      // convert quotient back: coefficients stay integral for monic zeta
      std::vector<Int> cs;
      for (auto& c : d->coeffs) {
        assert(c.get_den() == 1);
        cs.push_back(c.get_num());
      }
      q = ZPoly(0, std::move(cs));
      if (q.is_zero() || q.degree() == 0) break;
    }
    return m;
  }
  auto parts = squarefree_decomposition(p);
  std::complex<double> z(std::cos(M_PI * x), std::sin(M_PI * x));
  int mult = 0;
  for (size_t k = 0; k < parts.size(); k++) {
    if (parts[k].degree() == 0) continue;
    std::complex<double> v = 0;
    double scale = 0;
    for (int i = 0; i <= parts[k].degree(); i++) {
      double c = parts[k].coeff_at(i).get_d();
      scale += std::fabs(c);
      v = v * z + std::complex<double>(parts[k].coeff_at(parts[k].degree() - i).get_d());
    }
    if (std::abs(v) < 1e-7 * std::max(scale, 1.0)) mult += (int)k + 1;
  }
  return mult;
}

// ---- Text rendering and parsing: "c_k*t^k + ..." with exact literals ----

template <class R>
std::string coeff_str(const R& c) {
  return ring_traits<R>::str(c);
}

template <class R>
std::string to_string(const Laurent<R>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.length() - 1; i >= 0; i--) {
    const R& c = p.coeffs[i];
    if (ring_traits<R>::is_zero(c)) continue;
    int e = p.low + i;
    std::string cs = coeff_str(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (neg) cs = cs.substr(1);
    if (e == 0) {
      os << cs;
    } else {
      if (cs != "1") os << cs << "*";
      os << "t";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

namespace detail {
inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
}
}  // namespace detail

// Parses the rendering grammar above; accepts integer and a/b rational
// coefficients and negative exponents.
inline std::optional<QPoly> parse_laurent_rat(const std::string& s) {
  size_t i = 0;
  using detail::skip_ws;
  QPoly acc;
  bool any = false;
  skip_ws(s, i);
  int sign = 1;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') sign = -1;
    i++;
  }
  while (true) {
    skip_ws(s, i);
    if (i >= s.size()) break;
    // coefficient
    std::string digits;
    while (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '/')) digits += s[i++];
    Rat c(1);
    bool have_coeff = false;
    if (!digits.empty()) {
      try {
        c = Rat(digits);
      } catch (...) {
        return std::nullopt;
      }
      c.canonicalize();
      have_coeff = true;
    }
    skip_ws(s, i);
    if (i < s.size() && s[i] == '*') {
      i++;
      skip_ws(s, i);
    }
    int e = 0;
    if (i < s.size() && s[i] == 't') {
      i++;
      e = 1;
      skip_ws(s, i);
      if (i < s.size() && s[i] == '^') {
        i++;
        skip_ws(s, i);
        int es = 1;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
          if (s[i] == '-') es = -1;
          i++;
        }
        std::string ds;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ds += s[i++];
        if (ds.empty()) return std::nullopt;
        e = es * std::stoi(ds);
      }
    } else if (!have_coeff) {
      return std::nullopt;
    }
    acc = acc + QPoly::monomial(Rat(sign) * c, e);
    any = true;
    skip_ws(s, i);
    if (i >= s.size()) break;
    if (s[i] == '+') sign = 1;
    else if (s[i] == '-') sign = -1;
    else return std::nullopt;
    i++;
    skip_ws(s, i);
    if (i >= s.size()) return std::nullopt;  // dangling operator
  }
  if (!any) return std::nullopt;
  return acc;
}

inline std::optional<ZPoly> parse_laurent_int(const std::string& s) {
  if (s == "0") return ZPoly();
  auto q = parse_laurent_rat(s);
  if (!q) return std::nullopt;
  std::vector<Int> cs;
  for (auto& c : q->coeffs) {
    if (c.get_den() != 1) return std::nullopt;
    cs.push_back(c.get_num());
  }
  return ZPoly(q->low, std::move(cs));
}

inline QPoly to_rational(const ZPoly& p) {
  std::vector<Rat> cs;
  for (auto& c : p.coeffs) cs.push_back(Rat(c));
  return QPoly(p.low, std::move(cs));
}

inline std::optional<ZPoly> to_integral(const QPoly& p) {
  std::vector<Int> cs;
  for (auto& c : p.coeffs) {
    if (c.get_den() != 1) return std::nullopt;
    cs.push_back(c.get_num());
  }
  return ZPoly(p.low, std::move(cs));
}

inline FpPoly reduce_mod_p(const ZPoly& p, long long prime) {
  std::vector<Fp> cs;
  for (auto& c : p.coeffs) cs.push_back(Fp(mod_ll(c, prime), prime));
  return FpPoly(p.low, std::move(cs));
}

template <class R>
R eval_at_one(const Laurent<R>& p) {
  R s = p.sample_zero();
  for (auto& c : p.coeffs) s = s + c;
  return s;
}

inline Int eval_int(const ZPoly& p, const Int& x) {
  // Laurent part must be cleared by the caller if x could be 0
  ZPoly q = p.is_zero() ? p : p.shifted(-p.low);
  Int r = 0;
  for (int i = q.length() - 1; i >= 0; i--) r = r * x + q.coeffs[i];
  return r;
}

}  // namespace ribcon
