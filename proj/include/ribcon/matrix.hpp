#pragma once
// Dense matrices over exact rings: fraction-free determinants, Smith normal
// form over Z with unimodular transforms, Smith form over Q[t], and F_p
// column reductions.

#include "ribcon/laurent.hpp"
#include "ribcon/rings.hpp"

#include <optional>
#include <vector>

namespace ribcon {

template <class T>
class Mat {
 public:
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
  Mat(int r, int c, const T& fill) : rows(r), cols(c), a((size_t)r * c, fill) {}

  T& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
  const T& operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

  static Mat identity(int n, const T& one, const T& zero) {
    Mat m(n, n, zero);
    for (int i = 0; i < n; i++) m(i, i) = one;
    return m;
  }

  Mat transpose() const {
    Mat m(cols, rows);
    for (int i = 0; i < rows; i++)
      for (int j = 0; j < cols; j++) m(j, i) = (*this)(i, j);
    return m;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; i++)
      for (int j = 0; j < y.cols; j++) {
        T s = x(i, 0) * y(0, j);
        for (int k = 1; k < x.cols; k++) s = s + x(i, k) * y(k, j);
        z(i, j) = s;
      }
    return z;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat z(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); i++) z.a[i] = x.a[i] + y.a[i];
    return z;
  }

  friend Mat operator-(const Mat& x) {
    Mat z = x;
    for (auto& v : z.a) v = -v;
    return z;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  Mat submatrix_erase(int row, int col) const {
    Mat m(rows - (row >= 0 ? 1 : 0), cols - (col >= 0 ? 1 : 0));
    int ii = 0;
    for (int i = 0; i < rows; i++) {
      if (i == row) continue;
      int jj = 0;
      for (int j = 0; j < cols; j++) {
        if (j == col) continue;
        m(ii, jj++) = (*this)(i, j);
      }
      ii++;
    }
    return m;
  }
};

using IntMatrix = Mat<Int>;

template <class T>
Mat<T> block_diag(const Mat<T>& x, const Mat<T>& y, const T& zero) {
  Mat<T> z(x.rows + y.rows, x.cols + y.cols, zero);
  for (int i = 0; i < x.rows; i++)
    for (int j = 0; j < x.cols; j++) z(i, j) = x(i, j);
  for (int i = 0; i < y.rows; i++)
    for (int j = 0; j < y.cols; j++) z(x.rows + i, x.cols + j) = y(i, j);
  return z;
}

// Fraction-free Bareiss determinant; T must be an integral domain with exact
// division (Int or Laurent<Int> here).
namespace detail {
inline bool dd_exact(const Int& a, const Int& b, Int& q) {
  return ring_traits<Int>::div_exact(a, b, q);
}
inline bool dd_exact(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  auto r = div_exact(a, b);
  if (!r) return false;
  q = *r;
  return true;
}
template <class T>
bool dd_is_zero(const T& x) {
  if constexpr (std::is_same_v<T, ZPoly>)
    return x.is_zero();
  else
    return ring_traits<T>::is_zero(x);
}
}  // namespace detail

template <class T>
T bareiss_det(Mat<T> m, const T& one) {
  assert(m.rows == m.cols);
  int n = m.rows;
  if (n == 0) return one;
  T prev = one;
  int sign = 1;
  for (int k = 0; k < n - 1; k++) {
    if (detail::dd_is_zero(m(k, k))) {
      int piv = -1;
      for (int i = k + 1; i < n; i++)
        if (!detail::dd_is_zero(m(i, k))) {
          piv = i;
          break;
        }
      if (piv < 0) return one - one;
      for (int j = 0; j < n; j++) std::swap(m(k, j), m(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; i++)
      for (int j = k + 1; j < n; j++) {
        T num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        T q{};
        bool ok = detail::dd_exact(num, prev, q);
        assert(ok);
        (void)ok;
        m(i, j) = q;
      }
    prev = m(k, k);
  }
  T d = m(n - 1, n - 1);
  if (sign < 0) d = -d;
  return d;
}

// Smith normal form over Z with unimodular transforms: U * M * V = D.
struct SmithResult {
  IntMatrix d;  // diagonal (rectangular), d_i | d_{i+1}, nonnegative
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix v;  // cols x cols, unimodular
};

inline SmithResult smith_normal_form(IntMatrix m) {
  int r = m.rows, c = m.cols;
  IntMatrix u = IntMatrix::identity(r, 1, 0);
  IntMatrix v = IntMatrix::identity(c, 1, 0);
  int n = std::min(r, c);
  for (int k = 0; k < n; k++) {
    while (true) {
      // minimal absolute nonzero entry in the remaining block
      int pi = -1, pj = -1;
      Int best = 0;
      for (int i = k; i < r; i++)
        for (int j = k; j < c; j++)
          if (m(i, j) != 0 && (best == 0 || abs(m(i, j)) < best)) {
            best = abs(m(i, j));
            pi = i;
            pj = j;
          }
      if (pi < 0) break;  // all zero
      if (pi != k)
        for (int j = 0; j < c; j++) std::swap(m(pi, j), m(k, j));
      if (pi != k)
        for (int j = 0; j < r; j++) std::swap(u(pi, j), u(k, j));
      if (pj != k)
        for (int i = 0; i < r; i++) std::swap(m(i, pj), m(i, k));
      if (pj != k)
        for (int i = 0; i < c; i++) std::swap(v(i, pj), v(i, k));
      bool clean = true;
      for (int i = k + 1; i < r; i++) {
        Int q = m(i, k) / m(k, k);
        if (q != 0) {
          for (int j = 0; j < c; j++) m(i, j) -= q * m(k, j);
          for (int j = 0; j < r; j++) u(i, j) -= q * u(k, j);
        }
        if (m(i, k) != 0) clean = false;
      }
      for (int j = k + 1; j < c; j++) {
        Int q = m(k, j) / m(k, k);
        if (q != 0) {
          for (int i = 0; i < r; i++) m(i, j) -= q * m(i, k);
          for (int i = 0; i < c; i++) v(i, j) -= q * v(i, k);
        }
        if (m(k, j) != 0) clean = false;
      }
      if (!clean) continue;
      // pivot must divide the remaining block
      int bi = -1;
      for (int i = k + 1; i < r && bi < 0; i++)
        for (int j = k + 1; j < c; j++)
          if (m(i, j) % m(k, k) != 0) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      for (int j = 0; j < c; j++) m(k, j) += m(bi, j);
      for (int j = 0; j < r; j++) u(k, j) += u(bi, j);
    }
    if (m(k, k) < 0) {
      for (int j = 0; j < c; j++) m(k, j) = -m(k, j);
      for (int j = 0; j < r; j++) u(k, j) = -u(k, j);
    }
  }
  return SmithResult{std::move(m), std::move(u), std::move(v)};
}

// Smith form over the rational Laurent ring Q[t^{\pm 1}] (t is a unit):
// monic divisor chain with low = 0 representatives, no transforms.
inline std::vector<QPoly> smith_rational_poly(Mat<QPoly> m) {
  int r = m.rows, c = m.cols;
  int n = std::min(r, c);
  auto dg = [](const QPoly& p) { return p.is_zero() ? -1 : p.degree() - p.low; };
  // Laurent division: q with a - q b of lower intrinsic degree; rem is the
  // remainder of the shifted representatives
  auto ldiv = [](const QPoly& a, const QPoly& b, QPoly& q, QPoly& rem) {
    QPoly sa = a.shifted(-a.low), sb = b.shifted(-b.low);
    QPoly q0;
    poly_divmod(sa, sb, q0, rem);
    q = q0.shifted(a.low - b.low);
  };
  for (int k = 0; k < n; k++) {
    while (true) {
      int pi = -1, pj = -1, best = -1;
      for (int i = k; i < r; i++)
        for (int j = k; j < c; j++)
          if (!m(i, j).is_zero() && (best < 0 || dg(m(i, j)) < best)) {
            best = dg(m(i, j));
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      if (pi != k)
        for (int j = 0; j < c; j++) std::swap(m(pi, j), m(k, j));
      if (pj != k)
        for (int i = 0; i < r; i++) std::swap(m(i, pj), m(i, k));
      bool clean = true;
      for (int i = k + 1; i < r; i++) {
        if (m(i, k).is_zero()) continue;
        QPoly q, rem;
        ldiv(m(i, k), m(k, k), q, rem);
        if (!q.is_zero())
          for (int j = 0; j < c; j++) m(i, j) = m(i, j) - q * m(k, j);
        if (!m(i, k).is_zero()) clean = false;
      }
      for (int j = k + 1; j < c; j++) {
        if (m(k, j).is_zero()) continue;
        QPoly q, rem;
        ldiv(m(k, j), m(k, k), q, rem);
        if (!q.is_zero())
          for (int i = 0; i < r; i++) m(i, j) = m(i, j) - q * m(i, k);
        if (!m(k, j).is_zero()) clean = false;
      }
      if (!clean) continue;
      int bi = -1;
      for (int i = k + 1; i < r && bi < 0; i++)
        for (int j = k + 1; j < c; j++) {
          if (m(i, j).is_zero()) continue;
          QPoly q, rem;
          ldiv(m(i, j), m(k, k), q, rem);
          if (!rem.is_zero()) {
            bi = i;
            break;
          }
        }
      if (bi < 0) break;
      for (int j = 0; j < c; j++) m(k, j) = m(k, j) + m(bi, j);
    }
  }
  std::vector<QPoly> out;
  for (int k = 0; k < n; k++) {
    QPoly d = m(k, k);
    if (!d.is_zero()) {
      d = d.shifted(-d.low);
      Rat inv = Rat(1) / d.leading();
      d = inv * d;
    }
    out.push_back(d);
  }
  return out;
}

// Column echelon reduction over F_p; returns pivot row for each reduced
// column (-1 dropped) and leaves m in reduced column echelon form.
struct FpEchelon {
  Mat<long long> cols;          // reduced column basis, one column each
  std::vector<int> pivot_rows;  // pivot row of each basis column
  long long p;
};

inline FpEchelon fp_column_echelon(const Mat<long long>& m0, long long p) {
  int r = m0.rows, c = m0.cols;
  auto norm = [&](long long x) {
    x %= p;
    if (x < 0) x += p;
    return x;
  };
  std::vector<std::vector<long long>> cols;
  std::vector<int> pivots;
  auto reduce = [&](std::vector<long long>& v) {
    for (size_t k = 0; k < cols.size(); k++) {
      long long x = v[pivots[k]];
      if (x) {
        for (int i = 0; i < r; i++) v[i] = norm(v[i] - x * cols[k][i] % p);
      }
    }
  };
  for (int j = 0; j < c; j++) {
    std::vector<long long> v(r);
    for (int i = 0; i < r; i++) v[i] = norm(m0(i, j));
    reduce(v);
    int piv = -1;
    for (int i = 0; i < r; i++)
      if (v[i]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    long long inv = mod_pow_ll(v[piv], p - 2, p);
    for (int i = 0; i < r; i++) v[i] = norm(v[i] * inv % p);
    // back-substitute into existing columns
    for (size_t k = 0; k < cols.size(); k++) {
      long long x = cols[k][piv];
      if (x)
        for (int i = 0; i < r; i++) cols[k][i] = norm(cols[k][i] - x * v[i] % p);
    }
    cols.push_back(v);
    pivots.push_back(piv);
  }
  FpEchelon e;
  e.p = p;
  e.pivot_rows = pivots;
  e.cols = Mat<long long>(r, (int)cols.size());
  for (int j = 0; j < (int)cols.size(); j++)
    for (int i = 0; i < r; i++) e.cols(i, j) = cols[j][i];
  return e;
}

}  // namespace ribcon
