#pragma once
// Shared test support: independent oracles and a deterministic RNG.

#include "ribcon/knotio.hpp"

#include <string>

namespace testsupport {

using namespace ribcon;

inline std::string data_path(const std::string& name) {
  return std::string(RIBCON_DATA_DIR) + "/" + name;
}

// xorshift64*: deterministic across platforms
struct Rng {
  unsigned long long s;
  explicit Rng(unsigned long long seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  unsigned long long next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 0x2545f4914f6cdd1dull;
  }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + (long long)(next() % (unsigned long long)(hi - lo + 1));
  }
};

// Independent resultant oracle: Sylvester matrix determinant via Bareiss.
inline Int sylvester_resultant(const ZPoly& f0, const ZPoly& g0) {
  ZPoly f = f0.shifted(-f0.low), g = g0.shifted(-g0.low);
  int m = f.degree(), n = g.degree();
  if (m == 0 && n == 0) return 1;
  IntMatrix s(m + n, m + n, 0);
  for (int i = 0; i < n; i++)
    for (int k = 0; k <= m; k++) s(i, i + (m - k)) = f.coeff_at(k);
  for (int i = 0; i < m; i++)
    for (int k = 0; k <= n; k++) s(n + i, i + (n - k)) = g.coeff_at(k);
  return bareiss_det(s, Int(1));
}

inline ZPoly random_zpoly(Rng& rng, int maxdeg, int maxcoeff) {
  int d = (int)rng.range(0, maxdeg);
  std::vector<Int> cs;
  for (int i = 0; i <= d; i++) cs.push_back(Int((long)rng.range(-maxcoeff, maxcoeff)));
  ZPoly p(0, std::move(cs));
  return p;
}

inline IntMatrix random_int_matrix(Rng& rng, int r, int c, int lim) {
  IntMatrix m(r, c);
  for (int i = 0; i < r; i++)
    for (int j = 0; j < c; j++) m(i, j) = Int((long)rng.range(-lim, lim));
  return m;
}

inline std::vector<KnotRecord> load_fixture_table() {
  auto res = load_table_file(data_path("knots.json"));
  if (!res.errors.empty()) {
    std::string msg = "fixture table load failed:";
    for (auto& e : res.errors) msg += " " + e;
    throw std::runtime_error(msg);
  }
  return std::move(res.records);
}

}  // namespace testsupport
