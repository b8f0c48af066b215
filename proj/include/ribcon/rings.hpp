#pragma once
// Coefficient rings: arbitrary-precision integers/rationals (GMP) and prime fields.

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ribcon {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int abs(const Int& a) { return a >= 0 ? a : Int(-a); }

inline bool is_perfect_square(const Int& a) {
  if (a < 0) return false;
  return mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

inline Int isqrt(const Int& a) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

inline bool is_probab_prime(const Int& a) {
  return mpz_probab_prime_p(a.get_mpz_t(), 40) != 0;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Factorization by trial division plus Pollard rho; fine for the module orders
// that occur here (knot determinants and small group orders).
inline void factor_into(Int n, std::map<Int, int>& out) {
  if (n < 0) n = -n;
  if (n <= 1) return;
  for (Int p = 2; p * p <= n && p < 100000; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_probab_prime(n)) {
    out[n]++;
    return;
  }
  // Pollard rho with Brent iteration
  auto rho = [](const Int& m) -> Int {
    Int x = 2, y = 2, d = 1, c = 1;
    while (true) {
      x = 2;
      y = 2;
      d = 1;
      while (d == 1) {
        x = (x * x + c) % m;
        y = (y * y + c) % m;
        y = (y * y + c) % m;
        d = gcd(abs(x - y), m);
      }
      if (d != m) return d;
      c += 1;
    }
  };
  Int d = rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

inline std::map<Int, int> factorize(const Int& n) {
  std::map<Int, int> out;
  factor_into(n, out);
  return out;
}

// nonnegative residue of a mod m for small m
inline long long mod_ll(const Int& a, long long m) {
  return (long long)mpz_fdiv_ui(a.get_mpz_t(), (unsigned long)m);
}

inline long long mod_pow_ll(long long b, long long e, long long m) {
  long long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = (__int128)r * b % m;
    b = (__int128)b * b % m;
    e >>= 1;
  }
  return r;
}

// Element of the prime field F_p. The modulus travels with the value; mixing
// moduli is a programming error.
struct Fp {
  long long v = 0;
  long long p = 0;  // 0 marks "unset", used only by default construction

  Fp() = default;
  Fp(long long value, long long prime) : v(value % prime), p(prime) {
    if (v < 0) v += p;
  }

  static Fp zero(long long prime) { return Fp(0, prime); }
  static Fp one(long long prime) { return Fp(1, prime); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    return Fp(a.v + b.v, a.p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    return Fp(a.v - b.v, a.p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    assert(a.p == b.p);
    return Fp((long long)((__int128)a.v * b.v % a.p), a.p);
  }
  Fp operator-() const { return Fp(-v, p); }
  Fp inv() const {
    if (v == 0) throw std::domain_error("Fp: division by zero");
    return Fp(mod_pow_ll(v, p - 2, p), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v == b.v && a.p == b.p; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
};

// ring_traits: the handful of facts polynomial/matrix code needs per ring.
template <class R>
struct ring_traits;

template <>
struct ring_traits<Int> {
  static Int zero(const Int&) { return Int(0); }
  static Int one(const Int&) { return Int(1); }
  static bool is_zero(const Int& a) { return a == 0; }
  static bool is_unit(const Int& a) { return a == 1 || a == -1; }
  static Int conj(const Int& a) { return a; }
  static bool div_exact(const Int& a, const Int& b, Int& q) {
    if (b == 0) return false;
    Int r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r == 0;
  }
  static std::string str(const Int& a) { return a.get_str(); }
};

template <>
struct ring_traits<Rat> {
  static Rat zero(const Rat&) { return Rat(0); }
  static Rat one(const Rat&) { return Rat(1); }
  static bool is_zero(const Rat& a) { return a == 0; }
  static bool is_unit(const Rat& a) { return a != 0; }
  static Rat conj(const Rat& a) { return a; }
  static bool div_exact(const Rat& a, const Rat& b, Rat& q) {
    if (b == 0) return false;
    q = a / b;
    return true;
  }
  static std::string str(const Rat& a) { return a.get_str(); }
};

template <>
struct ring_traits<Fp> {
  static Fp zero(const Fp& like) { return Fp(0, like.p); }
  static Fp one(const Fp& like) { return Fp(1, like.p); }
  static bool is_zero(const Fp& a) { return a.v == 0; }
  static bool is_unit(const Fp& a) { return a.v != 0; }
  static Fp conj(const Fp& a) { return a; }
  static bool div_exact(const Fp& a, const Fp& b, Fp& q) {
    if (b.v == 0) return false;
    q = a / b;
    return true;
  }
  static std::string str(const Fp& a) { return std::to_string(a.v); }
};

}  // namespace ribcon
