#pragma once
// Finite abelian group invariants and the subgroup/quotient combinatorics of
// p-groups: Smith-form cokernels, primary decompositions, Littlewood-
// Richardson positivity by lattice-word backtracking, and a brute-force
// subgroup oracle.

#include "ribcon/matrix.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace ribcon {

// Weakly decreasing positive parts.
using Partition = std::vector<int>;

inline int partition_size(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  if (n < 0) return out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int rem, int maxpart) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rem, maxpart); k >= 1; k--) {
      cur.push_back(k);
      rec(rem - k, k);
      cur.pop_back();
    }
  };
  rec(n, n == 0 ? 1 : n);
  return out;
}

struct AbelianGroup {
  std::vector<Int> invariant_factors;  // d_1 | d_2 | ... , each >= 2
  int free_rank = 0;

  bool is_finite() const { return free_rank == 0; }
  bool is_trivial() const { return invariant_factors.empty() && free_rank == 0; }

  Int order() const {
    assert(is_finite());
    Int o = 1;
    for (auto& d : invariant_factors) o *= d;
    return o;
  }

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors;
  }

  static AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

  std::string str() const {
    if (is_trivial()) return "0";
    std::string s;
    for (auto& d : invariant_factors) {
      if (!s.empty()) s += " + ";
      s += "Z/" + d.get_str();
    }
    if (free_rank > 0) {
      if (!s.empty()) s += " + ";
      s += "Z^" + std::to_string(free_rank);
    }
    return s;
  }
};

// Cokernel Z^rows / M Z^cols.
inline AbelianGroup cokernel(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  AbelianGroup g;
  int n = std::min(m.rows, m.cols);
  int rank = 0;
  for (int i = 0; i < n; i++) {
    Int d = s.d(i, i);
    if (d == 0) continue;
    rank++;
    if (d > 1) g.invariant_factors.push_back(d);
  }
  g.free_rank = m.rows - rank;
  return g;
}

inline AbelianGroup AbelianGroup::direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  // re-normalize the divisor chain through a diagonal presentation
  int n = (int)a.invariant_factors.size() + (int)b.invariant_factors.size();
  IntMatrix m(n, n, 0);
  int k = 0;
  for (auto& d : a.invariant_factors) m(k, k) = d, k++;
  for (auto& d : b.invariant_factors) m(k, k) = d, k++;
  AbelianGroup g = cokernel(m);
  g.free_rank = a.free_rank + b.free_rank;
  return g;
}

// PrimaryPartition: prime -> exponent partition (weakly decreasing).
using PrimaryPartition = std::map<Int, Partition>;

inline PrimaryPartition primary_decomposition(const AbelianGroup& g) {
  if (!g.is_finite()) throw std::domain_error("primary_decomposition: infinite group");
  PrimaryPartition out;
  for (auto& d : g.invariant_factors) {
    for (auto& [p, e] : factorize(d)) out[p].push_back(e);
  }
  for (auto& [p, part] : out) std::sort(part.begin(), part.end(), std::greater<int>());
  return out;
}

// Littlewood-Richardson positivity: does a skew semistandard tableau of shape
// lambda/mu with content nu and lattice reading word exist? Decided by
// backtracking over the cells in reading order.
inline bool lr_positive(const Partition& lambda, const Partition& mu, const Partition& nu) {
  if (partition_size(lambda) != partition_size(mu) + partition_size(nu)) return false;
  size_t rows = lambda.size();
  if (mu.size() > rows) return false;
  for (size_t i = 0; i < mu.size(); i++)
    if (mu[i] > lambda[i]) return false;
  if (nu.empty()) return true;  // lambda == mu by the size check
  int vals = (int)nu.size();
  // cells in reading order: rows top to bottom, within a row right to left
  struct Cell {
    int r, c;
  };
  std::vector<Cell> cells;
  for (int r = 0; r < (int)rows; r++) {
    int from = (r < (int)mu.size()) ? mu[r] : 0;
    for (int c = lambda[r] - 1; c >= from; c--) cells.push_back({r, c});
  }
  std::vector<std::vector<int>> fill(rows);
  for (size_t r = 0; r < rows; r++) fill[r].assign(lambda[r], 0);  // 0 = empty/mu
  std::vector<int> used(vals + 1, 0), prefix(vals + 2, 0);
  std::function<bool(size_t)> rec = [&](size_t idx) -> bool {
    if (idx == cells.size()) return true;
    auto [r, c] = cells[idx];
    for (int v = 1; v <= vals; v++) {
      if (used[v] >= nu[v - 1]) continue;
      // lattice word: after placing v, #v <= #(v-1)
      if (v > 1 && used[v] + 1 > used[v - 1]) continue;
      // row weakly increasing left to right: cell to the right (filled earlier)
      if (c + 1 < lambda[r] && fill[r][c + 1] != 0 && v > fill[r][c + 1]) continue;
      // column strictly increasing downward: cell above is already filled
      // unless it belongs to mu
      if (r > 0 && c < lambda[r - 1]) {
        int mu_above = (r - 1 < (int)mu.size()) ? mu[r - 1] : 0;
        if (c >= mu_above && v <= fill[r - 1][c]) continue;
      }
      fill[r][c] = v;
      used[v]++;
      if (rec(idx + 1)) {
        used[v]--;
        fill[r][c] = 0;
        return true;
      }
      used[v]--;
      fill[r][c] = 0;
    }
    return false;
  };
  return rec(0);
}

// All cokernel types nu of embeddings of a p-group of type mu into one of
// type lambda: |nu| = |lambda| - |mu| and c^lambda_{mu nu} > 0.
inline std::set<Partition> embedding_cokernel_types(const Partition& lambda, const Partition& mu) {
  std::set<Partition> out;
  int n = partition_size(lambda) - partition_size(mu);
  if (n < 0) return out;
  for (auto& nu : partitions_of(n))
    if (lr_positive(lambda, mu, nu)) out.insert(nu);
  return out;
}

// Does a group W of type nu fit into a short exact sequence 0->G->W->G->0?
inline bool square_extension_exists(const Partition& nu) {
  int n = partition_size(nu);
  if (n % 2 != 0) return false;
  if (n == 0) return true;
  for (auto& mu : partitions_of(n / 2))
    if (lr_positive(nu, mu, mu)) return true;
  return false;
}

// ---- Brute-force subgroup oracle ----

namespace detail {

// Finite abelian group as explicit tuples modulo the invariant factors.
struct ExplicitGroup {
  std::vector<long long> mods;
  long long order = 1;

  explicit ExplicitGroup(const AbelianGroup& g) {
    assert(g.is_finite());
    for (auto& d : g.invariant_factors) {
      mods.push_back(d.get_si());
      order *= mods.back();
    }
  }
  long long index(const std::vector<long long>& el) const {
    long long ix = 0;
    for (size_t i = 0; i < mods.size(); i++) ix = ix * mods[i] + el[i];
    return ix;
  }
  std::vector<long long> element(long long ix) const {
    std::vector<long long> el(mods.size());
    for (int i = (int)mods.size() - 1; i >= 0; i--) {
      el[i] = ix % mods[i];
      ix /= mods[i];
    }
    return el;
  }
  std::vector<long long> add(const std::vector<long long>& a, const std::vector<long long>& b) const {
    std::vector<long long> c(mods.size());
    for (size_t i = 0; i < mods.size(); i++) c[i] = (a[i] + b[i]) % mods[i];
    return c;
  }
  std::vector<long long> scale(long long k, const std::vector<long long>& a) const {
    std::vector<long long> c(mods.size());
    for (size_t i = 0; i < mods.size(); i++) {
      long long v = (k % mods[i]) * (a[i] % mods[i]) % mods[i];
      if (v < 0) v += mods[i];
      c[i] = v;
    }
    return c;
  }
};

// Subgroup generated by given elements, as a sorted vector of element indices.
inline std::vector<long long> span_of(const ExplicitGroup& g,
                                      const std::vector<std::vector<long long>>& gens) {
  std::set<long long> seen;
  std::vector<std::vector<long long>> frontier;
  std::vector<long long> zero(g.mods.size(), 0);
  seen.insert(g.index(zero));
  frontier.push_back(zero);
  for (size_t h = 0; h < frontier.size(); h++) {
    for (auto& gen : gens) {
      auto nx = g.add(frontier[h], gen);
      long long ix = g.index(nx);
      if (seen.insert(ix).second) frontier.push_back(nx);
    }
  }
  return std::vector<long long>(seen.begin(), seen.end());
}

// Type of the p-part of A/sub, from torsion counting: N_j = #{cosets q with
// p^j q = 0} gives the conjugate partition via log_p(N_j / N_{j-1}).
inline Partition quotient_p_type(const ExplicitGroup& g, const std::set<long long>& sub,
                                 long long p) {
  Partition conj;
  long long prev = 1;
  for (int j = 1;; j++) {
    long long pj = 1;
    for (int u = 0; u < j; u++) pj *= p;
    long long count = 0;
    for (long long ix = 0; ix < g.order; ix++)
      if (sub.count(g.index(g.scale(pj, g.element(ix))))) count++;
    long long nj = count / (long long)sub.size();
    long long ratio = nj / prev;
    if (ratio == 1) break;
    int dim = 0;
    while (ratio > 1) {
      ratio /= p;
      dim++;
    }
    conj.push_back(dim);
    prev = nj;
  }
  Partition lam;
  for (int i = 1; i <= (conj.empty() ? 0 : conj[0]); i++) {
    int cnt = 0;
    for (int c : conj)
      if (c >= i) cnt++;
    lam.push_back(cnt);
  }
  std::sort(lam.begin(), lam.end(), std::greater<int>());
  return lam;
}

}  // namespace detail

// Enumerates injective homomorphisms B -> A by generator images and collects
// the cokernel types per prime; |A| <= 10^4 (test-fixture scale).
inline std::map<Int, std::set<Partition>> brute_cokernel_types(const AbelianGroup& a,
                                                               const AbelianGroup& b) {
  if (!a.is_finite() || !b.is_finite())
    throw std::domain_error("brute_cokernel_types: infinite group");
  if (a.order() > 10000) throw std::domain_error("brute_cokernel_types: size bound exceeded");
  detail::ExplicitGroup ga(a);
  std::map<Int, std::set<Partition>> out;
  std::vector<Int> aprimes;
  for (auto& [p, e] : primary_decomposition(a)) aprimes.push_back(p);
  std::vector<long long> bmods;
  for (auto& d : b.invariant_factors) bmods.push_back(d.get_si());
  long long border = 1;
  for (auto m : bmods) border *= m;
  if (border > ga.order) return out;

  size_t k = bmods.size();
  auto record = [&](const std::set<long long>& sub) {
    for (auto& p : aprimes) out[p].insert(detail::quotient_p_type(ga, sub, p.get_si()));
  };
  if (k == 0) {
    std::set<long long> sub{0};
    record(sub);
    return out;
  }
  // candidate images per generator: elements killed by the generator order
  std::vector<std::vector<std::vector<long long>>> candidates(k);
  for (size_t i = 0; i < k; i++)
    for (long long ix = 0; ix < ga.order; ix++) {
      auto el = ga.element(ix);
      if (ga.index(ga.scale(bmods[i], el)) == 0) candidates[i].push_back(el);
    }
  std::vector<std::vector<long long>> images(k);
  std::function<void(size_t)> rec = [&](size_t idx) {
    if (idx == k) {
      // injective iff no nonzero tuple of B maps to zero
      for (long long ix = 1; ix < border; ix++) {
        long long t = ix;
        std::vector<long long> acc(ga.mods.size(), 0);
        for (int i = (int)k - 1; i >= 0; i--) {
          long long c = t % bmods[i];
          t /= bmods[i];
          if (c) acc = ga.add(acc, ga.scale(c, images[i]));
        }
        if (ga.index(acc) == 0) return;
      }
      auto sub = detail::span_of(ga, images);
      record(std::set<long long>(sub.begin(), sub.end()));
      return;
    }
    for (auto& el : candidates[idx]) {
      images[idx] = el;
      rec(idx + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace ribcon
