#pragma once
// Planar diagram codes, Wirtinger presentations, free-group words, Fox
// derivatives, and the Alexander matrices they induce.

#include "ribcon/matrix.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ribcon {

// One crossing: (incoming under-edge, then the remaining edges
// counterclockwise). Edges are numbered 1..2n consecutively along the knot.
struct Crossing {
  int a, b, c, d;
};

struct PDCode {
  std::vector<Crossing> crossings;

  int edge_count() const { return 2 * (int)crossings.size(); }

  // every edge label occurs exactly twice and labels are 1..2n
  bool valid() const {
    int n = (int)crossings.size();
    if (n == 0) return true;
    std::vector<int> count(2 * n + 1, 0);
    for (auto& x : crossings)
      for (int e : {x.a, x.b, x.c, x.d}) {
        if (e < 1 || e > 2 * n) return false;
        count[e]++;
      }
    for (int e = 1; e <= 2 * n; e++)
      if (count[e] != 2) return false;
    return true;
  }
};

// "PD[X[1,4,2,5], X[3,6,4,1], ...]"
inline std::optional<PDCode> parse_pd(const std::string& s) {
  PDCode pd;
  size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (std::isspace((unsigned char)s[i]) || s[i] == ',')) i++;
  };
  skip();
  if (s.compare(i, 3, "PD[") == 0)
    i += 3;
  else
    return std::nullopt;
  while (true) {
    skip();
    if (i < s.size() && s[i] == ']') break;
    if (s.compare(i, 2, "X[") != 0) return std::nullopt;
    i += 2;
    int vals[4];
    for (int k = 0; k < 4; k++) {
      skip();
      std::string d;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) d += s[i++];
      if (d.empty()) return std::nullopt;
      vals[k] = std::stoi(d);
      skip();
    }
    if (i >= s.size() || s[i] != ']') return std::nullopt;
    i++;
    pd.crossings.push_back({vals[0], vals[1], vals[2], vals[3]});
  }
  if (!pd.valid()) return std::nullopt;
  return pd;
}

inline std::string pd_to_string(const PDCode& pd) {
  std::ostringstream os;
  os << "PD[";
  for (size_t i = 0; i < pd.crossings.size(); i++) {
    auto& x = pd.crossings[i];
    if (i) os << ", ";
    os << "X[" << x.a << "," << x.b << "," << x.c << "," << x.d << "]";
  }
  os << "]";
  return os.str();
}

// Reduced word in a free group: sequence of (generator index, +-1).
struct FreeWord {
  std::vector<std::pair<int, int>> letters;

  static FreeWord gen(int i, int e = 1) {
    FreeWord w;
    w.letters.push_back({i, e});
    return w;
  }

  void reduce() {
    std::vector<std::pair<int, int>> out;
    for (auto& l : letters) {
      if (!out.empty() && out.back().first == l.first && out.back().second == -l.second)
        out.pop_back();
      else
        out.push_back(l);
    }
    letters = std::move(out);
  }

  FreeWord inverse() const {
    FreeWord w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      w.letters.push_back({it->first, -it->second});
    return w;
  }

  friend FreeWord operator*(const FreeWord& a, const FreeWord& b) {
    FreeWord w = a;
    w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
    w.reduce();
    return w;
  }

  friend bool operator==(const FreeWord& a, const FreeWord& b) { return a.letters == b.letters; }
  friend bool operator<(const FreeWord& a, const FreeWord& b) { return a.letters < b.letters; }

  std::string str() const {
    if (letters.empty()) return "1";
    std::string s;
    for (auto& [g, e] : letters) {
      s += "x" + std::to_string(g + 1);
      if (e == -1) s += "^-1";
      s += " ";
    }
    if (!s.empty()) s.pop_back();
    return s;
  }
};

// Deficiency-one group presentation with abelianization degrees.
struct Presentation {
  int gens = 0;
  std::vector<FreeWord> relators;
  std::vector<int> phi;  // abelianization degree per generator

  int phi_of(const FreeWord& w) const {
    int d = 0;
    for (auto& [g, e] : w.letters) d += e * phi[g];
    return d;
  }
};

// Wirtinger presentation from a PD code: one generator per arc (overpass),
// one conjugation relator per crossing, the last relator dropped.
//
// Crossing X[a,b,c,d]: the under-strand runs a -> c; edges b and d belong to
// the over-arc. The over-strand runs d -> b when b = d+1 (mod 2n) (positive
// crossing, relator x_c = x_o x_a x_o^{-1}) and b -> d when d = b+1 (mod 2n)
// (negative crossing, relator x_c = x_o^{-1} x_a x_o).
inline Presentation wirtinger_from_pd(const PDCode& pd) {
  if (!pd.valid()) throw std::domain_error("wirtinger_from_pd: malformed PD code");
  int n = (int)pd.crossings.size();
  if (n == 0) {
    Presentation p;
    p.gens = 1;
    p.phi = {1};
    return p;
  }
  int ne = 2 * n;
  // arcs: edges joined where they pass over a crossing (b ~ d)
  std::vector<int> uf(ne + 1);
  for (int i = 0; i <= ne; i++) uf[i] = i;
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  auto unite = [&](int x, int y) { uf[find(x)] = find(y); };
  for (auto& x : pd.crossings) unite(x.b, x.d);
  std::map<int, int> arc_id;
  for (int e = 1; e <= ne; e++) {
    int r = find(e);
    if (!arc_id.count(r)) {
      int id = (int)arc_id.size();
      arc_id[r] = id;
    }
  }
  int arcs = (int)arc_id.size();
  auto arc = [&](int e) { return arc_id[find(e)]; };
  // connectivity of the diagram (reject split unions)
  {
    std::vector<int> cuf(ne + 1);
    for (int i = 0; i <= ne; i++) cuf[i] = i;
    std::function<int(int)> cfind = [&](int x) { return cuf[x] == x ? x : cuf[x] = cfind(cuf[x]); };
    auto cunite = [&](int x, int y) { cuf[cfind(x)] = cfind(y); };
    for (auto& x : pd.crossings) {
      cunite(x.a, x.b);
      cunite(x.a, x.c);
      cunite(x.a, x.d);
    }
    int root = cfind(1);
    for (int e = 2; e <= ne; e++)
      if (cfind(e) != root) throw std::domain_error("wirtinger_from_pd: split diagram");
  }
  Presentation p;
  p.gens = arcs;
  p.phi.assign(arcs, 1);
  for (int ci = 0; ci < n; ci++) {
    auto& x = pd.crossings[ci];
    int u = arc(x.a), v = arc(x.c), o = arc(x.b);
    bool positive;
    if ((x.d % ne) + 1 == x.b)
      positive = true;  // over-strand d -> b
    else if ((x.b % ne) + 1 == x.d)
      positive = false;  // over-strand b -> d
    else
      throw std::domain_error("wirtinger_from_pd: over-strand edges not consecutive");
    // relator w = x_v^{-1} x_o^{eps} x_u x_o^{-eps}
    int eps = positive ? 1 : -1;
    FreeWord w = FreeWord::gen(v, -1) * FreeWord::gen(o, eps) * FreeWord::gen(u, 1) *
                 FreeWord::gen(o, -eps);
    p.relators.push_back(w);
  }
  if (!p.relators.empty()) p.relators.pop_back();  // one redundant relator
  return p;
}

// Connected sum at the level of presentations (Seifert-van Kampen): free
// product with the two distinguished meridians identified.
inline Presentation presentation_connected_sum(const Presentation& a, const Presentation& b) {
  Presentation p;
  p.gens = a.gens + b.gens;
  p.phi = a.phi;
  p.phi.insert(p.phi.end(), b.phi.begin(), b.phi.end());
  p.relators = a.relators;
  for (auto w : b.relators) {
    for (auto& l : w.letters) l.first += a.gens;
    p.relators.push_back(w);
  }
  FreeWord glue = FreeWord::gen(0, 1) * FreeWord::gen(a.gens, -1);
  p.relators.push_back(glue);
  return p;
}

// Connected sum of PD codes: cut the last edge of each diagram and cross-glue,
// renumbering edges along the traversal of the composite strand.
inline PDCode pd_connected_sum(const PDCode& a, const PDCode& b) {
  int na = (int)a.crossings.size(), nb = (int)b.crossings.size();
  if (na == 0) return b;
  if (nb == 0) return a;
  int ea = 2 * na, eb = 2 * nb;
  PDCode out;
  // classify the two occurrences of the cut edges as outgoing or incoming
  // (out at position a/c if it is the under-out edge c; for over edges by the
  // successor rule)
  auto relabel = [&](const PDCode& pd, int cut, int out_label, int in_label, int shift,
                     int ne) {
    std::vector<Crossing> res;
    for (auto x : pd.crossings) {
      int vals[4] = {x.a, x.b, x.c, x.d};
      for (int k = 0; k < 4; k++) {
        int e = vals[k];
        if (e != cut) {
          vals[k] = e + shift;
          continue;
        }
        bool outgoing;
        if (k == 0)
          outgoing = false;  // incoming under
        else if (k == 2)
          outgoing = true;  // outgoing under
        else {
          // over edge: over-strand runs d->b if b = d+1, else b->d
          bool d_to_b = ((x.d % ne) + 1 == x.b);
          if (k == 1) outgoing = d_to_b;   // b is over-out iff d->b
          else outgoing = !d_to_b;         // d is over-out iff b->d
        }
        vals[k] = outgoing ? out_label : in_label;
      }
      res.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    return res;
  };
  // A keeps 1..ea-1; its cut edge ea: out-half becomes edge ea, in-half
  // becomes ea+eb. B's edges i -> ea + i - ... : B edge j (1..eb-1) -> ea + j;
  // B's cut edge eb: out-half -> ea+eb, in-half -> ea (it is consumed by A's
  // out-half continuing into B edge 1... the glued edges pair A-out with B-in).
  auto ca = relabel(a, ea, ea, ea + eb, 0, ea);
  auto cb = relabel(b, eb, ea + eb, ea, ea, eb);
  out.crossings = ca;
  out.crossings.insert(out.crossings.end(), cb.begin(), cb.end());
  if (!out.valid()) throw std::runtime_error("pd_connected_sum: internal labeling error");
  return out;
}

// Formal integer combination of free words (group-ring element).
using GroupRingElem = std::map<FreeWord, Int>;

inline void gre_add(GroupRingElem& a, const FreeWord& w, const Int& c) {
  auto it = a.find(w);
  if (it == a.end()) {
    if (c != 0) a[w] = c;
  } else {
    it->second += c;
    if (it->second == 0) a.erase(it);
  }
}

inline GroupRingElem gre_mul(const GroupRingElem& a, const GroupRingElem& b) {
  GroupRingElem out;
  for (auto& [wa, ca] : a)
    for (auto& [wb, cb] : b) gre_add(out, wa * wb, ca * cb);
  return out;
}

// Fox derivative d w / d x_j as a formal combination of words:
// d(uv) = du + u dv, d x_j = 1, d x_j^{-1} = -x_j^{-1}.
inline GroupRingElem fox_derivative(const FreeWord& w, int j) {
  GroupRingElem out;
  FreeWord prefix;
  for (auto& [g, e] : w.letters) {
    if (g == j) {
      if (e == 1) {
        gre_add(out, prefix, 1);
      } else {
        FreeWord p = prefix * FreeWord::gen(g, -1);
        gre_add(out, p, -1);
      }
    }
    prefix = prefix * FreeWord::gen(g, e);
  }
  return out;
}

// Abelianization of a group-ring element under x_i -> t^{phi(i)}.
inline ZPoly abelianize(const GroupRingElem& e, const Presentation& p) {
  ZPoly out;
  for (auto& [w, c] : e) out = out + ZPoly::monomial(c, p.phi_of(w));
  return out;
}

// (m-1) x m Jacobian of the presentation, abelianized.
inline Mat<ZPoly> alexander_matrix(const Presentation& p) {
  Mat<ZPoly> m((int)p.relators.size(), p.gens);
  for (int i = 0; i < (int)p.relators.size(); i++)
    for (int j = 0; j < p.gens; j++) m(i, j) = abelianize(fox_derivative(p.relators[i], j), p);
  return m;
}

// Square presentation of the Alexander module: the Jacobian with column j
// deleted; generators are the classes of x_i x_j^{-1}. det == Delta up to
// units (validated against the Seifert-matrix route in the tests).
inline Mat<ZPoly> alexander_module_presentation(const Presentation& p, int j = 0) {
  Mat<ZPoly> full = alexander_matrix(p);
  return full.submatrix_erase(-1, j);
}

inline ZPoly alexander_poly_from_pd(const PDCode& pd) {
  Presentation p = wirtinger_from_pd(pd);
  auto m = alexander_module_presentation(p, 0);
  if (m.rows == 0) return ZPoly(Int(1));
  return normalize_units(bareiss_det(m, ZPoly(Int(1))));
}

}  // namespace ribcon
