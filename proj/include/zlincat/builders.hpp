#pragma once

// Constructors for standard example categories: one-object categories of
// rings, categories of graded rings, Z-linearized orbit categories of
// permutation groups, and finite products of prime fields.

#include "zlincat/category.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace zlincat {

/// Malformed builder parameters.
class GrammarError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Well-formed parameters describing an inadmissible family or grading.
class BuilderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rings

/// A unital ring on a finitely presented abelian group: mult[i][j] = e_i e_j.
struct RingData {
  FpAbelianGroup group;
  std::vector<std::vector<IntVector>> mult;
  IntVector unit;
  std::string name = "*";
  std::string description;
};

inline ZCategory from_unital_ring(const RingData& r) {
  const std::size_t n = r.group.ngens();
  if (r.mult.size() != n || r.unit.size() != n) throw DimensionError("from_unital_ring: table shape mismatch");
  CategoryData d = CategoryData::with_homs({r.name}, {r.group});
  d.identities[0] = r.unit;
  auto& table = d.comp[0];
  for (std::size_t g = 0; g < n; ++g) {
    if (r.mult[g].size() != n) throw DimensionError("from_unital_ring: table shape mismatch");
    for (std::size_t f = 0; f < n; ++f) table[g * n + f] = r.mult[g][f];
  }
  if (!r.description.empty()) d.metadata["ring"] = r.description;
  return ZCategory::create(std::move(d));
}

inline RingData integers_ring() {
  return RingData{FpAbelianGroup::free(1), {{IntVector{Int(1)}}}, IntVector{Int(1)}, "*", "Z"};
}

inline RingData integers_mod_ring(const Int& m) {
  if (m < 2) throw GrammarError("Z/m needs m >= 2");
  return RingData{FpAbelianGroup::cyclic(m), {{IntVector{Int(1)}}}, IntVector{Int(1)}, "*", "Z/" + m.get_str()};
}

/// Z[C_m] on the basis 1, s, ..., s^{m-1}.
inline RingData cyclic_group_ring(std::size_t m) {
  if (m == 0) throw GrammarError("group order must be positive");
  RingData r{FpAbelianGroup::free(m), {}, unit_vector(m, 0), "*", "Z[C" + std::to_string(m) + "]"};
  r.mult.assign(m, std::vector<IntVector>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r.mult[i][j] = unit_vector(m, (i + j) % m);
  return r;
}

// ---------------------------------------------------------------------------
// Graded rings

/// R = ⊕_g R_g graded by a finite abelian group ∏ Z/m_i.  Degrees are
/// indexed in mixed radix with the first factor varying slowest.
struct GradedRingData {
  std::vector<std::size_t> orders;
  std::vector<FpAbelianGroup> components;
  // mult[g * |G| + h][i][j]: product of generator i of R_g and j of R_h, in R_{g+h}
  std::vector<std::vector<std::vector<IntVector>>> mult;
  IntVector unit;  // in R_0
  std::string description;

  std::size_t group_order() const {
    std::size_t n = 1;
    for (auto m : orders) n *= m;
    return n;
  }
  std::vector<std::size_t> digits(std::size_t g) const {
    std::vector<std::size_t> d(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      d[i] = g % orders[i];
      g /= orders[i];
    }
    return d;
  }
  std::size_t index(const std::vector<std::size_t>& d) const {
    std::size_t g = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) g = g * orders[i] + d[i] % orders[i];
    return g;
  }
  std::size_t add(std::size_t g, std::size_t h) const {
    auto a = digits(g), b = digits(h);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + b[i]) % orders[i];
    return index(a);
  }
  std::size_t sub(std::size_t g, std::size_t h) const {
    auto a = digits(g), b = digits(h);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + orders[i] - b[i]) % orders[i];
    return index(a);
  }
  std::string degree_name(std::size_t g) const {
    const auto d = digits(g);
    if (d.size() == 1) return std::to_string(d[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
  }
};

/// Objects are the degrees; hom(g, h) = R_{h-g}; composition is multiplication.
inline ZCategory graded_category(const GradedRingData& d) {
  const std::size_t n = d.group_order();
  if (d.components.size() != n || d.mult.size() != n * n) throw GrammarError("graded ring: wrong number of components");
  if (d.unit.size() != d.components[0].ngens()) throw BuilderError("graded ring: unit must lie in degree 0");
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const auto& t = d.mult[g * n + h];
      const std::size_t target = d.components[d.add(g, h)].ngens();
      if (t.size() != d.components[g].ngens()) throw BuilderError("graded ring: table shape violates grading");
      for (const auto& row : t) {
        if (row.size() != d.components[h].ngens()) throw BuilderError("graded ring: table shape violates grading");
        for (const auto& v : row)
          if (v.size() != target) throw BuilderError("graded ring: product leaves degree g+h");
      }
    }
  std::vector<std::string> names;
  for (std::size_t g = 0; g < n; ++g) names.push_back(d.degree_name(g));
  std::vector<FpAbelianGroup> homs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) homs.push_back(d.components[d.sub(b, a)]);
  CategoryData cd = CategoryData::with_homs(names, homs);
  for (std::size_t a = 0; a < n; ++a) cd.identities[a] = d.unit;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t gdeg = d.sub(c, b), fdeg = d.sub(b, a);
        const auto& t = d.mult[gdeg * n + fdeg];
        auto& table = cd.comp[cd.comp_index(a, b, c)];
        const std::size_t nf = d.components[fdeg].ngens();
        for (std::size_t g = 0; g < t.size(); ++g)
          for (std::size_t f = 0; f < nf; ++f) table[g * nf + f] = t[g][f];
      }
  if (!d.description.empty()) cd.metadata["graded_ring"] = d.description;
  return ZCategory::create(std::move(cd));
}

/// R[t] graded by Z/n with deg t = 1 and every R_g = R t^g.  By default
/// exponents add modulo n (t^n = 1), which gives hom(p, q) = R for all p, q
/// and A ≅ M_n(R).  With truncate = true, t^a t^b = 0 whenever a + b >= n.
inline GradedRingData cyclic_power_ring(const RingData& base, std::size_t n, bool truncate = false) {
  if (n == 0) throw GrammarError("cyclic grading needs n >= 1");
  if (base.group.ngens() != 1) throw GrammarError("cyclic_power_ring: base ring must be cyclic as a group");
  GradedRingData d;
  d.orders = {n};
  d.components.assign(n, base.group);
  d.mult.resize(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const bool vanish = truncate && g + h >= n;
      d.mult[g * n + h] = {{vanish ? IntVector{Int(0)} : base.mult[0][0]}};
    }
  d.unit = base.unit;
  d.description = base.description + "[t] graded by Z/" + std::to_string(n) +
                  (truncate ? ", t^a t^b = 0 for a+b >= n" : ", t^n = 1");
  return d;
}

// ---------------------------------------------------------------------------
// Permutation groups and orbit categories

using Perm = std::vector<std::size_t>;

inline Perm perm_compose(const Perm& g, const Perm& h) {
  Perm out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = g[h[x]];
  return out;
}

inline Perm perm_inverse(const Perm& g) {
  Perm out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[g[x]] = x;
  return out;
}

inline Perm perm_identity(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

inline std::string cycle_notation(const Perm& p) {
  const bool wide = p.size() > 9;
  std::string s;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    s += "(";
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      if (s.back() != '(' && wide) s += ",";
      seen[j] = true;
      s += std::to_string(j + 1);
    }
    s += ")";
  }
  return s.empty() ? "e" : s;
}

/// Parses "(12)(34)" or "(1,2)(10,11)" into a permutation of {1..n}.
inline Perm parse_cycles(const std::string& text, std::size_t n) {
  Perm p = perm_identity(n);
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw GrammarError("permutation: expected '(' in " + text);
    const std::size_t close = text.find(')', i);
    if (close == std::string::npos) throw GrammarError("permutation: unbalanced parentheses in " + text);
    const std::string body = text.substr(i + 1, close - i - 1);
    std::vector<std::size_t> pts;
    if (body.find_first_of(", ") != std::string::npos) {
      std::string tok;
      for (char ch : body + ",") {
        if (ch == ',' || ch == ' ') {
          if (!tok.empty()) pts.push_back(std::stoul(tok));
          tok.clear();
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
          tok += ch;
        } else {
          throw GrammarError("permutation: bad character in " + text);
        }
      }
    } else {
      for (char ch : body) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw GrammarError("permutation: bad character in " + text);
        pts.push_back(static_cast<std::size_t>(ch - '0'));
      }
    }
    std::set<std::size_t> distinct(pts.begin(), pts.end());
    if (distinct.size() != pts.size()) throw GrammarError("permutation: repeated point in cycle " + body);
    for (auto x : pts)
      if (x < 1 || x > n) throw GrammarError("permutation: point out of range in " + text);
    // (a b c) sends a -> b -> c -> a; cycles are applied right to left
    Perm c = perm_identity(n);
    for (std::size_t k = 0; k < pts.size(); ++k) c[pts[k] - 1] = pts[(k + 1) % pts.size()] - 1;
    p = perm_compose(p, c);
    i = close + 1;
  }
  return p;
}

/// Splits at commas that are not inside parentheses.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

struct PermGroupData {
  std::size_t degree = 0;
  std::vector<Perm> generators;
  std::vector<std::vector<Perm>> family;  // generator lists
  std::vector<std::string> family_labels;
};

/// "perm:n:(12),(123)"
inline PermGroupData parse_perm_group(const std::string& spec) {
  if (spec.rfind("perm:", 0) != 0) throw GrammarError("group must have the form perm:n:generators");
  const std::size_t colon = spec.find(':', 5);
  if (colon == std::string::npos) throw GrammarError("group must have the form perm:n:generators");
  PermGroupData d;
  try {
    d.degree = std::stoul(spec.substr(5, colon - 5));
  } catch (const std::exception&) {
    throw GrammarError("group degree is not a number");
  }
  if (d.degree == 0) throw GrammarError("group degree must be positive");
  for (const auto& tok : split_top_level(spec.substr(colon + 1), ',')) {
    const std::string t = trim(tok);
    if (t.empty() || t == "e") continue;
    d.generators.push_back(parse_cycles(t, d.degree));
  }
  return d;
}

/// "e;full;(123)" with ';' between subgroups.
inline void parse_family(PermGroupData& d, const std::string& spec) {
  for (const auto& item : split_top_level(spec, ';')) {
    const std::string t = trim(item);
    if (t.empty()) throw GrammarError("empty subgroup in family");
    if (t == "e") {
      d.family.push_back({});
    } else if (t == "full" || t == "G") {
      d.family.push_back(d.generators);
    } else {
      std::vector<Perm> gens;
      for (const auto& g : split_top_level(t, ',')) gens.push_back(parse_cycles(trim(g), d.degree));
      d.family.push_back(std::move(gens));
    }
    d.family_labels.push_back(t == "full" ? "G" : t);
  }
}

/// Closure of a generating set under composition, sorted.
inline std::vector<Perm> generated_group(std::size_t n, const std::vector<Perm>& gens) {
  std::set<Perm> seen{perm_identity(n)};
  std::vector<Perm> frontier{perm_identity(n)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Perm y = perm_compose(x, g);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Every subgroup of the finite group `elements`, each as a sorted list.
inline std::vector<std::vector<Perm>> all_subgroups(std::size_t n, const std::vector<Perm>& elements) {
  std::set<std::vector<Perm>> found{{perm_identity(n)}};
  std::vector<std::vector<Perm>> frontier{{perm_identity(n)}};
  while (!frontier.empty()) {
    std::vector<std::vector<Perm>> next;
    for (const auto& h : frontier)
      for (const auto& g : elements) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        std::vector<Perm> gens = h;
        gens.push_back(g);
        auto k = generated_group(n, gens);
        if (found.insert(k).second) next.push_back(std::move(k));
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

inline std::string subgroup_label(const std::vector<Perm>& h) {
  std::string s = "{";
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + cycle_notation(h[i]);
  return s + "}";
}

struct OrbitOptions {
  bool allow_partial_family = false;
};

/// Coset gK represented by its least element.
inline Perm coset_rep(const Perm& g, const std::vector<Perm>& K) {
  Perm best = perm_compose(g, K.front());
  for (const auto& k : K) best = std::min(best, perm_compose(g, k));
  return best;
}

/// Equivariant maps G/H -> G/K, as least representatives of cosets gK
/// with g^-1 H g ⊆ K, sorted.
inline std::vector<Perm> equivariant_maps(const std::vector<Perm>& G, const std::vector<Perm>& H,
                                          const std::vector<Perm>& K) {
  std::set<Perm> reps;
  for (const auto& g : G) {
    const Perm gi = perm_inverse(g);
    bool ok = true;
    for (const auto& h : H)
      if (!std::binary_search(K.begin(), K.end(), perm_compose(gi, perm_compose(h, g)))) {
        ok = false;
        break;
      }
    if (ok) reps.insert(coset_rep(g, K));
  }
  return {reps.begin(), reps.end()};
}

/// Z-linearized orbit category: objects G/H for H in the family, hom-groups
/// free on equivariant maps, f(sH) = s g K.
inline ZCategory orbit_category(const PermGroupData& d, const OrbitOptions& opt = {}) {
  const std::size_t n = d.degree;
  const auto G = generated_group(n, d.generators);
  std::vector<std::vector<Perm>> fam;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < d.family.size(); ++i) {
    auto H = generated_group(n, d.family[i]);
    for (const auto& h : H)
      if (!std::binary_search(G.begin(), G.end(), h))
        throw BuilderError("family member " + d.family_labels[i] + " is not a subgroup of G");
    if (std::find(fam.begin(), fam.end(), H) != fam.end()) continue;
    fam.push_back(std::move(H));
    names.push_back("G/" + (i < d.family_labels.size() ? d.family_labels[i] : subgroup_label(fam.back())));
  }
  if (fam.empty()) throw GrammarError("subgroup family is empty");
  std::set<std::vector<Perm>> members(fam.begin(), fam.end());

  for (const auto& H : fam)
    for (const auto& g : G) {
      const Perm gi = perm_inverse(g);
      std::vector<Perm> conj;
      for (const auto& h : H) conj.push_back(perm_compose(g, perm_compose(h, gi)));
      std::sort(conj.begin(), conj.end());
      if (!members.count(conj))
        throw BuilderError("family is not closed under conjugation: missing " + subgroup_label(conj));
    }
  std::set<std::vector<Perm>> missing;
  for (const auto& H : fam)
    for (auto& K : all_subgroups(n, H))
      if (!members.count(K)) missing.insert(K);
  if (!missing.empty() && !opt.allow_partial_family)
    throw BuilderError("family is not closed under subgroups: missing " + subgroup_label(*missing.begin()));

  const std::size_t k = fam.size();
  std::vector<std::vector<Perm>> maps(k * k);
  std::vector<FpAbelianGroup> homs;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      maps[a * k + b] = equivariant_maps(G, fam[a], fam[b]);
      homs.push_back(FpAbelianGroup::free(maps[a * k + b].size()));
    }
  CategoryData cd = CategoryData::with_homs(names, homs);
  for (std::size_t a = 0; a < k; ++a) {
    const auto& m = maps[a * k + a];
    const auto it = std::find(m.begin(), m.end(), perm_identity(n));
    cd.identities[a] = unit_vector(m.size(), static_cast<std::size_t>(it - m.begin()));
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        const auto& mf = maps[a * k + b];
        const auto& mg = maps[b * k + c];
        const auto& mh = maps[a * k + c];
        auto& table = cd.comp[cd.comp_index(a, b, c)];
        for (std::size_t g = 0; g < mg.size(); ++g)
          for (std::size_t f = 0; f < mf.size(); ++f) {
            // f(H) = g1 K, then g(g1 K) = g1 g2 L
            const Perm rep = coset_rep(perm_compose(mf[f], mg[g]), fam[c]);
            const auto it = std::lower_bound(mh.begin(), mh.end(), rep);
            if (it == mh.end() || *it != rep) throw std::logic_error("orbit_category: composite is not equivariant");
            table[g * mf.size() + f] = unit_vector(mh.size(), static_cast<std::size_t>(it - mh.begin()));
          }
      }
  cd.metadata["linearization"] = "Z-linear: hom-groups are free on equivariant maps G/H -> G/K";
  cd.metadata["group_order"] = std::to_string(G.size());
  if (!missing.empty()) {
    std::string s;
    for (const auto& m : missing) s += (s.empty() ? "" : " ") + subgroup_label(m);
    cd.metadata["family_missing_subgroups"] = s;
  }
  return ZCategory::create(std::move(cd));
}

// ---------------------------------------------------------------------------
// Products of prime fields

inline bool is_prime(const Int& p) { return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0; }

inline ZCategory sum_of_fields(const std::vector<Int>& primes) {
  if (primes.empty()) throw GrammarError("sum_of_fields: at least one prime is required");
  std::vector<std::string> names;
  std::map<std::string, int> used;
  for (const auto& p : primes) {
    if (!is_prime(p)) throw GrammarError("sum_of_fields: " + p.get_str() + " is not prime");
    std::string name = "F" + p.get_str();
    const int k = used[name]++;
    if (k > 0) name += "." + std::to_string(k);
    names.push_back(name);
  }
  const std::size_t n = primes.size();
  std::vector<FpAbelianGroup> homs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) homs.push_back(a == b ? FpAbelianGroup::cyclic(primes[a]) : FpAbelianGroup::trivial());
  CategoryData cd = CategoryData::with_homs(names, homs);
  for (std::size_t a = 0; a < n; ++a) {
    cd.identities[a] = IntVector{Int(1)};
    cd.comp[cd.comp_index(a, a, a)][0] = IntVector{Int(1)};
  }
  return ZCategory::create(std::move(cd));
}

}  // namespace zlincat
