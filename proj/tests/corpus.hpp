#pragma once

// Named example categories shared by the test suites.

#include "zlincat/builders.hpp"

#include <string>
#include <utility>
#include <vector>

namespace corpus {

using namespace zlincat;

inline ZCategory z() { return from_unital_ring(integers_ring()); }
inline ZCategory zmod(long m) { return from_unital_ring(integers_mod_ring(Int(m))); }
inline ZCategory zc2() { return from_unital_ring(cyclic_group_ring(2)); }
inline ZCategory ctilde(std::size_t n) { return graded_category(cyclic_power_ring(integers_ring(), n)); }
inline ZCategory sumfields(std::vector<long> ps) {
  std::vector<Int> v;
  for (long p : ps) v.emplace_back(p);
  return sum_of_fields(v);
}
inline ZCategory orbit_z2() {
  auto d = parse_perm_group("perm:2:(12)");
  parse_family(d, "e;full");
  return orbit_category(d);
}
inline ZCategory orbit_s3_partial() {
  auto d = parse_perm_group("perm:3:(12),(123)");
  parse_family(d, "e;(123);full");
  return orbit_category(d, OrbitOptions{true});
}

inline std::vector<std::pair<std::string, ZCategory>> all() {
  return {{"Z", z()},
          {"Z/4", zmod(4)},
          {"Z/5", zmod(5)},
          {"Z[C2]", zc2()},
          {"ctilde2", ctilde(2)},
          {"ctilde3", ctilde(3)},
          {"F2xF3", sumfields({2, 3})},
          {"orbit Z2", orbit_z2()},
          {"orbit S3", orbit_s3_partial()}};
}

}  // namespace corpus

#include "zlincat/completion.hpp"

#include <random>

namespace corpus {

inline TupleObject random_tuple(const ZCategory& C, std::size_t len, std::mt19937_64& rng) {
  TupleObject t;
  for (std::size_t i = 0; i < len; ++i) t.components.push_back(rng() % C.size());
  return t;
}

inline MatMorphism random_mat(const ZCategory& C, const TupleObject& src, const TupleObject& tgt,
                              std::mt19937_64& rng, long spread = 3) {
  MatMorphism m = mat_zero(C, src, tgt);
  for (auto& e : m.entries)
    for (auto& x : e) x = static_cast<long>(rng() % static_cast<unsigned long>(2 * spread + 1)) - spread;
  return canonical(C, std::move(m));
}

/// E diag(id or 0) E^-1 with E a product of elementary matrices id + u e_ij.
inline MatMorphism random_idempotent(const ZCategory& C, const TupleObject& t, std::mt19937_64& rng) {
  MatMorphism p = mat_zero(C, t, t);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (rng() % 2) p.at(i, i) = C.identity(t[i]).coeffs;
  for (int step = 0; step < 3 && t.size() > 1; ++step) {
    const std::size_t i = rng() % t.size(), j = rng() % t.size();
    if (i == j) continue;
    MatMorphism e = mat_identity(C, t), einv = mat_identity(C, t);
    IntVector u = zero_vector(C.hom(t[j], t[i]).ngens());
    for (auto& x : u) x = static_cast<long>(rng() % 5) - 2;
    e.at(i, j) = u;
    einv.at(i, j) = Int(-1) * u;
    p = mat_compose(C, e, mat_compose(C, p, canonical(C, einv)));
  }
  return p;
}

}  // namespace corpus
