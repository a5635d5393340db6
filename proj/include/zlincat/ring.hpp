#pragma once

// The ring A(C) = ⊕ hom(a, b) with block-convolution product, block matrix
// rings over Z and prime fields, ring isomorphism checks, and the truncated
// identification of A(C_⊕) with Peirce corners of matrix rings over A(C).

#include "zlincat/completion.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zlincat {

/// Block (row, col) of A(C) holds hom(col, row).
struct PeirceBlock {
  ObjectId row = 0;
  ObjectId col = 0;
  std::size_t offset = 0;
  std::size_t ngens = 0;
};

struct RingPresentation {
  FpAbelianGroup carrier;
  std::vector<std::string> basis_labels;
  std::vector<std::string> object_names;  // empty when there is no Peirce layout
  std::vector<PeirceBlock> blocks;        // index row * objects + col
  std::vector<std::vector<IntVector>> mult;
  std::vector<IntVector> local_units;
  IntVector unit;

  std::size_t ngens() const { return carrier.ngens(); }
  IntVector basis(std::size_t i) const { return unit_vector(ngens(), i); }
  const PeirceBlock& block(ObjectId row, ObjectId col) const { return blocks.at(row * object_names.size() + col); }
};

inline IntVector ring_mult(const RingPresentation& R, const IntVector& x, const IntVector& y) {
  if (x.size() != R.ngens() || y.size() != R.ngens()) throw DimensionError("ring_mult: element length mismatch");
  IntVector out = zero_vector(R.ngens());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (sgn(y[j]) == 0) continue;
      axpy(out, x[i] * y[j], R.mult[i][j]);
    }
  }
  return R.carrier.reduce(std::move(out));
}

inline IntVector ring_add(const RingPresentation& R, const IntVector& x, const IntVector& y) {
  return R.carrier.reduce(x + y);
}

/// The component of x in block (row, col), as an element of hom(col, row).
inline IntVector peirce_component(const RingPresentation& R, const IntVector& x, ObjectId row, ObjectId col) {
  const auto& b = R.block(row, col);
  return IntVector(x.begin() + static_cast<std::ptrdiff_t>(b.offset),
                   x.begin() + static_cast<std::ptrdiff_t>(b.offset + b.ngens));
}

/// Embed f ∈ hom(col, row) into A(C).
inline IntVector peirce_embed(const RingPresentation& R, ObjectId row, ObjectId col, const IntVector& f) {
  const auto& b = R.block(row, col);
  if (f.size() != b.ngens) throw DimensionError("peirce_embed: wrong hom-group length");
  IntVector x = zero_vector(R.ngens());
  std::copy(f.begin(), f.end(), x.begin() + static_cast<std::ptrdiff_t>(b.offset));
  return x;
}

// ---------------------------------------------------------------------------
// Certification

struct RingViolation {
  std::string law;  // "well-defined", "associativity", "unit", "local-units", "block"
  std::string location;
};

struct RingReport {
  std::vector<RingViolation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

using Sparse = std::vector<std::pair<std::size_t, Int>>;

inline Sparse sparse(const IntVector& v) {
  Sparse s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) s.emplace_back(i, v[i]);
  return s;
}

}  // namespace detail

/// Associativity on basis triples, compatibility with the relations, the
/// unit and local-unit laws, and the block law when a Peirce layout exists.
inline RingReport certify_ring(const RingPresentation& R) {
  RingReport rep;
  const std::size_t r = R.ngens();
  auto label = [&](std::size_t i) { return R.basis_labels.at(i); };
  auto fail = [&](std::string law, std::string where) { rep.violations.push_back({std::move(law), std::move(where)}); };

  // relations annihilate on both sides
  const IntMatrix& rel = R.carrier.relations();
  for (std::size_t k = 0; k < rel.rows(); ++k) {
    const IntVector row = rel.row(k);
    for (std::size_t j = 0; j < r; ++j) {
      if (!R.carrier.is_zero_element(ring_mult(R, row, R.basis(j))))
        fail("well-defined", "relation " + std::to_string(k) + " * " + label(j));
      if (!R.carrier.is_zero_element(ring_mult(R, R.basis(j), row)))
        fail("well-defined", label(j) + " * relation " + std::to_string(k));
    }
  }

  std::vector<std::vector<detail::Sparse>> sm(r, std::vector<detail::Sparse>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) sm[i][j] = detail::sparse(R.mult[i][j]);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        if (sm[i][j].empty() && sm[j][k].empty()) continue;
        IntVector lhs = zero_vector(r), rhs = zero_vector(r);
        for (const auto& [t, c] : sm[i][j]) axpy(lhs, c, R.mult[t][k]);
        for (const auto& [t, c] : sm[j][k]) axpy(rhs, c, R.mult[i][t]);
        if (!R.carrier.equal_elements(lhs, rhs))
          fail("associativity", "(" + label(i) + ", " + label(j) + ", " + label(k) + ")");
      }

  for (std::size_t i = 0; i < r; ++i) {
    if (!R.carrier.equal_elements(ring_mult(R, R.unit, R.basis(i)), R.basis(i))) fail("unit", "1 * " + label(i));
    if (!R.carrier.equal_elements(ring_mult(R, R.basis(i), R.unit), R.basis(i))) fail("unit", label(i) + " * 1");
  }

  IntVector sum = zero_vector(r);
  for (std::size_t a = 0; a < R.local_units.size(); ++a) {
    sum = sum + R.local_units[a];
    for (std::size_t b = 0; b < R.local_units.size(); ++b) {
      const IntVector p = ring_mult(R, R.local_units[a], R.local_units[b]);
      const IntVector expect = a == b ? R.local_units[a] : zero_vector(r);
      if (!R.carrier.equal_elements(p, expect))
        fail("local-units", "u" + std::to_string(a) + " * u" + std::to_string(b));
    }
  }
  if (!R.local_units.empty() && !R.carrier.equal_elements(sum, R.unit)) fail("local-units", "sum differs from unit");

  const std::size_t n = R.object_names.size();
  if (n > 0) {
    for (ObjectId a = 0; a < n; ++a)
      for (ObjectId c = 0; c < n; ++c)
        for (ObjectId c2 = 0; c2 < n; ++c2)
          for (ObjectId b = 0; b < n; ++b) {
            const auto& x = R.block(a, c);
            const auto& y = R.block(c2, b);
            for (std::size_t i = 0; i < x.ngens; ++i)
              for (std::size_t j = 0; j < y.ngens; ++j) {
                const IntVector& p = R.mult[x.offset + i][y.offset + j];
                bool ok = true;
                if (c != c2) {
                  ok = R.carrier.is_zero_element(p);
                } else {
                  const auto& z = R.block(a, b);
                  for (std::size_t t = 0; t < r && ok; ++t)
                    if ((t < z.offset || t >= z.offset + z.ngens) && sgn(p[t]) != 0) ok = false;
                }
                if (!ok) fail("block", label(x.offset + i) + " * " + label(y.offset + j));
              }
          }
  }
  return rep;
}

class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_certified(const RingPresentation& R) {
  const RingReport rep = certify_ring(R);
  if (!rep.ok())
    throw RingError("ring certification failed: " + rep.violations.front().law + " at " +
                    rep.violations.front().location);
}

// ---------------------------------------------------------------------------
// Constructions

/// A(C) with blocks in lexicographic (row, col) order.
inline RingPresentation build_ring(const ZCategory& C) {
  const std::size_t n = C.size();
  RingPresentation R;
  R.object_names = C.objects();
  std::vector<FpAbelianGroup> parts;
  std::size_t offset = 0;
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b) {
      const auto& h = C.hom(b, a);
      R.blocks.push_back({a, b, offset, h.ngens()});
      parts.push_back(h);
      for (std::size_t g = 0; g < h.ngens(); ++g)
        R.basis_labels.push_back("[" + C.name(b) + "->" + C.name(a) + "]#" + std::to_string(g));
      offset += h.ngens();
    }
  R.carrier = direct_sum(parts);
  const std::size_t r = R.ngens();
  R.mult.assign(r, std::vector<IntVector>(r, zero_vector(r)));
  // (f g)_{a,b} = Σ_c f_{a,c} ∘ g_{c,b}
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId c = 0; c < n; ++c)
      for (ObjectId b = 0; b < n; ++b) {
        const auto& x = R.block(a, c);
        const auto& y = R.block(c, b);
        for (std::size_t i = 0; i < x.ngens; ++i)
          for (std::size_t j = 0; j < y.ngens; ++j) {
            const IntVector p = C.hom(b, a).reduce(
                C.compose_coeffs(b, c, a, unit_vector(x.ngens, i), unit_vector(y.ngens, j)));
            R.mult[x.offset + i][y.offset + j] = peirce_embed(R, a, b, p);
          }
      }
  R.unit = zero_vector(r);
  for (ObjectId a = 0; a < n; ++a) {
    R.local_units.push_back(peirce_embed(R, a, a, C.identity(a).coeffs));
    R.unit = R.unit + R.local_units.back();
  }
  require_certified(R);
  return R;
}

/// Coefficients of one simple block: the integers or a prime field.
struct MatrixBlock {
  enum class Kind { Integers, PrimeField };
  Kind kind = Kind::Integers;
  Int p = 0;  // prime for PrimeField
  std::size_t size = 1;

  std::string str() const {
    const std::string base = kind == Kind::Integers ? "Z" : "F" + p.get_str();
    return "M" + std::to_string(size) + "(" + base + ")";
  }
  friend bool operator==(const MatrixBlock&, const MatrixBlock&) = default;
};

/// Offsets of each block in the basis of a block matrix ring.
inline std::vector<std::size_t> block_offsets(const std::vector<MatrixBlock>& blocks) {
  std::vector<std::size_t> off;
  std::size_t o = 0;
  for (const auto& b : blocks) {
    off.push_back(o);
    o += b.size * b.size;
  }
  off.push_back(o);
  return off;
}

/// ∏ M_{n_i}(K_i); block i has basis e_rs (row-major), with p e_rs = 0 over F_p.
inline RingPresentation block_matrix_ring(const std::vector<MatrixBlock>& blocks) {
  RingPresentation R;
  const auto off = block_offsets(blocks);
  const std::size_t r = off.back();
  IntMatrix rel(0, r);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    if (b.size == 0) throw DimensionError("block_matrix_ring: block of size zero");
    if (b.kind == MatrixBlock::Kind::PrimeField && b.p < 2) throw DimensionError("block_matrix_ring: bad characteristic");
    for (std::size_t s = 0; s < b.size; ++s)
      for (std::size_t t = 0; t < b.size; ++t) {
        R.basis_labels.push_back("B" + std::to_string(k) + ":e" + std::to_string(s + 1) + std::to_string(t + 1));
        if (b.kind == MatrixBlock::Kind::PrimeField) {
          IntVector row = zero_vector(r);
          row[off[k] + s * b.size + t] = b.p;
          rel.append_row(row);
        }
      }
  }
  R.carrier = FpAbelianGroup(r, std::move(rel));
  R.mult.assign(r, std::vector<IntVector>(r, zero_vector(r)));
  R.unit = zero_vector(r);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::size_t n = blocks[k].size;
    IntVector u = zero_vector(r);
    for (std::size_t s = 0; s < n; ++s) {
      u[off[k] + s * n + s] = 1;
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t v = 0; v < n; ++v) R.mult[off[k] + s * n + t][off[k] + t * n + v] = unit_vector(r, off[k] + s * n + v);
    }
    R.unit = R.unit + u;
    R.local_units.push_back(std::move(u));
  }
  return R;
}

// ---------------------------------------------------------------------------
// Isomorphism checks

struct RingIsoReport {
  bool ok = false;
  std::string failure;  // empty when ok
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
  std::size_t products_checked = 0;
};

/// phi is multiplicative on every basis pair, unital, and bijective.
inline RingIsoReport ring_iso_report(const AbHom& phi, const RingPresentation& A, const RingPresentation& B) {
  if (phi.src.ngens() != A.ngens() || phi.tgt.ngens() != B.ngens() || !phi.src.same_presentation(A.carrier) ||
      !phi.tgt.same_presentation(B.carrier))
    throw DimensionError("ring_iso_check: map does not go between the ring carriers");
  RingIsoReport rep;
  if (!phi.is_well_defined()) {
    rep.failure = "map is not well defined on the carrier";
    return rep;
  }
  std::vector<IntVector> img(A.ngens());
  for (std::size_t i = 0; i < A.ngens(); ++i) img[i] = phi.apply(A.basis(i));
  for (std::size_t i = 0; i < A.ngens(); ++i)
    for (std::size_t j = 0; j < A.ngens(); ++j) {
      const IntVector lhs = phi.apply(A.mult[i][j]);
      const IntVector rhs = ring_mult(B, img[i], img[j]);
      ++rep.products_checked;
      if (!B.carrier.equal_elements(lhs, rhs)) {
        rep.failing_pair = std::make_pair(i, j);
        rep.failure = "product not preserved at (" + A.basis_labels[i] + ", " + A.basis_labels[j] + ")";
        return rep;
      }
    }
  if (!B.carrier.equal_elements(phi.apply(A.unit), B.unit)) {
    rep.failure = "unit not preserved";
    return rep;
  }
  if (!is_injective(phi)) {
    rep.failure = "map is not injective";
    return rep;
  }
  if (!is_surjective(phi)) {
    rep.failure = "map is not surjective";
    return rep;
  }
  rep.ok = true;
  return rep;
}

inline bool ring_iso_check(const AbHom& phi, const RingPresentation& A, const RingPresentation& B) {
  return ring_iso_report(phi, A, B).ok;
}

// ---------------------------------------------------------------------------
// Truncations of the additive completion

/// Tuples of length 1..N in order of length, then lexicographically.
inline std::vector<TupleObject> tuples_up_to(std::size_t objects, std::size_t N) {
  std::vector<TupleObject> out;
  for (std::size_t len = 1; len <= N; ++len) {
    std::vector<ObjectId> t(len, 0);
    for (;;) {
      out.push_back(TupleObject{t});
      std::size_t i = len;
      while (i > 0 && t[i - 1] + 1 == objects) t[--i] = 0;
      if (i == 0) break;
      ++t[i - 1];
    }
  }
  return out;
}

/// Full subcategory of C_⊕ on tuples of length 1..N, as a ZCategory.
inline ZCategory additive_truncation(const ZCategory& C, std::size_t N) {
  if (N == 0) throw DimensionError("additive_truncation: level must be at least 1");
  const auto tuples = tuples_up_to(C.size(), N);
  const std::size_t n = tuples.size();
  std::vector<std::string> names;
  std::vector<FpAbelianGroup> homs;
  std::vector<TupleHomLayout> layouts;
  for (const auto& t : tuples) names.push_back(tuple_name(C, t));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      layouts.emplace_back(C, tuples[a], tuples[b]);
      homs.push_back(layouts.back().group());
    }
  CategoryData d = CategoryData::with_homs(names, homs);
  for (std::size_t a = 0; a < n; ++a) d.identities[a] = layouts[a * n + a].flatten(mat_identity(C, tuples[a]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto& lf = layouts[a * n + b];
        const auto& lg = layouts[b * n + c];
        const auto& lh = layouts[a * n + c];
        auto& table = d.comp[d.comp_index(a, b, c)];
        for (std::size_t g = 0; g < lg.ngens(); ++g) {
          const MatMorphism G = lg.basis_element(g);
          for (std::size_t f = 0; f < lf.ngens(); ++f)
            table[g * lf.ngens() + f] = lh.flatten(mat_compose(C, G, lf.basis_element(f)));
        }
      }
  d.metadata["construction"] = "additive truncation, tuple length <= " + std::to_string(N);
  return ZCategory::create(std::move(d));
}

struct TruncationReport {
  std::size_t level = 0;
  std::size_t tuple_objects = 0;
  GroupInvariants left;   // A(D)
  GroupInvariants right;  // ⊕ corners of matrix rings over A(C)
  bool additive = false;
  bool injective = false;
  bool onto_corners = false;
  bool multiplicative = false;
  std::string failure;
  bool ok() const { return additive && injective && onto_corners && multiplicative; }
};

namespace detail {

// ⊕ over ordered pairs (Y, X) of tuples of |Y| x |X| matrices over A(C)
struct MatrixAmbient {
  const RingPresentation* A = nullptr;
  std::vector<TupleObject> tuples;
  std::vector<std::size_t> offset;  // per (Y, X) pair, index Y * n + X
  std::size_t total = 0;
  FpAbelianGroup group;

  MatrixAmbient(const RingPresentation& ring, std::vector<TupleObject> ts) : A(&ring), tuples(std::move(ts)) {
    const std::size_t n = tuples.size();
    std::vector<FpAbelianGroup> parts;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x) {
        offset.push_back(total);
        const std::size_t cells = tuples[y].size() * tuples[x].size();
        total += cells * A->ngens();
        for (std::size_t k = 0; k < cells; ++k) parts.push_back(A->carrier);
      }
    group = direct_sum(parts);
  }

  std::size_t cell(std::size_t y, std::size_t x, std::size_t j, std::size_t i) const {
    return offset[y * tuples.size() + x] + (j * tuples[x].size() + i) * A->ngens();
  }
  IntVector get(const IntVector& v, std::size_t at) const {
    return IntVector(v.begin() + static_cast<std::ptrdiff_t>(at), v.begin() + static_cast<std::ptrdiff_t>(at + A->ngens()));
  }
  void put(IntVector& v, std::size_t at, const IntVector& e) const {
    for (std::size_t t = 0; t < e.size(); ++t) v[at + t] += e[t];
  }

  IntVector multiply(const IntVector& u, const IntVector& w) const {
    const std::size_t n = tuples.size();
    IntVector out = zero_vector(total);
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t j = 0; j < tuples[z].size(); ++j)
            for (std::size_t l = 0; l < tuples[y].size(); ++l) {
              const IntVector a = get(u, cell(z, y, j, l));
              if (is_zero(a)) continue;
              for (std::size_t i = 0; i < tuples[x].size(); ++i) {
                const IntVector b = get(w, cell(y, x, l, i));
                if (is_zero(b)) continue;
                put(out, cell(z, x, j, i), ring_mult(*A, a, b));
              }
            }
    return group.reduce(std::move(out));
  }

  // entrywise id_{Y_j} · m · id_{X_i}
  IntVector corner(const IntVector& v) const {
    const std::size_t n = tuples.size();
    IntVector out = zero_vector(total);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t j = 0; j < tuples[y].size(); ++j)
          for (std::size_t i = 0; i < tuples[x].size(); ++i) {
            const std::size_t at = cell(y, x, j, i);
            const IntVector e = ring_mult(*A, A->local_units[tuples[y][j]],
                                          ring_mult(*A, get(v, at), A->local_units[tuples[x][i]]));
            put(out, at, e);
          }
    return out;
  }
};

}  // namespace detail

/// Builds A(D) for the truncation D of C_⊕ at tuple length N and checks the
/// identification with the Peirce corners id_Y M(A(C)) id_X.
inline std::pair<RingPresentation, TruncationReport> truncated_additive_ring(const ZCategory& C, std::size_t N) {
  const ZCategory D = additive_truncation(C, N);
  const RingPresentation A = build_ring(C);
  RingPresentation AD = build_ring(D);
  const auto tuples = tuples_up_to(C.size(), N);
  const std::size_t n = tuples.size();
  const detail::MatrixAmbient amb(A, tuples);

  TruncationReport rep;
  rep.level = N;
  rep.tuple_objects = n;
  rep.left = AD.carrier.invariants();

  // φ: block (Y, X) of A(D) is hom_D(X, Y) = ⊕_{j,i} hom(X_i, Y_j) in (j, i) order
  std::vector<IntVector> cols(AD.ngens());
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      const auto& blk = AD.block(y, x);
      std::size_t g = blk.offset;
      for (std::size_t j = 0; j < tuples[y].size(); ++j)
        for (std::size_t i = 0; i < tuples[x].size(); ++i) {
          const std::size_t k = C.hom(tuples[x][i], tuples[y][j]).ngens();
          for (std::size_t t = 0; t < k; ++t, ++g) {
            IntVector v = zero_vector(amb.total);
            amb.put(v, amb.cell(y, x, j, i), peirce_embed(A, tuples[y][j], tuples[x][i], unit_vector(k, t)));
            cols[g] = std::move(v);
          }
        }
    }
  const AbHom phi(AD.carrier, amb.group, IntMatrix::from_columns(cols, amb.total));

  rep.additive = phi.is_well_defined();
  if (!rep.additive) {
    rep.failure = "identification is not well defined";
    return {std::move(AD), rep};
  }
  rep.injective = is_injective(phi);
  std::vector<IntVector> corner_gens;
  for (std::size_t t = 0; t < amb.total; ++t) corner_gens.push_back(amb.corner(unit_vector(amb.total, t)));
  rep.right = invariants(subgroup(amb.group, corner_gens).group);
  rep.onto_corners = same_subgroup(amb.group, cols, corner_gens);
  if (!rep.injective) rep.failure = "identification is not injective";
  else if (!rep.onto_corners) rep.failure = "image differs from the corner subring";

  rep.multiplicative = true;
  for (std::size_t i = 0; i < AD.ngens() && rep.multiplicative; ++i)
    for (std::size_t j = 0; j < AD.ngens(); ++j) {
      const IntVector lhs = phi.apply(AD.mult[i][j]);
      const IntVector rhs = amb.multiply(cols[i], cols[j]);
      if (!amb.group.equal_elements(lhs, rhs)) {
        rep.multiplicative = false;
        if (rep.failure.empty()) rep.failure = "product differs at (" + AD.basis_labels[i] + ", " + AD.basis_labels[j] + ")";
        break;
      }
    }
  return {std::move(AD), rep};
}

}  // namespace zlincat
