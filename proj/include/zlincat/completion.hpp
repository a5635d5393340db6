#pragma once

// The free additive completion (tuples of objects, matrices of morphisms) and
// hom-groups of the idempotent completion.

#include "zlincat/category.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zlincat {

/// Object of the additive completion; the empty tuple is the zero object.
struct TupleObject {
  std::vector<ObjectId> components;

  std::size_t size() const { return components.size(); }
  bool empty() const { return components.empty(); }
  ObjectId operator[](std::size_t i) const { return components[i]; }

  static TupleObject single(ObjectId a) { return TupleObject{{a}}; }
  friend TupleObject concat(const TupleObject& x, const TupleObject& y) {
    TupleObject t = x;
    t.components.insert(t.components.end(), y.components.begin(), y.components.end());
    return t;
  }
  friend bool operator==(const TupleObject&, const TupleObject&) = default;
  friend auto operator<=>(const TupleObject&, const TupleObject&) = default;
};

inline std::string tuple_name(const ZCategory& C, const TupleObject& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + C.name(t[i]);
  return s + ")";
}

/// m x k matrix of morphisms; entry (j, i) lies in hom(src_i, tgt_j).
struct MatMorphism {
  TupleObject src;
  TupleObject tgt;
  std::vector<IntVector> entries;  // row-major, index j * src.size() + i

  const IntVector& at(std::size_t j, std::size_t i) const { return entries[j * src.size() + i]; }
  IntVector& at(std::size_t j, std::size_t i) { return entries[j * src.size() + i]; }

  friend bool operator==(const MatMorphism&, const MatMorphism&) = default;
};

inline MatMorphism mat_zero(const ZCategory& C, const TupleObject& src, const TupleObject& tgt) {
  MatMorphism m{src, tgt, {}};
  m.entries.reserve(src.size() * tgt.size());
  for (std::size_t j = 0; j < tgt.size(); ++j)
    for (std::size_t i = 0; i < src.size(); ++i) m.entries.push_back(zero_vector(C.hom(src[i], tgt[j]).ngens()));
  return m;
}

inline MatMorphism mat_identity(const ZCategory& C, const TupleObject& t) {
  MatMorphism m = mat_zero(C, t, t);
  for (std::size_t i = 0; i < t.size(); ++i) m.at(i, i) = C.identity(t[i]).coeffs;
  return m;
}

inline MatMorphism from_morphism(const Morphism& f) {
  return MatMorphism{TupleObject::single(f.src), TupleObject::single(f.tgt), {f.coeffs}};
}

/// Reduce every entry to canonical form and check the entry count.
inline MatMorphism canonical(const ZCategory& C, MatMorphism m) {
  if (m.entries.size() != m.src.size() * m.tgt.size())
    throw DimensionError("MatMorphism: entry count does not match tuple sizes");
  for (std::size_t j = 0; j < m.tgt.size(); ++j)
    for (std::size_t i = 0; i < m.src.size(); ++i) m.at(j, i) = C.hom(m.src[i], m.tgt[j]).reduce(m.at(j, i));
  return m;
}

inline bool mat_equal(const ZCategory& C, const MatMorphism& a, const MatMorphism& b) {
  if (a.src != b.src || a.tgt != b.tgt) return false;
  for (std::size_t j = 0; j < a.tgt.size(); ++j)
    for (std::size_t i = 0; i < a.src.size(); ++i)
      if (!C.hom(a.src[i], a.tgt[j]).equal_elements(a.at(j, i), b.at(j, i))) return false;
  return true;
}

inline bool mat_is_zero(const ZCategory& C, const MatMorphism& a) {
  for (std::size_t j = 0; j < a.tgt.size(); ++j)
    for (std::size_t i = 0; i < a.src.size(); ++i)
      if (!C.hom(a.src[i], a.tgt[j]).is_zero_element(a.at(j, i))) return false;
  return true;
}

/// G∘F by row-by-column multiplication.
inline MatMorphism mat_compose(const ZCategory& C, const MatMorphism& G, const MatMorphism& F) {
  if (F.tgt != G.src)
    throw CompositionError("mat_compose: " + tuple_name(C, F.tgt) + " differs from " + tuple_name(C, G.src));
  MatMorphism out = mat_zero(C, F.src, G.tgt);
  for (std::size_t j = 0; j < G.tgt.size(); ++j)
    for (std::size_t i = 0; i < F.src.size(); ++i) {
      IntVector& e = out.at(j, i);
      for (std::size_t l = 0; l < F.tgt.size(); ++l)
        e = e + C.compose_coeffs(F.src[i], F.tgt[l], G.tgt[j], G.at(j, l), F.at(l, i));
      e = C.hom(F.src[i], G.tgt[j]).reduce(std::move(e));
    }
  return out;
}

inline MatMorphism mat_add(const ZCategory& C, const MatMorphism& a, const MatMorphism& b) {
  if (a.src != b.src || a.tgt != b.tgt) throw CompositionError("mat_add: shapes differ");
  MatMorphism out = a;
  for (std::size_t k = 0; k < out.entries.size(); ++k) out.entries[k] = out.entries[k] + b.entries[k];
  return canonical(C, std::move(out));
}

inline MatMorphism mat_scale(const ZCategory& C, const Int& s, MatMorphism a) {
  for (auto& e : a.entries) e = s * e;
  return canonical(C, std::move(a));
}

inline MatMorphism mat_sub(const ZCategory& C, const MatMorphism& a, const MatMorphism& b) {
  return mat_add(C, a, mat_scale(C, Int(-1), b));
}

/// Block diagonal direct sum a ⊕ b.
inline MatMorphism mat_direct_sum(const ZCategory& C, const MatMorphism& a, const MatMorphism& b) {
  MatMorphism out = mat_zero(C, concat(a.src, b.src), concat(a.tgt, b.tgt));
  for (std::size_t j = 0; j < a.tgt.size(); ++j)
    for (std::size_t i = 0; i < a.src.size(); ++i) out.at(j, i) = a.at(j, i);
  for (std::size_t j = 0; j < b.tgt.size(); ++j)
    for (std::size_t i = 0; i < b.src.size(); ++i) out.at(a.tgt.size() + j, a.src.size() + i) = b.at(j, i);
  return out;
}

/// [a | b] : a.src ⊕ b.src -> common target.
inline MatMorphism mat_hconcat(const ZCategory& C, const MatMorphism& a, const MatMorphism& b) {
  if (a.tgt != b.tgt) throw CompositionError("mat_hconcat: targets differ");
  MatMorphism out = mat_zero(C, concat(a.src, b.src), a.tgt);
  for (std::size_t j = 0; j < a.tgt.size(); ++j) {
    for (std::size_t i = 0; i < a.src.size(); ++i) out.at(j, i) = a.at(j, i);
    for (std::size_t i = 0; i < b.src.size(); ++i) out.at(j, a.src.size() + i) = b.at(j, i);
  }
  return out;
}

/// Generator bookkeeping for hom(a⃗, c⃗) = ⊕_{j,i} hom(a_i, c_j), entries in
/// (j, i)-lexicographic order.
class TupleHomLayout {
 public:
  TupleHomLayout(const ZCategory& C, TupleObject src, TupleObject tgt)
      : C_(&C), src_(std::move(src)), tgt_(std::move(tgt)) {
    std::vector<FpAbelianGroup> parts;
    for (std::size_t j = 0; j < tgt_.size(); ++j)
      for (std::size_t i = 0; i < src_.size(); ++i) {
        offsets_.push_back(total_);
        const auto& h = C.hom(src_[i], tgt_[j]);
        total_ += h.ngens();
        parts.push_back(h);
      }
    group_ = direct_sum(parts);
  }

  const FpAbelianGroup& group() const { return group_; }
  std::size_t ngens() const { return total_; }
  const TupleObject& src() const { return src_; }
  const TupleObject& tgt() const { return tgt_; }

  IntVector flatten(const MatMorphism& m) const {
    if (m.src != src_ || m.tgt != tgt_) throw DimensionError("TupleHomLayout::flatten: wrong tuple shape");
    IntVector v;
    v.reserve(total_);
    for (const auto& e : m.entries) v.insert(v.end(), e.begin(), e.end());
    return v;
  }

  MatMorphism unflatten(const IntVector& v) const {
    if (v.size() != total_) throw DimensionError("TupleHomLayout::unflatten: wrong length");
    MatMorphism m{src_, tgt_, {}};
    std::size_t k = 0;
    for (std::size_t j = 0; j < tgt_.size(); ++j)
      for (std::size_t i = 0; i < src_.size(); ++i, ++k) {
        const auto n = C_->hom(src_[i], tgt_[j]).ngens();
        const auto first = v.begin() + static_cast<std::ptrdiff_t>(offsets_[k]);
        m.entries.emplace_back(first, first + static_cast<std::ptrdiff_t>(n));
      }
    return canonical(*C_, std::move(m));
  }

  MatMorphism basis_element(std::size_t g) const { return unflatten(unit_vector(total_, g)); }

 private:
  const ZCategory* C_;
  TupleObject src_, tgt_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  FpAbelianGroup group_;
};

inline FpAbelianGroup hom_tuple(const ZCategory& C, const TupleObject& a, const TupleObject& c) {
  return TupleHomLayout(C, a, c).group();
}

/// The AbHom hom(a⃗, b⃗) -> hom(c⃗, d⃗) of a Z-linear map given on matrices.
inline AbHom linear_map(const TupleHomLayout& from, const TupleHomLayout& to,
                        const std::function<MatMorphism(const MatMorphism&)>& fn) {
  std::vector<IntVector> cols;
  cols.reserve(from.ngens());
  for (std::size_t g = 0; g < from.ngens(); ++g) cols.push_back(to.flatten(fn(from.basis_element(g))));
  return AbHom(from.group(), to.group(), IntMatrix::from_columns(cols, to.ngens()));
}

/// h ↦ F∘h from hom(d⃗, F.src) to hom(d⃗, F.tgt).
inline AbHom postcompose_map(const ZCategory& C, const MatMorphism& F, const TupleObject& d) {
  return linear_map(TupleHomLayout(C, d, F.src), TupleHomLayout(C, d, F.tgt),
                    [&](const MatMorphism& h) { return mat_compose(C, F, h); });
}

/// h ↦ h∘u from hom(u.tgt, y⃗) to hom(u.src, y⃗).
inline AbHom precompose_map(const ZCategory& C, const MatMorphism& u, const TupleObject& y) {
  return linear_map(TupleHomLayout(C, u.tgt, y), TupleHomLayout(C, u.src, y),
                    [&](const MatMorphism& h) { return mat_compose(C, h, u); });
}

// ---------------------------------------------------------------------------
// Idempotent completion

struct IdemObject {
  TupleObject carrier;
  MatMorphism p;

  friend bool operator==(const IdemObject&, const IdemObject&) = default;
};

class IdempotencyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_idempotent(const ZCategory& C, const MatMorphism& p) {
  return p.src == p.tgt && mat_equal(C, mat_compose(C, p, p), p);
}

inline IdemObject make_idem(const ZCategory& C, MatMorphism p) {
  p = canonical(C, std::move(p));
  if (!is_idempotent(C, p)) throw IdempotencyError("IdemObject: p∘p differs from p");
  TupleObject carrier = p.src;
  return IdemObject{std::move(carrier), std::move(p)};
}

inline IdemObject idem_identity(const ZCategory& C, const TupleObject& t) {
  return IdemObject{t, mat_identity(C, t)};
}

inline IdemObject idem_direct_sum(const ZCategory& C, const IdemObject& P, const IdemObject& Q) {
  return IdemObject{concat(P.carrier, Q.carrier), mat_direct_sum(C, P.p, Q.p)};
}

/// hom((a⃗,p), (c⃗,q)) = { w : q∘w∘p = w } as a subgroup of hom(a⃗, c⃗).
inline Kernel idem_hom(const ZCategory& C, const IdemObject& P, const IdemObject& Q) {
  if (!is_idempotent(C, P.p) || !is_idempotent(C, Q.p)) throw IdempotencyError("idem_hom: input is not idempotent");
  const TupleHomLayout layout(C, P.carrier, Q.carrier);
  const AbHom defect = linear_map(layout, layout, [&](const MatMorphism& w) {
    return mat_sub(C, w, mat_compose(C, Q.p, mat_compose(C, w, P.p)));
  });
  return kernel(defect);
}

// ---------------------------------------------------------------------------
// Linear systems in hom-groups of the additive completion

/// One linear constraint L(x) = target, in the hom-group described by `tgt`.
struct LinearConstraint {
  TupleHomLayout tgt;
  std::function<MatMorphism(const MatMorphism&)> map;
  MatMorphism target;
};

/// Some x in hom(unknown.src, unknown.tgt) satisfying every constraint
/// modulo the relations of the constraint's hom-group.
inline std::optional<MatMorphism> solve_linear(const TupleHomLayout& unknown,
                                               const std::vector<LinearConstraint>& constraints) {
  std::size_t rows = 0, rel_cols = 0;
  for (const auto& c : constraints) {
    rows += c.tgt.ngens();
    rel_cols += c.tgt.group().relations().rows();
  }
  const std::size_t n = unknown.ngens();
  IntMatrix A(rows, n + rel_cols);
  IntVector b = zero_vector(rows);
  std::size_t r0 = 0, c0 = n;
  for (const auto& c : constraints) {
    const AbHom L = linear_map(unknown, c.tgt, c.map);
    for (std::size_t r = 0; r < c.tgt.ngens(); ++r)
      for (std::size_t j = 0; j < n; ++j) A(r0 + r, j) = L.matrix(r, j);
    const IntMatrix& rel = c.tgt.group().relations();
    for (std::size_t k = 0; k < rel.rows(); ++k)
      for (std::size_t r = 0; r < c.tgt.ngens(); ++r) A(r0 + r, c0 + k) = rel(k, r);
    const IntVector t = c.tgt.flatten(c.target);
    for (std::size_t r = 0; r < t.size(); ++r) b[r0 + r] = t[r];
    r0 += c.tgt.ngens();
    c0 += rel.rows();
  }
  auto sol = solve_z(A, b);
  if (!sol) return std::nullopt;
  sol->resize(n);
  return unknown.unflatten(*sol);
}

// ---------------------------------------------------------------------------
// Splitting idempotents

struct Splitting {
  TupleObject through;
  MatMorphism retraction;  // r : carrier -> through
  MatMorphism section;     // s : through -> carrier
};

namespace detail {

inline MatMorphism inclusion_of(const ZCategory& C, const TupleObject& carrier, const std::vector<std::size_t>& idx) {
  TupleObject sub;
  for (auto i : idx) sub.components.push_back(carrier[i]);
  MatMorphism m = mat_zero(C, sub, carrier);
  for (std::size_t k = 0; k < idx.size(); ++k) m.at(idx[k], k) = C.identity(carrier[idx[k]]).coeffs;
  return m;
}

// r with r∘s = id and s∘r = p, for fixed s
inline std::optional<MatMorphism> retraction_for(const ZCategory& C, const IdemObject& P, const MatMorphism& s) {
  const TupleObject& t = s.src;
  const TupleHomLayout unknown(C, P.carrier, t);
  std::vector<LinearConstraint> cons;
  cons.push_back({TupleHomLayout(C, t, t), [&](const MatMorphism& r) { return mat_compose(C, r, s); },
                  mat_identity(C, t)});
  cons.push_back({TupleHomLayout(C, P.carrier, P.carrier), [&](const MatMorphism& r) { return mat_compose(C, s, r); },
                  P.p});
  return solve_linear(unknown, cons);
}

}  // namespace detail

/// Bounded search for a splitting of P through a sub-tuple of its carrier.
/// Candidate sections are p∘E∘ι_T where ι_T includes the sub-tuple T and E
/// is the identity or a single elementary column operation on the carrier.
/// Absence means "not split within the search bound", not "does not split".
inline std::optional<Splitting> split_check(const ZCategory& C, const IdemObject& P, std::size_t max_carrier = 12) {
  if (!is_idempotent(C, P.p)) throw IdempotencyError("split_check: input is not idempotent");
  const std::size_t k = P.carrier.size();
  if (k > max_carrier) return std::nullopt;

  std::vector<MatMorphism> column_ops{mat_identity(C, P.carrier)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && P.carrier[i] == P.carrier[j])
        for (int sign : {1, -1}) {
          MatMorphism e = mat_identity(C, P.carrier);
          e.at(i, j) = C.identity(P.carrier[i]).coeffs;
          if (sign < 0) e.at(i, j) = C.hom(P.carrier[i], P.carrier[i]).reduce(Int(-1) * e.at(i, j));
          column_ops.push_back(std::move(e));
        }

  // subsets in order of size, then lexicographically
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 0; size <= k; ++size) {
    std::vector<std::size_t> idx(size);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
      if (pos == size) {
        subsets.push_back(idx);
        return;
      }
      for (std::size_t i = start; i < k; ++i) {
        idx[pos] = i;
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }
  for (const auto& idx : subsets)
    for (const auto& E : column_ops) {
      const MatMorphism iota = detail::inclusion_of(C, P.carrier, idx);
      const MatMorphism s = mat_compose(C, P.p, mat_compose(C, E, iota));
      if (auto r = detail::retraction_for(C, P, s)) return Splitting{s.src, std::move(*r), s};
    }
  return std::nullopt;
}

}  // namespace zlincat
