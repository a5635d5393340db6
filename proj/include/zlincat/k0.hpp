#pragma once

// K_0 through verified isomorphisms A(C) ≅ ∏ M_{n_i}(K_i), K_i = Z or F_p.
// Classes of projectives are block-rank vectors.  Negative K-groups are
// never computed; reports only cite the vanishing theorem with an evidence tier.

#include "zlincat/builders.hpp"
#include "zlincat/resolutions.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zlincat {

struct SemisimpleWitness {
  std::vector<MatrixBlock> blocks;
  std::vector<IntVector> images;  // image of each basis element of A(C)
};

class WitnessError : public std::runtime_error {
 public:
  WitnessError(std::string what, std::optional<std::pair<std::size_t, std::size_t>> pair)
      : std::runtime_error(std::move(what)), failing_pair(std::move(pair)) {}
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
};

inline AbHom witness_map(const RingPresentation& A, const RingPresentation& B, const SemisimpleWitness& w) {
  if (w.images.size() != A.ngens()) throw DimensionError("witness: one image per basis element required");
  for (const auto& v : w.images)
    if (v.size() != B.ngens()) throw DimensionError("witness: image has the wrong length");
  return AbHom(A.carrier, B.carrier, IntMatrix::from_columns(w.images, B.ngens()));
}

inline RingIsoReport verify_witness_report(const RingPresentation& A, const SemisimpleWitness& w) {
  const RingPresentation B = block_matrix_ring(w.blocks);
  return ring_iso_report(witness_map(A, B, w), A, B);
}

inline bool verify_witness(const RingPresentation& A, const SemisimpleWitness& w) {
  try {
    return verify_witness_report(A, w).ok;
  } catch (const DimensionError&) {
    return false;
  }
}

/// A witness that passed verification, together with the target ring.
class VerifiedWitness {
 public:
  const SemisimpleWitness& witness() const { return w_; }
  const RingPresentation& source() const { return A_; }
  const RingPresentation& target() const { return B_; }
  const AbHom& map() const { return phi_; }
  const RingIsoReport& report() const { return report_; }

  friend VerifiedWitness certify_witness(const RingPresentation& A, SemisimpleWitness w);

 private:
  VerifiedWitness(SemisimpleWitness w, RingPresentation A, RingPresentation B, AbHom phi, RingIsoReport rep)
      : w_(std::move(w)), A_(std::move(A)), B_(std::move(B)), phi_(std::move(phi)), report_(std::move(rep)) {}
  SemisimpleWitness w_;
  RingPresentation A_, B_;
  AbHom phi_;
  RingIsoReport report_;
};

/// Throws WitnessError naming the failing basis pair when verification fails.
inline VerifiedWitness certify_witness(const RingPresentation& A, SemisimpleWitness w) {
  RingPresentation B = block_matrix_ring(w.blocks);
  AbHom phi = witness_map(A, B, w);
  RingIsoReport rep = ring_iso_report(phi, A, B);
  if (!rep.ok) throw WitnessError("witness rejected: " + rep.failure, rep.failing_pair);
  return VerifiedWitness(std::move(w), A, std::move(B), std::move(phi), std::move(rep));
}

// ---------------------------------------------------------------------------
// Canonical witnesses for categories whose nonzero homs are all Z or all Z/p

namespace detail {

/// x / y in Z (exact) or F_p; nullopt when not possible.
inline std::optional<Int> divide(const Int& x, const Int& y, const Int& p) {
  if (p == 0) {
    if (y == 0 || x % y != 0) return std::nullopt;
    return Int(x / y);
  }
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), Int(y).get_mpz_t(), p.get_mpz_t()) == 0) return std::nullopt;
  Int q = (x * inv) % p;
  if (q < 0) q += p;
  return q;
}

/// 0 for a nonzero free cyclic hom, p for Z/p, nullopt otherwise (trivial homs give -1).
inline std::optional<Int> cyclic_kind(const FpAbelianGroup& h) {
  if (h.is_trivial()) return Int(-1);
  if (h.ngens() != 1) return std::nullopt;
  const GroupInvariants inv = h.invariants();
  if (inv.rank == 1 && inv.divisors.empty()) return Int(0);
  if (inv.rank == 0 && inv.divisors.size() == 1 && is_prime(inv.divisors[0])) return inv.divisors[0];
  return std::nullopt;
}

}  // namespace detail

/// Blocks = connected components of nonzero homs; the generator of
/// hom(o_s, o_r) goes to a scalar multiple of e_rs fixed by the structure
/// constants.  nullopt when C does not have this shape or the candidate
/// fails verification.
inline std::optional<SemisimpleWitness> canonical_witness(const ZCategory& C, const RingPresentation& A) {
  const std::size_t n = C.size();
  std::vector<std::optional<Int>> kind(n * n);
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b) {
      kind[a * n + b] = detail::cyclic_kind(C.hom(a, b));
      if (!kind[a * n + b]) return std::nullopt;
    }
  auto nonzero = [&](ObjectId a, ObjectId b) { return *kind[a * n + b] >= 0; };
  std::vector<int> comp(n, -1);
  std::vector<std::vector<ObjectId>> members;
  for (ObjectId a = 0; a < n; ++a) {
    if (comp[a] >= 0 || !nonzero(a, a)) continue;
    const int id = static_cast<int>(members.size());
    members.push_back({});
    std::vector<ObjectId> stack{a};
    comp[a] = id;
    while (!stack.empty()) {
      const ObjectId x = stack.back();
      stack.pop_back();
      members[id].push_back(x);
      for (ObjectId y = 0; y < n; ++y)
        if (comp[y] < 0 && (nonzero(x, y) || nonzero(y, x))) {
          comp[y] = id;
          stack.push_back(y);
        }
    }
    std::sort(members[id].begin(), members[id].end());
  }

  SemisimpleWitness w;
  std::vector<std::vector<Int>> coeff;  // per component, c_rs row-major
  for (const auto& objs : members) {
    const std::size_t m = objs.size();
    const Int p = *kind[objs[0] * n + objs[0]];
    for (ObjectId r : objs)
      for (ObjectId s : objs)
        if (!nonzero(r, s) || *kind[r * n + s] != p) return std::nullopt;
    // λ_rst: g_rs ∘ g_st = λ_rst g_rt, where g_rs generates hom(o_s, o_r)
    auto lambda = [&](std::size_t r, std::size_t s, std::size_t t) {
      const auto& d = C.data();
      return d.comp[d.comp_index(objs[t], objs[s], objs[r])][0][0];
    };
    auto reduce = [&](Int x) {
      if (p != 0) {
        x %= p;
        if (x < 0) x += p;
      }
      return x;
    };
    std::vector<Int> c(m * m);
    c[0] = reduce(lambda(0, 0, 0));
    for (std::size_t r = 1; r < m; ++r) c[r * m] = 1;
    for (std::size_t s = 1; s < m; ++s) c[s] = reduce(lambda(0, s, 0) * lambda(0, 0, 0));
    for (std::size_t r = 1; r < m; ++r)
      for (std::size_t s = 1; s < m; ++s) {
        auto q = detail::divide(c[s], lambda(r, 0, s), p);
        if (!q) return std::nullopt;
        c[r * m + s] = reduce(*q);
      }
    w.blocks.push_back(p == 0 ? MatrixBlock{MatrixBlock::Kind::Integers, 0, m}
                              : MatrixBlock{MatrixBlock::Kind::PrimeField, p, m});
    coeff.push_back(std::move(c));
  }

  const auto off = block_offsets(w.blocks);
  w.images.assign(A.ngens(), zero_vector(off.back()));
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& objs = members[k];
    const std::size_t m = objs.size();
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t s = 0; s < m; ++s)
        w.images[A.block(objs[r], objs[s]).offset][off[k] + r * m + s] = coeff[k][r * m + s];
  }
  if (!verify_witness(A, w)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Classes

using K0Class = std::vector<Int>;

namespace detail {

inline std::size_t rank_mod_p(IntMatrix m, const Int& p) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m(i, j) %= p;
      if (m(i, j) < 0) m(i, j) += p;
    }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, rank);
    Int inv;
    mpz_invert(inv.get_mpz_t(), m(rank, col).get_mpz_t(), p.get_mpz_t());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || m(i, col) == 0) continue;
      const Int f = (m(i, col) * inv) % p;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        m(i, j) = (m(i, j) - f * m(rank, j)) % p;
        if (m(i, j) < 0) m(i, j) += p;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Class of an idempotent m x m matrix E over A(C) (row-major entries).
inline K0Class class_of(const VerifiedWitness& vw, std::size_t m, const std::vector<IntVector>& E) {
  const RingPresentation& A = vw.source();
  if (E.size() != m * m) throw DimensionError("class_of: matrix shape mismatch");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      IntVector sq = zero_vector(A.ngens());
      for (std::size_t t = 0; t < m; ++t) sq = sq + ring_mult(A, E[i * m + t], E[t * m + j]);
      if (!A.carrier.equal_elements(sq, E[i * m + j])) throw IdempotencyError("class_of: matrix is not idempotent");
    }
  std::vector<IntVector> img;
  for (const auto& e : E) img.push_back(vw.map().apply(e));
  const auto& blocks = vw.witness().blocks;
  const auto off = block_offsets(blocks);
  K0Class cls;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::size_t n = blocks[k].size;
    IntMatrix M(m * n, m * n);
    Int trace = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) M(i * n + r, j * n + s) = img[i * m + j][off[k] + r * n + s];
    for (std::size_t d = 0; d < m * n; ++d) trace += M(d, d);
    if (blocks[k].kind == MatrixBlock::Kind::Integers) {
      const std::size_t rank = snf(M).rank;
      if (Int(rank) != trace) throw std::logic_error("class_of: rank and trace of an idempotent disagree");
      cls.push_back(Int(rank));
    } else {
      const Int& p = blocks[k].p;
      const std::size_t rank = detail::rank_mod_p(M, p);
      Int t = trace % p;
      if (t < 0) t += p;
      if (Int(rank) % p != t) throw std::logic_error("class_of: rank and trace of an idempotent disagree");
      cls.push_back(Int(rank));
    }
  }
  return cls;
}

/// The idempotent matrix over A(C) attached to (x, p) through S.
inline std::vector<IntVector> ring_idempotent(const RingPresentation& A, const IdemObject& P) {
  std::vector<IntVector> E;
  for (std::size_t j = 0; j < P.carrier.size(); ++j)
    for (std::size_t i = 0; i < P.carrier.size(); ++i) E.push_back(peirce_embed(A, P.carrier[j], P.carrier[i], P.p.at(j, i)));
  return E;
}

inline K0Class class_of(const ZCategory& C, const VerifiedWitness& vw, const IdemObject& P) {
  if (!is_idempotent(C, P.p)) throw IdempotencyError("class_of: p∘p differs from p");
  return class_of(vw, P.carrier.size(), ring_idempotent(vw.source(), P));
}

namespace detail {

/// Some x in A with phi(x) = y.
inline IntVector preimage(const AbHom& phi, const IntVector& y) {
  IntMatrix sys = phi.matrix;
  const IntMatrix& rel = phi.tgt.relations();
  if (rel.rows() > 0) sys = hstack(sys, rel.transpose());
  auto sol = solve_z(sys, y);
  if (!sol) throw std::logic_error("preimage: element not in the image");
  sol->resize(phi.src.ngens());
  return phi.src.reduce(*sol);
}

inline std::size_t log_p(Int order, const Int& p) {
  std::size_t e = 0;
  while (order > 1) {
    if (order % p != 0) throw std::logic_error("log_p: order is not a power of p");
    order /= p;
    ++e;
  }
  return e;
}

}  // namespace detail

/// The class read on the category side: with ε_k the idempotent of
/// End(all objects) going to the k-th block unit, hom_Idem((T, ε_k), P) has
/// rank (or length over F_p) n_k times the k-th coordinate.
inline K0Class category_class(const ZCategory& C, const VerifiedWitness& vw, const IdemObject& P) {
  const RingPresentation& A = vw.source();
  TupleObject all;
  for (ObjectId a = 0; a < C.size(); ++a) all.components.push_back(a);
  const auto& blocks = vw.witness().blocks;
  K0Class cls;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const IntVector eps = detail::preimage(vw.map(), vw.target().local_units[k]);
    MatMorphism e = mat_zero(C, all, all);
    for (ObjectId a = 0; a < C.size(); ++a)
      for (ObjectId b = 0; b < C.size(); ++b) e.at(a, b) = peirce_component(A, eps, a, b);
    const Kernel H = idem_hom(C, make_idem(C, e), P);
    const GroupInvariants inv = H.group.invariants();
    const std::size_t n = blocks[k].size;
    std::size_t length = 0;
    if (blocks[k].kind == MatrixBlock::Kind::Integers) {
      if (!inv.divisors.empty()) throw std::logic_error("category_class: torsion in an integral block");
      length = inv.rank;
    } else {
      if (inv.rank != 0) throw std::logic_error("category_class: free part in a prime-field block");
      length = detail::log_p(H.group.order(), blocks[k].p);
    }
    if (length % n != 0) throw std::logic_error("category_class: length not divisible by the block size");
    cls.push_back(Int(length / n));
  }
  return cls;
}

struct BridgeEntry {
  std::string label;
  K0Class ring_side;
  K0Class category_side;
  bool agree = false;
};

struct BridgeReport {
  std::vector<BridgeEntry> entries;
  std::size_t additivity_checks = 0;
  bool additive = true;
  bool ok() const {
    if (!additive) return false;
    for (const auto& e : entries)
      if (!e.agree) return false;
    return true;
  }
};

inline K0Class add_classes(const K0Class& a, const K0Class& b) {
  K0Class c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

/// Both routes agree on every sample projective, and on consecutive pairs
/// the class of P ⊕ Q is the sum.
inline BridgeReport k0_bridge_check(const ZCategory& C, const VerifiedWitness& vw, const std::vector<IdemObject>& sample) {
  BridgeReport rep;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    BridgeEntry e;
    e.label = tuple_name(C, sample[i].carrier) + "#" + std::to_string(i);
    e.ring_side = class_of(C, vw, sample[i]);
    e.category_side = category_class(C, vw, sample[i]);
    e.agree = e.ring_side == e.category_side;
    rep.entries.push_back(std::move(e));
  }
  for (std::size_t i = 0; i + 1 < sample.size(); ++i) {
    const IdemObject S = idem_direct_sum(C, sample[i], sample[i + 1]);
    const K0Class expect = add_classes(rep.entries[i].ring_side, rep.entries[i + 1].ring_side);
    ++rep.additivity_checks;
    rep.additive = rep.additive && class_of(C, vw, S) == expect && category_class(C, vw, S) == expect;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Negative K reports

enum class EvidenceTier { CertifiedFamily, BoundedDepth, None };

inline std::string tier_name(EvidenceTier t) {
  switch (t) {
    case EvidenceTier::CertifiedFamily: return "certified-family";
    case EvidenceTier::BoundedDepth: return "bounded-depth-evidence";
    case EvidenceTier::None: return "none";
  }
  return "none";
}

/// A vanishing statement taken from the literature, never computed here.
struct CitedClaim {
  std::string statement;
  std::string theorem = "teofo";
  std::string tag = "cited";
  std::string tier;
  std::string hypothesis;
};

struct NegativeKReport {
  EvidenceTier tier = EvidenceTier::None;
  std::vector<std::string> verified;
  std::vector<CitedClaim> cited;
  std::string scope;
};

inline NegativeKReport negative_k_report(const ZCategory& C, const RegularityReport* evidence,
                                         const VerifiedWitness* witness) {
  (void)C;
  NegativeKReport rep;
  if (witness) {
    rep.tier = EvidenceTier::CertifiedFamily;
    std::string ring;
    for (const auto& b : witness->witness().blocks) ring += (ring.empty() ? "" : " x ") + b.str();
    rep.verified.push_back("A(C) is isomorphic to " + ring + " (" + std::to_string(witness->report().products_checked) +
                           " basis products checked)");
    rep.scope = "matrix rings over Z and prime fields are right regular Noetherian";
  } else if (evidence && !evidence->entries.empty() && evidence->all_certified()) {
    rep.tier = EvidenceTier::BoundedDepth;
    rep.verified.push_back("split witnesses for all " + std::to_string(evidence->entries.size()) +
                           " tested morphisms up to depth " + std::to_string(evidence->max_certified_depth()));
    rep.scope = "witnesses bound projective dimension for the tested cokernels only; regularity of C is not decided";
  } else {
    rep.scope = evidence ? "some tested morphism has no split witness within the depth bound; no vanishing claim"
                         : "no evidence supplied; no vanishing claim";
    if (evidence)
      for (const auto& e : evidence->entries)
        if (!e.witness)
          rep.verified.push_back(e.key + ": no split witness through depth " + std::to_string(evidence->max_depth));
    return rep;
  }
  const std::string hyp = rep.tier == EvidenceTier::CertifiedFamily ? "C is right regular coherent"
                                                                    : "C is right regular coherent (not decided)";
  rep.cited.push_back(CitedClaim{"K_i(C) = 0 for every i < 0", "teofo", "cited", tier_name(rep.tier), hyp});
  rep.cited.push_back(CitedClaim{"K_-1(C) = 0", "teofo", "cited", tier_name(rep.tier), hyp});
  return rep;
}

}  // namespace zlincat
