#pragma once

// Pseudo n-kernel chains in the additive completion, the α-splitting search
// that bounds projective dimension of coker(f_*), and bounded-depth
// regularity evidence.

#include "zlincat/modules.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace zlincat {

/// Exactness of hom(c, x_i) -> hom(c, x_{i-1}) -> hom(c, x_{i-2}) at stage i.
struct ExactnessRecord {
  std::size_t stage = 0;
  ObjectId object = 0;
  bool exact = false;
};

struct PseudoKernel {
  TupleObject x;
  MatMorphism map;  // x -> f.src
  std::vector<ExactnessRecord> certificates;
};

namespace detail {

/// Rows of a on top of rows of b; both share the source.
inline MatMorphism vstack(const MatMorphism& a, const MatMorphism& b) {
  if (a.src != b.src) throw DimensionError("vstack: sources differ");
  MatMorphism m{a.src, concat(a.tgt, b.tgt), a.entries};
  m.entries.insert(m.entries.end(), b.entries.begin(), b.entries.end());
  return m;
}

}  // namespace detail

/// Kernel generators of hom(c, x) -> hom(c, y), object by object, one copy
/// of c per generator; a generator already reached from the copies chosen so
/// far is skipped.  `stage` labels the certificates.
inline PseudoKernel pseudo_kernel(const ZCategory& C, const MatMorphism& f, std::size_t stage = 1) {
  PseudoKernel out;
  out.map = mat_zero(C, out.x, f.src);
  auto push = [&](ObjectId c, const MatMorphism& h) {
    MatMorphism m = mat_zero(C, concat(out.x, TupleObject::single(c)), f.src);
    const std::size_t k = out.x.size();
    for (std::size_t j = 0; j < f.src.size(); ++j) {
      for (std::size_t i = 0; i < k; ++i) m.at(j, i) = out.map.at(j, i);
      m.at(j, k) = h.at(j, 0);
    }
    out.x.components.push_back(c);
    out.map = std::move(m);
  };
  for (ObjectId c = 0; c < C.size(); ++c) {
    const TupleObject one = TupleObject::single(c);
    const TupleHomLayout layout(C, one, f.src);
    const Kernel k = kernel(postcompose_map(C, f, one));
    std::vector<IntVector> reached;
    const AbHom current = postcompose_map(C, out.map, one);
    for (std::size_t j = 0; j < current.matrix.cols(); ++j) reached.push_back(current.matrix.col(j));
    for (std::size_t g = 0; g < k.group.ngens(); ++g) {
      const IntVector v = k.inclusion.matrix.col(g);
      if (layout.group().is_zero_element(v)) continue;
      if (!reached.empty() && SubgroupMembership(layout.group(), reached).contains(v)) continue;
      push(c, layout.unflatten(v));
      const AbHom now = postcompose_map(C, out.map, one);
      reached.clear();
      for (std::size_t j = 0; j < now.matrix.cols(); ++j) reached.push_back(now.matrix.col(j));
    }
  }
  out.map = canonical(C, std::move(out.map));
  for (ObjectId c = 0; c < C.size(); ++c) {
    const TupleObject one = TupleObject::single(c);
    out.certificates.push_back(
        {stage, c, is_exact_at(postcompose_map(C, out.map, one), postcompose_map(C, f, one))});
  }
  return out;
}

/// Pseudo-kernel of f : (x, p) -> y in Idem(C_⊕): the kernel of h ↦ (f h, h - p h).
inline PseudoKernel pseudo_kernel(const ZCategory& C, const MatMorphism& f, const MatMorphism& p, std::size_t stage) {
  return pseudo_kernel(C, detail::vstack(f, mat_sub(C, mat_identity(C, f.src), p)), stage);
}

struct KernelChain {
  MatMorphism base;                              // f : x -> y
  std::optional<MatMorphism> source_idempotent;  // p with f = f p, when x is an object of Idem
  std::vector<MatMorphism> stages;               // f_i : x_i -> x_{i-1}
  std::vector<ExactnessRecord> certificates;

  /// f_0 = f, f_i for i >= 1.
  const MatMorphism& map(std::size_t i) const { return i == 0 ? base : stages.at(i - 1); }
  std::size_t length() const { return stages.size(); }
  bool certified() const {
    return std::all_of(certificates.begin(), certificates.end(), [](const ExactnessRecord& r) { return r.exact; });
  }
};

inline void extend_chain(const ZCategory& C, KernelChain& chain) {
  const std::size_t stage = chain.stages.size() + 1;
  PseudoKernel k = stage == 1 && chain.source_idempotent
                       ? pseudo_kernel(C, chain.base, *chain.source_idempotent, stage)
                       : pseudo_kernel(C, chain.map(stage - 1), stage);
  chain.stages.push_back(std::move(k.map));
  chain.certificates.insert(chain.certificates.end(), k.certificates.begin(), k.certificates.end());
}

inline KernelChain pseudo_n_kernel(const ZCategory& C, const MatMorphism& f, std::size_t n) {
  if (n == 0) throw std::invalid_argument("pseudo_n_kernel: n must be at least 1");
  KernelChain chain{canonical(C, f), std::nullopt, {}, {}};
  for (std::size_t i = 0; i < n; ++i) extend_chain(C, chain);
  return chain;
}

inline KernelChain pseudo_n_kernel(const ZCategory& C, const IdemObject& P, const MatMorphism& f, std::size_t n) {
  if (n == 0) throw std::invalid_argument("pseudo_n_kernel: n must be at least 1");
  if (f.src != P.carrier) throw DimensionError("pseudo_n_kernel: f does not start at P");
  KernelChain chain{canonical(C, f), P.p, {}, {}};
  for (std::size_t i = 0; i < n; ++i) extend_chain(C, chain);
  return chain;
}

// ---------------------------------------------------------------------------
// Splittings

struct SplitWitness {
  std::size_t depth = 0;
  MatMorphism alpha;  // endomorphism of x_{k-1}
};

/// α with f_{k-1} α = f_{k-1} and α f_k = 0 (α = pβp at k = 1 over an idempotent).
inline std::optional<SplitWitness> find_splitting(const ZCategory& C, const KernelChain& chain, std::size_t k) {
  if (k == 0 || k > chain.length()) throw std::out_of_range("find_splitting: depth exceeds chain length");
  const MatMorphism& F = chain.map(k - 1);
  const MatMorphism& G = chain.map(k);
  const TupleObject& X = F.src;
  const std::optional<MatMorphism> p = k == 1 ? chain.source_idempotent : std::nullopt;
  auto alpha = [&](const MatMorphism& b) { return p ? mat_compose(C, *p, mat_compose(C, b, *p)) : b; };
  const TupleHomLayout unknown(C, X, X);
  auto beta = solve_linear(
      unknown, {LinearConstraint{TupleHomLayout(C, X, F.tgt), [&](const MatMorphism& b) { return mat_compose(C, F, alpha(b)); }, F},
                LinearConstraint{TupleHomLayout(C, G.src, X), [&](const MatMorphism& b) { return mat_compose(C, alpha(b), G); },
                                 mat_zero(C, G.src, X)}});
  if (!beta) return std::nullopt;
  return SplitWitness{k, alpha(*beta)};
}

/// Both defining identities of a witness.
inline bool check_witness(const ZCategory& C, const KernelChain& chain, const SplitWitness& w) {
  if (w.depth == 0 || w.depth > chain.length()) return false;
  const MatMorphism& F = chain.map(w.depth - 1);
  const MatMorphism& G = chain.map(w.depth);
  if (w.alpha.src != F.src || w.alpha.tgt != F.src) return false;
  if (w.depth == 1 && chain.source_idempotent &&
      !mat_equal(C, mat_compose(C, *chain.source_idempotent, mat_compose(C, w.alpha, *chain.source_idempotent)), w.alpha))
    return false;
  return mat_equal(C, mat_compose(C, F, w.alpha), F) && mat_is_zero(C, mat_compose(C, w.alpha, G));
}

/// At every object c: t(f h) = α h is well defined on im(f_{k-1*}) and σ∘t = id.
inline bool verify_section(const ZCategory& C, const KernelChain& chain, const SplitWitness& w) {
  const MatMorphism& F = chain.map(w.depth - 1);
  for (ObjectId c = 0; c < C.size(); ++c) {
    const TupleObject one = TupleObject::single(c);
    const AbHom fc = postcompose_map(C, F, one);
    const AbHom ac = postcompose_map(C, w.alpha, one);
    const Kernel I = image(fc);
    const AbHom t(I.group, ac.tgt, ac.matrix);
    if (!t.is_well_defined()) return false;
    auto sigma = factor_through(fc, I.inclusion);
    if (!sigma) return false;
    if (!compose(*sigma, t).equals(AbHom::identity(I.group))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Bounded-depth regularity evidence

inline std::size_t thread_budget() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ZLINCAT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
    }
  }
  return n;
}

struct RegularityEntry {
  std::string key;
  MatMorphism morphism;
  std::optional<SplitWitness> witness;  // least depth
  KernelChain chain;
  bool section_verified = false;
};

struct RegularityReport {
  std::size_t max_depth = 0;
  std::vector<RegularityEntry> entries;  // sorted by key

  bool all_certified() const {
    return std::all_of(entries.begin(), entries.end(), [](const RegularityEntry& e) { return e.witness.has_value(); });
  }
  std::size_t max_certified_depth() const {
    std::size_t d = 0;
    for (const auto& e : entries)
      if (e.witness) d = std::max(d, e.witness->depth);
    return d;
  }
};

inline RegularityEntry regularity_search(const ZCategory& C, std::string key, const MatMorphism& f, std::size_t D) {
  RegularityEntry e{std::move(key), canonical(C, f), std::nullopt, KernelChain{canonical(C, f), std::nullopt, {}, {}}, false};
  for (std::size_t k = 1; k <= D; ++k) {
    extend_chain(C, e.chain);
    if (auto w = find_splitting(C, e.chain, k)) {
      e.section_verified = check_witness(C, e.chain, *w) && verify_section(C, e.chain, *w);
      e.witness = std::move(w);
      break;
    }
  }
  return e;
}

/// Least splitting depth ≤ D per morphism.  A witness bounds pd(coker f_*)
/// for that morphism only.
inline RegularityReport check_regular(const ZCategory& C, const std::vector<std::pair<std::string, MatMorphism>>& morphisms,
                                      std::size_t D, std::size_t threads = 0) {
  if (D == 0) throw std::invalid_argument("check_regular: depth must be at least 1");
  RegularityReport rep;
  rep.max_depth = D;
  rep.entries.resize(morphisms.size());
  if (threads == 0) threads = thread_budget();
  threads = std::max<std::size_t>(1, std::min(threads, morphisms.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < morphisms.size();)
      rep.entries[i] = regularity_search(C, morphisms[i].first, morphisms[i].second, D);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const RegularityEntry& a, const RegularityEntry& b) { return a.key < b.key; });
  return rep;
}

/// Every generator of every hom-group as a 1x1 matrix, keyed "a->b#g".
inline std::vector<std::pair<std::string, MatMorphism>> basis_morphisms(const ZCategory& C) {
  std::vector<std::pair<std::string, MatMorphism>> out;
  for (ObjectId a = 0; a < C.size(); ++a)
    for (ObjectId b = 0; b < C.size(); ++b)
      for (std::size_t g = 0; g < C.hom(a, b).ngens(); ++g) {
        const Morphism m = C.generator(a, b, g);
        if (is_zero(m.coeffs)) continue;
        out.emplace_back(C.name(a) + "->" + C.name(b) + "#" + std::to_string(g), from_morphism(m));
      }
  return out;
}

// ---------------------------------------------------------------------------
// Resolutions of finitely presented functors

/// P_n -> ... -> P_1 -> P_0 -> F -> 0 with P_0 = hom(-, y), P_1 = hom(-, x),
/// d_1 the presentation and d_{i+1} the stages of its pseudo-kernel chain.
struct Resolution {
  FpFunctor functor;
  KernelChain chain;  // base = presentation
  std::vector<ExactnessRecord> augmentation;  // P_0 -> F onto at every object

  std::size_t length() const { return chain.length() + 1; }
  const MatMorphism& differential(std::size_t i) const { return chain.map(i - 1); }
  bool certified() const {
    return chain.certified() &&
           std::all_of(augmentation.begin(), augmentation.end(), [](const ExactnessRecord& r) { return r.exact; });
  }
};

inline Resolution fp_resolution(const ZCategory& C, const FpFunctor& F, std::size_t n) {
  if (n == 0) throw std::invalid_argument("fp_resolution: length must be at least 1");
  Resolution r{F, KernelChain{canonical(C, F.presentation), std::nullopt, {}, {}}, {}};
  for (std::size_t i = 1; i < n; ++i) extend_chain(C, r.chain);
  for (ObjectId c = 0; c < C.size(); ++c) {
    const Cokernel Fc = evaluate(C, F, c);
    const AbHom d1 = postcompose_map(C, F.presentation, TupleObject::single(c));
    // exact at P_0 and P_0 -> F(c) onto
    const bool exact = is_exact_at(d1, Fc.projection) && is_surjective(Fc.projection);
    r.augmentation.push_back({0, c, exact});
  }
  return r;
}

}  // namespace zlincat
