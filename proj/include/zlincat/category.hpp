#pragma once

// Finite Z-linear categories with finitely generated hom-groups.  A category
// is described by raw data (CategoryData), checked by validate(), and only
// then wrapped in an immutable ZCategory that the rest of the library accepts.

#include "zlincat/intlin.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace zlincat {

using ObjectId = std::size_t;

/// Unvalidated category description.  Hom-groups are indexed by (a, b) and
/// the composition table for (a, b, c) is indexed [g][f] with g a generator
/// of hom(b, c) and f a generator of hom(a, b); each entry is a coefficient
/// vector in hom(a, c).
struct CategoryData {
  std::vector<std::string> objects;
  std::vector<FpAbelianGroup> homs;           // size n*n, index a*n + b
  std::vector<IntVector> identities;          // size n
  std::vector<std::vector<IntVector>> comp;   // size n^3, index (a*n + b)*n + c; entry g*ngens(a,b) + f
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return objects.size(); }
  std::size_t hom_index(ObjectId a, ObjectId b) const { return a * size() + b; }
  std::size_t comp_index(ObjectId a, ObjectId b, ObjectId c) const { return (a * size() + b) * size() + c; }

  /// Empty tables of the right shape for the given objects and hom-groups;
  /// all composites start at zero.
  static CategoryData with_homs(std::vector<std::string> objects, std::vector<FpAbelianGroup> homs) {
    CategoryData d;
    d.objects = std::move(objects);
    d.homs = std::move(homs);
    const std::size_t n = d.size();
    d.identities.resize(n);
    for (ObjectId a = 0; a < n; ++a) d.identities[a] = zero_vector(d.homs[d.hom_index(a, a)].ngens());
    d.comp.resize(n * n * n);
    for (ObjectId a = 0; a < n; ++a)
      for (ObjectId b = 0; b < n; ++b)
        for (ObjectId c = 0; c < n; ++c) {
          const auto nf = d.homs[d.hom_index(a, b)].ngens();
          const auto ng = d.homs[d.hom_index(b, c)].ngens();
          const auto nh = d.homs[d.hom_index(a, c)].ngens();
          d.comp[d.comp_index(a, b, c)].assign(ng * nf, zero_vector(nh));
        }
    return d;
  }
};

struct Violation {
  std::string law;       // "shape", "well-defined", "left-identity", "right-identity", "associativity"
  std::string location;  // objects and generator indices involved
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string gen_name(const CategoryData& d, ObjectId a, ObjectId b, std::size_t i) {
  return d.objects[a] + "->" + d.objects[b] + "#" + std::to_string(i);
}

// sum_{g,f} x_g y_f comp[g][f]  for x in hom(b,c), y in hom(a,b)
inline IntVector raw_compose(const CategoryData& d, ObjectId a, ObjectId b, ObjectId c, const IntVector& x,
                             const IntVector& y) {
  const auto& table = d.comp[d.comp_index(a, b, c)];
  const std::size_t nf = y.size();
  IntVector out = zero_vector(d.homs[d.hom_index(a, c)].ngens());
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (sgn(x[g]) == 0) continue;
    for (std::size_t f = 0; f < nf; ++f) {
      if (sgn(y[f]) == 0) continue;
      axpy(out, x[g] * y[f], table[g * nf + f]);
    }
  }
  return out;
}

}  // namespace detail

/// Check shape, well-definedness modulo relations, identity laws and
/// associativity on all generator triples.  Violations come back in a fixed
/// order so the first entry is the first failing law.
inline ValidationReport validate(const CategoryData& d) {
  ValidationReport rep;
  auto fail = [&](std::string law, std::string where, std::string detail = {}) {
    rep.violations.push_back({std::move(law), std::move(where), std::move(detail)});
  };
  const std::size_t n = d.size();
  if (n == 0) {
    fail("shape", "objects", "object set is empty");
    return rep;
  }
  {
    std::map<std::string, int> seen;
    for (const auto& o : d.objects)
      if (seen[o]++) fail("shape", "objects", "duplicate object name '" + o + "'");
  }
  if (d.homs.size() != n * n) fail("shape", "hom", "expected one hom-group per ordered pair");
  if (d.identities.size() != n) fail("shape", "identity", "expected one identity per object");
  if (d.comp.size() != n * n * n) fail("shape", "composition", "expected one table per object triple");
  if (!rep.ok()) return rep;

  for (ObjectId a = 0; a < n; ++a)
    if (d.identities[a].size() != d.homs[d.hom_index(a, a)].ngens())
      fail("shape", "identity " + d.objects[a], "coefficient vector has wrong length");
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b)
      for (ObjectId c = 0; c < n; ++c) {
        const auto& t = d.comp[d.comp_index(a, b, c)];
        const auto nf = d.homs[d.hom_index(a, b)].ngens();
        const auto ng = d.homs[d.hom_index(b, c)].ngens();
        const auto nh = d.homs[d.hom_index(a, c)].ngens();
        bool good = t.size() == ng * nf;
        for (const auto& e : t) good = good && e.size() == nh;
        if (!good)
          fail("shape", d.objects[a] + "->" + d.objects[b] + "->" + d.objects[c],
               "composition table has wrong shape");
      }
  if (!rep.ok()) return rep;

  auto hom = [&](ObjectId a, ObjectId b) -> const FpAbelianGroup& { return d.homs[d.hom_index(a, b)]; };

  // composition respects relations on either side
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b)
      for (ObjectId c = 0; c < n; ++c) {
        const auto& hab = hom(a, b);
        const auto& hbc = hom(b, c);
        const auto& hac = hom(a, c);
        for (std::size_t r = 0; r < hab.relations().rows(); ++r)
          for (std::size_t g = 0; g < hbc.ngens(); ++g) {
            const IntVector v = detail::raw_compose(d, a, b, c, unit_vector(hbc.ngens(), g), hab.relations().row(r));
            if (!hac.is_zero_element(v))
              fail("well-defined", detail::gen_name(d, b, c, g) + " o relation " + std::to_string(r) + " of " +
                                       d.objects[a] + "->" + d.objects[b]);
          }
        for (std::size_t r = 0; r < hbc.relations().rows(); ++r)
          for (std::size_t f = 0; f < hab.ngens(); ++f) {
            const IntVector v = detail::raw_compose(d, a, b, c, hbc.relations().row(r), unit_vector(hab.ngens(), f));
            if (!hac.is_zero_element(v))
              fail("well-defined", "relation " + std::to_string(r) + " of " + d.objects[b] + "->" + d.objects[c] +
                                       " o " + detail::gen_name(d, a, b, f));
          }
      }

  // identity laws
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b) {
      const auto& hab = hom(a, b);
      for (std::size_t f = 0; f < hab.ngens(); ++f) {
        const IntVector e = unit_vector(hab.ngens(), f);
        if (!hab.equal_elements(detail::raw_compose(d, a, b, b, d.identities[b], e), e))
          fail("left-identity", "id_" + d.objects[b] + " o " + detail::gen_name(d, a, b, f));
        if (!hab.equal_elements(detail::raw_compose(d, a, a, b, e, d.identities[a]), e))
          fail("right-identity", detail::gen_name(d, a, b, f) + " o id_" + d.objects[a]);
      }
    }

  // associativity on generator triples a -f-> b -g-> c -h-> e
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b)
      for (ObjectId c = 0; c < n; ++c)
        for (ObjectId e = 0; e < n; ++e) {
          const auto nf = hom(a, b).ngens(), ng = hom(b, c).ngens(), nh = hom(c, e).ngens();
          if (!nf || !ng || !nh) continue;
          for (std::size_t h = 0; h < nh; ++h)
            for (std::size_t g = 0; g < ng; ++g) {
              const IntVector hv = unit_vector(nh, h), gv = unit_vector(ng, g);
              const IntVector hg = detail::raw_compose(d, b, c, e, hv, gv);
              for (std::size_t f = 0; f < nf; ++f) {
                const IntVector fv = unit_vector(nf, f);
                const IntVector left = detail::raw_compose(d, a, b, e, hg, fv);
                const IntVector right = detail::raw_compose(d, a, c, e, hv, detail::raw_compose(d, a, b, c, gv, fv));
                if (!hom(a, e).equal_elements(left, right))
                  fail("associativity",
                       "(" + detail::gen_name(d, c, e, h) + ", " + detail::gen_name(d, b, c, g) + ", " +
                           detail::gen_name(d, a, b, f) + ")",
                       "(hg)f = " + to_string(hom(a, e).reduce(left)) + ", h(gf) = " + to_string(hom(a, e).reduce(right)));
              }
            }
        }
  return rep;
}

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport r)
      : std::runtime_error(message(r)), report_(std::move(r)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string message(const ValidationReport& r) {
    if (r.ok()) return "category is valid";
    const auto& v = r.violations.front();
    return "invalid category: " + v.law + " at " + v.location + (v.detail.empty() ? "" : " (" + v.detail + ")");
  }
  ValidationReport report_;
};

/// A morphism of the category, coefficients in canonical reduced form.
struct Morphism {
  ObjectId src = 0;
  ObjectId tgt = 0;
  IntVector coeffs;

  friend bool operator==(const Morphism&, const Morphism&) = default;
};

class CompositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A validated, immutable finite Z-linear category.
class ZCategory {
 public:
  /// Validates; throws ValidationError listing every violation otherwise.
  static ZCategory create(CategoryData data) {
    ValidationReport rep = validate(data);
    if (!rep.ok()) throw ValidationError(std::move(rep));
    return ZCategory(std::make_shared<const CategoryData>(std::move(data)));
  }

  std::size_t size() const { return data_->size(); }
  const std::vector<std::string>& objects() const { return data_->objects; }
  const std::string& name(ObjectId a) const { return data_->objects.at(a); }
  std::optional<ObjectId> find(const std::string& name) const {
    for (ObjectId a = 0; a < size(); ++a)
      if (data_->objects[a] == name) return a;
    return std::nullopt;
  }
  const FpAbelianGroup& hom(ObjectId a, ObjectId b) const { return data_->homs.at(data_->hom_index(a, b)); }
  const CategoryData& data() const { return *data_; }
  const std::map<std::string, std::string>& metadata() const { return data_->metadata; }

  Morphism morphism(ObjectId a, ObjectId b, IntVector coeffs) const {
    return Morphism{a, b, hom(a, b).reduce(std::move(coeffs))};
  }
  Morphism generator(ObjectId a, ObjectId b, std::size_t i) const {
    return morphism(a, b, unit_vector(hom(a, b).ngens(), i));
  }
  Morphism zero(ObjectId a, ObjectId b) const { return Morphism{a, b, zero_vector(hom(a, b).ngens())}; }
  Morphism identity(ObjectId a) const { return morphism(a, a, data_->identities[a]); }

  /// Raw coefficient-level composite g∘f, unreduced.
  IntVector compose_coeffs(ObjectId a, ObjectId b, ObjectId c, const IntVector& g, const IntVector& f) const {
    return detail::raw_compose(*data_, a, b, c, g, f);
  }

 private:
  explicit ZCategory(std::shared_ptr<const CategoryData> d) : data_(std::move(d)) {}
  std::shared_ptr<const CategoryData> data_;
};

/// g∘f, extended bilinearly from the structure constants and reduced.
inline Morphism compose(const ZCategory& C, const Morphism& g, const Morphism& f) {
  if (f.tgt != g.src)
    throw CompositionError("compose: target " + C.name(f.tgt) + " of f differs from source " + C.name(g.src) + " of g");
  return C.morphism(f.src, g.tgt, C.compose_coeffs(f.src, f.tgt, g.tgt, g.coeffs, f.coeffs));
}

inline Morphism add(const ZCategory& C, const Morphism& f, const Morphism& g) {
  if (f.src != g.src || f.tgt != g.tgt) throw CompositionError("add: morphisms have different endpoints");
  return C.morphism(f.src, f.tgt, f.coeffs + g.coeffs);
}

inline Morphism scale(const ZCategory& C, const Int& k, const Morphism& f) {
  return C.morphism(f.src, f.tgt, k * f.coeffs);
}

/// The induced map h ↦ f∘h from hom(c, f.src) to hom(c, f.tgt).
inline AbHom hom_map_by_precomposition(const ZCategory& C, const Morphism& f, ObjectId c) {
  const auto& dom = C.hom(c, f.src);
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < dom.ngens(); ++j)
    cols.push_back(C.compose_coeffs(c, f.src, f.tgt, f.coeffs, unit_vector(dom.ngens(), j)));
  AbHom h(dom, C.hom(c, f.tgt), IntMatrix::from_columns(cols, C.hom(c, f.tgt).ngens()));
  if (!h.is_well_defined()) throw IllDefinedMapError("hom_map_by_precomposition: induced map not well defined");
  return h;
}

}  // namespace zlincat
