#pragma once

// JSON file formats.  Integers are written as decimal strings and read from
// either strings or JSON numbers.

#include "zlincat/k0.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zlincat {

using json = nlohmann::json;

/// Malformed input: bad JSON, wrong shapes, unknown names.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Integers and vectors

inline json to_json(const Int& x) { return x.get_str(); }

inline Int int_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    Int x;
    if (s.empty() || x.set_str(s, 10) != 0) throw ParseError(where + ": not a decimal integer: " + s);
    return x;
  }
  if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Int(std::to_string(j.get<unsigned long long>()));
  throw ParseError(where + ": expected an integer");
}

inline json to_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline IntVector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of integers");
  IntVector v;
  for (const auto& x : j) v.push_back(int_from_json(x, where));
  return v;
}

inline IntVector vector_from_json(const json& j, std::size_t n, const std::string& where) {
  IntVector v = vector_from_json(j, where);
  if (v.size() != n) throw ParseError(where + ": expected " + std::to_string(n) + " coefficients");
  return v;
}

inline json to_json(const IntMatrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(to_json(m.row(r)));
  return a;
}

inline json to_json(const GroupInvariants& g) {
  json d = json::array();
  for (const auto& x : g.divisors) d.push_back(to_json(x));
  return json{{"rank", g.rank}, {"torsion", d}};
}

namespace detail {

inline std::size_t count_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_string()) throw ParseError(where + ": expected a count");
  const Int v = int_from_json(j, where);
  if (v < 0 || v > 100000) throw ParseError(where + ": count out of range");
  return static_cast<std::size_t>(v.get_ui());
}

inline const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Category specs

inline CategoryData category_data_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("category spec: expected a JSON object");
  CategoryData d;
  const json& objs = detail::member(j, "objects", "category spec");
  if (!objs.is_array()) throw ParseError("category spec: \"objects\" must be a list of names");
  std::vector<std::string> names;
  std::map<std::string, ObjectId> index;
  for (const auto& o : objs) {
    if (!o.is_string()) throw ParseError("category spec: object names must be strings");
    const std::string s = o.get<std::string>();
    if (s.empty() || s.find("->") != std::string::npos) throw ParseError("category spec: bad object name '" + s + "'");
    if (index.count(s)) throw ParseError("category spec: duplicate object '" + s + "'");
    index[s] = names.size();
    names.push_back(s);
  }
  const std::size_t n = names.size();
  auto obj = [&](const std::string& s, const std::string& where) {
    auto it = index.find(s);
    if (it == index.end()) throw ParseError(where + ": unknown object '" + s + "'");
    return it->second;
  };
  auto split = [](const std::string& key) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = key.find("->", start);
      parts.push_back(key.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 2;
    }
    return parts;
  };

  std::vector<FpAbelianGroup> homs(n * n, FpAbelianGroup::trivial());
  if (j.contains("hom")) {
    const json& h = j.at("hom");
    if (!h.is_object()) throw ParseError("category spec: \"hom\" must be an object keyed \"a->b\"");
    for (auto it = h.begin(); it != h.end(); ++it) {
      const std::string where = "hom \"" + it.key() + "\"";
      const auto parts = split(it.key());
      if (parts.size() != 2) throw ParseError(where + ": key must be \"a->b\"");
      const ObjectId a = obj(parts[0], where), b = obj(parts[1], where);
      const std::size_t g = detail::count_from_json(detail::member(it.value(), "generators", where), where);
      IntMatrix rel(0, g);
      if (it.value().contains("relations")) {
        const json& r = it.value().at("relations");
        if (!r.is_array()) throw ParseError(where + ": relations must be a list of rows");
        for (const auto& row : r) rel.append_row(vector_from_json(row, g, where + " relation"));
      }
      homs[a * n + b] = FpAbelianGroup(g, std::move(rel));
    }
  }
  d = CategoryData::with_homs(names, homs);

  if (j.contains("identity")) {
    const json& id = j.at("identity");
    if (!id.is_object()) throw ParseError("category spec: \"identity\" must be keyed by object");
    for (auto it = id.begin(); it != id.end(); ++it) {
      const ObjectId a = obj(it.key(), "identity");
      d.identities[a] = vector_from_json(it.value(), d.homs[d.hom_index(a, a)].ngens(), "identity \"" + it.key() + "\"");
    }
  }
  if (j.contains("composition")) {
    const json& c = j.at("composition");
    if (!c.is_object()) throw ParseError("category spec: \"composition\" must be keyed \"a->b->c\"");
    for (auto it = c.begin(); it != c.end(); ++it) {
      const std::string where = "composition \"" + it.key() + "\"";
      const auto parts = split(it.key());
      if (parts.size() != 3) throw ParseError(where + ": key must be \"a->b->c\"");
      const ObjectId a = obj(parts[0], where), b = obj(parts[1], where), cc = obj(parts[2], where);
      const std::size_t nf = d.homs[d.hom_index(a, b)].ngens(), ng = d.homs[d.hom_index(b, cc)].ngens(),
                        nh = d.homs[d.hom_index(a, cc)].ngens();
      const json& t = it.value();
      if (!t.is_array() || t.size() != ng) throw ParseError(where + ": expected " + std::to_string(ng) + " rows");
      auto& table = d.comp[d.comp_index(a, b, cc)];
      for (std::size_t g = 0; g < ng; ++g) {
        if (!t[g].is_array() || t[g].size() != nf) throw ParseError(where + ": expected " + std::to_string(nf) + " columns");
        for (std::size_t f = 0; f < nf; ++f) table[g * nf + f] = vector_from_json(t[g][f], nh, where);
      }
    }
  }
  if (j.contains("metadata")) {
    const json& m = j.at("metadata");
    if (!m.is_object()) throw ParseError("category spec: \"metadata\" must be an object");
    for (auto it = m.begin(); it != m.end(); ++it)
      d.metadata[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  }
  return d;
}

inline json to_json(const CategoryData& d) {
  const std::size_t n = d.size();
  json j;
  j["objects"] = d.objects;
  json hom = json::object(), id = json::object(), comp = json::object();
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b) {
      const auto& h = d.homs[d.hom_index(a, b)];
      if (h.ngens() == 0) continue;
      json e{{"generators", h.ngens()}};
      e["relations"] = to_json(h.relations());
      hom[d.objects[a] + "->" + d.objects[b]] = e;
    }
  for (ObjectId a = 0; a < n; ++a) id[d.objects[a]] = to_json(d.identities[a]);
  for (ObjectId a = 0; a < n; ++a)
    for (ObjectId b = 0; b < n; ++b)
      for (ObjectId c = 0; c < n; ++c) {
        const std::size_t nf = d.homs[d.hom_index(a, b)].ngens(), ng = d.homs[d.hom_index(b, c)].ngens();
        if (nf == 0 || ng == 0 || d.homs[d.hom_index(a, c)].ngens() == 0) continue;
        const auto& table = d.comp[d.comp_index(a, b, c)];
        json t = json::array();
        for (std::size_t g = 0; g < ng; ++g) {
          json row = json::array();
          for (std::size_t f = 0; f < nf; ++f) row.push_back(to_json(table[g * nf + f]));
          t.push_back(row);
        }
        comp[d.objects[a] + "->" + d.objects[b] + "->" + d.objects[c]] = t;
      }
  j["hom"] = hom;
  j["identity"] = id;
  j["composition"] = comp;
  json meta = json::object();
  for (const auto& [k, v] : d.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

/// Parses and validates; throws ParseError or ValidationError.
inline ZCategory load_category(const std::string& path) {
  return ZCategory::create(category_data_from_json(parse_json(read_file(path), path)));
}

// ---------------------------------------------------------------------------
// Tuples and matrices

inline json tuple_to_json(const ZCategory& C, const TupleObject& t) {
  json a = json::array();
  for (auto x : t.components) a.push_back(C.name(x));
  return a;
}

inline TupleObject tuple_from_json(const ZCategory& C, const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of object names");
  TupleObject t;
  for (const auto& x : j) {
    if (!x.is_string()) throw ParseError(where + ": object names must be strings");
    auto id = C.find(x.get<std::string>());
    if (!id) throw ParseError(where + ": unknown object '" + x.get<std::string>() + "'");
    t.components.push_back(*id);
  }
  return t;
}

/// {"src": [...], "tgt": [...], "entries": [[coeffs of (j, i)] per i] per j}
inline json to_json(const ZCategory& C, const MatMorphism& m) {
  json rows = json::array();
  for (std::size_t j = 0; j < m.tgt.size(); ++j) {
    json row = json::array();
    for (std::size_t i = 0; i < m.src.size(); ++i) row.push_back(to_json(m.at(j, i)));
    rows.push_back(row);
  }
  return json{{"src", tuple_to_json(C, m.src)}, {"tgt", tuple_to_json(C, m.tgt)}, {"entries", rows}};
}

inline MatMorphism matmorphism_from_json(const ZCategory& C, const json& j, const std::string& where) {
  MatMorphism m{tuple_from_json(C, detail::member(j, "src", where), where + " src"),
                tuple_from_json(C, detail::member(j, "tgt", where), where + " tgt"), {}};
  const json& e = detail::member(j, "entries", where);
  if (!e.is_array() || e.size() != m.tgt.size()) throw ParseError(where + ": entries need one row per target object");
  for (std::size_t r = 0; r < m.tgt.size(); ++r) {
    if (!e[r].is_array() || e[r].size() != m.src.size())
      throw ParseError(where + ": each row needs one entry per source object");
    for (std::size_t i = 0; i < m.src.size(); ++i)
      m.entries.push_back(vector_from_json(e[r][i], C.hom(m.src[i], m.tgt[r]).ngens(), where));
  }
  return canonical(C, std::move(m));
}

/// {"morphisms": [{"name": ..., "src": ..., "tgt": ..., "entries": ...}]}
inline std::vector<std::pair<std::string, MatMorphism>> morphisms_from_json(const ZCategory& C, const json& j) {
  const json& list = detail::member(j, "morphisms", "morphisms file");
  if (!list.is_array()) throw ParseError("morphisms file: \"morphisms\" must be a list");
  std::vector<std::pair<std::string, MatMorphism>> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    std::string name = list[k].contains("name") && list[k]["name"].is_string() ? list[k]["name"].get<std::string>()
                                                                             : "m" + std::to_string(k);
    out.emplace_back(name, matmorphism_from_json(C, list[k], "morphism " + name));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witnesses and samples

inline json to_json(const MatrixBlock& b) {
  return b.kind == MatrixBlock::Kind::Integers ? json{{"kind", "Z"}, {"size", b.size}}
                                                : json{{"kind", "F"}, {"p", to_json(b.p)}, {"size", b.size}};
}

inline json to_json(const SemisimpleWitness& w) {
  json blocks = json::array(), images = json::array();
  for (const auto& b : w.blocks) blocks.push_back(to_json(b));
  for (const auto& v : w.images) images.push_back(to_json(v));
  return json{{"blocks", blocks}, {"images", images}};
}

inline SemisimpleWitness witness_from_json(const json& j) {
  SemisimpleWitness w;
  const json& blocks = detail::member(j, "blocks", "witness");
  if (!blocks.is_array() || blocks.empty()) throw ParseError("witness: \"blocks\" must be a non-empty list");
  for (const auto& b : blocks) {
    const json& kind = detail::member(b, "kind", "witness block");
    MatrixBlock mb;
    mb.size = detail::count_from_json(detail::member(b, "size", "witness block"), "witness block size");
    if (mb.size == 0) throw ParseError("witness block: size must be positive");
    if (kind == "Z") {
      mb.kind = MatrixBlock::Kind::Integers;
    } else if (kind == "F") {
      mb.kind = MatrixBlock::Kind::PrimeField;
      mb.p = int_from_json(detail::member(b, "p", "witness block"), "witness block p");
      if (!is_prime(mb.p)) throw ParseError("witness block: p must be prime");
    } else {
      throw ParseError("witness block: kind must be \"Z\" or \"F\"");
    }
    w.blocks.push_back(mb);
  }
  const json& images = detail::member(j, "images", "witness");
  if (!images.is_array()) throw ParseError("witness: \"images\" must be a list");
  const std::size_t r = block_offsets(w.blocks).back();
  for (const auto& v : images) w.images.push_back(vector_from_json(v, r, "witness image"));
  return w;
}

/// {"sample": [{"carrier": [...], "idempotent": entries}]}
inline std::vector<IdemObject> sample_from_json(const ZCategory& C, const json& j) {
  const json& list = detail::member(j, "sample", "sample file");
  if (!list.is_array()) throw ParseError("sample file: \"sample\" must be a list");
  std::vector<IdemObject> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "sample " + std::to_string(k);
    const TupleObject t = tuple_from_json(C, detail::member(list[k], "carrier", where), where);
    if (!list[k].contains("idempotent")) {
      out.push_back(idem_identity(C, t));
      continue;
    }
    const MatMorphism p =
        matmorphism_from_json(C, json{{"src", list[k]["carrier"]}, {"tgt", list[k]["carrier"]}, {"entries", list[k]["idempotent"]}}, where);
    if (!is_idempotent(C, p)) throw ParseError(where + ": matrix is not idempotent");
    out.push_back(IdemObject{t, p});
  }
  return out;
}

inline json to_json(const ZCategory& C, const IdemObject& P) {
  return json{{"carrier", tuple_to_json(C, P.carrier)}, {"idempotent", to_json(C, P.p)["entries"]}};
}

// ---------------------------------------------------------------------------
// Rings and chains

inline json to_json(const RingPresentation& R) {
  json j;
  j["rank"] = R.ngens();
  j["invariants"] = to_json(R.carrier.invariants());
  if (R.carrier.is_finite()) j["order"] = to_json(R.carrier.order());
  j["basis"] = R.basis_labels;
  j["relations"] = to_json(R.carrier.relations());
  j["unit"] = to_json(R.unit);
  json lu = json::array();
  for (const auto& u : R.local_units) lu.push_back(to_json(u));
  j["local_units"] = lu;
  json products = json::array();
  for (std::size_t a = 0; a < R.ngens(); ++a)
    for (std::size_t b = 0; b < R.ngens(); ++b) {
      const IntVector p = R.carrier.reduce(R.mult[a][b]);
      if (!is_zero(p)) products.push_back(json{{"left", R.basis_labels[a]}, {"right", R.basis_labels[b]}, {"product", to_json(p)}});
    }
  j["products"] = products;
  return j;
}

inline json to_json(const ZCategory& C, const KernelChain& chain) {
  json stages = json::array();
  for (std::size_t i = 0; i <= chain.length(); ++i) stages.push_back(to_json(C, chain.map(i)));
  json certs = json::array();
  for (const auto& r : chain.certificates)
    certs.push_back(json{{"stage", r.stage}, {"object", C.name(r.object)}, {"exact", r.exact}});
  json j{{"maps", stages}, {"exactness", certs}};
  if (chain.source_idempotent) j["source_idempotent"] = to_json(C, *chain.source_idempotent);
  return j;
}

inline KernelChain chain_from_json(const ZCategory& C, const json& j) {
  const json& maps = detail::member(j, "maps", "chain");
  if (!maps.is_array() || maps.empty()) throw ParseError("chain: \"maps\" must be a non-empty list");
  KernelChain chain{matmorphism_from_json(C, maps[0], "chain map 0"), std::nullopt, {}, {}};
  for (std::size_t i = 1; i < maps.size(); ++i)
    chain.stages.push_back(matmorphism_from_json(C, maps[i], "chain map " + std::to_string(i)));
  if (j.contains("source_idempotent"))
    chain.source_idempotent = matmorphism_from_json(C, j["source_idempotent"], "chain idempotent");
  return chain;
}

/// Recomputes every exactness triple and composite of a stored chain.
inline bool replay_chain(const ZCategory& C, const KernelChain& chain) {
  for (std::size_t i = 1; i <= chain.length(); ++i) {
    const MatMorphism& g = chain.map(i);
    MatMorphism f = chain.map(i - 1);
    if (g.tgt != f.src) return false;
    if (i == 1 && chain.source_idempotent)
      f = detail::vstack(f, mat_sub(C, mat_identity(C, f.src), *chain.source_idempotent));
    if (!mat_is_zero(C, mat_compose(C, f, g))) return false;
    for (ObjectId c = 0; c < C.size(); ++c) {
      const TupleObject one = TupleObject::single(c);
      if (!is_exact_at(postcompose_map(C, g, one), postcompose_map(C, f, one))) return false;
    }
  }
  return true;
}

}  // namespace zlincat
