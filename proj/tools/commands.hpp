#pragma once

// The zlincat subcommands.  Each returns an exit code, a JSON report and a
// one-line summary; main.cpp only parses flags and prints.

#include "zlincat/zlincat.hpp"

#include <openssl/evp.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace zlincat::cli {

struct Outcome {
  int exit_code = 0;
  json report;
  std::string summary;
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Reads a file once, recording its digest in the report.
class Inputs {
 public:
  std::string read(const std::string& path) {
    std::string text = read_file(path);
    digests_[path] = "sha256:" + sha256_hex(text);
    return text;
  }
  json load(const std::string& path) { return parse_json(read(path), path); }
  ZCategory category(const std::string& path) { return ZCategory::create(category_data_from_json(load(path))); }
  json digests() const { return digests_; }

 private:
  json digests_ = json::object();
};

inline Outcome finish(std::string command, Inputs& in, json body, int code, std::string summary) {
  body["command"] = std::move(command);
  body["inputs"] = in.digests();
  body["exit_code"] = code;
  if (!body.contains("verified")) body["verified"] = json::object();
  if (!body.contains("cited")) body["cited"] = json::array();
  return Outcome{code, std::move(body), std::move(summary)};
}

/// Runs a command body, mapping input errors to exit 2 and semantic failures to exit 1.
inline Outcome guarded(const std::string& command, const std::function<Outcome(Inputs&)>& body) {
  Inputs in;
  auto fail = [&](int code, const std::string& kind, const std::string& what) {
    return finish(command, in, json{{"error", {{"kind", kind}, {"message", what}}}, {"verdict", "error"}}, code,
                  command + ": " + what);
  };
  try {
    return body(in);
  } catch (const ValidationError& e) {
    json v = json::array();
    for (const auto& x : e.report().violations)
      v.push_back(json{{"law", x.law}, {"location", x.location}, {"detail", x.detail}});
    Outcome o = fail(1, "validation", e.what());
    o.report["violations"] = v;
    return o;
  } catch (const WitnessError& e) {
    Outcome o = fail(1, "witness", e.what());
    if (e.failing_pair) o.report["error"]["failing_pair"] = {e.failing_pair->first, e.failing_pair->second};
    return o;
  } catch (const BuilderError& e) {
    return fail(1, "builder", e.what());
  } catch (const ParseError& e) {
    return fail(2, "parse", e.what());
  } catch (const GrammarError& e) {
    return fail(2, "grammar", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "input", e.what());
  } catch (const std::out_of_range& e) {
    return fail(2, "input", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}

inline json negative_k_json(const NegativeKReport& r) {
  json claims = json::array();
  for (const auto& c : r.cited)
    claims.push_back(json{{"statement", c.statement}, {"theorem", c.theorem}, {"tag", c.tag}, {"tier", c.tier},
                          {"hypothesis", c.hypothesis}});
  return json{{"tier", tier_name(r.tier)}, {"claims", claims}, {"scope", r.scope}, {"evidence", r.verified}};
}

/// Evidence goes under "negative_k", the cited claims themselves under "cited".
inline void attach_negative_k(json& body, const NegativeKReport& r) {
  json nk = negative_k_json(r);
  body["cited"] = nk["claims"];
  nk.erase("claims");
  body["negative_k"] = nk;
}

// ---------------------------------------------------------------------------

inline Outcome cmd_validate(const std::string& spec) {
  return guarded("validate", [&](Inputs& in) {
    const CategoryData d = category_data_from_json(in.load(spec));
    const ValidationReport rep = validate(d);
    json v = json::array();
    for (const auto& x : rep.violations) v.push_back(json{{"law", x.law}, {"location", x.location}, {"detail", x.detail}});
    const int code = rep.ok() ? 0 : 1;
    json body{{"verdict", rep.ok() ? "valid" : "invalid"}, {"objects", d.objects}, {"violations", v}};
    return finish("validate", in, body, code,
                  rep.ok() ? "valid: " + std::to_string(d.size()) + " objects"
                           : "invalid: " + std::to_string(v.size()) + " violation(s), first " + rep.violations[0].law +
                                 " at " + rep.violations[0].location);
  });
}

inline Outcome cmd_ring(const std::string& spec, std::size_t truncate) {
  return guarded("ring", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    const RingPresentation A = build_ring(C);
    json body{{"ring", to_json(A)}};
    json verified{{"certified", true}};
    std::string summary = "ring of rank " + std::to_string(A.ngens());
    if (A.carrier.is_finite()) summary += ", order " + A.carrier.order().get_str();
    if (auto w = canonical_witness(C, A)) {
      const auto rep = verify_witness_report(A, *w);
      body["witness"] = to_json(*w);
      std::string blocks;
      for (const auto& b : w->blocks) blocks += (blocks.empty() ? "" : " x ") + b.str();
      verified["witness"] = json{{"ring", blocks}, {"ok", rep.ok}, {"products_checked", rep.products_checked}};
      summary += ", isomorphic to " + blocks;
    }
    int code = 0;
    if (truncate > 0) {
      const auto [R, t] = truncated_additive_ring(C, truncate);
      verified["truncation"] = json{{"level", t.level},
                                    {"tuple_objects", t.tuple_objects},
                                    {"rank", R.ngens()},
                                    {"left", to_json(t.left)},
                                    {"right", to_json(t.right)},
                                    {"additive", t.additive},
                                    {"injective", t.injective},
                                    {"onto_corners", t.onto_corners},
                                    {"multiplicative", t.multiplicative},
                                    {"ok", t.ok()},
                                    {"failure", t.failure}};
      summary += "; truncation N=" + std::to_string(truncate) + (t.ok() ? " identified" : " FAILED: " + t.failure);
      if (!t.ok()) code = 1;
    }
    body["verified"] = verified;
    body["verdict"] = code == 0 ? "pass" : "fail";
    return finish("ring", in, body, code, summary);
  });
}

inline json regularity_entry_json(const ZCategory& C, const RegularityEntry& e, std::size_t D) {
  json j{{"key", e.key}, {"morphism", to_json(C, e.morphism)}};
  if (e.witness) {
    j["verdict"] = "certified";
    j["depth"] = e.witness->depth;
    j["alpha"] = to_json(C, e.witness->alpha);
    j["section_verified"] = e.section_verified;
    j["bound"] = "pd(coker f_*) <= " + std::to_string(e.witness->depth);
  } else {
    j["verdict"] = "inconclusive at depth " + std::to_string(D);
  }
  j["chain_exact"] = e.chain.certified();
  return j;
}

struct CheckRegularOptions {
  std::optional<std::string> morphisms;
  bool basis = false;
  std::size_t depth = 8;
  std::optional<std::string> certificates;  // write the replayable dump here
  std::optional<std::string> replay;        // verify a dump instead of searching
};

inline Outcome cmd_check_regular(const std::string& spec, const CheckRegularOptions& opt) {
  return guarded("check-regular", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    if (opt.replay) {
      const json dump = in.load(*opt.replay);
      const json& list = dump.at("certificates");
      json results = json::array();
      bool all = true;
      for (const auto& item : list) {
        const KernelChain chain = chain_from_json(C, item.at("chain"));
        bool ok = replay_chain(C, chain);
        if (item.contains("alpha")) {
          const SplitWitness w{item.at("depth").get<std::size_t>(), matmorphism_from_json(C, item.at("alpha"), "alpha")};
          ok = ok && check_witness(C, chain, w) && verify_section(C, chain, w);
        }
        all = all && ok;
        results.push_back(json{{"key", item.at("key")}, {"replayed", ok}});
      }
      return finish("check-regular", in, json{{"verdict", all ? "replay-ok" : "replay-failed"}, {"replay", results}},
                    all ? 0 : 1, all ? "all certificates replayed" : "certificate replay FAILED");
    }
    if (opt.depth == 0) throw std::invalid_argument("--depth must be at least 1");
    std::vector<std::pair<std::string, MatMorphism>> ms;
    if (opt.morphisms) ms = morphisms_from_json(C, in.load(*opt.morphisms));
    if (opt.basis) {
      auto b = basis_morphisms(C);
      ms.insert(ms.end(), b.begin(), b.end());
    }
    if (ms.empty()) throw std::invalid_argument("no morphisms: give --morphisms FILE or --basis");
    const RegularityReport rep = check_regular(C, ms, opt.depth);
    json entries = json::array(), certs = json::array();
    std::size_t certified = 0;
    for (const auto& e : rep.entries) {
      entries.push_back(regularity_entry_json(C, e, opt.depth));
      json c{{"key", e.key}, {"chain", to_json(C, e.chain)}};
      if (e.witness) {
        ++certified;
        c["depth"] = e.witness->depth;
        c["alpha"] = to_json(C, e.witness->alpha);
      }
      certs.push_back(c);
    }
    if (opt.certificates) {
      std::ofstream out(*opt.certificates);
      out << json{{"certificates", certs}}.dump(2) << "\n";
    }
    const NegativeKReport nk = negative_k_report(C, &rep, nullptr);
    const bool all = rep.all_certified();
    json body{{"verdict", all ? "all-certified" : "inconclusive"},
              {"max_depth", opt.depth},
              {"morphisms", entries},
              {"scope", "split witnesses bound projective dimension of the tested cokernels only; "
                        "regularity of the category is evidence, not decided"},
              {"verified", {{"certified", certified}, {"tested", rep.entries.size()}}},
};
    attach_negative_k(body, nk);
    std::string summary = std::to_string(certified) + "/" + std::to_string(rep.entries.size()) + " certified";
    if (all) summary += ", max depth " + std::to_string(rep.max_certified_depth());
    else summary += ", inconclusive at depth " + std::to_string(opt.depth) + "; no vanishing claim";
    return finish("check-regular", in, body, all ? 0 : 1, summary);
  });
}

// ---------------------------------------------------------------------------
// Equivalence suite

struct EquivTrial {
  FpFunctor functor;
  bool roundtrip = false;
  bool ring_roundtrip = false;
  bool presentation_to_ring = false;
  bool presentation_to_functor = false;
  bool kernel_to_ring = false;
  bool kernel_to_functor = false;
  bool epi = false;
  bool direct_sum = false;
  bool naturality = false;
  bool ok() const {
    return roundtrip && ring_roundtrip && presentation_to_ring && presentation_to_functor && kernel_to_ring &&
           kernel_to_functor && epi && direct_sum && naturality;
  }
};

inline FpFunctor random_functor(const ZCategory& C, std::mt19937_64& rng) {
  auto tuple = [&](std::size_t len) {
    TupleObject t;
    for (std::size_t i = 0; i < len; ++i) t.components.push_back(rng() % C.size());
    return t;
  };
  const TupleObject x = tuple(rng() % 3);
  const TupleObject y = tuple(1 + rng() % 2);
  MatMorphism P = mat_zero(C, x, y);
  for (auto& e : P.entries)
    for (auto& v : e) v = static_cast<long>(rng() % 5) - 2;
  return FpFunctor{canonical(C, std::move(P))};
}

/// Round trips, exactness transport both ways on the presentation pair
/// hom(-,x) -> hom(-,y) -> F and the kernel pair hom(-,x1) -> hom(-,x) -> hom(-,y),
/// epimorphisms, direct sums and naturality.
inline std::vector<EquivTrial> equivalence_suite(const ZCategory& C, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RingPresentation A = build_ring(C);
  std::vector<FpFunctor> fs;
  for (std::size_t t = 0; t < trials; ++t) fs.push_back(random_functor(C, rng));
  std::vector<EquivTrial> out;
  for (std::size_t t = 0; t < trials; ++t) {
    const FpFunctor& F = fs[t];
    EquivTrial r{F};
    r.roundtrip = roundtrip_check(C, A, F).ok();
    r.ring_roundtrip = ring_roundtrip_check(C, A, to_ring_module(C, A, F)).ok();
    const FunctorMap pres{representable(C, F.relations()), representable(C, F.generators()), F.presentation};
    const FunctorMap proj{representable(C, F.generators()), F, mat_identity(C, F.generators())};
    r.presentation_to_ring = transport_to_ring(C, A, pres, proj).ok();
    r.presentation_to_functor =
        transport_to_functor(C, A, to_ring_module_map(C, A, pres), to_ring_module_map(C, A, proj)).ok();
    const PseudoKernel k = pseudo_kernel(C, F.presentation);
    const FunctorMap inc{representable(C, k.x), representable(C, F.relations()), k.map};
    r.kernel_to_ring = transport_to_ring(C, A, inc, pres).ok();
    r.kernel_to_functor = transport_to_functor(C, A, to_ring_module_map(C, A, inc), to_ring_module_map(C, A, pres)).ok();
    r.epi = epi_transport_check(C, A, proj);
    r.direct_sum = direct_sum_check(C, A, F, fs[(t + 1) % trials]);
    r.naturality = naturality_check(C, A, proj);
    out.push_back(std::move(r));
  }
  return out;
}

inline Outcome cmd_equiv(const std::string& spec, std::size_t trials, std::uint64_t seed) {
  return guarded("equiv", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    const auto results = equivalence_suite(C, trials, seed);
    json list = json::array();
    std::size_t passed = 0;
    for (std::size_t t = 0; t < results.size(); ++t) {
      const auto& r = results[t];
      passed += r.ok();
      list.push_back(json{{"trial", t},
                          {"presentation", to_json(C, r.functor.presentation)},
                          {"roundtrip", r.roundtrip},
                          {"ring_roundtrip", r.ring_roundtrip},
                          {"exact_presentation_to_ring", r.presentation_to_ring},
                          {"exact_presentation_to_functor", r.presentation_to_functor},
                          {"exact_kernel_to_ring", r.kernel_to_ring},
                          {"exact_kernel_to_functor", r.kernel_to_functor},
                          {"epi", r.epi},
                          {"direct_sum", r.direct_sum},
                          {"naturality", r.naturality},
                          {"ok", r.ok()}});
    }
    const bool all = passed == results.size();
    json body{{"verdict", all ? "pass" : "fail"},
              {"seed", std::to_string(seed)},
              {"trials", list},
              {"verified", {{"passed", passed}, {"trials", results.size()}}}};
    return finish("equiv", in, body, all ? 0 : 1,
                  std::to_string(passed) + "/" + std::to_string(results.size()) + " trials pass");
  });
}

// ---------------------------------------------------------------------------

inline Outcome cmd_k0(const std::string& spec, const std::optional<std::string>& witness,
                      const std::optional<std::string>& sample) {
  return guarded("k0", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    const RingPresentation A = build_ring(C);
    SemisimpleWitness w;
    if (witness) {
      w = witness_from_json(in.load(*witness));
      if (w.images.size() != A.ngens())
        throw ParseError("witness: expected " + std::to_string(A.ngens()) + " images, one per ring basis element");
    } else {
      auto cw = canonical_witness(C, A);
      if (!cw) throw BuilderError("no semisimple witness of the supported shape; supply one with --witness");
      w = std::move(*cw);
    }
    const std::optional<VerifiedWitness> vw = certify_witness(A, w);
    std::vector<IdemObject> S;
    if (sample) {
      S = sample_from_json(C, in.load(*sample));
    } else {
      for (ObjectId a = 0; a < C.size(); ++a) S.push_back(idem_identity(C, TupleObject::single(a)));
    }
    const BridgeReport bridge = k0_bridge_check(C, *vw, S);
    json classes = json::array();
    for (std::size_t i = 0; i < S.size(); ++i) {
      json c = json::array();
      for (const auto& x : bridge.entries[i].ring_side) c.push_back(to_json(x));
      classes.push_back(json{{"projective", to_json(C, S[i])},
                             {"class", c},
                             {"category_side_agrees", bridge.entries[i].agree}});
    }
    json blocks = json::array();
    for (const auto& b : w.blocks) blocks.push_back(b.str());
    const std::string group = "Z^" + std::to_string(w.blocks.size());
    const NegativeKReport nk = negative_k_report(C, nullptr, &*vw);
    const int code = bridge.ok() ? 0 : 1;
    json body{{"verdict", bridge.ok() ? "pass" : "fail"},
              {"k0", {{"group", group}, {"blocks", blocks}, {"convention", "[P] -> block-rank vector"}}},
              {"classes", classes},
              {"verified",
               {{"witness_products_checked", vw->report().products_checked},
                {"bridge", bridge.ok()},
                {"additivity_checks", bridge.additivity_checks},
                {"additive", bridge.additive}}},
};
    attach_negative_k(body, nk);
    std::string summary = "K0 = " + group + " (";
    for (std::size_t i = 0; i < w.blocks.size(); ++i) summary += (i ? " x " : "") + w.blocks[i].str();
    summary += "), bridge " + std::string(bridge.ok() ? "ok" : "FAILED");
    return finish("k0", in, body, code, summary);
  });
}

// ---------------------------------------------------------------------------

struct BuildOptions {
  std::string ring;                     // ring: "Z", "Z/m", "Z[Cm]"
  std::size_t cyclic = 0;               // graded
  std::vector<std::string> nilpotent;   // graded: base ring and exponent
  bool truncate_powers = false;
  std::string group, subgroups;         // orbit
  bool allow_partial_family = false;
  std::vector<std::string> primes;      // sumfields
};

inline RingData parse_ring(const std::string& s) {
  if (s == "Z") return integers_ring();
  if (s.rfind("Z/", 0) == 0) {
    Int m;
    if (m.set_str(s.substr(2), 10) != 0) throw GrammarError("ring: bad modulus in " + s);
    return integers_mod_ring(m);
  }
  if (s.rfind("Z[C", 0) == 0 && s.size() > 4 && s.back() == ']') {
    try {
      return cyclic_group_ring(std::stoul(s.substr(3, s.size() - 4)));
    } catch (const std::logic_error&) {
      throw GrammarError("ring: bad group order in " + s);
    }
  }
  throw GrammarError("ring must be Z, Z/m or Z[Cm], got '" + s + "'");
}

inline Outcome cmd_build(const std::string& kind, const BuildOptions& opt) {
  return guarded("build", [&](Inputs& in) {
    std::optional<ZCategory> C;
    if (kind == "ring") {
      C = from_unital_ring(parse_ring(opt.ring));
    } else if (kind == "graded") {
      if (opt.cyclic == 0) throw GrammarError("graded: --cyclic n is required");
      if (opt.nilpotent.size() != 2) throw GrammarError("graded: --nilpotent-ring takes a base ring and an exponent");
      std::size_t e = 0;
      try {
        e = std::stoul(opt.nilpotent[1]);
      } catch (const std::logic_error&) {
        throw GrammarError("graded: exponent is not a number");
      }
      if (e != opt.cyclic) throw GrammarError("graded: exponent must equal the cyclic grading order");
      C = graded_category(cyclic_power_ring(parse_ring(opt.nilpotent[0]), opt.cyclic, opt.truncate_powers));
    } else if (kind == "orbit") {
      if (opt.group.empty() || opt.subgroups.empty()) throw GrammarError("orbit: --group and --subgroups are required");
      PermGroupData d = parse_perm_group(opt.group);
      parse_family(d, opt.subgroups);
      C = orbit_category(d, OrbitOptions{opt.allow_partial_family});
    } else if (kind == "sumfields") {
      std::vector<Int> ps;
      for (const auto& s : opt.primes) {
        Int p;
        if (p.set_str(s, 10) != 0) throw GrammarError("sumfields: '" + s + "' is not a number");
        ps.push_back(p);
      }
      C = sum_of_fields(ps);
    } else {
      throw GrammarError("build: kind must be ring, graded, orbit or sumfields");
    }
    json body{{"verdict", "built"}, {"spec", to_json(C->data())}, {"objects", C->objects()}};
    return finish("build", in, body, 0, "built " + kind + " category with " + std::to_string(C->size()) + " objects");
  });
}

inline Outcome cmd_pseudo_kernel(const std::string& spec, const std::string& morphisms,
                                 const std::optional<std::string>& name, std::size_t depth) {
  return guarded("pseudo-kernel", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    if (depth == 0) throw std::invalid_argument("--depth must be at least 1");
    const auto ms = morphisms_from_json(C, in.load(morphisms));
    if (ms.empty()) throw ParseError("morphisms file is empty");
    auto it = ms.begin();
    if (name) {
      it = std::find_if(ms.begin(), ms.end(), [&](const auto& m) { return m.first == *name; });
      if (it == ms.end()) throw ParseError("no morphism named " + *name);
    }
    const KernelChain chain = pseudo_n_kernel(C, it->second, depth);
    json sizes = json::array();
    for (std::size_t i = 1; i <= chain.length(); ++i) sizes.push_back(chain.map(i).src.size());
    json body{{"verdict", chain.certified() ? "exact" : "not-exact"},
              {"morphism", it->first},
              {"chain", to_json(C, chain)},
              {"verified", {{"exact_at_every_object", chain.certified()}, {"stage_sizes", sizes}}}};
    return finish("pseudo-kernel", in, body, chain.certified() ? 0 : 1,
                  it->first + ": " + std::to_string(depth) + " stage(s), sizes " + sizes.dump());
  });
}

inline Outcome cmd_quasi_inverse(const std::string& spec, const std::string& morphisms) {
  return guarded("quasi-inverse", [&](Inputs& in) {
    const ZCategory C = in.category(spec);
    const auto ms = morphisms_from_json(C, in.load(morphisms));
    json list = json::array();
    std::size_t found = 0;
    for (const auto& [key, f] : ms) {
      json e{{"key", key}, {"morphism", to_json(C, f)}};
      if (auto h = find_quasi_inverse(C, f)) {
        const auto cert = verify_quasi_inverse(C, f, *h);
        ++found;
        e["quasi_inverse"] = to_json(C, *h);
        e["certificate"] = json{{"fhf_equals_f", cert.equation},
                                {"section_defined", cert.section_defined},
                                {"section_splits", cert.section_splits}};
        e["verdict"] = cert.ok() ? "coker f_* projective" : "certificate failed";
      } else {
        e["quasi_inverse"] = nullptr;
        e["verdict"] = "no h with f h f = f";
      }
      list.push_back(e);
    }
    const bool all = found == ms.size();
    json body{{"verdict", all ? "all-found" : "some-missing"}, {"morphisms", list},
              {"verified", {{"found", found}, {"tested", ms.size()}}}};
    return finish("quasi-inverse", in, body, all ? 0 : 1,
                  std::to_string(found) + "/" + std::to_string(ms.size()) + " quasi-inverses found");
  });
}

}  // namespace zlincat::cli
