// Acceptance run: one PASS/FAIL line per criterion, with wall time against
// the allowed budget.  Exit status is nonzero when any criterion fails.

#include "commands.hpp"
#include "corpus.hpp"
#include "oracles.hpp"
#include "orbit_oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

using namespace zlincat;

namespace {

const std::string data_dir = ZLINCAT_DATA;
std::string data(const std::string& f) { return data_dir + "/" + f; }

struct Result {
  bool ok = true;
  std::string detail;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

MatMorphism times(long m) {
  const TupleObject one = TupleObject::single(0);
  return MatMorphism{one, one, {iv({m})}};
}

// 1 -------------------------------------------------------------------------
Result snf_suite() {
  Result r;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> entry(-100, 100);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int t = 0; t < 200 && r.ok; ++t) {
    IntMatrix A(dim(rng), dim(rng));
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = entry(rng);
    const SnfDecomposition s = snf(A);
    const std::string at = "matrix " + std::to_string(t);
    r.require(s.U * A * s.V == s.D, at + ": U A V != D");
    r.require(abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1, at + ": transform not unimodular");
    r.require(s.U * s.U_inv == IntMatrix::identity(A.rows()) && s.V * s.V_inv == IntMatrix::identity(A.cols()),
              at + ": stored inverses wrong");
    for (std::size_t i = 0; i < s.D.rows(); ++i)
      for (std::size_t j = 0; j < s.D.cols(); ++j)
        if (i != j) r.require(s.D(i, j) == 0, at + ": D not diagonal");
    const auto d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      r.require(d[i] >= 0, at + ": negative invariant");
      if (i + 1 < d.size()) r.require(d[i] == 0 ? d[i + 1] == 0 : d[i + 1] % d[i] == 0, at + ": divisor chain broken");
    }
  }
  r.notes.push_back("200 matrices up to 6x6, entries in [-100, 100]");
  return r;
}

// 2 -------------------------------------------------------------------------
Result example_one() {
  Result r;
  for (std::size_t n : {2u, 3u}) {
    const ZCategory C = graded_category(cyclic_power_ring(integers_ring(), n));
    const RingPresentation A = build_ring(C);
    const auto w = canonical_witness(C, A);
    r.require(w.has_value(), "n=" + std::to_string(n) + ": no witness");
    if (!w) continue;
    r.require(w->blocks == std::vector<MatrixBlock>{MatrixBlock{MatrixBlock::Kind::Integers, 0, n}},
              "n=" + std::to_string(n) + ": target is not M_n(Z)");
    const RingIsoReport rep = verify_witness_report(A, *w);
    r.require(rep.ok, "n=" + std::to_string(n) + ": " + rep.failure);
    r.require(rep.products_checked == n * n * n * n, "n=" + std::to_string(n) + ": wrong number of products");
    r.notes.push_back("n=" + std::to_string(n) + ": " + std::to_string(rep.products_checked) + " basis products");
  }
  return r;
}

// 3 -------------------------------------------------------------------------
Result truncation() {
  Result r;
  const std::pair<const char*, ZCategory> cases[] = {{"Z", corpus::z()}, {"Z[C2]", corpus::zc2()}};
  const std::size_t ranks[] = {9, 18};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& [name, C] = cases[i];
    const auto [R, t] = truncated_additive_ring(C, 2);
    r.require(t.ok(), std::string(name) + ": " + t.failure);
    r.require(R.ngens() == ranks[i] && t.left.rank == ranks[i], std::string(name) + ": rank differs");
    r.notes.push_back(std::string(name) + ": rank " + std::to_string(R.ngens()));
  }
  return r;
}

// 4 -------------------------------------------------------------------------
Result equivalence() {
  Result r;
  std::size_t cats = 0;
  for (const auto& [name, C] : corpus::all()) {
    const auto trials = cli::equivalence_suite(C, 20, 2024);
    std::size_t passed = 0;
    for (const auto& t : trials) passed += t.ok();
    r.require(passed == 20, name + ": " + std::to_string(passed) + "/20");
    ++cats;
  }
  r.require(cats >= 5, "fewer than five categories");
  r.notes.push_back(std::to_string(cats) + " categories x 20 functors");
  return r;
}

// 5 -------------------------------------------------------------------------
Result splitting_agreement() {
  Result r;
  std::mt19937_64 rng(71);
  std::size_t total = 0, split_only = 0, qi_only = 0, stage_agree = 0;
  std::map<std::string, std::size_t> where;
  for (const auto& [name, C] : corpus::all()) {
    for (int trial = 0; trial < 50; ++trial) {
      const MatMorphism f = corpus::random_mat(C, corpus::random_tuple(C, 1 + rng() % 2, rng),
                                               corpus::random_tuple(C, 1 + rng() % 2, rng), rng, 2);
      const auto chain = pseudo_n_kernel(C, f, 1);
      const bool split = find_splitting(C, chain, 1).has_value();
      const bool qi = find_quasi_inverse(C, f).has_value();
      ++total;
      stage_agree += split == find_quasi_inverse(C, chain.map(1)).has_value();
      if (split && !qi) {
        ++split_only;
        ++where[name];
      }
      if (qi && !split) ++qi_only;
    }
  }
  r.require(split_only == 0 && qi_only == 0,
            std::to_string(split_only + qi_only) + "/" + std::to_string(total) + " morphisms disagree");
  std::string cats;
  for (const auto& [n, c] : where) cats += (cats.empty() ? "" : ", ") + n + " " + std::to_string(c);
  r.notes.push_back("split at k=1 without f h f = f: " + std::to_string(split_only) + (cats.empty() ? "" : " (" + cats + ")"));
  r.notes.push_back("f h f = f without split at k=1: " + std::to_string(qi_only));
  r.notes.push_back("split at k=1 iff the first kernel stage f1 has a quasi-inverse: " + std::to_string(stage_agree) +
                    "/" + std::to_string(total));
  r.notes.push_back("k=1 splitting bounds pd(coker f_*) by 1; f h f = f says pd 0 (e.g. times 2 over Z)");
  return r;
}

// 6 -------------------------------------------------------------------------
Result pd_certificates() {
  Result r;
  const auto Z = corpus::z();
  std::vector<std::pair<std::string, MatMorphism>> ms;
  for (long m = 2; m <= 10; ++m) ms.emplace_back("times" + std::to_string(m), times(m));
  auto rep = check_regular(Z, ms, 2);
  for (const auto& e : rep.entries)
    r.require(e.witness && e.witness->depth == 1 && e.section_verified, "Z " + e.key + ": no depth-1 witness");

  const auto Z5 = corpus::zmod(5);
  rep = check_regular(Z5, basis_morphisms(Z5), 2);
  std::size_t nonzero = 0;
  for (const auto& e : rep.entries) {
    if (mat_is_zero(Z5, e.morphism)) continue;
    ++nonzero;
    r.require(e.witness && e.witness->depth == 1 && e.section_verified, "Z/5 " + e.key + ": no depth-1 witness");
  }
  r.require(nonzero > 0, "Z/5: no basis morphisms");

  const auto Z4 = corpus::zmod(4);
  rep = check_regular(Z4, {{"times2", times(2)}}, 6);
  r.require(!rep.all_certified() && rep.entries[0].chain.length() == 6, "Z/4 times 2 not inconclusive at depth 6");
  const KernelChain& chain = rep.entries[0].chain;
  for (std::size_t k = 1; k <= 6; ++k) {
    const long prev = chain.map(k - 1).entries[0][0].get_si(), fk = chain.map(k).entries[0][0].get_si();
    for (long alpha = 0; alpha < 4; ++alpha)
      r.require(!(oracle::mod(prev * alpha - prev, 4) == 0 && oracle::mod(alpha * fk, 4) == 0),
                "Z/4: alpha=" + std::to_string(alpha) + " solves stage " + std::to_string(k));
    r.require(!find_splitting(Z4, chain, k).has_value(), "Z/4: solver found a witness at stage " + std::to_string(k));
  }
  r.notes.push_back("Z times 2..10 and Z/5 basis at depth 1; Z/4 times 2 infeasible for all 4 alphas at k=1..6");
  return r;
}

// 7 -------------------------------------------------------------------------
Result orbit_ingestion() {
  using namespace orbit_oracle;
  Result r;
  const auto z2 = family("perm:2:(12)", "e;full");
  const ZCategory C = orbit_category(z2.d);
  const std::size_t expect[] = {2, 1, 0, 1};
  for (ObjectId a = 0; a < 2; ++a)
    for (ObjectId b = 0; b < 2; ++b) {
      const auto X = cosets(z2.G, z2.members[a]), Y = cosets(z2.G, z2.members[b]);
      r.require(C.hom(a, b).ngens() == expect[a * 2 + b], "Z2: rank pattern differs");
      r.require(C.hom(a, b).ngens() == count_all_functions(z2.G, X, Y), "Z2: rank differs from enumeration");
    }
  const auto X = cosets(z2.G, z2.members[0]);
  const auto maps = equivariant_maps(z2.G, z2.members[0], z2.members[0]);
  std::vector<std::vector<std::size_t>> fn;
  for (const auto& g : maps) fn.push_back(as_function(g, z2.G, z2.members[0], X, X));
  const RingData group_ring = cyclic_group_ring(2);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t h = 0; h < 2; ++h) {
      std::vector<std::size_t> comp(X.cosets.size());
      for (std::size_t c = 0; c < comp.size(); ++c) comp[c] = fn[g][fn[h][c]];
      const auto idx = static_cast<std::size_t>(std::find(fn.begin(), fn.end(), comp) - fn.begin());
      r.require(compose(C, C.generator(0, 0, g), C.generator(0, 0, h)).coeffs == unit_vector(2, idx),
                "Z2: End(G/e) product differs from composition of maps");
      r.require(C.data().comp[0][g * 2 + h] == group_ring.mult[g][h], "Z2: End(G/e) is not Z[Z2]");
    }

  const auto s3 = family("perm:3:(12),(123)", "e;(123);full");
  const ZCategory S = orbit_category(s3.d, OrbitOptions{true});
  for (ObjectId a = 0; a < 3; ++a)
    for (ObjectId b = 0; b < 3; ++b) {
      const auto P = cosets(s3.G, s3.members[a]), Q = cosets(s3.G, s3.members[b]);
      r.require(S.hom(a, b).ngens() == count_all_functions(s3.G, P, Q), "S3: rank differs from enumeration");
    }
  std::string ranks;
  for (ObjectId a = 0; a < 3; ++a)
    for (ObjectId b = 0; b < 3; ++b) ranks += (ranks.empty() ? "" : ",") + std::to_string(S.hom(a, b).ngens());
  r.notes.push_back("S3 {e, A3, S3} hom ranks " + ranks);
  return r;
}

// 8 -------------------------------------------------------------------------
Result k0_bridge() {
  Result r;
  std::mt19937_64 rng(8);
  const std::pair<const char*, ZCategory> cases[] = {
      {"ctilde2", corpus::ctilde(2)}, {"ctilde3", corpus::ctilde(3)}, {"F2xF3", corpus::sumfields({2, 3})}};
  for (const auto& [name, C] : cases) {
    const RingPresentation A = build_ring(C);
    const auto w = canonical_witness(C, A);
    r.require(w.has_value(), std::string(name) + ": no witness");
    if (!w) continue;
    const VerifiedWitness vw = certify_witness(A, *w);
    std::vector<IdemObject> S;
    for (ObjectId a = 0; a < C.size(); ++a) S.push_back(idem_identity(C, TupleObject::single(a)));
    while (S.size() < 10) {
      const TupleObject t = corpus::random_tuple(C, 1 + rng() % 3, rng);
      S.push_back(IdemObject{t, corpus::random_idempotent(C, t, rng)});
    }
    const BridgeReport b = k0_bridge_check(C, vw, S);
    r.require(b.ok(), std::string(name) + ": routes disagree or not additive");
    r.require(b.entries.size() == 10 && b.additivity_checks == 9, std::string(name) + ": sample size");
  }
  r.notes.push_back("10 projectives per category, 9 direct sums each");
  return r;
}

// 9 -------------------------------------------------------------------------
const std::regex negative_k(R"(K_(\{?-|i\b|\{i))");

void scan(const json& j, bool in_claim, Result& r, std::size_t& hits, const std::string& where) {
  if (j.is_string()) {
    if (std::regex_search(j.get<std::string>(), negative_k)) {
      ++hits;
      r.require(in_claim, where + ": negative K statement outside a cited claim");
    }
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      r.require(!std::regex_search(k, negative_k), where + ": negative K used as a key");
      scan(v, in_claim, r, hits, where + "." + k);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) scan(v, in_claim, r, hits, where);
  }
}

void gate(const json& report, Result& r, std::size_t& claims) {
  const std::string where = report.value("command", std::string("?"));
  json rest = report;
  rest.erase("cited");
  std::size_t stray = 0;
  scan(rest, false, r, stray, where);
  for (const auto& c : report.at("cited")) {
    r.require(c.value("tag", "") == "cited", where + ": claim without the cited tag");
    r.require(c.value("theorem", "") == "teofo", where + ": claim without the theorem reference");
    const std::string tier = c.value("tier", "");
    r.require(tier == "certified-family" || tier == "bounded-depth-evidence", where + ": claim without a tier");
    std::size_t hits = 0;
    scan(c, true, r, hits, where + ".cited");
    claims += hits;
  }
  const std::string text = report.dump();
  std::size_t grep = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), negative_k); it != std::sregex_iterator(); ++it) ++grep;
  std::size_t in_cited = 0;
  const std::string ctext = report.at("cited").dump();
  for (auto it = std::sregex_iterator(ctext.begin(), ctext.end(), negative_k); it != std::sregex_iterator(); ++it)
    ++in_cited;
  r.require(grep == in_cited, where + ": negative K text outside the cited field");
}

Result honesty_gate() {
  Result r;
  std::vector<json> reports;
  const char* specs[] = {"z.json", "zmod4.json", "zmod5.json", "z2group.json", "ctilde2.json",
                         "ctilde3.json", "sumfields_2_3.json", "orbit_z2.json", "orbit_s3.json"};
  for (const char* s : specs) {
    reports.push_back(cli::cmd_validate(data(s)).report);
    reports.push_back(cli::cmd_ring(data(s), 0).report);
    reports.push_back(cli::cmd_k0(data(s), std::nullopt, std::nullopt).report);
    cli::CheckRegularOptions opt;
    opt.basis = true;
    opt.depth = 2;
    reports.push_back(cli::cmd_check_regular(data(s), opt).report);
    reports.push_back(cli::cmd_equiv(data(s), 2, 5).report);
  }
  cli::CheckRegularOptions opt;
  opt.morphisms = data("z_times.json");
  opt.depth = 2;
  reports.push_back(cli::cmd_check_regular(data("z.json"), opt).report);
  opt.morphisms = data("zmod4_times2.json");
  opt.depth = 6;
  const json inconclusive = cli::cmd_check_regular(data("zmod4.json"), opt).report;
  r.require(inconclusive.at("cited").empty(), "inconclusive run still cites a vanishing result");
  reports.push_back(inconclusive);
  reports.push_back(cli::cmd_k0(data("ctilde2.json"), data("ctilde2_bad_witness.json"), std::nullopt).report);
  reports.push_back(cli::cmd_quasi_inverse(data("z.json"), data("z_times.json")).report);
  reports.push_back(cli::cmd_pseudo_kernel(data("zmod4.json"), data("zmod4_times2.json"), std::nullopt, 3).report);

  std::size_t claims = 0;
  for (const auto& rep : reports) {
    r.require(rep.contains("verified") && rep.contains("cited"), "report without verified/cited split");
    gate(rep, r, claims);
  }
  r.require(claims > 0, "no negative K claim was emitted at all");
  r.notes.push_back(std::to_string(reports.size()) + " reports, " + std::to_string(claims) + " cited statements");
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {"SNF suite", 5, snf_suite},
      {"graded example reproduces M_n(Z)", 1, example_one},
      {"truncated additive ring identification", 2, truncation},
      {"functor/module equivalence suite", 30, equivalence},
      {"k=1 splitting iff quasi-inverse", 30, splitting_agreement},
      {"projective-dimension certificates", 10, pd_certificates},
      {"orbit-category ingestion", 5, orbit_ingestion},
      {"K0 bridge", 5, k0_bridge},
      {"honesty gate", 1, honesty_gate},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget) r.require(false, "over the time budget");
    char line[256];
    std::snprintf(line, sizeof line, "%s %d. %s (%.2f s / %.0f s)", r.ok ? "PASS" : "FAIL", static_cast<int>(i + 1),
                  c.name, secs, c.budget);
    std::cout << line << (r.ok ? "" : ": " + r.detail) << "\n";
    for (const auto& n : r.notes) std::cout << "       " << n << "\n";
    failed += !r.ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
