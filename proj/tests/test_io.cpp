#include "corpus.hpp"
#include "zlincat/zlincat.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace zlincat;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

bool same_data(const CategoryData& a, const CategoryData& b) {
  if (a.objects != b.objects || a.identities != b.identities || a.comp != b.comp || a.metadata != b.metadata) return false;
  for (std::size_t i = 0; i < a.homs.size(); ++i)
    if (a.homs[i].ngens() != b.homs[i].ngens() || a.homs[i].relations() != b.homs[i].relations()) return false;
  return true;
}

}  // namespace

TEST_CASE("category specs round trip through JSON", "[io]") {
  for (const auto& [name, C] : corpus::all()) {
    INFO(name);
    const json j = to_json(C.data());
    const CategoryData back = category_data_from_json(parse_json(j.dump(), name));
    CHECK(same_data(C.data(), back));
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("integers are decimal strings and accept numbers on input", "[io]") {
  const Int big("123456789012345678901234567890");
  CHECK(to_json(big) == json("123456789012345678901234567890"));
  CHECK(int_from_json(json("-42"), "x") == -42);
  CHECK(int_from_json(json(7), "x") == 7);
  CHECK(int_from_json(to_json(big), "x") == big);
  CHECK_THROWS_AS(int_from_json(json("4x"), "x"), ParseError);
  CHECK_THROWS_AS(int_from_json(json(1.5), "x"), ParseError);
  CHECK_THROWS_AS(int_from_json(json::array(), "x"), ParseError);
}

TEST_CASE("hand-written specs parse with defaults", "[io]") {
  const json j = json::parse(R"({
    "objects": ["a", "b"],
    "hom": {"a->a": {"generators": 1}, "b->b": {"generators": 1, "relations": [[3]]}},
    "identity": {"a": [1], "b": ["1"]},
    "composition": {"a->a->a": [[[1]]], "b->b->b": [[[1]]]}
  })");
  const ZCategory C = ZCategory::create(category_data_from_json(j));
  CHECK(C.hom(0, 1).ngens() == 0);
  CHECK(C.hom(1, 1).order() == 3);
  CHECK(C.identity(1).coeffs == iv({1}));
}

TEST_CASE("malformed specs are parse errors", "[io]") {
  const std::string good = to_json(corpus::z().data()).dump();
  CHECK_THROWS_AS(parse_json(good.substr(0, good.size() / 2), "t"), ParseError);
  CHECK_THROWS_AS(parse_json("", "t"), ParseError);
  CHECK_THROWS_AS(category_data_from_json(json::parse(R"({"hom": {}})")), ParseError);
  CHECK_THROWS_AS(category_data_from_json(json::parse(R"({"objects": "x"})")), ParseError);
  CHECK_THROWS_AS(category_data_from_json(json::parse(R"({"objects": ["x"], "hom": {"x->y": {"generators": 1}}})")),
                  ParseError);
  CHECK_THROWS_AS(category_data_from_json(json::parse(R"({"objects": ["x"], "hom": {"xy": {"generators": 1}}})")),
                  ParseError);
  CHECK_THROWS_AS(category_data_from_json(json::parse(R"({"objects": ["x"], "hom": {"x->x": {"generators": -1}}})")),
                  ParseError);
  CHECK_THROWS_AS(
      category_data_from_json(json::parse(R"({"objects": ["x"], "hom": {"x->x": {"generators": 1}}, "identity": {"x": [1, 2]}})")),
      ParseError);
  CHECK_THROWS_AS(read_file("/nonexistent/zlincat.json"), ParseError);
}

TEST_CASE("matrix morphisms, witnesses and samples round trip", "[io]") {
  std::mt19937_64 rng(101);
  for (const auto& [name, C] : corpus::all()) {
    INFO(name);
    for (int t = 0; t < 10; ++t) {
      const MatMorphism m = corpus::random_mat(C, corpus::random_tuple(C, rng() % 3, rng),
                                               corpus::random_tuple(C, rng() % 3, rng), rng, 5);
      CHECK(matmorphism_from_json(C, to_json(C, m), "m") == m);
    }
    std::vector<IdemObject> S;
    for (int t = 0; t < 4; ++t) {
      const TupleObject c = corpus::random_tuple(C, 1 + rng() % 2, rng);
      S.push_back(IdemObject{c, corpus::random_idempotent(C, c, rng)});
    }
    json list = json::array();
    for (const auto& P : S) list.push_back(to_json(C, P));
    const auto back = sample_from_json(C, json{{"sample", list}});
    REQUIRE(back.size() == S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      CHECK(back[i].carrier == S[i].carrier);
      CHECK(back[i].p == S[i].p);
    }
  }

  const auto C = corpus::ctilde(2);
  const auto w = canonical_witness(C, build_ring(C));
  REQUIRE(w);
  const SemisimpleWitness back = witness_from_json(to_json(*w));
  CHECK(back.blocks == w->blocks);
  CHECK(back.images == w->images);
  CHECK_THROWS_AS(witness_from_json(json::parse(R"({"blocks": [{"kind": "F", "p": 4, "size": 1}], "images": []})")),
                  ParseError);
  CHECK_THROWS_AS(witness_from_json(json::parse(R"({"blocks": [], "images": []})")), ParseError);

  const json not_idem{{"sample", {{{"carrier", {"0"}}, {"idempotent", {{{"2"}}}}}}}};
  CHECK_THROWS_AS(sample_from_json(C, not_idem), ParseError);
  CHECK_THROWS_AS(sample_from_json(C, json{{"sample", {{{"carrier", {"nope"}}}}}}), ParseError);
}

TEST_CASE("stored chains replay, and tampering is caught", "[io][resolutions]") {
  std::mt19937_64 rng(103);
  for (const auto& [name, C] : corpus::all()) {
    INFO(name);
    const MatMorphism f = corpus::random_mat(C, corpus::random_tuple(C, 1, rng), corpus::random_tuple(C, 2, rng), rng, 2);
    const KernelChain chain = pseudo_n_kernel(C, f, 3);
    const KernelChain back = chain_from_json(C, to_json(C, chain));
    CHECK(back.stages == chain.stages);
    CHECK(replay_chain(C, back));

    const TupleObject P = corpus::random_tuple(C, 2, rng);
    const IdemObject Q{P, corpus::random_idempotent(C, P, rng)};
    const KernelChain ic = pseudo_n_kernel(C, Q, corpus::random_mat(C, P, corpus::random_tuple(C, 1, rng), rng, 2), 2);
    CHECK(replay_chain(C, chain_from_json(C, to_json(C, ic))));
  }

  const auto Z4 = corpus::zmod(4);
  const MatMorphism two{TupleObject::single(0), TupleObject::single(0), {iv({2})}};
  KernelChain chain = pseudo_n_kernel(Z4, two, 2);
  json j = to_json(Z4, chain);
  j["maps"][2]["entries"][0][0] = json::array({"1"});
  CHECK_FALSE(replay_chain(Z4, chain_from_json(Z4, j)));
  j = to_json(Z4, chain);
  j["maps"][1]["entries"][0][0] = json::array({"0"});
  CHECK_FALSE(replay_chain(Z4, chain_from_json(Z4, j)));
}

TEST_CASE("ring dumps list the unit and products", "[io][ring]") {
  const auto C = corpus::sumfields({2, 3});
  const json j = to_json(build_ring(C));
  CHECK(j["rank"] == 2);
  CHECK(j["order"] == "6");
  CHECK(j["unit"] == json::array({"1", "1"}));
  CHECK(j["products"].size() == 2);
}
