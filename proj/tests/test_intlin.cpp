#include "oracles.hpp"
#include "zlincat/intlin.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace zlincat;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntMatrix diag_relations(std::initializer_list<long> orders) {
  const std::size_t n = orders.size();
  IntMatrix r(0, n);
  std::size_t i = 0;
  for (long m : orders) {
    if (m != 0) {
      IntVector row = zero_vector(n);
      row[i] = m;
      r.append_row(row);
    }
    ++i;
  }
  return r;
}

FpAbelianGroup product_of_cyclics(const std::vector<long>& orders) {
  const std::size_t n = orders.size();
  IntMatrix r(0, n);
  for (std::size_t i = 0; i < n; ++i)
    if (orders[i] != 0) {
      IntVector row = zero_vector(n);
      row[i] = orders[i];
      r.append_row(row);
    }
  return FpAbelianGroup(n, r);
}

bool is_diagonal_chain(const IntMatrix& d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && sgn(d(i, j)) != 0) return false;
  const std::size_t k = std::min(d.rows(), d.cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (sgn(d(i, i)) < 0) return false;
    if (i + 1 < k) {
      if (sgn(d(i, i)) == 0 && sgn(d(i + 1, i + 1)) != 0) return false;
      if (sgn(d(i, i)) != 0 && !mpz_divisible_p(d(i + 1, i + 1).get_mpz_t(), d(i, i).get_mpz_t())) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("snf of the identity is trivial", "[intlin][snf]") {
  const auto d = snf(IntMatrix::identity(2));
  CHECK(d.D == IntMatrix::identity(2));
  CHECK(d.U == IntMatrix::identity(2));
  CHECK(d.V == IntMatrix::identity(2));
}

TEST_CASE("snf of [[2,4],[6,8]] is diag(2,4)", "[intlin][snf]") {
  // d1 = gcd of entries = 2, d1*d2 = |det| = 8
  const IntMatrix a{{2, 4}, {6, 8}};
  const auto d = snf(a);
  CHECK(d.D == IntMatrix({{2, 0}, {0, 4}}));
  CHECK(d.U * a * d.V == d.D);
}

TEST_CASE("snf of a zero matrix", "[intlin][snf]") {
  const IntMatrix z(3, 2);
  const auto d = snf(z);
  CHECK(d.D.is_zero());
  CHECK(d.rank == 0);
}

TEST_CASE("snf invariants on random matrices", "[intlin][snf][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<long>(rng() % 201) - 100;
    const auto d = snf(a);
    REQUIRE(d.U * a * d.V == d.D);
    REQUIRE(abs(determinant(d.U)) == 1);
    REQUIRE(abs(determinant(d.V)) == 1);
    REQUIRE(d.U * d.U_inv == IntMatrix::identity(m));
    REQUIRE(d.V * d.V_inv == IntMatrix::identity(n));
    REQUIRE(is_diagonal_chain(d.D));
  }
}

TEST_CASE("snf is deterministic", "[intlin][snf]") {
  const IntMatrix a{{3, -7, 12}, {0, 5, 5}, {9, 1, -4}};
  CHECK(snf(a).U == snf(a).U);
  CHECK(snf(a).V == snf(a).V);
}

TEST_CASE("solve_z examples", "[intlin][solve]") {
  SECTION("identity") {
    auto x = solve_z(IntMatrix::identity(2), iv({7, -3}));
    REQUIRE(x);
    CHECK(*x == iv({7, -3}));
  }
  SECTION("parity obstruction") { CHECK_FALSE(solve_z(IntMatrix{{2}}, iv({3}))); }
  SECTION("Bezout") {
    const IntMatrix a{{2, 3}};
    // brute-force oracle: some solution with |x_i| <= 3 exists
    bool exists = false;
    oracle::for_each_in_box(2, 3, [&](const std::vector<long>& x) { exists |= 2 * x[0] + 3 * x[1] == 1; });
    REQUIRE(exists);
    auto x = solve_z(a, iv({1}));
    REQUIRE(x);
    CHECK(a.apply(*x) == iv({1}));
  }
  SECTION("dimension mismatch") { CHECK_THROWS_AS(solve_z(IntMatrix{{1, 2}}, iv({1, 2})), DimensionError); }
}

TEST_CASE("solve_z agrees with brute force on small systems", "[intlin][solve][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    IntMatrix a(2, 2);
    std::vector<std::vector<long>> am(2, std::vector<long>(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        am[i][j] = static_cast<long>(rng() % 7) - 3;
        a(i, j) = am[i][j];
      }
    const long b0 = static_cast<long>(rng() % 9) - 4, b1 = static_cast<long>(rng() % 9) - 4;
    // nonsingular systems have their unique rational solution inside |x| <= 4*3*2 when integral
    bool found = false;
    oracle::for_each_in_box(2, 40, [&](const std::vector<long>& x) {
      found |= am[0][0] * x[0] + am[0][1] * x[1] == b0 && am[1][0] * x[0] + am[1][1] * x[1] == b1;
    });
    const auto sol = solve_z(a, iv({b0, b1}));
    if (determinant(a) != 0) {
      CHECK(sol.has_value() == found);
    } else if (found) {
      CHECK(sol.has_value());
    }
    if (sol) CHECK(a.apply(*sol) == iv({b0, b1}));
  }
}

TEST_CASE("group invariants", "[intlin][group]") {
  CHECK(invariants(FpAbelianGroup::free(3)) == GroupInvariants{3, {}});
  CHECK(invariants(FpAbelianGroup(2, diag_relations({2, 0}))) == GroupInvariants{1, {Int(2)}});
  CHECK(FpAbelianGroup(1, IntMatrix{{1}}).is_trivial());
  // Z/2 x Z/3 = Z/6; Z/2 x Z/2 stays split
  CHECK(invariants(FpAbelianGroup(2, diag_relations({2, 3}))) == GroupInvariants{0, {Int(6)}});
  CHECK(invariants(FpAbelianGroup(2, diag_relations({2, 2}))) == GroupInvariants{0, {Int(2), Int(2)}});
}

TEST_CASE("canonical reduction decides element equality", "[intlin][group]") {
  const FpAbelianGroup g(2, IntMatrix{{2, 4}, {0, 6}});
  CHECK(g.reduce(iv({2, 4})) == iv({0, 0}));
  CHECK(g.equal_elements(iv({3, 1}), iv({1, -3})));
  CHECK_FALSE(g.equal_elements(iv({1, 0}), iv({0, 0})));
  CHECK(g.reduce(iv({-1, -1})) == g.reduce(iv({1, 3})));
}

TEST_CASE("kernel examples", "[intlin][kernel]") {
  const auto Z = FpAbelianGroup::free(1);
  SECTION("multiplication by 2 on Z") {
    const auto k = kernel(AbHom(Z, Z, IntMatrix{{2}}));
    CHECK(k.group.is_trivial());
  }
  SECTION("reduction Z -> Z/2") {
    const auto k = kernel(AbHom(Z, FpAbelianGroup::cyclic(2), IntMatrix{{1}}));
    CHECK(invariants(k.group) == GroupInvariants{1, {}});
    REQUIRE(k.group.ngens() == 1);
    CHECK(abs(k.inclusion.matrix(0, 0)) == 2);
  }
  SECTION("multiplication by 2 on Z/4") {
    const auto Z4 = FpAbelianGroup::cyclic(4);
    const auto k = kernel(AbHom(Z4, Z4, IntMatrix{{2}}));
    CHECK(invariants(k.group) == GroupInvariants{0, {Int(2)}});
    REQUIRE(k.group.ngens() == 1);
    CHECK(k.inclusion.apply(iv({1})) == iv({2}));
  }
  SECTION("ill-defined map is rejected") {
    CHECK_THROWS_AS(kernel(AbHom(FpAbelianGroup::cyclic(2), Z, IntMatrix{{1}})), IllDefinedMapError);
  }
}

TEST_CASE("kernel inclusion composed with the map is zero", "[intlin][kernel][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + rng() % 3, m = 1 + rng() % 3;
    std::vector<long> so(n), to(m);
    for (auto& o : so) o = static_cast<long>(rng() % 5);  // 0 means free
    for (auto& o : to) o = static_cast<long>(rng() % 5);
    const auto S = product_of_cyclics(so), T = product_of_cyclics(to);
    IntMatrix M(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        // make the entry compatible with the source order
        long base = static_cast<long>(rng() % 7) - 3;
        if (so[j] != 0 && to[i] == 0) base = 0;
        if (so[j] != 0 && to[i] != 0) base *= to[i] / std::gcd(to[i], so[j]);
        M(i, j) = base;
      }
    const AbHom h(S, T, M);
    REQUIRE(h.is_well_defined());
    const auto k = kernel(h);
    CHECK(k.inclusion.is_well_defined());
    CHECK(compose(h, k.inclusion).is_zero());
    CHECK(is_injective(k.inclusion));
  }
}

TEST_CASE("kernel matches enumeration on finite groups", "[intlin][kernel][oracle]") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 80; ++trial) {
    oracle::FiniteAb A{{2 + static_cast<long>(rng() % 4), 1 + static_cast<long>(rng() % 4)}};
    oracle::FiniteAb B{{2 + static_cast<long>(rng() % 6)}};
    std::vector<std::vector<long>> m(1, std::vector<long>(2));
    for (int j = 0; j < 2; ++j) m[0][j] = (static_cast<long>(rng() % 5)) * (B.orders[0] / std::gcd(B.orders[0], A.orders[j]));
    const auto k = oracle::kernel(m, A, B);
    const AbHom h(product_of_cyclics(A.orders), product_of_cyclics(B.orders), IntMatrix{{m[0][0], m[0][1]}});
    const auto kk = kernel(h);
    CHECK(kk.group.order() == static_cast<long>(k.size()));
  }
}

TEST_CASE("is_exact_at examples", "[intlin][exact]") {
  const auto Z = FpAbelianGroup::free(1);
  const auto Z2 = FpAbelianGroup::cyclic(2);
  SECTION("0 -> Z -> Z identity at the middle") {
    const AbHom zero_in(FpAbelianGroup::trivial(), Z, IntMatrix(1, 0));
    CHECK(is_exact_at(zero_in, AbHom::identity(Z)));
  }
  SECTION("Z -2-> Z -> Z/2") { CHECK(is_exact_at(AbHom(Z, Z, IntMatrix{{2}}), AbHom(Z, Z2, IntMatrix{{1}}))); }
  SECTION("Z -4-> Z -> Z/2") { CHECK_FALSE(is_exact_at(AbHom(Z, Z, IntMatrix{{4}}), AbHom(Z, Z2, IntMatrix{{1}}))); }
  SECTION("composability violation") {
    CHECK_THROWS_AS(is_exact_at(AbHom::identity(Z2), AbHom::identity(Z)), ComposabilityError);
  }
}

TEST_CASE("is_exact_at agrees with subgroup enumeration", "[intlin][exact][oracle]") {
  std::mt19937_64 rng(5);
  int exact_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // B = Z/b1 x Z/b2 (order <= 64), C = Z/c, g : B -> C, f : Z^a -> B
    oracle::FiniteAb B{{1 + static_cast<long>(rng() % 8), 1 + static_cast<long>(rng() % 8)}};
    oracle::FiniteAb C{{1 + static_cast<long>(rng() % 8)}};
    std::vector<std::vector<long>> g(1, std::vector<long>(2));
    for (int j = 0; j < 2; ++j) g[0][j] = static_cast<long>(rng() % 8) * (C.orders[0] / std::gcd(C.orders[0], B.orders[j]));
    const auto ker = oracle::kernel(g, B, C);
    const std::vector<oracle::Elem> kv(ker.begin(), ker.end());
    const std::size_t a = 1 + rng() % 3;
    std::vector<oracle::Elem> images;
    for (std::size_t i = 0; i < a; ++i) {
      if (rng() % 4 == 0) images.push_back(B.reduce({static_cast<long>(rng() % 8), static_cast<long>(rng() % 8)}));
      else images.push_back(kv[rng() % kv.size()]);
    }
    const auto img = oracle::generated(B, images);
    const bool expected = img == ker;
    exact_cases += expected;

    const auto Bz = product_of_cyclics(B.orders), Cz = product_of_cyclics(C.orders);
    IntMatrix fm(2, a);
    for (std::size_t i = 0; i < a; ++i) {
      fm(0, i) = images[i][0];
      fm(1, i) = images[i][1];
    }
    const AbHom f(FpAbelianGroup::free(a), Bz, fm);
    const AbHom gh(Bz, Cz, IntMatrix{{g[0][0], g[0][1]}});
    CHECK(is_exact_at(f, gh) == expected);
  }
  CHECK(exact_cases > 20);
}

TEST_CASE("subgroup, cokernel and factor_through", "[intlin][group]") {
  const auto Z4 = FpAbelianGroup::cyclic(4);
  const auto sub = subgroup(Z4, {iv({2})});
  CHECK(sub.group.order() == 2);
  const auto co = cokernel(AbHom(FpAbelianGroup::free(1), FpAbelianGroup::free(1), IntMatrix{{6}}));
  CHECK(co.group.order() == 6);
  const AbHom into(FpAbelianGroup::free(1), Z4, IntMatrix{{2}});
  auto lift = factor_through(into, sub.inclusion);
  REQUIRE(lift);
  CHECK(compose(sub.inclusion, *lift).equals(into));
  CHECK_FALSE(factor_through(AbHom(FpAbelianGroup::free(1), Z4, IntMatrix{{1}}), sub.inclusion));
}

TEST_CASE("simplified kernel presentation is minimal", "[intlin][kernel]") {
  // kernel of Z^3 -> Z, (x,y,z) -> x+y+z is Z^2
  const AbHom h(FpAbelianGroup::free(3), FpAbelianGroup::free(1), IntMatrix{{1, 1, 1}});
  const auto k = kernel(h);
  CHECK(k.group.ngens() == 2);
  CHECK(invariants(k.group) == GroupInvariants{2, {}});
}
