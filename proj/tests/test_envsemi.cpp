#include <catch2/catch_amalgamated.hpp>

#include <rigidlab/envsemi.hpp>

#include <vector>

using namespace rigidlab;

namespace {

TransformMap map_of(std::vector<std::uint8_t> t) { return TransformMap(std::move(t)); }

FiniteSystem one_gen(int n, TimeMode mode, std::vector<std::uint8_t> t) {
  return FiniteSystem(n, mode, {map_of(std::move(t))});
}

}  // namespace

TEST_CASE("closure of basic generator sets", "[envsemi]") {
  FiniteSystem cyclic = one_gen(4, TimeMode::group, {1, 2, 3, 0});
  SemigroupClosure e = closure(cyclic);
  CHECK(e.elements.size() == 4);
  CHECK(e.contains_identity);

  FiniteSystem constant = one_gen(3, TimeMode::semigroup, {1, 1, 1});
  SemigroupClosure ec = closure(constant);
  REQUIRE(ec.elements.size() == 1);
  CHECK(compose(ec.elements[0], ec.elements[0]) == ec.elements[0]);
  CHECK_FALSE(ec.contains_identity);

  FiniteSystem collapse = one_gen(3, TimeMode::semigroup, {1, 1, 1});
  CHECK(closure(collapse).elements.size() == 1);

  CHECK_THROWS_AS(one_gen(3, TimeMode::group, {1, 1, 1}), DomainError);
  CHECK_THROWS_AS(FiniteSystem(0, TimeMode::group, {map_of({})}), ConfigError);
  CHECK_THROWS_AS(FiniteSystem(11, TimeMode::group, {map_of({0})}), ConfigError);
  CHECK_THROWS_AS(FiniteSystem(2, TimeMode::group, {}), ConfigError);
  CHECK_THROWS_AS(one_gen(2, TimeMode::semigroup, {0, 2}), DomainError);
  CHECK_THROWS_AS(one_gen(2, TimeMode::semigroup, {0}), DomainError);

  FiniteSystem monoid(2, TimeMode::semigroup, {map_of({1, 0}), map_of({0, 0})});
  CHECK(closure(monoid).elements.size() == 4);
  CHECK_THROWS_AS(closure(monoid, 512, 2), DomainError);
}

TEST_CASE("cayley tables match composition when kept", "[envsemi]") {
  SemigroupClosure e = closure(one_gen(4, TimeMode::group, {1, 2, 3, 0}));
  REQUIRE(e.cayley.has_value());
  const auto& c = *e.cayley;
  for (std::size_t i = 0; i < e.elements.size(); ++i)
    for (std::size_t j = 0; j < e.elements.size(); ++j)
      CHECK(e.elements[c[i][j]] == compose(e.elements[i], e.elements[j]));

  SemigroupClosure trimmed = closure(one_gen(4, TimeMode::group, {1, 2, 3, 0}), 2);
  CHECK_FALSE(trimmed.cayley.has_value());
}

TEST_CASE("idempotent census", "[envsemi]") {
  SemigroupClosure cyclic = closure(one_gen(4, TimeMode::group, {1, 2, 3, 0}));
  auto idem = idempotents(cyclic);
  REQUIRE(idem.size() == 1);
  CHECK(idem[0] == TransformMap::identity(4));

  SemigroupClosure single = closure(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  idem = idempotents(single);
  REQUIRE(idem.size() == 1);
  CHECK(idem[0] == map_of({1, 1, 1}));

  SemigroupClosure monoid = closure(FiniteSystem(2, TimeMode::semigroup, {map_of({1, 0}), map_of({0, 0})}));
  idem = idempotents(monoid);
  REQUIRE(idem.size() == 3);
  CHECK(idem[0] == map_of({0, 0}));
  CHECK(idem[1] == TransformMap::identity(2));
  CHECK(idem[2] == map_of({1, 1}));
}

TEST_CASE("minimal left ideals and their idempotents", "[envsemi]") {
  SemigroupClosure cyclic = closure(one_gen(4, TimeMode::group, {1, 2, 3, 0}));
  auto ideals = minimal_left_ideals(cyclic);
  REQUIRE(ideals.size() == 1);
  CHECK(ideals[0] == cyclic.elements);
  auto min_idem = minimal_idempotents(cyclic);
  REQUIRE(min_idem.size() == 1);
  CHECK(min_idem[0] == TransformMap::identity(4));

  SemigroupClosure monoid =
      closure(FiniteSystem(2, TimeMode::semigroup, {map_of({0, 0}), map_of({1, 1}), map_of({1, 0})}));
  ideals = minimal_left_ideals(monoid);
  REQUIRE(ideals.size() == 1);
  REQUIRE(ideals[0].size() == 2);
  CHECK(ideals[0][0] == map_of({0, 0}));
  CHECK(ideals[0][1] == map_of({1, 1}));
  min_idem = minimal_idempotents(monoid);
  REQUIRE(min_idem.size() == 2);

  SemigroupClosure single = closure(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  ideals = minimal_left_ideals(single);
  REQUIRE(ideals.size() == 1);
  CHECK(ideals[0] == single.elements);
}

TEST_CASE("proximal pairs across collapse and permutation closures", "[envsemi]") {
  CHECK(proximal_pairs(closure(one_gen(4, TimeMode::group, {1, 2, 3, 0}))).empty());

  auto pairs = proximal_pairs(closure(one_gen(3, TimeMode::semigroup, {1, 1, 1})));
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<int, int>(0, 1));
  CHECK(pairs[1] == std::pair<int, int>(0, 2));
  CHECK(pairs[2] == std::pair<int, int>(1, 2));

  CHECK(proximal_pairs(closure(one_gen(4, TimeMode::group, {1, 0, 3, 2}))).empty());
}

TEST_CASE("distal, group and idempotent flags agree on known systems", "[envsemi]") {
  DistalFlags f = is_distal_equiv_group(one_gen(4, TimeMode::group, {1, 2, 3, 0}));
  CHECK(f.distal);
  CHECK(f.group);
  CHECK(f.unique_identity_idempotent);

  f = is_distal_equiv_group(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  CHECK_FALSE(f.distal);
  CHECK_FALSE(f.group);
  CHECK_FALSE(f.unique_identity_idempotent);

  f = is_distal_equiv_group(one_gen(3, TimeMode::semigroup, {1, 0, 2}));
  CHECK(f.distal);
  CHECK(f.group);
  CHECK(f.unique_identity_idempotent);
}

TEST_CASE("set images under single maps", "[envsemi]") {
  TransformMap id = TransformMap::identity(3);
  TransformMap c1 = map_of({1, 1, 1});

  for (std::uint32_t a = 1; a < 8; ++a) {
    CHECK(dp_apply(id, a) == a);
    CHECK(dp_apply(c1, a) == 0b010u);
  }

  SemigroupClosure monoid = closure(FiniteSystem(2, TimeMode::semigroup, {map_of({1, 0}), map_of({0, 0})}));
  for (const auto& u : idempotents(monoid))
    for (std::uint32_t a = 1; a < 4; ++a)
      CHECK(dp_apply(u, dp_apply(u, a)) == dp_apply(u, a));

  CHECK_THROWS_AS(dp_apply(id, 0), DomainError);
}

TEST_CASE("almost periodic subsets", "[envsemi]") {
  auto ap = almost_periodic_sets(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  REQUIRE(ap.size() == 1);
  CHECK(ap[0] == 0b010u);

  ap = almost_periodic_sets(one_gen(4, TimeMode::group, {1, 0, 3, 2}));
  CHECK(ap.size() == 15);

  ap = almost_periodic_sets(one_gen(3, TimeMode::group, {1, 2, 0}));
  CHECK(ap.size() == 7);
}

TEST_CASE("orbit transitivity of the translation action", "[envsemi]") {
  CHECK(envelope_orbit_transitive(one_gen(4, TimeMode::group, {1, 2, 3, 0})));
  CHECK_FALSE(envelope_orbit_transitive(
      FiniteSystem(2, TimeMode::semigroup, {map_of({0, 0}), map_of({1, 1})})));
  CHECK(envelope_orbit_transitive(
      FiniteSystem(2, TimeMode::semigroup, {map_of({1, 0}), map_of({0, 0})})));
}

TEST_CASE("distal, group and unique-identity-idempotent coincide exhaustively", "[envsemi]") {
  for (int n = 1; n <= 4; ++n) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= n;
    for (long code = 0; code < total; ++code) {
      std::vector<std::uint8_t> t(static_cast<std::size_t>(n));
      long rest = code;
      for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rest % n);
        rest /= n;
      }
      FiniteSystem sys(n, TimeMode::semigroup, {map_of(t)});
      SemigroupClosure e = closure(sys);
      CHECK(e.elements.size() <= static_cast<std::size_t>(total));
      DistalFlags f = is_distal_equiv_group(sys);
      CAPTURE(n, code);
      CHECK(f.distal == f.group);
      CHECK(f.group == f.unique_identity_idempotent);
    }
  }
}
