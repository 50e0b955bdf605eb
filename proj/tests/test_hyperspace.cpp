#include <catch2/catch_amalgamated.hpp>

#include <rigidlab/hyperspace.hpp>

#include <random>
#include <vector>

using namespace rigidlab;

namespace {

Real real_abs(const Real& x) { return x < 0 ? Real(-x) : x; }

// raw generator bits mapped to a fixed grid keeps the draw reproducible
// across standard libraries
Angle1 grid_angle(std::mt19937_64& rng, unsigned grid) {
  return Angle1(Rational(Integer(rng() % grid), Integer(grid)));
}

FiniteSubset<Angle1> random_grid_subset(std::mt19937_64& rng, unsigned grid, unsigned max_size) {
  std::vector<Angle1> pts;
  unsigned n = 1 + static_cast<unsigned>(rng() % max_size);
  for (unsigned i = 0; i < n; ++i) pts.push_back(grid_angle(rng, grid));
  return FiniteSubset<Angle1>(std::move(pts));
}

}  // namespace

TEST_CASE("hausdorff distance on small circle subsets", "[hyperspace]") {
  RotationSystem rot(Rational(0));

  FiniteSubset<Angle1> a({Angle1(Rational(0)), Angle1(Rational(1, 2))});
  FiniteSubset<Angle1> b({Angle1(Rational(1, 4))});
  FiniteSubset<Angle1> c({Angle1(Rational(3, 10))});
  FiniteSubset<Angle1> origin({Angle1(Rational(0))});

  CHECK(hausdorff_distance(rot, a, a) == 0);
  CHECK(hausdorff_distance(rot, origin, c) == Rational(3, 10));
  CHECK(hausdorff_distance(rot, a, b) == Rational(1, 4));
  CHECK(hausdorff_distance(rot, b, a) == Rational(1, 4));

  auto wit = hausdorff_witness(rot, a, b);
  CHECK(wit.first == Rational(1, 4));
  CHECK(wit.second.first == Angle1(Rational(0)));
  CHECK(wit.second.second == Angle1(Rational(1, 4)));
}

TEST_CASE("finite subsets stay sorted and deduplicated", "[hyperspace]") {
  FiniteSubset<Angle1> s({Angle1(Rational(1, 2)), Angle1(Rational(1, 2)), Angle1(Rational(0))});
  REQUIRE(s.size() == 2);
  CHECK(s.points()[0] == Angle1(Rational(0)));
  CHECK(s.points()[1] == Angle1(Rational(1, 2)));

  CHECK_THROWS_AS(FiniteSubset<Angle1>(std::vector<Angle1>{}), DomainError);
  CHECK_THROWS_AS(fn_projection(std::vector<Angle1>{}), DomainError);

  RotationSystem rot(Rational(0));
  auto merged = make_subset(rot,
                            {Angle1(Rational(0)), Angle1(Rational(1, 100)), Angle1(Rational(1, 2))},
                            Rational(1, 50));
  CHECK(merged.size() == 2);
  CHECK(merged.points()[0] == Angle1(Rational(0)));
  CHECK_THROWS_AS(make_subset(rot, {Angle1(Rational(0))}, Rational(-1)), ConfigError);
}

TEST_CASE("hausdorff metric axioms on random grid subsets", "[hyperspace]") {
  RotationSystem rot(Rational(0));
  std::mt19937_64 rng(20260816);

  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_grid_subset(rng, 64, 6);
    auto b = random_grid_subset(rng, 64, 6);
    auto c = random_grid_subset(rng, 64, 6);

    Rational dab = hausdorff_distance(rot, a, b);
    Rational dba = hausdorff_distance(rot, b, a);
    Rational dac = hausdorff_distance(rot, a, c);
    Rational dbc = hausdorff_distance(rot, b, c);

    CHECK(dab == dba);
    CHECK((dab == 0) == (a == b));
    CHECK(dac <= dab + dbc);

    // adding the same set to both sides never increases the distance
    Rational joined = hausdorff_distance(rot, union_subsets(a, c), union_subsets(b, c));
    CHECK(joined <= dab);
  }
}

TEST_CASE("induced images respect isometries and exact periods", "[hyperspace]") {
  RotationSystem rot(Rational(7, 32));
  std::mt19937_64 rng(7);

  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_grid_subset(rng, 64, 5);
    auto b = random_grid_subset(rng, 64, 5);
    CHECK(hausdorff_distance(rot, induced_image(rot, a, 13), induced_image(rot, b, 13)) ==
          hausdorff_distance(rot, a, b));
  }

  CircleFamilySystem fam(10);
  std::vector<CirclePoint> marked;
  for (int level = 0; level <= 10; ++level) marked.push_back(fam.make_point(level, Rational(0)));
  FiniteSubset<CirclePoint> a(marked);

  CHECK(induced_image(fam, a, 0) == a);
  CHECK(induced_image(fam, a, fam.period()) == a);
  CHECK(induced_image(fam, a, Integer(512)) != a);
}

TEST_CASE("tuple projection is equivariant for the skew product", "[hyperspace]") {
  SkewProductSystem sys(4, 3);
  std::mt19937_64 rng(99);

  auto pt = [&rng]() {
    return TorusPoint{Angle1(Rational(Integer(rng() % 97), 97)),
                      Angle1(Rational(Integer(rng() % 89), 89))};
  };

  FiniteSubset<TorusPoint> single(std::vector<TorusPoint>{pt(), pt()});
  std::vector<TorusPoint> same{single.points()[0], single.points()[0], single.points()[0]};
  CHECK(fn_projection(same).size() == 1);

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TorusPoint> tuple{pt(), pt(), pt(), pt()};
    CHECK(fn_projection(tuple).size() <= tuple.size());

    std::vector<TorusPoint> moved;
    for (const auto& p : tuple) moved.push_back(sys.power(p, 17));
    CHECK(fn_projection(moved) == induced_image(sys, fn_projection(tuple), 17));
  }
}

TEST_CASE("recurrence scan flags near-returns", "[hyperspace]") {
  RotationSystem ident(Rational(0));
  FiniteSubset<Angle1> fixed({Angle1(Rational(0)), Angle1(Rational(2, 5))});
  auto profile = set_recurrence_scan(ident, fixed, {Integer(1), Integer(5), Integer(100)},
                                     Rational(1, 1000));
  REQUIRE(profile.size() == 3);
  for (const auto& e : profile) {
    CHECK(e.dist == 0);
    CHECK(e.hit);
  }

  CHECK_THROWS_AS(set_recurrence_scan(ident, fixed, {}, Rational(1)), ConfigError);

  SkewProductSystem sys(4, 3);
  std::vector<TorusPoint> pts{
      {Angle1(Rational(0)), Angle1(Rational(0))},
      {Angle1(Rational(1, 3)), Angle1(Rational(1, 2))},
      {Angle1(Rational(2, 7)), Angle1(Rational(1, 5))},
      {Angle1(Rational(1, 10)), Angle1(Rational(3, 7))},
      {Angle1(Rational(5, 11)), Angle1(Rational(9, 13))},
  };
  FiniteSubset<TorusPoint> a(pts);
  const Integer& n2 = sys.constants().n_seq[1];
  auto entries = set_recurrence_scan(sys, a, {n2}, Rational(Integer(1), pow(Integer(10), 10u)));
  REQUIRE(entries.size() == 1);
  CHECK(entries.front().hit);
}

TEST_CASE("double-precision circle survey tracks the exact metric", "[hyperspace]") {
  CircleFamilySystem fam(8);
  std::vector<CirclePoint> marked;
  for (int level = 0; level <= 8; ++level) marked.push_back(fam.make_point(level, Rational(0)));
  FiniteSubset<CirclePoint> a(marked);

  auto survey = circle_recurrence_survey(fam, a, 256);
  REQUIRE(survey.size() == 256);
  CHECK(survey[255] < 1e-12);

  for (long long t : {37LL, 128LL, 200LL}) {
    Real exact = hausdorff_distance(fam, a, induced_image(fam, a, Integer(t)));
    CHECK(real_abs(exact - Real(survey[static_cast<std::size_t>(t - 1)])) < Real("1e-9"));
  }

  CHECK_THROWS_AS(circle_recurrence_survey(fam, a, 0), ConfigError);
}
