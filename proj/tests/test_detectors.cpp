#include <catch2/catch_amalgamated.hpp>

#include <rigidlab/detectors.hpp>

#include <algorithm>
#include <vector>

using namespace rigidlab;

namespace {

Real real_abs(const Real& x) { return x < 0 ? Real(-x) : x; }

Integer pow10(unsigned e) { return Integer(pow(Integer(10), e)); }

TransformMap map_of(std::vector<std::uint8_t> t) {
  TransformMap m;
  m.table = std::move(t);
  return m;
}

FiniteSystem one_gen(int n, TimeMode mode, std::vector<std::uint8_t> t) {
  return FiniteSystem(n, mode, {map_of(std::move(t))});
}

}  // namespace

TEST_CASE("finite orbit adapter powers its generator exactly", "[detectors]") {
  FiniteOrbitSystem cyc(one_gen(4, TimeMode::group, {1, 2, 3, 0}));
  CHECK(cyc.power(0, 5) == 1);
  CHECK(cyc.power(0, 4) == 0);
  CHECK(cyc.power(0, -1) == 3);
  CHECK(cyc.power(2, 1000000007) == 1);
  CHECK(cyc.distance(0, 0) == 0);
  CHECK(cyc.distance(0, 3) == 1);

  FiniteOrbitSystem konst(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  CHECK(konst.power(0, 7) == 1);
  CHECK_THROWS_AS(konst.power(0, -1), DomainError);

  CHECK_THROWS_AS(FiniteOrbitSystem(FiniteSystem(
                      2, TimeMode::semigroup, {map_of({0, 1}), map_of({1, 0})})),
                  ConfigError);
}

TEST_CASE("proximal scan separates collapse from permutation", "[detectors]") {
  FiniteOrbitSystem konst(one_gen(3, TimeMode::semigroup, {1, 1, 1}));
  auto collapse = proximal_scan(konst, 0, 2, TimeSet(TimeMode::semigroup, 8));
  CHECK(collapse.initial == 1);
  CHECK(collapse.best == 0);
  CHECK(collapse.best_time == 1);
  CHECK(collapse.report.property == "proximal_scan");

  FiniteOrbitSystem cyc(one_gen(3, TimeMode::group, {1, 2, 0}));
  auto apart = proximal_scan(cyc, 0, 1, TimeSet(TimeMode::group, 8));
  CHECK(apart.best == 1);
  CHECK(apart.report.verdict == Verdict::inconclusive);
}

TEST_CASE("uniform rigidity witnesses exact return of a rational rotation", "[detectors]") {
  RotationSystem rot(Rational(3, 8));
  auto grid = circle_grid(16);

  UniformRigidityConfig cfg;
  cfg.candidate_times = {Integer(4), Integer(8)};
  auto out = uniform_rigidity_witness(rot, grid, cfg);

  CHECK(out.witnessed);
  CHECK(out.best_time == 8);
  CHECK(out.witness_times == std::vector<Integer>{Integer(8)});
  REQUIRE(out.profile.size() == 2);
  CHECK(real_abs(out.profile[0].second - Real(Rational(1, 2))) < Real("1e-30"));
  CHECK(out.profile[1].second == 0);
  CHECK(out.report.verdict == Verdict::witnessed);
  CHECK(out.report.property == "uniform_rigidity");

  UniformRigidityConfig bad;
  CHECK_THROWS_AS(uniform_rigidity_witness(rot, grid, bad), ConfigError);
  cfg.candidate_times = {Integer(1)};
  CHECK_THROWS_AS(uniform_rigidity_witness(rot, std::vector<Angle1>{}, cfg), ConfigError);
}

TEST_CASE("uniform rigidity witnesses the torus cascade on the probe lattice", "[detectors]") {
  SkewProductSystem sys(4, 3);
  const auto& n_seq = sys.constants().n_seq;
  auto grid = torus_grid(32);

  UniformRigidityConfig cfg;
  cfg.candidate_times = {n_seq[0], n_seq[1], n_seq[2]};
  auto out = uniform_rigidity_witness(sys, grid, cfg);

  CHECK(out.witnessed);
  CHECK(out.best_time == n_seq[2]);
  REQUIRE(out.witness_times.size() == 2);
  CHECK(out.witness_times[0] == n_seq[1]);
  CHECK(out.witness_times[1] == n_seq[2]);

  REQUIRE(out.profile.size() == 3);
  CHECK(real_abs(out.profile[0].second - Real("0.1255810390586267522777722")) < Real("1e-20"));
  CHECK(real_abs(out.profile[1].second - Real("1.256637100914334899742492e-15")) < Real("1e-30"));
  CHECK(real_abs(out.profile[2].second - Real("1.256637061435917295385057e-69")) < Real("1e-80"));

  CHECK(out.report.verdict == Verdict::witnessed);
  bool has_eps = false;
  for (const auto& [k, v] : out.report.scales)
    if (k == "epsilon_witness" && v == "1/1000000") has_eps = true;
  CHECK(has_eps);
}

TEST_CASE("uniform rigidity refutation scans exhaustively", "[detectors]") {
  // circle family: the fast per-level scan, confirmed exactly
  CircleFamilySystem fam(8);
  auto marks = level_marks(fam);

  UniformRigidityConfig cfg;
  cfg.candidate_times = {Integer(32), Integer(64)};
  cfg.epsilon_refute = Rational(7, 10);
  cfg.refute_horizon = Integer(64);
  auto out = uniform_rigidity_witness(fam, marks, cfg);

  CHECK_FALSE(out.witnessed);
  CHECK(out.refuted);
  CHECK(out.refute_min_time == 1);
  CHECK(real_abs(out.refute_min_value - Real("1.060660171779821286601266543157")) < Real("1e-25"));
  CHECK(out.report.verdict == Verdict::refuted_at_scale);

  // generic exact scan on a rotation: a sub-threshold time defeats the
  // refutation, a lower threshold restores it
  RotationSystem rot(Rational(1, 7));
  auto grid = circle_grid(7);
  UniformRigidityConfig rcfg;
  rcfg.candidate_times = {Integer(3)};
  rcfg.refute_horizon = Integer(6);
  auto weak = uniform_rigidity_witness(rot, grid, rcfg);
  CHECK_FALSE(weak.witnessed);
  CHECK_FALSE(weak.refuted);
  CHECK(weak.report.verdict == Verdict::inconclusive);

  rcfg.epsilon_refute = Rational(1, 10);
  auto firm = uniform_rigidity_witness(rot, grid, rcfg);
  CHECK(firm.refuted);
  CHECK(firm.refute_min_time == 1);
  CHECK(real_abs(firm.refute_min_value - Real(Rational(1, 7))) < Real("1e-30"));
}

TEST_CASE("weak rigidity finds the smallest simultaneous return", "[detectors]") {
  RotationSystem rot(Rational(3, 8));
  std::vector<Angle1> pts = {Angle1(Rational(0)), Angle1(Rational(1, 3))};
  WeakRigidityConfig cfg;
  cfg.horizon = Integer(16);
  auto out = weak_rigidity_witness(rot, pts, cfg);
  CHECK(out.found);
  CHECK(out.witness_time == 8);
  CHECK(out.witness_distance == 0);
  CHECK(out.report.verdict == Verdict::witnessed);

  CHECK_THROWS_AS(weak_rigidity_witness(rot, std::vector<Angle1>{}, cfg), ConfigError);
}

TEST_CASE("weak rigidity on the torus cascade gates on the exact phase", "[detectors]") {
  SkewProductSystem sys(4, 3);
  std::vector<TorusPoint> pts;
  for (int i = 0; i < 10; ++i)
    pts.push_back({Angle1(Rational(i, 11)), Angle1(Rational(i % 7, 7))});

  WeakRigidityConfig cfg;
  cfg.horizon = Integer(2000000);
  auto out = weak_rigidity_witness(sys, pts, cfg);
  CHECK(out.found);
  CHECK(out.witness_time == pow10(6));
  CHECK(out.witness_distance < Real("1e-10"));

  // the only earlier time whose phase passes the gate is rejected by the
  // fibre displacement, so shrinking the horizon below 10^6 finds nothing
  WeakRigidityConfig below;
  below.horizon = pow10(6) - 1;
  auto none = weak_rigidity_witness(sys, pts, below);
  CHECK_FALSE(none.found);
  CHECK(none.report.verdict == Verdict::refuted_at_scale);

  // starting the scan at 3 instead of 1 changes nothing here
  WeakRigidityConfig shifted;
  shifted.horizon = Integer(2000000);
  shifted.t_min = Integer(3);
  auto same = weak_rigidity_witness(sys, pts, shifted);
  CHECK(same.found);
  CHECK(same.witness_time == pow10(6));
}

TEST_CASE("weak rigidity on the circle family returns at the full period", "[detectors]") {
  for (int m : {8, 12}) {
    CircleFamilySystem fam(m);
    auto marks = level_marks(fam);
    WeakRigidityConfig cfg;
    cfg.horizon = fam.period();
    auto out = weak_rigidity_witness(fam, marks, cfg);
    CAPTURE(m);
    CHECK(out.found);
    CHECK(out.witness_time == fam.period());
    CHECK(out.witness_distance == 0);
  }
}

TEST_CASE("equicontinuity violation witnesses the cascade schedules", "[detectors]") {
  SkewProductSystem sys(4, 3);
  TorusPoint base{Angle1(Rational(0)), Angle1(Rational(0))};
  auto schedule = equicontinuity_schedule(sys, base);
  REQUIRE(schedule.size() == 2);
  CHECK(schedule[0].time == pow10(16));
  CHECK(schedule[1].time == pow10(70));

  EquicontinuityConfig cfg;
  auto out = equicontinuity_violation_witness(sys, base, schedule, cfg);
  CHECK(out.violated);
  CHECK(out.witness_time == pow10(16));
  CHECK(real_abs(out.witness_distance - Real("0.00787751116308742091665770780030")) < Real("1e-18"));
  CHECK(out.report.verdict == Verdict::witnessed);

  // the deeper schedule entry separates by nearly the same amount
  Real d3 = scalar_real(sys.distance(sys.power(schedule[1].probe, schedule[1].time),
                                     sys.power(base, schedule[1].time)));
  CHECK(real_abs(d3 - Real("0.00787751108413058570976114188225")) < Real("1e-18"));

  // a probe outside the eta neighborhood is a configuration error
  EquicontinuityConfig tight;
  tight.eta = Rational(Integer(1), pow10(10));
  CHECK_THROWS_AS(equicontinuity_violation_witness(sys, base, schedule, tight), ConfigError);
}

TEST_CASE("equicontinuity violation on adjacent circle levels", "[detectors]") {
  CircleFamilySystem fam(24);
  CirclePoint base = fam.make_point(23, Rational(0));
  auto schedule = equicontinuity_schedule(fam, base);
  REQUIRE(schedule.size() == 1);
  CHECK(schedule[0].probe.level == 24);
  CHECK(schedule[0].time == Integer(1) << 22);

  EquicontinuityConfig cfg;
  cfg.eta = Rational(Integer(1), Integer(1) << 22);
  cfg.delta = Rational(1, 2);
  auto out = equicontinuity_violation_witness(fam, base, schedule, cfg);
  CHECK(out.violated);
  CHECK(real_abs(out.witness_distance - Real("1.4142134359325501442")) < Real("1e-15"));

  RotationSystem rot(Rational(3, 8));
  Angle1 rbase(Rational(0));
  EquicontinuityConfig rcfg;
  rcfg.eta = Rational(1, 1024);
  auto quiet = equicontinuity_violation_witness(rot, rbase, equicontinuity_schedule(rot, rbase), rcfg);
  CHECK_FALSE(quiet.violated);
  CHECK(quiet.report.verdict == Verdict::refuted_at_scale);
}

TEST_CASE("rigidity relation collapses to the diagonal at witness times", "[detectors]") {
  SkewProductSystem sys(4, 3);
  const auto& n_seq = sys.constants().n_seq;
  auto pairs = default_pair_grid(sys, 16);
  std::vector<Integer> times = {n_seq[1], n_seq[2]};

  auto rel = rigidity_relation_sample(sys, pairs, times, Rational(1, 64));
  CHECK(rel.related.size() == 16);
  for (const auto& [p, q] : rel.related) CHECK(p == q);
  CHECK(rel.report.verdict == Verdict::witnessed);

  auto empty = rigidity_relation_sample(sys, pairs, {}, Rational(1, 64));
  CHECK(empty.related.empty());
  CHECK(empty.report.verdict == Verdict::refuted_at_scale);

  RotationSystem rot(Rational(3, 8));
  auto rpairs = default_pair_grid(rot, 16);
  auto rrel = rigidity_relation_sample(rot, rpairs, {Integer(8)}, Rational(1, 64));
  CHECK(rrel.related.size() == 16);
  for (const auto& [p, q] : rrel.related) CHECK(p == q);
}

TEST_CASE("regionally proximal sample keeps floors and accepts pullback hints", "[detectors]") {
  SkewProductSystem sys(4, 3);
  auto pairs = default_pair_grid(sys, 4);

  RegionallyProximalConfig<TorusPoint> cfg;
  cfg.horizon = Integer(16);
  auto plain = regionally_proximal_sample(sys, pairs, cfg);
  CHECK(plain.related.size() == 4);
  for (const auto& [p, q] : plain.related) CHECK(p == q);

  // pull the separated images of an eta-close pair back to time zero
  TorusPoint base{Angle1(Rational(0)), Angle1(Rational(0))};
  auto schedule = equicontinuity_schedule(sys, base);
  RpHint<TorusPoint> hint;
  hint.p = sys.power(schedule[0].probe, schedule[0].time);
  hint.q = sys.power(base, schedule[0].time);
  hint.probe_p = hint.p;
  hint.probe_q = hint.q;
  hint.time = -schedule[0].time;
  cfg.hints.push_back(hint);

  auto hinted = regionally_proximal_sample(sys, pairs, cfg);
  CHECK(hinted.related.size() == 5);
  std::size_t off_diag = 0;
  for (const auto& [p, q] : hinted.related)
    if (!(p == q)) ++off_diag;
  CHECK(off_diag == 1);
  // the hint pair itself is visibly separated
  CHECK(Rational(1, 128) < sys.distance(hint.p, hint.q));

  // the sampled rigidity relation is contained in the sampled regional one
  auto rel = rigidity_relation_sample(sys, pairs, {sys.constants().n_seq[1]}, Rational(1, 64));
  for (const auto& pr : rel.related)
    CHECK(std::find(hinted.related.begin(), hinted.related.end(), pr) != hinted.related.end());

  // a hint whose probe strays outside the approach radius is discarded
  RegionallyProximalConfig<TorusPoint> bad;
  bad.horizon = Integer(4);
  RpHint<TorusPoint> stray = hint;
  stray.probe_p = TorusPoint{Angle1(hint.p.x.value + Rational(1, 4)), hint.p.y};
  bad.hints.push_back(stray);
  auto rejected = regionally_proximal_sample(sys, {}, bad);
  CHECK(rejected.related.empty());
}

TEST_CASE("product and factor systems inherit rigidity witnesses", "[detectors]") {
  // two rotations share the return time of their least common period
  RotationSystem r4(Rational(1, 4));
  RotationSystem r6(Rational(1, 6));
  ProductSystem<RotationSystem, RotationSystem> prod(r4, r6);
  std::vector<std::pair<Angle1, Angle1>> grid;
  for (const auto& a : circle_grid(4))
    for (const auto& b : circle_grid(4)) grid.emplace_back(a, b);

  UniformRigidityConfig cfg;
  cfg.candidate_times = {Integer(4), Integer(12)};
  auto out = uniform_rigidity_witness(prod, grid, cfg);
  CHECK(out.witnessed);
  CHECK(out.best_time == 12);
  CHECK(out.witness_times == std::vector<Integer>{Integer(12)});

  // a product of two cascade copies is witnessed at the shared times
  SkewProductSystem cascade(4, 3);
  ProductSystem<SkewProductSystem, SkewProductSystem> twin(cascade, cascade);
  std::vector<std::pair<TorusPoint, TorusPoint>> tgrid;
  for (const auto& a : torus_grid(2))
    for (const auto& b : torus_grid(2)) tgrid.emplace_back(a, b);
  UniformRigidityConfig tcfg;
  tcfg.candidate_times = {cascade.constants().n_seq[1]};
  auto tout = uniform_rigidity_witness(twin, tgrid, tcfg);
  CHECK(tout.witnessed);

  // the base rotation is a factor and inherits the cascade witness times
  RotationSystem factor(cascade.alpha().value);
  UniformRigidityConfig fcfg;
  fcfg.candidate_times = {cascade.constants().n_seq[1], cascade.constants().n_seq[2]};
  auto fout = uniform_rigidity_witness(factor, circle_grid(8), fcfg);
  CHECK(fout.witnessed);
  CHECK(fout.witness_times.size() == 2);
}

TEST_CASE("classification labels the reference systems", "[detectors]") {
  ClassifyScales quick;
  quick.wr_horizon = Integer(64);
  quick.rp_horizon = Integer(16);

  auto rot = classify_system(RotationSystem(Rational(3, 8)), quick);
  CHECK(rot.label == "eq_consistent");
  CHECK(rot.hierarchy_consistent);
  CHECK(rot.distal_floor_evidence);
  CHECK(rot.uniform_rigidity_witnessed);
  CHECK_FALSE(rot.equicontinuity_violated);
  CHECK(rot.relation_pairs == rot.relation_diagonal);
  CHECK(rot.rp_off_diagonal == 0);

  ClassifyScales tscales;
  tscales.rp_horizon = Integer(16);
  auto cascade = classify_system(SkewProductSystem(4, 3), tscales);
  CHECK(cascade.label == "sr_not_eq_consistent");
  CHECK(cascade.hierarchy_consistent);
  CHECK(cascade.uniform_rigidity_witnessed);
  CHECK(cascade.equicontinuity_violated);
  CHECK(cascade.weak_rigidity_found);
  CHECK(cascade.relation_pairs == cascade.relation_diagonal);
  CHECK(cascade.rp_off_diagonal >= 1);

  auto family = classify_system(CircleFamilySystem(8), ClassifyScales{});
  CHECK(family.label == "d_not_sr_consistent");
  CHECK(family.hierarchy_consistent);
  CHECK(family.uniform_rigidity_refuted);
  CHECK(family.weak_rigidity_found);
  CHECK(family.relation_pairs == 0);

  auto konst = classify_system(FiniteOrbitSystem(one_gen(3, TimeMode::semigroup, {1, 1, 1})),
                               ClassifyScales{});
  CHECK(konst.label == "non_distal_evidence");
  CHECK(konst.approach_evidence);

  auto cyc = classify_system(FiniteOrbitSystem(one_gen(4, TimeMode::group, {1, 2, 3, 0})),
                             ClassifyScales{});
  CHECK(cyc.label == "eq_consistent");
  CHECK(cyc.hierarchy_consistent);

  auto merge = classify_system(FiniteOrbitSystem(one_gen(3, TimeMode::semigroup, {1, 1, 2})),
                               ClassifyScales{});
  CHECK(merge.label == "non_distal_evidence");

  // the consistency labels agree with the exact envelope algebra
  CHECK(is_distal_equiv_group(one_gen(4, TimeMode::group, {1, 2, 3, 0})).distal);
  CHECK_FALSE(is_distal_equiv_group(one_gen(3, TimeMode::semigroup, {1, 1, 2})).distal);
}
