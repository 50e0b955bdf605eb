#pragma once

// Subcommand implementations for the experiment harness.  Each run function
// maps a validated config to a set of named report files, returned as
// in-memory strings so the CLI can write them and the tests can inspect them.
// Every file embeds the config hash; identical configs must produce
// byte-identical files.

#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "detectors.hpp"
#include "envsemi.hpp"
#include "hyperspace.hpp"

namespace rigidlab {

using FileMap = std::map<std::string, std::string>;

inline std::string dbl_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_head(const ExperimentConfig& c) {
  return "# config_hash=" + hex64(c.hash) + "\n";
}

inline Json report_json(const WitnessReport& r) {
  Json j;
  j["property"] = r.property;
  j["verdict"] = verdict_name(r.verdict);
  Json times = Json::array();
  for (const Integer& t : r.times) times.push_back(t.str());
  j["times"] = times;
  j["points"] = r.points;
  j["distances"] = r.distances;
  Json scales = Json::object();
  for (const auto& [k, v] : r.scales) scales[k] = v;
  j["scales"] = scales;
  return j;
}

inline std::string json_file(Json j, const ExperimentConfig& c) {
  j["config_hash"] = hex64(c.hash);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Per-system defaults.

inline std::vector<Integer> default_candidates(const RotationSystem& s) {
  return {denominator(s.angle().value)};
}
inline std::vector<Integer> default_candidates(const SkewProductSystem& s) {
  std::vector<Integer> out;
  for (int k = 1; k <= s.k_phi(); ++k)
    out.push_back(s.constants().n_seq[static_cast<std::size_t>(k - 1)]);
  return out;
}
inline std::vector<Integer> default_candidates(const CircleFamilySystem& s) {
  return {s.period() / 8, s.period() / 4};
}
inline std::vector<Integer> default_candidates(const FiniteOrbitSystem& s) {
  TransformMap acc = s.base().generators.front();
  TransformMap id = TransformMap::identity(s.states());
  for (long long t = 1; t <= 4096; ++t) {
    if (acc == id) return {Integer(t)};
    acc = compose(acc, s.base().generators.front());
  }
  return {Integer(1)};
}

inline Angle1 default_base(const RotationSystem&) { return Angle1(Rational(0)); }
inline TorusPoint default_base(const SkewProductSystem&) {
  return {Angle1(Rational(0)), Angle1(Rational(0))};
}
inline CirclePoint default_base(const CircleFamilySystem& f) {
  return f.make_point(f.levels() - 1, Rational(0));
}
inline int default_base(const FiniteOrbitSystem&) { return 0; }

inline std::vector<Angle1> default_ur_grid(const RotationSystem&, int side) {
  return circle_grid(side);
}
inline std::vector<TorusPoint> default_ur_grid(const SkewProductSystem&, int side) {
  return torus_grid(side);
}
inline std::vector<CirclePoint> default_ur_grid(const CircleFamilySystem& f, int) {
  return level_marks(f);
}
inline std::vector<int> default_ur_grid(const FiniteOrbitSystem& s, int) {
  std::vector<int> out;
  for (int i = 0; i < s.states(); ++i) out.push_back(i);
  return out;
}

inline std::vector<Angle1> default_wr_points(const RotationSystem&) { return circle_grid(8); }
inline std::vector<TorusPoint> default_wr_points(const SkewProductSystem&) {
  std::vector<TorusPoint> out;
  for (int i = 0; i < 10; ++i)
    out.push_back({Angle1(Rational(i, 11)), Angle1(Rational(i % 7, 7))});
  return out;
}
inline std::vector<CirclePoint> default_wr_points(const CircleFamilySystem& f) {
  return level_marks(f);
}
inline std::vector<int> default_wr_points(const FiniteOrbitSystem& s) {
  return default_ur_grid(s, 0);
}

inline std::vector<std::pair<Angle1, Angle1>> default_pairs(const RotationSystem& s, int side) {
  return default_pair_grid(s, side);
}
inline std::vector<std::pair<TorusPoint, TorusPoint>> default_pairs(const SkewProductSystem& s,
                                                                    int side) {
  return default_pair_grid(s, side);
}
inline std::vector<std::pair<CirclePoint, CirclePoint>> default_pairs(const CircleFamilySystem& f,
                                                                      int) {
  auto marks = level_marks(f);
  std::vector<std::pair<CirclePoint, CirclePoint>> out;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) out.emplace_back(marks[i], marks[i + 1]);
  for (const auto& m : marks) out.emplace_back(m, m);
  return out;
}
inline std::vector<std::pair<int, int>> default_pairs(const FiniteOrbitSystem& s, int) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < s.states(); ++i)
    for (int j = i; j < s.states(); ++j) out.emplace_back(i, j);
  return out;
}

inline std::vector<ProbeEntry<int>> equicontinuity_schedule(const FiniteOrbitSystem&, int base) {
  return {{base, Integer(1)}, {base, Integer(2)}};
}

inline Rational default_eta(const RotationSystem&) { return Rational(1, 1024); }
inline Rational default_eta(const SkewProductSystem&) {
  return Rational(Integer(1), Integer(1000000));
}
inline Rational default_eta(const CircleFamilySystem& f) {
  return Rational(Integer(1), pow(Integer(2), static_cast<unsigned>(f.levels() - 2)));
}
inline Rational default_eta(const FiniteOrbitSystem&) { return Rational(1, 2); }

inline Rational default_delta(const CircleFamilySystem&) { return Rational(1, 2); }
template <class Sys>
Rational default_delta(const Sys&) {
  return Rational(Integer(1), Integer(1000));
}

inline ClassifyScales scales_from(const ExperimentConfig& c) {
  ClassifyScales s;
  s.epsilon_witness = c.epsilon_witness;
  s.epsilon_refute = c.epsilon_refute;
  s.tol_relation = c.relation_tol;
  s.approach_radius = c.approach_radius;
  s.refute_horizon = c.horizon;
  s.wr_horizon = c.horizon;
  s.grid_side = c.grid_side;
  s.pair_grid_side = c.pair_side;
  s.wr_t_min = c.mode == TimeMode::semigroup ? c.s_min : Integer(1);
  return s;
}

// ---------------------------------------------------------------------------
// constants

inline FileMap run_constants(const ExperimentConfig& c) {
  RigidConstants consts = make_constants(c.system.k_alpha);
  const Rational& alpha = consts.alpha.value;

  std::string csv = csv_head(c) + "k,n_k,frac_n_k_alpha\n";
  Json jn = Json::array();
  for (std::size_t i = 0; i < consts.n_seq.size(); ++i) {
    Rational f = frac(Rational(consts.n_seq[i]) * alpha);
    csv += std::to_string(i + 1) + "," + consts.n_seq[i].str() + "," + rat_str(f) + "\n";
    jn.push_back(consts.n_seq[i].str());
  }

  std::string pairs = csv_head(c) + "j,k,n_j_n_k,frac_n_j_n_k_alpha\n";
  for (std::size_t j = 0; j < consts.n_seq.size(); ++j)
    for (std::size_t k = j; k < consts.n_seq.size(); ++k) {
      Integer m = consts.n_seq[j] * consts.n_seq[k];
      pairs += std::to_string(j + 1) + "," + std::to_string(k + 1) + "," + m.str() + "," +
               rat_str(frac(Rational(m) * alpha)) + "\n";
    }

  Json meta;
  meta["k_alpha"] = c.system.k_alpha;
  meta["alpha"] = rat_str(alpha);
  meta["alpha_decimal"] = sci_str(Real(alpha), 100);
  meta["n"] = jn;

  return {{"constants.csv", csv},
          {"products.csv", pairs},
          {"constants.json", json_file(meta, c)}};
}

// ---------------------------------------------------------------------------
// simulate

inline FileMap run_simulate(const ExperimentConfig& c) {
  return with_system(c, [&](const auto& sys) -> FileMap {
    auto base = default_base(sys);
    std::vector<Integer> times = c.candidate_times;
    if (times.empty())
      for (int t = 1; t <= 16; ++t) times.push_back(Integer(t));

    std::string csv = csv_head(c) + "time,point,displacement\n";
    Json rows = Json::array();
    for (const Integer& t : times) {
      auto p = sys.power(base, t);
      auto d = sys.distance(p, base);
      csv += t.str() + ",\"" + state_str(p) + "\"," + scalar_str(d) + "\n";
      Json row;
      row["time"] = t.str();
      row["point"] = state_str(p);
      row["displacement"] = scalar_str(d);
      rows.push_back(row);
    }
    Json meta;
    meta["base"] = state_str(base);
    meta["rows"] = rows;
    return {{"trace.csv", csv}, {"trace.json", json_file(meta, c)}};
  });
}

// ---------------------------------------------------------------------------
// detect

namespace harnessdetail {

template <class Sys>
Integer exhaustive_refute_horizon(const Sys&, const ExperimentConfig&) {
  return Integer(0);  // no feasible exhaustive scan for this system
}
inline Integer exhaustive_refute_horizon(const CircleFamilySystem& f, const ExperimentConfig& c) {
  Integer cap = f.period() / 4;
  return c.horizon < cap ? c.horizon : cap;
}
inline Integer exhaustive_refute_horizon(const FiniteOrbitSystem&, const ExperimentConfig& c) {
  return c.horizon < 4096 ? c.horizon : Integer(4096);
}

template <class Sys>
UniformRigidityResult run_uniform(const Sys& sys, const ExperimentConfig& c) {
  UniformRigidityConfig cfg;
  cfg.candidate_times = c.candidate_times.empty() ? default_candidates(sys) : c.candidate_times;
  cfg.epsilon_witness = c.epsilon_witness;
  cfg.epsilon_refute = c.epsilon_refute;
  cfg.refute_horizon = exhaustive_refute_horizon(sys, c);
  return uniform_rigidity_witness(sys, default_ur_grid(sys, c.grid_side), cfg);
}

}  // namespace harnessdetail

inline FileMap run_detect(const ExperimentConfig& c) {
  return with_system(c, [&](const auto& sys) -> FileMap {
    using Sys = std::decay_t<decltype(sys)>;

    if (c.detector == "uniform-rigidity") {
      auto out = harnessdetail::run_uniform(sys, c);
      auto grid = default_ur_grid(sys, c.grid_side);
      std::string csv = csv_head(c) + "time,value,argmax_point\n";
      for (const auto& [t, v] : out.profile) {
        // locate the extremum exactly; the first grid point attaining it wins
        auto best = sys.distance(sys.power(grid.front(), t), grid.front());
        auto arg = grid.front();
        for (const auto& p : grid) {
          auto d = sys.distance(sys.power(p, t), p);
          if (scalar_less(best, d)) {
            best = d;
            arg = p;
          }
        }
        csv += t.str() + "," + sci_str(v, 30) + ",\"" + state_str(arg) + "\"\n";
      }
      return {{"profile.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    if (c.detector == "weak-rigidity") {
      WeakRigidityConfig cfg;
      cfg.epsilon = c.epsilon_witness;
      cfg.horizon = c.horizon;
      cfg.t_min = c.mode == TimeMode::semigroup ? c.s_min : Integer(1);
      auto out = weak_rigidity_witness(sys, default_wr_points(sys), cfg);
      std::string csv = csv_head(c) + "time,max_displacement\n";
      if (out.found) csv += out.witness_time.str() + "," + sci_str(out.witness_distance, 30) + "\n";
      return {{"witness.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    if (c.detector == "equicontinuity") {
      auto base = default_base(sys);
      auto schedule = equicontinuity_schedule(sys, base);
      EquicontinuityConfig cfg;
      cfg.eta = c.eta == 0 ? default_eta(sys) : c.eta;
      cfg.delta = c.delta == 0 ? default_delta(sys) : c.delta;
      auto out = equicontinuity_violation_witness(sys, base, schedule, cfg);
      std::string csv = csv_head(c) + "time,probe,distance\n";
      for (const auto& entry : schedule) {
        auto d = sys.distance(sys.power(entry.probe, entry.time), sys.power(base, entry.time));
        csv += entry.time.str() + ",\"" + state_str(entry.probe) + "\"," + scalar_str(d) + "\n";
      }
      return {{"pairs.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    if (c.detector == "rigidity-relation") {
      // the relation is sampled at the times the uniform-rigidity detector
      // actually witnesses, so an empty candidate set yields the empty
      // relation
      std::vector<Integer> witness_times;
      if (!c.candidate_times.empty()) {
        UniformRigidityConfig ucfg;
        ucfg.candidate_times = c.candidate_times;
        ucfg.epsilon_witness = c.epsilon_witness;
        auto ur = uniform_rigidity_witness(sys, default_ur_grid(sys, c.grid_side), ucfg);
        witness_times = ur.witness_times;
      }
      auto out = rigidity_relation_sample(sys, default_pairs(sys, c.pair_side), witness_times,
                                          c.relation_tol);
      std::string csv = csv_head(c) + "p,q,time,distance\n";
      for (std::size_t i = 0; i < out.related.size(); ++i)
        csv += "\"" + state_str(out.related[i].first) + "\",\"" + state_str(out.related[i].second) +
               "\"," + out.report.times[i].str() + "," + out.report.distances[i] + "\n";
      return {{"related.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    if (c.detector == "regionally-proximal") {
      using State = typename Sys::State;
      RegionallyProximalConfig<State> cfg;
      cfg.horizon = c.horizon;
      cfg.tol = c.relation_tol;
      cfg.approach_radius = c.approach_radius;
      if constexpr (std::is_same_v<Sys, SkewProductSystem>) {
        auto base = default_base(sys);
        auto schedule = equicontinuity_schedule(sys, base);
        EquicontinuityConfig ecfg;
        ecfg.eta = c.eta == 0 ? default_eta(sys) : c.eta;
        ecfg.delta = c.delta == 0 ? default_delta(sys) : c.delta;
        auto eq = equicontinuity_violation_witness(sys, base, schedule, ecfg);
        if (eq.violated) {
          for (const auto& entry : schedule) {
            if (!(entry.time == eq.witness_time)) continue;
            RpHint<State> hint;
            hint.p = sys.power(entry.probe, entry.time);
            hint.q = sys.power(base, entry.time);
            hint.probe_p = hint.p;
            hint.probe_q = hint.q;
            hint.time = -entry.time;
            cfg.hints.push_back(hint);
            break;
          }
        }
      }
      auto out = regionally_proximal_sample(sys, default_pairs(sys, c.pair_side), cfg);
      std::string csv = csv_head(c) + "p,q,time,distance\n";
      for (std::size_t i = 0; i < out.related.size(); ++i)
        csv += "\"" + state_str(out.related[i].first) + "\",\"" + state_str(out.related[i].second) +
               "\"," + out.report.times[i].str() + "," + out.report.distances[i] + "\n";
      return {{"related.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    if (c.detector == "proximal") {
      auto pairs = default_pairs(sys, c.pair_side);
      // first distinct pair of the default grid
      auto pick = pairs.front();
      for (const auto& pr : pairs)
        if (!(pr.first == pr.second)) {
          pick = pr;
          break;
        }
      Integer horizon = c.horizon < 4096 ? c.horizon : Integer(4096);
      auto out = proximal_scan(sys, pick.first, pick.second, TimeSet(sys.time_mode(), horizon));
      std::string csv = csv_head(c) + "initial,best,best_time\n";
      csv += scalar_str(out.initial) + "," + scalar_str(out.best) + "," + out.best_time.str() + "\n";
      return {{"scan.csv", csv}, {"report.json", json_file(report_json(out.report), c)}};
    }

    // classify
    auto cl = classify_system(sys, scales_from(c));
    Json j;
    j["label"] = cl.label;
    j["distal_floor_evidence"] = cl.distal_floor_evidence;
    j["approach_evidence"] = cl.approach_evidence;
    j["weak_rigidity_found"] = cl.weak_rigidity_found;
    j["uniform_rigidity_witnessed"] = cl.uniform_rigidity_witnessed;
    j["uniform_rigidity_refuted"] = cl.uniform_rigidity_refuted;
    j["equicontinuity_violated"] = cl.equicontinuity_violated;
    j["hierarchy_consistent"] = cl.hierarchy_consistent;
    j["relation_pairs"] = cl.relation_pairs;
    j["relation_diagonal"] = cl.relation_diagonal;
    j["rp_off_diagonal"] = cl.rp_off_diagonal;
    Json ev = Json::array();
    for (const auto& r : cl.evidence) ev.push_back(report_json(r));
    j["evidence"] = ev;
    return {{"classification.json", json_file(j, c)}};
  });
}

// ---------------------------------------------------------------------------
// hyper

namespace harnessdetail {

inline std::vector<Angle1> default_subset(const RotationSystem&, int side) {
  return circle_grid(side);
}
inline std::vector<TorusPoint> default_subset(const SkewProductSystem&, int side) {
  std::vector<TorusPoint> out;
  for (int i = 0; i < side; ++i)
    out.push_back({Angle1(Rational(i, side)), Angle1(Rational((i * i) % side, side))});
  return out;
}
inline std::vector<int> default_subset(const FiniteOrbitSystem& s, int) {
  std::vector<int> out;
  for (int i = 0; i < s.states(); ++i) out.push_back(i);
  return out;
}

}  // namespace harnessdetail

inline FileMap run_hyper(const ExperimentConfig& c) {
  return with_system(c, [&](const auto& sys) -> FileMap {
    using Sys = std::decay_t<decltype(sys)>;

    if constexpr (std::is_same_v<Sys, CircleFamilySystem>) {
      // marked set and its one-step image, surveyed for a common near-return
      auto a = make_subset(sys, level_marks(sys));
      auto b = induced_image(sys, a, 1);
      long long horizon = (c.horizon < sys.period() ? c.horizon : sys.period())
                              .template convert_to<long long>();
      auto da = circle_recurrence_survey(sys, a, horizon);
      auto db = circle_recurrence_survey(sys, b, horizon);

      double eps = static_cast<double>(Real(c.epsilon_witness));
      long long first = 0;
      long long boundary = 0;
      for (long long t = 1; t <= horizon; ++t) {
        double worst = std::max(da[static_cast<std::size_t>(t - 1)],
                                db[static_cast<std::size_t>(t - 1)]);
        if (std::abs(worst - eps) < 1e-9) ++boundary;
        if (worst < eps) {
          first = t;
          break;
        }
      }

      bool first_exact = false;
      if (first > 0) {
        Real dae = hausdorff_distance(sys, a, induced_image(sys, a, Integer(first)));
        Real dbe = hausdorff_distance(sys, b, induced_image(sys, b, Integer(first)));
        first_exact = scalar_less(dae, c.epsilon_witness) && scalar_less(dbe, c.epsilon_witness);
      }
      bool restores = induced_image(sys, a, sys.period()) == a;

      std::string csv = csv_head(c) + "time,dh_a,dh_b\n";
      for (long long t = 1; t <= horizon; ++t)
        csv += std::to_string(t) + "," + dbl_str(da[static_cast<std::size_t>(t - 1)]) + "," +
               dbl_str(db[static_cast<std::size_t>(t - 1)]) + "\n";

      Json j;
      j["epsilon"] = rat_str(c.epsilon_witness);
      j["horizon"] = std::to_string(horizon);
      j["first_common_time"] = std::to_string(first);
      j["first_common_exact_confirmed"] = first_exact;
      j["boundary_times"] = boundary;
      j["period"] = sys.period().str();
      j["restores_at_period"] = restores;
      return {{"survey.csv", csv}, {"hyper.json", json_file(j, c)}};
    } else {
      auto pts = harnessdetail::default_subset(sys, c.subset_side);
      auto a = make_subset(sys, pts);
      std::vector<Integer> times = c.candidate_times.empty() ? default_candidates(sys)
                                                             : c.candidate_times;
      auto entries = set_recurrence_scan(sys, a, times, c.epsilon_witness);
      std::string csv = csv_head(c) + "time,hausdorff_distance,hit\n";
      Json rows = Json::array();
      for (const auto& e : entries) {
        csv += e.time.str() + "," + scalar_str(e.dist) + "," + (e.hit ? "1" : "0") + "\n";
        Json row;
        row["time"] = e.time.str();
        row["distance"] = scalar_str(e.dist);
        row["hit"] = e.hit;
        rows.push_back(row);
      }
      Json j;
      j["epsilon"] = rat_str(c.epsilon_witness);
      j["subset_size"] = a.size();
      j["rows"] = rows;
      return {{"recurrence.csv", csv}, {"hyper.json", json_file(j, c)}};
    }
  });
}

// ---------------------------------------------------------------------------
// envsemi

inline FileMap run_envsemi(const ExperimentConfig& c) {
  std::string csv = csv_head(c) +
                    "n,mode,generator,elements,idempotents,distal,group,unique_identity,bijective\n";
  long long total = 0, distal_count = 0, equivalence_violations = 0, implication_violations = 0;

  auto record = [&](int n, TimeMode mode, const std::vector<TransformMap>& gens,
                    const std::string& label) {
    FiniteSystem fs(n, mode, gens);
    auto clo = closure(fs);
    auto flags = is_distal_equiv_group(fs);
    bool bij = true;
    for (const auto& g : gens) bij = bij && g.is_bijective();
    ++total;
    if (flags.distal) ++distal_count;
    if (flags.distal != flags.group || flags.group != flags.unique_identity_idempotent)
      ++equivalence_violations;
    if (flags.distal && !bij) ++implication_violations;
    csv += std::to_string(n) + "," + time_mode_name(mode) + "," + label + "," +
           std::to_string(clo.elements.size()) + "," +
           std::to_string(idempotents(clo).size()) + "," + (flags.distal ? "1" : "0") + "," +
           (flags.group ? "1" : "0") + "," + (flags.unique_identity_idempotent ? "1" : "0") + "," +
           (bij ? "1" : "0") + "\n";
  };

  auto table_label = [](const TransformMap& g) {
    std::string s;
    for (std::uint8_t v : g.table) s += static_cast<char>('0' + v);
    return s;
  };

  // every single-generator semiflow on up to max_states states
  for (int n = 1; n <= c.envsemi_max_states; ++n) {
    std::vector<std::uint8_t> table(static_cast<std::size_t>(n), 0);
    while (true) {
      TransformMap g;
      g.table = table;
      record(n, TimeMode::semigroup, {g}, table_label(g));
      int i = n - 1;
      while (i >= 0 && table[static_cast<std::size_t>(i)] == n - 1) {
        table[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++table[static_cast<std::size_t>(i)];
    }
  }

  // seeded two-generator semiflows on exactly max_states states
  if (c.envsemi_two_generator_samples > 0) {
    std::mt19937_64 rng(c.seed);
    int n = c.envsemi_max_states;
    for (int s = 0; s < c.envsemi_two_generator_samples; ++s) {
      std::vector<TransformMap> gens(2);
      for (auto& g : gens)
        for (int i = 0; i < n; ++i)
          g.table.push_back(static_cast<std::uint8_t>(rng() % static_cast<unsigned>(n)));
      record(n, TimeMode::semigroup, gens, table_label(gens[0]) + "+" + table_label(gens[1]));
    }
  }

  Json j;
  j["total"] = total;
  j["distal_count"] = distal_count;
  j["equivalence_violations"] = equivalence_violations;
  j["implication_violations"] = implication_violations;
  j["two_generator_samples"] = c.envsemi_two_generator_samples;
  return {{"systems.csv", csv}, {"summary.json", json_file(j, c)}};
}

// ---------------------------------------------------------------------------
// table

inline FileMap run_table(const ExperimentConfig& c) {
  ClassifyScales scales = scales_from(c);

  struct Row {
    std::string name;
    Classification cl;
  };
  std::vector<Row> rows;
  rows.push_back({"rotation", classify_system(RotationSystem(c.system.rho), scales)});
  rows.push_back(
      {"skew_product", classify_system(SkewProductSystem(c.system.k_alpha, c.system.k_phi), scales)});
  rows.push_back({"circle_family", classify_system(CircleFamilySystem(c.system.truncation_m), scales)});

  std::string csv =
      csv_head(c) +
      "system,label,ur_witnessed,ur_refuted,eq_violated,wr_found,relation_pairs,relation_diagonal,"
      "rp_off_diagonal,hierarchy_consistent\n";
  Json certs = Json::array();
  for (const auto& [name, cl] : rows) {
    csv += name + "," + cl.label + "," + (cl.uniform_rigidity_witnessed ? "1" : "0") + "," +
           (cl.uniform_rigidity_refuted ? "1" : "0") + "," + (cl.equicontinuity_violated ? "1" : "0") +
           "," + (cl.weak_rigidity_found ? "1" : "0") + "," + std::to_string(cl.relation_pairs) + "," +
           std::to_string(cl.relation_diagonal) + "," + std::to_string(cl.rp_off_diagonal) + "," +
           (cl.hierarchy_consistent ? "1" : "0") + "\n";
    Json entry;
    entry["system"] = name;
    entry["label"] = cl.label;
    Json ev = Json::array();
    for (const auto& r : cl.evidence) ev.push_back(report_json(r));
    entry["evidence"] = ev;
    certs.push_back(entry);
  }
  Json j;
  j["rows"] = certs;
  return {{"table.csv", csv}, {"certificates.json", json_file(j, c)}};
}

// ---------------------------------------------------------------------------

inline FileMap run_subcommand(const std::string& name, const ExperimentConfig& c) {
  if (name == "constants") return run_constants(c);
  if (name == "simulate") return run_simulate(c);
  if (name == "detect") return run_detect(c);
  if (name == "hyper") return run_hyper(c);
  if (name == "envsemi") return run_envsemi(c);
  if (name == "table") return run_table(c);
  throw ConfigError("subcommand", "unknown subcommand '" + name + "'");
}

}  // namespace rigidlab
