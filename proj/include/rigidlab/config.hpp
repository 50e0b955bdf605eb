#pragma once

// Experiment configuration: a JSON document validated field by field into a
// typed struct.  Numbers that must stay exact travel as strings ("3/8",
// "0.25", "4194304"); embedded floats are rejected so no binary rounding can
// leak into a run.  The canonical form (defaults filled in, keys sorted) is
// hashed and stamped into every report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "detectors.hpp"
#include "precision.hpp"
#include "systems.hpp"

namespace rigidlab {

using Json = nlohmann::json;

struct SystemSpec {
  std::string kind = "skew_product";  // rotation | skew_product | circle_family | finite
  int k_alpha = 4;
  int k_phi = 3;
  int truncation_m = 24;
  Rational rho = Rational(3, 8);
  int finite_n = 4;
  TimeMode finite_mode = TimeMode::group;
  std::vector<std::vector<int>> finite_generators = {{1, 2, 3, 0}};
};

struct ExperimentConfig {
  SystemSpec system;
  int precision = 120;
  TimeMode mode = TimeMode::group;
  Integer horizon{Integer(1) << 22};
  Integer s_min{3};
  int grid_side = 32;
  int pair_side = 16;
  int subset_side = 5;
  std::uint64_t seed = 20260816u;
  Rational epsilon_witness = Rational(Integer(1), Integer(1000000));
  Rational epsilon_refute = Rational(1, 2);
  Rational relation_tol = Rational(1, 64);
  Rational approach_radius = Rational(1, 256);
  Rational eta = Rational(0);    // 0 = resolve a per-system default
  Rational delta = Rational(0);  // 0 = resolve a per-system default
  std::vector<Integer> candidate_times;
  std::string detector = "classify";
  int envsemi_max_states = 4;
  int envsemi_two_generator_samples = 0;
  std::string format = "csv";

  std::string canonical;  // sorted-key dump of the effective config
  std::uint64_t hash = 0;
};

namespace cfgdetail {

inline void expect_keys(const Json& j, const std::string& scope,
                        std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError(scope.empty() ? key : scope + "." + key, "unknown field");
  }
}

inline Integer get_integer(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>(), field);
    if (denominator(q) != 1) throw ConfigError(field, "must be an integer");
    return numerator(q);
  }
  throw ConfigError(field, "must be an integer or an exact integer string");
}

inline Rational get_rational(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>(), field);
  throw ConfigError(field, "must be an exact string like \"3/8\" or \"0.25\"");
}

inline int get_int(const Json& j, const std::string& field, int lo, int hi) {
  if (!j.is_number_integer()) throw ConfigError(field, "must be an integer");
  long long v = j.get<long long>();
  if (v < lo || v > hi)
    throw ConfigError(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

inline std::string get_string(const Json& j, const std::string& field,
                              std::initializer_list<const char*> allowed) {
  if (!j.is_string()) throw ConfigError(field, "must be a string");
  std::string v = j.get<std::string>();
  for (const char* a : allowed)
    if (v == a) return v;
  std::string opts;
  for (const char* a : allowed) {
    if (!opts.empty()) opts += " | ";
    opts += a;
  }
  throw ConfigError(field, "must be one of: " + opts);
}

inline TimeMode get_mode(const Json& j, const std::string& field) {
  return get_string(j, field, {"group", "semigroup"}) == std::string("group")
             ? TimeMode::group
             : TimeMode::semigroup;
}

inline void reject_floats(const Json& j, const std::string& scope) {
  if (j.is_number_float())
    throw ConfigError(scope, "floating-point literals are not exact; use a string");
  if (j.is_object())
    for (const auto& [key, value] : j.items())
      reject_floats(value, scope.empty() ? key : scope + "." + key);
  if (j.is_array()) {
    int i = 0;
    for (const auto& value : j)
      reject_floats(value, scope + "[" + std::to_string(i++) + "]");
  }
}

}  // namespace cfgdetail

inline SystemSpec parse_system_spec(const Json& j) {
  using namespace cfgdetail;
  SystemSpec spec;
  if (!j.is_object()) throw ConfigError("system", "must be a JSON object");
  expect_keys(j, "system",
              {"kind", "k_alpha", "k_phi", "truncation_m", "rho", "finite_n", "finite_mode",
               "finite_generators"});
  if (j.contains("kind"))
    spec.kind = get_string(j.at("kind"), "system.kind",
                           {"rotation", "skew_product", "circle_family", "finite"});
  if (j.contains("k_alpha")) spec.k_alpha = get_int(j.at("k_alpha"), "system.k_alpha", 1, 6);
  if (j.contains("k_phi")) spec.k_phi = get_int(j.at("k_phi"), "system.k_phi", 1, 5);
  if (j.contains("truncation_m"))
    spec.truncation_m = get_int(j.at("truncation_m"), "system.truncation_m", 2, 48);
  if (j.contains("rho")) spec.rho = get_rational(j.at("rho"), "system.rho");
  if (j.contains("finite_n")) spec.finite_n = get_int(j.at("finite_n"), "system.finite_n", 1, 10);
  if (j.contains("finite_mode")) spec.finite_mode = get_mode(j.at("finite_mode"), "system.finite_mode");
  if (j.contains("finite_generators")) {
    const Json& gens = j.at("finite_generators");
    if (!gens.is_array() || gens.empty())
      throw ConfigError("system.finite_generators", "must be a nonempty array of tables");
    spec.finite_generators.clear();
    for (const auto& g : gens) {
      if (!g.is_array()) throw ConfigError("system.finite_generators", "each table is an array");
      std::vector<int> table;
      for (const auto& v : g)
        table.push_back(get_int(v, "system.finite_generators", 0, spec.finite_n - 1));
      spec.finite_generators.push_back(std::move(table));
    }
  }
  return spec;
}

inline Json canonical_json(const ExperimentConfig& c) {
  Json j;
  j["system"]["kind"] = c.system.kind;
  j["system"]["k_alpha"] = c.system.k_alpha;
  j["system"]["k_phi"] = c.system.k_phi;
  j["system"]["truncation_m"] = c.system.truncation_m;
  j["system"]["rho"] = rat_str(c.system.rho);
  j["system"]["finite_n"] = c.system.finite_n;
  j["system"]["finite_mode"] = time_mode_name(c.system.finite_mode);
  j["system"]["finite_generators"] = c.system.finite_generators;
  j["precision"] = c.precision;
  j["time"]["mode"] = time_mode_name(c.mode);
  j["time"]["horizon"] = c.horizon.str();
  j["time"]["s_min"] = c.s_min.str();
  j["grids"]["side"] = c.grid_side;
  j["grids"]["pair_side"] = c.pair_side;
  j["grids"]["subset_side"] = c.subset_side;
  j["grids"]["seed"] = c.seed;
  j["epsilons"]["witness"] = rat_str(c.epsilon_witness);
  j["epsilons"]["refute"] = rat_str(c.epsilon_refute);
  j["epsilons"]["relation_tol"] = rat_str(c.relation_tol);
  j["epsilons"]["approach_radius"] = rat_str(c.approach_radius);
  j["epsilons"]["eta"] = rat_str(c.eta);
  j["epsilons"]["delta"] = rat_str(c.delta);
  Json times = Json::array();
  for (const Integer& t : c.candidate_times) times.push_back(t.str());
  j["candidate_times"] = times;
  j["detector"] = c.detector;
  j["envsemi"]["max_states"] = c.envsemi_max_states;
  j["envsemi"]["two_generator_samples"] = c.envsemi_two_generator_samples;
  j["format"] = c.format;
  return j;
}

inline ExperimentConfig parse_config(const Json& j) {
  using namespace cfgdetail;
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  reject_floats(j, "");
  expect_keys(j, "",
              {"system", "precision", "time", "grids", "epsilons", "candidate_times", "detector",
               "envsemi", "format"});

  ExperimentConfig c;
  if (j.contains("system")) c.system = parse_system_spec(j.at("system"));
  if (j.contains("precision")) c.precision = get_int(j.at("precision"), "precision", 20, 2000);
  if (j.contains("time")) {
    const Json& t = j.at("time");
    expect_keys(t, "time", {"mode", "horizon", "s_min"});
    if (t.contains("mode")) c.mode = get_mode(t.at("mode"), "time.mode");
    if (t.contains("horizon")) {
      c.horizon = get_integer(t.at("horizon"), "time.horizon");
      if (c.horizon < 1) throw ConfigError("time.horizon", "must be at least 1");
    }
    if (t.contains("s_min")) {
      c.s_min = get_integer(t.at("s_min"), "time.s_min");
      if (c.s_min < 1) throw ConfigError("time.s_min", "must be at least 1");
    }
  }
  if (j.contains("grids")) {
    const Json& g = j.at("grids");
    expect_keys(g, "grids", {"side", "pair_side", "subset_side", "seed"});
    if (g.contains("side")) c.grid_side = get_int(g.at("side"), "grids.side", 1, 4096);
    if (g.contains("pair_side")) c.pair_side = get_int(g.at("pair_side"), "grids.pair_side", 1, 256);
    if (g.contains("subset_side"))
      c.subset_side = get_int(g.at("subset_side"), "grids.subset_side", 1, 64);
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_unsigned() && !g.at("seed").is_number_integer())
        throw ConfigError("grids.seed", "must be an unsigned integer");
      c.seed = g.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("epsilons")) {
    const Json& e = j.at("epsilons");
    expect_keys(e, "epsilons",
                {"witness", "refute", "relation_tol", "approach_radius", "eta", "delta"});
    auto positive = [](const Rational& q, const char* field) {
      if (!(Rational(0) < q)) throw ConfigError(field, "must be positive");
      return q;
    };
    if (e.contains("witness"))
      c.epsilon_witness = positive(get_rational(e.at("witness"), "epsilons.witness"), "epsilons.witness");
    if (e.contains("refute"))
      c.epsilon_refute = positive(get_rational(e.at("refute"), "epsilons.refute"), "epsilons.refute");
    if (e.contains("relation_tol"))
      c.relation_tol =
          positive(get_rational(e.at("relation_tol"), "epsilons.relation_tol"), "epsilons.relation_tol");
    if (e.contains("approach_radius"))
      c.approach_radius = positive(get_rational(e.at("approach_radius"), "epsilons.approach_radius"),
                                   "epsilons.approach_radius");
    if (e.contains("eta")) c.eta = positive(get_rational(e.at("eta"), "epsilons.eta"), "epsilons.eta");
    if (e.contains("delta"))
      c.delta = positive(get_rational(e.at("delta"), "epsilons.delta"), "epsilons.delta");
  }
  if (j.contains("candidate_times")) {
    const Json& ct = j.at("candidate_times");
    if (!ct.is_array()) throw ConfigError("candidate_times", "must be an array");
    for (const auto& v : ct) {
      Integer t = get_integer(v, "candidate_times");
      if (t < 1) throw ConfigError("candidate_times", "times must be at least 1");
      c.candidate_times.push_back(t);
    }
  }
  if (j.contains("detector"))
    c.detector = get_string(j.at("detector"), "detector",
                            {"uniform-rigidity", "weak-rigidity", "equicontinuity",
                             "rigidity-relation", "regionally-proximal", "proximal", "classify"});
  if (j.contains("envsemi")) {
    const Json& e = j.at("envsemi");
    expect_keys(e, "envsemi", {"max_states", "two_generator_samples"});
    if (e.contains("max_states"))
      c.envsemi_max_states = get_int(e.at("max_states"), "envsemi.max_states", 1, 7);
    if (e.contains("two_generator_samples"))
      c.envsemi_two_generator_samples =
          get_int(e.at("two_generator_samples"), "envsemi.two_generator_samples", 0, 100000);
  }
  if (j.contains("format")) c.format = get_string(j.at("format"), "format", {"csv", "json"});

  c.canonical = canonical_json(c).dump();
  c.hash = fnv1a64(c.canonical);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config", "not valid JSON");
  return parse_config(j);
}

// the configured system, handed to a generic callable; keeps every
// subcommand free of per-kind switch duplication
template <class F>
auto with_system(const ExperimentConfig& c, F&& f) {
  const SystemSpec& s = c.system;
  if (s.kind == "rotation") return f(RotationSystem(s.rho));
  if (s.kind == "skew_product") return f(SkewProductSystem(s.k_alpha, s.k_phi));
  if (s.kind == "circle_family") return f(CircleFamilySystem(s.truncation_m));
  std::vector<TransformMap> gens;
  for (const auto& table : s.finite_generators) {
    TransformMap m;
    for (int v : table) m.table.push_back(static_cast<std::uint8_t>(v));
    gens.push_back(std::move(m));
  }
  std::optional<FiniteOrbitSystem> sys;
  try {
    sys.emplace(FiniteSystem(s.finite_n, s.finite_mode, gens));
  } catch (const DomainError& e) {
    throw ConfigError("system.finite_generators", e.what());
  } catch (const ConfigError&) {
    throw ConfigError("system.finite_generators", "needs exactly one generator table");
  }
  return f(*sys);
}

}  // namespace rigidlab
