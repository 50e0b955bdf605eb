#pragma once

// Exact envelope algebra for finite state spaces.  The closure of a finite
// transformation set in the pointwise topology is just the generated
// semigroup (plus identity and inverses in group mode), so idempotents,
// minimal left ideals, proximality and almost periodicity all reduce to
// finite table computations with no tolerances anywhere.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "systems.hpp"

namespace rigidlab {

struct TransformMap {
  std::vector<std::uint8_t> table;

  TransformMap() = default;
  explicit TransformMap(std::vector<std::uint8_t> t) : table(std::move(t)) {}

  static TransformMap identity(int n) {
    std::vector<std::uint8_t> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    return TransformMap(std::move(t));
  }

  int size() const { return static_cast<int>(table.size()); }
  std::uint8_t apply(std::uint8_t x) const { return table[x]; }

  bool is_bijective() const {
    std::uint32_t seen = 0;
    for (std::uint8_t v : table) seen |= (1u << v);
    return std::popcount(seen) == size();
  }

  TransformMap inverse() const {
    if (!is_bijective()) throw DomainError("cannot invert a non-bijective map");
    std::vector<std::uint8_t> inv(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) inv[table[i]] = static_cast<std::uint8_t>(i);
    return TransformMap(std::move(inv));
  }

  bool operator==(const TransformMap& o) const { return table == o.table; }
  bool operator!=(const TransformMap& o) const { return table != o.table; }
  bool operator<(const TransformMap& o) const { return table < o.table; }
};

// (f after g)(x) = f(g(x))
inline TransformMap compose(const TransformMap& f, const TransformMap& g) {
  std::vector<std::uint8_t> t(g.table.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = f.table[g.table[i]];
  return TransformMap(std::move(t));
}

struct FiniteSystem {
  int n = 0;
  TimeMode mode = TimeMode::semigroup;
  std::vector<TransformMap> generators;

  FiniteSystem(int states, TimeMode m, std::vector<TransformMap> gens)
      : n(states), mode(m), generators(std::move(gens)) {
    if (n < 1 || n > 10) throw ConfigError("n", "state count must lie in [1, 10]");
    if (generators.empty()) throw ConfigError("generators", "need at least one map");
    for (const auto& g : generators) {
      if (g.size() != n) throw DomainError("generator table size does not match state count");
      for (std::uint8_t v : g.table)
        if (v >= n) throw DomainError("generator table entry out of range");
      if (mode == TimeMode::group && !g.is_bijective())
        throw DomainError("group mode requires bijective generators");
    }
  }
};

struct SemigroupClosure {
  int n = 0;
  TimeMode mode = TimeMode::semigroup;
  std::vector<TransformMap> elements;   // canonical order
  std::vector<TransformMap> seeds;      // acting translation set
  std::vector<TransformMap> generators;
  bool contains_identity = false;
  std::optional<std::vector<std::vector<std::uint16_t>>> cayley;

  int index_of(const TransformMap& p) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || !(*it == p)) return -1;
    return static_cast<int>(it - elements.begin());
  }
};

// Every word in the seeds arises by repeatedly appending one seed on the
// inner side, so a right-multiplication sweep reaches the whole closure.
inline SemigroupClosure closure(const FiniteSystem& sys, int cayley_cap = 512,
                                std::size_t max_elements = 1000000) {
  SemigroupClosure out;
  out.n = sys.n;
  out.mode = sys.mode;
  out.generators = sys.generators;
  out.seeds = sys.generators;
  if (sys.mode == TimeMode::group) {
    out.seeds.push_back(TransformMap::identity(sys.n));
    for (const auto& g : sys.generators) out.seeds.push_back(g.inverse());
    std::sort(out.seeds.begin(), out.seeds.end());
    out.seeds.erase(std::unique(out.seeds.begin(), out.seeds.end()), out.seeds.end());
  }

  std::set<TransformMap> seen(out.seeds.begin(), out.seeds.end());
  std::vector<TransformMap> queue(seen.begin(), seen.end());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    TransformMap current = queue[head];
    for (const auto& g : out.seeds) {
      TransformMap next = compose(current, g);
      if (seen.insert(next).second) {
        if (seen.size() > max_elements)
          throw DomainError("closure exceeded " + std::to_string(max_elements) + " elements");
        queue.push_back(std::move(next));
      }
    }
  }

  out.elements.assign(seen.begin(), seen.end());
  out.contains_identity = out.index_of(TransformMap::identity(sys.n)) >= 0;

  if (static_cast<int>(out.elements.size()) <= cayley_cap) {
    std::vector<std::vector<std::uint16_t>> table(out.elements.size());
    for (std::size_t i = 0; i < out.elements.size(); ++i) {
      table[i].resize(out.elements.size());
      for (std::size_t j = 0; j < out.elements.size(); ++j) {
        int k = out.index_of(compose(out.elements[i], out.elements[j]));
        if (k < 0) throw std::logic_error("closure not closed under composition");
        table[i][j] = static_cast<std::uint16_t>(k);
      }
    }
    out.cayley = std::move(table);
  }
  return out;
}

inline std::vector<TransformMap> idempotents(const SemigroupClosure& e) {
  std::vector<TransformMap> out;
  for (const auto& p : e.elements)
    if (compose(p, p) == p) out.push_back(p);
  return out;
}

inline std::vector<std::vector<TransformMap>> minimal_left_ideals(const SemigroupClosure& e) {
  std::set<std::vector<TransformMap>> ideals;
  for (const auto& p : e.elements) {
    std::set<TransformMap> ip;
    for (const auto& q : e.elements) ip.insert(compose(q, p));
    ideals.insert(std::vector<TransformMap>(ip.begin(), ip.end()));
  }

  std::vector<std::vector<TransformMap>> out;
  for (const auto& cand : ideals) {
    bool minimal = true;
    for (const auto& other : ideals) {
      if (other.size() < cand.size() &&
          std::includes(cand.begin(), cand.end(), other.begin(), other.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(cand);
  }

  for (const auto& ideal : out) {
    bool has_idempotent = false;
    for (const auto& p : ideal)
      if (compose(p, p) == p) {
        has_idempotent = true;
        break;
      }
    if (!has_idempotent) throw std::logic_error("minimal left ideal without idempotent");
  }
  return out;
}

inline std::vector<TransformMap> minimal_idempotents(const SemigroupClosure& e) {
  auto ideals = minimal_left_ideals(e);
  std::vector<TransformMap> out;
  for (const auto& u : idempotents(e)) {
    for (const auto& ideal : ideals) {
      if (std::binary_search(ideal.begin(), ideal.end(), u)) {
        out.push_back(u);
        break;
      }
    }
  }
  return out;
}

// Pairs collapsed by some element.  The minimal-idempotent route must agree
// exactly; a mismatch means the algebra itself is broken.
inline std::vector<std::pair<int, int>> proximal_pairs(const SemigroupClosure& e) {
  auto min_idem = minimal_idempotents(e);
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < e.n; ++x) {
    for (int y = x + 1; y < e.n; ++y) {
      bool direct = false;
      for (const auto& p : e.elements)
        if (p.apply(static_cast<std::uint8_t>(x)) == p.apply(static_cast<std::uint8_t>(y))) {
          direct = true;
          break;
        }
      bool via_min = false;
      for (const auto& u : min_idem)
        if (u.apply(static_cast<std::uint8_t>(x)) == u.apply(static_cast<std::uint8_t>(y))) {
          via_min = true;
          break;
        }
      if (direct != via_min)
        throw std::logic_error("proximality cross-check failed for a state pair");
      if (direct) out.emplace_back(x, y);
    }
  }
  return out;
}

struct DistalFlags {
  bool distal = false;
  bool group = false;
  bool unique_identity_idempotent = false;
};

// The three predicates are computed along independent routes so their
// equivalence can be asserted by callers.
inline DistalFlags is_distal_equiv_group(const FiniteSystem& sys) {
  SemigroupClosure e = closure(sys);
  DistalFlags f;
  f.distal = proximal_pairs(e).empty();

  f.group = true;
  for (const auto& p : e.elements) {
    if (!p.is_bijective() || e.index_of(p.inverse()) < 0) {
      f.group = false;
      break;
    }
  }

  auto idem = idempotents(e);
  f.unique_identity_idempotent =
      idem.size() == 1 && idem.front() == TransformMap::identity(sys.n);
  return f;
}

inline std::uint32_t dp_apply(const TransformMap& p, std::uint32_t set) {
  if (set == 0) throw DomainError("state set must be nonempty");
  std::uint32_t out = 0;
  std::uint32_t rest = set;
  while (rest) {
    int b = std::countr_zero(rest);
    rest &= rest - 1;
    out |= (1u << p.apply(static_cast<std::uint8_t>(b)));
  }
  return out;
}

// Subsets fixed by some minimal idempotent, cross-checked against direct
// minimality of the subset's orbit in the induced system on nonempty sets.
inline std::vector<std::uint32_t> almost_periodic_sets(const FiniteSystem& sys) {
  SemigroupClosure e = closure(sys);
  auto min_idem = minimal_idempotents(e);

  std::uint32_t full = (sys.n == 32 ? 0xffffffffu : (1u << sys.n) - 1u);
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 1; a <= full; ++a) {
    bool fixed = false;
    for (const auto& u : min_idem)
      if (dp_apply(u, a) == a) {
        fixed = true;
        break;
      }

    std::set<std::uint32_t> reach;
    for (const auto& p : e.elements) reach.insert(dp_apply(p, a));
    bool orbit_minimal = true;
    for (std::uint32_t b : reach) {
      bool back = false;
      for (const auto& p : e.elements)
        if (dp_apply(p, b) == a) {
          back = true;
          break;
        }
      if (!back) {
        orbit_minimal = false;
        break;
      }
    }

    if (fixed != orbit_minimal)
      throw std::logic_error("almost periodicity cross-check failed for a subset");
    if (fixed) out.push_back(a);
  }
  return out;
}

// Whether translation reaches the whole closure from the identity (group
// mode) or from some generator (semigroup mode).
inline bool envelope_orbit_transitive(const FiniteSystem& sys) {
  SemigroupClosure e = closure(sys);

  auto reaches_all = [&e](const TransformMap& start) {
    std::set<TransformMap> reach{start};
    std::vector<TransformMap> queue{start};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      TransformMap current = queue[head];
      for (const auto& g : e.seeds) {
        TransformMap next = compose(current, g);
        if (reach.insert(next).second) queue.push_back(std::move(next));
      }
    }
    return reach.size() == e.elements.size();
  };

  if (sys.mode == TimeMode::group) return reaches_all(TransformMap::identity(sys.n));
  for (const auto& g : sys.generators)
    if (reaches_all(g)) return true;
  return false;
}

}  // namespace rigidlab
