#pragma once

// Finite-subset approximants of the space of closed sets, with the Hausdorff
// metric and the induced set dynamics.  Subsets hold exact states and are
// kept sorted in canonical order, so set equality, sup and argmax are all
// reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "systems.hpp"

namespace rigidlab {

template <class State>
class FiniteSubset {
 public:
  explicit FiniteSubset(std::vector<State> pts) : pts_(std::move(pts)) {
    if (pts_.empty()) throw DomainError("finite subset must be nonempty");
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }

  const std::vector<State>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

  bool operator==(const FiniteSubset& o) const { return pts_ == o.pts_; }
  bool operator!=(const FiniteSubset& o) const { return !(*this == o); }

 private:
  std::vector<State> pts_;
};

// Merges points closer than dedup_tol under the system metric; the earliest
// point in canonical order survives.  Tolerance 0 keeps exact dedup only.
template <class Sys>
FiniteSubset<typename Sys::State> make_subset(const Sys& sys,
                                              std::vector<typename Sys::State> pts,
                                              const Rational& dedup_tol = Rational(0)) {
  if (dedup_tol < 0) throw ConfigError("dedup_tol", "must be nonnegative");
  FiniteSubset<typename Sys::State> exact(std::move(pts));
  if (dedup_tol == 0) return exact;
  std::vector<typename Sys::State> kept;
  for (const auto& p : exact.points()) {
    bool merged = false;
    for (const auto& k : kept) {
      if (scalar_less(sys.distance(p, k), dedup_tol)) {
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(p);
  }
  return FiniteSubset<typename Sys::State>(std::move(kept));
}

template <class Sys>
FiniteSubset<typename Sys::State> induced_image(const Sys& sys,
                                                const FiniteSubset<typename Sys::State>& a,
                                                const Integer& n) {
  std::vector<typename Sys::State> out;
  out.reserve(a.size());
  for (const auto& p : a.points()) out.push_back(sys.power(p, n));
  return FiniteSubset<typename Sys::State>(std::move(out));
}

template <class State>
FiniteSubset<State> union_subsets(const FiniteSubset<State>& a, const FiniteSubset<State>& b) {
  std::vector<State> out = a.points();
  out.insert(out.end(), b.points().begin(), b.points().end());
  return FiniteSubset<State>(std::move(out));
}

// Collapses a tuple of states (duplicates allowed) to its underlying set.
template <class State>
FiniteSubset<State> fn_projection(const std::vector<State>& tuple) {
  if (tuple.empty()) throw DomainError("tuple projection needs at least one state");
  return FiniteSubset<State>(tuple);
}

template <class Sys>
auto point_set_distance(const Sys& sys, const typename Sys::State& p,
                        const FiniteSubset<typename Sys::State>& b) {
  auto best = sys.distance(p, b.points().front());
  for (std::size_t i = 1; i < b.points().size(); ++i) {
    auto d = sys.distance(p, b.points()[i]);
    if (scalar_less(d, best)) best = d;
  }
  return best;
}

template <class Sys>
auto directed_hausdorff(const Sys& sys, const FiniteSubset<typename Sys::State>& a,
                        const FiniteSubset<typename Sys::State>& b) {
  auto worst = point_set_distance(sys, a.points().front(), b);
  for (std::size_t i = 1; i < a.points().size(); ++i) {
    auto d = point_set_distance(sys, a.points()[i], b);
    if (scalar_less(worst, d)) worst = d;
  }
  return worst;
}

template <class Sys>
auto hausdorff_distance(const Sys& sys, const FiniteSubset<typename Sys::State>& a,
                        const FiniteSubset<typename Sys::State>& b) {
  return max_scalar(directed_hausdorff(sys, a, b), directed_hausdorff(sys, b, a));
}

// Value plus the realizing pair, ties resolved toward the canonical order
// (and toward the first subset when the two directed sups agree).
template <class Sys>
auto hausdorff_witness(const Sys& sys, const FiniteSubset<typename Sys::State>& a,
                       const FiniteSubset<typename Sys::State>& b) {
  using State = typename Sys::State;
  auto one_way = [&sys](const FiniteSubset<State>& from, const FiniteSubset<State>& to) {
    auto worst = sys.distance(from.points().front(), to.points().front());
    std::pair<State, State> arg{from.points().front(), to.points().front()};
    bool first = true;
    for (const auto& p : from.points()) {
      auto best = sys.distance(p, to.points().front());
      State partner = to.points().front();
      for (const auto& q : to.points()) {
        auto d = sys.distance(p, q);
        if (scalar_less(d, best)) {
          best = d;
          partner = q;
        }
      }
      if (first || scalar_less(worst, best)) {
        worst = best;
        arg = {p, partner};
        first = false;
      }
    }
    return std::make_pair(worst, arg);
  };
  auto ab = one_way(a, b);
  auto ba = one_way(b, a);
  if (scalar_less(ab.first, ba.first)) return ba;
  return ab;
}

template <class Scalar>
struct RecurrenceEntry {
  Integer time;
  Scalar dist;
  bool hit;
};

// Full distance profile over the candidate times, each flagged against
// epsilon.
template <class Sys>
auto set_recurrence_scan(const Sys& sys, const FiniteSubset<typename Sys::State>& a,
                         const std::vector<Integer>& candidate_times, const Rational& epsilon) {
  using Scalar = decltype(sys.distance(a.points().front(), a.points().front()));
  if (candidate_times.empty()) throw ConfigError("candidate_times", "must be nonempty");
  std::vector<RecurrenceEntry<Scalar>> out;
  out.reserve(candidate_times.size());
  for (const Integer& t : candidate_times) {
    Scalar d = hausdorff_distance(sys, a, induced_image(sys, a, t));
    bool hit = scalar_less(d, epsilon);
    out.push_back({t, std::move(d), hit});
  }
  return out;
}

// d_H(f^t A, A) for every t in [1, horizon], in doubles.  The embedding is
// exact up to rounding so entries are good to ~1e-12; any decision closer to
// a threshold than that must be confirmed with the exact metric.
inline std::vector<double> circle_recurrence_survey(const CircleFamilySystem& fam,
                                                    const FiniteSubset<CirclePoint>& a,
                                                    long long horizon) {
  if (horizon < 1) throw ConfigError("horizon", "must be at least 1");
  constexpr double tau = 6.283185307179586476925287;
  const auto& pts = a.points();
  const std::size_t m = pts.size();
  std::vector<long long> den(m);
  std::vector<double> r(m), theta(m), ox(m), oy(m), mx(m), my(m);
  for (std::size_t i = 0; i < m; ++i) {
    den[i] = pts[i].level == 0 ? 1 : (1LL << pts[i].level);
    r[i] = static_cast<double>(Real(fam.radius(pts[i].level)));
    theta[i] = static_cast<double>(Real(pts[i].theta.value));
    ox[i] = r[i] * std::cos(tau * theta[i]);
    oy[i] = r[i] * std::sin(tau * theta[i]);
  }
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (long long t = 1; t <= horizon; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      double turns = theta[i] - static_cast<double>(t % den[i]) / static_cast<double>(den[i]);
      if (turns < 0) turns += 1.0;
      mx[i] = r[i] * std::cos(tau * turns);
      my[i] = r[i] * std::sin(tau * turns);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double best = 1e300;
      for (std::size_t j = 0; j < m; ++j) {
        double dx = mx[i] - ox[j];
        double dy = my[i] - oy[j];
        double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
      }
      if (best > worst) worst = best;
    }
    for (std::size_t j = 0; j < m; ++j) {
      double best = 1e300;
      for (std::size_t i = 0; i < m; ++i) {
        double dx = mx[i] - ox[j];
        double dy = my[i] - oy[j];
        double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
      }
      if (best > worst) worst = best;
    }
    out[static_cast<std::size_t>(t - 1)] = std::sqrt(worst);
  }
  return out;
}

}  // namespace rigidlab
