#pragma once

// Concrete dynamical systems over exact circle coordinates.
//
// Every system exposes the same surface: a State type, step/power for the
// action, a metric, and orbit_distance_floor giving an exact rational lower
// bound on the distance of the two orbits at every time (0 when no such
// bound is claimed).  Metrics return Rational where the geometry allows it
// and Real otherwise; the scalar_* helpers below let callers mix the two.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "precision.hpp"

namespace rigidlab {

inline bool scalar_less(const Rational& a, const Rational& b) { return a < b; }
inline bool scalar_less(const Real& a, const Real& b) { return a < b; }
inline bool scalar_less(const Real& a, const Rational& b) { return a < Real(b); }
inline bool scalar_less(const Rational& a, const Real& b) { return Real(a) < b; }

inline Real scalar_real(const Rational& a) { return Real(a); }
inline const Real& scalar_real(const Real& a) { return a; }

inline Rational max_scalar(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Real max_scalar(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real max_scalar(const Real& a, const Rational& b) { return max_scalar(a, Real(b)); }
inline Real max_scalar(const Rational& a, const Real& b) { return max_scalar(Real(a), b); }

enum class TimeMode { group, semigroup };

inline const char* time_mode_name(TimeMode m) {
  return m == TimeMode::group ? "group" : "semigroup";
}

// Times visited in order of increasing |t|, positive before negative, so the
// first accepted witness is canonical.  Semigroup mode never goes negative.
struct TimeSet {
  TimeMode mode = TimeMode::group;
  Integer horizon{1};

  TimeSet(TimeMode m, Integer h) : mode(m), horizon(std::move(h)) {
    if (horizon < 1) throw ConfigError("horizon", "must be at least 1");
  }

  template <class F>
  void for_each(F&& f) const {
    for (Integer t = 1; t <= horizon; ++t) {
      if (!f(t)) return;
      if (mode == TimeMode::group && !f(Integer(-t))) return;
    }
  }
};

// -------------------------------------------------------------------------
// Rotation of the circle by a fixed angle.

class RotationSystem {
 public:
  using State = Angle1;

  explicit RotationSystem(const Rational& angle) : alpha_(angle) {}

  TimeMode time_mode() const { return TimeMode::group; }
  const Angle1& angle() const { return alpha_; }

  Angle1 step(const Angle1& p) const { return p + alpha_; }
  Angle1 power(const Angle1& p, const Integer& n) const {
    return p + frac_scalar_mult(n, alpha_);
  }

  Rational distance(const Angle1& p, const Angle1& q) const { return ring_distance(p, q); }

  // rotations are isometries, so the distance itself is the floor
  Rational orbit_distance_floor(const Angle1& p, const Angle1& q) const {
    return ring_distance(p, q);
  }

 private:
  Angle1 alpha_;
};

// -------------------------------------------------------------------------
// Skew product on the 2-torus: T(x, y) = (x + alpha, y + phi(x)) where
// phi(x) = psi(x + alpha) - psi(x) and psi is a short cosine sum over the
// fast-growing frequency ladder n_k.  Because phi is a coboundary of psi the
// y-increment over n steps telescopes to psi(x + n alpha) - psi(x), which is
// what power() uses; power_iterated and the per-harmonic geometric route
// exist to check that closed form against the step dynamics.

struct TorusPoint {
  Angle1 x;
  Angle1 y;

  bool operator==(const TorusPoint& o) const { return x == o.x && y == o.y; }
  bool operator!=(const TorusPoint& o) const { return !(*this == o); }
  bool operator<(const TorusPoint& o) const {
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
};

class SkewProductSystem {
 public:
  using State = TorusPoint;

  explicit SkewProductSystem(int k_alpha = 4, int k_phi = 3)
      : consts_(make_constants(k_alpha)), k_phi_(k_phi) {
    if (k_phi < 1 || k_phi >= k_alpha)
      throw ConfigError("k_phi", "must satisfy 1 <= k_phi < k_alpha");
  }

  TimeMode time_mode() const { return TimeMode::group; }
  const RigidConstants& constants() const { return consts_; }
  const Angle1& alpha() const { return consts_.alpha; }
  int k_phi() const { return k_phi_; }

  Real psi(const Angle1& t) const {
    Real acc(0);
    for (int k = 0; k < k_phi_; ++k)
      acc += Real(2) * cos_turns(Rational(consts_.n_seq[k]) * t.value);
    return acc;
  }

  Real phi(const Angle1& x) const { return psi(x + consts_.alpha) - psi(x); }

  // exact fractional part of n * alpha; vanishes iff the denominator of
  // alpha divides n
  Rational x_displacement(const Integer& n) const {
    return frac(Rational(n) * consts_.alpha.value);
  }

  TorusPoint step(const TorusPoint& p) const { return power(p, 1); }

  TorusPoint power(const TorusPoint& p, const Integer& n) const {
    Angle1 xn = p.x + frac_scalar_mult(n, consts_.alpha);
    Real dy = psi(xn) - psi(p.x);
    return {xn, angle_from_real(Real(p.y.value) + dy)};
  }

  // matches repeated step() exactly; reuses psi at the shared endpoint so
  // each iteration costs one psi evaluation
  TorusPoint power_iterated(TorusPoint p, long n) const {
    if (n < 0) throw DomainError("power_iterated: n must be nonnegative");
    Real psi_prev = psi(p.x);
    for (long j = 0; j < n; ++j) {
      Angle1 xn = p.x + consts_.alpha;
      Real psi_next = psi(xn);
      p.y = angle_from_real(Real(p.y.value) + (psi_next - psi_prev));
      p.x = xn;
      psi_prev = psi_next;
    }
    return p;
  }

  TorusPoint power_geometric(const TorusPoint& p, const Integer& n) const {
    Angle1 xn = p.x + frac_scalar_mult(n, consts_.alpha);
    Real b = cocycle_geometric(p.x, n);
    return {xn, angle_from_real(Real(p.y.value) + b)};
  }

  // y-increment of power(., n) starting at x
  Real cocycle_telescoped(const Angle1& x, const Integer& n) const {
    return psi(x + frac_scalar_mult(n, consts_.alpha)) - psi(x);
  }

  // same quantity, summed per harmonic: sum_k 2 Re[(e^{2 pi i n_k alpha} - 1)
  // * sum_{j<n} e^{2 pi i n_k (x + j alpha)}]
  Real cocycle_geometric(const Angle1& x, const Integer& n) const {
    if (n < 0) {
      Angle1 xn = x + frac_scalar_mult(n, consts_.alpha);
      return -cocycle_geometric(xn, -n);
    }
    Cplx one{Real(1), Real(0)};
    Real total(0);
    for (int k = 0; k < k_phi_; ++k) {
      const Integer& nk = consts_.n_seq[k];
      Cplx ck = unit_phase(frac(Rational(nk) * consts_.alpha.value)) - one;
      Cplx gk = harmonic_birkhoff_sum(nk, x, n, consts_.alpha);
      total += Real(2) * (ck.re * gk.re - ck.im * gk.im);
    }
    return total;
  }

  // max |y-increment| over the uniform grid i/grid, i < grid
  Real cocycle_sup_grid(const Integer& n, int grid) const {
    if (grid < 1) throw ConfigError("grid", "must be at least 1");
    Real best(0);
    for (int i = 0; i < grid; ++i) {
      Real v = abs(cocycle_telescoped(Angle1(Rational(i, grid)), n));
      if (v > best) best = v;
    }
    return best;
  }

  Rational distance(const TorusPoint& p, const TorusPoint& q) const {
    return max_scalar(ring_distance(p.x, q.x), ring_distance(p.y, q.y));
  }

  // x-separation is invariant; with equal x the y-separation is invariant too
  Rational orbit_distance_floor(const TorusPoint& p, const TorusPoint& q) const {
    if (p.x != q.x) return ring_distance(p.x, q.x);
    return ring_distance(p.y, q.y);
  }

 private:
  RigidConstants consts_;
  int k_phi_;
};

// -------------------------------------------------------------------------
// Family of concentric circles: level m in [1, truncation] has radius
// 1 - 2^-m and rotates by -2^-m turns per step, level 0 is the fixed unit
// circle.  Points live in the plane; the metric is the ambient one.

struct CirclePoint {
  int level = 0;
  Angle1 theta;

  bool operator==(const CirclePoint& o) const { return level == o.level && theta == o.theta; }
  bool operator!=(const CirclePoint& o) const { return !(*this == o); }
  bool operator<(const CirclePoint& o) const {
    if (level != o.level) return level < o.level;
    return theta < o.theta;
  }
};

class CircleFamilySystem {
 public:
  using State = CirclePoint;

  explicit CircleFamilySystem(int truncation_m) : m_(truncation_m) {
    if (m_ < 2 || m_ > 48)
      throw ConfigError("truncation_m", "must be in [2, 48]");
  }

  TimeMode time_mode() const { return TimeMode::group; }
  int levels() const { return m_; }

  // every level's rotation has order dividing 2^truncation
  Integer period() const { return Integer(pow(Integer(2), static_cast<unsigned>(m_))); }

  Rational radius(int level) const {
    check_level(level);
    if (level == 0) return Rational(1);
    Integer d(pow(Integer(2), static_cast<unsigned>(level)));
    return Rational(Integer(d - 1), d);
  }

  Rational rotation(int level) const {
    check_level(level);
    if (level == 0) return Rational(0);
    return Rational(Integer(-1), Integer(pow(Integer(2), static_cast<unsigned>(level))));
  }

  CirclePoint make_point(int level, const Rational& theta) const {
    check_level(level);
    return {level, Angle1(theta)};
  }

  CirclePoint step(const CirclePoint& p) const {
    check_level(p.level);
    return {p.level, p.theta + Angle1(rotation(p.level))};
  }

  CirclePoint power(const CirclePoint& p, const Integer& n) const {
    check_level(p.level);
    return {p.level, p.theta + Angle1(Rational(n) * rotation(p.level))};
  }

  std::pair<Real, Real> embed(const CirclePoint& p) const {
    Real r(radius(p.level));
    return {r * cos_turns(p.theta.value), r * sin_turns(p.theta.value)};
  }

  Real distance(const CirclePoint& p, const CirclePoint& q) const {
    Rational r = radius(p.level);
    Rational s = radius(q.level);
    Rational delta = (p.theta - q.theta).value;
    Real d2 = Real(Rational(r * r + s * s)) - Real(Rational(2 * r * s)) * cos_turns(delta);
    if (d2 < 0) d2 = 0;
    return sqrt(d2);
  }

  // chord length between a point at this level and its image n steps later;
  // independent of the point
  Real chord_displacement(int level, const Integer& n) const {
    Rational u = ring_norm(frac(Rational(n) * rotation(level)));
    return Real(Rational(2 * radius(level))) * sin_turns(u / 2);
  }

  // double-precision version for long scans; level 0 never moves
  double chord_displacement_fast(int level, long long n) const {
    check_level(level);
    if (level == 0) return 0.0;
    long long den = 1LL << level;
    long long rem = ((n % den) + den) % den;
    long long folded = std::min(rem, den - rem);
    double r = 1.0 - std::ldexp(1.0, -level);
    return 2.0 * r * std::sin(3.14159265358979323846 * static_cast<double>(folded) /
                              static_cast<double>(den));
  }

  // same level: both points rotate rigidly, and chord >= 4 r u for angular
  // separation u <= 1/2; distinct levels: distance >= radial gap always
  Rational orbit_distance_floor(const CirclePoint& p, const CirclePoint& q) const {
    if (p.level == q.level)
      return Rational(4) * radius(p.level) * ring_distance(p.theta, q.theta);
    Rational r = radius(p.level);
    Rational s = radius(q.level);
    return r < s ? Rational(s - r) : Rational(r - s);
  }

 private:
  void check_level(int level) const {
    if (level < 0 || level > m_)
      throw DomainError("level " + std::to_string(level) + " outside [0, " +
                        std::to_string(m_) + "]");
  }

  int m_;
};

// -------------------------------------------------------------------------
// Product of two systems under the max metric.

template <class SysA, class SysB>
class ProductSystem {
 public:
  using State = std::pair<typename SysA::State, typename SysB::State>;

  ProductSystem(SysA a, SysB b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.time_mode() != b_.time_mode())
      throw ConfigError("time_mode", "product factors act over different time sets");
  }

  TimeMode time_mode() const { return a_.time_mode(); }
  const SysA& first() const { return a_; }
  const SysB& second() const { return b_; }

  State step(const State& p) const { return {a_.step(p.first), b_.step(p.second)}; }

  State power(const State& p, const Integer& n) const {
    return {a_.power(p.first, n), b_.power(p.second, n)};
  }

  auto distance(const State& p, const State& q) const {
    return max_scalar(a_.distance(p.first, q.first), b_.distance(p.second, q.second));
  }

  Rational orbit_distance_floor(const State& p, const State& q) const {
    return std::max(a_.orbit_distance_floor(p.first, q.first),
                    b_.orbit_distance_floor(p.second, q.second));
  }

 private:
  SysA a_;
  SysB b_;
};

}  // namespace rigidlab
