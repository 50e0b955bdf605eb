#pragma once

/**
 * @file precision.hpp
 * @brief Exact circle arithmetic and arbitrary-precision real views.
 *
 * Angles live on R/Z as exact rationals in [0,1); addition, subtraction,
 * integer multiples and mod-1 reduction never round.  Rounding happens only
 * when a real-valued view is requested (trig evaluation, decimal printing),
 * at a precision of `default_precision()` decimal digits.  Real views are
 * MPFR-backed, so every evaluation is correctly rounded and reruns are
 * bit-identical.
 */

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rigidlab {

namespace mp = boost::multiprecision;

using Integer  = mp::mpz_int;
using Rational = mp::mpq_rational;
using Real     = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

// ---------------------------------------------------------------------------
// errors

struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& msg)
      : std::runtime_error("config field '" + f + "': " + msg), field(std::move(f)) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PrecisionError : std::runtime_error {
  explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// precision control (decimal digits for real views)

namespace detail {
inline int& precision_digits_ref() {
  static thread_local int digits = 0;
  return digits;
}
}  // namespace detail

inline int default_precision() {
  int& d = detail::precision_digits_ref();
  if (d == 0) {
    d = 120;
    Real::default_precision(static_cast<unsigned>(d));
  }
  return d;
}

inline void set_default_precision(int digits) {
  if (digits < 20 || digits > 2000)
    throw ConfigError("precision", "must lie in [20, 2000] decimal digits");
  detail::precision_digits_ref() = digits;
  Real::default_precision(static_cast<unsigned>(digits));
}

namespace detail {
// pin the working precision before any Real can be constructed; without this
// the first value built in a process would silently use the backend default
struct PrecisionBootstrap {
  PrecisionBootstrap() { default_precision(); }
};
inline const PrecisionBootstrap precision_bootstrap{};
}  // namespace detail

// Scoped override, used by tests.
struct PrecisionScope {
  int saved;
  explicit PrecisionScope(int digits) : saved(default_precision()) { set_default_precision(digits); }
  ~PrecisionScope() { set_default_precision(saved); }
};

// Tolerances tighter than 10^-(P-10) cannot be certified by real views at P
// digits; reject them instead of reporting noise.
inline Rational tolerance_floor() {
  int p = default_precision();
  Integer den = pow(Integer(10), static_cast<unsigned>(p - 10));
  return Rational(1, den);
}

inline void require_certifiable(const Rational& tol, const char* what) {
  if (tol <= 0) throw DomainError(std::string(what) + ": tolerance must be positive");
  if (tol < tolerance_floor())
    throw PrecisionError(std::string(what) + ": tolerance below 10^-(P-10) guard at P=" +
                         std::to_string(default_precision()));
}

// ---------------------------------------------------------------------------
// exact fractional-part arithmetic

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.backend().data(), a.backend().data(), b.backend().data());
  return q;
}

// frac(q) in [0,1), exact
inline Rational frac(const Rational& q) {
  return q - floor_div(numerator(q), denominator(q));
}

inline Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// ---------------------------------------------------------------------------
// Angle1: a point of R/Z

struct Angle1 {
  Rational value;      // canonical representative in [0,1)
  int precision_hint;  // decimal digits for real views; 0 = inherit default

  Angle1() : value(0), precision_hint(0) {}
  explicit Angle1(const Rational& v, int hint = 0) : value(frac(v)), precision_hint(hint) {}

  int hint() const { return precision_hint > 0 ? precision_hint : default_precision(); }

  friend bool operator==(const Angle1& a, const Angle1& b) { return a.value == b.value; }
  friend bool operator!=(const Angle1& a, const Angle1& b) { return a.value != b.value; }
  friend bool operator<(const Angle1& a, const Angle1& b) { return a.value < b.value; }
};

inline int combine_hints(const Angle1& a, const Angle1& b) {
  if (a.precision_hint == 0 && b.precision_hint == 0) return 0;
  return std::max(a.hint(), b.hint());
}

inline Angle1 operator+(const Angle1& a, const Angle1& b) {
  return Angle1(a.value + b.value, combine_hints(a, b));
}
inline Angle1 operator-(const Angle1& a, const Angle1& b) {
  return Angle1(a.value - b.value, combine_hints(a, b));
}

// n * a mod 1, exact
inline Angle1 frac_scalar_mult(const Integer& n, const Angle1& a) {
  return Angle1(Rational(n) * a.value, a.precision_hint);
}

// min(|x-y|, 1-|x-y|) on canonical representatives; exact, in [0, 1/2]
inline Rational ring_distance(const Angle1& a, const Angle1& b) {
  Rational d = frac(a.value - b.value);
  Rational e = 1 - d;
  return d < e ? d : e;
}

inline Rational ring_norm(const Rational& q) {
  Rational d = frac(q);
  Rational e = 1 - d;
  return d < e ? d : e;
}

// ---------------------------------------------------------------------------
// real views

namespace detail {
inline const Real& two_pi() {
  static thread_local int cached_digits = -1;
  static thread_local Real v;
  if (cached_digits != default_precision()) {
    v.precision(static_cast<unsigned>(default_precision()));
    mpfr_const_pi(v.backend().data(), MPFR_RNDN);
    v *= 2;
    cached_digits = default_precision();
  }
  return v;
}
}  // namespace detail

inline Real to_real(const Rational& q) { return Real(q); }

// cos(2*pi*t), sin(2*pi*t) with t reduced mod 1 exactly before rounding
inline Real cos_turns(const Rational& turns) {
  Real t(frac(turns));
  return cos(detail::two_pi() * t);
}
inline Real sin_turns(const Rational& turns) {
  Real t(frac(turns));
  return sin(detail::two_pi() * t);
}

// Every finite MPFR value is m * 2^e; the conversion below is exact.
inline Rational to_rational_exact(const Real& x) {
  if (x == 0) return Rational(0);
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.backend().data(), x.backend().data());
  Rational r(m);
  if (e >= 0) {
    r *= pow(Integer(2), static_cast<unsigned>(e));
  } else {
    r /= pow(Integer(2), static_cast<unsigned>(-e));
  }
  return r;
}

// quantize a real displacement onto the circle (used by skew steps: the trig
// evaluation is the only rounding point, everything after stays exact)
inline Angle1 angle_from_real(const Real& x, int hint = 0) {
  return Angle1(to_rational_exact(x), hint);
}

// ---------------------------------------------------------------------------
// minimal complex pairs for phase sums

struct Cplx {
  Real re, im;
  Cplx() : re(0), im(0) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    Real n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
};

inline Real abs_c(const Cplx& z) { return sqrt(z.re * z.re + z.im * z.im); }

// e^{2*pi*i*turns}
inline Cplx unit_phase(const Rational& turns) {
  Rational f = frac(turns);
  Real t(f);
  Real a = detail::two_pi() * t;
  return {cos(a), sin(a)};
}

// ---------------------------------------------------------------------------
// the constants ladder: n_1 = 100, n_{k+1} = (n_1 ... n_k)^3, alpha = sum 1/n_k

struct RigidConstants {
  int k_alpha = 0;
  std::vector<Integer> n_seq;
  Angle1 alpha;
};

inline RigidConstants make_constants(int k_alpha) {
  if (k_alpha < 1 || k_alpha > 6)
    throw ConfigError("k_alpha", "truncation depth must lie in [1, 6]");
  RigidConstants c;
  c.k_alpha = k_alpha;
  Integer prod = 1;
  Rational a = 0;
  for (int k = 0; k < k_alpha; ++k) {
    Integer nk = (k == 0) ? Integer(100) : Integer(prod * prod * prod);
    c.n_seq.push_back(nk);
    prod *= nk;
    a += Rational(1, nk);
  }
  c.alpha = Angle1(a);
  return c;
}

// Sum_{j=0..n-1} e^{2*pi*i*m*(x + j*a)} via the geometric closed form.
// The ratio e^{2*pi*i*m*a} is 1 exactly iff frac(m*a) = 0; that branch is
// detected on rationals, not numerically.  Dividing by e^{2*pi*i*m*a} - 1
// amplifies absolute error by its inverse modulus, which is known exactly
// from frac(m*a), so the trig runs at an elevated internal precision and the
// result is rounded back once at the end.
inline Cplx harmonic_birkhoff_sum(const Integer& m, const Angle1& x, const Integer& n,
                                  const Angle1& a) {
  if (n < 0) throw DomainError("harmonic_birkhoff_sum: n must be nonnegative");
  if (n == 0) return {Real(0), Real(0)};
  Rational fma = frac(Rational(m) * a.value);
  if (fma == 0) {
    Cplx base = unit_phase(Rational(m) * x.value);
    Real nn(n);
    return {base.re * nn, base.im * nn};
  }
  // guard digits: leading zeros of |e^{2 pi i m a} - 1| ~ ring(m a), plus the
  // magnitude of the sum bound n, plus slack
  Rational mag = ring_norm(fma);
  long zeros = static_cast<long>(denominator(mag).str().size()) -
               static_cast<long>(numerator(mag).str().size()) + 1;
  if (zeros < 0) zeros = 0;
  long extra = zeros + static_cast<long>(n.str().size()) + 12;
  long elevated = default_precision() + extra;
  if (elevated > 2000)
    throw PrecisionError("harmonic_birkhoff_sum: required internal precision " +
                         std::to_string(elevated) + " digits exceeds the guard");
  Rational re_q, im_q;
  {
    PrecisionScope scope(static_cast<int>(elevated));
    Cplx base = unit_phase(Rational(m) * x.value);
    Cplx one{Real(1), Real(0)};
    Cplx num = unit_phase(Rational(m) * Rational(n) * a.value) - one;
    Cplx den = unit_phase(fma) - one;
    Cplx out = base * (num / den);
    re_q = to_rational_exact(out.re);
    im_q = to_rational_exact(out.im);
  }
  return {Real(re_q), Real(im_q)};
}

// ---------------------------------------------------------------------------
// serialization helpers (all reports print exact "p/q" or fixed-width
// scientific strings so reruns are byte-identical)

inline std::string rat_str(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string sci_str(const Real& x, int digits = 40) {
  if (x == 0) return "0";
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

namespace detail {

// strict decimal integer; GMP's string constructor auto-detects base and
// would read a leading zero as octal
inline Integer integer_base10(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("empty integer literal");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("non-decimal digit");
  while (i + 1 < s.size() && s[i] == '0') ++i;
  Integer v(s.substr(i));
  return neg ? Integer(-v) : v;
}

}  // namespace detail

inline Rational parse_rational(const std::string& s, const std::string& field) {
  auto fail = [&]() -> Rational { throw ConfigError(field, "cannot parse '" + s + "' as a rational"); };
  if (s.empty()) return fail();
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Integer p = detail::integer_base10(s.substr(0, slash));
      Integer q = detail::integer_base10(s.substr(slash + 1));
      if (q == 0) return fail();
      return Rational(p, q);
    }
    // decimal / scientific notation, converted exactly
    std::string t = s;
    long expo = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
      expo = std::stol(t.substr(epos + 1));
      t = t.substr(0, epos);
    }
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
      neg = t[0] == '-';
      t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string digits = t;
    long scale = 0;
    if (dot != std::string::npos) {
      digits = t.substr(0, dot) + t.substr(dot + 1);
      scale = static_cast<long>(t.size() - dot - 1);
    }
    if (digits.empty()) return fail();
    Integer num = detail::integer_base10(digits);
    Rational r(num);
    long net = expo - scale;
    if (net > 0) r *= pow(Integer(10), static_cast<unsigned>(net));
    if (net < 0) r /= pow(Integer(10), static_cast<unsigned>(-net));
    return neg ? Rational(-r) : r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    return fail();
  }
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace rigidlab
