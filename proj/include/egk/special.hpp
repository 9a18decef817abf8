#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"
#include "egk/quadrature.hpp"

namespace egk {

inline double gamma_fn(double x) {
  require(x > 0 && x <= 50, "gamma_fn: x must lie in (0, 50]");
  return std::tgamma(x);
}

namespace detail {
// Keep a recurrence pair in range; returns the amount folded into the exponent.
template <class T>
double renormalize(T& a, T& b) {
  const double m = std::max(std::abs(a), std::abs(b));
  if (m > 1e150 || (m < 1e-150 && m > 0)) {
    const double e = std::log(m);
    a /= m;
    b /= m;
    return e;
  }
  return 0.0;
}
}  // namespace detail

// t_j(x) = sqrt((τ/2)^j / j!) H_j(x), j = 0..n-1, through the fused three-term recurrence.
inline std::vector<LogComplex> hermite_weighted_seq(cplx x, double tau, int n) {
  require(tau > 0 && tau <= 1, "hermite_weighted_seq: tau must lie in (0,1]");
  require(n >= 1, "hermite_weighted_seq: n >= 1");
  std::vector<LogComplex> out;
  out.reserve(n);
  out.push_back(LogComplex::one());
  if (n == 1) return out;
  cplx prev(1.0, 0.0), cur = std::sqrt(2 * tau) * x;
  double shift = 0.0;
  out.push_back(LogComplex::from_complex(cur));
  for (int j = 1; j + 1 < n; ++j) {
    const double jj = j;
    cplx next = std::sqrt(2 * tau / (jj + 1)) * x * cur - tau * std::sqrt(jj / (jj + 1)) * prev;
    prev = cur;
    cur = next;
    shift += detail::renormalize(prev, cur);
    LogComplex v = LogComplex::from_complex(cur);
    if (!v.is_zero()) v.log_mod += shift;
    out.push_back(v);
  }
  return out;
}

// Orthonormal Hermite functions ψ_j(x) = (2^j j! √π)^{-1/2} H_j(x) e^{-x²/2}, j = 0..n-1.
inline std::vector<LogComplex> hermite_function_seq(double x, int n) {
  require(n >= 1, "hermite_function_seq: n >= 1");
  std::vector<LogComplex> out;
  out.reserve(n);
  const double base = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  out.emplace_back(base, 0.0);
  if (n == 1) return out;
  double prev = 1.0, cur = std::sqrt(2.0) * x, shift = base;
  auto push = [&](double v) {
    LogComplex l = LogComplex::from_real(v);
    if (!l.is_zero()) l.log_mod += shift;
    out.push_back(l);
  };
  push(cur);
  for (int j = 1; j + 1 < n; ++j) {
    const double jj = j;
    double next = std::sqrt(2.0 / (jj + 1)) * x * cur - std::sqrt(jj / (jj + 1)) * prev;
    prev = cur;
    cur = next;
    shift += detail::renormalize(prev, cur);
    push(cur);
  }
  return out;
}

// Ĵ_ν(w) = Σ_k (-w/4)^k / (k! Γ(ν+k+1)), so that J_ν(z) = (z/2)^ν Ĵ_ν(z²).
inline cplx bessel_j_hat(double nu, cplx w) {
  require(nu >= -0.5, "bessel_j_hat: nu >= -1/2");
  require(std::isfinite(w.real()) && std::isfinite(w.imag()), "bessel_j_hat: non-finite argument");
  using lc = std::complex<long double>;
  const lc q = -lc(w.real(), w.imag()) / 4.0L;
  lc term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
  lc sum = term;
  for (int k = 0; k < 500; ++k) {
    term *= q / (static_cast<long double>(k + 1) * (static_cast<long double>(nu) + k + 1));
    sum += term;
    // past the peak of the terms, the next ones shrink geometrically
    if (k + 1 > std::sqrt(std::abs(q)) && std::abs(term) <= 1e-16L * std::abs(sum))
      return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
  }
  throw ConvergenceError("bessel_j_hat: series did not converge in 500 terms");
}

// Classical J_ν(x) for x > 0 via Ĵ.
inline double bessel_j(double nu, double x) {
  return std::pow(x / 2, nu) * bessel_j_hat(nu, cplx(x * x, 0.0)).real();
}

namespace detail {

// Ai(0) and -Ai'(0) as double-double so the binary128 series keeps its digits
constexpr double kAi0Hi = 0.3550280538878172, kAi0Lo = 2.05233632436212e-17;
constexpr double kAip0Hi = 0.2588194037928068, kAip0Lo = -2.522243111610832e-17;
constexpr double kAirySwitch = 9.0;

struct AiryPair {
  double ai, aip;
};

// Maclaurin series in type Q. Terms peak near e^{(2/3)|x|^{3/2}} while Ai can be tiny,
// so the caller picks the precision from |x|.
template <class Q>
AiryPair airy_series(double xd) {
  const Q x = xd, x3 = x * x * x;
  Q f = 1, g = x, fp = 0, gp = 1;
  Q a = 1, b = x;
  for (int k = 0; k < 400; ++k) {
    const Q k3 = 3 * k;
    a *= x3 / ((k3 + 2) * (k3 + 3));
    b *= x3 / ((k3 + 3) * (k3 + 4));
    f += a;
    g += b;
    if (x != 0) {
      fp += a * (k3 + 3) / x;
      gp += b * (k3 + 4) / x;
    }
    Q mag = (a < 0 ? -a : a) + (b < 0 ? -b : b);
    if (k > 4 && mag < Q(1e-36)) break;
  }
  const Q c1 = Q(kAi0Hi) + Q(kAi0Lo), c2 = Q(kAip0Hi) + Q(kAip0Lo);
  return {static_cast<double>(c1 * f - c2 * g), static_cast<double>(c1 * fp - c2 * gp)};
}

// Large-|x| expansions truncated at the smallest term.
inline AiryPair airy_asymptotic(double x) {
  const double ax = std::abs(x);
  const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  std::vector<double> u{1.0}, v{1.0};
  for (int k = 1; k < 60; ++k) {
    double uk = u.back() * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    u.push_back(uk);
    v.push_back(-(6.0 * k + 1) / (6.0 * k - 1) * uk);
  }
  const double sqpi = std::sqrt(std::numbers::pi);
  if (x > 0) {
    double su = 0, sv = 0, zp = 1, last = 1e300;
    for (std::size_t k = 0; k < u.size(); ++k) {
      double t = u[k] / zp;
      if (std::abs(t) > last) break;
      last = std::abs(t);
      double sg = (k % 2) ? -1.0 : 1.0;
      su += sg * t;
      sv += sg * v[k] / zp;
      zp *= zeta;
    }
    const double e = std::exp(-zeta);
    return {e * su / (2 * sqpi * std::pow(x, 0.25)), -std::pow(x, 0.25) * e * sv / (2 * sqpi)};
  }
  double ue = 0, uo = 0, ve = 0, vo = 0, zp = 1, last = 1e300;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double t = u[k] / zp;
    if (std::abs(t) > last) break;
    last = std::abs(t);
    const double sg = ((k / 2) % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) {
      ue += sg * t;
      ve += sg * v[k] / zp;
    } else {
      uo += sg * t;
      vo += sg * v[k] / zp;
    }
    zp *= zeta;
  }
  const double th = zeta - std::numbers::pi / 4, c = std::cos(th), s = std::sin(th);
  const double r = std::pow(ax, 0.25);
  return {(c * ue + s * uo) / (sqpi * r), r * (s * ve - c * vo) / sqpi};
}

inline AiryPair airy_pair(double x) {
  const double ax = std::abs(x);
  if (ax <= 4.5) return airy_series<long double>(x);
  if (ax <= kAirySwitch) return airy_series<__float128>(x);
  return airy_asymptotic(x);
}

}  // namespace detail

inline double airy_ai(double x) {
  require(x >= -20 && x <= 40, "airy_ai: x must lie in [-20, 40]");
  return detail::airy_pair(x).ai;
}

inline double airy_ai_prime(double x) {
  require(x >= -20 && x <= 40, "airy_ai_prime: x must lie in [-20, 40]");
  return detail::airy_pair(x).aip;
}

// Ai with no range check; beyond 40 it is below e^{-168} and reported as 0.
inline double airy_ai_unchecked(double x) { return x > 40 ? 0.0 : detail::airy_pair(x).ai; }

// Ai₁(ζ) = ∫_ζ^∞ Ai(s) ds.
inline double airy_ai_integral(double zeta, const QuadratureSpec& spec = {16, 1e-14, 10}) {
  require(zeta >= -20 && zeta <= 40, "airy_ai_integral: zeta must lie in [-20, 40]");
  auto ai = [](double s) { return airy_ai_unchecked(s); };
  if (zeta < 0) {
    // ∫_0^∞ Ai = 1/3. One composite call over [ζ, 0] starting from unit-length panels: a single panel
    // straddling a zero of Ai can integrate to nearly nothing and never pass a relative test.
    const int panels = static_cast<int>(std::ceil(-zeta));
    QuadratureSpec s = spec;
    s.abscissa_count = std::max(spec.abscissa_count, 16 * panels);
    return 1.0 / 3.0 + gauss_legendre(ai, zeta, 0.0, s);
  }
  // Ai(s) <= e^{-(2/3)s^{3/2}}: stop once the exponent has dropped by 40 beyond ζ
  const double z32 = zeta * std::sqrt(zeta);
  const double upper = std::pow(z32 + 60.0, 2.0 / 3.0);
  double sum = 0.0, lo = zeta;
  const double h = std::max(0.05, std::min(1.0, 1.0 / std::sqrt(std::max(zeta, 1e-3))));
  while (lo < upper) {
    double hi = std::min(upper, lo + h);
    sum += gauss_legendre(ai, lo, hi, spec);
    lo = hi;
  }
  return sum;
}

}  // namespace egk
