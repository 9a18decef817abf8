#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"

namespace egk {

struct QuadratureSpec {
  int abscissa_count = 64;
  double rel_tol = 1e-12;
  int max_refinements = 12;
};

struct QuadInfo {
  int nodes = 0;
  int refinements = 0;
  // log10 of (largest node term / result); digits lost to cancellation
  double cancellation_digits = 0.0;
  bool converged = false;
};

// (1/2πi)∮_{|s|=r} f(s) ds by the trapezoid rule, f returning LogComplex.
// Nodes are nested under doubling so every refinement reuses the previous sum.
template <class F>
LogComplex circle_trapezoid(F&& f, double radius, const QuadratureSpec& spec, QuadInfo* info = nullptr,
                            double phase_offset = 0.0) {
  require(radius > 0, "circle_trapezoid: radius must be positive");
  require(spec.abscissa_count > 0 && spec.rel_tol > 0 && spec.max_refinements > 0,
          "circle_trapezoid: bad QuadratureSpec");
  constexpr double two_pi = 2 * std::numbers::pi;
  long n = spec.abscissa_count;
  LogSum total;
  auto add_nodes = [&](long count, long stride_num, double offset) {
    for (long k = 0; k < count; ++k) {
      double th = phase_offset + offset + two_pi * static_cast<double>(k) / static_cast<double>(stride_num);
      cplx s = std::polar(radius, th);
      // ds/(2πi) = s dθ/(2π); the 1/N comes later
      total.add(f(s) * LogComplex(std::log(radius), th));
    }
  };
  add_nodes(n, n, 0.0);
  LogComplex est = total.value() / LogComplex::from_real(static_cast<double>(n));
  constexpr double eps = 2.220446049250313e-16;
  for (int r = 1; r <= spec.max_refinements; ++r) {
    add_nodes(n, n, std::numbers::pi / static_cast<double>(n));
    n *= 2;
    LogComplex next = total.value() / LogComplex::from_real(static_cast<double>(n));
    const double noise = total.max_log_mod() + std::log(64 * eps);
    LogComplex diff = next - est;
    const bool ok = diff.is_zero() || diff.log_mod <= std::max(std::log(spec.rel_tol) + next.log_mod, noise);
    est = next;
    if (ok) {
      if (info) {
        info->nodes = static_cast<int>(n);
        info->refinements = r;
        info->cancellation_digits = next.is_zero() ? 0.0 : (total.max_log_mod() - next.log_mod) / std::log(10.0);
        info->converged = true;
      }
      return est;
    }
  }
  std::ostringstream os;
  os << "circle_trapezoid: no convergence at radius " << radius << " with " << n << " nodes";
  if (info) {
    info->nodes = static_cast<int>(n);
    info->refinements = spec.max_refinements;
    info->converged = false;
  }
  throw ConvergenceError(os.str());
}

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss–Legendre nodes on [-1,1] by Newton iteration on P_m.
inline Rule gauss_legendre_rule(int m) {
  require(m >= 1, "gauss_legendre_rule: m >= 1");
  if (m == 1) return Rule{{0.0}, {2.0}};
  Rule r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[m - 1 - i] = x;
    r.w[i] = w;
    r.w[m - 1 - i] = w;
  }
  if (m % 2 == 1) r.x[m / 2] = 0.0;
  return r;
}

inline const Rule& gl16() {
  static const Rule r = gauss_legendre_rule(16);
  return r;
}

template <class F>
auto gl_panels(F& f, double a, double b, long panels) {
  const Rule& r = gl16();
  const double h = (b - a) / static_cast<double>(panels);
  using T = decltype(f(a));
  T sum{};
  for (long p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    T part{};
    for (std::size_t i = 0; i < r.x.size(); ++i) part += r.w[i] * f(lo + 0.5 * h * (r.x[i] + 1.0));
    sum += part * (0.5 * h);
  }
  return sum;
}

// Composite 16-point Gauss–Legendre; panel count doubles until successive sums agree.
template <class F>
auto gauss_legendre(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  long panels = std::max(1, spec.abscissa_count / 16);
  auto est = gl_panels(f, a, b, panels);
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    auto next = gl_panels(f, a, b, panels);
    const double d = std::abs(next - est);
    est = next;
    if (d <= spec.rel_tol * std::abs(next) || d < 1e-300) return est;
  }
  throw ConvergenceError("gauss_legendre: no convergence on [" + std::to_string(a) + "," + std::to_string(b) + "]");
}

// ∫_a^∞ f. tail_bound(x) must bound ∫_x^∞ |f|; windows double in length until it is negligible.
template <class F, class Tail>
auto semi_infinite(F&& f, double a, Tail&& tail_bound, double scale, const QuadratureSpec& spec = {}) {
  require(scale > 0, "semi_infinite: scale must be positive");
  using T = decltype(f(a));
  T sum{};
  double lo = a, h = scale;
  for (int k = 0; k < 200; ++k) {
    sum += gauss_legendre(f, lo, lo + h, spec);
    lo += h;
    if (tail_bound(lo) <= spec.rel_tol * std::abs(sum) || tail_bound(lo) < 1e-300) return sum;
    h *= 2;
  }
  throw ConvergenceError("semi_infinite: tail bound never fell below tolerance");
}

// Gauss–Hermite for weight e^{-x^2}, via the orthonormal recurrence.
inline Rule gauss_hermite_rule(int m) {
  require(m >= 1 && m <= 200, "gauss_hermite_rule: 1 <= m <= 200");
  Rule r;
  r.x.assign(m, 0.0);
  r.w.assign(m, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * m + 1) - 1.85575 * std::pow(2.0 * m + 1, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * r.x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * r.x[1];
    else
      z = 2.0 * z - r.x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    r.x[i] = z;
    r.x[m - 1 - i] = -z;
    r.w[i] = 2.0 / (pp * pp);
    r.w[m - 1 - i] = r.w[i];
  }
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.w.begin(), r.w.end());
  return r;
}

}  // namespace egk
