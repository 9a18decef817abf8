#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"
#include "egk/model.hpp"
#include "egk/special.hpp"

namespace egk {

// (τ, z, z') together with A = (z+z')² and B = (z−z')², which are all F depends on.
struct PhaseContext {
  double tau = 0.5;
  cplx z{0.0, 0.0};
  cplx zp{0.0, 0.0};
  cplx A{0.0, 0.0};
  cplx B{0.0, 0.0};
};

inline PhaseContext make_context(double tau, cplx z, cplx zp) {
  require(tau > 0 && tau <= 1, "PhaseContext: tau must lie in (0,1]");
  return {tau, z, zp, (z + zp) * (z + zp), (z - zp) * (z - zp)};
}

inline bool is_singular_point(cplx s) {
  return std::abs(s) < 1e-300 || std::abs(s - 1.0) < 1e-14 || std::abs(s + 1.0) < 1e-14;
}

// E(s) = sA/(2(1+s)) − sB/(2(1−s)), so that F = E − log s + log τ.
inline cplx E_eval(const PhaseContext& c, cplx s) {
  return s * c.A / (2.0 * (1.0 + s)) - s * c.B / (2.0 * (1.0 - s));
}

inline cplx F_eval(const PhaseContext& c, cplx s) {
  require(!is_singular_point(s), "F_eval: s must avoid 0 and ±1");
  return E_eval(c, s) - std::log(s) + std::log(c.tau);
}

inline cplx F_deriv(const PhaseContext& c, cplx s, int order) {
  require(!is_singular_point(s), "F_deriv: s must avoid 0 and ±1");
  const cplx p = 1.0 + s, m = 1.0 - s;
  switch (order) {
    case 1:
      return c.A / (2.0 * p * p) - c.B / (2.0 * m * m) - 1.0 / s;
    case 2:
      return -c.A / (p * p * p) - c.B / (m * m * m) + 1.0 / (s * s);
    case 3:
      return 3.0 * c.A / (p * p * p * p) - 3.0 * c.B / (m * m * m * m) - 2.0 / (s * s * s);
    default:
      throw DomainError("F_deriv: order must be 1, 2 or 3");
  }
}

// s⁴ − 2zz′s³ + 2(z²+z′²−1)s² − 2zz′s + 1
inline cplx saddle_polynomial(const PhaseContext& c, cplx s) {
  const cplx zz = c.z * c.zp, q = c.z * c.z + c.zp * c.zp - 1.0;
  return (((s - 2.0 * zz) * s + 2.0 * q) * s - 2.0 * zz) * s + 1.0;
}

enum class Which { a, a_inv, b, b_inv };
enum class CaseTag { generic, z_eq_pm_zp, z_on_cut, zp_on_cut, both_on_cut, vertex_degenerate, none };

inline const char* to_string(Which w) {
  switch (w) {
    case Which::a: return "a";
    case Which::a_inv: return "a_inv";
    case Which::b: return "b";
    case Which::b_inv: return "b_inv";
  }
  return "?";
}

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::generic: return "generic";
    case CaseTag::z_eq_pm_zp: return "z_eq_pm_zp";
    case CaseTag::z_on_cut: return "z_on_cut";
    case CaseTag::zp_on_cut: return "zp_on_cut";
    case CaseTag::both_on_cut: return "both_on_cut";
    case CaseTag::vertex_degenerate: return "vertex_degenerate";
    case CaseTag::none: return "none";
  }
  return "?";
}

constexpr double kCaseTol = 1e-9;

struct SaddleSet {
  cplx a, a_inv, b, b_inv;
  EllipticCoord ez, ezp;
  CaseTag case_tag = CaseTag::generic;
  bool z_on_cut = false, zp_on_cut = false;
  // some classification distance fell within ten tolerances of the band edge
  bool near_tolerance = false;
  // saddles through which the deformed contour passes, points at ±1 excluded
  std::vector<Which> contributing;

  cplx value(Which w) const {
    switch (w) {
      case Which::a: return a;
      case Which::a_inv: return a_inv;
      case Which::b: return b;
      case Which::b_inv: return b_inv;
    }
    return a;
  }
};

namespace detail {
inline bool on_cut(cplx z, double tol) { return std::abs(z.imag()) <= tol && std::abs(z.real()) <= std::sqrt(2.0) + tol; }
}  // namespace detail

inline SaddleSet saddle_points(cplx z, cplx zp) {
  SaddleSet S;
  S.ez = scalar_elliptic(z);
  S.ezp = scalar_elliptic(zp);
  const cplx w1(S.ez.xi, S.ez.eta), w2(S.ezp.xi, S.ezp.eta);
  S.a = std::exp(w1 + w2);
  S.a_inv = std::exp(-w1 - w2);
  S.b = std::exp(w1 - w2);
  S.b_inv = std::exp(w2 - w1);

  const double tol = kCaseTol, r2 = std::sqrt(2.0);
  auto near = [&](double dist) {
    if (dist >= tol && dist < 10 * tol) S.near_tolerance = true;
    return dist < tol;
  };
  const bool zero = near(std::abs(z)) && near(std::abs(zp));
  const bool vertex = near(std::min(std::abs(z - r2), std::abs(z + r2))) ||
                      near(std::min(std::abs(zp - r2), std::abs(zp + r2)));
  const bool pm = near(std::min(std::abs(z - zp), std::abs(z + zp)));
  near(std::abs(z.imag()));
  near(std::abs(zp.imag()));
  S.z_on_cut = detail::on_cut(z, tol);
  S.zp_on_cut = detail::on_cut(zp, tol);
  if (zero)
    S.case_tag = CaseTag::none;
  else if (vertex)
    S.case_tag = CaseTag::vertex_degenerate;
  else if (pm)
    S.case_tag = CaseTag::z_eq_pm_zp;
  else if (S.z_on_cut && S.zp_on_cut)
    S.case_tag = CaseTag::both_on_cut;
  else if (S.z_on_cut)
    S.case_tag = CaseTag::z_on_cut;
  else if (S.zp_on_cut)
    S.case_tag = CaseTag::zp_on_cut;

  std::vector<Which> cand;
  if (!S.z_on_cut && !S.zp_on_cut)
    cand = {Which::a_inv};
  else if (!S.z_on_cut)
    cand = {Which::a_inv, Which::b_inv};
  else if (!S.zp_on_cut)
    cand = {Which::a_inv, Which::b};
  else
    cand = {Which::a_inv, Which::a, Which::b, Which::b_inv};
  if (S.case_tag == CaseTag::none || S.case_tag == CaseTag::vertex_degenerate) cand.clear();
  for (Which w : cand) {
    const cplx s = S.value(w);
    if (std::abs(s - 1.0) < 1e-7 || std::abs(s + 1.0) < 1e-7) continue;
    bool dup = false;
    for (Which u : S.contributing) dup = dup || std::abs(S.value(u) - s) < 1e-7;
    if (!dup) S.contributing.push_back(w);
  }
  return S;
}

namespace detail {
inline void signs(Which w, double& s1, double& s2) {
  s1 = (w == Which::a || w == Which::b) ? 1.0 : -1.0;
  s2 = (w == Which::a || w == Which::b_inv) ? 1.0 : -1.0;
}
}  // namespace detail

// F at a saddle from its elliptic-coordinate closed form; defined modulo 2πi.
inline cplx F_at_saddle_closed(const PhaseContext& c, const SaddleSet& S, Which w) {
  double s1, s2;
  detail::signs(w, s1, s2);
  const cplx w1 = s1 * cplx(S.ez.xi, S.ez.eta), w2 = s2 * cplx(S.ezp.xi, S.ezp.eta);
  return 1.0 + std::log(c.tau) - w1 - w2 + 0.5 * std::exp(2.0 * w1) + 0.5 * std::exp(2.0 * w2);
}

inline LogComplex exp_F_at_saddle(const PhaseContext& c, const SaddleSet& S, Which w) {
  require(S.case_tag != CaseTag::none && S.case_tag != CaseTag::vertex_degenerate,
          std::string("exp_F_at_saddle: degenerate case ") + to_string(S.case_tag));
  return LogComplex::exp(F_at_saddle_closed(c, S, w));
}

inline cplx F2_at_saddle(const PhaseContext&, const SaddleSet& S, Which w) {
  require(S.case_tag != CaseTag::none && S.case_tag != CaseTag::vertex_degenerate,
          std::string("F2_at_saddle: degenerate case ") + to_string(S.case_tag));
  const cplx w1(S.ez.xi, S.ez.eta), w2(S.ezp.xi, S.ezp.eta);
  const cplx num = std::sinh(w1) * std::sinh(w2);
  const bool is_a = (w == Which::a || w == Which::a_inv);
  const cplx den = is_a ? std::sinh(w1 + w2) : std::sinh(w1 - w2);
  require(std::abs(den) > 1e-12, "F2_at_saddle: the closed form is singular here");
  switch (w) {
    case Which::a: return -2.0 * num / (S.a * S.a * den);
    case Which::a_inv: return 2.0 * S.a * S.a * num / den;
    case Which::b: return 2.0 * num / (S.b * S.b * den);
    case Which::b_inv: return -2.0 * S.b * S.b * num / den;
  }
  return {};
}

namespace detail {
struct GParts {
  double G, d2, d3;
};
inline GParts g_parts(double xi, double eta, double tau) {
  const double c2 = std::cos(2 * eta), ce = std::cos(eta), se = std::sin(eta);
  const double xt = xi_tau(tau), k = 2 * tau / (1 - tau * tau);
  GParts p;
  p.G = 0.5 + xi - xt + 0.5 * std::exp(-2 * xi) * c2 - 2 * tau * std::cosh(xi) * std::cosh(xi) * ce * ce / (1 + tau) -
        2 * tau * std::sinh(xi) * std::sinh(xi) * se * se / (1 - tau);
  p.d2 = 2 * std::exp(-2 * xi) * c2 - 2 * k * std::cosh(2 * xi) * (1 - tau * c2);
  p.d3 = -4 * std::exp(-2 * xi) * c2 - 4 * k * std::sinh(2 * xi) * (1 - tau * c2);
  return p;
}
}  // namespace detail

// g with −(ξ−ξ_τ)² g(ξ+iη) = G_η(ξ); near ξ_τ, where G and G' vanish, a Taylor form is used.
inline double g_eval(double xi, double eta, double tau) {
  require(xi >= 0, "g_eval: xi must be nonnegative");
  require(tau > 0 && tau < 1, "g_eval: tau must lie in (0,1)");
  const double dx = xi - xi_tau(tau);
  if (std::abs(dx) >= 1e-4) return -detail::g_parts(xi, eta, tau).G / (dx * dx);
  const auto p = detail::g_parts(xi_tau(tau), eta, tau);
  return -(p.d2 / 2 + p.d3 * dx / 6);
}

// Exponent −(ξ−ξ_τ)² g, i.e. G itself, without the division.
inline double g_exponent(double xi, double eta, double tau) {
  const double dx = xi - xi_tau(tau);
  if (std::abs(dx) >= 1e-4) return detail::g_parts(xi, eta, tau).G;
  return -dx * dx * g_eval(xi, eta, tau);
}

struct AlphaBeta {
  cplx alpha, beta;
  cplx alpha_elliptic, beta_elliptic;
};

inline AlphaBeta alpha_beta(const PhaseContext& c, const SaddleSet& S) {
  AlphaBeta r;
  const double reFainv = F_at_saddle_closed(c, S, Which::a_inv).real();
  r.alpha = 0.5 * (c.z * c.z + c.zp * c.zp) - reFainv + std::log(c.tau) + std::log(std::abs(S.a));
  r.beta = 2.0 * r.alpha + std::conj(S.a_inv * c.z * c.zp) - S.a * c.z * c.zp;
  const double x1 = S.ez.xi, y1 = S.ez.eta, x2 = S.ezp.xi, y2 = S.ezp.eta;
  r.alpha_elliptic = 0.5 * (std::sinh(2 * x1) * std::polar(1.0, 2 * y1) + std::sinh(2 * x2) * std::polar(1.0, 2 * y2));
  r.beta_elliptic = -(S.a / std::conj(S.a)) * std::sinh(2 * x1 + 2 * x2);
  return r;
}

// h(ζ) = (ζ−1)²(αζ² + βζ + (a²/ā²)ᾱ) / ((ζ²−a²)(ζ²−ā⁻²)); real on the unit circle.
inline cplx h_eval(const PhaseContext& c, const SaddleSet& S, cplx zeta) {
  const cplx a = S.a, ab = std::conj(S.a);
  const cplx den = (zeta * zeta - a * a) * (zeta * zeta - 1.0 / (ab * ab));
  require(std::abs(den) > 1e-14, "h_eval: zeta at a pole of h");
  const AlphaBeta ab2 = alpha_beta(c, S);
  const cplx num = (zeta - 1.0) * (zeta - 1.0) *
                   (ab2.alpha * zeta * zeta + ab2.beta * zeta + (a * a) / (ab * ab) * std::conj(ab2.alpha));
  return num / den;
}

struct MaxInequalityReport {
  double max_excess = 0.0;           // max over the circle of Re F − Re F(a⁻¹)
  double variation = 0.0;            // max − min of Re F on the circle
  std::vector<double> equality_angles;
  std::vector<Which> expected;       // expected equality set (empty means the whole circle)
  std::string theorem_case;          // "i".."iv"
  bool inequality_holds = false;
  bool equality_set_matches = false;
};

// Samples Re F on |s| = |a|⁻¹ and compares with the equality cases.
inline MaxInequalityReport verify_max_inequality(const PhaseContext& c, int grid_size, double eq_tol = 1e-6) {
  require(grid_size >= 16, "verify_max_inequality: grid_size >= 16");
  const SaddleSet S = saddle_points(c.z, c.zp);
  MaxInequalityReport rep;
  if (!S.z_on_cut && !S.zp_on_cut) {
    rep.theorem_case = "i";
    rep.expected = {Which::a_inv};
  } else if (!S.z_on_cut) {
    rep.theorem_case = "ii";
    rep.expected = {Which::a_inv, Which::b_inv};
  } else if (!S.zp_on_cut) {
    rep.theorem_case = "iii";
    rep.expected = {Which::a_inv, Which::b};
  } else {
    rep.theorem_case = "iv";
  }
  const double r = 1.0 / std::abs(S.a);
  const double ref = F_eval(c, S.a_inv).real();
  const double scale = std::max(1.0, std::abs(ref));
  const double two_pi = 2 * std::numbers::pi, step = two_pi / grid_size;
  const double th0 = std::arg(S.a_inv);
  // Rounding of s moves Re F by about ε|s|(|A|/|1+s|² + |B|/|1−s|²)/2; nodes next to ±1 are judged with that slack.
  auto slack = [&](cplx s) {
    return 16 * std::numeric_limits<double>::epsilon() * r *
           (std::abs(c.A) / std::norm(1.0 + s) + std::abs(c.B) / std::norm(1.0 - s) + 1 / r);
  };
  double mx = -1e300, mn = 1e300;
  bool holds = true;
  std::vector<double> diffs(grid_size), slacks(grid_size);
  for (int k = 0; k < grid_size; ++k) {
    const cplx s = std::polar(r, th0 + step * k);
    double v;
    if (is_singular_point(s))
      v = ref;  // only reachable on the unit circle at ±1, where the limit is the level itself
    else
      v = F_eval(c, s).real();
    diffs[k] = v - ref;
    slacks[k] = is_singular_point(s) ? 0.0 : slack(s);
    holds = holds && diffs[k] <= 1e-10 * scale + slacks[k];
    if (slacks[k] > 1e-11 * scale) continue;  // too close to a pole to say anything finer
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  rep.max_excess = mx - ref;
  rep.variation = mx - mn;
  rep.inequality_holds = holds;
  if (rep.theorem_case == "iv") {
    rep.equality_set_matches = rep.variation <= 1e-10 * scale;
    return rep;
  }
  // Near-maximal nodes come in cyclic runs; every run must contain one of the expected points.
  std::vector<char> high(grid_size);
  for (int k = 0; k < grid_size; ++k) {
    high[k] = diffs[k] >= -eq_tol * scale - slacks[k];
    if (high[k]) rep.equality_angles.push_back(wrap_phase(th0 + step * k));
  }
  auto near_expected = [&](int k) {
    bool close = false;
    for (Which w : rep.expected)
      close = close || std::abs(wrap_phase(th0 + step * k - std::arg(S.value(w)))) <= step + 1e-12;
    return close;
  };
  bool ok = true;
  int start = 0;
  while (start < grid_size && high[start]) ++start;  // node 0 is a⁻¹ itself, so a low node exists unless all are high
  if (start == grid_size) ok = false;
  for (int i = 0; ok && i < grid_size; ++i) {
    const int k = (start + i) % grid_size;
    if (!high[k]) continue;
    bool has = false;
    int len = 0;
    while (high[(k + len) % grid_size] && len < grid_size) {
      has = has || near_expected((k + len) % grid_size);
      ++len;
    }
    ok = ok && has;
    i += len - 1;
  }
  for (Which w : rep.expected) ok = ok && std::abs(F_eval(c, S.value(w)).real() - ref) <= 1e-10 * scale;
  rep.equality_set_matches = ok;
  return rep;
}

struct Window {
  double xmin, xmax, ymin, ymax;
};

// Row-major nx × ny grid of indicators Re F(s) ≥ level over the window.
inline std::vector<unsigned char> region_scan(const PhaseContext& c, double level, const Window& w, int nx, int ny) {
  require(nx >= 1 && ny >= 1, "region_scan: resolution must be positive");
  require(w.xmax > w.xmin && w.ymax > w.ymin, "region_scan: empty window");
  std::vector<unsigned char> grid(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? w.ymin : w.ymin + (w.ymax - w.ymin) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? w.xmin : w.xmin + (w.xmax - w.xmin) * i / (nx - 1);
      const cplx s(x, y);
      bool in;
      if (std::abs(s) < 1e-300)
        in = true;
      else if (is_singular_point(s))
        in = false;
      else
        in = F_eval(c, s).real() >= level;
      grid[static_cast<std::size_t>(j) * nx + i] = in ? 1 : 0;
    }
  }
  return grid;
}

// (1 − s²)^{d/2} with cut (−∞,−1] ∪ [1,∞), positive on (−1,1).
inline LogComplex one_minus_s2_pow(cplx s, int d) {
  return LogComplex::from_complex(1.0 - s * s).pow(0.5 * d);
}

// Steepest-descent term of a simple saddle on the counter-clockwise contour:
// −(1/2πi)·(i s₀)·(2π/(n s₀² F''))^{1/2}·e^{nF}/((s₀−τ)(1−s₀²)^{d/2}), principal root.
inline LogComplex saddle_contribution_at(const PhaseContext& c, cplx s0, int n, int d) {
  require(n >= 1 && d >= 1, "saddle_contribution: n, d >= 1");
  require(!is_singular_point(s0), "saddle_contribution: saddle at 0 or ±1");
  require(std::abs(s0 - c.tau) > 1e-12, "saddle_contribution: saddle at the pole s = tau");
  const cplx f2 = F_deriv(c, s0, 2);
  require(std::abs(f2) > 1e-12, "saddle_contribution: degenerate saddle");
  const cplx q = 2 * std::numbers::pi / (static_cast<double>(n) * s0 * s0 * f2);
  LogComplex r = LogComplex::from_complex(cplx(0.0, 1.0) * s0) * LogComplex::from_complex(std::sqrt(q));
  r *= LogComplex::exp(static_cast<double>(n) * F_eval(c, s0));
  r /= LogComplex::from_complex(s0 - c.tau) * one_minus_s2_pow(s0, d);
  // −1/(2πi) = i/(2π)
  return r * LogComplex(-std::log(2 * std::numbers::pi), std::numbers::pi / 2);
}

inline LogComplex saddle_contribution(const PhaseContext& c, const SaddleSet& S, Which w, int n, int d) {
  require(S.case_tag != CaseTag::none && S.case_tag != CaseTag::vertex_degenerate,
          "saddle_contribution: order-2 saddles have no closed-form term");
  return saddle_contribution_at(c, S.value(w), n, d);
}

// Contribution of the branch point at s = ±1 for points on the diagonal or anti-diagonal over the cut.
inline LogComplex endpoint_contribution(const PhaseContext& c, int endpoint, int n, int d, bool hermitian) {
  require(endpoint == 1 || endpoint == -1, "endpoint_contribution: endpoint must be ±1");
  require(n >= 1 && d >= 1, "endpoint_contribution: n, d >= 1");
  require(detail::on_cut(c.z, kCaseTol) && detail::on_cut(c.zp, kCaseTol),
          "endpoint_contribution: z and z' must lie on [-sqrt2, sqrt2]");
  require(!hermitian || c.tau == 1, "endpoint_contribution: hermitian needs tau = 1");
  const double e = endpoint;
  // the singular part of F at the endpoint must vanish
  require(std::abs(endpoint == 1 ? c.B : c.A) < 1e-9, "endpoint_contribution: (z, z') off the (anti-)diagonal");
  const cplx F = (endpoint == 1 ? c.A / 4.0 : c.B / 4.0) + std::log(c.tau);
  const double dF = std::abs(endpoint == 1 ? c.A / 8.0 - 1.0 : 1.0 - c.B / 8.0);
  LogComplex r = LogComplex::exp(static_cast<double>(n) * F);
  if (endpoint == -1 && n % 2 == 1) r = -r;
  const double x = std::log(2.0 * n * dF);
  if (hermitian && endpoint == 1) {
    r *= LogComplex(0.5 * d * x - d * std::log(2.0) - std::lgamma(0.5 * d + 1), 0.0);
    return r;
  }
  r *= LogComplex((0.5 * d - 1) * x - (d - 1) * std::log(2.0) - std::lgamma(0.5 * d) - std::log(std::abs(e - c.tau)),
                  std::numbers::pi);
  return r;
}

// Residue term e^{nF(τ)}/(1−τ²)^{d/2}, present when the contour radius exceeds τ.
inline LogComplex residue_term(const PhaseContext& c, int n, int d) {
  require(c.tau < 1, "residue_term: tau < 1");
  const cplx Ft = E_eval(c, c.tau);
  return LogComplex::exp(static_cast<double>(n) * Ft) / LogComplex(0.5 * d * std::log(1 - c.tau * c.tau), 0.0);
}

// Leading-order I_n: residue, simple saddles of S, and branch points for (anti-)diagonal cut points.
inline LogComplex assemble_In(const PhaseContext& c, int n, int d) {
  const SaddleSet S = saddle_points(c.z, c.zp);
  require(S.case_tag != CaseTag::vertex_degenerate, "assemble_In: vertex saddles are order two");
  LogComplex total;
  if (c.tau < 1 && 1.0 / std::abs(S.a) > c.tau) total += residue_term(c, n, d);
  for (Which w : S.contributing) total += saddle_contribution(c, S, w, n, d);
  if (S.z_on_cut && S.zp_on_cut) {
    const bool herm = c.tau == 1;
    if (std::abs(c.B) < 1e-9) total += endpoint_contribution(c, 1, n, d, herm);
    if (std::abs(c.A) < 1e-9) total += endpoint_contribution(c, -1, n, d, herm);
  }
  return total;
}

}  // namespace egk
