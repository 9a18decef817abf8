#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "egk/error.hpp"
#include "egk/exact_kernels.hpp"
#include "egk/log_complex.hpp"
#include "egk/model.hpp"
#include "egk/quadrature.hpp"
#include "egk/saddle.hpp"
#include "egk/special.hpp"

namespace egk {

// Several limiting formulas exist in a printed form and in a re-derived form that matches the exact kernel.
enum class Variant { corrected, printed };

// ---------------------------------------------------------------- cocycles

enum class CocycleKind { C_tau_n, D_tau_n, C_X, C_Omega_n };

// Unit-modulus factors c(Z,Z') = e^{i(f(Z) − f(Z'))}; they cancel in every correlation determinant.
struct Cocycle {
  CocycleKind kind = CocycleKind::C_tau_n;
  int n = 1;
  double tau = 0.5;
  PointRd X;      // C_X
  PointRd Omega;  // C_Omega_n

  LogComplex operator()(const PointCd& Z, const PointCd& Zp) const {
    require(Z.size() == Zp.size() && !Z.empty(), "Cocycle: dimension mismatch");
    const double nn = n;
    double ph = 0.0;
    switch (kind) {
      case CocycleKind::C_tau_n:
        require(tau > 0 && tau < 1, "Cocycle: tau in (0,1)");
        for (std::size_t k = 0; k < Z.size(); ++k)
          ph -= nn * tau / (1 - tau * tau) * (Z[k] * Z[k] - Zp[k] * Zp[k]).imag() / 2;
        break;
      case CocycleKind::D_tau_n: {
        require(Z.size() == 1, "Cocycle: D_tau_n is one-dimensional");
        const EllipticCoord e = to_elliptic(Z[0], tau), ep = to_elliptic(Zp[0], tau);
        ph = nn * (e.eta - ep.eta - 0.5 * std::exp(-2 * e.xi) * std::sin(2 * e.eta) +
                   0.5 * std::exp(-2 * ep.xi) * std::sin(2 * ep.eta));
        break;
      }
      case CocycleKind::C_X: {
        require(X.size() == Z.size(), "Cocycle: C_X needs X of matching dimension");
        const double d = static_cast<double>(X.size());
        const double nu = std::pow(4 - norm2(X), d / 2) / std::pow(2 * std::numbers::pi, d);
        for (std::size_t k = 0; k < Z.size(); ++k) ph += 0.5 * std::pow(nu, -1 / d) * X[k] * (Z[k] - Zp[k]).imag();
        break;
      }
      case CocycleKind::C_Omega_n:
        require(Omega.size() == Z.size(), "Cocycle: C_Omega_n needs Omega of matching dimension");
        for (std::size_t k = 0; k < Z.size(); ++k) ph += std::cbrt(nn) * Omega[k] * (Z[k] - Zp[k]).imag();
        break;
    }
    return {0.0, ph};
  }
};

// ---------------------------------------------------------------- strong non-Hermiticity, d = 1

// (ρ/π)exp(−ρ(|Z|²+|Z'|²−2Z conj Z')/2)·exp(−i√(ρ(ρ−1)) Im(Z²−Z'²)/2); the second factor only for ρ ≥ 1.
inline LogComplex ginibre_inf_kernel(double rho, cplx Z, cplx Zp) {
  require(rho > 0, "ginibre_inf_kernel: rho must be positive");
  cplx e = -rho * (std::norm(Z) + std::norm(Zp) - 2.0 * Z * std::conj(Zp)) / 2.0;
  if (rho >= 1) e += cplx(0.0, -std::sqrt(rho * (rho - 1)) * (Z * Z - Zp * Zp).imag() / 2);
  return LogComplex::exp(e) * LogComplex(std::log(rho / std::numbers::pi), 0.0);
}

// n^d Π_j K^∞_{1/(1−τ²)}(√n Z_j, √n Z'_j)
inline LogComplex ginibre_product(int n, double tau, const PointCd& Z, const PointCd& Zp) {
  const double sn = std::sqrt(static_cast<double>(n)), rho = 1 / (1 - tau * tau);
  LogComplex r = LogComplex::one();
  for (std::size_t k = 0; k < Z.size(); ++k)
    r *= ginibre_inf_kernel(rho, sn * Z[k], sn * Zp[k]) * LogComplex(std::log(static_cast<double>(n)), 0.0);
  return r;
}

struct Thm1Terms {
  LogComplex ginibre;     // n K^∞ term, present when ξ₊ < ξ_τ
  LogComplex edge;        // saddle term from the steepest-descent contribution of a⁻¹
  LogComplex edge_closed; // the same term from the elliptic-coordinate formula, sign matched
  LogComplex total;
  EllipticCoord e, ep;
};

namespace detail {
inline void require_thm1(const KernelParams& p, const EllipticCoord& e, const EllipticCoord& ep) {
  require(p.d == 1 && p.rescaled, "kn_asymptotic_d1: d = 1 and the rescaled kernel only");
  require(p.tau > 0 && p.tau < 1, "kn_asymptotic_d1: tau in (0,1)");
  require(e.xi > 0 && ep.xi > 0, "kn_asymptotic_d1: points on the focal segment are excluded");
  const double xp = 0.5 * (e.xi + ep.xi) - xi_tau(p.tau);
  require(xp * xp + (e.eta - ep.eta) * (e.eta - ep.eta) > 1e-24, "kn_asymptotic_d1: coincident boundary points");
}
}  // namespace detail

inline Thm1Terms kn_asymptotic_d1_terms(const KernelParams& p, cplx Z, cplx Zp) {
  p.validate();
  Thm1Terms t;
  t.e = to_elliptic(Z, p.tau);
  t.ep = to_elliptic(Zp, p.tau);
  detail::require_thm1(p, t.e, t.ep);
  const double nn = p.n, tau = p.tau, xt = xi_tau(tau);
  const double xp = 0.5 * (t.e.xi + t.ep.xi);
  if (xp < xt) t.ginibre = ginibre_product(p.n, tau, {Z}, {Zp});

  const auto [z, zp] = reduce_to_scalar({Z}, {Zp}, tau);
  const PhaseContext c = make_context(tau, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  LogComplex sad;
  for (Which w : S.contributing) sad += saddle_contribution(c, S, w, p.n, 1);
  const double pref = std::log(nn / std::numbers::pi) - 0.5 * std::log(1 - tau * tau) +
                      0.5 * (log_weight_omega(std::sqrt(nn) * Z, tau) + log_weight_omega(std::sqrt(nn) * Zp, tau));
  t.edge = sad * LogComplex(pref, 0.0);

  const cplx w(t.e.xi, t.e.eta), wp(t.ep.xi, -t.ep.eta);
  const double env = nn * (g_exponent(t.e.xi, t.e.eta, tau) + g_exponent(t.ep.xi, t.ep.eta, tau));
  LogComplex closed(0.5 * std::log(nn / (32 * std::pow(std::numbers::pi, 3) * tau * (1 - tau * tau))) + env, 0.0);
  closed /= LogComplex::from_complex(std::sinh(cplx(xp - xt, 0.5 * (t.e.eta - t.ep.eta)))) *
            LogComplex::from_complex(std::sqrt(std::sinh(w) * std::sinh(wp)));
  closed *= Cocycle{CocycleKind::D_tau_n, p.n, tau, {}, {}}({Z}, {Zp});
  // the ± of the theorem: whichever sign agrees with the saddle term
  if (!t.edge.is_zero() && std::cos(t.edge.phase - closed.phase) < 0) closed = -closed;
  t.edge_closed = closed;
  t.total = t.ginibre + t.edge;
  return t;
}

inline LogComplex kn_asymptotic_d1(const KernelParams& p, cplx Z, cplx Zp) { return kn_asymptotic_d1_terms(p, Z, Zp).total; }

struct Cluster2 {
  double formula = 0.0;
  double exact = 0.0;
};

// T₂ = −|𝕂_n|²: leading form next to distinct boundary points, with the exact value.
inline Cluster2 cluster2(const KernelParams& p, cplx Z, cplx Zp) {
  p.validate();
  require(p.d == 1 && p.rescaled, "cluster2: d = 1 and the rescaled kernel only");
  const EllipticCoord e = to_elliptic(Z, p.tau), ep = to_elliptic(Zp, p.tau);
  detail::require_thm1(p, e, ep);
  const double nn = p.n, tau = p.tau, xt = xi_tau(tau), xp = 0.5 * (e.xi + ep.xi);
  const double env = 2 * nn * (g_exponent(e.xi, e.eta, tau) + g_exponent(ep.xi, ep.eta, tau));
  const double den = (std::cosh(2 * (xp - xt)) - std::cos(e.eta - ep.eta)) *
                     std::abs(std::sinh(cplx(e.xi, e.eta)) * std::sinh(cplx(ep.xi, ep.eta)));
  Cluster2 r;
  r.formula = -nn / (16 * tau * std::pow(std::numbers::pi, 3) * (1 - tau * tau)) * std::exp(env) / den;
  const LogComplex k = kernel_hermite_sum(p, {Z}, {Zp});
  r.exact = -std::exp(2 * k.log_mod);
  return r;
}

// (1/π)∫_0^π dt/√(2 sin t)
constexpr double kUniformBoundK = 1.1803405990160962;

// Bound on |𝕂_n − n K^∞ 1_{ξ₊<ξ_τ}| at d = 1. The printed form has 2π where the derivation gives π.
inline double uniform_bound_d1(const KernelParams& p, cplx Z, cplx Zp, Variant v = Variant::corrected) {
  p.validate();
  require(p.d == 1, "uniform_bound_d1: d = 1");
  const auto [z, zp] = reduce_to_scalar({Z}, {Zp}, p.tau);
  const EllipticCoord e = scalar_elliptic(z), ep = scalar_elliptic(zp);
  const double nn = p.n, tau = p.tau, xp = 0.5 * (e.xi + ep.xi);
  const double c = kUniformBoundK / ((v == Variant::printed ? 2 : 1) * std::numbers::pi * std::sqrt(1 - tau * tau));
  return c * nn / std::abs(1 - std::exp(2 * (xp - xi_tau(tau)))) *
         std::exp(nn * (g_exponent(e.xi, e.eta, tau) + g_exponent(ep.xi, ep.eta, tau)));
}

// The d-dimensional analogue, with (ξ, η), (ξ', η') the coordinates of the scalar pair.
inline double uniform_bound_dd(const KernelParams& p, const PointCd& Z, const PointCd& Zp) {
  p.validate();
  detail::check_points(p, Z, Zp);
  const auto [z, zp] = reduce_to_scalar(Z, Zp, p.tau);
  const EllipticCoord e = scalar_elliptic(z), ep = scalar_elliptic(zp);
  const double nn = p.n, tau = p.tau, xp = 0.5 * (e.xi + ep.xi);
  const double base = tau / (std::numbers::pi * (1 - tau * tau) * std::sqrt(std::sinh(xp)));
  return std::pow(nn, p.d) / std::abs(1 - std::exp(-2 * (xp - xi_tau(tau)))) * std::pow(base, p.d) *
         std::exp(nn * (g_exponent(e.xi, e.eta, tau) + g_exponent(ep.xi, ep.eta, tau)));
}

// ---------------------------------------------------------------- one-point function

enum class OnePointBranch { off_segment, on_segment, segment_end };

inline const char* to_string(OnePointBranch b) {
  switch (b) {
    case OnePointBranch::off_segment: return "off_segment";
    case OnePointBranch::on_segment: return "on_segment";
    case OnePointBranch::segment_end: return "segment_end";
  }
  return "?";
}

inline OnePointBranch one_point_branch(cplx Z, double tau) {
  const double e = 2 * std::sqrt(tau);
  if (std::abs(Z - e) < kCaseTol || std::abs(Z + e) < kCaseTol) return OnePointBranch::segment_end;
  if (std::abs(Z.imag()) < kCaseTol && std::abs(Z.real()) < e) return OnePointBranch::on_segment;
  return OnePointBranch::off_segment;
}

// f_n of the on-segment branch. The derived form has no ∓π/4 shift and the opposite sign of the oscillation.
inline double one_point_fn(int n, double tau, double eta, bool negative_side, Variant v) {
  const double nn = n, den = 1 + tau * tau - 2 * tau * std::cos(2 * eta);
  const double ph = nn * (2 * eta - std::sin(2 * eta));
  const double ce = std::cos(eta), se = std::sin(eta);
  if (v == Variant::corrected)
    return -1 / (1 - tau) - ((1 - tau) * ce * std::sin(ph) + (1 + tau) * se * std::cos(ph)) / den;
  if (std::abs(ce) < 1e-15) return -1 / (1 - tau) + ((n % 2) ? -1.0 : 1.0) / (1 + tau);
  const double sh = negative_side ? std::numbers::pi / 4 : -std::numbers::pi / 4;
  return -1 / (1 - tau) + ((1 - tau) * ce * std::sin(ph + sh) + (1 + tau) * se * std::cos(ph + sh)) / den;
}

// Γ(1/6)/(π² 2^{7/6} 3^{5/6}); the printed constant has 3^{1/3}.
inline double segment_end_constant(Variant v) {
  const double e3 = v == Variant::corrected ? 5.0 / 6.0 : 1.0 / 3.0;
  return std::tgamma(1.0 / 6.0) / (std::numbers::pi * std::numbers::pi * std::pow(2.0, 7.0 / 6.0) * std::pow(3.0, e3));
}

// (1/n)𝕂_n(Z,Z) − 1_{Z∈𝓔_τ}/(π(1−τ²)), the exponentially small first correction, d = 1.
inline double one_point_correction_d1(const KernelParams& p, cplx Z, Variant v = Variant::corrected) {
  p.validate();
  require(p.d == 1 && p.rescaled, "one_point_d1: d = 1 and the rescaled kernel only");
  const double tau = p.tau, nn = p.n, xt = xi_tau(tau), q = 1 - tau * tau, pi = std::numbers::pi;
  const EllipticCoord e = to_elliptic(Z, tau);
  require(std::abs(e.xi - xt) > kCaseTol, "one_point_d1: Z on the ellipse boundary has no formula");
  switch (one_point_branch(Z, tau)) {
    case OnePointBranch::off_segment: {
      const double env = 2 * nn * g_exponent(e.xi, e.eta, tau);
      return std::exp(env) /
             (std::sqrt(32 * pi * pi * pi * nn) * std::sqrt(tau * q) * std::sinh(e.xi - xt) * std::abs(std::sinh(cplx(e.xi, e.eta))));
    }
    case OnePointBranch::on_segment: {
      const double eta = e.eta;
      const double env = 2 * nn * g_exponent(0.0, eta, tau);
      return one_point_fn(p.n, tau, eta, Z.real() < 0, v) * std::exp(env) / (std::sqrt(2 * pi * pi * pi * nn) * std::sqrt(q) * std::sin(eta));
    }
    case OnePointBranch::segment_end: {
      const double env = 2 * nn * g_exponent(0.0, 0.0, tau);
      return -segment_end_constant(v) * std::pow(nn, -1.0 / 6.0) * std::exp(env) / (std::sqrt(q) * (1 - tau));
    }
  }
  return 0.0;
}

// (1/n)𝕂_n(Z,Z) to first correction, d = 1.
inline double one_point_d1(const KernelParams& p, cplx Z, Variant v = Variant::corrected) {
  const double corr = one_point_correction_d1(p, Z, v);
  const bool inside = to_elliptic(Z, p.tau).xi < xi_tau(p.tau);
  return (inside ? 1 / (std::numbers::pi * (1 - p.tau * p.tau)) : 0.0) + corr;
}

struct OnePointDd {
  double leading = 0.0;
  double envelope = 0.0;
  int gamma = -1;
};

inline OnePointDd one_point_dd(const KernelParams& p, const PointCd& Z) {
  p.validate();
  require(static_cast<int>(Z.size()) == p.d, "one_point_dd: dimension mismatch");
  const double tau = p.tau, nn = p.n, d = p.d;
  double re = 0.0, im = 0.0;
  for (const cplx& c : Z) {
    re += c.real() * c.real();
    im += c.imag() * c.imag();
  }
  const double lvl = re / ((1 + tau) * (1 + tau)) + im / ((1 - tau) * (1 - tau));
  require(std::abs(lvl - 1) > kCaseTol, "one_point_dd: Z on the boundary of the droplet");
  OnePointDd r;
  if (lvl < 1) r.leading = std::pow(nn / (std::numbers::pi * (1 - tau * tau)), d);
  const double rr = std::sqrt(re);
  if (im > kCaseTol * kCaseTol || rr > 2 * std::sqrt(tau) + kCaseTol)
    r.gamma = -1;
  else if (rr < 2 * std::sqrt(tau) - kCaseTol)
    r.gamma = p.d - 2;
  else
    r.gamma = p.d;
  const cplx z = reduce_to_scalar(Z, Z, tau).first;
  const EllipticCoord e = scalar_elliptic(z);
  r.envelope = std::pow(nn, d + 0.5 * r.gamma) * std::exp(2 * nn * g_exponent(e.xi, e.eta, tau));
  return r;
}

// ---------------------------------------------------------------- fermions

// Limit of 𝕂^Fermi_n(X,X)·d!/n^d; zero outside |X| < √2.
inline double fermi_bulk_density(int d, const PointRd& X) {
  require(d >= 1 && static_cast<int>(X.size()) == d, "fermi_bulk_density: dimension mismatch");
  const double r2 = norm2(X);
  require(std::abs(r2 - 2) > 1e-12, "fermi_bulk_density: |X| = sqrt 2 is the edge");
  if (r2 > 2) return 0.0;
  const double dd = d;
  return std::tgamma(dd + 1) / (std::pow(2.0, dd) * std::pow(std::numbers::pi, dd / 2)) * std::pow(2 - r2, dd / 2) /
         std::tgamma(dd / 2 + 1);
}

// J_{d/2}(2r)/(πr)^{d/2} = Ĵ_{d/2}(4r²)/π^{d/2}
inline double fermi_bulk_kernel(int d, const PointRd& U, const PointRd& V) {
  require(d >= 1 && static_cast<int>(U.size()) == d && static_cast<int>(V.size()) == d,
          "fermi_bulk_kernel: dimension mismatch");
  double r2 = 0.0;
  for (int k = 0; k < d; ++k) r2 += (U[k] - V[k]) * (U[k] - V[k]);
  return bessel_j_hat(0.5 * d, cplx(4 * r2, 0.0)).real() / std::pow(std::numbers::pi, 0.5 * d);
}

namespace detail {

// (2π)^{d/2} 2^{1−d/2} q^{d−1} Ĵ_{d/2−1}(q² δ·δ): the angular part of ∫_{ℝ^d} e^{−i⟨Q,δ⟩} f(|Q|) dQ.
// Ĵ is entire, so the same kernel serves complex δ through its bilinear square.
inline cplx radial_fourier_weight(int d, double q, cplx delta2) {
  const double dd = d;
  return std::pow(2 * std::numbers::pi, dd / 2) * std::pow(2.0, 1 - dd / 2) * std::pow(q, dd - 1) *
         bessel_j_hat(dd / 2 - 1, q * q * delta2);
}

// (1/2π)∫_{Im k = ε} e^{i(k³/3 + kσ)}·(−1/(p + ik))·(π/(−ikc))^{d/2}·e^{δ²/(4ikc)} dk, c = 2^{2/3}.
// This is ∫_{ℝ^d} dQ e^{−i⟨Q,δ⟩} ∫_0^∞ e^{ps} Ai(c|Q|² + σ + s) ds after inserting the Fourier form of Ai
// on a line above the pole at k = ip, doing the s-integral and the Gaussian Q-integral in closed form.
inline cplx airy_fourier(int d, double p, cplx sigma, cplx delta2, double rel_tol = 1e-12) {
  require(p >= 0, "airy_fourier: p >= 0");
  const double c = std::cbrt(4.0);
  const double eps = std::max(p + 0.5, std::sqrt(std::max(sigma.real(), 0.0)));
  const double dd = d;
  auto f = [&](double x) {
    const cplx k(x, eps), ik = cplx(0.0, 1.0) * k;
    cplx e = ik * (k * k / 3.0 + sigma) + delta2 / (4.0 * ik * c);
    return std::exp(e - std::log(-(p + ik)) + 0.5 * dd * std::log(std::numbers::pi / (-ik * c)));
  };
  // |integrand| ≲ e^{ε³/3 − εRe σ − x Im σ − εx²}; cut where it is 45 e-folds below the peak
  const double top = eps * eps * eps / 3 - eps * sigma.real();
  const double a = std::abs(sigma.imag()) + std::abs(delta2) / (4 * c * eps * eps);
  const double L = (a + std::sqrt(a * a + 4 * eps * (45 + std::max(0.0, top)))) / (2 * eps) + 1;
  double h = std::min(0.05, L / 64);
  auto trap = [&](double step) {
    cplx s{0.0, 0.0};
    const long m = static_cast<long>(std::ceil(L / step));
    for (long j = -m; j <= m; ++j) s += f(step * static_cast<double>(j));
    return s * step / (2 * std::numbers::pi);
  };
  cplx est = trap(h);
  for (int r = 0; r < 8; ++r) {
    h /= 2;
    const cplx next = trap(h);
    if (std::abs(next - est) <= rel_tol * std::abs(next) + 1e-300) return next;
    est = next;
  }
  throw ConvergenceError("airy_fourier: trapezoid did not converge");
}

}  // namespace detail

// (2π)^{−d} ∫_{ℝ^d} e^{−i⟨Q,U−V⟩} Ai₁(2^{2/3}|Q|² + ⟨U+V,X⟩/(2^{1/3}|X|)) dQ, reduced to a radial integral.
inline double fermi_edge_kernel(int d, const PointRd& X, const PointRd& U, const PointRd& V,
                                const QuadratureSpec& spec = {32, 1e-10, 10}) {
  require(d >= 1 && static_cast<int>(X.size()) == d && static_cast<int>(U.size()) == d &&
              static_cast<int>(V.size()) == d,
          "fermi_edge_kernel: dimension mismatch");
  const double rx = std::sqrt(norm2(X));
  require(std::abs(rx - std::sqrt(2.0)) < 1e-9, "fermi_edge_kernel: |X| must equal sqrt 2");
  double r2 = 0.0, ux = 0.0;
  for (int k = 0; k < d; ++k) {
    r2 += (U[k] - V[k]) * (U[k] - V[k]);
    ux += (U[k] + V[k]) * X[k];
  }
  const double c = std::cbrt(4.0), shift = ux / (std::cbrt(2.0) * rx);
  require(shift >= -20 && shift <= 30, "fermi_edge_kernel: <U+V,X> outside the tabulated Ai range");
  // Ai₁(ζ) < 1e−17 beyond ζ = 16
  const double qmax = std::sqrt(std::max(16.0 - shift, 0.0) / c);
  if (qmax == 0.0) return 0.0;
  auto f = [&](double q) {
    return (detail::radial_fourier_weight(d, q, cplx(r2, 0.0)) * airy_ai_integral(c * q * q + shift)).real();
  };
  return gauss_legendre(f, 0.0, qmax, spec) / std::pow(2 * std::numbers::pi, d);
}

// The same kernel through the Fourier form of Ai; independent of the Ai₁ quadrature.
inline double fermi_edge_kernel_fourier(int d, const PointRd& X, const PointRd& U, const PointRd& V) {
  require(static_cast<int>(X.size()) == d && static_cast<int>(U.size()) == d && static_cast<int>(V.size()) == d,
          "fermi_edge_kernel_fourier: dimension mismatch");
  const double rx = std::sqrt(norm2(X));
  double r2 = 0.0, ux = 0.0;
  for (int k = 0; k < d; ++k) {
    r2 += (U[k] - V[k]) * (U[k] - V[k]);
    ux += (U[k] + V[k]) * X[k];
  }
  return detail::airy_fourier(d, 0.0, ux / (std::cbrt(2.0) * rx), cplx(r2, 0.0)).real() /
         std::pow(2 * std::numbers::pi, d);
}

// Π_j (1/(π(1−τ²)))exp(−(|U_j|²+|V_j|²−2U_j conj V_j)/(2(1−τ²))), optionally times Π_j C_τ^n.
inline LogComplex bulk_product_kernel(double tau, int d, const PointCd& Z, const PointCd& U, const PointCd& V,
                                      int cocycle_n = 0) {
  require(tau > 0 && tau < 1, "bulk_product_kernel: tau in (0,1)");
  require(static_cast<int>(Z.size()) == d && static_cast<int>(U.size()) == d && static_cast<int>(V.size()) == d,
          "bulk_product_kernel: dimension mismatch");
  require(in_ellipsoid(Z, tau), "bulk_product_kernel: Z must lie inside the droplet");
  const double q = 1 - tau * tau;
  LogComplex r = LogComplex::one();
  for (int k = 0; k < d; ++k)
    r *= LogComplex::exp(-(std::norm(U[k]) + std::norm(V[k]) - 2.0 * U[k] * std::conj(V[k])) / (2 * q)) *
         LogComplex(-std::log(std::numbers::pi * q), 0.0);
  if (cocycle_n > 0) {
    // the cocycle of the macroscopic points Z + U/√n, Z + V/√n
    const double sn = std::sqrt(static_cast<double>(cocycle_n));
    PointCd a(d), b(d);
    for (int k = 0; k < d; ++k) {
      a[k] = Z[k] + U[k] / sn;
      b[k] = Z[k] + V[k] / sn;
    }
    r *= Cocycle{CocycleKind::C_tau_n, cocycle_n, tau, {}, {}}(a, b);
  }
  return r;
}

// ---------------------------------------------------------------- weak non-Hermiticity

// ν(X) = (4−|X|²)^{d/2}/(2π)^d; τ = 1 − κ/(ν^{1/d} n) and microscopic scale 1/(ν^{1/d} n).
inline double weak_bulk_nu(const PointRd& X) {
  const double d = static_cast<double>(X.size()), r2 = norm2(X);
  require(r2 < 4, "weak_bulk_nu: |X| < 2");
  return std::pow(4 - r2, d / 2) / std::pow(2 * std::numbers::pi, d);
}

namespace detail {
inline void im_and_square(const PointCd& U, const PointCd& V, double& im2, cplx& w) {
  im2 = 0.0;
  w = 0.0;
  for (std::size_t k = 0; k < U.size(); ++k) {
    im2 += U[k].imag() * U[k].imag() + V[k].imag() * V[k].imag();
    const cplx t = U[k] - std::conj(V[k]);
    w += t * t;
  }
}
}  // namespace detail

// ∫_0^1 e^{−aκt²} t^m Ĵ_{d/2−1}(w π² t²) dt
inline cplx weak_bulk_t_integral(int d, double a_kappa, int m, cplx w, const QuadratureSpec& spec = {32, 1e-13, 10}) {
  auto f = [&](double t) {
    return std::exp(-a_kappa * t * t) * std::pow(t, m) * bessel_j_hat(0.5 * d - 1, w * std::numbers::pi * std::numbers::pi * t * t);
  };
  return gauss_legendre(f, 0.0, 1.0, spec);
}

// Limit of 𝕂_n(X + U/(mn), X + V/(mn))/(ν² n^{2d}), m = ν^{1/d}, cocycle C_X stripped.
// corrected: e^{−(|Im U|²+|Im V|²)/(2mκ)}(4mκ)^{−d/2}·2∫_0^1 e^{−π²mκt²} t^{d−1} Ĵ_{d/2−1}((U−V̄)²π²t²) dt
// printed:   e^{−(|Im U|²+|Im V|²)/(2κ)}(4κ)^{−d/2}·4∫_0^1 e^{−κπ²t²} t^d Ĵ_{d/2−1}((U−V̄)²π²t²) dt
// The printed form has no X dependence; the exact kernel does, through m in the imaginary direction.
inline cplx weak_bulk_kernel(const PointRd& X, double kappa, const PointCd& U, const PointCd& V,
                             Variant v = Variant::corrected) {
  require(kappa > 0, "weak_bulk_kernel: kappa > 0");
  const int d = static_cast<int>(X.size());
  require(d >= 1 && static_cast<int>(U.size()) == d && static_cast<int>(V.size()) == d,
          "weak_bulk_kernel: dimension mismatch");
  double im2;
  cplx w;
  detail::im_and_square(U, V, im2, w);
  const double pi = std::numbers::pi, dd = d;
  if (v == Variant::corrected) {
    const double m = std::pow(weak_bulk_nu(X), 1 / dd);
    return std::exp(-im2 / (2 * m * kappa)) * std::pow(4 * m * kappa, -dd / 2) * 2.0 *
           weak_bulk_t_integral(d, pi * pi * m * kappa, d - 1, w);
  }
  return std::exp(-im2 / (2 * kappa)) * std::pow(4 * kappa, -dd / 2) * 4.0 * weak_bulk_t_integral(d, pi * pi * kappa, d, w);
}

// κ → 0: ∫_0^1 t^{d−1} Ĵ_{d/2−1}(ξ²π²t²) dt = (ξπ/2)^{1−d/2} J_{d/2}(ξπ)/(ξπ), ξ > 0.
inline double weak_bulk_small_kappa_closed(int d, double xi) {
  const double x = xi * std::numbers::pi;
  return std::pow(x / 2, 1 - 0.5 * d) * bessel_j(0.5 * d, x) / x;
}

// κ → ∞ with U = √κ u, V = √κ v: (2πmκ)^{−d} exp(−[(|Im u|²+|Im v|²)/2 + (u−v̄)²/4]/m).
inline cplx weak_bulk_large_kappa(const PointRd& X, double kappa, const PointCd& u, const PointCd& v) {
  double im2;
  cplx w;
  detail::im_and_square(u, v, im2, w);
  const double dd = static_cast<double>(X.size()), m = std::pow(weak_bulk_nu(X), 1 / dd);
  return std::pow(2 * std::numbers::pi * m * kappa, -dd) * std::exp(-(im2 / 2 + w / 4.0) / m);
}

// Limit of 𝕂_n((1+τ)Ω + U/n^{2/3}, (1+τ)Ω + V/n^{2/3})/n^{4d/3} at τ = 1 − κ n^{−1/3}, cocycle stripped:
// (κπ)^{−d/2}(2π)^{−d} e^{−(|Im U|²+|Im V|²)/(2κ)} e^{κ³/6 + κ⟨U+V̄,Ω⟩/2}
//   × ∫_{ℝ^d} e^{−i⟨Q,U−V̄⟩} ∫_0^∞ e^{2^{2/3}κs} Ai(2^{2/3}|Q|² + 2^{−4/3}(κ² + 2⟨Ω,U+V̄⟩) + s) ds dQ
// The printed weight e^{2^{2/3}κs} disagrees with the exact kernel; the derived weight is e^{2^{−2/3}κs}.
inline cplx weak_edge_kernel(int d, double kappa, const PointRd& Omega, const PointCd& U, const PointCd& V,
                             Variant v = Variant::corrected) {
  require(kappa > 0, "weak_edge_kernel: kappa > 0");
  require(d >= 1 && static_cast<int>(Omega.size()) == d && static_cast<int>(U.size()) == d &&
              static_cast<int>(V.size()) == d,
          "weak_edge_kernel: dimension mismatch");
  require(std::abs(norm2(Omega) - 1) < 1e-12, "weak_edge_kernel: Omega must be a unit vector");
  double im2;
  cplx w;
  detail::im_and_square(U, V, im2, w);
  cplx om{0.0, 0.0};
  for (int k = 0; k < d; ++k) om += Omega[k] * (U[k] + std::conj(V[k]));
  const double c = std::cbrt(4.0), pi = std::numbers::pi, dd = d;
  const cplx sigma = std::pow(2.0, -4.0 / 3.0) * (kappa * kappa + 2.0 * om);
  const cplx I = detail::airy_fourier(d, v == Variant::corrected ? kappa / c : c * kappa, sigma, w);
  const cplx pre = std::exp(cplx(-im2 / (2 * kappa) + kappa * kappa * kappa / 6, 0.0) + kappa * om / 2.0) *
                   std::pow(kappa * pi, -dd / 2) * std::pow(2 * pi, -dd);
  return pre * I;
}

// ---------------------------------------------------------------- convergence studies

struct ConvergenceReport {
  std::string target;
  std::vector<int> n_values;
  std::vector<double> errors;
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  bool degenerate = false;
};

namespace detail {
// Least squares of log e against x; the residual is the rms of the log misfit.
inline void fit_log_errors(ConvergenceReport& r, const std::vector<double>& xs) {
  const std::size_t m = xs.size();
  r.degenerate = m < 2;
  for (double e : r.errors) r.degenerate = r.degenerate || !(e > 0) || !std::isfinite(e);
  if (r.degenerate) return;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double y = std::log(r.errors[i]);
    sx += xs[i];
    sy += y;
    sxx += xs[i] * xs[i];
    sxy += xs[i] * y;
  }
  const double den = m * sxx - sx * sx;
  if (std::abs(den) < 1e-300) {
    r.degenerate = true;
    return;
  }
  const double a = (m * sxy - sx * sy) / den, b = (sy - a * sx) / m;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = std::log(r.errors[i]) - (a * xs[i] + b);
    ss += e * e;
  }
  r.fitted_exponent = a;
  r.fit_residual = std::sqrt(ss / m);
}
}  // namespace detail

// log e = α log n + β
inline void fit_power_law(ConvergenceReport& r) {
  std::vector<double> xs;
  for (int n : r.n_values) xs.push_back(std::log(static_cast<double>(n)));
  detail::fit_log_errors(r, xs);
}

// log e = α n + β, for exponentially small errors; α goes into fitted_exponent.
inline void fit_exponential(ConvergenceReport& r) {
  std::vector<double> xs(r.n_values.begin(), r.n_values.end());
  detail::fit_log_errors(r, xs);
}

inline ConvergenceReport convergence_study(const std::string& target, const std::vector<int>& n_list,
                                           const std::function<double(int)>& error_at, bool exponential = false) {
  require(!n_list.empty(), "convergence_study: empty n list");
  ConvergenceReport r;
  r.target = target;
  r.n_values = n_list;
  for (int n : n_list) r.errors.push_back(error_at(n));
  if (exponential)
    fit_exponential(r);
  else
    fit_power_law(r);
  return r;
}

}  // namespace egk
