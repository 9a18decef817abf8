#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"

namespace egk {

using PointCd = std::vector<cplx>;
using PointRd = std::vector<double>;

struct KernelParams {
  int n = 1;
  int d = 1;
  double tau = 0.5;
  // true: the √n-scaled kernel n^d 𝒦_n(√n Z, √n Z'); false: 𝒦_n itself
  bool rescaled = true;

  void validate(bool allow_hermitian = false) const {
    require(n >= 1, "KernelParams: n must be positive");
    require(d >= 1, "KernelParams: d must be positive");
    require(tau > 0 && tau <= 1, "KernelParams: tau must lie in (0,1]");
    require(allow_hermitian || tau < 1, "KernelParams: tau = 1 is only available on the fermion path");
  }
};

struct EllipticCoord {
  double xi = 0.0;
  double eta = 0.0;
};

inline double xi_tau(double tau) { return -0.5 * std::log(tau); }

// Σ_k ζ_k², the bilinear square (not the norm).
inline cplx vsq(const PointCd& v) {
  cplx s{0.0, 0.0};
  for (const cplx& c : v) s += c * c;
  return s;
}

inline double norm2(const PointCd& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return s;
}

inline double norm2(const PointRd& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

inline PointCd conj(const PointCd& v) {
  PointCd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = std::conj(v[i]);
  return r;
}

inline PointCd to_complex_point(const PointRd& x) { return PointCd(x.begin(), x.end()); }

// log ω(Z) = −(Re Z)²/(1+τ) − (Im Z)²/(1−τ)
inline double log_weight_omega(cplx Z, double tau) {
  require(tau > 0 && tau <= 1, "weight_omega: tau must lie in (0,1]");
  if (tau == 1) {
    require(Z.imag() == 0, "weight_omega: tau = 1 needs a real argument");
    return -0.5 * Z.real() * Z.real();
  }
  return -Z.real() * Z.real() / (1 + tau) - Z.imag() * Z.imag() / (1 - tau);
}

inline LogComplex weight_omega(cplx Z, double tau) { return {log_weight_omega(Z, tau), 0.0}; }

// Z = 2√τ cosh(ξ+iη)
inline EllipticCoord to_elliptic(cplx Z, double tau) {
  require(tau > 0 && tau <= 1, "to_elliptic: tau must lie in (0,1]");
  const cplx w = std::acosh(Z / (2 * std::sqrt(tau)));
  EllipticCoord c{w.real(), w.imag()};
  if (c.xi < 0) {
    c.xi = -c.xi;
    c.eta = -c.eta;
  }
  if (c.xi <= 1e-15) {
    c.xi = 0.0;
    c.eta = std::abs(c.eta);
  }
  c.eta = wrap_phase(c.eta);
  return c;
}

inline cplx from_elliptic(EllipticCoord c, double tau) {
  return 2 * std::sqrt(tau) * std::cosh(cplx(c.xi, c.eta));
}

// Elliptic coordinates of a scalar argument z = √2 cosh(ξ+iη).
inline EllipticCoord scalar_elliptic(cplx z) { return to_elliptic(z, 0.5); }

inline bool on_focal_segment(cplx Z, double tau, double tol = 1e-12) {
  return std::abs(Z.imag()) <= tol && std::abs(Z.real()) < 2 * std::sqrt(tau) - tol;
}

// φ(Z) = (Z + √(Z²−4τ))/2, the root of modulus ≥ √τ.
inline cplx conformal_phi(cplx Z, double tau) {
  require(tau > 0 && tau <= 1, "conformal_phi: tau must lie in (0,1]");
  require(!on_focal_segment(Z, tau), "conformal_phi: the focal segment is excluded");
  const cplx r = std::sqrt(Z * Z - 4 * tau);
  const cplx p = (Z + r) / 2.0, m = (Z - r) / 2.0;
  return std::abs(p) >= std::abs(m) ? p : m;
}

// Scalar pair (z, z') with (z ± z')² = (Z ± conj Z')²/(2τ).
inline std::pair<cplx, cplx> reduce_to_scalar(const PointCd& Z, const PointCd& Zp, double tau) {
  require(!Z.empty() && Z.size() == Zp.size(), "reduce_to_scalar: dimension mismatch");
  require(tau > 0 && tau <= 1, "reduce_to_scalar: tau must lie in (0,1]");
  const double s = std::sqrt(2 * tau);
  if (Z.size() == 1) return {Z[0] / s, std::conj(Zp[0]) / s};
  PointCd plus(Z.size()), minus(Z.size());
  for (std::size_t k = 0; k < Z.size(); ++k) {
    plus[k] = Z[k] + std::conj(Zp[k]);
    minus[k] = Z[k] - std::conj(Zp[k]);
  }
  const cplx p = std::sqrt(vsq(plus) / (2 * tau)), m = std::sqrt(vsq(minus) / (2 * tau));
  return {(p + m) / 2.0, (p - m) / 2.0};
}

// Π_k ω(Z_k)ω(Z'_k) in log form
inline double log_weight_product(const PointCd& Z, const PointCd& Zp, double tau) {
  double s = 0.0;
  for (std::size_t k = 0; k < Z.size(); ++k) s += log_weight_omega(Z[k], tau) + log_weight_omega(Zp[k], tau);
  return s;
}

inline bool in_ellipsoid(const PointCd& Z, double tau) {
  double re = 0.0, im = 0.0;
  for (const cplx& c : Z) {
    re += c.real() * c.real();
    im += c.imag() * c.imag();
  }
  const double a = (1 + tau) * (1 + tau), b = (1 - tau) * (1 - tau);
  if (tau == 1) return im == 0 && re < a;
  return re / a + im / b < 1;
}

// C(n+d−1, d)
inline std::uint64_t count_points(int n, int d) {
  require(n >= 0 && d >= 1, "count_points: n >= 0, d >= 1");
  std::uint64_t r = 1;
  const std::uint64_t top = static_cast<std::uint64_t>(n) + d - 1;
  for (int k = 1; k <= d; ++k) {
    r = r * (top - d + k) / k;
  }
  return r;
}

}  // namespace egk
