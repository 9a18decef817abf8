#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"
#include "egk/model.hpp"
#include "egk/quadrature.hpp"
#include "egk/saddle.hpp"
#include "egk/special.hpp"

namespace egk {

namespace detail {

inline void check_points(const KernelParams& p, const PointCd& Z, const PointCd& Zp) {
  require(static_cast<int>(Z.size()) == p.d && static_cast<int>(Zp.size()) == p.d,
          "kernel: point dimension must equal d");
  for (std::size_t k = 0; k < Z.size(); ++k)
    require(std::isfinite(std::abs(Z[k])) && std::isfinite(std::abs(Zp[k])), "kernel: non-finite coordinate");
}

inline void check_size(int n, int d) {
  if (d == 1 ? n > 100000 : static_cast<double>(d) * n * n > 4e7)
    throw ResourceError("kernel: n = " + std::to_string(n) + ", d = " + std::to_string(d) +
                        " exceeds the exact-evaluation budget (d*n^2 <= 4e7)");
}

// Σ_{m<n} of the d-fold convolution of per-coordinate sequences, in log-scaled form.
inline LogComplex total_degree_sum(const std::vector<std::vector<LogComplex>>& seqs, int n) {
  double shift = 0.0;
  std::vector<cplx> acc;
  for (std::size_t k = 0; k < seqs.size(); ++k) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : seqs[k]) m = std::max(m, v.log_mod);
    if (std::isinf(m)) return LogComplex::zero();
    std::vector<cplx> vec(n);
    for (int j = 0; j < n; ++j) vec[j] = (seqs[k][j] / LogComplex(m, 0.0)).to_complex();
    shift += m;
    if (k == 0) {
      acc = std::move(vec);
      continue;
    }
    std::vector<cplx> next(n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
      if (acc[i] == cplx(0.0, 0.0)) continue;
      for (int j = 0; i + j < n; ++j) next[i + j] += acc[i] * vec[j];
    }
    acc = std::move(next);
  }
  LogSum s;
  for (const cplx& c : acc) s.add(c, shift);
  return s.value();
}

}  // namespace detail

// Σ_{|j|<n} Π_k (τ/2)^{j_k}/j_k! H_{j_k}(X_k/√(2τ)) conj H_{j_k}(X'_k/√(2τ)) times the weights and the
// normalization. Returns 𝕂_n (rescaled) or 𝒦_n.
inline LogComplex kernel_hermite_sum(const KernelParams& p, const PointCd& Z, const PointCd& Zp) {
  p.validate();
  detail::check_points(p, Z, Zp);
  detail::check_size(p.n, p.d);
  const double sc = p.rescaled ? std::sqrt(static_cast<double>(p.n)) : 1.0;
  const double st = std::sqrt(2 * p.tau);
  std::vector<std::vector<LogComplex>> seqs(p.d);
  double logw = 0.0;
  for (int k = 0; k < p.d; ++k) {
    const cplx X = sc * Z[k], Xp = sc * Zp[k];
    auto t = hermite_weighted_seq(X / st, p.tau, p.n);
    auto tp = hermite_weighted_seq(Xp / st, p.tau, p.n);
    for (int j = 0; j < p.n; ++j) t[j] *= tp[j].conj();
    seqs[k] = std::move(t);
    logw += 0.5 * (log_weight_omega(X, p.tau) + log_weight_omega(Xp, p.tau));
  }
  LogComplex r = detail::total_degree_sum(seqs, p.n);
  double pref = logw - p.d * std::log(std::numbers::pi) - 0.5 * p.d * std::log(1 - p.tau * p.tau);
  if (p.rescaled) pref += p.d * std::log(static_cast<double>(p.n));
  return r * LogComplex(pref, 0.0);
}

// 1 − e^{w} without cancellation for small w.
inline LogComplex one_minus_exp(cplx w) {
  if (w.real() > 1.0) return LogComplex::exp(w) * LogComplex::from_complex(std::exp(-w) - 1.0);
  if (w.real() < -1.0 || std::abs(w) > 1.0) return LogComplex::from_complex(1.0 - std::exp(w));
  // e^x cos y − 1 = expm1(x) cos y − 2 sin²(y/2)
  const double x = w.real(), y = w.imag(), sy = std::sin(y / 2);
  const cplx em1(std::expm1(x) * std::cos(y) - 2 * sy * sy, std::exp(x) * std::sin(y));
  return LogComplex::from_complex(-em1);
}

enum class ContourForm { split, combined };

struct ContourInfo {
  double radius = 0.0;
  ContourForm form = ContourForm::split;
  QuadInfo quad;
};

// I_n(d, τ; z, z') on |s| = r. The combined integrand e^{nE}(1−(τ/s)^n)/((s−τ)(1−s²)^{d/2}) is used when the
// circle runs close to the pole; otherwise the pole is taken out as a residue.
// With with_residue = false the split form returns the circle part alone.
inline LogComplex In_contour(const PhaseContext& c, int n, int d, double r, const QuadratureSpec& spec,
                             ContourInfo* info = nullptr, bool with_residue = true) {
  require(n >= 1 && d >= 1, "In_contour: n, d >= 1");
  require(r > 0 && r < 1, "In_contour: radius must lie in (0,1)");
  const double lt = std::log(c.tau), nn = n;
  const bool combined = c.tau == 1 || nn * std::abs(std::log(r) - lt) <= 2.0;
  // s^{-n} makes the integrand oscillate n times around the circle; fewer nodes can alias into false agreement
  QuadratureSpec sp = spec;
  sp.abscissa_count = std::max<int>(spec.abscissa_count, static_cast<int>(std::bit_ceil(2u * static_cast<unsigned>(n) + 16u)));
  ContourInfo ci;
  ci.radius = r;
  ci.form = combined ? ContourForm::combined : ContourForm::split;
  LogComplex result;
  if (combined) {
    auto f = [&](cplx s) {
      LogComplex v = LogComplex::exp(nn * E_eval(c, s));
      if (std::abs(s - c.tau) < 1e-8 * c.tau) {
        // (1 − (τ/s)^n)/(s − τ) ≈ (n − n(n+1)δ/2)/τ with δ = s/τ − 1
        const cplx delta = s / c.tau - 1.0;
        v *= LogComplex::from_complex((nn - nn * (nn + 1) * delta / 2.0) / c.tau);
      } else {
        v *= one_minus_exp(nn * (lt - std::log(s))) / LogComplex::from_complex(s - c.tau);
      }
      return v / one_minus_s2_pow(s, d);
    };
    result = circle_trapezoid(f, r, sp, &ci.quad);
  } else {
    auto f = [&](cplx s) {
      LogComplex v = LogComplex::exp(nn * (E_eval(c, s) - std::log(s) + lt));
      return v / (LogComplex::from_complex(s - c.tau) * one_minus_s2_pow(s, d));
    };
    result = -circle_trapezoid(f, r, sp, &ci.quad);
    if (with_residue && r > c.tau) result += residue_term(c, n, d);
  }
  if (info) *info = ci;
  return result;
}

inline double contour_radius(const SaddleSet& S) { return std::clamp(1.0 / std::abs(S.a), 0.1, 0.95); }

// 𝕂_n through the single contour integral, with the weights and normalization outside.
inline LogComplex kernel_contour(const KernelParams& p, const PointCd& Z, const PointCd& Zp,
                                 const QuadratureSpec& spec = {}, ContourInfo* info = nullptr) {
  p.validate();
  detail::check_points(p, Z, Zp);
  const double nn = p.n;
  PointCd Y = Z, Yp = Zp;
  if (!p.rescaled) {
    for (auto& v : Y) v /= std::sqrt(nn);
    for (auto& v : Yp) v /= std::sqrt(nn);
  }
  const auto [z, zp] = reduce_to_scalar(Y, Yp, p.tau);
  const PhaseContext c = make_context(p.tau, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  const LogComplex In = In_contour(c, p.n, p.d, contour_radius(S), spec, info);
  double logw = 0.0;
  for (int k = 0; k < p.d; ++k)
    logw += 0.5 * (log_weight_omega(std::sqrt(nn) * Y[k], p.tau) + log_weight_omega(std::sqrt(nn) * Yp[k], p.tau));
  double pref = logw - p.d * std::log(std::numbers::pi) - 0.5 * p.d * std::log(1 - p.tau * p.tau);
  if (p.rescaled) pref += p.d * std::log(nn);
  return In * LogComplex(pref, 0.0);
}

// 𝕂_n − 1_{ξ₊<ξ_τ}·(the residue part), which is 𝕂_n − n^d Π_j K^∞(√n Z_j, √n Z'_j) inside and 𝕂_n outside.
// Away from the pole the difference is the circle integral itself, so it keeps its relative accuracy even
// where it is exponentially smaller than the kernel.
inline LogComplex kernel_remainder(const KernelParams& p, const PointCd& Z, const PointCd& Zp,
                                   const QuadratureSpec& spec = {}) {
  p.validate();
  detail::check_points(p, Z, Zp);
  const double nn = p.n;
  PointCd Y = Z, Yp = Zp;
  if (!p.rescaled) {
    for (auto& v : Y) v /= std::sqrt(nn);
    for (auto& v : Yp) v /= std::sqrt(nn);
  }
  const auto [z, zp] = reduce_to_scalar(Y, Yp, p.tau);
  const PhaseContext c = make_context(p.tau, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  const double r = contour_radius(S);
  const bool inside = 1.0 / std::abs(S.a) > p.tau;
  ContourInfo ci;
  LogComplex R = In_contour(c, p.n, p.d, r, spec, &ci, false);
  const int k = ci.form == ContourForm::split ? static_cast<int>(r > p.tau) - static_cast<int>(inside)
                                              : -static_cast<int>(inside);
  if (k != 0) R += LogComplex::from_real(k) * residue_term(c, p.n, p.d);
  double logw = 0.0;
  for (int j = 0; j < p.d; ++j)
    logw += 0.5 * (log_weight_omega(std::sqrt(nn) * Y[j], p.tau) + log_weight_omega(std::sqrt(nn) * Yp[j], p.tau));
  double pref = logw - p.d * std::log(std::numbers::pi) - 0.5 * p.d * std::log(1 - p.tau * p.tau);
  if (p.rescaled) pref += p.d * std::log(nn);
  return R * LogComplex(pref, 0.0);
}

// Scalar pair of the fermion kernel: z ± z' = |X ± X'|.
inline std::pair<double, double> fermi_scalar_pair(const PointRd& X, const PointRd& Xp) {
  double sp = 0.0, sm = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    sp += (X[k] + Xp[k]) * (X[k] + Xp[k]);
    sm += (X[k] - Xp[k]) * (X[k] - Xp[k]);
  }
  const double p = std::sqrt(sp), m = std::sqrt(sm);
  return {(p + m) / 2, (p - m) / 2};
}

enum class FermiMethod { hermite, contour };

// 𝕂_n^Fermi(X, X') = n^{d/2} Σ_{|j|<n} Ψ_j(√n X) Ψ_j(√n X').
inline double kernel_fermi(int n, int d, const PointRd& X, const PointRd& Xp, FermiMethod method = FermiMethod::hermite,
                           const QuadratureSpec& spec = {}) {
  require(n >= 1 && d >= 1, "kernel_fermi: n, d >= 1");
  require(static_cast<int>(X.size()) == d && static_cast<int>(Xp.size()) == d, "kernel_fermi: dimension mismatch");
  detail::check_size(n, d);
  const double nn = n, sn = std::sqrt(nn);
  if (method == FermiMethod::hermite) {
    std::vector<std::vector<LogComplex>> seqs(d);
    for (int k = 0; k < d; ++k) {
      auto a = hermite_function_seq(sn * X[k], n);
      auto b = hermite_function_seq(sn * Xp[k], n);
      for (int j = 0; j < n; ++j) a[j] *= b[j];
      seqs[k] = std::move(a);
    }
    return (detail::total_degree_sum(seqs, n) * LogComplex(0.5 * d * std::log(nn), 0.0)).real();
  }
  const auto [z, zp] = fermi_scalar_pair(X, Xp);
  const PhaseContext c = make_context(1.0, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  const LogComplex In = In_contour(c, n, d, contour_radius(S), spec);
  const double pref = 0.5 * d * (std::log(nn) - std::log(std::numbers::pi)) - 0.5 * nn * (norm2(X) + norm2(Xp));
  return (In * LogComplex(pref, 0.0)).real();
}

// For d = 1: 𝕂_n(Z,Z) − n/(π(1−τ²)) = −n/(π√(1−τ²))·ω(√n Z)·Σ_{j≥n}|t_j|², summed directly so the exponentially
// small interior difference keeps its relative accuracy. Returns the (negative) difference.
inline LogComplex diagonal_tail_d1(int n, double tau, cplx Z) {
  require(n >= 1 && tau > 0 && tau < 1, "diagonal_tail_d1: n >= 1, tau in (0,1)");
  const double nn = n;
  const cplx x = std::sqrt(nn) * Z / std::sqrt(2 * tau);
  int N = n + 256;
  for (int attempt = 0; attempt < 12; ++attempt, N *= 2) {
    detail::check_size(N, 1);
    const auto t = hermite_weighted_seq(x, tau, N);
    LogSum s;
    for (int j = n; j < N; ++j) s.add(LogComplex(2 * t[j].log_mod, 0.0));
    // terms decay geometrically once j is past |x|²; accept when the last stretch is negligible
    const double last = 2 * t[N - 1].log_mod;
    const LogComplex v = s.value();
    if (!v.is_zero() && last < v.log_mod - 40 && t[N - 1].log_mod < t[N - 64].log_mod) {
      const double pref = std::log(nn / std::numbers::pi) - 0.5 * std::log(1 - tau * tau) + log_weight_omega(std::sqrt(nn) * Z, tau);
      return -(v * LogComplex(pref, 0.0));
    }
  }
  throw ConvergenceError("diagonal_tail_d1: tail did not decay");
}

// Σ_{j<terms} (τ/2)^j/j! H_j(z) H_j(w).
inline LogComplex mehler_partial_sum(cplx z, cplx w, double tau, int terms) {
  const auto a = hermite_weighted_seq(z, tau, terms);
  const auto b = hermite_weighted_seq(w, tau, terms);
  LogSum s;
  for (int j = 0; j < terms; ++j) s.add(a[j] * b[j]);
  return s.value();
}

// (1−τ²)^{-1/2} exp(−τ²(z²+w²)/(1−τ²) + 2τzw/(1−τ²))
inline LogComplex mehler_closed(cplx z, cplx w, double tau) {
  const double q = 1 - tau * tau;
  return LogComplex::exp((-tau * tau * (z * z + w * w) + 2 * tau * z * w) / q) / LogComplex(0.5 * std::log(q), 0.0);
}

// Gram entries (1/(π√(1−τ²)))(τ/2)^j/j! ∫ H_j conj H_k ω dZ by a tensor Gauss–Hermite rule, exact for
// polynomial degree below 2m.
inline std::vector<std::vector<cplx>> orthonormality_gram(int jmax, double tau, int m) {
  require(jmax >= 0 && m >= 1, "orthonormality_gram: jmax >= 0, m >= 1");
  require(tau > 0 && tau < 1, "orthonormality_gram: tau in (0,1)");
  const Rule r = gauss_hermite_rule(m);
  const int J = jmax + 1;
  std::vector<std::vector<cplx>> G(J, std::vector<cplx>(J, cplx(0.0, 0.0)));
  const double st = std::sqrt(2 * tau);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const cplx Z(std::sqrt(1 + tau) * r.x[i], std::sqrt(1 - tau) * r.x[k]);
      const auto t = hermite_weighted_seq(Z / st, tau, J);
      const double w = r.w[i] * r.w[k] / std::numbers::pi;
      for (int a = 0; a < J; ++a)
        for (int b = 0; b < J; ++b) G[a][b] += w * t[a].to_complex() * std::conj(t[b].to_complex());
    }
  }
  return G;
}

}  // namespace egk
