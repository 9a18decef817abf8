#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "egk/exact_kernels.hpp"
#include "egk/saddle.hpp"

namespace egk {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest observed error, in the check's own measure
  double tolerance = 0.0;
  long samples = 0;
};

namespace detail {

struct RandomPairs {
  std::mt19937_64 g;
  explicit RandomPairs(std::uint64_t seed) : g(seed) {}

  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

  // Off the cut and away from the degenerate loci of the saddle classification.
  cplx off_cut() {
    for (;;) {
      const cplx z(uni(-2.5, 2.5), uni(-1.5, 1.5));
      if (std::abs(z.imag()) > 0.05 && std::abs(z - std::sqrt(2.0)) > 0.05 && std::abs(z + std::sqrt(2.0)) > 0.05) return z;
    }
  }
  cplx on_cut() { return {uni(-1.35, 1.35), 0.0}; }

  // kind 0: both off, 1: z′ on the cut, 2: z on the cut, 3: both on the cut
  std::pair<cplx, cplx> pair(int kind) {
    for (;;) {
      const cplx z = (kind >= 2) ? on_cut() : off_cut();
      const cplx zp = (kind == 1 || kind == 3) ? on_cut() : off_cut();
      if (std::abs(z - zp) > 0.05 && std::abs(z + zp) > 0.05 && std::abs(z) + std::abs(zp) > 0.05) return {z, zp};
    }
  }
};

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline void record(CheckResult& r, double err) {
  ++r.samples;
  if (!(err <= r.worst) || std::isnan(err)) r.worst = std::isnan(err) ? INFINITY : std::max(r.worst, err);
}

inline CheckResult finish(CheckResult r) {
  r.pass = r.worst <= r.tolerance;
  return r;
}

// Richardson-extrapolated central difference of F′, accurate to O(h⁴).
inline cplx F2_finite_difference(const PhaseContext& c, cplx s) {
  const double h = 1e-3 * std::min({std::abs(s), std::abs(s - 1.0), std::abs(s + 1.0), 1.0});
  auto D = [&](double hh) { return (F_deriv(c, s + hh, 1) - F_deriv(c, s - hh, 1)) / (2 * hh); };
  return (4.0 * D(h / 2) - D(h)) / 3.0;
}

}  // namespace detail

// Algebraic identities of the phase function at random inputs, all four cut configurations.
inline std::vector<CheckResult> identity_suite(int samples = 1000, std::uint64_t seed = 20240101, double tol = 1e-8) {
  detail::RandomPairs rng(seed);
  CheckResult roots{"saddle_polynomial_roots", false, 0, tol, 0}, quartic{"quartic_coefficients", false, 0, tol, 0},
      prod_p{"product_identity_plus", false, 0, tol, 0}, prod_m{"product_identity_minus", false, 0, tol, 0},
      expF{"exp_F_at_saddle_closed_vs_direct", false, 0, tol, 0}, f2{"F2_closed_vs_rational", false, 0, tol, 0},
      f2fd{"F2_closed_vs_finite_difference", false, 0, tol, 0}, hid{"h_identity_on_circle", false, 0, tol, 0},
      ab{"alpha_beta_dual_routes", false, 0, tol, 0};
  for (int i = 0; i < samples; ++i) {
    const auto [z, zp] = rng.pair(i % 4);
    const double tau = rng.uni(0.1, 0.9);
    const PhaseContext c = make_context(tau, z, zp);
    const SaddleSet S = saddle_points(z, zp);
    const Which all[] = {Which::a, Which::a_inv, Which::b, Which::b_inv};
    for (Which w : all) {
      const cplx s = S.value(w);
      // relative to the size of the largest monomial
      const double sc = std::max({1.0, std::pow(std::abs(s), 4), std::abs(2.0 * z * zp) * std::pow(std::abs(s), 3)});
      detail::record(roots, std::abs(saddle_polynomial(c, s)) / sc);
    }
    {
      const cplx a = S.a, ai = S.a_inv, b = S.b, bi = S.b_inv;
      const cplx e3 = a + ai + b + bi, e1 = a * ai * b + a * ai * bi + a * b * bi + ai * b * bi;
      const cplx e2 = a * ai + a * b + a * bi + ai * b + ai * bi + b * bi;
      detail::record(quartic, std::max({detail::rel(e3, 2.0 * z * zp), detail::rel(e1, 2.0 * z * zp),
                                        detail::rel(e2, 2.0 * (z * z + zp * zp - 1.0)), detail::rel(a * ai * b * bi, 1.0)}));
      detail::record(prod_p, detail::rel((1.0 + a) * (1.0 + ai) * (1.0 + b) * (1.0 + bi), 2.0 * (z + zp) * (z + zp)));
      detail::record(prod_m, detail::rel((1.0 - a) * (1.0 - ai) * (1.0 - b) * (1.0 - bi), 2.0 * (z - zp) * (z - zp)));
    }
    for (Which w : all) {
      const cplx s = S.value(w);
      if (is_singular_point(s) || std::abs(s - 1.0) < 1e-3 || std::abs(s + 1.0) < 1e-3) continue;
      const cplx closed = F_at_saddle_closed(c, S, w), direct = F_eval(c, s);
      const double dre = std::abs(closed.real() - direct.real()) / std::max(1.0, std::abs(direct.real()));
      const double dim = std::abs(wrap_phase(closed.imag() - direct.imag()));
      detail::record(expF, std::max(dre, dim));
      const cplx f2c = F2_at_saddle(c, S, w);
      detail::record(f2, std::abs(f2c - F_deriv(c, s, 2)) / std::max(1.0, std::abs(f2c)));
      detail::record(f2fd, std::abs(f2c - detail::F2_finite_difference(c, s)) / std::max(1.0, std::abs(f2c)));
    }
    {
      const AlphaBeta r = alpha_beta(c, S);
      detail::record(ab, std::max(detail::rel(r.alpha, r.alpha_elliptic), detail::rel(r.beta, r.beta_elliptic)));
    }
    if (i % 10 == 0) {
      // Re F(a⁻¹ζ) = Re F(a⁻¹) + h(ζ) on the unit circle, 64 roots of unity
      const double ref = F_eval(c, S.a_inv).real();
      for (int k = 0; k < 64; ++k) {
        const cplx zeta = std::polar(1.0, 2 * std::numbers::pi * (k + 0.5) / 64);
        const cplx s = S.a_inv * zeta;
        if (is_singular_point(s)) continue;
        const cplx h = h_eval(c, S, zeta);
        detail::record(hid, std::max(std::abs(F_eval(c, s).real() - ref - h.real()), std::abs(h.imag())) /
                                std::max(1.0, std::abs(ref)));
      }
    }
  }
  std::vector<CheckResult> out;
  for (auto* r : {&roots, &quartic, &prod_p, &prod_m, &expF, &f2, &f2fd, &hid, &ab}) out.push_back(detail::finish(*r));
  return out;
}

// Maximum of Re F on |s| = |a|⁻¹: bound, equality set, and constancy when both points lie on the cut.
inline std::vector<CheckResult> saddle_suite(int samples = 1000, std::uint64_t seed = 20240102, int grid = 4096) {
  detail::RandomPairs rng(seed);
  CheckResult bound{"max_bounded_by_value_at_a_inv", false, 0, 0, 0}, eq{"equality_set_matches_case", false, 0, 0, 0},
      flat{"constant_on_circle_both_on_cut", false, 0, 1e-10, 0};
  for (int i = 0; i < samples; ++i) {
    const int kind = i % 4;
    const auto [z, zp] = rng.pair(kind);
    const PhaseContext c = make_context(rng.uni(0.1, 0.9), z, zp);
    const MaxInequalityReport rep = verify_max_inequality(c, grid, 1e-6);
    detail::record(bound, rep.inequality_holds ? 0.0 : 1.0);
    detail::record(eq, rep.equality_set_matches ? 0.0 : 1.0);
    if (kind == 3) detail::record(flat, rep.variation / std::max(1.0, std::abs(F_eval(c, saddle_points(z, zp).a_inv).real())));
  }
  return {detail::finish(bound), detail::finish(eq), detail::finish(flat)};
}

// Kernel-level identities at small sizes: Mehler sum, orthonormality, Hermite sum against contour.
inline std::vector<CheckResult> kernel_suite(std::uint64_t seed = 20240103) {
  detail::RandomPairs rng(seed);
  CheckResult mehler{"mehler_200_terms_vs_closed", false, 0, 1e-12, 0}, gram{"orthonormality_j_k_le_8", false, 0, 1e-6, 0},
      rep{"hermite_sum_vs_contour", false, 0, 1e-8, 0};
  for (int i = 0; i < 20; ++i) {
    const cplx z = std::polar(rng.uni(0, 1), rng.uni(-3.2, 3.2)), w = std::polar(rng.uni(0, 1), rng.uni(-3.2, 3.2));
    const LogComplex a = mehler_partial_sum(z, w, 0.5, 200), b = mehler_closed(z, w, 0.5);
    detail::record(mehler, std::abs(std::exp(a.log_mod - b.log_mod) * std::polar(1.0, a.phase - b.phase) - 1.0));
  }
  const auto G = orthonormality_gram(8, 0.5, 96);
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t k = 0; k < G.size(); ++k) detail::record(gram, std::abs(G[j][k] - (j == k ? 1.0 : 0.0)));
  for (int i = 0; i < 12; ++i) {
    const int d = 1 + i % 3, n = 5 + 5 * (i % 4);
    PointCd Z(d), Zp(d);
    for (int k = 0; k < d; ++k) {
      Z[k] = std::polar(2 * std::sqrt(rng.uni(0, 1)), rng.uni(-3.2, 3.2));
      Zp[k] = std::polar(2 * std::sqrt(rng.uni(0, 1)), rng.uni(-3.2, 3.2));
    }
    const KernelParams p{n, d, 0.5, false};
    const LogComplex h = kernel_hermite_sum(p, Z, Zp), c = kernel_contour(p, Z, Zp);
    detail::record(rep, std::abs(std::exp(c.log_mod - h.log_mod) * std::polar(1.0, c.phase - h.phase) - 1.0));
  }
  return {detail::finish(mehler), detail::finish(gram), detail::finish(rep)};
}

}  // namespace egk
