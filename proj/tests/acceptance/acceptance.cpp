// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "egk/egk.hpp"
#include "egk/verify.hpp"

using namespace egk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char b[64];
  std::snprintf(b, sizeof b, f, x);
  return b;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt("%.3g", x);
  return s;
}

double complex_rel(const LogComplex& a, const LogComplex& b) {
  return std::abs(std::exp(a.log_mod - b.log_mod) * std::polar(1.0, a.phase - b.phase) - 1.0);
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// 1. Hermite sum against the contour integral, unscaled points in the radius-2 disk.
Outcome representation(double& limit) {
  limit = 30;
  std::mt19937_64 g(101);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int d = 1; d <= 3; ++d)
    for (int n : {5, 20, 50})
      for (int i = 0; i < 50; ++i) {
        PointCd Z(d), Zp(d);
        for (int k = 0; k < d; ++k) {
          Z[k] = std::polar(2 * std::sqrt(u(g)), 2 * std::numbers::pi * u(g));
          Zp[k] = std::polar(2 * std::sqrt(u(g)), 2 * std::numbers::pi * u(g));
        }
        const KernelParams p{n, d, 0.5, false};
        worst = std::max(worst, complex_rel(kernel_contour(p, Z, Zp), kernel_hermite_sum(p, Z, Zp)));
      }
  return {worst <= 1e-8, "worst rel " + fmt("%.2e", worst) + " over 450 evaluations (tol 1e-8)"};
}

// 2. Mehler: 200-term sum against the closed form.
Outcome mehler(double& limit) {
  limit = 1;
  std::mt19937_64 g(102);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const cplx z = std::polar(std::sqrt(u(g)), 2 * std::numbers::pi * u(g));
    const cplx w = std::polar(std::sqrt(u(g)), 2 * std::numbers::pi * u(g));
    worst = std::max(worst, complex_rel(mehler_partial_sum(z, w, 0.5, 200), mehler_closed(z, w, 0.5)));
  }
  return {worst <= 1e-12, "worst rel " + fmt("%.2e", worst) + " at 200 pairs (tol 1e-12)"};
}

// 3. Orthonormality of the planar Hermite polynomials.
Outcome orthonormality(double& limit) {
  limit = 60;
  const auto G = orthonormality_gram(8, 0.5, 96);
  double worst = 0;
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t k = 0; k < G.size(); ++k) worst = std::max(worst, std::abs(G[j][k] - (j == k ? 1.0 : 0.0)));
  return {worst <= 1e-6, "max |G - I| " + fmt("%.2e", worst) + " for j,k <= 8 (tol 1e-6)"};
}

Outcome from_checks(const std::vector<CheckResult>& rs) {
  Outcome o{true, ""};
  for (const auto& r : rs) {
    o.pass = o.pass && r.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + r.name + (r.pass ? " ok " : " FAILED ") + fmt("%.1e", r.worst);
  }
  return o;
}

// 4. Phase-function identities on 10³ random inputs.
Outcome identities(double& limit) {
  limit = 10;
  return from_checks(identity_suite(1000));
}

// 5. Maximum of Re F on the circle |s| = |a|⁻¹.
Outcome max_on_circle(double& limit) {
  limit = 0;
  return from_checks(saddle_suite(1000));
}

// 6. Uniform error bounds as inequalities.
Outcome uniform_bounds(double& limit) {
  limit = 0;
  std::mt19937_64 g(106);
  std::uniform_real_distribution<double> ux(-2, 2), uy(-1, 1);
  const int ns1[] = {5, 10, 20, 50, 100, 200}, ns2[] = {5, 10, 20, 40, 60};
  double w1 = 0, w1p = 0, w2 = 0;
  for (int i = 0; i < 1000; ++i) {
    const KernelParams p{ns1[i % 6], 1, 0.5, true};
    const cplx Z(ux(g), uy(g)), Zp(ux(g), uy(g));
    const double R = kernel_remainder(p, {Z}, {Zp}).modulus();
    w1 = std::max(w1, R / uniform_bound_d1(p, Z, Zp));
    w1p = std::max(w1p, R / uniform_bound_d1(p, Z, Zp, Variant::printed));
  }
  for (int i = 0; i < 1000; ++i) {
    const KernelParams p{ns2[i % 5], 2, 0.5, true};
    const PointCd Z{cplx(ux(g), uy(g)), cplx(ux(g), uy(g))}, Zp{cplx(ux(g), uy(g)), cplx(ux(g), uy(g))};
    w2 = std::max(w2, kernel_remainder(p, Z, Zp).modulus() / uniform_bound_dd(p, Z, Zp));
  }
  return {w1p <= 1 && w1 <= 1 && w2 <= 1, "max remainder/bound: d=1 printed constant " + fmt("%.3f", w1p) +
                                              ", d=1 derived constant " + fmt("%.3f", w1) + ", d=2 " + fmt("%.3f", w2)};
}

// 7. Interior density: exponential decay rate of the deviation.
Outcome interior_density(double& limit) {
  limit = 0;
  const double tau = 0.5;
  const cplx Z(0.3, 0.2);
  const EllipticCoord e = to_elliptic(Z, tau);
  const double target = 2 * g_exponent(e.xi, e.eta, tau);
  std::vector<int> ns;
  for (int n = 50; n <= 400; n += 50) ns.push_back(n);
  const auto r = convergence_study("interior", ns, [&](int n) { return diagonal_tail_d1(n, tau, Z).modulus() / n; }, true);
  const bool ok = !r.degenerate && std::abs(r.fitted_exponent / target - 1) <= 0.2;
  return {ok, "slope " + fmt("%.4f", r.fitted_exponent) + " vs " + fmt("%.4f", target) + " (within 20%)"};
}

std::vector<std::pair<cplx, cplx>> boundary_pairs() {
  const double tau = 0.5, xt = xi_tau(tau);
  return {{from_elliptic({xt + 0.1, 0.3}, tau), from_elliptic({xt - 0.05, 1.9}, tau)},
          {from_elliptic({xt, 0.3}, tau), from_elliptic({xt, 1.9}, tau)},
          {from_elliptic({xt + 0.1, 0.3}, tau), from_elliptic({xt - 0.05, -2.0}, tau)},
          {from_elliptic({xt + 0.2, 1.0}, tau), from_elliptic({xt + 0.3, 2.5}, tau)}};
}

Outcome boundary_rate(const std::string& target, double& limit) {
  limit = target == "thm1" ? 120 : 0;
  Outcome o{true, "exponents"};
  for (const auto& [z, zp] : boundary_pairs()) {
    StudySpec s;
    s.z = {z};
    s.zp = {zp};
    const auto r = run_study(target, s, {100, 200, 400, 800});
    o.pass = o.pass && !r.degenerate && within(r.fitted_exponent, -1, 0.2);
    o.detail += " " + fmt("%.3f", r.fitted_exponent);
  }
  o.detail += " (target -1 +- 0.2)";
  return o;
}

// 8. Kernel asymptotics at the droplet boundary.
Outcome thm1(double& limit) { return boundary_rate("thm1", limit); }

// 9. Two-point cluster function.
Outcome thm2(double& limit) { return boundary_rate("thm2", limit); }

// 10. One-point function on the focal segment (ii) and at its end (iii).
Outcome one_point(double& limit) {
  limit = 0;
  const double tau = 0.5, pi = std::numbers::pi, q = 1 - tau * tau;
  // (ii): least-squares phase of the oscillation at Z = 1 over n = 196..204
  const cplx Z = 1.0;
  const double eta = to_elliptic(Z, tau).eta, ce = std::cos(eta), se = std::sin(eta);
  const double D = 1 + tau * tau - 2 * tau * std::cos(2 * eta);
  std::vector<std::pair<double, double>> data;  // (φ_n, measured f_n)
  for (int n = 196; n <= 204; ++n) {
    const double meas = (diagonal_tail_d1(n, tau, Z).real() / n) * std::sqrt(2 * pi * pi * pi * n) * std::sqrt(q) * se /
                        std::exp(2 * n * g_exponent(0.0, eta, tau));
    data.emplace_back(n * (2 * eta - std::sin(2 * eta)), meas);
  }
  auto misfit = [&](double delta) {
    double s = 0;
    for (const auto& [ph, m] : data) {
      const double f = -1 / (1 - tau) + ((1 - tau) * ce * std::sin(ph + delta) + (1 + tau) * se * std::cos(ph + delta)) / D;
      s += (f - m) * (f - m);
    }
    return s;
  };
  double best = 0, bv = 1e300;
  for (int k = 0; k < 36000; ++k) {
    const double dl = -pi + 2 * pi * k / 36000;
    if (misfit(dl) < bv) bv = misfit(dl), best = dl;
  }
  const double printed = -pi / 4;  // Z > 0
  const double phase_err = std::abs(wrap_phase(best - printed));
  const bool ok2 = phase_err <= 0.05;
  // (iii): n^{-1/6} amplitude at the segment end, n = 400
  const int n = 400;
  const cplx E = 2 * std::sqrt(tau);
  const double amp = -(diagonal_tail_d1(n, tau, E).real() / n) * std::pow(n, 1.0 / 6) * std::sqrt(q) * (1 - tau) /
                     std::exp(2 * n * g_exponent(0.0, 0.0, tau));
  const double cp = segment_end_constant(Variant::printed), cc = segment_end_constant(Variant::corrected);
  const bool ok3 = std::abs(amp / cp - 1) <= 0.1;
  return {ok2 && ok3, std::string("(ii) ") + (ok2 ? "ok" : "FAILED") + ": fitted phase offset " + fmt("%.4f", best) +
                          " vs printed " + fmt("%.4f", printed) + " (err " + fmt("%.3f", phase_err) +
                          " rad, tol 0.05; derived form predicts pi, err " + fmt("%.3f", std::abs(wrap_phase(best - pi))) +
                          "); (iii) " + (ok3 ? "ok" : "FAILED") + ": measured amplitude " + fmt("%.4f", amp) +
                          " vs printed constant " + fmt("%.4f", cp) + " (" + fmt("%+.1f", 100 * (amp / cp - 1)) +
                          "%), derived constant " + fmt("%.4f", cc) + " (" + fmt("%+.1f", 100 * (amp / cc - 1)) + "%)"};
}

// 11. Fermions: bulk density rates, sine kernel, edge rate.
Outcome fermions(double& limit) {
  limit = 0;
  Outcome o{true, "bulk density exponents"};
  const std::vector<std::vector<int>> nl{{50, 100, 200, 400}, {20, 40, 80, 160}, {10, 20, 40, 60}};
  for (int d = 1; d <= 3; ++d) {
    StudySpec s;
    s.x = PointRd(d, 0.0);
    s.x[0] = 0.5;
    const auto r = run_study("fermi-bulk", s, nl[d - 1]);
    const bool ok = !r.degenerate && within(r.fitted_exponent, -1, 0.2);
    o.pass = o.pass && ok;
    o.detail += " d=" + std::to_string(d) + ":" + fmt("%.3f", r.fitted_exponent) + (ok ? "" : "(FAILED)");
  }
  double worst = 0;
  for (int i = 1; i <= 100; ++i) {
    const double r = 0.05 * i;
    const double sine = std::sin(2 * r) / (std::numbers::pi * r);
    worst = std::max(worst, std::abs(fermi_bulk_kernel(1, {0.3 + r}, {0.3}) / sine - 1));
  }
  o.pass = o.pass && worst <= 1e-10;
  o.detail += "; sine kernel worst rel " + fmt("%.1e", worst);
  StudySpec e = default_study_spec("fermi-edge");
  const auto r = run_study("fermi-edge", e, {50, 100, 200, 400});
  const bool ok = !r.degenerate && within(r.fitted_exponent, -1.0 / 3, 0.15);
  o.pass = o.pass && ok;
  o.detail += "; edge exponent d=1 " + fmt("%.3f", r.fitted_exponent) + " (target -1/3 +- 0.15)" + (ok ? "" : " FAILED");
  StudySpec e2;
  e2.x = {1.0, 1.0};
  e2.u = {0.0, 0.0};
  e2.v = {0.0, 0.0};
  o.detail += ", d=2 for reference " + fmt("%.3f", run_study("fermi-edge", e2, {25, 50, 100, 200}).fitted_exponent);
  return o;
}

// 12. Weak non-Hermiticity: κ limits and the edge kernel against the exact one.
Outcome weak(double& limit) {
  limit = 0;
  double w0 = 0;
  for (int d = 1; d <= 3; ++d)
    for (double xi : {0.3, 0.7, 1.5}) {
      const double kappa = 1e-4;
      const double I = weak_bulk_t_integral(d, std::numbers::pi * kappa, d - 1, cplx(xi * xi, 0.0)).real();
      w0 = std::max(w0, std::abs(I / weak_bulk_small_kappa_closed(d, xi) - 1));
    }
  double wi = 0;
  const double kappa = 1e3, sk = std::sqrt(kappa);
  for (const PointRd& X : {PointRd{0.0}, PointRd{0.8}, PointRd{0.5, -0.3}}) {
    PointCd u, v, U, V;
    for (std::size_t k = 0; k < X.size(); ++k) {
      u.push_back(cplx(0.3, 0.2) * double(k + 1));
      v.push_back(cplx(-0.1, 0.15));
      U.push_back(sk * u.back());
      V.push_back(sk * v.back());
    }
    wi = std::max(wi, std::abs(weak_bulk_kernel(X, kappa, U, V) / weak_bulk_large_kappa(X, kappa, u, v) - 1.0));
  }
  const auto r = run_study("weak-edge", default_study_spec("weak-edge"), {100, 200, 400});
  const bool ok_edge = r.errors[1] <= 0.1 && !r.degenerate && within(r.fitted_exponent, -1.0 / 3, 0.15);
  return {w0 <= 1e-3 && wi <= 1e-2 && ok_edge,
          "kappa->0 worst rel " + fmt("%.1e", w0) + " (tol 1e-3); kappa->inf worst rel " + fmt("%.1e", wi) +
              " (tol 1e-2); weak edge deviations " + list(r.errors) + " at n=100,200,400, exponent " +
              fmt("%.3f", r.fitted_exponent) + " (target -1/3 +- 0.15)"};
}

// 13. Sampler.
Outcome sampler(double& limit) {
  limit = 300;
  const double tau = 0.5;
  const auto sp = sample_spectra(200, tau, 50, 13);
  std::vector<cplx> all;
  for (const auto& v : sp) all.insert(all.end(), v.begin(), v.end());
  const double inside = empirical_density(all, tau, 200, {}).inside_fraction;
  double wt = 0, wd = 0;
  for (int k = 0; k < 10; ++k) {
    const CMatrix M = sample_ege({20, tau, stream_seed(1313, k)});
    const auto e = eigenvalues(M);
    cplx tr = 0, se = 0;
    LogComplex pe = LogComplex::one();
    for (int i = 0; i < 20; ++i) tr += M(i, i);
    for (const cplx& z : e) {
      se += z;
      pe *= LogComplex::from_complex(z);
    }
    wt = std::max(wt, std::abs(se - tr) / std::abs(tr));
    wd = std::max(wd, complex_rel(pe, determinant(M)));
  }
  const double rho = origin_density(sample_spectra(400, tau, 100, 1331), 400, 3.0);
  const double target = 1 / (std::numbers::pi * (1 - tau * tau));
  const double dev = std::abs(rho / target - 1);
  return {inside >= 0.97 && wt <= 1e-8 && wd <= 1e-6 && dev <= 0.1,
          "inside fraction " + fmt("%.4f", inside) + "; trace rel " + fmt("%.1e", wt) + ", det rel " + fmt("%.1e", wd) +
              "; origin density " + fmt("%.4f", rho) + " vs " + fmt("%.4f", target) + " (" + fmt("%.1f", 100 * dev) + "%)"};
}

// 14. Strong bulk factorization in C^2.
Outcome cd_bulk(double& limit) {
  limit = 0;
  const double err = study_error("cd-bulk", default_study_spec("cd-bulk"))(60);
  return {err <= 0.02, "relative deviation of |K| at n=60, d=2, Z=0: " + fmt("%.2e", err) + " (tol 2%)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(double&)> run;
  };
  const std::vector<Criterion> cs{{1, "representation equivalence", representation},
                                  {2, "Mehler identity", mehler},
                                  {3, "orthonormality", orthonormality},
                                  {4, "phase-function identities", identities},
                                  {5, "maximum on the saddle circle", max_on_circle},
                                  {6, "uniform error bounds", uniform_bounds},
                                  {7, "interior density decay", interior_density},
                                  {8, "boundary kernel asymptotics", thm1},
                                  {9, "two-point cluster function", thm2},
                                  {10, "one-point function corrections", one_point},
                                  {11, "fermion limits", fermions},
                                  {12, "weak non-Hermiticity", weak},
                                  {13, "sampler", sampler},
                                  {14, "strong bulk factorization", cd_bulk}};
  int failed = 0;
  for (const auto& c : cs) {
    double limit = 0;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(limit);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && secs > limit) {
      o.pass = false;
      o.detail += "; runtime over " + fmt("%.0f", limit) + " s";
    }
    failed += !o.pass;
    std::printf("%s criterion %2d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(cs.size()) - failed, cs.size());
  return failed ? 1 : 0;
}
