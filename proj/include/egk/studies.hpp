#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "egk/asymptotics.hpp"
#include "egk/exact_kernels.hpp"

namespace egk {

// Everything a comparison target may need. Unused fields are ignored by a given target.
struct StudySpec {
  int d = 1;
  double tau = 0.5;
  double kappa = 0.5;
  PointCd z, zp;  // macroscopic points
  PointRd x;      // real base point (fermions, weak bulk)
  PointRd omega;  // unit direction (weak edge)
  PointCd u, v;   // microscopic offsets
};

inline const std::vector<std::string>& study_targets() {
  static const std::vector<std::string> t{"thm1",     "thm2",      "fermi-bulk", "fermi-edge",
                                          "cd-bulk",  "weak-bulk", "weak-edge",  "onepoint"};
  return t;
}

namespace detail {
inline PointRd real_part(const PointCd& p) {
  PointRd r;
  for (const cplx& c : p) r.push_back(c.real());
  return r;
}
inline void need(bool ok, const std::string& target, const char* what) {
  require(ok, "study " + target + ": " + what);
}
}  // namespace detail

// Defaults that put each target in its theorem's regime.
inline StudySpec default_study_spec(const std::string& target) {
  StudySpec s;
  const double tau = s.tau;
  if (target == "thm1" || target == "thm2") {
    s.z = {from_elliptic({xi_tau(tau) + 0.1, 0.3}, tau)};
    s.zp = {from_elliptic({xi_tau(tau) - 0.05, 1.9}, tau)};
  } else if (target == "fermi-bulk") {
    s.x = {0.5};
  } else if (target == "fermi-edge") {
    s.x = {std::sqrt(2.0)};
    s.u = {0.0};
    s.v = {0.0};
  } else if (target == "cd-bulk") {
    s.d = 2;
    s.z = {0.0, 0.0};
    s.u = {{0.3, 0.2}, {-0.1, 0.4}};
    s.v = {{0.5, -0.1}, {0.2, 0.1}};
  } else if (target == "weak-bulk") {
    s.x = {0.5};
    s.u = {{0.3, 0.1}};
    s.v = {{-0.2, 0.05}};
  } else if (target == "weak-edge") {
    s.omega = {1.0};
    s.u = {0.0};
    s.v = {0.0};
  } else if (target == "onepoint") {
    s.z = {cplx(0.3, 0.2)};
  } else {
    throw DomainError("unknown study target: " + target);
  }
  return s;
}

// Error of the target's limit against the exact kernel at size n. All comparisons are cocycle free:
// moduli, or real quantities.
inline std::function<double(int)> study_error(const std::string& target, const StudySpec& s) {
  using detail::need;
  if (target == "thm1") {
    need(s.z.size() == 1 && s.zp.size() == 1, target, "needs scalar z and zp");
    return [s](int n) {
      const KernelParams p{n, 1, s.tau, true};
      const LogComplex ex = kernel_hermite_sum(p, s.z, s.zp), as = kn_asymptotic_d1(p, s.z[0], s.zp[0]);
      return std::abs(std::exp(as.log_mod - ex.log_mod) - 1);
    };
  }
  if (target == "thm2") {
    need(s.z.size() == 1 && s.zp.size() == 1, target, "needs scalar z and zp");
    return [s](int n) {
      const Cluster2 c = cluster2({n, 1, s.tau, true}, s.z[0], s.zp[0]);
      return std::abs(c.formula / c.exact - 1);
    };
  }
  if (target == "fermi-bulk") {
    need(!s.x.empty(), target, "needs x");
    return [s](int n) {
      const int d = static_cast<int>(s.x.size());
      const double dd = d;
      return std::abs(kernel_fermi(n, d, s.x, s.x) * std::tgamma(dd + 1) / std::pow(n, dd) - fermi_bulk_density(d, s.x));
    };
  }
  if (target == "fermi-edge") {
    need(!s.x.empty() && s.u.size() == s.x.size() && s.v.size() == s.x.size(), target, "needs x, u, v of equal length");
    const PointRd U = detail::real_part(s.u), V = detail::real_part(s.v);
    const double lim = fermi_edge_kernel(static_cast<int>(s.x.size()), s.x, U, V);
    return [s, U, V, lim](int n) {
      const int d = static_cast<int>(s.x.size());
      const double sc = std::pow(n, 2.0 / 3.0) * std::sqrt(2.0);
      PointRd a(d), b(d);
      for (int k = 0; k < d; ++k) {
        a[k] = s.x[k] + U[k] / sc;
        b[k] = s.x[k] + V[k] / sc;
      }
      return std::abs(kernel_fermi(n, d, a, b) / std::pow(sc, d) / lim - 1);
    };
  }
  if (target == "cd-bulk") {
    const std::size_t d = s.z.size();
    need(d >= 1 && s.u.size() == d && s.v.size() == d, target, "needs z, u, v of equal length");
    const LogComplex lim = bulk_product_kernel(s.tau, static_cast<int>(d), s.z, s.u, s.v);
    return [s, d, lim](int n) {
      const double sn = std::sqrt(static_cast<double>(n));
      PointCd a(d), b(d);
      for (std::size_t k = 0; k < d; ++k) {
        a[k] = s.z[k] + s.u[k] / sn;
        b[k] = s.z[k] + s.v[k] / sn;
      }
      const LogComplex ex = kernel_hermite_sum({n, static_cast<int>(d), s.tau, true}, a, b);
      return std::abs(std::exp(ex.log_mod - d * std::log(static_cast<double>(n)) - lim.log_mod) - 1);
    };
  }
  if (target == "weak-bulk") {
    const std::size_t d = s.x.size();
    need(d >= 1 && s.u.size() == d && s.v.size() == d, target, "needs x, u, v of equal length");
    const double nu = weak_bulk_nu(s.x), lim = std::abs(weak_bulk_kernel(s.x, s.kappa, s.u, s.v));
    return [s, d, nu, lim](int n) {
      const double nn = n, sc = std::pow(nu, 1.0 / d) * nn, tau = 1 - s.kappa / sc;
      PointCd a(d), b(d);
      for (std::size_t k = 0; k < d; ++k) {
        a[k] = s.x[k] + s.u[k] / sc;
        b[k] = s.x[k] + s.v[k] / sc;
      }
      const LogComplex ex = kernel_hermite_sum({n, static_cast<int>(d), tau, true}, a, b);
      return std::abs(std::exp(ex.log_mod - 2 * std::log(nu) - 2.0 * d * std::log(nn)) / lim - 1);
    };
  }
  if (target == "weak-edge") {
    const std::size_t d = s.omega.size();
    need(d >= 1 && s.u.size() == d && s.v.size() == d, target, "needs omega, u, v of equal length");
    const double lim = std::abs(weak_edge_kernel(static_cast<int>(d), s.kappa, s.omega, s.u, s.v));
    return [s, d, lim](int n) {
      const double nn = n, tau = 1 - s.kappa * std::pow(nn, -1.0 / 3.0), sc = std::pow(nn, 2.0 / 3.0);
      PointCd a(d), b(d);
      for (std::size_t k = 0; k < d; ++k) {
        a[k] = (1 + tau) * s.omega[k] + s.u[k] / sc;
        b[k] = (1 + tau) * s.omega[k] + s.v[k] / sc;
      }
      const LogComplex ex = kernel_hermite_sum({n, static_cast<int>(d), tau, true}, a, b);
      return std::abs(std::exp(ex.log_mod - 4.0 * d / 3.0 * std::log(nn)) / lim - 1);
    };
  }
  if (target == "onepoint") {
    need(s.z.size() == 1, target, "needs a scalar z");
    return [s](int n) {
      const KernelParams p{n, 1, s.tau, true};
      const cplx Z = s.z[0];
      const double xt = xi_tau(s.tau), q = 1 - s.tau * s.tau;
      const double inside = to_elliptic(Z, s.tau).xi < xt ? 1 / (std::numbers::pi * q) : 0.0;
      // inside, the exponentially small difference is summed directly; outside, 𝕂_n is itself small and positive
      const double meas = inside > 0 ? diagonal_tail_d1(n, s.tau, Z).real() / n
                                     : kernel_hermite_sum(p, s.z, s.z).real() / n;
      const double pred = one_point_correction_d1(p, Z);
      return std::abs(meas / pred - 1);
    };
  }
  throw DomainError("unknown study target: " + target);
}

inline ConvergenceReport run_study(const std::string& target, const StudySpec& s, const std::vector<int>& n_list) {
  return convergence_study(target, n_list, study_error(target, s));
}

}  // namespace egk
