#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "egk/error.hpp"
#include "egk/log_complex.hpp"
#include "egk/parallel.hpp"

namespace egk {

struct CMatrix {
  int n = 0;
  std::vector<cplx> a;  // row-major

  CMatrix() = default;
  explicit CMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, cplx(0.0, 0.0)) {}
  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const cplx& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct GaussianMatrixSpec {
  int size = 1;
  double tau = 0.5;
  std::uint64_t seed = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of draw `index`: independent of how draws are scheduled.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace detail {
// Hermitian H with density ∝ exp(−Tr H²): diagonal N(0, 1/2), off-diagonal Re and Im each N(0, 1/4).
inline CMatrix sample_gue(int n, std::mt19937_64& g) {
  std::normal_distribution<double> N(0.0, 1.0);
  CMatrix H(n);
  const double sd = std::sqrt(0.5);
  for (int i = 0; i < n; ++i) {
    H(i, i) = sd * N(g);
    for (int j = i + 1; j < n; ++j) {
      const double re = 0.5 * N(g), im = 0.5 * N(g);
      H(i, j) = cplx(re, im);
      H(j, i) = cplx(re, -im);
    }
  }
  return H;
}
}  // namespace detail

// M = √(1+τ) H₁ + i √(1−τ) H₂
inline CMatrix sample_ege(const GaussianMatrixSpec& s) {
  require(s.size >= 1, "sample_ege: size >= 1");
  require(s.tau >= 0 && s.tau <= 1, "sample_ege: tau must lie in [0,1]");
  std::mt19937_64 g(s.seed);
  const CMatrix H1 = detail::sample_gue(s.size, g), H2 = detail::sample_gue(s.size, g);
  CMatrix M(s.size);
  const double a = std::sqrt(1 + s.tau), b = std::sqrt(1 - s.tau);
  for (std::size_t k = 0; k < M.a.size(); ++k) M.a[k] = a * H1.a[k] + cplx(0.0, b) * H2.a[k];
  return M;
}

// Diagonal similarity by powers of two so that row and column norms are comparable.
inline void balance(CMatrix& A) {
  const int n = A.n;
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (int j = 0; j < n; ++j) A(i, j) /= f;
        for (int j = 0; j < n; ++j) A(j, i) *= f;
      }
    }
  }
}

// Unitary reduction to upper Hessenberg form by Householder reflections.
inline void hessenberg(CMatrix& A) {
  const int n = A.n;
  std::vector<cplx> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double alpha2 = 0.0;
    for (int i = k + 1; i < n; ++i) alpha2 += std::norm(A(i, k));
    const double alpha = std::sqrt(alpha2);
    if (alpha == 0.0) continue;
    const cplx x0 = A(k + 1, k);
    const cplx ph = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    // v = x + e^{i arg x0}|x| e1, H = I − 2vv*/(v*v)
    for (int i = k + 1; i < n; ++i) v[i] = A(i, k);
    v[k + 1] += ph * alpha;
    double vn = 0.0;
    for (int i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    if (vn == 0.0) continue;
    for (int j = k; j < n; ++j) {
      cplx s{0.0, 0.0};
      for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * A(i, j);
      s *= 2.0 / vn;
      for (int i = k + 1; i < n; ++i) A(i, j) -= v[i] * s;
    }
    for (int i = 0; i < n; ++i) {
      cplx s{0.0, 0.0};
      for (int j = k + 1; j < n; ++j) s += A(i, j) * v[j];
      s *= 2.0 / vn;
      for (int j = k + 1; j < n; ++j) A(i, j) -= s * std::conj(v[j]);
    }
    for (int i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
}

namespace detail {
// Eigenvalue of [[a,b],[c,d]] closer to d.
inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr = a + d, det = a * d - b * c;
  const cplx disc = std::sqrt(tr * tr / 4.0 - det);
  const cplx l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}
}  // namespace detail

// Eigenvalues by balancing, Hessenberg reduction and single-shift QR sweeps built from Givens rotations.
inline std::vector<cplx> eigenvalues(const CMatrix& M) {
  require(M.n >= 1 && M.n <= 512, "eigenvalues: 1 <= n <= 512");
  const int n = M.n;
  CMatrix H = M;
  balance(H);
  hessenberg(H);
  std::vector<cplx> eig(n);
  int hi = n - 1, iter = 0, total = 0;
  const long max_sweeps = 60L * n;
  std::vector<double> cs(n);
  std::vector<cplx> sn(n);
  while (hi >= 0) {
    if (hi == 0) {
      eig[0] = H(0, 0);
      break;
    }
    int lo = hi;
    while (lo > 0) {
      const double s = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
      if (std::abs(H(lo, lo - 1)) < 1e-13 * (s == 0.0 ? 1.0 : s)) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = H(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (++total > max_sweeps) {
      std::ostringstream os;
      os << "eigenvalues: no convergence after " << max_sweeps << " sweeps; " << (n - 1 - hi) << " of " << n
         << " eigenvalues deflated";
      throw ConvergenceError(os.str());
    }
    ++iter;
    cplx mu;
    if (iter % 11 == 0)
      mu = H(hi, hi) + std::abs(H(hi, hi - 1)) * cplx(0.75, 0.5);  // exceptional shift against stagnation
    else
      mu = detail::wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
    for (int k = lo; k <= hi; ++k) H(k, k) -= mu;
    // H − μ = QR: rotations G_k zero the subdiagonal, applied from the left ...
    for (int k = lo; k < hi; ++k) {
      const cplx a = H(k, k), b = H(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      double c;
      cplx s;
      if (r == 0.0) {
        c = 1.0;
        s = 0.0;
      } else {
        c = std::abs(a) / r;
        const cplx ph = std::abs(a) > 0 ? a / std::abs(a) : cplx(1.0, 0.0);
        s = ph * std::conj(b) / r;
      }
      cs[k] = c;
      sn[k] = s;
      for (int j = k; j <= hi; ++j) {
        const cplx x = H(k, j), y = H(k + 1, j);
        H(k, j) = c * x + s * y;
        H(k + 1, j) = -std::conj(s) * x + c * y;
      }
    }
    // ... then RQ from the right
    for (int k = lo; k < hi; ++k) {
      const double c = cs[k];
      const cplx s = sn[k];
      for (int i = lo; i <= std::min(k + 2, hi); ++i) {
        const cplx x = H(i, k), y = H(i, k + 1);
        H(i, k) = c * x + std::conj(s) * y;
        H(i, k + 1) = -s * x + c * y;
      }
    }
    for (int k = lo; k <= hi; ++k) H(k, k) += mu;
  }
  return eig;
}

// det M by LU with partial pivoting, as a similarity-invariant check.
inline LogComplex determinant(const CMatrix& M) {
  CMatrix A = M;
  const int n = A.n;
  LogComplex det = LogComplex::one();
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (A(p, k) == cplx(0.0, 0.0)) return LogComplex::zero();
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      det = -det;
    }
    det *= LogComplex::from_complex(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      const cplx f = A(i, k) / A(k, k);
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return det;
}

struct HistogramGrid {
  double xmin = -2, xmax = 2;
  int nx = 40;
  double ymin = -2, ymax = 2;
  int ny = 40;
};

struct EmpiricalDensity {
  HistogramGrid grid;
  std::vector<long> counts;  // row-major ny × nx
  long points = 0;
  double inside_fraction = 0.0;
};

// Histogram of eigenvalues already divided by √n; "inside" uses the ellipse widened by 3n^{−1/2}.
inline EmpiricalDensity empirical_density(const std::vector<cplx>& eigs, double tau, int n, const HistogramGrid& g) {
  require(g.nx >= 1 && g.ny >= 1 && g.xmax > g.xmin && g.ymax > g.ymin, "empirical_density: bad grid");
  require(n >= 1, "empirical_density: n >= 1");
  EmpiricalDensity d;
  d.grid = g;
  d.counts.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
  const double m = 3 / std::sqrt(static_cast<double>(n));
  const double A = 1 + tau + m, B = 1 - tau + m;
  long inside = 0;
  for (const cplx& z : eigs) {
    ++d.points;
    const double u = z.real() / A, v = z.imag() / B;
    if (u * u + v * v < 1) ++inside;
    const int i = static_cast<int>(std::floor((z.real() - g.xmin) / (g.xmax - g.xmin) * g.nx));
    const int j = static_cast<int>(std::floor((z.imag() - g.ymin) / (g.ymax - g.ymin) * g.ny));
    if (i >= 0 && i < g.nx && j >= 0 && j < g.ny) ++d.counts[static_cast<std::size_t>(j) * g.nx + i];
  }
  d.inside_fraction = d.points ? static_cast<double>(inside) / d.points : 0.0;
  return d;
}

// Eigenvalues of `draws` independent matrices, each divided by √n; draw k uses stream_seed(seed, k).
inline std::vector<std::vector<cplx>> sample_spectra(int n, double tau, int draws, std::uint64_t seed) {
  require(draws >= 1, "sample_spectra: draws >= 1");
  std::vector<std::vector<cplx>> out(draws);
  parallel_for(draws, [&](long k) {
    auto e = eigenvalues(sample_ege({n, tau, stream_seed(seed, static_cast<std::uint64_t>(k))}));
    for (auto& z : e) z /= std::sqrt(static_cast<double>(n));
    out[k] = std::move(e);
  });
  return out;
}

// Density of unscaled eigenvalues (√n times the rescaled ones) near the origin: count in |λ| < radius per unit area and draw.
inline double origin_density(const std::vector<std::vector<cplx>>& rescaled, int n, double radius) {
  require(radius > 0 && !rescaled.empty(), "origin_density: radius > 0 and at least one draw");
  const double r = radius / std::sqrt(static_cast<double>(n));
  long c = 0;
  for (const auto& e : rescaled)
    for (const cplx& z : e)
      if (std::abs(z) < r) ++c;
  return static_cast<double>(c) / (static_cast<double>(rescaled.size()) * M_PI * radius * radius);
}

}  // namespace egk
