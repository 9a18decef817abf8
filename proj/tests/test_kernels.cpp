#include <gtest/gtest.h>

#include "egk/egk.hpp"

using namespace egk;

namespace {
double rel(const LogComplex& a, cplx b) { return std::abs(a.to_complex() / b - 1.0); }
double rel(const LogComplex& a, const LogComplex& b) { return std::abs((a / b).to_complex() - 1.0); }
}  // namespace

// Reference kernels summed directly in mpmath from the Hermite expansion.

TEST(Kernel, SizeOneClosedForm) {
  const LogComplex k = kernel_hermite_sum({1, 1, 0.5, true}, {0.0}, {0.0});
  EXPECT_NEAR(k.log_mod, std::log(1 / (std::numbers::pi * std::sqrt(0.75))), 1e-14);
  EXPECT_NEAR(k.phase, 0.0, 1e-15);
}

TEST(Kernel, UnscaledSmallCases) {
  EXPECT_LT(rel(kernel_hermite_sum({3, 1, 0.5, false}, {cplx(0.3, 0.2)}, {cplx(-0.4, 0.5)}),
                cplx(0.27549331000918417461, -0.089929113549725883495)),
            1e-13);
  EXPECT_LT(rel(kernel_hermite_sum({4, 2, 0.5, false}, {cplx(0.3, 0.2), cplx(0.1, -0.7)}, {cplx(-0.4, 0.5), cplx(1.1, 0.3)}),
                cplx(0.019077950214727371150, -0.035734396894835093761)),
            1e-13);
  EXPECT_LT(rel(kernel_hermite_sum({30, 1, 0.5, false}, {cplx(1.5, 0.8)}, {cplx(-0.9, 1.2)}),
                cplx(0.0013715277002660125695, 0.0080736971217202739463)),
            1e-11);
}

TEST(Kernel, RescaledMatchesReference) {
  EXPECT_LT(rel(kernel_hermite_sum({10, 1, 0.5, true}, {cplx(0.3, 0.2)}, {cplx(0.25, 0.1)}),
                cplx(3.8811954229451797465, 0.14024044507328925776)),
            1e-13);
}

TEST(Kernel, HermitianSymmetry) {
  const KernelParams p{25, 2, 0.4, true};
  const PointCd Z{cplx(0.3, 0.1), cplx(-0.2, 0.4)}, Zp{cplx(0.5, -0.3), cplx(0.1, 0.2)};
  EXPECT_LT(rel(kernel_hermite_sum(p, Z, Zp), kernel_hermite_sum(p, Zp, Z).conj()), 1e-13);
}

TEST(Kernel, ContourAgreesWithHermiteSum) {
  for (int d = 1; d <= 3; ++d) {
    const KernelParams p{12, d, 0.5, false};
    PointCd Z(d), Zp(d);
    for (int k = 0; k < d; ++k) {
      Z[k] = cplx(0.4 * k - 0.3, 0.5 - 0.2 * k);
      Zp[k] = cplx(0.7 - 0.3 * k, -0.1 * k);
    }
    EXPECT_LT(rel(kernel_contour(p, Z, Zp), kernel_hermite_sum(p, Z, Zp)), 1e-8) << d;
  }
}

TEST(Kernel, LargeSizeStaysFiniteInLogForm) {
  const LogComplex k = kernel_hermite_sum({3000, 1, 0.5, false}, {cplx(60, 5)}, {cplx(58, -3)});
  EXPECT_TRUE(std::isfinite(k.log_mod));
}

TEST(Kernel, ResourceLimit) {
  EXPECT_THROW(kernel_hermite_sum({5000, 3, 0.5, true}, PointCd(3, 0.0), PointCd(3, 0.0)), ResourceError);
}

TEST(Kernel, InvalidArguments) {
  EXPECT_THROW(kernel_hermite_sum({5, 1, 1.0, true}, {0.0}, {0.0}), DomainError);
  EXPECT_THROW(kernel_hermite_sum({5, 2, 0.5, true}, {0.0}, {0.0}), DomainError);
  EXPECT_THROW(kernel_hermite_sum({0, 1, 0.5, true}, {0.0}, {0.0}), DomainError);
}

TEST(Mehler, ClosedFormAtReferencePoint) {
  const cplx z(0.4, -0.3), w(-0.2, 0.6);
  const cplx ref(1.2150123809867842997, 0.76175144734293617391);
  EXPECT_LT(rel(mehler_closed(z, w, 0.5), ref), 1e-14);
  EXPECT_LT(rel(mehler_partial_sum(z, w, 0.5, 200), ref), 1e-13);
}

TEST(Gram, OrthonormalUpToEight) {
  const auto G = orthonormality_gram(8, 0.5, 96);
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t k = 0; k < G.size(); ++k) EXPECT_NEAR(std::abs(G[j][k] - (j == k ? 1.0 : 0.0)), 0.0, 1e-10);
}

TEST(Fermi, OneDimensionalReference) {
  EXPECT_NEAR(kernel_fermi(6, 1, {0.3}, {-0.2}), -0.64657954037101009857, 1e-13);
}

TEST(Fermi, ContourMatchesHermite) {
  const PointRd X{0.3, -0.2}, Xp{0.1, 0.4};
  const double h = kernel_fermi(15, 2, X, Xp), c = kernel_fermi(15, 2, X, Xp, FermiMethod::contour);
  EXPECT_NEAR(c / h, 1.0, 1e-8);
}

TEST(Fermi, TotalNumberOfPoints) {
  // ∫ 𝕂_n(X,X) dX = binom(n+d−1, d) in d dimensions; at d = 1 this is n, checked by Gauss–Hermite
  const int n = 8;
  const Rule r = gauss_hermite_rule(40);
  double s = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double x = r.x[i] / std::sqrt(static_cast<double>(n));
    s += r.w[i] * std::exp(r.x[i] * r.x[i]) * kernel_fermi(n, 1, {x}, {x}) / std::sqrt(static_cast<double>(n));
  }
  EXPECT_NEAR(s, n, 1e-10);
}

TEST(DiagonalTail, MatchesDirectDifferenceAtSmallSize) {
  const int n = 12;
  const cplx Z(0.3, 0.2);
  const double tau = 0.5;
  const double direct = kernel_hermite_sum({n, 1, tau, true}, {Z}, {Z}).real() - n / (std::numbers::pi * (1 - tau * tau));
  EXPECT_NEAR(diagonal_tail_d1(n, tau, Z).real() / direct, 1.0, 1e-9);
}

TEST(DiagonalTail, NegativeAndTinyInside) {
  const LogComplex t = diagonal_tail_d1(400, 0.5, cplx(0.3, 0.2));
  EXPECT_LT(t.real(), 0.0);
  EXPECT_LT(t.log_mod, -30.0);
}
