#include <gtest/gtest.h>

#include "egk/egk.hpp"

using namespace egk;

TEST(Constants, SegmentEnd) {
  // Γ(1/6)/(π² 2^{7/6} 3^{5/6}) and the 3^{1/3} variant, mpmath
  EXPECT_NEAR(segment_end_constant(Variant::corrected), 0.10056929487554421780, 1e-14);
  EXPECT_NEAR(segment_end_constant(Variant::printed), 0.17419112840581891529, 1e-14);
}

TEST(OnePoint, InteriorLeadingTerm) {
  const KernelParams p{200, 1, 0.5, true};
  EXPECT_NEAR(one_point_d1(p, cplx(0.3, 0.2)), 4 / (3 * std::numbers::pi), 1e-12);
  const auto dd = one_point_dd({10, 2, 0.5, true}, {0.0, 0.0});
  EXPECT_NEAR(dd.leading, 100 / (std::numbers::pi * std::numbers::pi * 0.5625), 1e-10);
  EXPECT_EQ(dd.gamma, 0);
}

TEST(OnePoint, BranchSelection) {
  EXPECT_EQ(one_point_branch(cplx(0.5, 0.3), 0.5), OnePointBranch::off_segment);
  EXPECT_EQ(one_point_branch(cplx(0.5, 0.0), 0.5), OnePointBranch::on_segment);
  EXPECT_EQ(one_point_branch(cplx(2 * std::sqrt(0.5), 0.0), 0.5), OnePointBranch::segment_end);
}

TEST(OnePoint, OnSegmentCorrectionTracksExactDiagonal) {
  // the derived oscillation follows the exact difference at a point of the focal segment
  const double tau = 0.5;
  const cplx Z = 1.0;
  for (int n : {150, 151, 200}) {
    const double meas = diagonal_tail_d1(n, tau, Z).real() / n;
    const double pred = one_point_correction_d1({n, 1, tau, true}, Z);
    EXPECT_NEAR(meas / pred, 1.0, 0.05) << n;
  }
}

TEST(Fermi, BulkDensityValues) {
  EXPECT_NEAR(fermi_bulk_density(2, {0.0, 0.0}), 1 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(fermi_bulk_density(1, {0.0}), std::sqrt(2.0) / std::numbers::pi, 1e-15);
  EXPECT_NEAR(fermi_bulk_density(3, {0.5, 0.2, 0.1}), 0.22458132339369660680, 1e-14);
  EXPECT_EQ(fermi_bulk_density(2, {1.5, 0.0}), 0.0);
}

TEST(Fermi, BulkKernelIsSineKernelInOneDimension) {
  for (double r : {0.01, 0.5, 1.7, 4.0}) {
    EXPECT_NEAR(fermi_bulk_kernel(1, {r}, {0.0}), std::sin(2 * r) / (std::numbers::pi * r), 1e-14);
  }
}

TEST(Fermi, EdgeKernelIsAiryKernelInOneDimension) {
  const double s2 = std::sqrt(2.0);
  // K_Ai(0,0) = Ai'(0)²
  EXPECT_NEAR(fermi_edge_kernel(1, {s2}, {0.0}, {0.0}), 0.066987483779663974144, 1e-11);
  for (double u : {-1.0, 0.4, 1.5}) {
    const double ai = airy_ai(u), aip = airy_ai_prime(u);
    EXPECT_NEAR(fermi_edge_kernel(1, {s2}, {u}, {u}), aip * aip - u * ai * ai, 1e-10) << u;
  }
}

TEST(Fermi, EdgeRoutesAgree) {
  const PointRd X{1.0, 1.0}, U{0.3, -0.2}, V{-0.1, 0.4};
  EXPECT_NEAR(fermi_edge_kernel(2, X, U, V) / fermi_edge_kernel_fourier(2, X, U, V), 1.0, 1e-9);
}

TEST(Weak, EdgeKernelReferenceValue) {
  // κ = 1/2, U = V = 0, d = 1 with the printed weight, mpmath double integral
  EXPECT_NEAR(std::abs(weak_edge_kernel(1, 0.5, {1.0}, {0.0}, {0.0}, Variant::printed)), 0.10137303389525643992, 1e-9);
}

TEST(Weak, BulkSmallKappaClosedForm) {
  for (int d = 1; d <= 3; ++d) {
    const double I = weak_bulk_t_integral(d, 0.0, d - 1, cplx(0.49, 0.0)).real();
    EXPECT_NEAR(I / weak_bulk_small_kappa_closed(d, 0.7), 1.0, 1e-12) << d;
  }
}

TEST(Weak, BulkLargeKappaLimit) {
  const PointRd X{0.3};
  const double kappa = 2e3, sk = std::sqrt(kappa);
  const PointCd u{cplx(0.2, 0.1)}, v{cplx(-0.1, 0.3)};
  const cplx a = weak_bulk_kernel(X, kappa, {sk * u[0]}, {sk * v[0]}), b = weak_bulk_large_kappa(X, kappa, u, v);
  EXPECT_NEAR(std::abs(a / b - 1.0), 0.0, 1e-3);
}

TEST(Weak, BulkNu) {
  EXPECT_NEAR(weak_bulk_nu({0.0}), 1 / std::numbers::pi, 1e-15);
  EXPECT_THROW(weak_bulk_nu({2.5}), DomainError);
}

TEST(Ginibre, ProductKernelMatchesExactInterior) {
  const LogComplex lim = bulk_product_kernel(0.5, 1, {0.0}, {cplx(0.3, 0.1)}, {cplx(-0.2, 0.2)});
  const int n = 80;
  const double sn = std::sqrt(80.0);
  const LogComplex ex = kernel_hermite_sum({n, 1, 0.5, true}, {cplx(0.3, 0.1) / sn}, {cplx(-0.2, 0.2) / sn});
  EXPECT_NEAR(std::exp(ex.log_mod - std::log(80.0) - lim.log_mod), 1.0, 1e-10);
}

TEST(UniformBound, HoldsAtSampledPoints) {
  for (int n : {10, 40}) {
    const KernelParams p{n, 1, 0.5, true};
    for (cplx Z : {cplx(0.4, 0.3), cplx(1.6, 0.2), cplx(-0.5, -0.8)}) {
      const cplx Zp(0.2, -0.4);
      EXPECT_LE(kernel_remainder(p, {Z}, {Zp}).modulus(), uniform_bound_d1(p, Z, Zp, Variant::printed));
    }
  }
}

TEST(Convergence, PowerLawFitRecoversExponent) {
  const auto r = convergence_study("synthetic", {10, 20, 40, 80}, [](int n) { return 3.0 / std::pow(n, 1.5); });
  EXPECT_NEAR(r.fitted_exponent, -1.5, 1e-12);
  EXPECT_FALSE(r.degenerate);
}

TEST(Convergence, ExponentialFitRecoversRate) {
  const auto r = convergence_study("synthetic", {10, 20, 30}, [](int n) { return std::exp(-0.2 * n); }, true);
  EXPECT_NEAR(r.fitted_exponent, -0.2, 1e-12);
}
