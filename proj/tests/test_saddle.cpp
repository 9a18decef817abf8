#include <gtest/gtest.h>

#include "egk/egk.hpp"

using namespace egk;

TEST(Elliptic, RoundTrip) {
  const double tau = 0.4;
  for (cplx Z : {cplx(0.3, 0.2), cplx(-1.7, 0.9), cplx(2.5, -1.1)}) {
    const EllipticCoord e = to_elliptic(Z, tau);
    EXPECT_GE(e.xi, 0.0);
    EXPECT_NEAR(std::abs(from_elliptic(e, tau) - Z), 0.0, 1e-13);
  }
}

TEST(Elliptic, BoundaryLevelIsXiTau) {
  // the ellipse with semiaxes 1 ± τ is the level ξ = ξ_τ
  const double tau = 0.5;
  for (double t : {0.1, 1.0, 2.5}) {
    const cplx Z((1 + tau) * std::cos(t), (1 - tau) * std::sin(t));
    EXPECT_NEAR(to_elliptic(Z, tau).xi, xi_tau(tau), 1e-13);
  }
}

TEST(ConformalMap, MapsEllipseToCircle) {
  const double tau = 0.3;
  for (double t : {0.2, 1.3, 3.0}) {
    const cplx Z((1 + tau) * std::cos(t), (1 - tau) * std::sin(t));
    EXPECT_NEAR(std::abs(conformal_phi(Z, tau)), 1.0, 1e-13);
  }
  EXPECT_THROW(conformal_phi(cplx(0.5, 0.0), tau), DomainError);
}

TEST(CountPoints, Binomial) {
  EXPECT_EQ(count_points(10, 1), 10u);
  EXPECT_EQ(count_points(10, 2), 55u);
  EXPECT_EQ(count_points(10, 3), 220u);
}

TEST(Saddle, RootsAndProductStructure) {
  const cplx z(0.7, 0.4), zp(-0.3, 1.1);
  const PhaseContext c = make_context(0.5, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  for (Which w : {Which::a, Which::a_inv, Which::b, Which::b_inv}) EXPECT_LT(std::abs(saddle_polynomial(c, S.value(w))), 1e-12);
  EXPECT_NEAR(std::abs(S.a * S.a_inv - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(S.b * S.b_inv - 1.0), 0.0, 1e-14);
  for (Which w : {Which::a, Which::a_inv, Which::b, Which::b_inv}) EXPECT_LT(std::abs(F_deriv(c, S.value(w), 1)), 1e-12);
}

TEST(Saddle, CaseTags) {
  EXPECT_EQ(saddle_points(cplx(0.5, 0.5), cplx(-0.2, 0.7)).case_tag, CaseTag::generic);
  EXPECT_EQ(saddle_points(cplx(0.5, 0.0), cplx(-0.2, 0.7)).case_tag, CaseTag::z_on_cut);
  EXPECT_EQ(saddle_points(cplx(0.5, 0.5), cplx(-0.2, 0.0)).case_tag, CaseTag::zp_on_cut);
  EXPECT_EQ(saddle_points(cplx(0.5, 0.0), cplx(-0.2, 0.0)).case_tag, CaseTag::both_on_cut);
  EXPECT_EQ(saddle_points(cplx(0.5, 0.5), cplx(0.5, 0.5)).case_tag, CaseTag::z_eq_pm_zp);
  EXPECT_EQ(saddle_points(cplx(std::sqrt(2.0), 0.0), cplx(0.1, 0.3)).case_tag, CaseTag::vertex_degenerate);
  EXPECT_EQ(saddle_points(0.0, 0.0).case_tag, CaseTag::none);
}

TEST(Saddle, SecondDerivativeClosedForm) {
  const cplx z(1.1, -0.6), zp(0.4, 0.9);
  const PhaseContext c = make_context(0.6, z, zp);
  const SaddleSet S = saddle_points(z, zp);
  for (Which w : {Which::a, Which::a_inv, Which::b, Which::b_inv}) {
    const cplx f2 = F2_at_saddle(c, S, w);
    EXPECT_LT(std::abs(f2 - F_deriv(c, S.value(w), 2)) / std::max(1.0, std::abs(f2)), 1e-10);
  }
}

TEST(GFunction, ContinuousAcrossTaylorSwitch) {
  const double tau = 0.5, xt = xi_tau(tau);
  for (double eta : {0.0, 0.7, 2.0}) {
    EXPECT_NEAR(g_eval(xt + 0.9999e-4, eta, tau), g_eval(xt + 1.0001e-4, eta, tau), 1e-7);
    EXPECT_NEAR(g_exponent(xt, eta, tau), 0.0, 1e-15);
  }
}

TEST(GFunction, PositiveOffTheBoundary) {
  // the decay rate of the interior and exterior corrections
  const double tau = 0.5, xt = xi_tau(tau);
  for (double dx : {-0.2, -0.05, 0.05, 0.4})
    for (double eta : {0.0, 0.9, 2.2}) EXPECT_GT(g_eval(xt + dx, eta, tau), 0.0) << dx << " " << eta;
}

TEST(MaxInequality, EachCaseOnAFixedExample) {
  const std::pair<cplx, cplx> pairs[] = {{cplx(0.6, 0.7), cplx(-1.2, 0.3)},
                                         {cplx(0.6, 0.7), cplx(-0.8, 0.0)},
                                         {cplx(0.6, 0.0), cplx(-1.2, 0.3)},
                                         {cplx(0.6, 0.0), cplx(-0.8, 0.0)}};
  const char* expected_case[] = {"i", "ii", "iii", "iv"};
  for (int k = 0; k < 4; ++k) {
    const auto r = verify_max_inequality(make_context(0.5, pairs[k].first, pairs[k].second), 4096);
    EXPECT_EQ(r.theorem_case, expected_case[k]);
    EXPECT_TRUE(r.inequality_holds) << k;
    EXPECT_TRUE(r.equality_set_matches) << k;
  }
}

TEST(MaxInequality, ConstantWhenBothOnCut) {
  const auto r = verify_max_inequality(make_context(0.3, 0.4, -1.1), 2048);
  EXPECT_LT(r.variation, 1e-10);
}

TEST(RegionScan, LevelSetSplitsTheWindow) {
  const PhaseContext c = make_context(0.5, cplx(0.6, 0.7), cplx(-1.2, 0.3));
  const double level = F_eval(c, saddle_points(c.z, c.zp).a_inv).real();
  const auto g = region_scan(c, level, {-3, 3, -3, 3}, 60, 60);
  long on = 0;
  for (unsigned char v : g) on += v;
  EXPECT_GT(on, 0);
  EXPECT_LT(on, 3600);
}

TEST(Suites, IdentitySuiteSmall) {
  for (const auto& r : identity_suite(200, 7)) EXPECT_TRUE(r.pass) << r.name << " " << r.worst;
}

TEST(Suites, SaddleSuiteSmall) {
  for (const auto& r : saddle_suite(100, 8, 2048)) EXPECT_TRUE(r.pass) << r.name << " " << r.worst;
}

TEST(Suites, KernelSuite) {
  for (const auto& r : kernel_suite()) EXPECT_TRUE(r.pass) << r.name << " " << r.worst;
}
