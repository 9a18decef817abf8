#include <gtest/gtest.h>

#include "egk/egk.hpp"

using namespace egk;

TEST(Studies, EveryTargetHasDefaults) {
  for (const auto& t : study_targets()) EXPECT_NO_THROW(study_error(t, default_study_spec(t))) << t;
  EXPECT_THROW(default_study_spec("nope"), DomainError);
}

TEST(Studies, BoundaryKernelRate) {
  const auto r = run_study("thm2", default_study_spec("thm2"), {100, 200, 400, 800});
  EXPECT_NEAR(r.fitted_exponent, -1.0, 0.2);
}

TEST(Studies, FermiBulkRate) {
  const auto r = run_study("fermi-bulk", default_study_spec("fermi-bulk"), {50, 100, 200, 400});
  EXPECT_NEAR(r.fitted_exponent, -1.0, 0.2);
}

TEST(Studies, WeakBulkConvergesToDerivedLimit) {
  const auto f = study_error("weak-bulk", default_study_spec("weak-bulk"));
  EXPECT_LT(f(400), 0.5 * f(100));
  EXPECT_LT(f(400), 0.01);
}

TEST(Studies, MismatchedSpecIsRejected) {
  StudySpec s = default_study_spec("cd-bulk");
  s.u.pop_back();
  EXPECT_THROW(study_error("cd-bulk", s), DomainError);
}
