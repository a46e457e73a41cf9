#include <gtest/gtest.h>

#include <cmath>

#include "youngconst/estimator.hpp"

using namespace youngconst;

namespace {
const YoungExponents kEx43 = young_p(Exponent::ratio(4, 3), Exponent::ratio(4, 3));
const YoungExponents kEx57 = young_p(Exponent::ratio(5, 4), Exponent::ratio(10, 7));
}  // namespace

TEST(Estimator, CompactGroupsSaturate) {
  EstimateConfig cfg;
  cfg.restarts = 4;
  for (const auto* s : {"Zmod:8", "AffF:5", "Torus:n=8"}) {
    const auto rep = estimate(model_from_selector(s), kEx57, cfg);
    EXPECT_NEAR(rep.lower_bound, 1.0, 1e-6) << s;
    EXPECT_NEAR(rep.reevaluated, rep.lower_bound, 1e-10) << s;
  }
}

TEST(Estimator, BoundaryTripleRejected) {
  EXPECT_THROW(estimate(model_from_selector("Zmod:4"), young_p(Exponent::ratio(1), Exponent::ratio(3))), DomainError);
  EXPECT_THROW(estimate(model_from_selector("Zmod:4"), young_p(Exponent::ratio(2), Exponent::ratio(2))), DomainError);
}

TEST(Estimator, ZeroRestartsRejected) {
  EstimateConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(estimate(model_from_selector("Zmod:4"), kEx43, cfg), DomainError);
}

TEST(Estimator, DeterministicAndThreadIndependent) {
  EstimateConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 100;
  const auto m = model_from_selector("Rline:h=0.25,L=2");
  const auto a = estimate(m, kEx43, cfg);
  const auto b = estimate(m, kEx43, cfg);
  cfg.threads = 3;
  const auto c = estimate(m, kEx43, cfg);
  EXPECT_EQ(a.lower_bound, b.lower_bound);
  EXPECT_EQ(a.lower_bound, c.lower_bound);
  EXPECT_EQ(a.best_restart, c.best_restart);
}

TEST(Estimator, RatioTraceIsNondecreasing) {
  EstimateConfig cfg;
  cfg.restarts = 2;
  const auto rep = estimate(model_from_selector("Rline:h=0.2,L=3"), kEx43, cfg);
  for (std::size_t i = 1; i < rep.ratio_trace.size(); ++i) EXPECT_GE(rep.ratio_trace[i], rep.ratio_trace[i - 1] - 1e-14);
  EXPECT_LE(rep.lower_bound, beckner_Y_Rn(kEx43, 1));
  EXPECT_GT(rep.lower_bound, 0.85);
}

TEST(Estimator, UpperReferencesForAffineModel) {
  const auto refs = default_upper_refs(*model_from_selector("Affine:hu=0.5,Lu=1,hb=0.5,Lb=1"), kEx43);
  bool has_exact = false;
  for (const auto& r : refs) has_exact = has_exact || std::abs(r.value - std::pow(beckner_Y_Rn(kEx43, 1), 2)) < 1e-15;
  EXPECT_TRUE(has_exact);
}

TEST(GaussianAnsatz, MatchesClosedForm) {
  for (const auto& ex : {kEx43, kEx57, young_p(Exponent::ratio(3, 2), Exponent::ratio(3, 2))}) {
    EXPECT_NEAR(gaussian_ansatz(ex).ratio, beckner_Y_Rn(ex, 1), 1e-9);
  }
}

TEST(GaussianAnsatz, RatioIsScaleInvariant) {
  EXPECT_NEAR(gaussian_ratio(kEx57, 1.0, 1.7), gaussian_ratio(kEx57, 3.0, 5.1), 1e-14);
  EXPECT_THROW(gaussian_ratio(kEx57, 0.0, 1.0), DomainError);
}

TEST(BoundaryWitness, ExactOnFiniteAndStepModels) {
  for (const auto& ex : {young_p(Exponent::ratio(2), Exponent::ratio(2)),
                         young_p(Exponent::ratio(4, 3), Exponent::ratio(4))}) {
    for (const auto* s : {"Zmod:8", "AffF:5"}) EXPECT_NEAR(boundary_witness(model_from_selector(s), ex).ratio, 1.0, 1e-14) << s;
    EXPECT_GE(boundary_witness(model_from_selector("Rline:h=0.05,L=3"), ex).ratio, 1.0 - 1e-3);
  }
}

TEST(BoundaryWitness, RejectsNonBoundaryTriple) {
  EXPECT_THROW(boundary_witness(model_from_selector("Zmod:8"), kEx43), DomainError);
}

TEST(Audit, SubgroupReferencesRespected) {
  EstimateConfig cfg;
  cfg.restarts = 2;
  cfg.max_iters = 100;
  const std::vector<AuditPair> pairs{{model_from_selector("Zmod:6"), "trivial", 1.0, 1e-9},
                                     {model_from_selector("R2:h=0.5,L=1.5"), "R", beckner_Y_Rn(kEx43, 1), 5e-3}};
  for (const auto& row : monotonicity_audit(pairs, kEx43, cfg)) EXPECT_TRUE(row.pass) << row.group;
}
