#include <gtest/gtest.h>

#include <cmath>

#include "youngconst/constants.hpp"

using namespace youngconst;

namespace {
YoungExponents T(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return young_p(Exponent::ratio(a, b), Exponent::ratio(c, d));
}
}  // namespace

// Reference values from an independent 30-digit evaluation.
TEST(Beckner, MatchesHighPrecisionOracle) {
  EXPECT_NEAR(beckner_B(Exponent::ratio(4, 3)), 0.877382675301661640546, 1e-15);
  EXPECT_NEAR(beckner_B(Exponent::ratio(2)), 1.0, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(4, 3, 4, 3), 1), 0.877382675301661640546, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(4, 3, 4, 3), 2), 0.769800358919501019346, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(3, 2, 3, 2), 1), 0.866025403784438646764, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(3, 2, 3, 2), 2), 0.75, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(5, 4, 10, 7), 1), 0.880340899271881662981, 1e-15);
  EXPECT_NEAR(beckner_Y_Rn(T(3, 2, 6, 5), 1), 0.885774402208089525878, 1e-15);
}

TEST(Beckner, NegLog) {
  EXPECT_NEAR(neg_log_constant(beckner_Y_Rn(T(4, 3, 4, 3), 1)), 0.130812035941136959129, 1e-15);
  EXPECT_NEAR(neg_log_constant(beckner_Y_Rn(T(3, 2, 3, 2), 1)), 0.143841036225890463720, 1e-15);
}

TEST(Beckner, PowerLawInDimension) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(beckner_Y_Rn(T(5, 4, 10, 7), n), std::pow(beckner_Y_Rn(T(5, 4, 10, 7), 1), n), 1e-14);
  }
}

TEST(Beckner, SymmetricInExponents) {
  EXPECT_NEAR(beckner_Y_Rn(T(5, 4, 10, 7), 1), beckner_Y_Rn(T(10, 7, 5, 4), 1), 1e-15);
}

TEST(Beckner, BoundaryTriplesGiveOne) {
  EXPECT_DOUBLE_EQ(beckner_Y_Rn(T(1, 1, 3, 1), 1), 1.0);
  EXPECT_DOUBLE_EQ(beckner_Y_Rn(T(2, 1, 2, 1), 3), 1.0);
}

TEST(BoundaryValue, OnlyOnBoundary) {
  EXPECT_EQ(boundary_value(T(1, 1, 7, 3)), 1.0);
  EXPECT_EQ(boundary_value(T(7, 3, 1, 1)), 1.0);
  EXPECT_EQ(boundary_value(T(4, 1, 4, 3)), 1.0);
  EXPECT_FALSE(boundary_value(T(4, 3, 4, 3)).has_value());
}

// Property: interior constants lie strictly in (0, 1) and decrease with n.
TEST(Beckner, InteriorBelowOne) {
  for (int a = 7; a <= 11; ++a) {
    for (int b = 13 - a; b <= 11; ++b) {
      const auto ex = young_p(Exponent::from_reciprocal(Rational(a, 12)), Exponent::from_reciprocal(Rational(b, 12)));
      if (ex.boundary()) continue;
      const double y = beckner_Y_Rn(ex, 1);
      EXPECT_GT(y, 0.0);
      EXPECT_LT(y, 1.0);
      EXPECT_LT(beckner_Y_Rn(ex, 2), y);
    }
  }
}
