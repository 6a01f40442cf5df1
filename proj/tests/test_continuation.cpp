#include "tubes/continuation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tubes;

using C = std::complex<double>;

namespace {

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

PolygonalPath<double> segment_path(std::vector<C> v) { return {std::move(v), false}; }

}  // namespace

TEST(Germs, ExpCoefficients) {
  const Germ<double> g = exp_germ<double>();
  ASSERT_EQ(g.degree(), kGermDegree);
  for (int k = 0; k <= g.degree(); ++k) EXPECT_NEAR(g.coefficients[k].real(), 1.0 / factorial(k), 1e-16);
}

TEST(Germs, RootValueAtCentre) {
  const Germ<double> g = root_germ<double>(3, C(8, 0));
  EXPECT_NEAR(std::abs(g.coefficients[0] - C(2, 0)), 0.0, 1e-14);
  // d/dz z^(1/3) = z^(-2/3) / 3
  EXPECT_NEAR(std::abs(g.coefficients[1] - C(1.0 / 12, 0)), 0.0, 1e-14);
}

TEST(Radius, Estimates) {
  EXPECT_NEAR(radius_estimate(geometric_germ<double>()), 1.0, 0.05);
  EXPECT_GE(radius_estimate(exp_germ<double>()), 1e3);
  // Cauchy-Hadamard over k = 12..24 on the closed-form coefficients of log
  // at 2, |c_k| = 1 / (k 2^k)
  double limsup = 0;
  for (int k = 12; k <= 24; ++k) limsup = std::max(limsup, std::pow(1.0 / (k * std::pow(2.0, k)), 1.0 / k));
  EXPECT_NEAR(radius_estimate(log_germ<double>(C(2, 0))), 1.0 / limsup, 1e-9);
  EXPECT_GE(radius_estimate(polynomial_germ<double>({C(1), C(2), C(3)})), 1e3);
  try {
    radius_estimate(polynomial_germ<double>({C(0), C(0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AllZero);
  }
}

TEST(Shift, GeometricToHalf) {
  const Germ<double> g = taylor_shift(geometric_germ<double>(), C(0.5, 0));
  EXPECT_EQ(g.center, C(0.5, 0));
  // 1/(1-z) at 0.5 + t: sum 2^(k+1) t^k
  for (int k = 0; k <= 12; ++k) EXPECT_NEAR(g.coefficients[k].real(), std::pow(2.0, k + 1), 1e-9 * std::pow(2.0, k + 1));
}

TEST(Shift, ExpMatchesClosedForm) {
  const C a(0.3, -0.4);
  const Germ<double> g = taylor_shift(exp_germ<double>(), a);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(std::abs(g.coefficients[k] - std::exp(a) / factorial(k)), 0.0, 1e-13);
}

TEST(Shift, PolynomialIsExact) {
  const Germ<double> g = taylor_shift(polynomial_germ<double>({C(0), C(0), C(1)}), C(1, 0));
  ASSERT_EQ(g.degree(), kGermDegree);
  EXPECT_EQ(g.coefficients[0], C(1));
  EXPECT_EQ(g.coefficients[1], C(2));
  EXPECT_EQ(g.coefficients[2], C(1));
  for (int k = 3; k <= g.degree(); ++k) EXPECT_EQ(g.coefficients[k], C(0));
  EXPECT_THROW(polynomial_germ<double>({C(1)}, C(0), 3), Error);
}

TEST(Shift, TooFarRejected) {
  try {
    taylor_shift(geometric_germ<double>(), C(0.9, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
}

TEST(Continue, ExpAlongPath) {
  const auto path = segment_path({C(0), C(1, 1), C(3, -2), C(-1, 0.5)});
  const ContinuationResult<double> r = continue_along(exp_germ<double>(), path);
  EXPECT_EQ(r.finalGerm.center, C(-1, 0.5));
  EXPECT_NEAR(std::abs(r.finalGerm.coefficients[0] - std::exp(C(-1, 0.5))), 0.0, 1e-12);
}

TEST(Continue, LogGainsTwoPiIPerLoop) {
  const Germ<double> g = log_germ<double>(C(1, 0));
  const auto loop = PolygonalPath<double>::circle(C(0), 1.0);
  for (int turns = 1; turns <= 3; ++turns) {
    Germ<double> cur = g;
    for (int k = 0; k < turns; ++k) {
      cur = continue_along(cur, loop).finalGerm;
      cur.center = g.center;
    }
    EXPECT_NEAR(std::abs(cur.coefficients[0] - C(0, 2 * std::numbers::pi * turns)), 0.0, 1e-8);
    EXPECT_LE(std::abs(cur.coefficients[1] - C(1)), 1e-8);
  }
  // the reverse loop goes back down
  const Germ<double> back = continue_along(g, loop.reversed()).finalGerm;
  EXPECT_NEAR(std::abs(back.coefficients[0] + C(0, 2 * std::numbers::pi)), 0.0, 1e-8);
}

TEST(Monodromy, SquareRootTwo) {
  const MonodromyResult<double> m = monodromy_order(root_germ<double>(2, C(1, 0)), PolygonalPath<double>::circle(C(0), 1.0), 5);
  ASSERT_TRUE(m.order);
  EXPECT_EQ(*m.order, 2);
  // after one loop sqrt changes sign
  EXPECT_NEAR(std::abs(m.offsets[0] - C(-2, 0)), 0.0, 1e-8);
}

TEST(Monodromy, RootsReturnAfterNu) {
  for (int nu = 3; nu <= 6; ++nu) {
    const MonodromyResult<double> m =
        monodromy_order(root_germ<double>(nu, C(2, 0)), PolygonalPath<double>::circle(C(0), 2.0), 10);
    ASSERT_TRUE(m.order);
    EXPECT_EQ(*m.order, nu);
    for (int k = 0; k + 1 < nu; ++k) EXPECT_GT(m.gaps[k], 0.1);
  }
}

TEST(Monodromy, EntireFunctionsHaveOrderOne) {
  const MonodromyResult<double> m = monodromy_order(exp_germ<double>(C(1, 0)), PolygonalPath<double>::circle(C(0), 1.0), 3);
  ASSERT_TRUE(m.order);
  EXPECT_EQ(*m.order, 1);
}

TEST(Monodromy, LoopNotAroundBranchPoint) {
  // circle around 3 does not enclose 0, so log returns after one turn
  const MonodromyResult<double> m = monodromy_order(log_germ<double>(C(2, 0)), PolygonalPath<double>::circle(C(3, 0), 1.0, 64, std::numbers::pi), 3);
  ASSERT_TRUE(m.order);
  EXPECT_EQ(*m.order, 1);
}

TEST(PathIndependence, HomotopicAndNot) {
  const Germ<double> g = log_germ<double>(C(1, 0));
  const auto upper = segment_path({C(1, 0), C(1, 1), C(-1, 1), C(-1, 0.0)});
  const auto upper2 = segment_path({C(1, 0), C(0.5, 2), C(-1, 0.0)});
  const auto lower = segment_path({C(1, 0), C(1, -1), C(-1, -1), C(-1, 0.0)});
  EXPECT_LE(path_independence_check(g, upper, upper2), 1e-8);
  EXPECT_NEAR(path_independence_check(g, upper, lower), 2 * std::numbers::pi, 1e-8);
}

TEST(Continue, ThroughPoleFails) {
  const auto path = segment_path({C(0), C(2, 0)});
  try {
    continue_along(geometric_germ<double>(), path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ContinuationFailure);
  }
}

TEST(Continue, PathMustStartAtCentre) {
  EXPECT_THROW(continue_along(exp_germ<double>(), segment_path({C(1), C(2)})), Error);
}

TEST(Scalar, LongDoubleExpShift) {
  using CL = std::complex<long double>;
  const Germ<long double> g = taylor_shift(exp_germ<long double>(), CL(0.25L, 0));
  EXPECT_NEAR(static_cast<double>(std::abs(g.coefficients[0] - std::exp(CL(0.25L, 0)))), 0.0, 1e-15);
}

TEST(Shift, CompositionAgrees) {
  for (const Germ<double>& g : {geometric_germ<double>(), log_germ<double>(C(1, 0)), exp_germ<double>()}) {
    const C m = g.center + C(0.2, 0.1), c = g.center + C(0.35, 0.15);
    const Germ<double> two = taylor_shift(taylor_shift(g, m), c);
    const Germ<double> one = taylor_shift(g, c);
    EXPECT_LE(germ_gap(two, one), 1e-7);
  }
}
