#include "tubes/config.hpp"
#include "tubes/distance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace tubes;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Exit distance of z along unit direction (dx, dy) in R^{2n}, by bisection
// on membership only.
double ray_exit(const TubeDomain& t, const ComplexPoint& z, const Vec& dx, const Vec& dy, double far) {
  double lo = 0, hi = far;
  if (t.contains({z.re + far * dx, z.im + far * dy})) return far;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t.contains({z.re + mid * dx, z.im + mid * dy})) lo = mid;
    else hi = mid;
  }
  return lo;
}

// Upper bound for delta from 4000 random rays plus the 4n axis rays.
double ray_oracle(const TubeDomain& t, const ComplexPoint& z, Rng& rng) {
  const Eigen::Index n = z.re.size();
  double best = std::numeric_limits<double>::infinity();
  auto probe = [&](const Vec& d) { best = std::min(best, ray_exit(t, z, d.head(n), d.tail(n), 50.0)); };
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    Vec e = Vec::Zero(2 * n);
    e[k] = 1;
    probe(e);
    probe(-e);
  }
  for (int i = 0; i < 4000; ++i) probe(rng.unit_vector(2 * n));
  return best;
}

ComplexPoint cp(const Vec& re, const Vec& im) { return {re, im}; }

}  // namespace

TEST(Oracle, ProductRuleAgainstRayExits) {
  const std::vector<TubeDomain> tubes = {
      tube_over(Ball(Vec::Zero(2), 1.0), Ball(Vec::Zero(2), 0.5)),
      tube_over(fixture_base("hexagon"), Ball(Vec::Zero(2), 0.3)),
      tube_over(fixture_base("L-shape"), HalfspacePolytope::box(v2(-1, -1), v2(1, 1))),
  };
  Rng rng(77);
  for (const auto& t : tubes) {
    const BoundaryDistanceOracle delta(t);
    const PointSampler s = random_sampler(t, 3);
    for (std::size_t i = 0; i < 15; ++i) {
      const ComplexPoint z = s.draw(i, 0);
      const double d = delta(z);
      const double ray = ray_oracle(t, z, rng);
      EXPECT_LE(d, ray + 1e-9) << t.describe();
      EXPECT_GE(d, ray * 0.95 - 1e-9) << t.describe();
    }
  }
}

TEST(Oracle, WholeSpaceFiberIgnoresImaginaryPart) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("unit-square")));
  EXPECT_NEAR(delta(cp(v2(0.25, 0.5), v2(1e3, -7))), 0.25, 1e-15);
}

TEST(Oracle, OutsideThrows) {
  const BoundaryDistanceOracle delta(tube_over(Ball(Vec::Zero(2), 1.0), Ball(Vec::Zero(2), 1.0)));
  try {
    delta(cp(v2(0, 0), v2(2, 0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideDomain);
  }
}

TEST(Oracle, PolydiscUsesSupNorm) {
  const BoundaryDistanceOracle e(tube_over(Ball(Vec::Zero(2), 1.0)));
  const BoundaryDistanceOracle p(tube_over(Ball(Vec::Zero(2), 1.0)), DistanceMode::Polydisc);
  const ComplexPoint z = cp(v2(0, 0), v2(0, 0));
  EXPECT_NEAR(e(z), 1.0, 1e-15);
  EXPECT_NEAR(p(z), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Levi, ClosedFormFunctions) {
  const ComplexPoint z = cp(v2(0.3, -0.2), v2(0.1, 0.4));
  const PointFunction sq = [](const ComplexPoint& w) { return w.re.squaredNorm() + w.im.squaredNorm(); };
  const LeviResult a = levi_min_eigenvalue(sq, z, 1e-3, 32, 1);
  EXPECT_NEAR(a.value, 1.0, 1e-6);
  // Re(z1^2) is pluriharmonic
  const PointFunction ph = [](const ComplexPoint& w) { return w.re[0] * w.re[0] - w.im[0] * w.im[0]; };
  EXPECT_NEAR(levi_min_eigenvalue(ph, z, 1e-3, 32, 1).value, 0.0, 1e-6);
  // -|z1|^2 has Levi value -1 along e1
  const PointFunction neg = [](const ComplexPoint& w) { return -(w.re[0] * w.re[0] + w.im[0] * w.im[0]); };
  const LeviResult n = levi_min_eigenvalue(neg, z, 1e-3, 32, 1);
  EXPECT_NEAR(n.value, -1.0, 1e-6);
  EXPECT_NEAR(std::abs(n.direction[0]), 1.0, 1e-9);
}

TEST(Levi, StencilOutsideDomain) {
  const BoundaryDistanceOracle delta(tube_over(Ball(Vec::Zero(2), 1.0), Ball(Vec::Zero(2), 1.0)));
  const PointFunction phi = [&](const ComplexPoint& w) { return -std::log(delta(w)); };
  try {
    levi_min_eigenvalue(phi, cp(v2(0.9999, 0), v2(0, 0)), 1e-3, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StencilOutOfDomain);
  }
}

TEST(Psh, ConvexTubesPass) {
  for (const auto& name : {"ball", "unit-square", "L-hull"}) {
    const BoundaryDistanceOracle delta(tube_over(fixture_base(name)));
    const PshReport r = psh_check(delta, random_sampler(delta.tube(), 5), 100, {.seed = 5});
    EXPECT_EQ(r.verdict, PshVerdict::Passes) << name << " min " << r.minLeviEigenvalue;
    EXPECT_EQ(r.sampleCount, 100u);
  }
}

TEST(Psh, LShapeGridFindsWitness) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("L-shape")));
  const PshReport r = psh_check(delta, grid_sampler(delta.tube(), 2500, 1), 2500, {.seed = 1});
  EXPECT_EQ(r.verdict, PshVerdict::Fails);
  EXPECT_LT(r.minLeviEigenvalue, -0.01);
  // the witness sits near the reentrant corner (1,1)
  EXPECT_LT((r.worstPoint.re - v2(1, 1)).norm(), 0.5);
}

TEST(Psh, ShellWholeFiberFails) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("shell-1-2")));
  const PshReport r = psh_check(delta, random_sampler(delta.tube(), 2), 500, {.seed = 2});
  EXPECT_EQ(r.verdict, PshVerdict::Fails);
  EXPECT_LT(r.minLeviEigenvalue, -0.01);
}

TEST(Psh, ReplaysForFixedSeed) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("hexagon")));
  const PshReport a = psh_check(delta, random_sampler(delta.tube(), 8), 50, {.seed = 8});
  const PshReport b = psh_check(delta, random_sampler(delta.tube(), 8), 50, {.seed = 8});
  EXPECT_EQ(a.minLeviEigenvalue, b.minLeviEigenvalue);
  EXPECT_EQ(a.worstPoint.re, b.worstPoint.re);
}

TEST(Invariance, WholeSpaceVersusFiniteFiber) {
  Rng rng(6);
  std::vector<Vec> shifts;
  for (int i = 0; i < 100; ++i) shifts.push_back(rng.unit_vector(2) * rng.uniform(0, 100));
  const ComplexPoint z = cp(v2(0.2, 0.1), v2(0, 0));
  EXPECT_LE(imaginary_invariance_check(BoundaryDistanceOracle(tube_over(fixture_base("ball"))), z, shifts), 1e-12);
  const std::vector<Vec> half = {v2(0.5, 0)};
  const BoundaryDistanceOracle finite(tube_over(fixture_base("ball"), Ball(Vec::Zero(2), 1.0)));
  EXPECT_GT(imaginary_invariance_check(finite, z, half), 0.1);
}

TEST(Segment, ConvexTubeMinAtEndpoints) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("triangle")));
  Rng rng(10);
  const RealBaseDomain tri = fixture_base("triangle");
  for (int i = 0; i < 100; ++i) {
    const Vec p = sample_member(tri, rng), q = sample_member(tri, rng);
    const SegmentCheck s = segment_min_check(delta, p, q, Vec::Zero(2));
    EXPECT_GE(s.slack, -1e-9);
    EXPECT_GE(s.minOnSegment, s.minAtEndpoints - 1e-9);
  }
}

TEST(Segment, NonconvexDips) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("L-shape")));
  const SegmentCheck s = segment_min_check(delta, v2(1.4, 0.5), v2(0.5, 1.4), Vec::Zero(2));
  // passes 0.05 sqrt 2 from the corner (1,1)
  EXPECT_NEAR(s.minAtEndpoints, 0.5, 1e-12);
  EXPECT_LT(s.minOnSegment, 0.08);
  EXPECT_LT(s.slack, -0.4);
}

TEST(Midpoint, DyadicCountsAndConvexity) {
  const BoundaryDistanceOracle delta(tube_over(fixture_base("hexagon")));
  const MidpointCheck m = dyadic_midpoint_check(delta, v2(-0.5, 0.1), v2(0.6, -0.2), Vec::Zero(2));
  EXPECT_EQ(m.tests, 127);
  EXPECT_LE(m.maxViolation, 1e-6);
  const BoundaryDistanceOracle l(tube_over(fixture_base("L-shape")));
  EXPECT_GT(dyadic_midpoint_check(l, v2(1.4, 0.5), v2(0.5, 1.4), Vec::Zero(2)).maxViolation, 0.1);
}

TEST(Translate, CoverRelifts) {
  const TubeDomain t{UniversalCover(Shell(Vec::Zero(2), 0.5, 4.0)), std::nullopt};
  // go once around the hole in 8 steps: u2 should grow by 2 pi
  ComplexPoint z = cp(v2(0.0, 0.0), v2(0, 0));
  for (int k = 0; k < 8; ++k) {
    const double a0 = 2 * std::numbers::pi * k / 8, a1 = 2 * std::numbers::pi * (k + 1) / 8;
    const Vec d = v2(std::cos(a1) - std::cos(a0), std::sin(a1) - std::sin(a0));
    z = translate(t, z, d, Vec::Zero(2));
  }
  EXPECT_NEAR(z.re[0], 0.0, 1e-12);
  EXPECT_NEAR(z.re[1], 2 * std::numbers::pi, 1e-12);
}

TEST(Samplers, GridRejectsCovers) {
  const TubeDomain t{FiniteCover(Shell(Vec::Zero(2), 0.5, 4.0), 2), std::nullopt};
  EXPECT_THROW(grid_sampler(t, 100, 0), Error);
}
