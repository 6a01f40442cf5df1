#pragma once

#include "tubes/sheeted.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

namespace tubes {

/// z = re + i im in C^n.
struct ComplexPoint {
  Vec re;
  Vec im;
};

ComplexVec to_complex(const ComplexPoint& z);

/// base + i fiber. An empty fiber stands for the whole of R^n.
struct TubeDomain {
  SheetedRealDomain base;
  std::optional<SheetedRealDomain> fiber;

  Eigen::Index dim() const;
  bool contains(const ComplexPoint& z) const;
  std::string describe() const;
};

TubeDomain tube_over(RealBaseDomain base);
TubeDomain tube_over(RealBaseDomain base, RealBaseDomain fiber);

/// z moved by dx + i dy in base coordinates; for sheeted components the
/// moved point is re-lifted next to the old one. Throws OutsideDomain when
/// the result leaves the tube.
ComplexPoint translate(const TubeDomain& tube, const ComplexPoint& z, const Vec& dx, const Vec& dy);

class BoundaryDistanceOracle {
 public:
  explicit BoundaryDistanceOracle(TubeDomain tube, DistanceMode mode = DistanceMode::Euclidean)
      : tube_(std::move(tube)), mode_(mode) {}

  const TubeDomain& tube() const { return tube_; }
  DistanceMode mode() const { return mode_; }

  /// min(dist(x, boundary of base), dist(y, boundary of fiber)); exact for
  /// products since the complement of X x Y is (X^c x R^n) u (R^n x Y^c).
  /// The Polydisc analogue holds because a polydisc projects onto the cube
  /// of the same radius in each of x and y. Throws OutsideDomain.
  double operator()(const ComplexPoint& z) const;

 private:
  TubeDomain tube_;
  DistanceMode mode_;
};

/// h = max(1e-4, 1e-5 (1 + |z|)).
double default_step(const ComplexPoint& z);

struct LeviResult {
  double value = std::numeric_limits<double>::infinity();
  ComplexVec direction;
};

using PointFunction = std::function<double(const ComplexPoint&)>;
using Translator = std::function<ComplexPoint(const ComplexPoint&, const Vec&, const Vec&)>;

/// Minimum of the finite-difference Levi form
/// (phi(z+hw) + phi(z-hw) + phi(z+ihw) + phi(z-ihw) - 4 phi(z)) / (4 h^2)
/// over the 2n axis directions e_j, i e_j and `directions` seeded random unit
/// directions. `move` defaults to plain addition. Throws StencilOutOfDomain
/// when phi or `move` raises OutsideDomain at a stencil point.
LeviResult levi_min_eigenvalue(const PointFunction& phi, const ComplexPoint& z, double step, int directions,
                               std::uint64_t seed, const Translator& move = {});

/// Seeded source of tube points: draw(index, attempt) is a pure function of
/// its arguments, and retries with attempt > 0 jitter or resample.
struct PointSampler {
  std::size_t size = std::numeric_limits<std::size_t>::max();
  std::function<ComplexPoint(std::size_t, int)> draw;
};

/// Rejection sampling in the tube's box; whole-space fibers use [-1e3, 1e3]^n.
PointSampler random_sampler(const TubeDomain& tube, std::uint64_t seed);
/// Cell centres of a g^n grid over the base's box, g = ceil(points^(1/n)),
/// keeping members. The imaginary part sits at the fiber's sample centre
/// (the origin for whole-space fibers). Univalent bases only.
PointSampler grid_sampler(const TubeDomain& tube, std::size_t points, std::uint64_t seed);

enum class PshVerdict { Passes, Fails };
const char* to_string(PshVerdict v);

struct PshOptions {
  double tol = 1e-3;
  int directions = 64;
  std::uint64_t seed = 0;
  /// Fixed finite-difference step; default_step(z) when unset.
  std::optional<double> step;
  int retries = 10;
};

struct PshReport {
  std::size_t sampleCount = 0;
  double minLeviEigenvalue = std::numeric_limits<double>::infinity();
  ComplexPoint worstPoint;
  ComplexVec worstDirection;
  PshVerdict verdict = PshVerdict::Passes;
  double tolerance = 1e-3;
  std::uint64_t seed = 0;
  /// -tol <= min < 0: too close to zero to call either way.
  bool inconclusive = false;
  std::size_t resamples = 0;
};

/// Levi form of -log delta over `count` sampler points (capped by the
/// sampler's size). A point is redrawn when delta <= 2h or the stencil
/// leaves the tube; after `retries` redraws StencilOutOfDomain is raised.
PshReport psh_check(const BoundaryDistanceOracle& oracle, const PointSampler& sampler, std::size_t count,
                    const PshOptions& options = {});

/// max over shifts of |delta(z + i y) - delta(z)|.
double imaginary_invariance_check(const BoundaryDistanceOracle& oracle, const ComplexPoint& z,
                                  const std::vector<Vec>& shifts);

struct SegmentCheck {
  double minOnSegment = 0.0;
  double minAtEndpoints = 0.0;
  double slack = 0.0;
};

/// delta along the straight real segment p -> q at fixed imaginary part y,
/// `samples` points including the ends. Throws OutsideDomain if a sample
/// leaves the tube.
SegmentCheck segment_min_check(const BoundaryDistanceOracle& oracle, const Vec& p, const Vec& q, const Vec& y,
                               int samples = 100);
SegmentCheck segment_min_check(const BoundaryDistanceOracle& oracle, const LiftedSegment& lifted, const Vec& y,
                               int samples = 100);

struct MidpointCheck {
  int tests = 0;
  /// max of phi(mid) - (phi(a) + phi(b)) / 2 over every dyadic interval.
  double maxViolation = -std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
};

/// Midpoint convexity of -log delta on all dyadic subintervals of [p, q]
/// down to 2^-levels (levels = 7 gives 127 tests).
MidpointCheck dyadic_midpoint_check(const BoundaryDistanceOracle& oracle, const Vec& p, const Vec& q, const Vec& y,
                                    int levels = 7);

}  // namespace tubes
