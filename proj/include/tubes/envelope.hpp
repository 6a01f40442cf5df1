#pragma once

#include "tubes/distance.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tubes {

struct BochnerEnvelope {
  /// Tube over `hull` with whole-space fiber.
  TubeDomain tube;
  RealBaseDomain hull;
  /// False when the hull was built from samples.
  bool exact = true;
  /// Sampled hulls of shells: max over facets of R - (b_i - n_i . c), the
  /// gap between the supporting plane of the outer ball and the facet.
  /// Sampled regions: a lower bound from 10^3 fresh members outside the hull.
  double hausdorffDefect = 0.0;
  std::vector<Vec> vertices;
};

/// Tube over the convex hull of the base. Balls and polytopes are already
/// convex and returned as given; unions go through convex_hull of their
/// parts' vertices; shells with finite outer radius
/// and sampled regions use the hull of `sampleBudget` members. An unbounded
/// shell has hull R^n.
BochnerEnvelope bochner_envelope(const RealBaseDomain& base, std::size_t sampleBudget = 10000,
                                 std::uint64_t seed = 0);

enum class CertVerdict { Convex, NonConvexWitness };
enum class WitnessReason { LiftAbsent, MidpointViolation };
const char* to_string(CertVerdict v);
const char* to_string(WitnessReason r);

struct ConvexityWitness {
  Vec p;
  Vec q;
  WitnessReason reason = WitnessReason::LiftAbsent;
  /// psi(mid) - (psi(p) + psi(q)) / 2; NaN for LiftAbsent.
  double violation = 0.0;
};

struct ConvexityCertificate {
  CertVerdict verdict = CertVerdict::Convex;
  bool univalent = true;
  std::optional<std::pair<Vec, Vec>> univalenceWitness;
  int midpointTrials = 0;
  double tolerance = 1e-6;
  /// No trials were run; Convex holds only vacuously.
  bool vacuous = false;
  std::size_t liftAbsent = 0;
  std::size_t violations = 0;
  std::optional<ConvexityWitness> witness;

  /// Univalent and no witness.
  bool passes() const { return univalent && verdict == CertVerdict::Convex; }
};

/// Univalence via univalence_witness, convexity via lift_segment between
/// member pairs. `probes` are tested before the `trials` seeded pairs.
ConvexityCertificate abe_check(const SheetedRealDomain& base, int trials, std::uint64_t seed,
                               const std::vector<std::pair<Vec, Vec>>& probes = {});

struct GeneralizedTube {
  SheetedRealDomain a1;
  SheetedRealDomain a2;
  TubeDomain tube() const { return {a1, a2}; }
};

class PsiFunction {
 public:
  const SheetedRealDomain& a1() const { return a1_; }
  const Vec& y0() const { return y0_; }
  double rho0() const { return rho0_; }
  /// dist(y0, boundary of A2) >= 2 rho0.
  double fiberDistance() const { return fiber_distance_; }

  /// max(-log dist(x, boundary of A1), -log rho0); OutsideDomain off A1.
  double operator()(const Vec& x) const;

 private:
  friend PsiFunction psi_build(const GeneralizedTube&, const Vec&, double);
  PsiFunction(SheetedRealDomain a1, Vec y0, double rho0, double fiber)
      : a1_(std::move(a1)), y0_(std::move(y0)), rho0_(rho0), fiber_distance_(fiber) {}

  SheetedRealDomain a1_;
  Vec y0_;
  double rho0_;
  double fiber_distance_;
};

/// Throws BadRho unless y0 lies in A2 with dist(y0, boundary of A2) >= 2 rho0.
PsiFunction psi_build(const GeneralizedTube& tube, const Vec& y0, double rho0);

/// Midpoint convexity psi(mid) <= (psi(p) + psi(q)) / 2 + tol along lifted
/// segments between `trials` seeded member pairs of A1. The preferred
/// witness is a midpoint violation; a missing lift is kept otherwise.
ConvexityCertificate psi_convexity_check(const PsiFunction& psi, int trials, std::uint64_t seed,
                                         double tol = 1e-6);

struct JpShellConfig {
  double r1 = 0.5;
  double r2 = 0.3;
  /// Throws InvalidDomain unless 0 < r1 < 1 and r2 > 0.
  void validate() const;
};

/// |x| < 1, |y| < R2 and |y|^2 < |x|^2 + R2^2 - R1^2, all strict. Each
/// inequality must hold with margin 1e-12.
bool jp_envelope_contains(const JpShellConfig& cfg, const Vec& x, const Vec& y);

struct JpReport {
  std::size_t samples = 0;
  bool vacuous = false;
  /// (a) every sample of R1 < |x| < 1, |y| < R2 passes the formula.
  bool inclusionPasses = true;
  std::size_t inclusionFailures = 0;
  /// (b) on samples of the formula set: |f| >= |x| - |y| > 0.
  bool nonvanishingChecked = false;
  bool nonvanishingPasses = true;
  double minAbsF = std::numeric_limits<double>::infinity();
  std::size_t nonvanishingSamples = 0;
  /// (c) zero of f in Ball(0; 1) + i Ball(0; R2).
  Vec witnessX;
  Vec witnessY;
  Complex witnessF;
  bool witnessInHullTube = false;
};

/// Throws ConfigConflict when `checkNonvanishing` is set and R2 > R1; then
/// the formula set holds points with |y| = |x| where f can vanish.
JpReport jp_consistency_suite(const JpShellConfig& cfg, std::size_t samples, std::uint64_t seed,
                              bool checkNonvanishing = true);

}  // namespace tubes
