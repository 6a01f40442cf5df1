#pragma once

#include "tubes/continuation.hpp"
#include "tubes/distance.hpp"

#include <optional>
#include <vector>

namespace tubes {

/// Finite tube over the annulus R1 < |x| < R2 in R^2 with fiber |y| < R1,
/// covered nu times (or infinitely often when `sheets` is empty).
struct CoverConfig {
  std::optional<int> sheets;
  double r1 = 0.5;
  double r2 = 4.0;

  bool infinite() const { return !sheets.has_value(); }
  /// Throws InvalidDomain unless 0 < r1 < r2 and sheets >= 2.
  void validate() const;
};

/// Finite case: u is the covering coordinate of x = u^nu. Infinite case:
/// u = u1 + i u2 with x = e^{u1} (cos u2, sin u2).
struct CoverPoint {
  Complex u;
  Eigen::Vector2d y;
};

bool omega_contains(const CoverConfig& cfg, const ComplexPoint& z);
bool contains(const CoverConfig& cfg, const CoverPoint& p);

/// Throws InvalidPoint for points outside the cover.
ComplexPoint project(const CoverConfig& cfg, const CoverPoint& p);
/// Sheet k over z: for finite covers k is taken mod nu, k = 0 being the
/// principal root; for the infinite cover u2 = arg(x1 + i x2) + 2 pi k.
CoverPoint lift(const CoverConfig& cfg, const ComplexPoint& z, long sheet = 0);

/// The cover as a tube: covering base with fiber Ball(0; R1).
TubeDomain cover_tube(const CoverConfig& cfg);

/// f = z1 + i z2 = (x1 - y2) + i (x2 + y1) for 2-vectors x, y.
Complex f_value(const Vec& x, const Vec& y);
/// f on the finite tube; throws OutsideDomain off it.
Complex eval_f(const CoverConfig& cfg, const ComplexPoint& z);

struct BranchValue {
  Complex value;
  /// u (finite) or u1 + i u2 (infinite): the branch of (x1 + i x2)^{1/nu}
  /// or log(x1 + i x2) picked out by the sheet.
  Complex principalFactor;
  /// Principal (1 + i w)^{1/nu}, or principal Log(1 + i w).
  Complex correctionFactor;
  Complex w;
};

/// Single-valued branch of f^{1/nu} (or log f) on the cover. Throws
/// BranchPrecondition if |w| >= 1.
BranchValue eval_branch(const CoverConfig& cfg, const CoverPoint& p);

struct SeparabilityWitness {
  bool distinguishes = false;
  Complex valueP;
  Complex valueQ;
  double gap = 0.0;
};

/// Distinguishes when p != q share a base point (within 1e-12) and the
/// branch separates them.
SeparabilityWitness separability_witness(const CoverConfig& cfg, const CoverPoint& p, const CoverPoint& q);

struct BlowupRow {
  double epsilon;
  double supAbsG;
  double thetaAtSup;
};

/// For each eps: x = (R1+eps) e^{i theta}, y the matching rotation of
/// (0, R1-eps), so that f = ~2 eps e^{i theta}; sup of |1/f| over 360 theta.
/// Throws BadEpsilon unless 0 < eps < min((R2-R1)/2, R1).
std::vector<BlowupRow> blowup_probe(const CoverConfig& cfg, const std::vector<double>& eps);

struct ZeroWitness {
  Vec x;
  Vec y;
  Complex f;
};

/// x = (t, 0), y = (0, t) with t = 2/3 min(hullRadius, fiberRadius): a zero
/// of f inside Ball(0; hullRadius) + i Ball(0; fiberRadius).
ZeroWitness hull_zero_witness(double hullRadius, double fiberRadius);

struct MonodromyEvidence {
  /// Number of loops restoring the branch germ; empty when it never returns.
  std::optional<int> sheets;
  std::vector<double> gaps;
  std::vector<Complex> offsets;
  long steps = 0;
};

/// Continues the germ of f^{1/nu} (or log f) along z(t) = (r cos t, r sin t)
/// + i 0, whose image under f is the circle |zeta| = r, for up to `turns`
/// loops. Requires R1 < r < R2 with r finite.
MonodromyEvidence monodromy_sheets(const CoverConfig& cfg, double radius, int turns, int segments = 64);

}  // namespace tubes
