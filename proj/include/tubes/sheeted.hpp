#pragma once

#include "tubes/geometry.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace tubes {

struct Univalent {
  RealBaseDomain domain;
};

/// nu-sheeted cover of a planar shell through u -> center + u^nu, with u read
/// as a complex number.
struct FiniteCover {
  FiniteCover(Shell base, int sheets);
  Shell base;
  int sheets;
};

/// Infinite cover of a planar shell through u -> center + e^{u1} (cos u2, sin u2).
struct UniversalCover {
  explicit UniversalCover(Shell base);
  Shell base;
};

/// Real domain over R^n; points are given in covering coordinates.
using SheetedRealDomain = std::variant<Univalent, FiniteCover, UniversalCover>;

Eigen::Index dim(const SheetedRealDomain& domain);
bool is_univalent(const SheetedRealDomain& domain);
std::string describe(const SheetedRealDomain& domain);

Vec project(const SheetedRealDomain& domain, const Vec& u);
bool contains(const SheetedRealDomain& domain, const Vec& u);

/// All nu preimages of a base point, sheet k at index k.
std::vector<Vec> preimages(const FiniteCover& cover, const Vec& x);
/// k such that u is sheet k of preimages(cover, project(u)).
int sheet_index(const FiniteCover& cover, const Vec& u);

/// The preimage of x closest to `near`; nullopt when x is outside the base or
/// the two closest preimages are within 1e-9 of being equally near.
std::optional<Vec> nearest_preimage(const SheetedRealDomain& domain, const Vec& x, const Vec& near);

/// Boundary distance of a point in covering coordinates: the largest r such
/// that the base ball (or cube, for Polydisc) of radius r lifts univalently
/// around u. Covers use a 48-step bisection whose predicate lifts the ball's
/// radial spokes and boundary arcs from u and rejects a radius when two
/// distinct preimage branches meet.
double sheeted_boundary_distance(const SheetedRealDomain& domain, const Vec& u,
                                 DistanceMode mode = DistanceMode::Euclidean);

struct LiftedSegment {
  Vec start;
  Vec end;
  Vec start_base;
  Vec end_base;
  /// samples[i] is the lift at t = i / (samples.size() - 1).
  std::vector<Vec> samples;
};

/// Lift of the straight base segment between the projections of p and q,
/// continued sheet by sheet from p. Absent when the projected segment leaves
/// the base, a step is ambiguous, or the lift does not arrive at q.
std::optional<LiftedSegment> lift_segment(const SheetedRealDomain& domain, const Vec& p, const Vec& q,
                                          int samples = 1000);

/// Lifted point at parameter t in [0, 1].
Vec segment_point(const SheetedRealDomain& domain, const LiftedSegment& segment, double t);

/// Two distinct points with the same projection, or nullopt when univalent.
std::optional<std::pair<Vec, Vec>> univalence_witness(const SheetedRealDomain& domain);

Vec sample_member(const SheetedRealDomain& domain, Rng& rng);

}  // namespace tubes
