#pragma once

#include "tubes/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tubes {

/// Open half-space {x : normal . x < offset}. Normals are unit length once
/// stored in a HalfspacePolytope.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// Which ball shape measures boundary distance: Euclidean balls, or
/// polydiscs (cubes in the real coordinates).
enum class DistanceMode { Euclidean, Polydisc };

struct Box {
  Vec lo;
  Vec hi;
};

/// Intersection of finitely many open half-spaces. An empty list is R^n.
class HalfspacePolytope {
 public:
  HalfspacePolytope(Eigen::Index dim, std::vector<Halfspace> halfspaces);

  /// Trusted construction from a hull: vertices are taken as given.
  static HalfspacePolytope from_hull(Eigen::Index dim, std::vector<Halfspace> halfspaces,
                                     std::vector<Vec> vertices);
  static HalfspacePolytope box(const Vec& lo, const Vec& hi);
  static HalfspacePolytope whole_space(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// Finite vertices; for bounded polytopes, every extreme point.
  const std::vector<Vec>& vertices() const { return vertices_; }
  bool bounded() const { return bounded_; }

  /// min_i (offset_i - normal_i . x): the Euclidean distance to the
  /// complement for interior x.
  double min_slack(const Vec& x) const;
  /// Same measured in the sup norm.
  double min_slack_inf(const Vec& x) const;

 private:
  HalfspacePolytope() = default;
  void enumerate_vertices();

  Eigen::Index dim_ = 0;
  std::vector<Halfspace> halfspaces_;
  std::vector<Vec> vertices_;
  bool bounded_ = false;
};

/// Equality of half-space sets up to ordering, coefficient-wise within tol.
bool same_halfspaces(const HalfspacePolytope& a, const HalfspacePolytope& b,
                     double tol = 1e-12);

struct Ball {
  Ball(Vec center, double radius);
  Vec center;
  double radius;
};

/// {x : inner < |x - center| < outer}, outer may be +inf. Requires n >= 2.
struct Shell {
  Shell(Vec center, double inner, double outer);
  bool bounded() const;
  Vec center;
  double inner;
  double outer;
};

/// Connected union of open convex polytopes.
class PolytopeUnion {
 public:
  /// Throws InvalidDomain when the overlap graph of the parts (tested on a
  /// 10^4-point grid) is disconnected, or a part is unbounded.
  explicit PolytopeUnion(std::vector<HalfspacePolytope> parts);

  Eigen::Index dim() const { return dim_; }
  const std::vector<HalfspacePolytope>& parts() const { return parts_; }
  bool contains(const Vec& x) const;
  /// Exact distance to the complement: the nearest complement point is the
  /// projection of x onto a flat cut out by at most n of the parts'
  /// hyperplanes, so all such projections are candidates.
  double boundary_distance(const Vec& x) const;

 private:
  struct Flat {
    Eigen::MatrixXd normals;    // k x n
    Eigen::VectorXd offsets;    // k
    Eigen::MatrixXd projector;  // n x k, normals^T (normals normals^T)^-1
  };

  Eigen::Index dim_ = 0;
  std::vector<HalfspacePolytope> parts_;
  std::vector<Flat> flats_;
};

/// Region known only through a containment oracle and a bounding box.
struct SampledRegion {
  std::function<bool(const Vec&)> inside;
  Box box;
  std::string label;
};

using RealBaseDomain = std::variant<Ball, Shell, HalfspacePolytope, PolytopeUnion, SampledRegion>;

Eigen::Index dim(const RealBaseDomain& domain);

/// Strict membership; points within kBoundaryTol of the boundary are outside.
bool contains(const RealBaseDomain& domain, const Vec& x);

/// Distance from an interior point to the boundary. Closed form for balls,
/// shells and polytopes, exact candidate search for polytope unions, and a
/// ray-exit bisection estimate for sampled regions. Throws OutsideDomain.
double real_boundary_distance(const RealBaseDomain& domain, const Vec& x,
                              DistanceMode mode = DistanceMode::Euclidean);

/// Box used for rejection sampling. Unbounded sets get half-width 10^3.
Box sampling_box(const RealBaseDomain& domain);

Vec sample_member(const RealBaseDomain& domain, Rng& rng);

std::string describe(const RealBaseDomain& domain);

/// Convex hull of points in R^dim, dim <= 3. Monotone chain in 2D,
/// incremental in 3D; points within 1e-12 of each other are merged.
/// Throws DegenerateInput when the points are affinely dependent.
HalfspacePolytope convex_hull(const std::vector<Vec>& points, Eigen::Index dim);

inline constexpr double kUnboundedHalfWidth = 1e3;

}  // namespace tubes
