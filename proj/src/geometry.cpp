#include "tubes/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tubes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool halfspace_equal(const Halfspace& a, const Halfspace& b, double tol) {
  return (a.normal - b.normal).cwiseAbs().maxCoeff() <= tol && std::abs(a.offset - b.offset) <= tol;
}

// Every k-subset of {0..n-1}, in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Largest r with the open cube x + (-r, r)^n inside the set described by
// `inside_cube`; monotone bisection.
double bisect_radius(double hi, const std::function<bool(double)>& inside_cube) {
  double lo = 0.0;
  if (hi <= 0.0) return 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside_cube(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

// Cube-surface grid test; used for sup-norm distances of unions and
// sampled regions.
bool cube_surface_inside(const RealBaseDomain& domain, const Vec& x, double r) {
  const Eigen::Index n = x.size();
  const int g = n <= 2 ? 33 : (n == 3 ? 9 : 5);
  const Eigen::Index faces = 2 * n;
  std::vector<int> digits(static_cast<std::size_t>(n - 1), 0);
  for (Eigen::Index f = 0; f < faces; ++f) {
    const Eigen::Index axis = f / 2;
    const double sign = (f % 2 == 0) ? 1.0 : -1.0;
    std::fill(digits.begin(), digits.end(), 0);
    while (true) {
      Vec y = x;
      y[axis] += sign * r;
      Eigen::Index d = 0;
      for (Eigen::Index a = 0; a < n; ++a) {
        if (a == axis) continue;
        y[a] += r * (-1.0 + 2.0 * digits[static_cast<std::size_t>(d)] / (g - 1));
        ++d;
      }
      if (!contains(domain, y)) return false;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == g) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  }
  return true;
}

std::vector<Vec> sphere_directions(Eigen::Index n) {
  std::vector<Vec> dirs;
  if (n == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
  } else if (n == 2) {
    const int k = 720;
    for (int i = 0; i < k; ++i) {
      const double a = 2.0 * std::numbers::pi * i / k;
      Vec d(2);
      d << std::cos(a), std::sin(a);
      dirs.push_back(d);
    }
  } else if (n == 3) {
    const int k = 2048;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < k; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / k;
      const double rr = std::sqrt(1.0 - z * z);
      Vec d(3);
      d << rr * std::cos(golden * i), rr * std::sin(golden * i), z;
      dirs.push_back(d);
    }
  } else {
    Rng rng(0x5eed);
    for (int i = 0; i < 8192; ++i) dirs.push_back(rng.unit_vector(n));
  }
  for (Eigen::Index a = 0; a < n && n > 1; ++a) {
    dirs.push_back(Vec::Unit(n, a));
    dirs.push_back(-Vec::Unit(n, a));
  }
  return dirs;
}

// Ray-exit bisection over a direction set; an upper estimate of the
// distance that tightens with direction density.
double sampled_distance(const SampledRegion& region, const Vec& x) {
  const double diag = (region.box.hi - region.box.lo).norm();
  const double step = diag / 1024.0;
  static thread_local std::vector<Vec> dirs2 = sphere_directions(2);
  static thread_local std::vector<Vec> dirs3 = sphere_directions(3);
  const std::vector<Vec> other = (x.size() == 2 || x.size() == 3) ? std::vector<Vec>{} : sphere_directions(x.size());
  const std::vector<Vec>& dirs = x.size() == 2 ? dirs2 : (x.size() == 3 ? dirs3 : other);
  double best = 2.0 * diag;
  for (const Vec& d : dirs) {
    double inside_t = 0.0;
    double t = step;
    bool exited = false;
    while (t < best) {
      if (!region.inside(x + t * d)) {
        exited = true;
        break;
      }
      inside_t = t;
      t += step;
    }
    if (!exited) continue;
    double lo = inside_t, hi = t;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (region.inside(x + mid * d)) lo = mid;
      else hi = mid;
    }
    best = std::min(best, hi);
  }
  return best;
}

std::string vec_str(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// HalfspacePolytope

HalfspacePolytope::HalfspacePolytope(Eigen::Index dim, std::vector<Halfspace> halfspaces) : dim_(dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidDomain, "polytope dimension must be positive");
  for (Halfspace& h : halfspaces) {
    require_dim(h.normal, dim, "halfspace normal");
    const double len = h.normal.norm();
    if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(h.offset)) {
      throw Error(ErrorKind::InvalidDomain, "halfspace normal must be finite and nonzero");
    }
    h.normal /= len;
    h.offset /= len;
    const bool dup = std::any_of(halfspaces_.begin(), halfspaces_.end(),
                                 [&](const Halfspace& k) { return halfspace_equal(k, h, 1e-12); });
    if (!dup) halfspaces_.push_back(h);
  }
  enumerate_vertices();
}

HalfspacePolytope HalfspacePolytope::from_hull(Eigen::Index dim, std::vector<Halfspace> halfspaces,
                                               std::vector<Vec> vertices) {
  HalfspacePolytope p;
  p.dim_ = dim;
  p.halfspaces_ = std::move(halfspaces);
  p.vertices_ = std::move(vertices);
  p.bounded_ = true;
  return p;
}

HalfspacePolytope HalfspacePolytope::box(const Vec& lo, const Vec& hi) {
  require_dim(hi, lo.size(), "box corner");
  std::vector<Halfspace> hs;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw Error(ErrorKind::InvalidDomain, "box requires lo < hi");
    hs.push_back({Vec::Unit(lo.size(), i), hi[i]});
    hs.push_back({-Vec::Unit(lo.size(), i), -lo[i]});
  }
  return HalfspacePolytope(lo.size(), std::move(hs));
}

HalfspacePolytope HalfspacePolytope::whole_space(Eigen::Index dim) { return HalfspacePolytope(dim, {}); }

void HalfspacePolytope::enumerate_vertices() {
  // Vertices of P intersected with a large box; any vertex on the box means
  // P is unbounded.
  const double big = 1e6;
  std::vector<Halfspace> all = halfspaces_;
  const std::size_t own = all.size();
  for (Eigen::Index i = 0; i < dim_; ++i) {
    all.push_back({Vec::Unit(dim_, i), big});
    all.push_back({-Vec::Unit(dim_, i), big});
  }
  bounded_ = true;
  std::vector<Vec> found;
  const int k = static_cast<int>(dim_);
  for_each_subset(static_cast<int>(all.size()), k, [&](const std::vector<int>& idx) {
    Eigen::MatrixXd a(k, k);
    Eigen::VectorXd b(k);
    bool touches_box = false;
    for (int r = 0; r < k; ++r) {
      a.row(r) = all[idx[r]].normal.transpose();
      b[r] = all[idx[r]].offset;
      if (static_cast<std::size_t>(idx[r]) >= own) touches_box = true;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < k) return;
    const Vec v = lu.solve(b);
    for (const Halfspace& h : all) {
      if (h.normal.dot(v) - h.offset > 1e-9 * std::max(1.0, std::abs(h.offset))) return;
    }
    if (touches_box) {
      bounded_ = false;
      return;
    }
    for (const Vec& w : found) {
      if ((w - v).norm() <= 1e-9) return;
    }
    found.push_back(v);
  });
  std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  vertices_ = std::move(found);
  if (bounded_) {
    if (vertices_.size() < static_cast<std::size_t>(dim_ + 1)) {
      throw Error(ErrorKind::InvalidDomain, "polytope has empty interior");
    }
    Vec centroid = Vec::Zero(dim_);
    for (const Vec& v : vertices_) centroid += v;
    centroid /= static_cast<double>(vertices_.size());
    if (!(min_slack(centroid) > kBoundaryTol)) {
      throw Error(ErrorKind::InvalidDomain, "polytope has empty interior");
    }
  }
}

double HalfspacePolytope::min_slack(const Vec& x) const {
  double best = kInf;
  for (const Halfspace& h : halfspaces_) best = std::min(best, h.offset - h.normal.dot(x));
  return best;
}

double HalfspacePolytope::min_slack_inf(const Vec& x) const {
  double best = kInf;
  for (const Halfspace& h : halfspaces_) {
    best = std::min(best, (h.offset - h.normal.dot(x)) / h.normal.lpNorm<1>());
  }
  return best;
}

bool same_halfspaces(const HalfspacePolytope& a, const HalfspacePolytope& b, double tol) {
  if (a.dim() != b.dim() || a.halfspaces().size() != b.halfspaces().size()) return false;
  std::vector<bool> matched(b.halfspaces().size(), false);
  for (const Halfspace& h : a.halfspaces()) {
    bool ok = false;
    for (std::size_t j = 0; j < b.halfspaces().size(); ++j) {
      if (!matched[j] && halfspace_equal(h, b.halfspaces()[j], tol)) {
        matched[j] = ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ball, Shell

Ball::Ball(Vec c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidDomain, "ball radius must be positive");
  if (!all_finite(center)) throw Error(ErrorKind::InvalidDomain, "ball center must be finite");
}

Shell::Shell(Vec c, double in, double out) : center(std::move(c)), inner(in), outer(out) {
  if (center.size() < 2) throw Error(ErrorKind::InvalidDomain, "shells need dimension >= 2 to be connected");
  if (!(inner > 0.0) || !(inner < outer)) throw Error(ErrorKind::InvalidDomain, "shell requires 0 < inner < outer");
  if (!all_finite(center)) throw Error(ErrorKind::InvalidDomain, "shell center must be finite");
}

bool Shell::bounded() const { return std::isfinite(outer); }

// ---------------------------------------------------------------------------
// PolytopeUnion

PolytopeUnion::PolytopeUnion(std::vector<HalfspacePolytope> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorKind::InvalidDomain, "union needs at least one part");
  dim_ = parts_.front().dim();
  for (const HalfspacePolytope& p : parts_) {
    if (p.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "union parts differ in dimension");
    if (!p.bounded()) throw Error(ErrorKind::InvalidDomain, "union parts must be bounded");
  }

  // Overlap graph on a 10^4-point grid over the joint bounding box.
  Vec lo = parts_.front().vertices().front(), hi = lo;
  for (const HalfspacePolytope& p : parts_) {
    for (const Vec& v : p.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  const int per_axis = static_cast<int>(std::ceil(std::pow(1e4, 1.0 / static_cast<double>(dim_))));
  const std::size_t np = parts_.size();
  std::vector<std::size_t> root(np);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  std::vector<int> digits(static_cast<std::size_t>(dim_), 0);
  std::vector<std::size_t> in;
  while (true) {
    Vec x(dim_);
    for (Eigen::Index a = 0; a < dim_; ++a) {
      x[a] = lo[a] + (hi[a] - lo[a]) * (digits[static_cast<std::size_t>(a)] + 0.5) / per_axis;
    }
    in.clear();
    for (std::size_t i = 0; i < np; ++i) {
      if (parts_[i].min_slack(x) > kBoundaryTol) in.push_back(i);
    }
    for (std::size_t k = 1; k < in.size(); ++k) root[find(in[k])] = find(in[0]);
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == per_axis) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  for (std::size_t i = 1; i < np; ++i) {
    if (find(i) != find(0)) throw Error(ErrorKind::InvalidDomain, "polytope union is not connected");
  }

  // Distinct hyperplanes across all parts; (n, b) and (-n, -b) coincide.
  std::vector<Halfspace> planes;
  for (const HalfspacePolytope& p : parts_) {
    for (const Halfspace& h : p.halfspaces()) {
      const Halfspace flipped{-h.normal, -h.offset};
      const bool dup = std::any_of(planes.begin(), planes.end(), [&](const Halfspace& q) {
        return halfspace_equal(q, h, 1e-12) || halfspace_equal(q, flipped, 1e-12);
      });
      if (!dup) planes.push_back(h);
    }
  }
  const int n = static_cast<int>(dim_);
  for (int k = 1; k <= n; ++k) {
    for_each_subset(static_cast<int>(planes.size()), k, [&](const std::vector<int>& idx) {
      Flat f;
      f.normals.resize(k, n);
      f.offsets.resize(k);
      for (int r = 0; r < k; ++r) {
        f.normals.row(r) = planes[idx[r]].normal.transpose();
        f.offsets[r] = planes[idx[r]].offset;
      }
      const Eigen::MatrixXd gram = f.normals * f.normals.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      if (lu.rank() < k) return;
      f.projector = f.normals.transpose() * lu.inverse();
      flats_.push_back(std::move(f));
    });
  }
}

bool PolytopeUnion::contains(const Vec& x) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const HalfspacePolytope& p) { return p.min_slack(x) > kBoundaryTol; });
}

double PolytopeUnion::boundary_distance(const Vec& x) const {
  std::vector<std::pair<double, Vec>> candidates;
  candidates.reserve(flats_.size());
  for (const Flat& f : flats_) {
    Vec q = x - f.projector * (f.normals * x - f.offsets);
    candidates.emplace_back((q - x).norm(), std::move(q));
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [d, q] : candidates) {
    if (!contains(q)) return d;
  }
  return kInf;
}

// ---------------------------------------------------------------------------
// Free functions

Eigen::Index dim(const RealBaseDomain& domain) {
  return std::visit(overloaded{
                        [](const Ball& b) { return b.center.size(); },
                        [](const Shell& s) { return s.center.size(); },
                        [](const HalfspacePolytope& p) { return p.dim(); },
                        [](const PolytopeUnion& u) { return u.dim(); },
                        [](const SampledRegion& s) { return s.box.lo.size(); },
                    },
                    domain);
}

bool contains(const RealBaseDomain& domain, const Vec& x) {
  require_dim(x, dim(domain), "contains");
  if (!all_finite(x)) return false;
  return std::visit(overloaded{
                        [&](const Ball& b) { return (x - b.center).norm() < b.radius - kBoundaryTol; },
                        [&](const Shell& s) {
                          const double r = (x - s.center).norm();
                          return r > s.inner + kBoundaryTol && r < s.outer - kBoundaryTol;
                        },
                        [&](const HalfspacePolytope& p) { return p.min_slack(x) > kBoundaryTol; },
                        [&](const PolytopeUnion& u) { return u.contains(x); },
                        [&](const SampledRegion& s) { return s.inside(x); },
                    },
                    domain);
}

double real_boundary_distance(const RealBaseDomain& domain, const Vec& x, DistanceMode mode) {
  if (!contains(domain, x)) throw Error(ErrorKind::OutsideDomain, "point " + vec_str(x) + " not in " + describe(domain));
  const Eigen::Index n = x.size();
  if (mode == DistanceMode::Euclidean) {
    return std::visit(overloaded{
                          [&](const Ball& b) { return b.radius - (x - b.center).norm(); },
                          [&](const Shell& s) {
                            const double r = (x - s.center).norm();
                            return std::min(r - s.inner, s.outer - r);
                          },
                          [&](const HalfspacePolytope& p) { return p.min_slack(x); },
                          [&](const PolytopeUnion& u) { return u.boundary_distance(x); },
                          [&](const SampledRegion& s) { return sampled_distance(s, x); },
                      },
                      domain);
  }
  // Sup-norm: the largest open cube x + (-r, r)^n inside the set.
  auto cube_in_ball = [n](const Vec& a, double radius) {
    // |a| + r 1 on the sphere: n r^2 + 2 r S + Q - R^2 = 0.
    const double s = a.cwiseAbs().sum();
    const double q = a.squaredNorm();
    const double disc = s * s - static_cast<double>(n) * (q - radius * radius);
    return (-s + std::sqrt(std::max(0.0, disc))) / static_cast<double>(n);
  };
  return std::visit(overloaded{
                        [&](const Ball& b) { return cube_in_ball(x - b.center, b.radius); },
                        [&](const Shell& s) {
                          const Vec a = x - s.center;
                          const double outer = std::isfinite(s.outer) ? cube_in_ball(a, s.outer) : kInf;
                          // Nearest cube point to the centre must stay outside the inner ball.
                          const double hi = a.cwiseAbs().maxCoeff();
                          const double inner = bisect_radius(hi, [&](double r) {
                            return (a.cwiseAbs().array() - r).max(0.0).matrix().norm() > s.inner;
                          });
                          return std::min(outer, inner);
                        },
                        [&](const HalfspacePolytope& p) { return p.min_slack_inf(x); },
                        [&](const auto&) {
                          const double hi = real_boundary_distance(domain, x, DistanceMode::Euclidean);
                          return bisect_radius(hi, [&](double r) { return cube_surface_inside(domain, x, r); });
                        },
                    },
                    domain);
}

Box sampling_box(const RealBaseDomain& domain) {
  const Eigen::Index n = dim(domain);
  const Vec wide = Vec::Constant(n, kUnboundedHalfWidth);
  return std::visit(overloaded{
                        [&](const Ball& b) {
                          return Box{(b.center.array() - b.radius).matrix(), (b.center.array() + b.radius).matrix()};
                        },
                        [&](const Shell& s) {
                          if (!s.bounded()) return Box{s.center - wide, s.center + wide};
                          return Box{(s.center.array() - s.outer).matrix(), (s.center.array() + s.outer).matrix()};
                        },
                        [&](const HalfspacePolytope& p) {
                          if (!p.bounded()) return Box{-wide, wide};
                          Vec lo = p.vertices().front(), hi = lo;
                          for (const Vec& v : p.vertices()) {
                            lo = lo.cwiseMin(v);
                            hi = hi.cwiseMax(v);
                          }
                          return Box{lo, hi};
                        },
                        [&](const PolytopeUnion& u) {
                          Vec lo = u.parts().front().vertices().front(), hi = lo;
                          for (const HalfspacePolytope& p : u.parts()) {
                            for (const Vec& v : p.vertices()) {
                              lo = lo.cwiseMin(v);
                              hi = hi.cwiseMax(v);
                            }
                          }
                          return Box{lo, hi};
                        },
                        [&](const SampledRegion& s) { return s.box; },
                    },
                    domain);
}

Vec sample_member(const RealBaseDomain& domain, Rng& rng) {
  const Box box = sampling_box(domain);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    Vec x = rng.uniform_in_box(box.lo, box.hi);
    if (contains(domain, x)) return x;
  }
  throw Error(ErrorKind::InvalidDomain, "rejection sampling found no member of " + describe(domain));
}

std::string describe(const RealBaseDomain& domain) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Ball& b) { os << "Ball(" << vec_str(b.center) << "; " << b.radius << ")"; },
                 [&](const Shell& s) { os << "Shell(" << vec_str(s.center) << "; " << s.inner << ", " << s.outer << ")"; },
                 [&](const HalfspacePolytope& p) { os << "Polytope(" << p.halfspaces().size() << " halfspaces)"; },
                 [&](const PolytopeUnion& u) { os << "PolytopeUnion(" << u.parts().size() << " parts)"; },
                 [&](const SampledRegion& s) { os << "Sampled(" << (s.label.empty() ? "oracle" : s.label) << ")"; },
             },
             domain);
  return os.str();
}

}  // namespace tubes
