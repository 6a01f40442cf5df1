#include "tubes/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace tubes {
namespace {

constexpr double kMergeTol = 1e-12;

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Lexicographic sort, then drop points within kMergeTol of an earlier one.
// Points that close agree in the first coordinate to within kMergeTol, so a
// window scan over the sorted order finds every pair.
std::vector<Vec> sorted_unique(const std::vector<Vec>& points) {
  std::vector<Vec> sorted = points;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  std::vector<Vec> kept;
  kept.reserve(sorted.size());
  for (const Vec& p : sorted) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (p[0] - (*it)[0] > kMergeTol) break;
      if ((p - *it).norm() <= kMergeTol) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(p);
  }
  return kept;
}

double scale_of(const std::vector<Vec>& pts) {
  Vec lo = pts.front(), hi = pts.front();
  for (const Vec& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return std::max(1.0, (hi - lo).norm());
}

HalfspacePolytope hull_1d(const std::vector<Vec>& pts) {
  const double lo = pts.front()[0];
  const double hi = pts.back()[0];
  if (hi - lo <= kMergeTol) throw Error(ErrorKind::DegenerateInput, "all points coincide");
  std::vector<Halfspace> hs{{Vec::Constant(1, 1.0), hi}, {Vec::Constant(1, -1.0), -lo}};
  return HalfspacePolytope::from_hull(1, std::move(hs), {pts.front(), pts.back()});
}

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Turn test with a relative collinearity threshold (sine of the angle).
bool left_turn(const Vec& o, const Vec& a, const Vec& b) {
  const double c = cross2(o, a, b);
  return c > 1e-12 * (a - o).norm() * (b - o).norm();
}

HalfspacePolytope hull_2d(const std::vector<Vec>& pts) {
  if (pts.size() < 3) throw Error(ErrorKind::DegenerateInput, "fewer than 3 distinct points");
  std::vector<Vec> chain;
  chain.reserve(2 * pts.size());
  for (const Vec& p : pts) {
    while (chain.size() >= 2 && !left_turn(chain[chain.size() - 2], chain.back(), p)) chain.pop_back();
    chain.push_back(p);
  }
  const std::size_t lower = chain.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (chain.size() >= lower && !left_turn(chain[chain.size() - 2], chain.back(), *it)) chain.pop_back();
    chain.push_back(*it);
  }
  chain.pop_back();
  if (chain.size() < 3) throw Error(ErrorKind::DegenerateInput, "points are collinear");

  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Vec& a = chain[i];
    const Vec& b = chain[(i + 1) % chain.size()];
    Vec n(2);
    n << b[1] - a[1], a[0] - b[0];
    n.normalize();
    hs.push_back({n, n.dot(a)});
  }
  std::vector<Vec> verts = chain;
  std::sort(verts.begin(), verts.end(), lex_less);
  return HalfspacePolytope::from_hull(2, std::move(hs), std::move(verts));
}

struct Face {
  std::array<int, 3> v;
  Eigen::Vector3d normal;
  double offset;
  bool alive = true;
};

HalfspacePolytope hull_3d(const std::vector<Vec>& input) {
  const int n = static_cast<int>(input.size());
  if (n < 4) throw Error(ErrorKind::DegenerateInput, "fewer than 4 distinct points");
  std::vector<Eigen::Vector3d> p(n);
  for (int i = 0; i < n; ++i) p[i] = input[i].head<3>();
  const double tol = 1e-12 * scale_of(input);

  auto argmax = [&](auto&& score) {
    int best = -1;
    double best_val = -1.0;
    for (int i = 0; i < n; ++i) {
      const double s = score(i);
      if (s > best_val) {
        best_val = s;
        best = i;
      }
    }
    return std::pair{best, best_val};
  };
  const int i0 = 0;
  auto [i1, d1] = argmax([&](int i) { return (p[i] - p[i0]).norm(); });
  if (d1 <= tol) throw Error(ErrorKind::DegenerateInput, "all points coincide");
  const Eigen::Vector3d axis = (p[i1] - p[i0]).normalized();
  auto [i2, d2] = argmax([&](int i) { return axis.cross(p[i] - p[i0]).norm(); });
  if (d2 <= tol) throw Error(ErrorKind::DegenerateInput, "points are collinear");
  const Eigen::Vector3d pn = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  auto [i3, d3] = argmax([&](int i) { return std::abs(pn.dot(p[i] - p[i0])); });
  if (d3 <= tol) throw Error(ErrorKind::DegenerateInput, "points are coplanar");

  const Eigen::Vector3d inner = (p[i0] + p[i1] + p[i2] + p[i3]) / 4.0;
  std::vector<Face> faces;
  std::map<std::pair<int, int>, int> edge_face;

  auto add_face = [&](int a, int b, int c) {
    Face f{{a, b, c}, (p[b] - p[a]).cross(p[c] - p[a]), 0.0};
    if (f.normal.dot(inner - p[a]) > 0) {
      std::swap(f.v[1], f.v[2]);
      f.normal = -f.normal;
    }
    f.normal.normalize();
    f.offset = f.normal.dot(p[f.v[0]]);
    const int idx = static_cast<int>(faces.size());
    for (int k = 0; k < 3; ++k) edge_face[{f.v[k], f.v[(k + 1) % 3]}] = idx;
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && faces[f].normal.dot(p[q]) - faces[f].offset > tol) visible.push_back(f);
    }
    if (visible.empty()) continue;
    for (int f : visible) faces[f].alive = false;
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      for (int k = 0; k < 3; ++k) {
        const int a = faces[f].v[k], b = faces[f].v[(k + 1) % 3];
        auto it = edge_face.find({b, a});
        if (it != edge_face.end() && faces[it->second].alive) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) {
      for (int k = 0; k < 3; ++k) edge_face.erase({faces[f].v[k], faces[f].v[(k + 1) % 3]});
    }
    for (auto [a, b] : horizon) {
      Face f{{a, b, q}, (p[b] - p[a]).cross(p[q] - p[a]).normalized(), 0.0};
      f.offset = f.normal.dot(p[a]);
      const int idx = static_cast<int>(faces.size());
      for (int k = 0; k < 3; ++k) edge_face[{f.v[k], f.v[(k + 1) % 3]}] = idx;
      faces.push_back(f);
    }
  }

  std::vector<Halfspace> planes;
  const double merge = 1e-9;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    bool dup = false;
    for (const Halfspace& h : planes) {
      if ((h.normal - Vec(f.normal)).norm() <= merge && std::abs(h.offset - f.offset) <= merge * scale_of(input)) {
        dup = true;
        break;
      }
    }
    if (!dup) planes.push_back({Vec(f.normal), f.offset});
  }

  // Extreme points: lie on planes whose normals have full rank.
  std::vector<Vec> verts;
  std::vector<bool> used(n, false);
  for (const Face& f : faces) {
    if (!f.alive) continue;
    for (int v : f.v) used[v] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!used[i]) continue;
    std::vector<Vec> active;
    for (const Halfspace& h : planes) {
      if (std::abs(h.normal.dot(input[i]) - h.offset) <= 1e-9 * scale_of(input)) active.push_back(h.normal);
    }
    if (active.size() < 3) continue;
    Eigen::MatrixXd m(active.size(), 3);
    for (std::size_t r = 0; r < active.size(); ++r) m.row(r) = active[r].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    if (lu.rank() == 3) verts.push_back(input[i]);
  }
  std::sort(verts.begin(), verts.end(), lex_less);
  return HalfspacePolytope::from_hull(3, std::move(planes), std::move(verts));
}

}  // namespace

HalfspacePolytope convex_hull(const std::vector<Vec>& points, Eigen::Index dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::DegenerateInput, "convex_hull supports dimensions 1..3");
  if (points.empty()) throw Error(ErrorKind::DegenerateInput, "no points");
  for (const Vec& p : points) {
    require_dim(p, dim, "convex_hull");
    if (!all_finite(p)) throw Error(ErrorKind::InvalidPoint, "non-finite hull input");
  }
  const std::vector<Vec> pts = sorted_unique(points);
  if (static_cast<Eigen::Index>(pts.size()) < dim + 1) {
    throw Error(ErrorKind::DegenerateInput, "need at least dim+1 distinct points");
  }
  switch (dim) {
    case 1: return hull_1d(pts);
    case 2: return hull_2d(pts);
    default: return hull_3d(pts);
  }
}

}  // namespace tubes
