#include "tubes/config.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace tubes {
namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

HalfspacePolytope poly(Eigen::Index n, std::vector<Halfspace> hs) { return HalfspacePolytope(n, std::move(hs)); }

HalfspacePolytope hexagon() {
  std::vector<Halfspace> hs;
  for (int k = 0; k < 6; ++k) {
    const double a = std::numbers::pi / 3.0 * k;
    hs.push_back({v2(std::cos(a), std::sin(a)), 1.0});
  }
  return poly(2, hs);
}

HalfspacePolytope octahedron() {
  std::vector<Halfspace> hs;
  for (int s = 0; s < 8; ++s) hs.push_back({v3(s & 1 ? -1 : 1, s & 2 ? -1 : 1, s & 4 ? -1 : 1), 1.0});
  return poly(3, hs);
}

struct BaseFixture {
  FixtureInfo info;
  std::function<RealBaseDomain()> make;
  bool convex_polytope = false;
};

const std::vector<BaseFixture>& base_fixtures() {
  static const std::vector<BaseFixture> all = {
      {{"L-shape", "union [0,2]x[0,1] and [0,1]x[0,2]; reentrant corner at (1,1)"},
       [] {
         return PolytopeUnion({HalfspacePolytope::box(v2(0, 0), v2(2, 1)), HalfspacePolytope::box(v2(0, 0), v2(1, 2))});
       }},
      {{"L-hull", "pentagon (0,0),(2,0),(2,1),(1,2),(0,2): convex hull of the L-shape"},
       [] { return poly(2, {{v2(0, -1), 0}, {v2(1, 0), 2}, {v2(1, 1), 3}, {v2(0, 1), 2}, {v2(-1, 0), 0}}); },
       true},
      {{"unit-square", "[0,1]^2"}, [] { return HalfspacePolytope::box(v2(0, 0), v2(1, 1)); }, true},
      {{"rectangle", "[-1,2]x[0,0.5]"}, [] { return HalfspacePolytope::box(v2(-1, 0), v2(2, 0.5)); }, true},
      {{"triangle", "simplex (0,0),(1,0),(0,1)"},
       [] { return poly(2, {{v2(-1, 0), 0}, {v2(0, -1), 0}, {v2(1, 1), 1}}); },
       true},
      {{"hexagon", "regular hexagon with inradius 1"}, [] { return hexagon(); }, true},
      {{"diamond", "|x1| + |x2| < 1"},
       [] { return poly(2, {{v2(1, 1), 1}, {v2(-1, 1), 1}, {v2(-1, -1), 1}, {v2(1, -1), 1}}); },
       true},
      {{"unit-cube", "[0,1]^3"}, [] { return HalfspacePolytope::box(v3(0, 0, 0), v3(1, 1, 1)); }, true},
      {{"tetrahedron", "simplex in R^3 with vertices 0, e1, e2, e3"},
       [] { return poly(3, {{v3(-1, 0, 0), 0}, {v3(0, -1, 0), 0}, {v3(0, 0, -1), 0}, {v3(1, 1, 1), 1}}); },
       true},
      {{"octahedron", "|x1| + |x2| + |x3| < 1"}, [] { return octahedron(); }, true},
      {{"prism", "triangle (0,0),(1,0),(0,1) times [0,1]"},
       [] {
         return poly(3, {{v3(-1, 0, 0), 0}, {v3(0, -1, 0), 0}, {v3(1, 1, 0), 1}, {v3(0, 0, -1), 0}, {v3(0, 0, 1), 1}});
       },
       true},
      {{"ball", "Ball(0; 1) in R^2"}, [] { return Ball(Vec::Zero(2), 1.0); }},
      {{"ball-3d", "Ball(0; 1) in R^3"}, [] { return Ball(Vec::Zero(3), 1.0); }},
      {{"shell-1-2", "Shell(0; 1, 2) in R^2"}, [] { return Shell(Vec::Zero(2), 1.0, 2.0); }},
      {{"shell-1-3", "Shell(0; 1, 3) in R^2"}, [] { return Shell(Vec::Zero(2), 1.0, 3.0); }},
      {{"shell-1-inf", "|x| > 1 in R^2"},
       [] { return Shell(Vec::Zero(2), 1.0, std::numeric_limits<double>::infinity()); }},
  };
  return all;
}

struct CoverFixture {
  FixtureInfo info;
  CoverConfig cfg;
};

const std::vector<CoverFixture>& cover_fixtures() {
  static const std::vector<CoverFixture> all = [] {
    std::vector<CoverFixture> v;
    for (int nu = 2; nu <= 6; ++nu) {
      v.push_back({{"cover-nu" + std::to_string(nu),
                    std::to_string(nu) + "-sheeted cover of 0.5 < |x| < 4; fiber |y| < 0.5"},
                   {nu, 0.5, 4.0}});
    }
    v.push_back({{"cover-infinite", "infinitely sheeted cover of 0.5 < |x| < 4; fiber |y| < 0.5"},
                 {std::nullopt, 0.5, 4.0}});
    return v;
  }();
  return all;
}

struct JpFixture {
  FixtureInfo info;
  JpShellConfig cfg;
};

const std::vector<JpFixture>& jp_fixtures() {
  static const std::vector<JpFixture> all = {
      {{"jp-r1_0.5-r2_0.3", "0.5 < |x| < 1 with |y| < 0.3 and its envelope formula"}, {0.5, 0.3}},
      {{"jp-r1_0.5-r2_0.6", "0.5 < |x| < 1 with |y| < 0.6; nonvanishing check is out of range"}, {0.5, 0.6}},
  };
  return all;
}

}  // namespace

const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> all = [] {
    std::vector<FixtureInfo> v;
    for (const auto& f : base_fixtures()) v.push_back(f.info);
    for (const auto& f : cover_fixtures()) v.push_back(f.info);
    for (const auto& f : jp_fixtures()) v.push_back(f.info);
    return v;
  }();
  return all;
}

bool is_base_fixture(const std::string& name) {
  for (const auto& f : base_fixtures()) {
    if (f.info.name == name) return true;
  }
  return false;
}

RealBaseDomain fixture_base(const std::string& name) {
  for (const auto& f : base_fixtures()) {
    if (f.info.name == name) return f.make();
  }
  throw Error(ErrorKind::ConfigError, "unknown domain fixture '" + name + "'");
}

CoverConfig fixture_cover(const std::string& name) {
  for (const auto& f : cover_fixtures()) {
    if (f.info.name == name) return f.cfg;
  }
  throw Error(ErrorKind::ConfigError, "unknown cover fixture '" + name + "'");
}

JpShellConfig fixture_jp(const std::string& name) {
  for (const auto& f : jp_fixtures()) {
    if (f.info.name == name) return f.cfg;
  }
  throw Error(ErrorKind::ConfigError, "unknown jp fixture '" + name + "'");
}

std::vector<std::string> convex_fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : base_fixtures()) {
    if (f.convex_polytope) out.push_back(f.info.name);
  }
  return out;
}

}  // namespace tubes
