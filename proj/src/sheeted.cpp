#include "tubes/sheeted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace tubes {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAmbiguity = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Vec planar(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Complex as_complex(const Vec& v) { return {v[0], v[1]}; }
Vec as_vec(Complex z) { return planar(z.real(), z.imag()); }

// Base point used by univalence witnesses: inside (inner, outer) and equal
// to 2 * inner whenever that fits below the geometric mean.
double witness_radius(const Shell& s) {
  if (!s.bounded()) return 2.0 * s.inner;
  return std::min(2.0 * s.inner, std::sqrt(s.inner * s.outer));
}

}  // namespace

FiniteCover::FiniteCover(Shell b, int nu) : base(std::move(b)), sheets(nu) {
  if (base.center.size() != 2) throw Error(ErrorKind::InvalidDomain, "covers are defined over planar shells");
  if (sheets < 2) throw Error(ErrorKind::InvalidDomain, "a finite cover needs at least 2 sheets");
}

UniversalCover::UniversalCover(Shell b) : base(std::move(b)) {
  if (base.center.size() != 2) throw Error(ErrorKind::InvalidDomain, "covers are defined over planar shells");
}

Eigen::Index dim(const SheetedRealDomain& domain) {
  return std::visit(overloaded{[](const Univalent& u) { return dim(u.domain); },
                               [](const auto&) { return Eigen::Index{2}; }},
                    domain);
}

bool is_univalent(const SheetedRealDomain& domain) { return std::holds_alternative<Univalent>(domain); }

std::string describe(const SheetedRealDomain& domain) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Univalent& u) { os << describe(u.domain); },
                 [&](const FiniteCover& c) { os << c.sheets << "-sheeted cover of " << describe(RealBaseDomain{c.base}); },
                 [&](const UniversalCover& c) { os << "universal cover of " << describe(RealBaseDomain{c.base}); },
             },
             domain);
  return os.str();
}

Vec project(const SheetedRealDomain& domain, const Vec& u) {
  require_dim(u, dim(domain), "project");
  return std::visit(overloaded{
                        [&](const Univalent&) { return Vec(u); },
                        [&](const FiniteCover& c) { return Vec(c.base.center + as_vec(std::pow(as_complex(u), c.sheets))); },
                        [&](const UniversalCover& c) {
                          return Vec(c.base.center + std::exp(u[0]) * planar(std::cos(u[1]), std::sin(u[1])));
                        },
                    },
                    domain);
}

bool contains(const SheetedRealDomain& domain, const Vec& u) {
  require_dim(u, dim(domain), "contains");
  if (!all_finite(u)) return false;
  return std::visit(overloaded{
                        [&](const Univalent& d) { return contains(d.domain, u); },
                        [&](const FiniteCover& c) { return contains(RealBaseDomain{c.base}, project(domain, u)); },
                        [&](const UniversalCover& c) {
                          return u[0] > std::log(c.base.inner) && u[0] < std::log(c.base.outer) &&
                                 contains(RealBaseDomain{c.base}, project(domain, u));
                        },
                    },
                    domain);
}

std::vector<Vec> preimages(const FiniteCover& cover, const Vec& x) {
  require_dim(x, 2, "preimages");
  const Complex w = as_complex(x - cover.base.center);
  const double modulus = std::pow(std::abs(w), 1.0 / cover.sheets);
  const double angle = std::arg(w) / cover.sheets;
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(cover.sheets));
  for (int k = 0; k < cover.sheets; ++k) out.push_back(as_vec(std::polar(modulus, angle + kTwoPi * k / cover.sheets)));
  return out;
}

int sheet_index(const FiniteCover& cover, const Vec& u) {
  const std::vector<Vec> pre = preimages(cover, project(SheetedRealDomain{cover}, u));
  int best = 0;
  for (int k = 1; k < cover.sheets; ++k) {
    if ((pre[k] - u).norm() < (pre[best] - u).norm()) best = k;
  }
  return best;
}

std::optional<Vec> nearest_preimage(const SheetedRealDomain& domain, const Vec& x, const Vec& near) {
  return std::visit(overloaded{
                        [&](const Univalent& d) -> std::optional<Vec> {
                          if (!contains(d.domain, x)) return std::nullopt;
                          return x;
                        },
                        [&](const FiniteCover& c) -> std::optional<Vec> {
                          if (!contains(RealBaseDomain{c.base}, x)) return std::nullopt;
                          const std::vector<Vec> pre = preimages(c, x);
                          double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
                          int best = -1;
                          for (int k = 0; k < c.sheets; ++k) {
                            const double d = (pre[k] - near).norm();
                            if (d < d1) {
                              d2 = d1;
                              d1 = d;
                              best = k;
                            } else if (d < d2) {
                              d2 = d;
                            }
                          }
                          if (d2 - d1 <= kAmbiguity) return std::nullopt;
                          return pre[best];
                        },
                        [&](const UniversalCover& c) -> std::optional<Vec> {
                          if (!contains(RealBaseDomain{c.base}, x)) return std::nullopt;
                          const Complex w = as_complex(x - c.base.center);
                          const double u0 = std::log(std::abs(w));
                          const double a = std::arg(w);
                          const double turns = (near[1] - a) / kTwoPi;
                          const double k = std::round(turns);
                          if (std::abs(std::abs(turns - k) - 0.5) * kTwoPi <= kAmbiguity) return std::nullopt;
                          return planar(u0, a + kTwoPi * k);
                        },
                    },
                    domain);
}

namespace {

// Lift of the base path t -> path(t), t in [0,1], by nearest-preimage
// continuation from `start`; nullopt on exit or ambiguity.
std::optional<Vec> lift_path(const SheetedRealDomain& domain, const Vec& start,
                             const std::function<Vec(double)>& path, int steps) {
  Vec prev = start;
  for (int i = 1; i <= steps; ++i) {
    auto next = nearest_preimage(domain, path(static_cast<double>(i) / steps), prev);
    if (!next) return std::nullopt;
    prev = *next;
  }
  return prev;
}

// Predicate for the cover bisection: spokes from the centre to the sphere of
// radius r and the arcs between neighbouring spoke ends must lift
// consistently; a mismatch means two preimage branches meet in the ball.
bool ball_lifts(const SheetedRealDomain& domain, const Vec& u, const Vec& x, double r) {
  constexpr int kSpokes = 32;
  std::vector<Vec> ends;
  ends.reserve(kSpokes);
  auto rim = [&](double angle) { return Vec(x + r * planar(std::cos(angle), std::sin(angle))); };
  for (int k = 0; k < kSpokes; ++k) {
    const Vec target = rim(kTwoPi * k / kSpokes);
    auto end = lift_path(domain, u, [&](double t) { return Vec(x + t * (target - x)); }, 16);
    if (!end) return false;
    ends.push_back(*end);
  }
  for (int k = 0; k < kSpokes; ++k) {
    const double a0 = kTwoPi * k / kSpokes;
    auto end = lift_path(domain, ends[k], [&](double t) { return rim(a0 + t * kTwoPi / kSpokes); }, 8);
    if (!end || (*end - ends[(k + 1) % kSpokes]).norm() > 1e-9 * std::max(1.0, end->norm())) return false;
  }
  return true;
}

}  // namespace

double sheeted_boundary_distance(const SheetedRealDomain& domain, const Vec& u, DistanceMode mode) {
  if (const auto* uni = std::get_if<Univalent>(&domain)) return real_boundary_distance(uni->domain, u, mode);
  if (!contains(domain, u)) throw Error(ErrorKind::OutsideDomain, "point not in " + describe(domain));
  const Shell& base = std::holds_alternative<FiniteCover>(domain) ? std::get<FiniteCover>(domain).base
                                                                   : std::get<UniversalCover>(domain).base;
  const Vec x = project(domain, u);
  const double outer = real_boundary_distance(RealBaseDomain{base}, x, mode);
  // The spoke/arc test probes the inscribed disc of the cube in Polydisc mode.
  const double shrink = 1.0 - 1e-9;
  if (ball_lifts(domain, u, x, outer * shrink)) return outer;
  double lo = 0.0, hi = outer;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ball_lifts(domain, u, x, mid * shrink)) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::optional<LiftedSegment> lift_segment(const SheetedRealDomain& domain, const Vec& p, const Vec& q, int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidPoint, "lift_segment needs at least 2 samples");
  if (!contains(domain, p) || !contains(domain, q)) return std::nullopt;
  LiftedSegment seg{p, q, project(domain, p), project(domain, q), {}};
  seg.samples.reserve(static_cast<std::size_t>(samples));
  seg.samples.push_back(p);
  Vec prev = p;
  for (int i = 1; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const Vec x = (1.0 - t) * seg.start_base + t * seg.end_base;
    std::optional<Vec> next;
    if (is_univalent(domain)) {
      const Vec y = (1.0 - t) * p + t * q;
      if (contains(domain, y)) next = y;
    } else {
      next = nearest_preimage(domain, x, prev);
    }
    if (!next) return std::nullopt;
    prev = *next;
    seg.samples.push_back(prev);
  }
  if ((prev - q).norm() > 1e-9 * std::max(1.0, q.norm())) return std::nullopt;
  seg.samples.back() = q;
  return seg;
}

Vec segment_point(const SheetedRealDomain& domain, const LiftedSegment& segment, double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (is_univalent(domain)) return (1.0 - t) * segment.start + t * segment.end;
  const auto n = static_cast<double>(segment.samples.size() - 1);
  const auto idx = static_cast<std::size_t>(std::min(n, std::round(t * n)));
  const Vec x = (1.0 - t) * segment.start_base + t * segment.end_base;
  auto lifted = nearest_preimage(domain, x, segment.samples[idx]);
  if (!lifted) throw Error(ErrorKind::OutsideDomain, "segment point left " + describe(domain));
  return *lifted;
}

std::optional<std::pair<Vec, Vec>> univalence_witness(const SheetedRealDomain& domain) {
  return std::visit(overloaded{
                        [](const Univalent&) -> std::optional<std::pair<Vec, Vec>> { return std::nullopt; },
                        [](const FiniteCover& c) -> std::optional<std::pair<Vec, Vec>> {
                          const Vec x = c.base.center + planar(witness_radius(c.base), 0.0);
                          const std::vector<Vec> pre = preimages(c, x);
                          return std::pair{pre[0], pre[1]};
                        },
                        [](const UniversalCover& c) -> std::optional<std::pair<Vec, Vec>> {
                          const double u0 = std::log(witness_radius(c.base));
                          return std::pair{planar(u0, 0.0), planar(u0, kTwoPi)};
                        },
                    },
                    domain);
}

Vec sample_member(const SheetedRealDomain& domain, Rng& rng) {
  return std::visit(overloaded{
                        [&](const Univalent& d) { return sample_member(d.domain, rng); },
                        [&](const FiniteCover& c) {
                          const Vec x = sample_member(RealBaseDomain{c.base}, rng);
                          const auto k = static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(c.sheets));
                          return preimages(c, x)[k];
                        },
                        [&](const UniversalCover& c) {
                          const Vec x = sample_member(RealBaseDomain{c.base}, rng);
                          const Complex w = as_complex(x - c.base.center);
                          const auto k = static_cast<double>(rng.next_u64() % 3) - 1.0;
                          return planar(std::log(std::abs(w)), std::arg(w) + kTwoPi * k);
                        },
                    },
                    domain);
}

}  // namespace tubes
