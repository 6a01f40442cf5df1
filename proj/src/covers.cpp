#include "tubes/covers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tubes {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec planar(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Shell base_shell(const CoverConfig& cfg) { return Shell(Vec::Zero(2), cfg.r1, cfg.r2); }

bool fiber_ok(const CoverConfig& cfg, const Vec& y) { return y.allFinite() && y.norm() < cfg.r1 - kBoundaryTol; }

}  // namespace

void CoverConfig::validate() const {
  if (!(r1 > 0 && r1 < r2)) throw Error(ErrorKind::InvalidDomain, "cover radii need 0 < R1 < R2");
  if (sheets && *sheets < 2) throw Error(ErrorKind::InvalidDomain, "a finite cover needs at least 2 sheets");
}

bool omega_contains(const CoverConfig& cfg, const ComplexPoint& z) {
  require_dim(z.re, 2, "omega_contains");
  require_dim(z.im, 2, "omega_contains");
  return contains(RealBaseDomain{base_shell(cfg)}, z.re) && fiber_ok(cfg, z.im);
}

bool contains(const CoverConfig& cfg, const CoverPoint& p) {
  if (!std::isfinite(p.u.real()) || !std::isfinite(p.u.imag()) || !fiber_ok(cfg, p.y)) return false;
  if (cfg.infinite()) return p.u.real() > std::log(cfg.r1) && p.u.real() < std::log(cfg.r2);
  const double m = std::abs(p.u);
  return m > std::pow(cfg.r1, 1.0 / *cfg.sheets) && m < std::pow(cfg.r2, 1.0 / *cfg.sheets);
}

ComplexPoint project(const CoverConfig& cfg, const CoverPoint& p) {
  if (!contains(cfg, p)) throw Error(ErrorKind::InvalidPoint, "point is not on the cover");
  Complex x = cfg.infinite() ? std::exp(p.u.real()) * Complex(std::cos(p.u.imag()), std::sin(p.u.imag()))
                             : std::pow(p.u, *cfg.sheets);
  return {planar(x.real(), x.imag()), Vec(p.y)};
}

CoverPoint lift(const CoverConfig& cfg, const ComplexPoint& z, long sheet) {
  if (!omega_contains(cfg, z)) throw Error(ErrorKind::OutsideDomain, "point not in the finite tube");
  const Complex x(z.re[0], z.re[1]);
  Complex u;
  if (cfg.infinite()) {
    u = {std::log(std::abs(x)), std::arg(x) + kTwoPi * static_cast<double>(sheet)};
  } else {
    const int nu = *cfg.sheets;
    const long k = ((sheet % nu) + nu) % nu;
    u = std::polar(std::pow(std::abs(x), 1.0 / nu), (std::arg(x) + kTwoPi * static_cast<double>(k)) / nu);
  }
  return {u, Eigen::Vector2d(z.im[0], z.im[1])};
}

TubeDomain cover_tube(const CoverConfig& cfg) {
  cfg.validate();
  SheetedRealDomain base = cfg.infinite() ? SheetedRealDomain{UniversalCover(base_shell(cfg))}
                                          : SheetedRealDomain{FiniteCover(base_shell(cfg), *cfg.sheets)};
  return {std::move(base), SheetedRealDomain{Univalent{Ball(Vec::Zero(2), cfg.r1)}}};
}

Complex f_value(const Vec& x, const Vec& y) {
  require_dim(x, 2, "f");
  require_dim(y, 2, "f");
  return {x[0] - y[1], x[1] + y[0]};
}

Complex eval_f(const CoverConfig& cfg, const ComplexPoint& z) {
  if (!omega_contains(cfg, z)) throw Error(ErrorKind::OutsideDomain, "point not in the finite tube");
  const Complex f = f_value(z.re, z.im);
  // |f| = |X + i W| >= |X| - |W| with X = x1 + i x2, W = y1 + i y2. The
  // bound is attained when W is aligned with -i X, so allow a few roundings.
  const double nx = z.re.norm(), ny = z.im.norm();
  if (std::abs(f) < nx - ny - 4.0 * std::numeric_limits<double>::epsilon() * (nx + ny)) {
    throw Error(ErrorKind::BranchPrecondition, "|f| fell below |x| - |y|");
  }
  return f;
}

BranchValue eval_branch(const CoverConfig& cfg, const CoverPoint& p) {
  const ComplexPoint z = project(cfg, p);
  const Complex x(z.re[0], z.re[1]);
  const Complex w = Complex(p.y[0], p.y[1]) / x;
  if (std::abs(w) >= 1.0) throw Error(ErrorKind::BranchPrecondition, "|w| >= 1");
  const Complex one_iw = 1.0 + Complex(0.0, 1.0) * w;
  BranchValue b;
  b.w = w;
  if (cfg.infinite()) {
    b.principalFactor = p.u;
    b.correctionFactor = std::log(one_iw);
    b.value = b.principalFactor + b.correctionFactor;
  } else {
    b.principalFactor = p.u;
    b.correctionFactor = std::pow(one_iw, 1.0 / *cfg.sheets);
    b.value = b.principalFactor * b.correctionFactor;
  }
  return b;
}

SeparabilityWitness separability_witness(const CoverConfig& cfg, const CoverPoint& p, const CoverPoint& q) {
  SeparabilityWitness s;
  if (!contains(cfg, p) || !contains(cfg, q)) return s;
  if (std::abs(p.u - q.u) <= 1e-12 && (p.y - q.y).norm() <= 1e-12) return s;
  const ComplexPoint zp = project(cfg, p), zq = project(cfg, q);
  const double tol = 1e-12 * std::max(1.0, zp.re.norm());
  if ((zp.re - zq.re).norm() > tol || (zp.im - zq.im).norm() > tol) return s;
  s.valueP = eval_branch(cfg, p).value;
  s.valueQ = eval_branch(cfg, q).value;
  s.gap = std::abs(s.valueP - s.valueQ);
  s.distinguishes = s.gap > 0.0;
  return s;
}

std::vector<BlowupRow> blowup_probe(const CoverConfig& cfg, const std::vector<double>& eps) {
  cfg.validate();
  constexpr int kAngles = 360;
  std::vector<BlowupRow> rows;
  for (double e : eps) {
    if (!(e > 0) || e >= 0.5 * (cfg.r2 - cfg.r1) || e >= cfg.r1) {
      throw Error(ErrorKind::BadEpsilon, "epsilon must lie in (0, min((R2-R1)/2, R1))");
    }
    const double x1 = cfg.r1 + e;
    double y2 = x1 - 2.0 * e;
    // Keep x1 - y2 <= 2 eps after rounding so |f| at theta = 0 is at most 2 eps.
    while (x1 - y2 > 2.0 * e) y2 = std::nextafter(y2, x1);
    BlowupRow row{e, 0.0, 0.0};
    for (int k = 0; k < kAngles; ++k) {
      const double theta = kTwoPi * k / kAngles;
      const double c = k == 0 ? 1.0 : std::cos(theta), s = k == 0 ? 0.0 : std::sin(theta);
      const ComplexPoint z{planar(x1 * c, x1 * s), planar(-y2 * s, y2 * c)};
      const double g = 1.0 / std::abs(eval_f(cfg, z));
      if (g > row.supAbsG) {
        row.supAbsG = g;
        row.thetaAtSup = theta;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

ZeroWitness hull_zero_witness(double hullRadius, double fiberRadius) {
  const double t = 2.0 / 3.0 * std::min(hullRadius, fiberRadius);
  ZeroWitness w{planar(t, 0.0), planar(0.0, t), {}};
  w.f = f_value(w.x, w.y);
  return w;
}

MonodromyEvidence monodromy_sheets(const CoverConfig& cfg, double radius, int turns, int segments) {
  cfg.validate();
  if (!std::isfinite(radius) || !(radius > cfg.r1 && radius < cfg.r2)) {
    throw Error(ErrorKind::InvalidPoint, "loop radius must lie strictly between R1 and R2");
  }
  if (turns < 1) throw Error(ErrorKind::InvalidPoint, "turns must be positive");
  // On the loop y = 0, so f(z(t)) = r e^{it}: continue in the f-plane.
  const Germ<double> g = cfg.infinite() ? log_germ<double>(Complex(radius, 0.0))
                                        : root_germ<double>(*cfg.sheets, Complex(radius, 0.0));
  const auto loop = PolygonalPath<double>::circle(Complex(0.0, 0.0), radius, segments);
  const MonodromyResult<double> m = monodromy_order(g, loop, turns);
  return {m.order, m.gaps, m.offsets, m.steps};
}

}  // namespace tubes
