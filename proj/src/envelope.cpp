#include "tubes/envelope.hpp"

#include "tubes/covers.hpp"

#include <cmath>
#include <limits>

namespace tubes {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

BochnerEnvelope finish(RealBaseDomain hull, bool exact, double defect, std::vector<Vec> vertices) {
  return {tube_over(hull), std::move(hull), exact, defect, std::move(vertices)};
}

BochnerEnvelope hull_of(const std::vector<Vec>& points, Eigen::Index n, bool exact, double defect = 0.0) {
  HalfspacePolytope hull = convex_hull(points, n);
  std::vector<Vec> verts = hull.vertices();
  return finish(std::move(hull), exact, defect, std::move(verts));
}

std::vector<Vec> members(const RealBaseDomain& base, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(sample_member(base, rng));
  return pts;
}

}  // namespace

BochnerEnvelope bochner_envelope(const RealBaseDomain& base, std::size_t sampleBudget, std::uint64_t seed) {
  const Eigen::Index n = dim(base);
  return std::visit(
      overloaded{
          [&](const Ball& b) { return finish(b, true, 0.0, {}); },
          // an intersection of half-spaces is already convex
          [&](const HalfspacePolytope& p) { return finish(p, true, 0.0, p.vertices()); },
          [&](const PolytopeUnion& u) {
            std::vector<Vec> pts;
            for (const HalfspacePolytope& part : u.parts()) pts.insert(pts.end(), part.vertices().begin(), part.vertices().end());
            return hull_of(pts, n, true);
          },
          [&](const Shell& s) {
            if (!s.bounded()) return finish(HalfspacePolytope::whole_space(n), true, 0.0, {});
            BochnerEnvelope env = hull_of(members(base, sampleBudget, seed), n, false);
            const auto& hull = std::get<HalfspacePolytope>(env.hull);
            double defect = 0.0;
            for (const Halfspace& h : hull.halfspaces()) defect = std::max(defect, s.outer - (h.offset - h.normal.dot(s.center)));
            env.hausdorffDefect = defect;
            return env;
          },
          [&](const SampledRegion&) {
            BochnerEnvelope env = hull_of(members(base, sampleBudget, seed), n, false);
            const auto& hull = std::get<HalfspacePolytope>(env.hull);
            double defect = 0.0;
            for (const Vec& x : members(base, 1000, mix_seed(seed, 1))) defect = std::max(defect, -hull.min_slack(x));
            env.hausdorffDefect = defect;
            return env;
          },
      },
      base);
}

const char* to_string(CertVerdict v) { return v == CertVerdict::Convex ? "Convex" : "NonConvexWitness"; }
const char* to_string(WitnessReason r) { return r == WitnessReason::LiftAbsent ? "LiftAbsent" : "MidpointViolation"; }

ConvexityCertificate abe_check(const SheetedRealDomain& base, int trials, std::uint64_t seed,
                               const std::vector<std::pair<Vec, Vec>>& probes) {
  ConvexityCertificate cert;
  cert.univalenceWitness = univalence_witness(base);
  cert.univalent = !cert.univalenceWitness.has_value();
  auto test = [&](const Vec& p, const Vec& q) {
    ++cert.midpointTrials;
    auto seg = lift_segment(base, p, q);
    bool ok = seg.has_value();
    if (ok) {
      // The lifted midpoint must sit over the midpoint of the projections.
      const Vec mid = segment_point(base, *seg, 0.5);
      ok = contains(base, mid) && (project(base, mid) - 0.5 * (seg->start_base + seg->end_base)).norm() <= 1e-9;
    }
    if (!ok) {
      ++cert.liftAbsent;
      if (!cert.witness) cert.witness = ConvexityWitness{p, q, WitnessReason::LiftAbsent, std::nan("")};
    }
  };
  for (const auto& [p, q] : probes) {
    if (!contains(base, p) || !contains(base, q)) throw Error(ErrorKind::InvalidPoint, "probe point outside the domain");
    test(p, q);
  }
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const Vec p = sample_member(base, rng);
    const Vec q = sample_member(base, rng);
    test(p, q);
  }
  cert.vacuous = cert.midpointTrials == 0;
  cert.verdict = cert.witness ? CertVerdict::NonConvexWitness : CertVerdict::Convex;
  return cert;
}

double PsiFunction::operator()(const Vec& x) const {
  const double d1 = sheeted_boundary_distance(a1_, x);
  // With dist(y0, boundary of A2) >= 2 rho0 the A2 term never binds:
  // -log min(d1, d2) only differs from -log d1 when d2 < d1, and then it is
  // below -log(2 rho0) < -log rho0, so the outer max discards it.
  if (!(fiber_distance_ >= 2.0 * rho0_)) throw Error(ErrorKind::BadRho, "fiber distance below 2 rho0");
  return std::max(-std::log(d1), -std::log(rho0_));
}

PsiFunction psi_build(const GeneralizedTube& tube, const Vec& y0, double rho0) {
  if (dim(tube.a1) != dim(tube.a2)) throw Error(ErrorKind::DimensionMismatch, "A1 and A2 dimensions differ");
  require_dim(y0, dim(tube.a2), "psi_build");
  if (!(rho0 > 0) || !std::isfinite(rho0)) throw Error(ErrorKind::BadRho, "rho0 must be positive");
  if (!contains(tube.a2, y0)) throw Error(ErrorKind::BadRho, "y0 is not in A2");
  const double d2 = sheeted_boundary_distance(tube.a2, y0);
  if (d2 < 2.0 * rho0) throw Error(ErrorKind::BadRho, "the ball of radius 2 rho0 about y0 leaves A2");
  return PsiFunction(tube.a1, y0, rho0, d2);
}

ConvexityCertificate psi_convexity_check(const PsiFunction& psi, int trials, std::uint64_t seed, double tol) {
  ConvexityCertificate cert;
  cert.tolerance = tol;
  cert.univalenceWitness = univalence_witness(psi.a1());
  cert.univalent = !cert.univalenceWitness.has_value();
  std::optional<ConvexityWitness> absent;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const Vec p = sample_member(psi.a1(), rng);
    const Vec q = sample_member(psi.a1(), rng);
    ++cert.midpointTrials;
    auto seg = lift_segment(psi.a1(), p, q);
    if (!seg) {
      ++cert.liftAbsent;
      if (!absent) absent = ConvexityWitness{p, q, WitnessReason::LiftAbsent, std::nan("")};
      continue;
    }
    const double v = psi(segment_point(psi.a1(), *seg, 0.5)) - 0.5 * (psi(p) + psi(q));
    if (v > tol) {
      ++cert.violations;
      if (!cert.witness || v > cert.witness->violation) cert.witness = ConvexityWitness{p, q, WitnessReason::MidpointViolation, v};
    }
  }
  if (!cert.witness) cert.witness = absent;
  cert.vacuous = cert.midpointTrials == 0;
  cert.verdict = cert.witness ? CertVerdict::NonConvexWitness : CertVerdict::Convex;
  return cert;
}

void JpShellConfig::validate() const {
  if (!(r1 > 0 && r1 < 1)) throw Error(ErrorKind::InvalidDomain, "R1 must lie in (0, 1)");
  if (!(r2 > 0) || !std::isfinite(r2)) throw Error(ErrorKind::InvalidDomain, "R2 must be positive");
}

bool jp_envelope_contains(const JpShellConfig& cfg, const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "x and y dimensions differ");
  // Same open-set convention as the base domains: within 1e-12 of the
  // boundary counts as outside, for the norms and for the quadratic residual.
  const double xx = x.squaredNorm(), yy = y.squaredNorm();
  return x.norm() < 1.0 - kBoundaryTol && y.norm() < cfg.r2 - kBoundaryTol &&
         xx + cfg.r2 * cfg.r2 - cfg.r1 * cfg.r1 - yy > kBoundaryTol;
}

JpReport jp_consistency_suite(const JpShellConfig& cfg, std::size_t samples, std::uint64_t seed,
                              bool checkNonvanishing) {
  cfg.validate();
  if (checkNonvanishing && cfg.r2 > cfg.r1) {
    throw Error(ErrorKind::ConfigConflict, "nonvanishing of f needs R2 <= R1");
  }
  JpReport rep;
  rep.samples = samples;
  rep.vacuous = samples == 0;
  const Vec zero = Vec::Zero(2);
  const Shell omega_x(zero, cfg.r1, 1.0);
  const Ball omega_y(zero, cfg.r2);
  const Ball unit(zero, 1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(mix_seed(seed, 2 * i));
    const Vec x = sample_member(RealBaseDomain{omega_x}, rng);
    const Vec y = sample_member(RealBaseDomain{omega_y}, rng);
    if (!jp_envelope_contains(cfg, x, y)) {
      ++rep.inclusionFailures;
      rep.inclusionPasses = false;
    }
  }
  if (checkNonvanishing) {
    rep.nonvanishingChecked = true;
    for (std::size_t i = 0; i < samples; ++i) {
      Rng rng(mix_seed(seed, 2 * i + 1));
      Vec x, y;
      do {
        x = sample_member(RealBaseDomain{unit}, rng);
        y = sample_member(RealBaseDomain{omega_y}, rng);
      } while (!jp_envelope_contains(cfg, x, y));
      const double af = std::abs(f_value(x, y));
      const double bound = x.norm() - y.norm();
      ++rep.nonvanishingSamples;
      rep.minAbsF = std::min(rep.minAbsF, af);
      if (!(af >= bound && bound > 0.0)) rep.nonvanishingPasses = false;
    }
  }
  const ZeroWitness w = hull_zero_witness(1.0, cfg.r2);
  rep.witnessX = w.x;
  rep.witnessY = w.y;
  rep.witnessF = w.f;
  rep.witnessInHullTube = w.x.norm() < 1.0 && w.y.norm() < cfg.r2;
  return rep;
}

}  // namespace tubes
