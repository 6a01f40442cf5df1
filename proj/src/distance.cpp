#include "tubes/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tubes {
namespace {

Eigen::Index fiber_dim(const TubeDomain& t) { return t.fiber ? tubes::dim(*t.fiber) : t.dim(); }

Vec fiber_anchor(const SheetedRealDomain& fiber) {
  if (const auto* u = std::get_if<Univalent>(&fiber)) {
    if (const auto* b = std::get_if<Ball>(&u->domain)) return b->center;
    const Box box = sampling_box(u->domain);
    const Vec mid = 0.5 * (box.lo + box.hi);
    if (contains(u->domain, mid)) return mid;
  }
  Rng rng(0x5eed);
  return sample_member(fiber, rng);
}

double sheeted_or_inf(const std::optional<SheetedRealDomain>& d, const Vec& v, DistanceMode mode) {
  if (!d) return std::numeric_limits<double>::infinity();
  return sheeted_boundary_distance(*d, v, mode);
}

Vec relift(const SheetedRealDomain& d, const Vec& u, const Vec& delta) {
  if (is_univalent(d)) {
    Vec v = u + delta;
    if (!contains(d, v)) throw Error(ErrorKind::OutsideDomain, "translated point leaves " + describe(d));
    return v;
  }
  auto v = nearest_preimage(d, project(d, u) + delta, u);
  if (!v) throw Error(ErrorKind::OutsideDomain, "translated point has no local lift in " + describe(d));
  return *v;
}

}  // namespace

ComplexVec to_complex(const ComplexPoint& z) {
  ComplexVec out(z.re.size());
  for (Eigen::Index j = 0; j < z.re.size(); ++j) out[j] = {z.re[j], z.im[j]};
  return out;
}

Eigen::Index TubeDomain::dim() const { return tubes::dim(base); }

bool TubeDomain::contains(const ComplexPoint& z) const {
  require_dim(z.re, dim(), "tube contains");
  require_dim(z.im, fiber_dim(*this), "tube contains");
  if (!all_finite(z.re) || !all_finite(z.im)) return false;
  if (!tubes::contains(base, z.re)) return false;
  return !fiber || tubes::contains(*fiber, z.im);
}

std::string TubeDomain::describe() const {
  std::ostringstream os;
  os << tubes::describe(base) << " + i " << (fiber ? tubes::describe(*fiber) : std::string("R^") + std::to_string(dim()));
  return os.str();
}

TubeDomain tube_over(RealBaseDomain base) { return {Univalent{std::move(base)}, std::nullopt}; }

TubeDomain tube_over(RealBaseDomain base, RealBaseDomain fiber) {
  if (dim(base) != dim(fiber)) throw Error(ErrorKind::DimensionMismatch, "base and fiber dimensions differ");
  return {Univalent{std::move(base)}, SheetedRealDomain{Univalent{std::move(fiber)}}};
}

ComplexPoint translate(const TubeDomain& tube, const ComplexPoint& z, const Vec& dx, const Vec& dy) {
  ComplexPoint out{relift(tube.base, z.re, dx), z.im + dy};
  if (tube.fiber) out.im = relift(*tube.fiber, z.im, dy);
  return out;
}

double BoundaryDistanceOracle::operator()(const ComplexPoint& z) const {
  if (!tube_.contains(z)) throw Error(ErrorKind::OutsideDomain, "point not in " + tube_.describe());
  return std::min(sheeted_boundary_distance(tube_.base, z.re, mode_), sheeted_or_inf(tube_.fiber, z.im, mode_));
}

double default_step(const ComplexPoint& z) {
  const double norm = std::sqrt(z.re.squaredNorm() + z.im.squaredNorm());
  return std::max(1e-4, 1e-5 * (1.0 + norm));
}

LeviResult levi_min_eigenvalue(const PointFunction& phi, const ComplexPoint& z, double step, int directions,
                               std::uint64_t seed, const Translator& move) {
  if (!(step > 0)) throw Error(ErrorKind::InvalidPoint, "step must be positive");
  const Eigen::Index n = z.re.size();
  auto shifted = [&](const Vec& dx, const Vec& dy) {
    return move ? move(z, dx, dy) : ComplexPoint{z.re + dx, z.im + dy};
  };
  auto eval = [&](const ComplexPoint& p) {
    try {
      const double v = phi(p);
      if (!std::isfinite(v)) throw Error(ErrorKind::StencilOutOfDomain, "phi not finite on the stencil");
      return v;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideDomain) throw Error(ErrorKind::StencilOutOfDomain, e.what());
      throw;
    }
  };
  auto at = [&](const Vec& dx, const Vec& dy) {
    try {
      return eval(shifted(dx, dy));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideDomain) throw Error(ErrorKind::StencilOutOfDomain, e.what());
      throw;
    }
  };

  const double centre = eval(z);
  LeviResult best;
  auto consider = [&](const ComplexVec& w) {
    const Vec a = w.real() * step, b = w.imag() * step;
    // z + h w = (x + h a) + i (y + h b); z + i h w = (x - h b) + i (y + h a).
    const double sum = at(a, b) + at(-a, -b) + at(-b, a) + at(b, -a);
    const double value = (sum - 4.0 * centre) / (4.0 * step * step);
    if (value < best.value) {
      best.value = value;
      best.direction = w;
    }
  };

  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexVec w = ComplexVec::Zero(n);
    w[j] = 1.0;
    consider(w);
    w[j] = Complex(0.0, 1.0);
    consider(w);
  }
  Rng rng(seed);
  for (int k = 0; k < directions; ++k) {
    ComplexVec w(n);
    for (Eigen::Index j = 0; j < n; ++j) w[j] = {rng.normal(), rng.normal()};
    w /= w.norm();
    consider(w);
  }
  return best;
}

PointSampler random_sampler(const TubeDomain& tube, std::uint64_t seed) {
  PointSampler s;
  s.draw = [tube, seed](std::size_t index, int attempt) {
    Rng rng(mix_seed(seed, index * 64 + static_cast<std::uint64_t>(attempt)));
    ComplexPoint z;
    z.re = sample_member(tube.base, rng);
    if (tube.fiber) {
      z.im = sample_member(*tube.fiber, rng);
    } else {
      const Vec half = Vec::Constant(tube.dim(), kUnboundedHalfWidth);
      z.im = rng.uniform_in_box(-half, half);
    }
    return z;
  };
  return s;
}

PointSampler grid_sampler(const TubeDomain& tube, std::size_t points, std::uint64_t seed) {
  const auto* uni = std::get_if<Univalent>(&tube.base);
  if (!uni) throw Error(ErrorKind::InvalidDomain, "grid sampling needs a univalent base");
  const Eigen::Index n = tube.dim();
  const Box box = sampling_box(uni->domain);
  const auto g = static_cast<long>(std::ceil(std::pow(static_cast<double>(points), 1.0 / static_cast<double>(n)) - 1e-9));
  const Vec cell = (box.hi - box.lo) / static_cast<double>(g);
  std::vector<Vec> members;
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vec x(n);
    for (Eigen::Index j = 0; j < n; ++j) x[j] = box.lo[j] + (static_cast<double>(idx[j]) + 0.5) * cell[j];
    if (contains(uni->domain, x)) members.push_back(x);
    Eigen::Index j = 0;
    while (j < n && ++idx[j] == g) idx[j++] = 0;
    if (j == n) break;
  }
  const Vec im = tube.fiber ? fiber_anchor(*tube.fiber) : Vec::Zero(n);
  PointSampler s;
  s.size = members.size();
  s.draw = [members = std::move(members), im, cell, seed, domain = uni->domain](std::size_t index, int attempt) {
    const Vec& x = members[index % members.size()];
    if (attempt == 0) return ComplexPoint{x, im};
    Rng rng(mix_seed(seed, index * 64 + static_cast<std::uint64_t>(attempt)));
    for (int t = 0; t < 100; ++t) {
      const Vec trial = x + (0.5 * cell).cwiseProduct(rng.uniform_in_box(-Vec::Ones(x.size()), Vec::Ones(x.size())));
      if (contains(domain, trial)) return ComplexPoint{trial, im};
    }
    return ComplexPoint{x, im};
  };
  return s;
}

const char* to_string(PshVerdict v) { return v == PshVerdict::Passes ? "PshPasses" : "PshFails"; }

PshReport psh_check(const BoundaryDistanceOracle& oracle, const PointSampler& sampler, std::size_t count,
                    const PshOptions& options) {
  PshReport report;
  report.tolerance = options.tol;
  report.seed = options.seed;
  const TubeDomain& tube = oracle.tube();
  const PointFunction phi = [&oracle](const ComplexPoint& z) { return -std::log(oracle(z)); };
  const Translator move = [&tube](const ComplexPoint& z, const Vec& dx, const Vec& dy) {
    return translate(tube, z, dx, dy);
  };
  const std::size_t total = std::min(count, sampler.size);
  for (std::size_t i = 0; i < total; ++i) {
    bool done = false;
    for (int attempt = 0; attempt <= options.retries && !done; ++attempt) {
      if (attempt > 0) ++report.resamples;
      const ComplexPoint z = sampler.draw(i, attempt);
      const double h = options.step ? *options.step : default_step(z);
      if (!tube.contains(z) || oracle(z) <= 2.0 * h) continue;
      try {
        const LeviResult r = levi_min_eigenvalue(phi, z, h, options.directions, mix_seed(options.seed, i), move);
        if (r.value < report.minLeviEigenvalue) {
          report.minLeviEigenvalue = r.value;
          report.worstPoint = z;
          report.worstDirection = r.direction;
        }
        done = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StencilOutOfDomain) throw;
      }
    }
    if (!done) throw Error(ErrorKind::StencilOutOfDomain, "no usable stencil after retries at sample " + std::to_string(i));
    ++report.sampleCount;
  }
  report.verdict = report.minLeviEigenvalue < -options.tol ? PshVerdict::Fails : PshVerdict::Passes;
  report.inconclusive = report.minLeviEigenvalue >= -options.tol && report.minLeviEigenvalue < 0.0;
  return report;
}

double imaginary_invariance_check(const BoundaryDistanceOracle& oracle, const ComplexPoint& z,
                                  const std::vector<Vec>& shifts) {
  const double base = oracle(z);
  double worst = 0.0;
  for (const Vec& y : shifts) worst = std::max(worst, std::abs(oracle({z.re, z.im + y}) - base));
  return worst;
}

namespace {

SegmentCheck summarize(const std::vector<double>& d) {
  SegmentCheck c;
  c.minOnSegment = *std::min_element(d.begin(), d.end());
  c.minAtEndpoints = std::min(d.front(), d.back());
  c.slack = c.minOnSegment - c.minAtEndpoints;
  return c;
}

}  // namespace

SegmentCheck segment_min_check(const BoundaryDistanceOracle& oracle, const Vec& p, const Vec& q, const Vec& y,
                               int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidPoint, "need at least 2 segment samples");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    d.push_back(oracle({(1.0 - t) * p + t * q, y}));
  }
  return summarize(d);
}

SegmentCheck segment_min_check(const BoundaryDistanceOracle& oracle, const LiftedSegment& lifted, const Vec& y,
                               int samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidPoint, "need at least 2 segment samples");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    d.push_back(oracle({segment_point(oracle.tube().base, lifted, t), y}));
  }
  return summarize(d);
}

MidpointCheck dyadic_midpoint_check(const BoundaryDistanceOracle& oracle, const Vec& p, const Vec& q, const Vec& y,
                                    int levels) {
  const long cells = 1L << levels;
  std::vector<double> phi(static_cast<std::size_t>(cells + 1));
  for (long k = 0; k <= cells; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(cells);
    phi[k] = -std::log(oracle({(1.0 - t) * p + t * q, y}));
  }
  MidpointCheck out;
  for (int level = 0; level < levels; ++level) {
    const long stride = cells >> level;
    for (long a = 0; a + stride <= cells; a += stride) {
      const long m = a + stride / 2;
      const double v = phi[m] - 0.5 * (phi[a] + phi[a + stride]);
      ++out.tests;
      if (v > out.maxViolation) {
        out.maxViolation = v;
        out.t_worst = static_cast<double>(m) / static_cast<double>(cells);
      }
    }
  }
  return out;
}

}  // namespace tubes
