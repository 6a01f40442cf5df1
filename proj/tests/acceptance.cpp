// Acceptance checks, one line per criterion:
//   PASS|FAIL  <n>  <name>  <detail>  (<seconds> s)
// Exit status is the number of failed criteria.

#include "tubes/config.hpp"
#include "tubes/scenario.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace tubes;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

int failures = 0;

void criterion(int n, const std::string& name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && s > budget_s) v.require(false, "runtime " + num(s) + " s over " + num(budget_s) + " s");
  if (!v.pass) ++failures;
  std::printf("%s  %2d  %-34s %s  (%.2f s)\n", v.pass ? "PASS" : "FAIL", n, name.c_str(), v.detail.c_str(), s);
  std::fflush(stdout);
}

Verdict bochner_hull() {
  Verdict v;
  const std::vector<Vec> corners = {v2(0, 0), v2(2, 0), v2(2, 1), v2(1, 1), v2(1, 2), v2(0, 2)};
  const BochnerEnvelope e = bochner_envelope(fixture_base("L-shape"));
  v.require(oracle::same_point_set(e.vertices, oracle::hull_vertices_2d(corners), 0.0), "L-shape hull differs from oracle");
  int fixed = 0;
  for (const std::string& name : convex_fixture_names()) {
    const RealBaseDomain base = fixture_base(name);
    const BochnerEnvelope b = bochner_envelope(base);
    const auto* h = std::get_if<HalfspacePolytope>(&b.hull);
    const bool same = h && same_halfspaces(std::get<HalfspacePolytope>(base), *h, 0.0) &&
                      oracle::same_point_set(h->vertices(), std::get<HalfspacePolytope>(base).vertices(), 0.0);
    v.require(same, name + " not returned exactly");
    fixed += same;
  }
  v.detail = "pentagon matched, " + std::to_string(fixed) + "/10 convex fixtures fixed" + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

Verdict oka_positivity(const TubeDomain& tube, std::uint64_t seed) {
  Verdict v;
  const BoundaryDistanceOracle delta(tube);
  const PshReport r = psh_check(delta, random_sampler(tube, seed), 500, {.tol = 1e-3, .seed = seed});
  v.require(r.sampleCount == 500, "only " + std::to_string(r.sampleCount) + " samples");
  v.require(r.minLeviEigenvalue >= -1e-3, "min Levi " + num(r.minLeviEigenvalue));
  if (v.pass) v.detail = tube.describe() + ": min Levi " + num(r.minLeviEigenvalue);
  return v;
}

Verdict failure_witness() {
  Verdict v;
  std::string d;
  for (const char* name : {"L-shape", "shell-1-2"}) {
    const BoundaryDistanceOracle delta(tube_over(fixture_base(name)));
    const PshReport r = psh_check(delta, grid_sampler(delta.tube(), 10000, 1), 10000, {.seed = 1});
    // independent recheck of the witness: second difference of -log delta
    // along the reported complex direction with a fresh step
    const double h = 1e-4;
    const ComplexVec w = r.worstDirection;
    auto phi = [&](double a, double b) {
      Vec re = r.worstPoint.re, im = r.worstPoint.im;
      for (Eigen::Index j = 0; j < w.size(); ++j) {
        re[j] += h * (a * w[j].real() - b * w[j].imag());
        im[j] += h * (a * w[j].imag() + b * w[j].real());
      }
      return -std::log(delta({re, im}));
    };
    const double recheck = (phi(1, 0) + phi(-1, 0) + phi(0, 1) + phi(0, -1) - 4 * phi(0, 0)) / (4 * h * h);
    v.require(r.minLeviEigenvalue < -0.01, std::string(name) + " min Levi " + num(r.minLeviEigenvalue));
    v.require(recheck < -0.01, std::string(name) + " witness recheck " + num(recheck));
    d += std::string(name) + " " + num(r.minLeviEigenvalue) + " ";
  }
  if (v.pass) v.detail = "min Levi: " + d;
  return v;
}

Verdict imaginary_invariance() {
  Verdict v;
  Rng rng(404);
  std::vector<Vec> shifts2, shifts3;
  for (int i = 0; i < 100; ++i) {
    shifts2.push_back(rng.unit_vector(2) * rng.uniform(0, 100));
    shifts3.push_back(rng.unit_vector(3) * rng.uniform(0, 100));
  }
  double worst = 0;
  for (const char* name : {"L-shape", "hexagon", "octahedron"}) {
    const BoundaryDistanceOracle delta(tube_over(fixture_base(name)));
    const RealBaseDomain base = fixture_base(name);
    const Vec x = sample_member(base, rng);
    const ComplexPoint z{x, Vec::Zero(x.size())};
    worst = std::max(worst, imaginary_invariance_check(delta, z, x.size() == 2 ? shifts2 : shifts3));
  }
  v.require(worst <= 1e-12, "whole-space deviation " + num(worst));
  const BoundaryDistanceOracle finite(tube_over(fixture_base("ball"), Ball(Vec::Zero(2), 1.0)));
  const ComplexPoint z0{v2(0.2, 0.1), v2(0, 0)};
  const double finite_dev = imaginary_invariance_check(finite, z0, {v2(0.5, 0)});
  // oracle: delta = min(1 - |x|, 1 - |y|) before and after
  const double expect = std::abs(std::min(1 - std::hypot(0.2, 0.1), 0.5) - std::min(1 - std::hypot(0.2, 0.1), 1.0));
  v.require(finite_dev > 0.1, "finite-tube deviation " + num(finite_dev));
  v.require(std::abs(finite_dev - expect) < 1e-12, "finite-tube deviation differs from closed form");
  if (v.pass) v.detail = "whole-space " + num(worst) + ", finite tube " + num(finite_dev);
  return v;
}

Verdict maximum_principle() {
  Verdict v;
  std::vector<std::string> names = convex_fixture_names();
  names.push_back("ball");
  names.push_back("ball-3d");
  double worst_seg = std::numeric_limits<double>::infinity(), worst_mid = -std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  for (const std::string& name : names) {
    const RealBaseDomain base = fixture_base(name);
    const BoundaryDistanceOracle delta(tube_over(base));
    Rng rng(mix_seed(55, pairs));
    for (int i = 0; i < 1000; ++i) {
      const Vec p = sample_member(base, rng), q = sample_member(base, rng);
      const Vec y = rng.uniform_in_box(Vec::Constant(p.size(), -10), Vec::Constant(p.size(), 10));
      const SegmentCheck s = segment_min_check(delta, p, q, y, 100);
      worst_seg = std::min(worst_seg, s.slack);
      worst_mid = std::max(worst_mid, dyadic_midpoint_check(delta, p, q, y).maxViolation);
      ++pairs;
    }
  }
  v.require(worst_seg >= -1e-9, "segment slack " + num(worst_seg));
  v.require(worst_mid <= 1e-6, "midpoint violation " + num(worst_mid));
  if (v.pass) v.detail = std::to_string(pairs) + " pairs, min slack " + num(worst_seg) + ", max midpoint " + num(worst_mid);
  return v;
}

Verdict psi_certificate() {
  Verdict v;
  const GeneralizedTube bb{Univalent{fixture_base("ball")}, Univalent{Ball(Vec::Zero(2), 1.0)}};
  const ConvexityCertificate a = psi_convexity_check(psi_build(bb, v2(0, 0), 0.25), 1000, 6);
  v.require(a.verdict == CertVerdict::Convex && a.midpointTrials == 1000, "(Ball, Ball) not Convex over 1000 trials");
  const GeneralizedTube sb{Univalent{fixture_base("shell-1-2")}, Univalent{Ball(Vec::Zero(2), 1.0)}};
  const PsiFunction psi = psi_build(sb, v2(0, 0), 0.25);
  const ConvexityCertificate b1 = psi_convexity_check(psi, 1000, 6), b2 = psi_convexity_check(psi, 1000, 6);
  v.require(b1.verdict == CertVerdict::NonConvexWitness && b1.witness, "(Shell, Ball) gave no witness");
  if (!b1.witness || !b2.witness) return v;
  v.require(b1.witness->p == b2.witness->p && b1.witness->q == b2.witness->q, "witness pair not reproducible");
  // recompute psi = max(-log dist(x, shell boundary), -log rho0) at the pair
  auto psi_ref = [](const Vec& x) { return std::max(-std::log(std::min(x.norm() - 1, 2 - x.norm())), -std::log(0.25)); };
  const Vec p = b1.witness->p, q = b1.witness->q;
  if (b1.witness->reason == WitnessReason::MidpointViolation) {
    const double viol = psi_ref(0.5 * (p + q)) - 0.5 * (psi_ref(p) + psi_ref(q));
    v.require(viol > 1e-6, "witness violation recomputes to " + num(viol));
    if (v.pass) v.detail = "Convex on (Ball, Ball); witness violation " + num(viol);
  } else {
    // the straight segment must leave the shell
    bool leaves = false;
    for (int i = 0; i <= 1000; ++i) {
      const double r = ((1 - i / 1000.0) * p + (i / 1000.0) * q).norm();
      leaves = leaves || r <= 1 || r >= 2;
    }
    v.require(leaves, "LiftAbsent witness segment stays in the shell");
    if (v.pass) v.detail = "Convex on (Ball, Ball); segment witness leaves the shell";
  }
  return v;
}

CoverPoint sample_cover(const CoverConfig& cfg, Rng& rng) {
  const TubeDomain t = cover_tube(cfg);
  while (true) {
    const Vec u = sample_member(t.base, rng);
    const Vec y = sample_member(*t.fiber, rng);
    const CoverPoint p{Complex(u[0], u[1]), Eigen::Vector2d(y[0], y[1])};
    if (contains(cfg, p)) return p;
  }
}

Verdict branch_identities() {
  Verdict v;
  double worst = 0;
  for (int nu = 2; nu <= 6; ++nu) {
    const CoverConfig cfg{nu, 0.5, 4.0};
    Rng rng(700 + nu);
    for (int i = 0; i < 1000; ++i) {
      const CoverPoint p = sample_cover(cfg, rng);
      const ComplexPoint z = project(cfg, p);
      // f computed here from its definition, not through the library
      const Complex f(z.re[0] - z.im[1], z.re[1] + z.im[0]);
      worst = std::max(worst, std::abs(std::pow(eval_branch(cfg, p).value, nu) - f));
      worst = std::max(worst, std::abs(eval_f(cfg, z) - f));
    }
  }
  const CoverConfig inf{std::nullopt, 0.5, 4.0};
  Rng rng(777);
  double worst_inf = 0;
  for (int i = 0; i < 1000; ++i) {
    const CoverPoint p = sample_cover(inf, rng);
    const ComplexPoint z = project(inf, p);
    const Complex f(z.re[0] - z.im[1], z.re[1] + z.im[0]);
    worst_inf = std::max(worst_inf, std::abs(std::exp(eval_branch(inf, p).value) - f));
  }
  std::size_t fuzz = 0, bad = 0;
  Rng frng(778);
  const CoverConfig c3{3, 0.5, 4.0};
  while (fuzz < 100000) {
    const Vec x = frng.uniform_in_box(Vec::Constant(2, -4), Vec::Constant(2, 4));
    const Vec y = frng.uniform_in_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
    if (!omega_contains(c3, {x, y})) continue;
    ++fuzz;
    const Complex f = eval_f(c3, {x, y});
    bad += !(std::abs(f) >= x.norm() - y.norm());
  }
  v.require(worst <= 1e-10, "finite-cover error " + num(worst));
  v.require(worst_inf <= 1e-10, "infinite-cover error " + num(worst_inf));
  v.require(bad == 0, std::to_string(bad) + " fuzz samples break |f| >= |x| - |y|");
  if (v.pass) v.detail = "max error " + num(std::max(worst, worst_inf)) + ", 1e5 fuzz samples hold";
  return v;
}

Verdict monodromy() {
  Verdict v;
  for (int nu = 2; nu <= 6; ++nu) {
    const MonodromyEvidence m = monodromy_sheets(CoverConfig{nu, 0.5, 4.0}, 1.5, 20);
    v.require(m.sheets && *m.sheets == nu, "nu = " + std::to_string(nu) + " gave " + (m.sheets ? std::to_string(*m.sheets) : "none"));
  }
  const MonodromyEvidence mi = monodromy_sheets(CoverConfig{std::nullopt, 0.5, 4.0}, 1.5, 20);
  v.require(!mi.sheets && mi.gaps.size() == 20, "infinite cover returned");
  using C = std::complex<double>;
  const auto unit = PolygonalPath<double>::circle(C(0), 1.0);
  const MonodromyResult<double> sq = monodromy_order(root_germ<double>(2, C(1, 0)), unit, 5);
  v.require(sq.order && *sq.order == 2, "square root order is not 2");
  Germ<double> g = log_germ<double>(C(1, 0));
  double drift = 0;
  for (int k = 1; k <= 3; ++k) {
    g = continue_along(g, unit).finalGerm;
    g.center = C(1, 0);
    drift = std::max(drift, std::abs(g.coefficients[0] - C(0, 2 * std::numbers::pi * k)));
  }
  v.require(drift <= 1e-8, "log offset error " + num(drift));
  if (v.pass) v.detail = "nu = 2..6 exact, infinite NeverReturns, log drift " + num(drift);
  return v;
}

Verdict blowup() {
  Verdict v;
  const CoverConfig cfg{2, 0.5, 4.0};
  const std::vector<double> eps = {1e-2, 1e-4, 1e-6};
  const auto rows = blowup_probe(cfg, eps);
  std::string d;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    v.require(rows[i].supAbsG >= 1 / (2 * eps[i]) - 1e-9, "eps " + num(eps[i]) + ": sup " + num(rows[i].supAbsG));
    d += num(rows[i].supAbsG) + " ";
  }
  // The hull of the annulus is the disc |x| < R2; the zero must lie in
  // disc + i Ball(0; R1).
  const ZeroWitness w = hull_zero_witness(cfg.r2, cfg.r1);
  const Complex f(w.x[0] - w.y[1], w.x[1] + w.y[0]);
  v.require(f == Complex(0, 0), "witness f = " + num(std::abs(f)));
  v.require(w.x.norm() < cfg.r2 && w.y.norm() < cfg.r1, "witness outside co(A) + iB");
  if (v.pass) v.detail = "sup|g| = " + d + "; zero of f at x = (" + num(w.x[0]) + ", 0)";
  return v;
}

Verdict jp_formula() {
  Verdict v;
  const JpShellConfig cfg{0.5, 0.3};
  const JpReport r = jp_consistency_suite(cfg, 10000, 2024);
  v.require(r.samples == 10000 && r.inclusionPasses && r.inclusionFailures == 0, "inclusion failed");
  v.require(r.nonvanishingChecked && r.nonvanishingPasses, "nonvanishing failed");
  // independent inclusion and nonvanishing checks on fresh samples
  Rng rng(2025);
  std::size_t bad_a = 0, bad_b = 0, n_b = 0;
  for (int i = 0; i < 10000; ++i) {
    Vec x = rng.uniform_in_box(Vec::Constant(2, -1), Vec::Constant(2, 1));
    Vec y = rng.uniform_in_box(Vec::Constant(2, -0.3), Vec::Constant(2, 0.3));
    if (x.norm() > 0.5 && x.norm() < 1 && y.norm() < 0.3) {
      const bool in = x.squaredNorm() + 0.09 - 0.25 - y.squaredNorm() > 0;
      bad_a += !in;
    }
    if (x.norm() < 1 && y.norm() < 0.3 && y.squaredNorm() < x.squaredNorm() + 0.09 - 0.25) {
      ++n_b;
      const double fx = x[0] - y[1], fy = x[1] + y[0];
      const double absf = std::hypot(fx, fy);
      bad_b += !(absf >= x.norm() - y.norm() && x.norm() - y.norm() > 0 && absf > 0);
    }
  }
  v.require(bad_a == 0, std::to_string(bad_a) + " oracle inclusion failures");
  v.require(bad_b == 0, std::to_string(bad_b) + " oracle nonvanishing failures");
  bool conflict = false;
  try {
    jp_consistency_suite({0.5, 0.6}, 100, 1);
  } catch (const Error& e) {
    conflict = e.kind() == ErrorKind::ConfigConflict;
  }
  v.require(conflict, "R2 > R1 did not raise ConfigConflict");
  if (v.pass) v.detail = "min |f| " + num(r.minAbsF) + " on " + std::to_string(r.nonvanishingSamples) + " samples; guard raised";
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  Verdict v;
  int n = 0;
  std::vector<fs::path> cfgs;
  for (const auto& e : fs::directory_iterator(TUBES_GOLDEN_DIR))
    if (e.path().extension() == ".cfg") cfgs.push_back(e.path());
  std::sort(cfgs.begin(), cfgs.end());
  for (const fs::path& p : cfgs) {
    const std::string text = slurp(p);
    const ScenarioOutcome a = run_scenario(text), b = run_scenario(text);
    const bool same = a.exit == b.exit && comparable_report(a.report) == comparable_report(b.report) &&
                      a.sideFiles == b.sideFiles && a.diagnostic == b.diagnostic;
    v.require(same, p.stem().string() + " differs between runs");
    ++n;
  }
  v.require(n > 0, "no golden configs found");
  if (v.pass) v.detail = std::to_string(n) + " golden configs replay byte-identically";
  return v;
}

}  // namespace

int main() {
  criterion(1, "bochner fixed point and hull", 1.0, bochner_hull);
  const std::vector<std::pair<std::string, TubeDomain>> convex = {
      {"ball", tube_over(fixture_base("ball"))},
      {"square", tube_over(fixture_base("unit-square"))},
      {"L-hull", tube_over(fixture_base("L-hull"))},
      {"ball + i ball", tube_over(fixture_base("ball"), Ball(Vec::Zero(2), 0.5))},
  };
  std::uint64_t seed = 20;
  for (const auto& [label, tube] : convex) {
    const TubeDomain t = tube;
    criterion(2, "positivity of -log delta: " + label, 30.0, [t, s = seed++] { return oka_positivity(t, s); });
  }
  criterion(3, "pseudoconvexity failure witness", 60.0, failure_witness);
  criterion(4, "imaginary translation invariance", 0, imaginary_invariance);
  criterion(5, "segment minimum and midpoint test", 0, maximum_principle);
  criterion(6, "psi convexity certificate", 10.0, psi_certificate);
  criterion(7, "branch identities", 0, branch_identities);
  criterion(8, "monodromy sheet counts", 60.0, monodromy);
  criterion(9, "blow-up probe", 0, blowup);
  criterion(10, "finite shell envelope formula", 0, jp_formula);
  criterion(11, "replay determinism", 0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
