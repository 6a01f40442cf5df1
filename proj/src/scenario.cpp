#include "tubes/scenario.hpp"

#include "tubes/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tubes {
namespace {

using json = nlohmann::json;

constexpr const char* kScenario = "scenario";

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json to_json(const ComplexVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

json to_json(const ComplexPoint& z) { return {{"re", to_json(z.re)}, {"im", to_json(z.im)}}; }

json echo(const Config& cfg) {
  json out = json::object();
  for (const std::string& sec : cfg.sections()) {
    json s = json::object();
    for (const Config::Entry& e : cfg.entries(sec)) {
      if (!s.contains(e.key)) {
        s[e.key] = e.value;
      } else {
        if (!s[e.key].is_array()) s[e.key] = json::array({s[e.key]});
        s[e.key].push_back(e.value);
      }
    }
    out[sec] = s;
  }
  return out;
}

struct Context {
  const Config& cfg;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string>& side;

  std::uint64_t need_seed() const {
    if (!seed) throw Error(ErrorKind::ConfigError, "sampled scenario needs a seed (config key 'seed' or --seed)");
    return *seed;
  }
  std::string opt(const std::string& key, const std::string& fallback) const { return cfg.get_or(kScenario, key, fallback); }
  double real(const std::string& key, double fallback) const {
    return cfg.has(kScenario, key) ? parse_real(cfg.get(kScenario, key)) : fallback;
  }
  long integer(const std::string& key, long fallback) const {
    const long v = cfg.has(kScenario, key) ? parse_int(cfg.get(kScenario, key)) : fallback;
    if (v < 0) throw Error(ErrorKind::ConfigError, "'" + key + "' must be non-negative");
    return v;
  }
  double positive(const std::string& key, double fallback) const {
    const double v = real(key, fallback);
    if (!(v > 0)) throw Error(ErrorKind::ConfigError, "'" + key + "' must be positive");
    return v;
  }
};

struct Result {
  ExitCode exit;
  std::string claim;
  std::string verdict;
  json payload;
};

bool is_sampled(const RealBaseDomain& d) {
  if (const auto* s = std::get_if<Shell>(&d)) return s->bounded();
  return std::holds_alternative<SampledRegion>(d);
}

json halfspaces_json(const HalfspacePolytope& p) {
  json a = json::array();
  for (const Halfspace& h : p.halfspaces()) a.push_back({{"normal", to_json(h.normal)}, {"offset", h.offset}});
  return a;
}

Result run_bochner(const Context& c) {
  const RealBaseDomain base = parse_real_domain(c.cfg, "base");
  const auto budget = static_cast<std::size_t>(c.integer("samples", 10000));
  const std::uint64_t seed = is_sampled(base) ? c.need_seed() : c.seed.value_or(0);
  const BochnerEnvelope env = bochner_envelope(base, budget, seed);
  json p;
  p["base"] = describe(base);
  p["hull"] = describe(env.hull);
  p["exact"] = env.exact;
  p["hausdorff_defect"] = env.hausdorffDefect;
  json verts = json::array();
  for (const Vec& v : env.vertices) verts.push_back(to_json(v));
  p["vertices"] = verts;
  if (const auto* hp = std::get_if<HalfspacePolytope>(&env.hull)) p["halfspaces"] = halfspaces_json(*hp);
  if (const auto* in = std::get_if<HalfspacePolytope>(&base); in && std::holds_alternative<HalfspacePolytope>(env.hull)) {
    p["fixed_point"] = same_halfspaces(*in, std::get<HalfspacePolytope>(env.hull));
  }
  return {ExitCode::Pass, "the envelope of a tube is the tube over the convex hull of its base", "EnvelopeComputed", p};
}

DistanceMode parse_mode(const Context& c) {
  const std::string m = c.opt("mode", "euclidean");
  if (m == "euclidean") return DistanceMode::Euclidean;
  if (m == "polydisc") return DistanceMode::Polydisc;
  throw Error(ErrorKind::ConfigError, "mode must be euclidean or polydisc");
}

json psh_json(const PshReport& r) {
  json p;
  p["sample_count"] = r.sampleCount;
  p["min_levi"] = r.minLeviEigenvalue;
  p["tolerance"] = r.tolerance;
  p["inconclusive"] = r.inconclusive;
  p["resamples"] = r.resamples;
  if (r.sampleCount > 0) {
    p["worst_point"] = to_json(r.worstPoint);
    p["worst_direction"] = to_json(r.worstDirection);
  }
  return p;
}

Result run_psh(const Context& c) {
  const std::uint64_t seed = c.need_seed();
  const TubeDomain tube{parse_domain(c.cfg, "base"), parse_fiber(c.cfg, "fiber")};
  const BoundaryDistanceOracle oracle(tube, parse_mode(c));
  const auto count = static_cast<std::size_t>(c.integer("samples", 500));
  const std::string kind = c.opt("sampler", "random");
  PointSampler sampler;
  if (kind == "random") sampler = random_sampler(tube, seed);
  else if (kind == "grid") sampler = grid_sampler(tube, count, seed);
  else throw Error(ErrorKind::ConfigError, "sampler must be random or grid");
  PshOptions opt;
  opt.tol = c.positive("tol", 1e-3);
  opt.directions = static_cast<int>(c.integer("directions", 64));
  opt.seed = seed;
  if (c.cfg.has(kScenario, "step")) opt.step = c.positive("step", 1e-4);
  const PshReport r = psh_check(oracle, sampler, count, opt);
  json p = psh_json(r);
  p["tube"] = tube.describe();
  p["sampler"] = kind;
  return {r.verdict == PshVerdict::Passes ? ExitCode::Pass : ExitCode::Fail,
          "-log of the boundary distance is plurisubharmonic on a pseudoconvex tube", to_string(r.verdict), p};
}

json witness_json(const ConvexityCertificate& cert) {
  json p;
  p["univalent"] = cert.univalent;
  if (cert.univalenceWitness) {
    p["univalence_witness"] = json::array({to_json(cert.univalenceWitness->first), to_json(cert.univalenceWitness->second)});
  }
  p["midpoint_trials"] = cert.midpointTrials;
  p["tolerance"] = cert.tolerance;
  p["vacuous"] = cert.vacuous;
  p["lift_absent"] = cert.liftAbsent;
  p["violations"] = cert.violations;
  if (cert.witness) {
    p["witness"] = {{"p", to_json(cert.witness->p)},
                    {"q", to_json(cert.witness->q)},
                    {"reason", to_string(cert.witness->reason)},
                    {"violation", cert.witness->violation}};
  }
  return p;
}

Result run_abe(const Context& c) {
  const SheetedRealDomain base = parse_domain(c.cfg, "base");
  const long trials = c.integer("trials", 100);
  const std::uint64_t seed = trials > 0 ? c.need_seed() : c.seed.value_or(0);
  std::vector<std::pair<Vec, Vec>> probes;
  for (const std::string& line : c.cfg.get_all(kScenario, "probe")) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ConfigError, "probe needs 'p : q'");
    probes.emplace_back(parse_vector(line.substr(0, colon)), parse_vector(line.substr(colon + 1)));
  }
  const ConvexityCertificate cert = abe_check(base, static_cast<int>(trials), seed, probes);
  json p = witness_json(cert);
  p["base"] = describe(base);
  p["passes"] = cert.passes();
  return {cert.passes() ? ExitCode::Pass : ExitCode::Fail,
          "a tube is a domain of holomorphy exactly when its base is univalent and convex", to_string(cert.verdict), p};
}

Result run_gentube(const Context& c) {
  const GeneralizedTube g{parse_domain(c.cfg, "a1"), parse_domain(c.cfg, "a2")};
  const long trials = c.integer("trials", 1000);
  const std::uint64_t seed = c.need_seed();
  const Vec y0 = parse_vector(c.cfg.get(kScenario, "y0"));
  const PsiFunction psi = psi_build(g, y0, parse_real(c.cfg.get(kScenario, "rho0")));
  const ConvexityCertificate cert = psi_convexity_check(psi, static_cast<int>(trials), seed, c.positive("tol", 1e-6));
  json p = witness_json(cert);
  p["a1"] = describe(g.a1);
  p["a2"] = describe(g.a2);
  p["rho0"] = psi.rho0();
  p["fiber_distance"] = psi.fiberDistance();
  bool ok = cert.verdict == CertVerdict::Convex;
  if (cert.witness && cert.witness->reason == WitnessReason::MidpointViolation) {
    const auto seg = lift_segment(g.a1, cert.witness->p, cert.witness->q);
    p["witness"]["psi"] = {{"p", psi(cert.witness->p)},
                           {"q", psi(cert.witness->q)},
                           {"mid", psi(segment_point(g.a1, *seg, 0.5))}};
  }
  if (const long n = c.integer("psh_samples", 0); n > 0) {
    const TubeDomain tube = g.tube();
    PshOptions opt;
    opt.seed = seed;
    const PshReport r = psh_check(BoundaryDistanceOracle(tube), random_sampler(tube, mix_seed(seed, 7)),
                                  static_cast<std::size_t>(n), opt);
    p["psh"] = psh_json(r);
    p["psh"]["verdict"] = to_string(r.verdict);
    ok = ok && r.verdict == PshVerdict::Passes;
  }
  return {ok ? ExitCode::Pass : ExitCode::Fail, "psi is a continuous convex function on A1", to_string(cert.verdict), p};
}

CoverConfig parse_cover(const Context& c) {
  const std::string sec = "cover";
  CoverConfig cfg;
  if (c.cfg.has(sec, "fixture")) {
    cfg = fixture_cover(c.cfg.get(sec, "fixture"));
  } else {
    const std::string nu = c.cfg.get(sec, "sheets");
    if (nu == "inf" || nu == "infinite") cfg.sheets.reset();
    else cfg.sheets = static_cast<int>(parse_int(nu));
    cfg.r1 = parse_real(c.cfg.get(sec, "r1"));
    cfg.r2 = parse_real(c.cfg.get(sec, "r2"));
  }
  if (c.cfg.has(sec, "fiber_radius") && parse_real(c.cfg.get(sec, "fiber_radius")) != cfg.r1) {
    throw Error(ErrorKind::ConfigError, "the fiber radius of a cover tube is fixed to r1");
  }
  cfg.validate();
  return cfg;
}

json cover_json(const CoverConfig& cfg) {
  return {{"sheets", cfg.sheets ? json(*cfg.sheets) : json("infinite")}, {"r1", cfg.r1}, {"r2", cfg.r2}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Result run_cover(const Context& c) {
  const CoverConfig cfg = parse_cover(c);
  const std::uint64_t seed = c.need_seed();
  const auto samples = static_cast<std::size_t>(c.integer("samples", 1000));
  const TubeDomain tube = cover_tube(cfg);
  const PointSampler sampler = random_sampler(tube, seed);
  double identity = 0.0;
  std::size_t bound_violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const ComplexPoint s = sampler.draw(i, 0);
    const CoverPoint p{Complex(s.re[0], s.re[1]), Eigen::Vector2d(s.im[0], s.im[1])};
    const ComplexPoint z = project(cfg, p);
    const Complex f = f_value(z.re, z.im);
    const BranchValue b = eval_branch(cfg, p);
    const Complex back = cfg.infinite() ? std::exp(b.value) : std::pow(b.value, *cfg.sheets);
    identity = std::max(identity, std::abs(back - f));
    const double margin = std::abs(f) - (z.re.norm() - z.im.norm());
    min_margin = std::min(min_margin, margin);
    if (margin < 0) ++bound_violations;
  }
  json p;
  p["cover"] = cover_json(cfg);
  p["samples"] = samples;
  p["branch_identity_max_error"] = identity;
  p["nonvanishing_bound_violations"] = bound_violations;
  p["nonvanishing_min_margin"] = min_margin;

  // Two sheets over the same base point.
  const ComplexPoint z0{(Vec(2) << std::sqrt(cfg.r1 * (std::isfinite(cfg.r2) ? cfg.r2 : 4.0 * cfg.r1)), 0.0).finished(),
                        Vec::Zero(2)};
  const SeparabilityWitness sep = separability_witness(cfg, lift(cfg, z0, 0), lift(cfg, z0, 1));
  p["separability"] = {{"distinguishes", sep.distinguishes},
                       {"value_p", to_json(sep.valueP)},
                       {"value_q", to_json(sep.valueQ)},
                       {"gap", sep.gap}};

  const std::vector<double> eps = parse_list(c.opt("epsilons", "1e-2 1e-4 1e-6"));
  const std::vector<BlowupRow> rows = blowup_probe(cfg, eps);
  std::ostringstream csv;
  csv << "epsilon,sup_abs_g,theta_at_sup\n";
  json rj = json::array();
  bool blowup_ok = true;
  for (const BlowupRow& r : rows) {
    csv << fmt(r.epsilon) << ',' << fmt(r.supAbsG) << ',' << fmt(r.thetaAtSup) << '\n';
    rj.push_back({{"epsilon", r.epsilon}, {"sup_abs_g", r.supAbsG}, {"theta_at_sup", r.thetaAtSup}});
    blowup_ok = blowup_ok && r.supAbsG >= 1.0 / (2.0 * r.epsilon) - 1e-9;
  }
  c.side["blowup.csv"] = csv.str();
  p["blowup"] = rj;
  const ZeroWitness zw = hull_zero_witness(cfg.r2, cfg.r1);
  p["hull_zero_witness"] = {{"x", to_json(zw.x)}, {"y", to_json(zw.y)}, {"f", to_json(zw.f)}};
  const bool ok = identity <= 1e-10 && bound_violations == 0 && sep.distinguishes && blowup_ok && zw.f == Complex(0.0, 0.0);
  p["evidence_consistent"] = ok;
  return {ok ? ExitCode::Pass : ExitCode::Fail,
          "the cover is separated by a single-valued branch and 1/f is unbounded on the finite tube",
          ok ? "EvidenceConsistent" : "EvidenceInconsistent", p};
}

Result run_monodromy(const Context& c) {
  const CoverConfig cfg = parse_cover(c);
  const double r = c.real("radius", std::sqrt(cfg.r1 * (std::isfinite(cfg.r2) ? cfg.r2 : 4.0 * cfg.r1)));
  const int turns = static_cast<int>(c.integer("turns", 20));
  const MonodromyEvidence m = monodromy_sheets(cfg, r, turns);
  std::ostringstream csv;
  csv << "turns,gap\n";
  json offsets = json::array();
  for (std::size_t k = 0; k < m.gaps.size(); ++k) {
    csv << k + 1 << ',' << fmt(m.gaps[k]) << '\n';
    offsets.push_back(to_json(m.offsets[k]));
  }
  c.side["monodromy.csv"] = csv.str();
  json p;
  p["cover"] = cover_json(cfg);
  p["radius"] = r;
  p["turns"] = turns;
  p["sheets"] = m.sheets ? json(*m.sheets) : json("NeverReturns");
  p["gaps"] = m.gaps;
  p["offsets"] = offsets;
  p["steps"] = m.steps;
  ExitCode exit = ExitCode::Pass;
  if (c.cfg.has(kScenario, "expect")) {
    const std::string e = c.cfg.get(kScenario, "expect");
    const bool match = (e == "never") ? !m.sheets : (m.sheets && *m.sheets == parse_int(e));
    p["expectation_met"] = match;
    if (!match) exit = ExitCode::Fail;
  }
  return {exit, "the cover is sheeted with the monodromy of f^(1/nu), or log f for the infinite cover",
          m.sheets ? "Returns" : "NeverReturns", p};
}

Result run_jp(const Context& c) {
  JpShellConfig cfg;
  if (c.cfg.has("jp", "fixture")) {
    cfg = fixture_jp(c.cfg.get("jp", "fixture"));
  } else {
    cfg.r1 = parse_real(c.cfg.get("jp", "r1"));
    cfg.r2 = parse_real(c.cfg.get("jp", "r2"));
  }
  const auto samples = static_cast<std::size_t>(c.integer("samples", 10000));
  const bool nonvanishing = parse_bool(c.opt("check_nonvanishing", "true"));
  const JpReport r = jp_consistency_suite(cfg, samples, c.need_seed(), nonvanishing);
  json p;
  p["r1"] = cfg.r1;
  p["r2"] = cfg.r2;
  p["samples"] = r.samples;
  p["vacuous"] = r.vacuous;
  p["inclusion"] = {{"passes", r.inclusionPasses}, {"failures", r.inclusionFailures}};
  if (r.nonvanishingChecked) {
    p["nonvanishing"] = {{"passes", r.nonvanishingPasses}, {"samples", r.nonvanishingSamples}, {"min_abs_f", r.minAbsF}};
  }
  p["hull_zero_witness"] = {{"x", to_json(r.witnessX)},
                            {"y", to_json(r.witnessY)},
                            {"f", to_json(r.witnessF)},
                            {"in_hull_tube", r.witnessInHullTube}};
  const bool ok = r.inclusionPasses && r.nonvanishingPasses;
  return {ok ? ExitCode::Pass : ExitCode::Fail,
          "the finite shell tube lies in the envelope formula set, which is not the hull tube",
          ok ? "Consistent" : "Inconsistent", p};
}

struct Schema {
  std::vector<std::string> keys;
  std::vector<std::string> sections;
};

const std::vector<std::string> kDomainKeys = {"type", "center", "radius", "inner", "outer", "lo",
                                              "hi", "halfspace", "part", "name", "sheets"};

// Unknown keys and sections are errors, so a misspelt key cannot silently
// fall back to its default.
void check_schema(const Config& cfg, const std::string& kind) {
  static const std::map<std::string, Schema> schemas = {
      {"bochner", {{"samples"}, {"base"}}},
      {"psh-check", {{"samples", "sampler", "tol", "directions", "step", "mode"}, {"base", "fiber"}}},
      {"abe", {{"trials", "probe"}, {"base"}}},
      {"gentube", {{"trials", "y0", "rho0", "tol", "psh_samples"}, {"a1", "a2"}}},
      {"cover", {{"samples", "epsilons"}, {"cover"}}},
      {"monodromy", {{"radius", "turns", "expect"}, {"cover"}}},
      {"jp-check", {{"samples", "check_nonvanishing"}, {"jp"}}},
  };
  const auto it = schemas.find(kind);
  if (it == schemas.end()) throw Error(ErrorKind::ConfigError, "unknown scenario kind '" + kind + "'");
  auto listed = [](const std::vector<std::string>& v, const std::string& k) {
    return std::find(v.begin(), v.end(), k) != v.end();
  };
  for (const Config::Entry& e : cfg.entries(kScenario)) {
    if (e.key != "kind" && e.key != "seed" && !listed(it->second.keys, e.key)) {
      throw Error(ErrorKind::ConfigError,
                  "line " + std::to_string(e.line) + ": key '" + e.key + "' is not used by " + kind + " scenarios");
    }
  }
  for (const std::string& sec : cfg.sections()) {
    if (sec == kScenario) continue;
    if (!listed(it->second.sections, sec)) {
      throw Error(ErrorKind::ConfigError, "section [" + sec + "] is not used by " + kind + " scenarios");
    }
    const std::vector<std::string> keys = sec == "cover" ? std::vector<std::string>{"fixture", "sheets", "r1", "r2", "fiber_radius"}
                                          : sec == "jp"  ? std::vector<std::string>{"fixture", "r1", "r2"}
                                                         : kDomainKeys;
    for (const Config::Entry& e : cfg.entries(sec)) {
      if (!listed(keys, e.key)) {
        throw Error(ErrorKind::ConfigError,
                    "line " + std::to_string(e.line) + ": key '" + e.key + "' is not valid in [" + sec + "]");
      }
    }
  }
}

}  // namespace

ScenarioOutcome run_scenario(const std::string& configText, std::optional<std::uint64_t> seed) {
  ScenarioOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Config cfg = Config::parse(configText);
    if (!seed && cfg.has(kScenario, "seed")) seed = parse_u64(cfg.get(kScenario, "seed"));
    const Context ctx{cfg, seed, out.sideFiles};
    const std::string kind = cfg.get(kScenario, "kind");
    check_schema(cfg, kind);
    Result r;
    if (kind == "bochner") r = run_bochner(ctx);
    else if (kind == "psh-check") r = run_psh(ctx);
    else if (kind == "abe") r = run_abe(ctx);
    else if (kind == "gentube") r = run_gentube(ctx);
    else if (kind == "cover") r = run_cover(ctx);
    else if (kind == "monodromy") r = run_monodromy(ctx);
    else if (kind == "jp-check") r = run_jp(ctx);
    else throw Error(ErrorKind::ConfigError, "unknown scenario kind '" + kind + "'");
    json rep;
    rep["tool_version"] = kToolVersion;
    rep["kind"] = kind;
    rep["seed"] = seed ? json(*seed) : json(nullptr);
    rep["config"] = echo(cfg);
    rep["claim"] = r.claim;
    rep["verdict"] = r.verdict;
    rep["exit_code"] = static_cast<int>(r.exit);
    rep["result"] = r.payload;
    rep["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report = rep.dump(2) + "\n";
    out.exit = r.exit;
  } catch (const std::exception& e) {
    out.exit = ExitCode::Error;
    out.diagnostic = e.what();
    out.report.clear();
    out.sideFiles.clear();
  }
  return out;
}

ExitCode run_scenario_file(const std::filesystem::path& config, const std::filesystem::path& outDir,
                           std::optional<std::uint64_t> seed, std::string& diagnostic) {
  std::ifstream in(config);
  if (!in) {
    diagnostic = "cannot read " + config.string();
    return ExitCode::Error;
  }
  std::stringstream text;
  text << in.rdbuf();
  const ScenarioOutcome out = run_scenario(text.str(), seed);
  diagnostic = out.diagnostic;
  if (out.exit == ExitCode::Error) return out.exit;
  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(outDir / name, std::ios::binary);
    f << body;
    if (!f) {
      diagnostic = "cannot write " + (outDir / name).string();
      return false;
    }
    return true;
  };
  if (!write("report.json", out.report)) return ExitCode::Error;
  for (const auto& [name, body] : out.sideFiles) {
    if (!write(name, body)) return ExitCode::Error;
  }
  return out.exit;
}

std::string comparable_report(const std::string& report) {
  if (report.empty()) return {};
  json j = json::parse(report);
  j.erase("wall_time_s");
  return j.dump(2);
}

std::string fixture_listing() {
  std::ostringstream os;
  for (const FixtureInfo& f : fixture_catalog()) os << f.name << "  " << f.description << '\n';
  return os.str();
}

}  // namespace tubes
