#include "tubes/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace tubes {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::vector<Config::Entry> kNoEntries;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

Halfspace parse_halfspace(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw Error(ErrorKind::ConfigError, "halfspace needs 'n1,n2,... : b', got '" + text + "'");
  return {parse_vector(parts[0]), parse_real(parts[1])};
}

HalfspacePolytope parse_part(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("box", 0) == 0) {
    const auto parts = split(t.substr(3), ':');
    if (parts.size() != 2) throw Error(ErrorKind::ConfigError, "box part needs 'box lo : hi'");
    return HalfspacePolytope::box(parse_vector(parts[0]), parse_vector(parts[1]));
  }
  if (t.rfind("halfspaces", 0) == 0) {
    std::vector<Halfspace> hs;
    for (const std::string& h : split(t.substr(10), ';')) {
      if (!h.empty()) hs.push_back(parse_halfspace(h));
    }
    if (hs.empty()) throw Error(ErrorKind::ConfigError, "empty halfspaces part");
    return HalfspacePolytope(hs.front().normal.size(), hs);
  }
  throw Error(ErrorKind::ConfigError, "union part must start with 'box' or 'halfspaces': '" + t + "'");
}

Shell parse_shell(const Config& cfg, const std::string& sec, long dim_default) {
  const Vec c = cfg.has(sec, "center") ? parse_vector(cfg.get(sec, "center")) : Vec::Zero(dim_default);
  return Shell(c, parse_real(cfg.get(sec, "inner")), parse_real(cfg.get(sec, "outer")));
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::string section = "scenario";
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  auto touch = [&](const std::string& s) {
    if (!c.sections_.count(s)) {
      c.sections_[s];
      c.order_.push_back(s);
    }
  };
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      touch(section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": empty key");
    touch(section);
    c.sections_[section].push_back({key, trim(s.substr(eq + 1)), line});
  }
  return c;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

bool Config::has(const std::string& section, const std::string& key) const {
  for (const Entry& e : entries(section)) {
    if (e.key == key) return true;
  }
  return false;
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
  const std::vector<Entry>& es = entries(section);
  for (auto it = es.rbegin(); it != es.rend(); ++it) {
    if (it->key == key) return it->value;
  }
  throw Error(ErrorKind::ConfigError, "missing key '" + key + "' in [" + section + "]");
}

std::string Config::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

std::vector<std::string> Config::get_all(const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  for (const Entry& e : entries(section)) {
    if (e.key == key) out.push_back(e.value);
  }
  return out;
}

const std::vector<Config::Entry>& Config::entries(const std::string& section) const {
  auto it = sections_.find(section);
  return it == sections_.end() ? kNoEntries : it->second;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || std::isnan(v)) {
    throw Error(ErrorKind::ConfigError, "not a number: '" + text + "'");
  }
  return v;
}

long parse_int(const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw Error(ErrorKind::ConfigError, "not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw Error(ErrorKind::ConfigError, "not an unsigned integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw Error(ErrorKind::ConfigError, "not a boolean: '" + text + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::string t = text;
  for (char& ch : t) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream is(t);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_real(tok));
  return out;
}

Vec parse_vector(const std::string& text) {
  const std::vector<double> v = parse_list(text);
  if (v.empty()) throw Error(ErrorKind::ConfigError, "empty vector");
  if (v.size() > 4) throw Error(ErrorKind::DimensionMismatch, "dimension above 4: '" + text + "'");
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

RealBaseDomain parse_real_domain(const Config& cfg, const std::string& sec) {
  if (!cfg.has_section(sec)) throw Error(ErrorKind::ConfigError, "missing section [" + sec + "]");
  const std::string type = cfg.get(sec, "type");
  if (type == "ball") return Ball(parse_vector(cfg.get(sec, "center")), parse_real(cfg.get(sec, "radius")));
  if (type == "shell") return parse_shell(cfg, sec, 2);
  if (type == "box") return HalfspacePolytope::box(parse_vector(cfg.get(sec, "lo")), parse_vector(cfg.get(sec, "hi")));
  if (type == "polytope") {
    std::vector<Halfspace> hs;
    for (const std::string& h : cfg.get_all(sec, "halfspace")) hs.push_back(parse_halfspace(h));
    if (hs.empty()) throw Error(ErrorKind::ConfigError, "polytope needs at least one halfspace");
    for (const Halfspace& h : hs) {
      if (h.normal.size() != hs.front().normal.size()) throw Error(ErrorKind::DimensionMismatch, "halfspace dimensions differ");
    }
    return HalfspacePolytope(hs.front().normal.size(), hs);
  }
  if (type == "union") {
    std::vector<HalfspacePolytope> parts;
    for (const std::string& p : cfg.get_all(sec, "part")) parts.push_back(parse_part(p));
    if (parts.empty()) throw Error(ErrorKind::ConfigError, "union needs parts");
    return PolytopeUnion(std::move(parts));
  }
  if (type == "fixture") return fixture_base(cfg.get(sec, "name"));
  throw Error(ErrorKind::ConfigError, "unknown real domain type '" + type + "' in [" + sec + "]");
}

SheetedRealDomain parse_domain(const Config& cfg, const std::string& sec) {
  if (!cfg.has_section(sec)) throw Error(ErrorKind::ConfigError, "missing section [" + sec + "]");
  const std::string type = cfg.get(sec, "type");
  if (type == "cover") return FiniteCover(parse_shell(cfg, sec, 2), static_cast<int>(parse_int(cfg.get(sec, "sheets"))));
  if (type == "universal-cover") return UniversalCover(parse_shell(cfg, sec, 2));
  if (type == "full") throw Error(ErrorKind::ConfigError, "[" + sec + "]: 'full' is only allowed as a fiber");
  if (type == "fixture" && !is_base_fixture(cfg.get(sec, "name"))) {
    const CoverConfig c = fixture_cover(cfg.get(sec, "name"));
    const Shell base(Vec::Zero(2), c.r1, c.r2);
    if (c.infinite()) return UniversalCover(base);
    return FiniteCover(base, *c.sheets);
  }
  return Univalent{parse_real_domain(cfg, sec)};
}

std::optional<SheetedRealDomain> parse_fiber(const Config& cfg, const std::string& sec) {
  if (!cfg.has_section(sec) || cfg.get(sec, "type") == "full") return std::nullopt;
  return parse_domain(cfg, sec);
}

}  // namespace tubes
