#pragma once

#include "tubes/covers.hpp"
#include "tubes/envelope.hpp"

#include <map>
#include <string>
#include <vector>

namespace tubes {

/// Line-oriented config: `[section]` headers, `key = value` lines, `#`
/// comments. Keys may repeat; order is kept. Keys before the first header
/// belong to the "scenario" section.
class Config {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };

  static Config parse(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  /// Last value of the key; throws ConfigError when absent.
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
  const std::vector<Entry>& entries(const std::string& section) const;
  const std::vector<std::string>& sections() const { return order_; }

 private:
  std::map<std::string, std::vector<Entry>> sections_;
  std::vector<std::string> order_;
};

double parse_real(const std::string& text);
long parse_int(const std::string& text);
std::uint64_t parse_u64(const std::string& text);
bool parse_bool(const std::string& text);
/// Comma- or space-separated reals.
Vec parse_vector(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// Domain from a config section. `type` is one of ball, shell, polytope,
/// box, union, fixture, cover, universal-cover. `full` is rejected here and
/// handled by parse_fiber.
SheetedRealDomain parse_domain(const Config& cfg, const std::string& section);
RealBaseDomain parse_real_domain(const Config& cfg, const std::string& section);
/// Empty for `type = full` or a missing section.
std::optional<SheetedRealDomain> parse_fiber(const Config& cfg, const std::string& section);

struct FixtureInfo {
  std::string name;
  std::string description;
};

/// Built-in domains and parameter sets.
const std::vector<FixtureInfo>& fixture_catalog();
bool is_base_fixture(const std::string& name);
RealBaseDomain fixture_base(const std::string& name);
CoverConfig fixture_cover(const std::string& name);
JpShellConfig fixture_jp(const std::string& name);
/// The ten convex polytope fixtures.
std::vector<std::string> convex_fixture_names();

}  // namespace tubes
