#include "evreach/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "evreach/errors.hpp"

namespace evreach {

double TomlValue::as_number() const {
  if (type == Type::integer) return static_cast<double>(integer);
  if (type == Type::real) return real;
  throw ConfigError("expected a number");
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

TomlValue parse_scalar(const std::string& raw, std::size_t line);

TomlValue parse_value(const std::string& raw, std::size_t line) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') fail(line, "unterminated array");
    TomlValue v;
    v.type = TomlValue::Type::array;
    std::string inner = raw.substr(1, raw.size() - 2);
    // Split on commas outside strings.
    std::vector<std::string> parts;
    std::string cur;
    bool in_string = false;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      const char c = inner[i];
      if (c == '"' && (i == 0 || inner[i - 1] != '\\')) in_string = !in_string;
      if (c == ',' && !in_string) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    for (const auto& p : parts) {
      const std::string t = trim(p);
      if (t.empty()) fail(line, "empty array element");
      v.array.push_back(parse_scalar(t, line));
    }
    return v;
  }
  return parse_scalar(raw, line);
}

TomlValue parse_scalar(const std::string& raw, std::size_t line) {
  TomlValue v;
  if (raw.size() >= 2 && raw.front() == '"') {
    if (raw.back() != '"' || raw.size() < 2) fail(line, "unterminated string");
    v.type = TomlValue::Type::string;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\') {
        if (i + 2 >= raw.size() + 1) fail(line, "dangling escape");
        const char esc = raw[++i];
        switch (esc) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(line, std::string("unknown escape \\") + esc);
        }
      } else if (c == '"') {
        fail(line, "unescaped quote inside string");
      }
      v.str.push_back(c);
    }
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.type = TomlValue::Type::boolean;
    v.boolean = raw == "true";
    return v;
  }
  // Integer first, then float.
  {
    std::int64_t iv = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto res = std::from_chars(first, last, iv);
    if (res.ec == std::errc() && res.ptr == last) {
      v.type = TomlValue::Type::integer;
      v.integer = iv;
      return v;
    }
  }
  {
    double dv = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto res = std::from_chars(first, last, dv);
    if (res.ec == std::errc() && res.ptr == last && std::isfinite(dv)) {
      v.type = TomlValue::Type::real;
      v.real = dv;
      return v;
    }
  }
  fail(line, "cannot parse value `" + raw + "`");
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable root;
  TomlTable* current = &root;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() >= 4 && line[1] == '[';
      const std::string close = is_array ? "]]" : "]";
      if (line.substr(line.size() - close.size()) != close) {
        fail(lineno, "malformed section header `" + line + "`");
      }
      const std::string name = trim(line.substr(
          is_array ? 2 : 1, line.size() - close.size() - (is_array ? 2 : 1)));
      if (!valid_key(name)) fail(lineno, "invalid section name `" + name + "`");
      if (is_array) {
        current = &root.table_arrays[name].emplace_back();
      } else {
        if (root.tables.contains(name)) {
          fail(lineno, "duplicate section [" + name + "]");
        }
        current = &root.tables[name];
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(lineno, "expected `key = value`, got `" + line + "`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(lineno, "invalid key `" + key + "`");
    if (value.empty()) fail(lineno, "missing value for `" + key + "`");
    if (current->values.contains(key)) {
      fail(lineno, "duplicate key `" + key + "`");
    }
    current->values.emplace(key, parse_value(value, lineno));
  }
  return root;
}

namespace {

class TableReader {
 public:
  TableReader(const TomlTable& table, std::string context)
      : table_(table), context_(std::move(context)) {}

  std::string str(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::string) {
      throw ConfigError(context_ + "." + key + " must be a string");
    }
    return v.str;
  }

  std::string str_or(const std::string& key, const std::string& fallback) {
    return has(key) ? str(key) : fallback;
  }

  double number(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::integer && v.type != TomlValue::Type::real) {
      throw ConfigError(context_ + "." + key + " must be a number");
    }
    return v.as_number();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    const TomlValue& v = require(key);
    if (v.type != TomlValue::Type::integer) {
      throw ConfigError(context_ + "." + key + " must be an integer");
    }
    return v.integer;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : fallback;
  }

  bool has(const std::string& key) const {
    const bool present = table_.values.contains(key);
    if (present) seen_.insert(key);
    return present;
  }

  // Every key must have been consumed; catches typos in hand-edited files.
  void finish() {
    for (const auto& [key, _] : table_.values) {
      if (!seen_.contains(key)) {
        throw ConfigError(context_ + ": unknown key `" + key + "`");
      }
    }
  }

 private:
  const TomlValue& require(const std::string& key) {
    auto it = table_.values.find(key);
    if (it == table_.values.end()) {
      throw ConfigError(context_ + ": missing required key `" + key + "`");
    }
    seen_.insert(key);
    return it->second;
  }

  const TomlTable& table_;
  std::string context_;
  mutable std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

bool safe_label(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

const VehicleSpec& RunConfig::vehicle_by_name(const std::string& name) const {
  for (const auto& v : vehicles) {
    if (v.name == name) return v;
  }
  throw ConfigError("vehicle `" + name + "` is not defined in the config");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const TomlTable root = parse_toml(buffer.str());

  for (const auto& [name, _] : root.tables) {
    static const std::set<std::string> known = {"paths", "study_region",
                                                "tolerances", "engine"};
    if (!known.contains(name)) {
      throw ConfigError("unknown config section [" + name + "]");
    }
  }
  for (const auto& [name, _] : root.table_arrays) {
    static const std::set<std::string> known = {"vehicle", "charger",
                                                "scenario"};
    if (!known.contains(name)) {
      throw ConfigError("unknown config section [[" + name + "]]");
    }
  }
  if (!root.values.empty()) {
    throw ConfigError("top-level key `" + root.values.begin()->first +
                      "` outside any section");
  }

  RunConfig config;
  const std::filesystem::path base = path.has_parent_path()
                                         ? path.parent_path()
                                         : std::filesystem::path(".");

  {
    auto it = root.tables.find("paths");
    if (it == root.tables.end()) {
      throw ConfigError("config must contain a [paths] section");
    }
    TableReader r(it->second, "paths");
    config.communities_path = resolve(base, r.str("communities"));
    config.roads_path = resolve(base, r.str("roads"));
    config.output_dir = resolve(base, r.str_or("output_dir", "out"));
    r.finish();
  }
  if (auto it = root.tables.find("study_region"); it != root.tables.end()) {
    TableReader r(it->second, "study_region");
    config.region.min_latitude = r.number_or("min_latitude", -28.0);
    r.finish();
    if (config.region.min_latitude < -90.0 || config.region.min_latitude > 90.0) {
      throw ConfigError("study_region.min_latitude must be in [-90, 90]");
    }
  }
  if (auto it = root.tables.find("tolerances"); it != root.tables.end()) {
    TableReader r(it->second, "tolerances");
    config.merge_tolerance_m = r.number_or("merge_tolerance_m", 1.0);
    config.max_snap_km = r.number_or("max_snap_km", 5.0);
    r.finish();
    if (config.merge_tolerance_m < 0.0) {
      throw ConfigError("tolerances.merge_tolerance_m must be >= 0");
    }
    if (config.max_snap_km <= 0.0) {
      throw ConfigError("tolerances.max_snap_km must be > 0");
    }
  }
  if (auto it = root.tables.find("engine"); it != root.tables.end()) {
    TableReader r(it->second, "engine");
    config.workers = static_cast<int>(r.integer_or("workers", 0));
    config.oracle_cap = static_cast<int>(r.integer_or("oracle_cap", 500));
    const std::string mode = r.str_or("load_mode", "strict");
    r.finish();
    if (mode == "strict") {
      config.load_mode = LoadMode::strict;
    } else if (mode == "lenient") {
      config.load_mode = LoadMode::lenient;
    } else {
      throw ConfigError("engine.load_mode must be `strict` or `lenient`");
    }
    if (config.workers < 0) throw ConfigError("engine.workers must be >= 0");
    if (config.oracle_cap < 1) throw ConfigError("engine.oracle_cap must be >= 1");
  }

  if (auto it = root.table_arrays.find("vehicle"); it != root.table_arrays.end()) {
    for (const auto& t : it->second) {
      TableReader r(t, "vehicle");
      VehicleSpec v;
      v.name = r.str("name");
      v.range_km = r.number("range_km");
      v.battery_kwh = r.number("battery_kwh");
      v.onboard_ac_cap_kw = r.number("onboard_ac_cap_kw");
      r.finish();
      if (v.range_km <= 0 || v.battery_kwh <= 0 || v.onboard_ac_cap_kw <= 0) {
        throw ConfigError("vehicle `" + v.name + "`: all fields must be positive");
      }
      config.vehicles.push_back(std::move(v));
    }
  }
  {
    std::set<std::string> names;
    for (const auto& v : config.vehicles) {
      if (!names.insert(v.name).second) {
        throw ConfigError("duplicate vehicle `" + v.name + "`");
      }
    }
  }

  if (auto it = root.table_arrays.find("charger"); it != root.table_arrays.end()) {
    for (const auto& t : it->second) {
      TableReader r(t, "charger");
      ChargerLevel c;
      c.label = r.str("label");
      c.power_kw = r.number("power_kw");
      const std::string coupling = r.str("coupling");
      r.finish();
      if (coupling == "AC") {
        c.coupling = Coupling::ac;
      } else if (coupling == "DC") {
        c.coupling = Coupling::dc;
      } else {
        throw ConfigError("charger `" + c.label + "`: coupling must be AC or DC");
      }
      if (c.power_kw <= 0) {
        throw ConfigError("charger `" + c.label + "`: power_kw must be positive");
      }
      if (c.label.rfind("L3", 0) == 0 && c.coupling != Coupling::dc) {
        throw ConfigError("charger `" + c.label + "`: level 3 charging is DC");
      }
      config.chargers.push_back(std::move(c));
    }
  } else {
    config.chargers = default_charger_levels();
  }
  {
    std::set<std::string> labels;
    for (const auto& c : config.chargers) {
      if (!labels.insert(c.label).second) {
        throw ConfigError("duplicate charger label `" + c.label + "`");
      }
    }
  }

  auto it = root.table_arrays.find("scenario");
  if (it == root.table_arrays.end() || it->second.empty()) {
    throw ConfigError("config must define at least one [[scenario]]");
  }
  std::set<std::string> labels;
  for (const auto& t : it->second) {
    TableReader r(t, "scenario");
    ScenarioConfig s;
    s.label = r.str("label");
    s.hub_population_threshold = r.integer("hub_population_threshold");
    const std::string vehicle_name = r.str("vehicle");
    s.derate_factor = r.number_or("derate_factor", 1.0);
    s.max_stop_bucket = static_cast<int>(r.integer_or("max_stop_bucket", 3));
    r.finish();
    if (!safe_label(s.label)) {
      throw ConfigError("scenario label `" + s.label +
                        "` must be non-empty [A-Za-z0-9_-]");
    }
    if (!labels.insert(s.label).second) {
      throw ConfigError("duplicate scenario label `" + s.label + "`");
    }
    if (s.hub_population_threshold < 1) {
      throw ConfigError("scenario `" + s.label + "`: threshold must be >= 1");
    }
    if (!(s.derate_factor > 0.0 && s.derate_factor <= 1.0)) {
      throw ConfigError("scenario `" + s.label + "`: derate_factor must be in (0, 1]");
    }
    if (s.max_stop_bucket < 1) {
      throw ConfigError("scenario `" + s.label + "`: max_stop_bucket must be >= 1");
    }
    s.vehicle = config.vehicle_by_name(vehicle_name);
    config.scenarios.push_back(std::move(s));
  }

  return config;
}

}  // namespace evreach
