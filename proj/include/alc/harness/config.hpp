#pragma once

// Experiment configuration: flat `key = value` text with `#` comments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alc/error.hpp"
#include "alc/numfmt.hpp"

namespace alc {

enum class ExperimentKind { dim, nsp, recover, kron, collide, interleave };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::dim: return "dim";
    case ExperimentKind::nsp: return "nsp";
    case ExperimentKind::recover: return "recover";
    case ExperimentKind::kron: return "kron";
    case ExperimentKind::collide: return "collide";
    case ExperimentKind::interleave: return "interleave";
  }
  return "unknown";
}

inline std::optional<ExperimentKind> parse_kind(std::string_view s) {
  for (auto k : {ExperimentKind::dim, ExperimentKind::nsp, ExperimentKind::recover, ExperimentKind::kron,
                 ExperimentKind::collide, ExperimentKind::interleave})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace detail {

enum class KeyType { integer, real, text, boolean };

struct KeySpec {
  std::string name;
  KeyType type;
  std::optional<std::string> fallback;  // default; absent + required => error
  bool required = false;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

constexpr double kBig = 1e9;

inline std::vector<KeySpec> schema(ExperimentKind kind) {
  using T = KeyType;
  std::vector<KeySpec> keys = {
      {"seed", T::integer, "0", false, 0, std::numeric_limits<double>::infinity()},
      {"output", T::text, std::nullopt, false},
  };
  auto add = [&](std::initializer_list<KeySpec> more) { keys.insert(keys.end(), more); };
  switch (kind) {
    case ExperimentKind::recover:
      add({{"m", T::integer, std::nullopt, true, 1, 64},
           {"n", T::integer, std::nullopt, true, 1, 64},
           {"s", T::integer, std::nullopt, true, 1, 64},
           {"trials", T::integer, "100", false, 1, kBig},
           {"tol", T::real, "1e-09", false, 0, 1},
           {"starts", T::integer, "20", false, 1, 10000},
           {"expect", T::text, "recovery", false}});
      break;
    case ExperimentKind::kron:
      add({{"k", T::integer, std::nullopt, true, 1, 64},
           {"l", T::integer, std::nullopt, true, 1, 64},
           {"r", T::integer, std::nullopt, true, 1, 64},
           {"t", T::integer, std::nullopt, true, 1, 64},
           {"n", T::integer, std::nullopt, true, 1, 4096},
           {"trials", T::integer, "100", false, 1, kBig},
           {"tol", T::real, "1e-09", false, 0, 1},
           {"starts", T::integer, "20", false, 1, 10000},
           {"expect", T::text, "recovery", false},
           {"min_success", T::real, "0.95", false, 0, 1}});
      break;
    case ExperimentKind::collide:
      add({{"k", T::integer, std::nullopt, true, 1, 64},
           {"l", T::integer, std::nullopt, true, 1, 64},
           {"r", T::integer, std::nullopt, true, 1, 64},
           {"t", T::integer, std::nullopt, true, 1, 64},
           {"n", T::integer, std::nullopt, true, 1, 4096},
           {"starts", T::integer, "100", false, 1, 100000},
           {"expect_collision", T::boolean, std::nullopt, false}});
      break;
    case ExperimentKind::nsp:
      add({{"m", T::integer, std::nullopt, true, 1, 4096},
           {"n", T::integer, std::nullopt, true, 1, 4096},
           {"s", T::integer, std::nullopt, true, 1, 4096},
           {"trials", T::integer, "100000", false, 1, kBig},
           {"min_gain_floor", T::real, "0", false, 0, kBig}});
      break;
    case ExperimentKind::dim:
      add({{"set", T::text, std::nullopt, true},
           {"size", T::integer, std::nullopt, true, 1, 1e8},
           {"ambient", T::integer, "1", false, 1, 64},
           {"scales", T::text, "4:12", false},
           {"scale_base", T::real, "2", false, 1.0000001, 1e3},
           {"slope_min", T::real, std::nullopt, false},
           {"slope_max", T::real, std::nullopt, false}});
      break;
    case ExperimentKind::interleave:
      add({{"p", T::integer, std::nullopt, true, 1, 26},
           {"trials", T::integer, "100000", false, 1, kBig}});
      break;
  }
  return keys;
}

inline std::string format_bound(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return format_double(v);
}

}  // namespace detail

/// Validated experiment description. Values are stored as canonical text;
/// every schema key with a default is present after parsing.
class ExperimentConfig {
 public:
  ExperimentKind kind = ExperimentKind::recover;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) > 0; }

  std::int64_t integer(const std::string& key) const { return parse_int(at(key)); }
  double real(const std::string& key) const { return parse_double(at(key)); }
  const std::string& text(const std::string& key) const { return at(key); }
  bool boolean(const std::string& key) const { return at(key) == "true"; }

  std::uint64_t master_seed() const { return parse_u64(at("seed")); }
  std::string output_path() const { return has("output") ? at("output") : std::string{}; }

  void set(const std::string& key, std::string value) { params[key] = std::move(value); }

  bool operator==(const ExperimentConfig&) const = default;

 private:
  const std::string& at(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw config_error("missing config key `" + key + "`");
    return it->second;
  }
};

namespace detail {

inline std::string canonical(const KeySpec& spec, const std::string& raw) {
  const std::string v(trim(raw));
  auto out_of_range = [&](double x) {
    return config_error("`" + spec.name + "` = " + v + " is out of range [" + format_bound(spec.lo) + ", " +
                        format_bound(spec.hi) + "]");
  };
  switch (spec.type) {
    case KeyType::integer: {
      if (spec.name == "seed") {
        try {
          return std::to_string(parse_u64(v));
        } catch (const invalid_argument&) {
          throw config_error("`seed` must be an unsigned 64-bit integer, got '" + v + "'");
        }
      }
      std::int64_t x;
      try {
        x = parse_int(v);
      } catch (const invalid_argument&) {
        throw config_error("`" + spec.name + "` must be an integer, got '" + v + "'");
      }
      if (static_cast<double>(x) < spec.lo || static_cast<double>(x) > spec.hi) throw out_of_range(static_cast<double>(x));
      return std::to_string(x);
    }
    case KeyType::real: {
      double x;
      try {
        x = parse_double(v);
      } catch (const invalid_argument&) {
        throw config_error("`" + spec.name + "` must be a number, got '" + v + "'");
      }
      if (!std::isfinite(x) || x < spec.lo || x > spec.hi) throw out_of_range(x);
      return format_double(x);
    }
    case KeyType::boolean:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      throw config_error("`" + spec.name + "` must be true or false, got '" + v + "'");
    case KeyType::text:
      if (v.empty()) throw config_error("`" + spec.name + "` must not be empty");
      return v;
  }
  return v;
}

inline void require_le(const ExperimentConfig& c, const std::string& small, const std::string& big,
                       std::int64_t offset = 0) {
  if (c.integer(small) > c.integer(big) + offset)
    throw config_error("`" + small + "` = " + c.text(small) + " is out of range [1, " +
                       std::to_string(c.integer(big) + offset) + "] (must not exceed `" + big + "`" +
                       (offset ? " + " + std::to_string(offset) : std::string{}) + ")");
}

/// Parses "a:b" into an integer exponent range.
inline std::pair<int, int> parse_scale_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw config_error("`scales` must look like 'jmin:jmax', got '" + text + "'");
  try {
    const auto lo = static_cast<int>(parse_int(text.substr(0, colon)));
    const auto hi = static_cast<int>(parse_int(text.substr(colon + 1)));
    if (hi - lo < 2) throw config_error("`scales` must span at least 3 exponents, got '" + text + "'");
    if (lo < -60 || hi > 60) throw config_error("`scales` exponents must lie in [-60, 60], got '" + text + "'");
    return {lo, hi};
  } catch (const invalid_argument&) {
    throw config_error("`scales` must look like 'jmin:jmax', got '" + text + "'");
  }
}

inline void check_expect(const ExperimentConfig& c) {
  const auto& e = c.text("expect");
  if (e != "recovery" && e != "ambiguity")
    throw config_error("`expect` must be recovery or ambiguity; got '" + e + "'");
}

inline void cross_validate(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::recover:
      require_le(c, "n", "m");
      require_le(c, "s", "n");
      check_expect(c);
      break;
    case ExperimentKind::kron:
      check_expect(c);
      require_le(c, "r", "k");
      require_le(c, "t", "l");
      if (c.integer("n") > c.integer("k") * c.integer("l"))
        throw config_error("`n` = " + c.text("n") + " is out of range [1, k*l]");
      if (c.integer("n") < c.integer("r") + c.integer("t"))
        throw config_error("`n` = " + c.text("n") + " is out of range [r+t, k*l] for the decoder");
      break;
    case ExperimentKind::collide:
      require_le(c, "r", "k");
      require_le(c, "t", "l");
      if (c.integer("n") > c.integer("k") * c.integer("l"))
        throw config_error("`n` = " + c.text("n") + " is out of range [1, k*l]");
      break;
    case ExperimentKind::nsp:
      require_le(c, "n", "m");
      require_le(c, "s", "m");
      break;
    case ExperimentKind::dim: {
      const auto& set = c.text("set");
      if (set != "setf" && set != "cantor" && set != "segment" && set != "square" && set != "cube")
        throw config_error("`set` must be one of setf, cantor, segment, square, cube; got '" + set + "'");
      if (set == "cantor" && c.integer("size") > 26)
        throw config_error("`size` = " + c.text("size") + " is out of range [1, 26] for set = cantor");
      if (set == "square" && c.integer("ambient") < 2)
        throw config_error("`ambient` = " + c.text("ambient") + " is out of range [2, 64] for set = square");
      parse_scale_range(c.text("scales"));
      break;
    }
    case ExperimentKind::interleave:
      break;
  }
}

}  // namespace detail

/// Parses config text. `kind` comes from the text's `kind` key or, if absent,
/// from `default_kind`; a conflict between the two is an error.
inline ExperimentConfig parse_config(std::string_view text,
                                     std::optional<ExperimentKind> default_kind = std::nullopt) {
  std::map<std::string, std::string> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected `key = value`");
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
    if (raw.count(key)) throw config_error("duplicate key `" + key + "`");
    raw[key] = value;
  }

  ExperimentConfig cfg;
  if (auto it = raw.find("kind"); it != raw.end()) {
    auto k = parse_kind(it->second);
    if (!k) throw config_error("unknown kind '" + it->second + "'");
    if (default_kind && *default_kind != *k)
      throw config_error("config kind '" + it->second + "' does not match command '" + to_string(*default_kind) + "'");
    cfg.kind = *k;
    raw.erase(it);
  } else if (default_kind) {
    cfg.kind = *default_kind;
  } else {
    throw config_error("missing config key `kind`");
  }

  const auto keys = detail::schema(cfg.kind);
  std::vector<std::string> unknown;
  for (const auto& [key, value] : raw)
    if (std::none_of(keys.begin(), keys.end(), [&](const auto& s) { return s.name == key; }))
      unknown.push_back(key);
  if (!unknown.empty()) {
    std::string msg = "unknown config keys for kind '" + to_string(cfg.kind) + "':";
    for (const auto& k : unknown) msg += " `" + k + "`";
    throw config_error(msg);
  }
  for (const auto& spec : keys) {
    if (auto it = raw.find(spec.name); it != raw.end()) {
      cfg.params[spec.name] = detail::canonical(spec, it->second);
    } else if (spec.fallback) {
      cfg.params[spec.name] = detail::canonical(spec, *spec.fallback);
    } else if (spec.required) {
      throw config_error("missing required key `" + spec.name + "` for kind '" + to_string(cfg.kind) + "'");
    }
  }
  detail::cross_validate(cfg);
  return cfg;
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out = "kind = " + to_string(cfg.kind) + "\n";
  for (const auto& [key, value] : cfg.params) out += key + " = " + value + "\n";
  return out;
}

}  // namespace alc
