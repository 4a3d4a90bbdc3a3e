#pragma once

// Configuration documents: JSON with comments, every physical quantity keyed
// with an explicit unit suffix, converted to SI on load.
//
//   frequency      _ghz _mhz _hz         -> Hz
//   temperature    _k _mk                -> K
//   rate           _2pi_mhz _rad_s       -> rad/s
//   transmission   _db (loss) _linear    -> power ratio in (0, 1]
//   gain           _db _linear           -> power ratio >= 1
//   dimensionless  (no suffix)

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "radcool/chain.hpp"
#include "radcool/format.hpp"
#include "radcool/physics.hpp"

namespace radcool {

/// Malformed document text. Carries a 1-based line and column.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : ValidationError("", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Quantity { frequency, temperature, rate, transmission, gain, dimensionless };
enum class Target { added_noise, delta_added_noise, system_noise, chain_propagate };
enum class Scale { linear, log, db };

std::string_view to_string(Target t);
std::string_view to_string(Scale s);

/// Converts `x` given in `unit` (suffix without the leading underscore) to SI.
double to_canonical(Quantity q, std::string_view unit, double x, const std::string& path);

struct AmplifierParams {
  double kappa_e = kTwoPi * 50e6;  // rad/s; noise targets depend only on the ratio
  double coupling_ratio = 1.0;
  double n_exc = 0.0;
  double gain = std::numeric_limits<double>::infinity();
};

struct LineParams {
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  double t_mxc = 0.01;
  double t_plate = 1.0;
};

enum class StageType { source, loss, amplifier, post_amp };

struct StageParams {
  StageType type = StageType::source;
  std::string label;
  double temperature = 0.0;  // source, loss
  double alpha = 1.0;        // loss
  double gain = 1.0;         // post_amp
  double added_noise = 0.0;  // post_amp
};

struct ModelParams {
  double frequency = 0.0;  // Hz
  std::optional<double> t_dev;
  std::optional<double> t_base;
  double t_src = 0.01;
  std::optional<AmplifierParams> amplifier;
  LineParams lines;
  std::vector<StageParams> chain;  // empty: canonical two-loss chain
};

struct Axis {
  std::string path;
  std::string unit;  // as written, e.g. "db", "k", "" for dimensionless
  Quantity quantity = Quantity::dimensionless;
  Scale scale = Scale::linear;
  bool explicit_values = false;
  double min = 0.0;
  double max = 0.0;
  std::int64_t points = 0;
  std::vector<double> coordinates;  // in `unit`

  /// Column name: path plus unit suffix.
  std::string name() const { return unit.empty() ? path : path + "_" + unit; }
};

struct OutputSpec {
  std::string format = "csv";
  std::string path;
};

struct SweepSpec {
  Target target = Target::system_noise;
  ModelParams params;
  std::vector<Axis> axes;
  std::optional<OutputSpec> output;
  std::string description;
  std::string config_hash;  // FNV-1a 64 of the document bytes, hex
};

SweepSpec parse_config(std::string_view text);

/// Canonical document: SI suffixes, defaults made explicit.
std::string emit_config(const SweepSpec& spec);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

/// Range and presence checks for a target; throws ValidationError(path).
void validate_params(const ModelParams& p, Target target);

/// Sets the parameter an axis addresses to the coordinate `coord` (axis unit).
void apply_coordinate(ModelParams& p, const Axis& axis, double coord);

AmplifierSpec make_amplifier(const ModelParams& p);
TransmissionPair make_lines(const ModelParams& p);
Chain make_chain(const ModelParams& p);

double evaluate_target(Target target, const ModelParams& p);

/// "1.0K", "130mK", "7.151GHz": a number followed by a unit symbol.
double parse_quantity(std::string_view text, Quantity q, const std::string& path);

// ---------------------------------------------------------------------------

inline std::string_view to_string(Target t) {
  switch (t) {
    case Target::added_noise: return "added_noise";
    case Target::delta_added_noise: return "delta_added_noise";
    case Target::system_noise: return "system_noise";
    case Target::chain_propagate: return "chain_propagate";
  }
  return "?";
}

inline std::string_view to_string(Scale s) {
  switch (s) {
    case Scale::linear: return "linear";
    case Scale::log: return "log";
    case Scale::db: return "db";
  }
  return "?";
}

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::frequency: return "frequency";
    case Quantity::temperature: return "temperature";
    case Quantity::rate: return "rate";
    case Quantity::transmission: return "transmission";
    case Quantity::gain: return "gain";
    case Quantity::dimensionless: return "dimensionless";
  }
  return "?";
}

inline std::vector<std::string_view> units_of(Quantity q) {
  switch (q) {
    case Quantity::frequency: return {"ghz", "mhz", "hz"};
    case Quantity::temperature: return {"k", "mk"};
    case Quantity::rate: return {"2pi_mhz", "rad_s"};
    case Quantity::transmission:
    case Quantity::gain: return {"db", "linear"};
    case Quantity::dimensionless: return {""};
  }
  return {};
}

inline std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

inline void check_unit(Quantity q, std::string_view unit, const std::string& path) {
  if (q == Quantity::dimensionless) {
    if (!unit.empty()) throw UnitError(path, "dimensionless field takes no unit suffix");
    return;
  }
  if (unit.empty())
    throw UnitError(path, std::string("missing unit suffix for a ") + quantity_name(q));
  for (auto u : units_of(q))
    if (u == unit) return;
  std::string allowed;
  for (auto u : units_of(q)) allowed += (allowed.empty() ? "_" : ", _") + std::string(u);
  throw UnitError(path, "'_" + std::string(unit) + "' is not a " + quantity_name(q) +
                            " unit (expected " + allowed + ")");
}

inline double get_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "must be finite");
  return x;
}

inline std::string get_string(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

struct FieldSpec {
  std::string_view name;
  Quantity quantity;
};

struct MatchedField {
  std::string_view name;
  Quantity quantity;
  std::string unit;
};

/// Splits `key` into a declared field and its unit suffix; rejects unknown keys.
inline MatchedField match_field(std::string_view key, std::initializer_list<FieldSpec> fields,
                                const std::string& path) {
  const FieldSpec* best = nullptr;
  for (const auto& f : fields) {
    const bool exact = key == f.name;
    const bool prefixed = key.size() > f.name.size() + 1 && key.substr(0, f.name.size()) == f.name &&
                          key[f.name.size()] == '_';
    if ((exact || prefixed) && (!best || f.name.size() > best->name.size())) best = &f;
  }
  if (!best) throw ValidationError(path, "unknown key");
  std::string unit = key.size() > best->name.size() ? std::string(key.substr(best->name.size() + 1)) : "";
  check_unit(best->quantity, unit, path);
  return {best->name, best->quantity, unit};
}

/// Reads every key of `obj` against `fields`, calling `set(name, si_value)`.
template <class Set>
void read_fields(const nlohmann::json& obj, const std::string& base,
                 std::initializer_list<FieldSpec> fields, std::initializer_list<std::string_view> other_keys,
                 Set&& set) {
  if (!obj.is_object()) throw ValidationError(base, "expected an object");
  std::vector<std::string_view> seen;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string path = join_path(base, it.key());
    bool other = false;
    for (auto k : other_keys) other = other || it.key() == k;
    if (other) continue;
    const auto m = match_field(it.key(), fields, path);
    for (auto s : seen)
      if (s == m.name) throw ValidationError(path, "'" + std::string(m.name) + "' given more than once");
    seen.push_back(m.name);
    set(m.name, to_canonical(m.quantity, m.unit, get_number(it.value(), path), path));
  }
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Target parse_target(const std::string& s) {
  for (Target t : {Target::added_noise, Target::delta_added_noise, Target::system_noise,
                   Target::chain_propagate})
    if (s == to_string(t)) return t;
  throw ValidationError("target",
                        "'" + s + "' is not one of added_noise, delta_added_noise, system_noise, chain_propagate");
}

inline StageType parse_stage_type(const std::string& s, const std::string& path) {
  if (s == "source") return StageType::source;
  if (s == "loss") return StageType::loss;
  if (s == "amplifier") return StageType::amplifier;
  if (s == "post_amp") return StageType::post_amp;
  throw ValidationError(path, "'" + s + "' is not one of source, loss, amplifier, post_amp");
}

inline const char* stage_type_name(StageType t) {
  switch (t) {
    case StageType::source: return "source";
    case StageType::loss: return "loss";
    case StageType::amplifier: return "amplifier";
    case StageType::post_amp: return "post_amp";
  }
  return "?";
}

struct Slot {
  Quantity quantity;
  double* value;
};

/// Resolves a canonical parameter path. Engages absent optional scalars.
inline std::optional<Slot> resolve(ModelParams& p, std::string_view path) {
  if (path == "frequency") return Slot{Quantity::frequency, &p.frequency};
  if (path == "t_src") return Slot{Quantity::temperature, &p.t_src};
  if (path == "t_dev") return Slot{Quantity::temperature, &(p.t_dev ? *p.t_dev : p.t_dev.emplace(0.0))};
  if (path == "t_base") return Slot{Quantity::temperature, &(p.t_base ? *p.t_base : p.t_base.emplace(0.0))};
  if (path.substr(0, 10) == "amplifier.") {
    if (!p.amplifier) return std::nullopt;
    const auto f = path.substr(10);
    if (f == "kappa_e") return Slot{Quantity::rate, &p.amplifier->kappa_e};
    if (f == "coupling_ratio") return Slot{Quantity::dimensionless, &p.amplifier->coupling_ratio};
    if (f == "n_exc") return Slot{Quantity::dimensionless, &p.amplifier->n_exc};
    if (f == "gain") return Slot{Quantity::gain, &p.amplifier->gain};
    return std::nullopt;
  }
  if (path.substr(0, 6) == "lines.") {
    const auto f = path.substr(6);
    if (f == "alpha1") return Slot{Quantity::transmission, &(p.lines.alpha1 ? *p.lines.alpha1 : p.lines.alpha1.emplace(1.0))};
    if (f == "alpha2") return Slot{Quantity::transmission, &(p.lines.alpha2 ? *p.lines.alpha2 : p.lines.alpha2.emplace(1.0))};
    if (f == "t_mxc") return Slot{Quantity::temperature, &p.lines.t_mxc};
    if (f == "t_plate") return Slot{Quantity::temperature, &p.lines.t_plate};
    return std::nullopt;
  }
  if (path.substr(0, 6) == "chain[") {
    const auto close = path.find(']');
    if (close == std::string_view::npos || close + 1 >= path.size() || path[close + 1] != '.')
      return std::nullopt;
    std::size_t idx = 0;
    const auto digits = path.substr(6, close - 6);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || idx >= p.chain.size())
      return std::nullopt;
    auto& st = p.chain[idx];
    const auto f = path.substr(close + 2);
    const bool thermal = st.type == StageType::source || st.type == StageType::loss;
    if (f == "temperature" && thermal) return Slot{Quantity::temperature, &st.temperature};
    if (f == "alpha" && st.type == StageType::loss) return Slot{Quantity::transmission, &st.alpha};
    if (f == "gain" && st.type == StageType::post_amp) return Slot{Quantity::gain, &st.gain};
    if (f == "added_noise" && st.type == StageType::post_amp)
      return Slot{Quantity::dimensionless, &st.added_noise};
    return std::nullopt;
  }
  return std::nullopt;
}

inline bool axis_covers(const std::vector<Axis>& axes, std::string_view path) {
  for (const auto& a : axes)
    if (a.path == path) return true;
  return false;
}

inline std::vector<StageParams> parse_chain(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("chain", "expected an array of stages");
  std::vector<StageParams> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string base = "chain[" + std::to_string(i) + "]";
    const auto& obj = j[i];
    if (!obj.is_object()) throw ValidationError(base, "expected an object");
    if (!obj.contains("type")) throw ValidationError(base + ".type", "missing");
    StageParams st;
    st.type = parse_stage_type(get_string(obj["type"], base + ".type"), base + ".type");
    if (obj.contains("label")) st.label = get_string(obj["label"], base + ".label");
    bool has_alpha = false;
    auto set = [&](std::string_view name, double v) {
      if (name == "temperature") st.temperature = v;
      else if (name == "alpha") st.alpha = v, has_alpha = true;
      else if (name == "gain") st.gain = v;
      else if (name == "added_noise") st.added_noise = v;
    };
    switch (st.type) {
      case StageType::source:
        read_fields(obj, base, {{"temperature", Quantity::temperature}}, {"type", "label"}, set);
        break;
      case StageType::loss:
        read_fields(obj, base, {{"temperature", Quantity::temperature}, {"alpha", Quantity::transmission}},
                    {"type", "label"}, set);
        if (!has_alpha) throw ValidationError(base + ".alpha", "missing");
        break;
      case StageType::amplifier:
        read_fields(obj, base, {}, {"type", "label"}, set);
        break;
      case StageType::post_amp:
        read_fields(obj, base, {{"gain", Quantity::gain}, {"added_noise", Quantity::dimensionless}},
                    {"type", "label"}, set);
        break;
    }
    out.push_back(st);
  }
  return out;
}

inline std::int64_t get_count(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline Axis parse_axis(const nlohmann::json& obj, std::size_t index, ModelParams& params) {
  const std::string base = "axes[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ValidationError(base, "expected an object");
  Axis axis;
  if (!obj.contains("path")) throw ValidationError(base + ".path", "missing");
  axis.path = get_string(obj["path"], base + ".path");
  const auto slot = resolve(params, axis.path);
  if (!slot) throw ValidationError(base + ".path", "'" + axis.path + "' does not name a configurable parameter");
  axis.quantity = slot->quantity;

  std::optional<std::string> scale_text;
  std::optional<double> min, max;
  std::optional<std::string> min_unit, max_unit, values_unit;
  const nlohmann::json* values = nullptr;
  bool has_points = false;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const std::string path = base + "." + key;
    if (key == "path") continue;
    if (key == "scale") {
      scale_text = get_string(it.value(), path);
    } else if (key == "points") {
      axis.points = get_count(it.value(), path);
      has_points = true;
    } else if (key == "unit") {
      throw UnitError(path, "give the unit as a key suffix, e.g. min_k / max_k");
    } else {
      const auto m = match_field(key, {{"min", axis.quantity}, {"max", axis.quantity}, {"values", axis.quantity}}, path);
      if (m.name == "values") {
        if (values) throw ValidationError(path, "'values' given more than once");
        values = &it.value();
        values_unit = m.unit;
      } else if (m.name == "min") {
        if (min) throw ValidationError(path, "'min' given more than once");
        min = get_number(it.value(), path);
        min_unit = m.unit;
      } else {
        if (max) throw ValidationError(path, "'max' given more than once");
        max = get_number(it.value(), path);
        max_unit = m.unit;
      }
    }
  }

  if (values) {
    if (min || max || has_points)
      throw ValidationError(base, "give either 'values' or 'min'/'max'/'points', not both");
    if (!values->is_array() || values->empty())
      throw ValidationError(base + ".values", "expected a non-empty array");
    axis.explicit_values = true;
    axis.unit = *values_unit;
    for (std::size_t k = 0; k < values->size(); ++k)
      axis.coordinates.push_back(get_number((*values)[k], base + ".values[" + std::to_string(k) + "]"));
  } else {
    if (!min) throw ValidationError(base + ".min", "missing");
    if (!max) throw ValidationError(base + ".max", "missing");
    if (!has_points) throw ValidationError(base + ".points", "missing");
    if (*min_unit != *max_unit) throw UnitError(base + ".max", "unit differs from min");
    axis.unit = *min_unit;
    if (axis.points < 2) throw ValidationError(base + ".points", "need at least 2 points");
    if (axis.points > 10'000'000) throw ValidationError(base + ".points", "too many points");
    if (!(*min < *max)) throw ValidationError(base + ".max", "must exceed min");
    axis.min = *min;
    axis.max = *max;
  }

  const bool db_unit = axis.unit == "db";
  if (scale_text) {
    if (*scale_text == "linear") axis.scale = Scale::linear;
    else if (*scale_text == "log") axis.scale = Scale::log;
    else if (*scale_text == "db") axis.scale = Scale::db;
    else throw ValidationError(base + ".scale", "'" + *scale_text + "' is not one of linear, log, db");
  } else {
    axis.scale = db_unit ? Scale::db : Scale::linear;
  }
  if (axis.scale == Scale::db && !db_unit) throw UnitError(base + ".scale", "db scale needs _db bounds");
  if (db_unit && axis.scale != Scale::db) throw ValidationError(base + ".scale", "_db bounds need scale 'db'");

  if (!axis.explicit_values) {
    const auto n = static_cast<std::size_t>(axis.points);
    axis.coordinates.resize(n);
    if (axis.scale == Scale::log) {
      if (!(axis.min > 0.0)) throw ValidationError(base + ".min", "log scale needs a positive minimum");
      const double ratio = axis.max / axis.min;
      for (std::size_t k = 0; k < n; ++k)
        axis.coordinates[k] = axis.min * std::pow(ratio, static_cast<double>(k) / static_cast<double>(n - 1));
    } else {
      const double span = axis.max - axis.min;
      for (std::size_t k = 0; k < n; ++k)
        axis.coordinates[k] = axis.min + span * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    axis.coordinates.front() = axis.min;
    axis.coordinates.back() = axis.max;
  }
  return axis;
}

inline nlohmann::ordered_json emit_stage(const StageParams& st) {
  nlohmann::ordered_json j;
  j["type"] = stage_type_name(st.type);
  if (!st.label.empty()) j["label"] = st.label;
  switch (st.type) {
    case StageType::source: j["temperature_k"] = st.temperature; break;
    case StageType::loss:
      j["alpha_linear"] = st.alpha;
      j["temperature_k"] = st.temperature;
      break;
    case StageType::amplifier: break;
    case StageType::post_amp:
      j["gain_linear"] = st.gain;
      j["added_noise"] = st.added_noise;
      break;
  }
  return j;
}

inline void check_range(double x, double lo, bool lo_open, double hi, const std::string& path,
                        const char* what) {
  const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) && x <= hi;
  if (!ok) throw ValidationError(path, what);
}

}  // namespace detail

inline double to_canonical(Quantity q, std::string_view unit, double x, const std::string& path) {
  detail::check_unit(q, unit, path);
  switch (q) {
    case Quantity::frequency:
      if (unit == "ghz") return x * 1e9;
      if (unit == "mhz") return x * 1e6;
      return x;
    case Quantity::temperature:
      return unit == "mk" ? x / 1000.0 : x;
    case Quantity::rate:
      return unit == "2pi_mhz" ? kTwoPi * x * 1e6 : x;
    case Quantity::transmission:
      return unit == "db" ? std::pow(10.0, -x / 10.0) : x;
    case Quantity::gain:
      return unit == "db" ? std::pow(10.0, x / 10.0) : x;
    case Quantity::dimensionless:
      return x;
  }
  return x;
}

inline void validate_params(const ModelParams& p, Target target) {
  using detail::check_range;
  constexpr double inf = std::numeric_limits<double>::infinity();
  check_range(p.frequency, 0.0, true, inf, "frequency", "must be a positive frequency");
  if (p.t_dev) check_range(*p.t_dev, 0.0, false, inf, "t_dev", "must be >= 0 K");
  if (p.t_base) check_range(*p.t_base, 0.0, false, inf, "t_base", "must be >= 0 K");
  check_range(p.t_src, 0.0, false, inf, "t_src", "must be >= 0 K");
  if (p.amplifier) {
    const auto& a = *p.amplifier;
    check_range(a.kappa_e, 0.0, true, inf, "amplifier.kappa_e", "must be positive");
    check_range(a.coupling_ratio, 0.0, true, 1.0, "amplifier.coupling_ratio", "must lie in (0, 1]");
    check_range(a.n_exc, 0.0, false, inf, "amplifier.n_exc", "must be >= 0");
    if (std::isnan(a.gain) || a.gain < 1.0) throw ValidationError("amplifier.gain", "must be >= 1 (0 dB)");
  }
  if (p.lines.alpha1) check_range(*p.lines.alpha1, 0.0, true, 1.0, "lines.alpha1", "must lie in (0, 1]");
  if (p.lines.alpha2) check_range(*p.lines.alpha2, 0.0, true, 1.0, "lines.alpha2", "must lie in (0, 1]");
  check_range(p.lines.t_mxc, 0.0, false, inf, "lines.t_mxc", "must be >= 0 K");
  check_range(p.lines.t_plate, 0.0, false, inf, "lines.t_plate", "must be >= 0 K");
  bool chain_has_amp = false;
  for (std::size_t i = 0; i < p.chain.size(); ++i) {
    const auto& st = p.chain[i];
    const std::string base = "chain[" + std::to_string(i) + "]";
    check_range(st.temperature, 0.0, false, inf, base + ".temperature", "must be >= 0 K");
    if (st.type == StageType::loss) check_range(st.alpha, 0.0, true, 1.0, base + ".alpha", "must lie in (0, 1]");
    if (st.type == StageType::post_amp) {
      if (std::isnan(st.gain) || st.gain < 1.0) throw ValidationError(base + ".gain", "must be >= 1 (0 dB)");
      check_range(st.added_noise, 0.0, false, inf, base + ".added_noise", "must be >= 0");
    }
    chain_has_amp = chain_has_amp || st.type == StageType::amplifier;
  }

  auto require = [](bool present, const char* path) {
    if (!present) throw ValidationError(path, "required by the selected target");
  };
  const bool canonical = p.chain.empty();
  const bool needs_amp = target != Target::chain_propagate || canonical || chain_has_amp;
  if (needs_amp) {
    require(p.amplifier.has_value(), "amplifier");
    require(p.t_dev.has_value(), "t_dev");
  }
  if (target == Target::delta_added_noise) require(p.t_base.has_value(), "t_base");
  if (target == Target::system_noise || (target == Target::chain_propagate && canonical)) {
    require(p.lines.alpha1.has_value(), "lines.alpha1");
    require(p.lines.alpha2.has_value(), "lines.alpha2");
  }
  if (target == Target::chain_propagate && !canonical) {
    try {
      (void)make_chain(p);
    } catch (const ValidationError& e) {
      std::string path = e.path();
      if (path.rfind("stages", 0) == 0) path = "chain" + path.substr(6);
      std::string msg = e.what();
      if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
      throw ValidationError(path, msg);
    }
  }
}

inline void apply_coordinate(ModelParams& p, const Axis& axis, double coord) {
  const auto slot = detail::resolve(p, axis.path);
  if (!slot) throw ValidationError(axis.path, "does not name a configurable parameter");
  *slot->value = to_canonical(slot->quantity, axis.unit, coord, axis.name());
}

inline AmplifierSpec make_amplifier(const ModelParams& p) {
  if (!p.amplifier) throw ValidationError("amplifier", "not configured");
  const auto& a = *p.amplifier;
  const Frequency f(p.frequency);
  return AmplifierSpec(ResonatorCoupling::from_ratio(a.kappa_e, a.coupling_ratio, f), Occupancy(a.n_exc),
                       a.gain);
}

inline TransmissionPair make_lines(const ModelParams& p) {
  if (!p.lines.alpha1 || !p.lines.alpha2) throw ValidationError("lines", "alpha1 and alpha2 are required");
  return TransmissionPair(*p.lines.alpha1, *p.lines.alpha2, Temperature(p.lines.t_mxc),
                          Temperature(p.lines.t_plate));
}

inline Chain make_chain(const ModelParams& p) {
  const Frequency f(p.frequency);
  if (p.chain.empty()) {
    if (!p.t_dev) throw ValidationError("t_dev", "required");
    return canonical_chain(make_amplifier(p), make_lines(p), Temperature(*p.t_dev), f, Temperature(p.t_src));
  }
  std::vector<ChainStage> stages;
  stages.reserve(p.chain.size());
  for (const auto& st : p.chain) {
    switch (st.type) {
      case StageType::source:
        stages.push_back({SourceStage{Temperature(st.temperature)}, st.label});
        break;
      case StageType::loss:
        stages.push_back({LossStage{st.alpha, Temperature(st.temperature)}, st.label});
        break;
      case StageType::amplifier:
        if (!p.t_dev) throw ValidationError("t_dev", "required by the amplifier stage");
        stages.push_back({ParametricAmpStage{make_amplifier(p), Temperature(*p.t_dev)}, st.label});
        break;
      case StageType::post_amp:
        stages.push_back({PostAmpStage{st.gain, st.added_noise}, st.label});
        break;
    }
  }
  return Chain(std::move(stages), f);
}

inline double evaluate_target(Target target, const ModelParams& p) {
  const Frequency f(p.frequency);
  switch (target) {
    case Target::added_noise:
      return added_noise(make_amplifier(p), Temperature(p.t_dev.value())).quanta();
    case Target::delta_added_noise:
      return delta_added_noise(make_amplifier(p).coupling(), f, Temperature(p.t_dev.value()),
                               Temperature(p.t_base.value()))
          .quanta();
    case Target::system_noise:
      return system_noise(make_amplifier(p), make_lines(p), Temperature(p.t_dev.value()), f).quanta();
    case Target::chain_propagate:
      return propagate(make_chain(p)).source_referred_noise_quanta;
  }
  return 0.0;
}

inline SweepSpec parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(line, col, msg);
  }
  if (!doc.is_object()) throw ValidationError("", "top level must be an object");

  SweepSpec spec;
  spec.config_hash = hex64(fnv1a64(text));
  auto& p = spec.params;
  bool has_target = false, has_frequency = false;

  using detail::FieldSpec;
  detail::read_fields(
      doc, "",
      {{"frequency", Quantity::frequency}, {"t_dev", Quantity::temperature}, {"t_base", Quantity::temperature},
       {"t_src", Quantity::temperature}},
      {"target", "description", "amplifier", "lines", "chain", "axes", "output"},
      [&](std::string_view name, double v) {
        if (name == "frequency") p.frequency = v, has_frequency = true;
        else if (name == "t_dev") p.t_dev = v;
        else if (name == "t_base") p.t_base = v;
        else p.t_src = v;
      });

  if (doc.contains("target")) {
    spec.target = detail::parse_target(detail::get_string(doc["target"], "target"));
    has_target = true;
  }
  if (!has_target) throw ValidationError("target", "missing");
  if (!has_frequency) throw ValidationError("frequency", "missing (e.g. frequency_ghz)");
  if (doc.contains("description")) spec.description = detail::get_string(doc["description"], "description");

  if (doc.contains("amplifier")) {
    AmplifierParams a;
    bool has_ratio = false;
    detail::read_fields(doc["amplifier"], "amplifier",
                        {{"kappa_e", Quantity::rate}, {"coupling_ratio", Quantity::dimensionless},
                         {"n_exc", Quantity::dimensionless}, {"gain", Quantity::gain}},
                        {}, [&](std::string_view name, double v) {
                          if (name == "kappa_e") a.kappa_e = v;
                          else if (name == "coupling_ratio") a.coupling_ratio = v, has_ratio = true;
                          else if (name == "n_exc") a.n_exc = v;
                          else a.gain = v;
                        });
    if (!has_ratio) throw ValidationError("amplifier.coupling_ratio", "missing");
    p.amplifier = a;
  }
  if (doc.contains("lines")) {
    detail::read_fields(doc["lines"], "lines",
                        {{"alpha1", Quantity::transmission}, {"alpha2", Quantity::transmission},
                         {"t_mxc", Quantity::temperature}, {"t_plate", Quantity::temperature}},
                        {}, [&](std::string_view name, double v) {
                          if (name == "alpha1") p.lines.alpha1 = v;
                          else if (name == "alpha2") p.lines.alpha2 = v;
                          else if (name == "t_mxc") p.lines.t_mxc = v;
                          else p.lines.t_plate = v;
                        });
  }
  if (doc.contains("chain")) {
    p.chain = detail::parse_chain(doc["chain"]);
    if (p.chain.empty()) throw ValidationError("chain", "must list at least a source stage");
    if (spec.target != Target::chain_propagate)
      throw ValidationError("chain", "an explicit chain is only used by target chain_propagate");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) throw ValidationError("output", "expected an object");
    OutputSpec out;
    for (auto it = o.begin(); it != o.end(); ++it) {
      const std::string path = "output." + it.key();
      if (it.key() == "format") {
        out.format = detail::get_string(it.value(), path);
        if (out.format != "csv" && out.format != "json")
          throw ValidationError(path, "'" + out.format + "' is not one of csv, json");
      } else if (it.key() == "path") {
        out.path = detail::get_string(it.value(), path);
      } else {
        throw ValidationError(path, "unknown key");
      }
    }
    spec.output = out;
  }

  // Presence checks see axis-supplied parameters as present.
  ModelParams probe = p;
  if (doc.contains("axes")) {
    const auto& axes = doc["axes"];
    if (!axes.is_array()) throw ValidationError("axes", "expected an array");
    if (axes.empty() || axes.size() > 2) throw ValidationError("axes", "give one or two axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      Axis axis = detail::parse_axis(axes[i], i, probe);
      if (detail::axis_covers(spec.axes, axis.path))
        throw ValidationError("axes[" + std::to_string(i) + "].path", "parameter already swept");
      spec.axes.push_back(std::move(axis));
    }
  }
  validate_params(probe, spec.target);
  // Every coordinate must produce a valid parameter set.
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const auto& axis = spec.axes[i];
    for (std::size_t k = 0; k < axis.coordinates.size(); ++k) {
      ModelParams q = probe;
      apply_coordinate(q, axis, axis.coordinates[k]);
      try {
        validate_params(q, spec.target);
      } catch (const ValidationError& e) {
        const std::string where = "axes[" + std::to_string(i) + "]." +
                                  (axis.explicit_values ? "values[" + std::to_string(k) + "]"
                                                        : std::string(k == 0 ? "min" : "max"));
        std::string msg = e.what();
        throw ValidationError(where, "coordinate " + format_number(axis.coordinates[k]) + " gives " + msg);
      }
      if (!axis.explicit_values && k == 0) k = axis.coordinates.size() - 2;  // endpoints bound monotone maps
    }
  }
  return spec;
}

inline std::string emit_config(const SweepSpec& spec) {
  const auto& p = spec.params;
  nlohmann::ordered_json j;
  if (!spec.description.empty()) j["description"] = spec.description;
  j["target"] = std::string(to_string(spec.target));
  j["frequency_hz"] = p.frequency;
  if (p.t_dev) j["t_dev_k"] = *p.t_dev;
  if (p.t_base) j["t_base_k"] = *p.t_base;
  j["t_src_k"] = p.t_src;
  if (p.amplifier) {
    auto& a = j["amplifier"];
    a["kappa_e_rad_s"] = p.amplifier->kappa_e;
    a["coupling_ratio"] = p.amplifier->coupling_ratio;
    a["n_exc"] = p.amplifier->n_exc;
    if (std::isfinite(p.amplifier->gain)) a["gain_linear"] = p.amplifier->gain;
  }
  auto& l = j["lines"];
  if (p.lines.alpha1) l["alpha1_linear"] = *p.lines.alpha1;
  if (p.lines.alpha2) l["alpha2_linear"] = *p.lines.alpha2;
  l["t_mxc_k"] = p.lines.t_mxc;
  l["t_plate_k"] = p.lines.t_plate;
  if (!p.chain.empty()) {
    auto& c = j["chain"] = nlohmann::ordered_json::array();
    for (const auto& st : p.chain) c.push_back(detail::emit_stage(st));
  }
  if (!spec.axes.empty()) {
    auto& axes = j["axes"] = nlohmann::ordered_json::array();
    for (const auto& a : spec.axes) {
      nlohmann::ordered_json ax;
      ax["path"] = a.path;
      ax["scale"] = std::string(to_string(a.scale));
      const std::string suffix = a.unit.empty() ? "" : "_" + a.unit;
      if (a.explicit_values) {
        ax["values" + suffix] = a.coordinates;
      } else {
        ax["min" + suffix] = a.min;
        ax["max" + suffix] = a.max;
        ax["points"] = a.points;
      }
      axes.push_back(std::move(ax));
    }
  }
  if (spec.output) {
    j["output"]["format"] = spec.output->format;
    if (!spec.output->path.empty()) j["output"]["path"] = spec.output->path;
  }
  return j.dump(2) + "\n";
}

inline double parse_quantity(std::string_view text, Quantity q, const std::string& path) {
  std::size_t split = text.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1]))) --split;
  const auto symbol = text.substr(split);
  const double x = parse_number(text.substr(0, split), path);
  std::string unit;
  if (q == Quantity::temperature) {
    if (symbol == "K") unit = "k";
    else if (symbol == "mK") unit = "mk";
  } else if (q == Quantity::frequency) {
    if (symbol == "GHz") unit = "ghz";
    else if (symbol == "MHz") unit = "mhz";
    else if (symbol == "Hz") unit = "hz";
  } else if (q == Quantity::transmission || q == Quantity::gain) {
    if (symbol == "dB") unit = "db";
  }
  if (unit.empty())
    throw UnitError(path, "'" + std::string(text) + "' lacks a recognised " + detail::quantity_name(q) + " unit");
  return to_canonical(q, unit, x, path);
}

}  // namespace radcool
