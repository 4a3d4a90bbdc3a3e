#pragma once

// Grid evaluation of a configured target, CSV/JSON emission and the
// post-hoc monotonicity audit for loss grids.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "radcool/config.hpp"
#include "radcool/format.hpp"

#ifndef RADCOOL_VERSION
#define RADCOOL_VERSION "0.0.0"
#endif

namespace radcool {

/// A grid point raised a domain error. `coordinates()` names the point.
class SweepError : public DomainError {
 public:
  SweepError(std::string coordinates, const std::string& what)
      : DomainError("at " + coordinates + ": " + what), coordinates_(std::move(coordinates)) {}
  const std::string& coordinates() const noexcept { return coordinates_; }

 private:
  std::string coordinates_;
};

struct SweepAxis {
  std::string name;  // path plus unit suffix
  std::string path;
  std::string unit;
  std::vector<double> values;
};

struct Provenance {
  std::string config_hash;
  std::string version = RADCOOL_VERSION;
  std::string timestamp;
};

struct SweepResult {
  Target target = Target::system_noise;
  std::vector<SweepAxis> axes;
  std::vector<double> values;  // row-major, first axis slowest
  Provenance provenance;

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes) s.push_back(a.values.size());
    return s;
  }
};

struct SweepOptions {
  unsigned workers = 0;           // 0: RADCOOL_WORKERS or hardware concurrency
  std::string timestamp;          // empty: current UTC time
};

unsigned default_worker_count();
std::string utc_timestamp();

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

std::string sweep_to_csv(const SweepResult& r);
nlohmann::ordered_json sweep_to_json(const SweepResult& r);
SweepResult sweep_from_json(const nlohmann::json& j);
std::string emit(const SweepResult& r, std::string_view format);

/// Writes `text` to `path`; throws IoError naming the path.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

struct MonotonicityViolation {
  std::size_t axis;
  std::size_t index;  // flat index of the later point
  double before;
  double after;
};

/// n_sys must not decrease with loss: along lines.alpha axes the value is
/// non-increasing in linear transmission and non-decreasing in dB loss.
std::vector<MonotonicityViolation> audit_monotonicity(const SweepResult& r);

// ---------------------------------------------------------------------------

inline unsigned default_worker_count() {
  if (const char* env = std::getenv("RADCOOL_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(std::min<long>(n, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline std::string describe_point(const std::vector<Axis>& axes, const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (a) s += ", ";
    s += axes[a].name() + "=" + format_number(axes[a].coordinates[idx[a]]);
  }
  return s;
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
  if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("axes", "give one or two axes");
  SweepResult out;
  out.target = spec.target;
  out.provenance.config_hash = spec.config_hash;
  out.provenance.timestamp = opts.timestamp.empty() ? utc_timestamp() : opts.timestamp;
  std::size_t total = 1;
  for (const auto& a : spec.axes) {
    out.axes.push_back({a.name(), a.path, a.unit, a.coordinates});
    total *= a.coordinates.size();
  }
  out.values.assign(total, 0.0);

  auto unflatten = [&](std::size_t flat) {
    std::vector<std::size_t> idx(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      idx[a] = flat % spec.axes[a].coordinates.size();
      flat /= spec.axes[a].coordinates.size();
    }
    return idx;
  };

  struct Failure {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    std::string message;
  };

  const unsigned workers = std::max<unsigned>(
      1u, std::min<std::size_t>(opts.workers ? opts.workers : default_worker_count(), total));
  std::vector<Failure> failures(workers);

  // Contiguous disjoint blocks; each worker stops at its first failure.
  auto work = [&](unsigned w) {
    const std::size_t lo = total * w / workers, hi = total * (w + 1) / workers;
    ModelParams p = spec.params;
    for (std::size_t flat = lo; flat < hi; ++flat) {
      const auto idx = unflatten(flat);
      try {
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
          apply_coordinate(p, spec.axes[a], spec.axes[a].coordinates[idx[a]]);
        const double v = evaluate_target(spec.target, p);
        if (!std::isfinite(v)) throw DomainError("value is not finite");
        out.values[flat] = v;
      } catch (const std::exception& e) {
        failures[w] = {flat, e.what()};
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  const auto first = std::min_element(failures.begin(), failures.end(),
                                      [](const Failure& a, const Failure& b) { return a.index < b.index; });
  if (first->index != std::numeric_limits<std::size_t>::max())
    throw SweepError(detail::describe_point(spec.axes, unflatten(first->index)), first->message);
  return out;
}

inline std::string sweep_to_csv(const SweepResult& r) {
  std::string s;
  for (const auto& a : r.axes) s += a.name + ",";
  s += "value\n";
  const auto shape = r.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t flat = 0; flat < r.values.size(); ++flat) {
    for (std::size_t a = 0; a < shape.size(); ++a) s += format_number(r.axes[a].values[idx[a]]) + ",";
    s += format_number(r.values[flat]) + "\n";
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
  return s;
}

inline nlohmann::ordered_json sweep_to_json(const SweepResult& r) {
  nlohmann::ordered_json j;
  j["target"] = std::string(to_string(r.target));
  auto& axes = j["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : r.axes)
    axes.push_back({{"name", a.name}, {"path", a.path}, {"unit", a.unit}, {"values", a.values}});
  j["shape"] = r.shape();
  j["grid"] = r.values;
  j["provenance"] = {{"config_hash", r.provenance.config_hash},
                     {"version", r.provenance.version},
                     {"timestamp", r.provenance.timestamp}};
  return j;
}

inline SweepResult sweep_from_json(const nlohmann::json& j) {
  try {
    SweepResult r;
    r.target = detail::parse_target(j.at("target").get<std::string>());
    for (const auto& a : j.at("axes"))
      r.axes.push_back({a.at("name").get<std::string>(), a.at("path").get<std::string>(),
                        a.at("unit").get<std::string>(), a.at("values").get<std::vector<double>>()});
    r.values = j.at("grid").get<std::vector<double>>();
    const auto& p = j.at("provenance");
    r.provenance = {p.at("config_hash").get<std::string>(), p.at("version").get<std::string>(),
                    p.at("timestamp").get<std::string>()};
    std::size_t n = 1;
    for (const auto& a : r.axes) n *= a.values.size();
    if (n != r.values.size()) throw ValidationError("grid", "length does not match the axes");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sweep", e.what());
  }
}

inline std::string emit(const SweepResult& r, std::string_view format) {
  if (format == "csv") return sweep_to_csv(r);
  if (format == "json") return sweep_to_json(r).dump(1) + "\n";  // shortest round-trip doubles
  throw ValidationError("output.format", "'" + std::string(format) + "' is not one of csv, json");
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::vector<MonotonicityViolation> audit_monotonicity(const SweepResult& r) {
  std::vector<MonotonicityViolation> out;
  const auto shape = r.shape();
  std::vector<std::size_t> stride(shape.size(), 1);
  for (std::size_t a = shape.size(); a-- > 1;) stride[a - 1] = stride[a] * shape[a];
  for (std::size_t a = 0; a < r.axes.size(); ++a) {
    const auto& ax = r.axes[a];
    if (ax.path != "lines.alpha1" && ax.path != "lines.alpha2") continue;
    // Coordinates may be listed in any order; walk them sorted.
    std::vector<std::size_t> order(ax.values.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return ax.values[x] < ax.values[y]; });
    const bool rising = ax.unit == "db";  // more dB loss -> more noise
    for (std::size_t flat = 0; flat < r.values.size(); ++flat) {
      if ((flat / stride[a]) % shape[a] != 0) continue;  // start of a line along axis a
      for (std::size_t k = 1; k < order.size(); ++k) {
        const std::size_t i0 = flat + order[k - 1] * stride[a], i1 = flat + order[k] * stride[a];
        const double v0 = r.values[i0], v1 = r.values[i1];
        if (rising ? v1 < v0 : v1 > v0) out.push_back({a, i1, v0, v1});
      }
    }
  }
  return out;
}

}  // namespace radcool
