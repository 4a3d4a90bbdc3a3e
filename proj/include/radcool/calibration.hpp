#pragma once

// Synthetic data and nonlinear least-squares recovery for noise thermometry
// and one-port reflection spectra.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radcool/format.hpp"
#include "radcool/least_squares.hpp"
#include "radcool/physics.hpp"
#include "radcool/rng.hpp"

namespace radcool {

/// The data cannot pin down the fitted parameters.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Noise thermometry

struct NoisePoint {
  Temperature t_src;
  double psd_quanta;
  double sigma = 1.0;
};

struct NoiseSweepDataset {
  std::vector<NoisePoint> points;
  Frequency frequency;
  std::string metadata;

  /// Enforces >= 3 points, strictly increasing temperatures and sigma > 0.
  void validate() const { validate_points(3); }

  void validate_points(std::size_t min_points) const {
    if (points.size() < min_points)
      throw ValidationError("points", "need at least " + std::to_string(min_points) + " points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string where = "points[" + std::to_string(i) + "]";
      if (!std::isfinite(points[i].psd_quanta)) throw ValidationError(where, "psd is not finite");
      if (!(points[i].sigma > 0.0) || !std::isfinite(points[i].sigma))
        throw ValidationError(where, "sigma must be positive");
      if (i > 0 && !(points[i].t_src > points[i - 1].t_src))
        throw ValidationError(where, "temperatures must be strictly increasing");
    }
  }
};

/// Normalized output PSD of the thermometry forward model, in quanta:
/// 2 n(T_src) + 2 (ki/ke) n(T_dev) + kappa/ke + n_exc.
inline double noise_forward_model(const AmplifierSpec& amp, Temperature t_dev, Temperature t_src) {
  const auto& c = amp.coupling();
  const Frequency f = c.omega0();
  return 2.0 * thermal_occupancy(f, t_src).quanta() +
         2.0 * c.loss_ratio() * thermal_occupancy(f, t_dev).quanta() +
         c.inverse_external_fraction() + amp.n_exc().quanta();
}

inline NoiseSweepDataset synth_noise_sweep(const AmplifierSpec& amp, Temperature t_dev,
                                           std::span<const Temperature> t_src_grid,
                                           double gain_scale, double rel_noise,
                                           std::uint64_t seed) {
  if (t_src_grid.empty()) throw DomainError("temperature grid is empty");
  if (!(rel_noise >= 0.0) || !std::isfinite(rel_noise))
    throw DomainError("rel_noise must be non-negative");
  if (!(gain_scale > 0.0) || !std::isfinite(gain_scale))
    throw DomainError("gain_scale must be positive");

  const CounterRng rng(seed);
  NoiseSweepDataset ds{{}, amp.coupling().omega0(), {}};
  ds.points.reserve(t_src_grid.size());
  for (std::size_t i = 0; i < t_src_grid.size(); ++i) {
    const double clean = gain_scale * noise_forward_model(amp, t_dev, t_src_grid[i]);
    const double eps = rel_noise > 0.0 ? rel_noise * rng.normal(i) : 0.0;
    const double sigma = rel_noise > 0.0 ? rel_noise * clean : 1.0;
    ds.points.push_back({t_src_grid[i], clean * (1.0 + eps), sigma});
  }
  std::ostringstream meta;
  meta << "synthetic noise sweep; kappa_e/kappa=" << format_number(amp.coupling().external_fraction())
       << " n_exc=" << format_number(amp.n_exc().quanta()) << " t_dev_K=" << format_number(t_dev.kelvin())
       << " gain_scale=" << format_number(gain_scale) << " rel_noise=" << format_number(rel_noise)
       << " seed=" << seed;
  ds.metadata = meta.str();
  return ds;
}

struct NoiseFitResult {
  double gain_scale = 0.0;
  double n_add = 0.0;
  std::array<std::array<double, 2>, 2> covariance{};  // (gain_scale, n_add)
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;

  double gain_scale_sigma() const { return std::sqrt(covariance[0][0]); }
  double n_add_sigma() const { return std::sqrt(covariance[1][1]); }
};

struct NoiseFitGuess {
  double gain_scale;
  double n_add;
};

namespace detail {

// y = s (2 n(T) + n_add + 1/2), s = s0 u. Parameters (u, n_add).
struct ThermometryModel {
  std::vector<double> two_n;
  std::vector<double> y;
  std::vector<double> inv_sigma;
  double s0;

  Eigen::Index residual_count() const { return static_cast<Eigen::Index>(y.size()); }

  void evaluate(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) const {
    const double s = s0 * p[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double shape = two_n[i] + p[1] + 0.5;
      r[k] = (s * shape - y[i]) * inv_sigma[i];
      if (J) {
        (*J)(k, 0) = s0 * shape * inv_sigma[i];
        (*J)(k, 1) = s * inv_sigma[i];
      }
    }
  }
};

}  // namespace detail

/// Weighted fit of gain_scale and input-referred added noise to a
/// thermometry sweep. The reported n_add carries the 0.5 quantum-limit term.
inline NoiseFitResult fit_noise_thermometry(const NoiseSweepDataset& ds,
                                            std::optional<NoiseFitGuess> guess = std::nullopt,
                                            const LeastSquaresOptions& opts = {}) {
  ds.validate_points(2);
  detail::ThermometryModel model;
  for (const auto& pt : ds.points) {
    model.two_n.push_back(2.0 * thermal_occupancy(ds.frequency, pt.t_src).quanta());
    model.y.push_back(pt.psd_quanta);
    model.inv_sigma.push_back(1.0 / pt.sigma);
  }
  const auto [lo, hi] = std::minmax_element(model.two_n.begin(), model.two_n.end());
  if (!(*hi - *lo > 1e-12 * std::max(1.0, *hi)))
    throw DegenerateDesignError(
        "thermometry design is singular: source occupancies do not vary across the sweep");

  if (!guess) {
    // Secant through the end points of the occupancy-linearized data.
    const std::size_t last = model.y.size() - 1;
    double s = (model.y[last] - model.y[0]) / (model.two_n[last] - model.two_n[0]);
    if (!(s > 0.0)) {
      double sum_y = 0.0, sum_x = 0.0;
      for (std::size_t i = 0; i <= last; ++i) sum_y += model.y[i], sum_x += model.two_n[i] + 1.0;
      s = sum_y / sum_x;
    }
    guess = NoiseFitGuess{s, model.y[0] / s - model.two_n[0] - 0.5};
  }
  if (!(guess->gain_scale > 0.0) || !std::isfinite(guess->gain_scale))
    throw DomainError("initial gain_scale must be positive");
  model.s0 = guess->gain_scale;

  Eigen::VectorXd p0(2);
  p0 << 1.0, guess->n_add;
  const auto sol = minimize(model, p0, opts);

  const Eigen::Matrix2d jtj = sol.jacobian.transpose() * sol.jacobian;
  const double det = jtj.determinant();
  if (!(std::abs(det) > 1e-14 * jtj(0, 0) * jtj(1, 1)))
    throw DegenerateDesignError("thermometry normal equations are singular");
  const Eigen::Matrix2d cov_internal = jtj.inverse();

  NoiseFitResult out;
  out.gain_scale = model.s0 * sol.params[0];
  out.n_add = sol.params[1];
  out.covariance[0][0] = model.s0 * model.s0 * cov_internal(0, 0);
  out.covariance[0][1] = out.covariance[1][0] = model.s0 * cov_internal(0, 1);
  out.covariance[1][1] = cov_internal(1, 1);
  out.residual_norm = sol.residual_norm;
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  return out;
}

// ---------------------------------------------------------------------------
// Reflection spectra

struct ReflectionPoint {
  Frequency freq;
  std::complex<double> s11;
};

struct ReflectionTrace {
  std::vector<ReflectionPoint> points;
  std::string metadata;

  void validate() const {
    if (points.size() < 5) throw ValidationError("points", "need at least 5 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string where = "points[" + std::to_string(i) + "]";
      if (!std::isfinite(points[i].s11.real()) || !std::isfinite(points[i].s11.imag()))
        throw ValidationError(where, "s11 is not finite");
      if (i > 0 && !(points[i].freq.hertz() > points[i - 1].freq.hertz()))
        throw ValidationError(where, "frequencies must be strictly increasing");
    }
  }

  double center_hz() const { return 0.5 * (points.front().freq.hertz() + points.back().freq.hertz()); }
};

/// Affine complex background a + b (f - f_ref), optionally multiplied by a
/// standing-wave ripple 1 + eps exp(i (2 pi (f - f_ref) / period + phase)).
struct ReflectionBackground {
  std::complex<double> offset{1.0, 0.0};
  std::complex<double> slope_per_hz{0.0, 0.0};
  std::optional<double> reference_hz;  // default: trace center
  double ripple_amplitude = 0.0;
  double ripple_period_hz = 0.0;
  double ripple_phase = 0.0;

  std::complex<double> at(double hz, double ref_hz) const {
    const double x = hz - ref_hz;
    std::complex<double> bg = offset + slope_per_hz * x;
    if (ripple_amplitude != 0.0)
      bg *= 1.0 + ripple_amplitude *
                      std::polar(1.0, kTwoPi * x / ripple_period_hz + ripple_phase);
    return bg;
  }
};

/// Bare one-port response 1 - ke / (i (w - w0) + kappa / 2).
inline std::complex<double> reflection_response(const ResonatorCoupling& c, double hz) {
  const double detuning = kTwoPi * (hz - c.omega0().hertz());
  return 1.0 - c.kappa_e() / std::complex<double>(0.5 * c.kappa(), detuning);
}

inline ReflectionTrace synth_reflection_trace(const ResonatorCoupling& c,
                                              std::span<const double> freq_grid_hz,
                                              const ReflectionBackground& bg, double rel_noise,
                                              std::uint64_t seed) {
  if (freq_grid_hz.empty()) throw DomainError("frequency grid is empty");
  if (!(rel_noise >= 0.0) || !std::isfinite(rel_noise))
    throw DomainError("rel_noise must be non-negative");
  if (bg.ripple_amplitude != 0.0 && !(bg.ripple_period_hz > 0.0))
    throw DomainError("ripple period must be positive");
  const double ref = bg.reference_hz.value_or(0.5 * (freq_grid_hz.front() + freq_grid_hz.back()));
  const CounterRng rng(seed);
  ReflectionTrace trace;
  trace.points.reserve(freq_grid_hz.size());
  for (std::size_t i = 0; i < freq_grid_hz.size(); ++i) {
    const double hz = freq_grid_hz[i];
    std::complex<double> s = bg.at(hz, ref) * reflection_response(c, hz);
    if (rel_noise > 0.0) {
      const std::complex<double> eps(rng.normal(2 * i), rng.normal(2 * i + 1));
      s *= 1.0 + rel_noise * eps;
    }
    trace.points.push_back({Frequency(hz), s});
  }
  std::ostringstream meta;
  meta << "synthetic reflection; f0_Hz=" << format_number(c.omega0().hertz())
       << " kappa_e=" << format_number(c.kappa_e()) << " kappa_i=" << format_number(c.kappa_i())
       << " rel_noise=" << format_number(rel_noise) << " seed=" << seed;
  trace.metadata = meta.str();
  return trace;
}

struct ReflectionGuess {
  double f0_hz;
  double kappa_e;
  double kappa_i;
  std::complex<double> offset;        // background at the trace center
  std::complex<double> slope_per_hz;
};

struct ReflectionFitResult {
  Frequency omega0{1.0};
  double kappa_e = 0.0;
  double kappa_i = 0.0;
  std::complex<double> background_offset;
  std::complex<double> background_slope_per_hz;
  double reference_hz = 0.0;
  /// Parameter order: f0 (Hz), kappa_e, kappa_i (rad/s), Re a, Im a, Re b, Im b (per Hz).
  Eigen::Matrix<double, 7, 7> covariance = Eigen::Matrix<double, 7, 7>::Zero();
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;

  double f0_sigma_hz() const { return std::sqrt(covariance(0, 0)); }
  double kappa_e_sigma() const { return std::sqrt(covariance(1, 1)); }
  double kappa_i_sigma() const { return std::sqrt(covariance(2, 2)); }
};

namespace detail {

// Internal parameters: u0 = (f0 - fc)/w, ke = kappa_e/(2 pi w), ki = kappa_i/(2 pi w),
// Re a, Im a, Re b w, Im b w. Frequencies enter as x = (f - fc)/w.
struct ReflectionModel {
  std::vector<double> x;
  std::vector<std::complex<double>> y;

  Eigen::Index residual_count() const { return static_cast<Eigen::Index>(2 * y.size()); }

  void project(Eigen::VectorXd& p) const {
    p[1] = std::max(p[1], 1e-9);
    p[2] = std::max(p[2], 0.0);
  }

  void evaluate(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) const {
    using cd = std::complex<double>;
    const cd a(p[3], p[4]);
    const cd b(p[5], p[6]);
    const cd i1(0.0, 1.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
      const cd d(0.5 * (p[1] + p[2]), x[k] - p[0]);
      const cd lorentz = 1.0 - p[1] / d;
      const cd bg = a + b * x[k];
      const cd model = bg * lorentz;
      const cd res = model - y[k];
      const auto re = static_cast<Eigen::Index>(2 * k);
      r[re] = res.real();
      r[re + 1] = res.imag();
      if (!J) continue;
      const cd d2 = d * d;
      const std::array<cd, 7> grad{
          bg * (-i1 * p[1] / d2),
          bg * (-1.0 / d + 0.5 * p[1] / d2),
          bg * (0.5 * p[1] / d2),
          lorentz,
          i1 * lorentz,
          x[k] * lorentz,
          i1 * x[k] * lorentz,
      };
      for (Eigen::Index j = 0; j < 7; ++j) {
        (*J)(re, j) = grad[static_cast<std::size_t>(j)].real();
        (*J)(re + 1, j) = grad[static_cast<std::size_t>(j)].imag();
      }
    }
  }
};

inline ReflectionGuess guess_reflection(const ReflectionTrace& trace) {
  const auto& pts = trace.points;
  const std::size_t n = pts.size();
  const double fc = trace.center_hz();
  const std::complex<double> a = 0.5 * (pts.front().s11 + pts.back().s11);
  const std::complex<double> b =
      (pts.back().s11 - pts.front().s11) / (pts.back().freq.hertz() - pts.front().freq.hertz());

  std::vector<std::complex<double>> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = pts[k].s11 / (a + b * (pts[k].freq.hertz() - fc));

  // The response sweeps its circle fastest at resonance.
  std::vector<double> speed(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k)
    speed[k] = std::abs(z[k + 1] - z[k - 1]) /
               (pts[k + 1].freq.hertz() - pts[k - 1].freq.hertz());
  speed[0] = speed[1];
  speed[n - 1] = speed[n - 2];
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(speed.begin(), speed.end()) - speed.begin());
  const double half = 0.5 * speed[peak];

  auto crossing = [&](std::size_t inner, std::size_t outer) {
    const double s0 = speed[inner], s1 = speed[outer];
    const double f0 = pts[inner].freq.hertz(), f1 = pts[outer].freq.hertz();
    return s0 == s1 ? f1 : f0 + (half - s0) * (f1 - f0) / (s1 - s0);
  };
  double f_left = pts.front().freq.hertz();
  for (std::size_t k = peak; k > 0; --k)
    if (speed[k - 1] < half) {
      f_left = crossing(k, k - 1);
      break;
    }
  double f_right = pts.back().freq.hertz();
  for (std::size_t k = peak; k + 1 < n; ++k)
    if (speed[k + 1] < half) {
      f_right = crossing(k, k + 1);
      break;
    }
  const double span = pts.back().freq.hertz() - pts.front().freq.hertz();
  double width_hz = f_right - f_left;
  if (!(width_hz > 0.0)) width_hz = span / 4.0;

  const double kappa = kTwoPi * width_hz;
  const double ratio = std::clamp(0.5 * (1.0 - z[peak].real()), 0.05, 0.999);
  return {pts[peak].freq.hertz(), ratio * kappa, (1.0 - ratio) * kappa, a, b};
}

}  // namespace detail

inline ReflectionFitResult fit_reflection(const ReflectionTrace& trace,
                                          std::optional<ReflectionGuess> guess = std::nullopt,
                                          const LeastSquaresOptions& opts = {}) {
  trace.validate();
  const ReflectionGuess g = guess.value_or(detail::guess_reflection(trace));
  const double span_hz = trace.points.back().freq.hertz() - trace.points.front().freq.hertz();
  const double kappa_guess = g.kappa_e + g.kappa_i;
  if (!(kappa_guess > 0.0) || !std::isfinite(kappa_guess))
    throw DomainError("initial linewidth must be positive");
  auto check_span = [&](double kappa) {
    if (kTwoPi * span_hz < kappa / 10.0)
      throw DegenerateDesignError("frequency span is narrower than a tenth of the linewidth");
  };
  check_span(kappa_guess);

  const double fc = trace.center_hz();
  const double w = kappa_guess / kTwoPi;  // Hz
  detail::ReflectionModel model;
  for (const auto& pt : trace.points) {
    model.x.push_back((pt.freq.hertz() - fc) / w);
    model.y.push_back(pt.s11);
  }
  Eigen::VectorXd p0(7);
  p0 << (g.f0_hz - fc) / w, g.kappa_e / (kTwoPi * w), g.kappa_i / (kTwoPi * w), g.offset.real(),
      g.offset.imag(), g.slope_per_hz.real() * w, g.slope_per_hz.imag() * w;
  const auto sol = minimize(model, p0, opts);
  const auto& p = sol.params;

  ReflectionFitResult out;
  out.omega0 = Frequency(fc + p[0] * w);
  out.kappa_e = kTwoPi * w * p[1];
  out.kappa_i = kTwoPi * w * p[2];
  out.background_offset = {p[3], p[4]};
  out.background_slope_per_hz = {p[5] / w, p[6] / w};
  out.reference_hz = fc;
  out.residual_norm = sol.residual_norm;
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  check_span(out.kappa_e + out.kappa_i);

  // Unit-weight residuals: scale by the residual variance.
  const auto m = sol.residuals.size();
  const double dof = static_cast<double>(std::max<Eigen::Index>(m - 7, 1));
  const double s2 = sol.residuals.squaredNorm() / dof;
  const Eigen::MatrixXd jtj = sol.jacobian.transpose() * sol.jacobian;
  Eigen::Matrix<double, 7, 7> cov_internal = jtj.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::Matrix<double, 7, 1> scale;
  scale << w, kTwoPi * w, kTwoPi * w, 1.0, 1.0, 1.0 / w, 1.0 / w;
  out.covariance = s2 * scale.asDiagonal() * cov_internal * scale.asDiagonal();
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  return s;
}
}  // namespace detail

inline std::string noise_dataset_to_csv(const NoiseSweepDataset& ds) {
  std::string out = "t_src_K,psd_quanta,sigma\n";
  for (const auto& p : ds.points)
    out += format_number(p.t_src.kelvin()) + "," + format_number(p.psd_quanta) + "," +
           format_number(p.sigma) + "\n";
  return out;
}

/// Reads a thermometry CSV. The sigma column is optional (unit weights).
inline NoiseSweepDataset noise_dataset_from_csv(const std::string& text, Frequency frequency) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv", "empty document");
  const auto header = detail::split_csv(detail::trim(line));
  const bool with_sigma = header.size() == 3;
  if (!(header == std::vector<std::string>{"t_src_K", "psd_quanta", "sigma"} ||
        header == std::vector<std::string>{"t_src_K", "psd_quanta"}))
    throw ValidationError("csv.header", "expected 't_src_K,psd_quanta[,sigma]'");
  NoiseSweepDataset ds{{}, frequency, "csv"};
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    const std::string where = "csv.line" + std::to_string(row);
    if (cells.size() != header.size()) throw ValidationError(where, "wrong number of columns");
    const double t = parse_number(cells[0], where + ".t_src_K");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError(where, "temperature must be >= 0");
    ds.points.push_back({Temperature(t), parse_number(cells[1], where + ".psd_quanta"),
                         with_sigma ? parse_number(cells[2], where + ".sigma") : 1.0});
  }
  ds.validate();
  return ds;
}

inline nlohmann::json noise_dataset_to_json(const NoiseSweepDataset& ds) {
  nlohmann::json j;
  j["frequency_hz"] = ds.frequency.hertz();
  j["metadata"] = ds.metadata;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : ds.points)
    pts.push_back({{"t_src_K", p.t_src.kelvin()}, {"psd_quanta", p.psd_quanta}, {"sigma", p.sigma}});
  return j;
}

inline NoiseSweepDataset noise_dataset_from_json(const nlohmann::json& j) {
  try {
    NoiseSweepDataset ds{{}, Frequency(j.at("frequency_hz").get<double>()),
                         j.value("metadata", std::string{})};
    for (const auto& p : j.at("points"))
      ds.points.push_back({Temperature(p.at("t_src_K").get<double>()),
                           p.at("psd_quanta").get<double>(), p.value("sigma", 1.0)});
    ds.validate();
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("dataset", e.what());
  } catch (const DomainError& e) {
    throw ValidationError("dataset", e.what());
  }
}

inline std::string reflection_trace_to_csv(const ReflectionTrace& trace) {
  std::string out = "freq_hz,re_s11,im_s11\n";
  for (const auto& p : trace.points)
    out += format_number(p.freq.hertz()) + "," + format_number(p.s11.real()) + "," +
           format_number(p.s11.imag()) + "\n";
  return out;
}

inline ReflectionTrace reflection_trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv", "empty document");
  if (detail::split_csv(detail::trim(line)) !=
      std::vector<std::string>{"freq_hz", "re_s11", "im_s11"})
    throw ValidationError("csv.header", "expected 'freq_hz,re_s11,im_s11'");
  ReflectionTrace trace;
  trace.metadata = "csv";
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    const std::string where = "csv.line" + std::to_string(row);
    if (cells.size() != 3) throw ValidationError(where, "wrong number of columns");
    const double hz = parse_number(cells[0], where + ".freq_hz");
    if (!(hz > 0.0) || !std::isfinite(hz)) throw ValidationError(where, "frequency must be > 0");
    trace.points.push_back({Frequency(hz), {parse_number(cells[1], where + ".re_s11"),
                                            parse_number(cells[2], where + ".im_s11")}});
  }
  trace.validate();
  return trace;
}

}  // namespace radcool
