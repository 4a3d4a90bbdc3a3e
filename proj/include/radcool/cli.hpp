#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 numerical
// failure (non-convergence, degenerate design, failed monotonicity audit).

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radcool/calibration.hpp"
#include "radcool/chain.hpp"
#include "radcool/config.hpp"
#include "radcool/contour.hpp"
#include "radcool/sweep.hpp"

namespace radcool {

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------

namespace detail {

/// Non-convergence reported by a fitter.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string line(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

inline bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline void print_budget(std::ostream& out, const Chain& chain) {
  const auto items = stage_budget(chain);
  double total = 0.0;
  for (const auto& it : items) total += it.quanta;
  out << line("%-16s %14s %8s\n", "stage", "quanta", "share");
  for (const auto& it : items)
    out << line("%-16s %14.6f %7.2f%%\n", it.label.c_str(), it.quanta, 100.0 * it.quanta / total);
  out << line("%-16s %14.6f\n", "total", total);
}

inline SweepSpec load_config(const std::string& path, const std::string& t_dev) {
  SweepSpec spec = parse_config(read_text_file(path));
  if (!t_dev.empty()) spec.params.t_dev = parse_quantity(t_dev, Quantity::temperature, "--t-dev");
  return spec;
}

inline const char* value_name(Target t) {
  switch (t) {
    case Target::added_noise: return "n_add";
    case Target::delta_added_noise: return "delta_n_add";
    default: return "n_sys";
  }
}

inline void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

inline std::vector<Temperature> linspace_temperatures(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("--points", "need at least 1 point");
  if (n > 1 && !(lo < hi)) throw ValidationError("--t-max", "must exceed --t-min");
  std::vector<Temperature> grid;
  for (int k = 0; k < n; ++k)
    grid.emplace_back(n == 1 ? lo : (k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1)));
  return grid;
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::line;
  CLI::App app{"Noise budgets, sweeps and calibration fits for radiatively cooled parametric amplifiers",
               "radcool"};
  app.set_version_flag("--version", std::string(RADCOOL_VERSION));
  app.require_subcommand(1);

  // eval / budget
  std::string config_path, t_dev_text;
  int precision = 3;
  auto* eval = app.add_subcommand("eval", "Evaluate the configured target at its fixed parameters");
  eval->add_option("--config", config_path, "Configuration file")->required();
  eval->add_option("--t-dev", t_dev_text, "Device temperature override, e.g. 1.0K or 130mK");
  eval->add_option("--precision", precision, "Decimals printed")->check(CLI::Range(0, 17));

  auto* budget = app.add_subcommand("budget", "Print the per-stage noise budget of the configured chain");
  budget->add_option("--config", config_path, "Configuration file")->required();
  budget->add_option("--t-dev", t_dev_text, "Device temperature override, e.g. 1.0K or 130mK");

  // sweep
  std::string out_path, format;
  unsigned workers = 0;
  std::string timestamp, contour_out;
  std::vector<double> contour_levels;
  auto* sweep = app.add_subcommand("sweep", "Evaluate the configured target over its axes");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--out", out_path, "Output file (default: config output.path, else stdout)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--workers", workers, "Worker threads (default: RADCOOL_WORKERS or all cores)")
      ->check(CLI::Range(1u, 1024u));
  sweep->add_option("--timestamp", timestamp, "Provenance timestamp (default: now, UTC)");
  sweep->add_option("--contour-levels", contour_levels, "Contour levels for a 2-D grid")->delimiter(',');
  sweep->add_option("--contour-out", contour_out, "Contour polyline CSV");

  // calibrate-synth
  std::string kind, frequency_text = "7.151GHz", t_min_text = "130mK", t_max_text = "1.5K";
  std::string synth_t_dev = "130mK";
  double coupling_ratio = 0.98, n_exc = 0.62, gain_scale = 1.0, kappa_e_mhz = 65.0;
  double span_linewidths = 10.0, ripple = 0.12, ripple_period_linewidths = 1.0, ripple_phase = 0.0;
  std::optional<double> rel_noise;
  std::uint64_t seed = 1;
  int points = 0;
  auto* synth = app.add_subcommand("calibrate-synth", "Write a seeded synthetic calibration dataset");
  synth->add_option("--kind", kind, "noise or reflection")->required()->check(CLI::IsMember({"noise", "reflection"}));
  synth->add_option("--out", out_path, "Output file (default: stdout); .json selects JSON for noise");
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--rel-noise", rel_noise, "Relative noise width (default 0.01 noise, 0.005 reflection)");
  synth->add_option("--coupling-ratio", coupling_ratio, "kappa_e / kappa");
  synth->add_option("--frequency", frequency_text, "Resonance frequency, e.g. 7.151GHz");
  synth->add_option("--points", points, "Grid points (default 20 noise, 201 reflection)");
  synth->add_option("--n-exc", n_exc, "Excess added noise, quanta (noise)");
  synth->add_option("--t-dev", synth_t_dev, "Device temperature (noise)");
  synth->add_option("--t-min", t_min_text, "Lowest source temperature (noise)");
  synth->add_option("--t-max", t_max_text, "Highest source temperature (noise)");
  synth->add_option("--gain-scale", gain_scale, "Calibration scale (noise)");
  synth->add_option("--kappa-e-2pi-mhz", kappa_e_mhz, "External rate / 2pi in MHz (reflection)");
  synth->add_option("--span-linewidths", span_linewidths, "Half span in linewidths (reflection)");
  synth->add_option("--ripple", ripple, "Standing-wave ripple amplitude (reflection)");
  synth->add_option("--ripple-period-linewidths", ripple_period_linewidths, "Ripple period in linewidths (reflection)");
  synth->add_option("--ripple-phase", ripple_phase, "Ripple phase, rad (reflection)");

  // fits
  std::string data_path;
  auto* fit_noise = app.add_subcommand("fit-noise", "Fit gain scale and added noise to a thermometry dataset");
  fit_noise->add_option("dataset", data_path, "CSV (t_src_K,psd_quanta[,sigma]) or JSON dataset")->required();
  fit_noise->add_option("--frequency", frequency_text, "Signal frequency for CSV input, e.g. 7.151GHz");
  auto* fit_refl = app.add_subcommand("fit-reflection", "Fit a one-port reflection trace");
  fit_refl->add_option("trace", data_path, "CSV (freq_hz,re_s11,im_s11)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*eval) {
      const SweepSpec spec = detail::load_config(config_path, t_dev_text);
      validate_params(spec.params, spec.target);
      const double v = evaluate_target(spec.target, spec.params);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", precision, v);
      out << detail::value_name(spec.target) << " = " << buf << "\n";
      if (spec.target == Target::system_noise || spec.target == Target::chain_propagate) {
        out << "\n";
        detail::print_budget(out, make_chain(spec.params));
      } else if (spec.target == Target::added_noise) {
        const auto amp = make_amplifier(spec.params);
        const auto& c = amp.coupling();
        const double n_dev = thermal_occupancy(c.omega0(), Temperature(*spec.params.t_dev)).quanta();
        out << "\n" << line("%-16s %14s\n", "term", "quanta");
        out << line("%-16s %14.6f\n", "internal_bath", c.loss_ratio() * (2.0 * n_dev + 1.0));
        out << line("%-16s %14.6f\n", "quantum_limit", 0.5);
        out << line("%-16s %14.6f\n", "excess", amp.n_exc().quanta());
      }
      return 0;
    }

    if (*budget) {
      const SweepSpec spec = detail::load_config(config_path, t_dev_text);
      const Target t = spec.params.chain.empty() ? Target::system_noise : Target::chain_propagate;
      validate_params(spec.params, t);
      detail::print_budget(out, make_chain(spec.params));
      return 0;
    }

    if (*sweep) {
      SweepSpec spec = parse_config(read_text_file(config_path));
      if (spec.axes.empty()) throw ValidationError("axes", "a sweep needs one or two axes");
      std::string path = out_path;
      if (path.empty() && spec.output) path = spec.output->path;
      // --format, then the --out extension, then the config.
      std::string fmt = format;
      if (fmt.empty() && detail::ends_with(out_path, ".json")) fmt = "json";
      if (fmt.empty() && detail::ends_with(out_path, ".csv")) fmt = "csv";
      if (fmt.empty() && spec.output) fmt = spec.output->format;
      if (fmt.empty()) fmt = detail::ends_with(path, ".json") ? "json" : "csv";
      if (!contour_levels.empty() && spec.axes.size() != 2)
        throw ValidationError("--contour-levels", "contours need a 2-D sweep");
      if (!contour_levels.empty() && contour_out.empty())
        throw ValidationError("--contour-out", "required with --contour-levels");

      const SweepResult result = run_sweep(spec, {workers, timestamp});
      detail::emit_text(path, emit(result, fmt), out);
      if (!path.empty() && path != "-")
        out << "sweep: " << result.values.size() << " points -> " << path << "\n";

      if (!contour_levels.empty()) {
        const auto lines = marching_squares(result.axes[0].values, result.axes[1].values, result.values,
                                            contour_levels);
        write_text_file(contour_out, contours_to_csv(lines, result.axes[0].name, result.axes[1].name));
        out << "contours: " << lines.size() << " polylines -> " << contour_out << "\n";
      }

      if (spec.target == Target::system_noise || spec.target == Target::chain_propagate) {
        const auto bad = audit_monotonicity(result);
        if (!bad.empty()) {
          for (const auto& v : bad)
            err << "monotonicity audit: along " << result.axes[v.axis].name << " at grid index " << v.index
                << " value goes " << format_number(v.before) << " -> " << format_number(v.after) << "\n";
          return 2;
        }
      }
      return 0;
    }

    if (*synth) {
      const Frequency f(parse_quantity(frequency_text, Quantity::frequency, "--frequency"));
      if (kind == "noise") {
        const double t_dev = parse_quantity(synth_t_dev, Quantity::temperature, "--t-dev");
        const auto grid = detail::linspace_temperatures(
            parse_quantity(t_min_text, Quantity::temperature, "--t-min"),
            parse_quantity(t_max_text, Quantity::temperature, "--t-max"), points ? points : 20);
        const AmplifierSpec amp(ResonatorCoupling::from_ratio(kTwoPi * 65e6, coupling_ratio, f), Occupancy(n_exc));
        const auto ds = synth_noise_sweep(amp, Temperature(t_dev), grid, gain_scale, rel_noise.value_or(0.01), seed);
        const bool json = detail::ends_with(out_path, ".json");
        detail::emit_text(out_path, json ? noise_dataset_to_json(ds).dump(1) + "\n" : noise_dataset_to_csv(ds), out);
      } else {
        const int n = points ? points : 201;
        if (n < 5) throw ValidationError("--points", "need at least 5 points");
        if (!(span_linewidths > 0.0)) throw ValidationError("--span-linewidths", "must be positive");
        if (!(ripple_period_linewidths > 0.0)) throw ValidationError("--ripple-period-linewidths", "must be positive");
        const auto c = ResonatorCoupling::from_ratio(kTwoPi * kappa_e_mhz * 1e6, coupling_ratio, f);
        const double width_hz = c.kappa() / kTwoPi;
        std::vector<double> grid(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
          grid[k] = f.hertz() + span_linewidths * width_hz * (2.0 * k / (n - 1) - 1.0);
        ReflectionBackground bg;
        bg.ripple_amplitude = ripple;
        bg.ripple_period_hz = ripple_period_linewidths * width_hz;
        bg.ripple_phase = ripple_phase;
        const auto trace = synth_reflection_trace(c, grid, bg, rel_noise.value_or(0.005), seed);
        detail::emit_text(out_path, reflection_trace_to_csv(trace), out);
      }
      return 0;
    }

    if (*fit_noise) {
      const std::string text = read_text_file(data_path);
      const NoiseSweepDataset ds =
          detail::ends_with(data_path, ".json")
              ? noise_dataset_from_json([&] {
                  try {
                    return nlohmann::json::parse(text);
                  } catch (const nlohmann::json::parse_error& e) {
                    throw ValidationError(data_path, e.what());
                  }
                }())
              : noise_dataset_from_csv(text, Frequency(parse_quantity(frequency_text, Quantity::frequency, "--frequency")));
      const auto fit = fit_noise_thermometry(ds);
      out << line("%-14s %s (%d iterations)\n", "converged", fit.converged ? "yes" : "no", fit.iterations);
      out << line("%-14s %d\n", "points", static_cast<int>(ds.points.size()));
      out << line("%-14s %.8g +/- %.3g\n", "gain_scale", fit.gain_scale, fit.gain_scale_sigma());
      out << line("%-14s %.8g +/- %.3g\n", "n_add", fit.n_add, fit.n_add_sigma());
      out << line("%-14s %.6g\n", "residual_norm", fit.residual_norm);
      if (!fit.converged) throw detail::ConvergenceFailure("noise fit did not converge");
      return 0;
    }

    if (*fit_refl) {
      const auto trace = reflection_trace_from_csv(read_text_file(data_path));
      const auto fit = fit_reflection(trace);
      const double mhz = kTwoPi * 1e6;
      out << line("%-16s %s (%d iterations)\n", "converged", fit.converged ? "yes" : "no", fit.iterations);
      out << line("%-16s %.9g +/- %.3g\n", "f0_GHz", fit.omega0.hertz() / 1e9, std::sqrt(fit.covariance(0, 0)) / 1e9);
      out << line("%-16s %.6g +/- %.3g\n", "kappa_e/2pi_MHz", fit.kappa_e / mhz, fit.kappa_e_sigma() / mhz);
      out << line("%-16s %.6g +/- %.3g\n", "kappa_i/2pi_MHz", fit.kappa_i / mhz, fit.kappa_i_sigma() / mhz);
      out << line("%-16s %.6g\n", "kappa_e/kappa", fit.kappa_e / (fit.kappa_e + fit.kappa_i));
      out << line("%-16s %.6g%+.6gi\n", "background", fit.background_offset.real(), fit.background_offset.imag());
      out << line("%-16s %.6g\n", "residual_norm", fit.residual_norm);
      if (!fit.converged) throw detail::ConvergenceFailure("reflection fit did not converge");
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DegenerateDesignError& e) {
    err << "error: degenerate design: " << e.what() << "\n";
    return 2;
  } catch (const detail::ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace radcool
