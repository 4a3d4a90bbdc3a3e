#pragma once

// Closed-form noise algebra of a radiatively-cooled parametric amplifier
// and of the lossy line that feeds it.

#include <limits>

#include "radcool/units.hpp"

namespace radcool {

/// External and internal energy decay rates of the amplifier resonance.
/// Rates are angular (rad/s).
class ResonatorCoupling {
 public:
  ResonatorCoupling(double kappa_e, double kappa_i, Frequency omega0)
      : kappa_e_(kappa_e), kappa_i_(kappa_i), omega0_(omega0) {
    detail::require_finite(kappa_e, "kappa_e");
    detail::require_finite(kappa_i, "kappa_i");
    if (kappa_e <= 0.0) throw DomainError("kappa_e must be positive (no radiative channel)");
    if (kappa_i < 0.0) throw DomainError("kappa_i must be non-negative");
  }

  /// Builds a coupling from kappa_e and the coupling ratio kappa_e / kappa in (0, 1].
  static ResonatorCoupling from_ratio(double kappa_e, double ratio, Frequency omega0) {
    detail::require_finite(ratio, "coupling ratio");
    if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("coupling ratio must lie in (0, 1]");
    return ResonatorCoupling(kappa_e, kappa_e * (1.0 - ratio) / ratio, omega0);
  }

  double kappa_e() const noexcept { return kappa_e_; }
  double kappa_i() const noexcept { return kappa_i_; }
  double kappa() const noexcept { return kappa_e_ + kappa_i_; }
  Frequency omega0() const noexcept { return omega0_; }

  double external_fraction() const noexcept { return kappa_e_ / kappa(); }
  double internal_fraction() const noexcept { return kappa_i_ / kappa(); }
  /// kappa_i / kappa_e
  double loss_ratio() const noexcept { return kappa_i_ / kappa_e_; }
  /// kappa / kappa_e
  double inverse_external_fraction() const noexcept { return kappa() / kappa_e_; }

 private:
  double kappa_e_;
  double kappa_i_;
  Frequency omega0_;
};

/// First-stage parametric amplifier. `gain` may be +inf for the high-gain limit.
class AmplifierSpec {
 public:
  AmplifierSpec(ResonatorCoupling coupling, Occupancy n_exc,
                double gain = std::numeric_limits<double>::infinity())
      : coupling_(coupling), n_exc_(n_exc), gain_(gain) {
    if (std::isnan(gain) || gain < 1.0) throw DomainError("amplifier gain must be >= 1");
  }

  const ResonatorCoupling& coupling() const noexcept { return coupling_; }
  Occupancy n_exc() const noexcept { return n_exc_; }
  double gain() const noexcept { return gain_; }

 private:
  ResonatorCoupling coupling_;
  Occupancy n_exc_;
  double gain_;
};

/// Power transmissions ahead of the amplifier and the temperatures of the
/// thermal fields they couple in.
class TransmissionPair {
 public:
  TransmissionPair(double alpha1, double alpha2, Temperature t_mxc = Temperature(0.01),
                   Temperature t_plate = Temperature(1.0))
      : alpha1_(alpha1), alpha2_(alpha2), t_mxc_(t_mxc), t_plate_(t_plate) {
    check(alpha1, "alpha1");
    check(alpha2, "alpha2");
  }

  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }
  Temperature t_mxc() const noexcept { return t_mxc_; }
  Temperature t_plate() const noexcept { return t_plate_; }

 private:
  static void check(double a, const char* name) {
    detail::require_finite(a, name);
    if (!(a > 0.0 && a <= 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1]");
  }

  double alpha1_;
  double alpha2_;
  Temperature t_mxc_;
  Temperature t_plate_;
};

/// Resonator mode occupancy under radiative cooling: a convex mix of the
/// external and internal bath occupancies weighted by the coupling fractions.
inline Occupancy mode_occupancy(const ResonatorCoupling& c, Occupancy n_e, Occupancy n_i) {
  return Occupancy(c.external_fraction() * n_e.quanta() + c.internal_fraction() * n_i.quanta());
}

/// Output occupancy of a phase-preserving amplifier, G n_s + (G - 1)(n_i + 1).
inline Occupancy phase_preserving_output_occupancy(double gain, Occupancy n_signal,
                                                   Occupancy n_idler) {
  if (std::isnan(gain) || gain < 1.0) throw DomainError("gain must be >= 1");
  return Occupancy(gain * n_signal.quanta() + (gain - 1.0) * (n_idler.quanta() + 1.0));
}

/// Output noise power in watts within bandwidth `bw`.
inline double output_psd(double g_total, Frequency f, Occupancy n_mode, Frequency bw) {
  if (std::isnan(g_total) || g_total < 1.0) throw DomainError("total gain must be >= 1");
  return bw.hertz() * f.photon_energy() * g_total * (2.0 * n_mode.quanta() + 1.0);
}

/// Input-referred added noise in the high-gain limit:
/// (ki/ke)(2 n_i(T_dev) + 1) + 0.5 + n_exc. The bath occupancy is taken at
/// the resonance frequency.
inline Occupancy added_noise(const ResonatorCoupling& c, Temperature t_dev, Occupancy n_exc) {
  const double n_i = thermal_occupancy(c.omega0(), t_dev).quanta();
  return Occupancy(c.loss_ratio() * (2.0 * n_i + 1.0) + 0.5 + n_exc.quanta());
}

inline Occupancy added_noise(const AmplifierSpec& amp, Temperature t_dev) {
  return added_noise(amp.coupling(), t_dev, amp.n_exc());
}

/// Increase in added noise caused by heating the device from t_low to t_high.
inline Occupancy delta_added_noise(const ResonatorCoupling& c, Frequency f, Temperature t_high,
                                   Temperature t_low) {
  if (t_high < t_low) throw DomainError("t_high must not be below t_low");
  const double dn = thermal_occupancy(f, t_high).quanta() - thermal_occupancy(f, t_low).quanta();
  return Occupancy(2.0 * c.loss_ratio() * dn);
}

/// Occupancy reaching the amplifier's external port through two lossy
/// sections. Thermal fields enter conjugated, hence the (n + 1) factors.
inline Occupancy effective_input_occupancy(const TransmissionPair& tp, Occupancy n_in,
                                           Frequency f) {
  const double a1 = tp.alpha1();
  const double a2 = tp.alpha2();
  const double h1 = thermal_occupancy(f, tp.t_mxc()).quanta();
  const double h2 = thermal_occupancy(f, tp.t_plate()).quanta();
  return Occupancy(a1 * a2 * n_in.quanta() + a2 * (1.0 - a1) * (h1 + 1.0) +
                   (1.0 - a2) * (h2 + 1.0));
}

/// Intracavity occupancy given the effective external-port occupancy and the
/// device temperature.
inline Occupancy intracavity_occupancy(const ResonatorCoupling& c, Occupancy n_e_eff,
                                       Temperature t_dev) {
  return mode_occupancy(c, n_e_eff, thermal_occupancy(c.omega0(), t_dev));
}

/// The three terms of the source-referred system noise.
struct SystemNoiseTerms {
  double amplifier;  // amplifier bracket over alpha1 alpha2
  double mxc_loss;   // loss at the mixing-chamber stage
  double plate_loss; // loss at the amplifier's plate
  double total() const noexcept { return amplifier + mxc_loss + plate_loss; }
};

inline SystemNoiseTerms system_noise_terms(const AmplifierSpec& amp, const TransmissionPair& tp,
                                           Temperature t_dev, Frequency f) {
  const auto& c = amp.coupling();
  const double a1 = tp.alpha1();
  const double a2 = tp.alpha2();
  const double n_dev = thermal_occupancy(f, t_dev).quanta();
  const double h1 = thermal_occupancy(f, tp.t_mxc()).quanta();
  const double h2 = thermal_occupancy(f, tp.t_plate()).quanta();
  const double k = c.inverse_external_fraction();

  SystemNoiseTerms terms{};
  terms.amplifier =
      (c.loss_ratio() * (2.0 * n_dev + 0.5) + amp.n_exc().quanta() + 1.0) / (a1 * a2);
  terms.mxc_loss = k * 2.0 * (1.0 - a1) / a1 * (h1 + 1.0);
  terms.plate_loss = k * 2.0 * (1.0 - a2) / (a1 * a2) * (h2 + 1.0);
  return terms;
}

/// Total readout-line noise referred to the signal source, in quanta, for an
/// amplifier preceded by two lossy sections (high-gain limit).
inline Occupancy system_noise(const AmplifierSpec& amp, const TransmissionPair& tp,
                              Temperature t_dev, Frequency f) {
  return Occupancy(system_noise_terms(amp, tp, t_dev, f).total());
}

/// SNR gain in dB from switching on a first stage with input-referred added
/// noise `n_add` and power gain `gain` ahead of a second stage whose
/// input-referred noise is `n_second_stage`.
inline double snr_improvement_db(double n_add, double gain, double n_second_stage) {
  detail::require_finite(n_add, "added noise");
  detail::require_finite(n_second_stage, "second-stage noise");
  if (n_second_stage <= 0.0) throw DomainError("second-stage noise must be positive");
  if (std::isnan(gain) || gain < 1.0) throw DomainError("gain must be >= 1");
  const double inv_g = 1.0 / gain;
  const double off = n_second_stage + 0.5;
  const double on = 0.5 + n_add * (1.0 - inv_g) + n_second_stage * inv_g;
  return linear_to_db(off / on);
}

inline double snr_improvement(const AmplifierSpec& amp, Temperature t_dev, Frequency f,
                              Occupancy n_second_stage) {
  if (!std::isfinite(amp.gain())) throw DomainError("snr_improvement requires a finite gain");
  const auto& c = amp.coupling();
  const double n_i = thermal_occupancy(f, t_dev).quanta();
  const double n_add = c.loss_ratio() * (2.0 * n_i + 1.0) + 0.5 + amp.n_exc().quanta();
  return snr_improvement_db(n_add, amp.gain(), n_second_stage.quanta());
}

}  // namespace radcool
