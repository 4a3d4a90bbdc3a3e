#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace radcool {

// CODATA 2018 exact values.
inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a structured input violates its schema. `path()` names the field.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class UnitError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}
}  // namespace detail

/// Cyclic frequency in hertz. Strictly positive and finite.
class Frequency {
 public:
  explicit Frequency(double hz) : hz_(hz) {
    detail::require_finite(hz, "frequency");
    if (hz <= 0.0) throw DomainError("frequency must be strictly positive");
  }
  static Frequency gigahertz(double ghz) { return Frequency(ghz * 1e9); }
  static Frequency megahertz(double mhz) { return Frequency(mhz * 1e6); }

  double hertz() const noexcept { return hz_; }
  double angular() const noexcept { return kTwoPi * hz_; }
  /// Photon energy h·f in joules.
  double photon_energy() const noexcept { return kPlanck * hz_; }

  friend bool operator==(Frequency, Frequency) = default;

 private:
  double hz_;
};

/// Absolute temperature in kelvin. Non-negative and finite.
class Temperature {
 public:
  explicit Temperature(double kelvin) : k_(kelvin) {
    detail::require_finite(kelvin, "temperature");
    if (kelvin < 0.0) throw DomainError("temperature must be non-negative");
  }
  static Temperature millikelvin(double mk) { return Temperature(mk * 1e-3); }

  double kelvin() const noexcept { return k_; }

  friend auto operator<=>(Temperature, Temperature) = default;

 private:
  double k_;
};

/// Mean photon number in quanta. Non-negative and finite.
class Occupancy {
 public:
  explicit Occupancy(double quanta) : n_(quanta) {
    detail::require_finite(quanta, "occupancy");
    if (quanta < 0.0) throw DomainError("occupancy must be non-negative");
  }

  double quanta() const noexcept { return n_; }

  friend auto operator<=>(Occupancy, Occupancy) = default;

 private:
  double n_;
};

inline double db_to_linear(double x_db) {
  detail::require_finite(x_db, "decibel value");
  return std::pow(10.0, x_db / 10.0);
}

inline double linear_to_db(double ratio) {
  detail::require_finite(ratio, "linear ratio");
  if (ratio <= 0.0) throw DomainError("linear ratio must be strictly positive");
  return 10.0 * std::log10(ratio);
}

/// Bose-Einstein occupancy 1/(exp(hf/kT) - 1). Exactly zero at T = 0.
inline Occupancy thermal_occupancy(Frequency f, Temperature t) {
  if (t.kelvin() == 0.0) return Occupancy(0.0);
  const double x = f.photon_energy() / (kBoltzmann * t.kelvin());
  return Occupancy(1.0 / std::expm1(x));
}

/// Inverse of thermal_occupancy.
inline Temperature occupancy_to_temperature(Frequency f, double n) {
  detail::require_finite(n, "occupancy");
  if (n < 0.0) throw DomainError("occupancy must be non-negative");
  if (n == 0.0) return Temperature(0.0);
  return Temperature(f.photon_energy() / (kBoltzmann * std::log1p(1.0 / n)));
}

inline Temperature occupancy_to_temperature(Frequency f, Occupancy n) {
  return occupancy_to_temperature(f, n.quanta());
}

}  // namespace radcool
