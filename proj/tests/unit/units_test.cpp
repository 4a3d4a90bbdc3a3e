#include <gtest/gtest.h>

#include <limits>

#include "radcool/units.hpp"

namespace radcool {
namespace {

const Frequency kDevice = Frequency::gigahertz(7.151);

// Frozen values from tests/oracle/oracle.py (40-digit evaluation).
TEST(ThermalOccupancy, MatchesHighPrecisionOracle) {
  EXPECT_EQ(thermal_occupancy(kDevice, Temperature(0.0)).quanta(), 0.0);
  EXPECT_NEAR(thermal_occupancy(kDevice, Temperature(1.0)).quanta(), 2.4423484441937, 1e-9);
  EXPECT_NEAR(thermal_occupancy(kDevice, Temperature(0.13)).quanta(), 0.076848929047917, 1e-11);
  EXPECT_NEAR(thermal_occupancy(kDevice, Temperature(4.0)).quanta(), 11.162368753814, 1e-9);
  EXPECT_NEAR(kDevice.photon_energy() / kBoltzmann, 0.34319387217642, 1e-13);
}

TEST(ThermalOccupancy, MonotoneAndRayleighJeans) {
  double prev = -1.0;
  for (double t = 0.0; t < 50.0; t += 0.05) {
    const double n = thermal_occupancy(kDevice, Temperature(t)).quanta();
    EXPECT_GE(n, prev);
    prev = n;
  }
  // n = x - 1/2 + 1/(12 x) + O(x^-3) with x = kT/hf, so the plain
  // Rayleigh-Jeans form is within 1e-3 only once x exceeds ~83.4.
  const double hf_over_k = kDevice.photon_energy() / kBoltzmann;
  for (double ratio : {51.0, 80.0, 200.0, 1000.0}) {
    const double n = thermal_occupancy(kDevice, Temperature(ratio * hf_over_k)).quanta();
    EXPECT_LT(std::abs(n - (ratio - 0.5 + 1.0 / (12.0 * ratio))), 1e-6) << ratio;
  }
  for (double ratio : {84.0, 200.0, 1000.0}) {
    const double n = thermal_occupancy(kDevice, Temperature(ratio * hf_over_k)).quanta();
    EXPECT_LT(std::abs(n - (ratio - 0.5)), 1e-3) << ratio;
  }
}

TEST(ThermalOccupancy, RejectsNonFinite) {
  EXPECT_THROW(Temperature(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(Temperature(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(Temperature(-1e-3), DomainError);
  EXPECT_THROW(Frequency(0.0), DomainError);
  EXPECT_THROW(Occupancy(-0.1), DomainError);
}

TEST(OccupancyToTemperature, InvertsBoseEinstein) {
  EXPECT_EQ(occupancy_to_temperature(kDevice, 0.0).kelvin(), 0.0);
  EXPECT_NEAR(occupancy_to_temperature(kDevice, 2.4423).kelvin(), 1.0, 1e-3);
  EXPECT_NEAR(occupancy_to_temperature(kDevice, 0.076845).kelvin(), 0.13, 1e-4);
  for (double n : {1e-6, 0.01, 0.5, 3.0, 40.0, 1e4}) {
    const auto t = occupancy_to_temperature(kDevice, n);
    EXPECT_NEAR(thermal_occupancy(kDevice, t).quanta() / n, 1.0, 1e-9) << n;
  }
  EXPECT_THROW(occupancy_to_temperature(kDevice, -1.0), DomainError);
}

TEST(Decibels, Conversions) {
  EXPECT_EQ(db_to_linear(0.0), 1.0);
  EXPECT_NEAR(db_to_linear(-1.0), 0.794328, 1e-6);
  EXPECT_NEAR(db_to_linear(-1.5), 0.707946, 1e-6);
  for (double x = -60.0; x <= 60.0; x += 0.37)
    EXPECT_NEAR(linear_to_db(db_to_linear(x)), x, 1e-12 * std::max(1.0, std::abs(x)));
  EXPECT_THROW(db_to_linear(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(linear_to_db(0.0), DomainError);
}

}  // namespace
}  // namespace radcool
