#include <gtest/gtest.h>

#include <random>

#include "radcool/physics.hpp"

namespace radcool {
namespace {

const Frequency kDevice = Frequency::gigahertz(7.151);
const double kKappaE = kTwoPi * 65e6;

ResonatorCoupling coupling(double ratio) { return ResonatorCoupling::from_ratio(kKappaE, ratio, kDevice); }
AmplifierSpec amp(double ratio, double n_exc) { return AmplifierSpec(coupling(ratio), Occupancy(n_exc)); }

TEST(ResonatorCoupling, Invariants) {
  EXPECT_THROW(ResonatorCoupling(0.0, 1.0, kDevice), DomainError);
  EXPECT_THROW(ResonatorCoupling(1.0, -1.0, kDevice), DomainError);
  EXPECT_THROW(ResonatorCoupling::from_ratio(kKappaE, 0.0, kDevice), DomainError);
  EXPECT_THROW(ResonatorCoupling::from_ratio(kKappaE, 1.1, kDevice), DomainError);
  const auto c = coupling(0.98);
  EXPECT_NEAR(c.external_fraction(), 0.98, 1e-15);
  EXPECT_NEAR(c.kappa_i() / kTwoPi, 65e6 * 0.02 / 0.98, 1e-6);
}

TEST(ModeOccupancy, ConvexCombination) {
  const auto ideal = ResonatorCoupling(kKappaE, 0.0, kDevice);
  EXPECT_EQ(mode_occupancy(ideal, Occupancy(3.0), Occupancy(100.0)).quanta(), 3.0);
  const auto split = ResonatorCoupling(kKappaE, kKappaE, kDevice);
  EXPECT_DOUBLE_EQ(mode_occupancy(split, Occupancy(0.0), Occupancy(2.0)).quanta(), 1.0);
  const double n_e = thermal_occupancy(kDevice, Temperature(0.13)).quanta();
  const double n_i = thermal_occupancy(kDevice, Temperature(1.0)).quanta();
  EXPECT_NEAR(mode_occupancy(coupling(0.98), Occupancy(n_e), Occupancy(n_i)).quanta(), 0.124154,
              1e-5);
}

TEST(ModeOccupancy, FixedPointAndBounds) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const auto c = coupling(0.01 + 0.99 * u(gen));
    const double a = 10.0 * u(gen), b = 10.0 * u(gen);
    EXPECT_NEAR(mode_occupancy(c, Occupancy(a), Occupancy(a)).quanta(), a, 1e-14 * (1.0 + a));
    const double m = mode_occupancy(c, Occupancy(a), Occupancy(b)).quanta();
    EXPECT_GE(m, std::min(a, b) - 1e-14);
    EXPECT_LE(m, std::max(a, b) + 1e-14);
  }
}

TEST(PhasePreserving, OutputOccupancy) {
  EXPECT_EQ(phase_preserving_output_occupancy(1.0, Occupancy(5.0), Occupancy(123.0)).quanta(), 5.0);
  EXPECT_EQ(phase_preserving_output_occupancy(10.0, Occupancy(1.0), Occupancy(1.0)).quanta(), 28.0);
  const double g = 1e9;
  EXPECT_NEAR(phase_preserving_output_occupancy(g, Occupancy(0.0), Occupancy(0.0)).quanta() / g, 1.0,
              1e-8);
  EXPECT_THROW(phase_preserving_output_occupancy(0.5, Occupancy(0.0), Occupancy(0.0)), DomainError);
}

TEST(OutputPsd, PhotonEnergyScaling) {
  const Frequency bw(1.0);
  const double base = output_psd(1.0, kDevice, Occupancy(0.0), bw);
  EXPECT_NEAR(base, 4.7383e-24, 1e-27);
  EXPECT_EQ(output_psd(2.0, kDevice, Occupancy(0.0), bw), 2.0 * base);
  EXPECT_EQ(output_psd(1.0, kDevice, Occupancy(0.5), bw), 2.0 * base);
  EXPECT_THROW(output_psd(0.9, kDevice, Occupancy(0.0), bw), DomainError);
}

TEST(AddedNoise, ReferenceValues) {
  const auto ideal = ResonatorCoupling(kKappaE, 0.0, kDevice);
  EXPECT_EQ(added_noise(ideal, Temperature(3.0), Occupancy(0.0)).quanta(), 0.5);
  EXPECT_NEAR(added_noise(coupling(0.98), Temperature(0.13), Occupancy(0.62)).quanta(), 1.1436, 1e-3);
  EXPECT_NEAR(added_noise(coupling(0.98), Temperature(0.13), Occupancy(0.62)).quanta(),
              1.1435448542468538, 1e-12);
  EXPECT_NEAR(added_noise(coupling(0.98), Temperature(1.5), Occupancy(0.62)).quanta(), 1.2992, 1e-3);
}

TEST(AddedNoise, Monotone) {
  for (double r : {0.5, 0.9, 0.98, 1.0}) {
    double prev = 0.0;
    for (double t = 0.0; t < 5.0; t += 0.1) {
      const double n = added_noise(coupling(r), Temperature(t), Occupancy(0.62)).quanta();
      EXPECT_GE(n, prev);
      prev = n;
    }
    EXPECT_DOUBLE_EQ(added_noise(ResonatorCoupling(kKappaE, 0.0, kDevice), Temperature(2.0),
                                 Occupancy(0.3)).quanta(), 0.8);
  }
  double prev = 1e9;
  for (double r = 0.05; r <= 1.0; r += 0.05) {  // kappa_i/kappa_e falls as r rises
    const double n = added_noise(coupling(r), Temperature(1.0), Occupancy(0.0)).quanta();
    EXPECT_LE(n, prev);
    prev = n;
  }
}

TEST(DeltaAddedNoise, ReferenceValues) {
  const auto c = coupling(0.98);
  EXPECT_EQ(delta_added_noise(c, kDevice, Temperature(1.0), Temperature(1.0)).quanta(), 0.0);
  EXPECT_NEAR(delta_added_noise(c, kDevice, Temperature(1.5), Temperature(0.13)).quanta(), 0.15562,
              1e-4);
  EXPECT_NEAR(delta_added_noise(coupling(0.90), kDevice, Temperature(1.5), Temperature(0.13)).quanta(),
              0.84728, 1e-3);
  EXPECT_THROW(delta_added_noise(c, kDevice, Temperature(0.1), Temperature(0.13)), DomainError);
}

TEST(DeltaAddedNoise, TelescopesAndMatchesAddedNoiseDifference) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const auto c = coupling(0.5 + 0.5 * u(gen));
    double t[3] = {3.0 * u(gen), 3.0 * u(gen), 3.0 * u(gen)};
    std::sort(t, t + 3);
    const auto d = [&](double hi, double lo) {
      return delta_added_noise(c, kDevice, Temperature(hi), Temperature(lo)).quanta();
    };
    EXPECT_NEAR(d(t[2], t[0]), d(t[2], t[1]) + d(t[1], t[0]), 1e-12);
    const double diff = added_noise(c, Temperature(t[2]), Occupancy(0.62)).quanta() -
                        added_noise(c, Temperature(t[0]), Occupancy(0.62)).quanta();
    EXPECT_NEAR(d(t[2], t[0]), diff, 1e-12);
  }
}

TEST(EffectiveInputOccupancy, ReferenceValues) {
  EXPECT_EQ(effective_input_occupancy(TransmissionPair(1.0, 1.0), Occupancy(3.0), kDevice).quanta(), 3.0);
  EXPECT_NEAR(effective_input_occupancy(TransmissionPair(0.9, 0.8), Occupancy(0.0), kDevice).quanta(),
              0.76846, 1e-4);
  EXPECT_NEAR(effective_input_occupancy(TransmissionPair(0.5, 1.0, Temperature(0.0)), Occupancy(0.0),
                                        kDevice).quanta(), 0.5, 1e-15);
  EXPECT_THROW(TransmissionPair(0.0, 1.0), DomainError);
  EXPECT_THROW(TransmissionPair(1.0, 1.2), DomainError);
}

TEST(IntracavityOccupancy, ReferenceValues) {
  EXPECT_EQ(intracavity_occupancy(ResonatorCoupling(kKappaE, 0.0, kDevice), Occupancy(2.0),
                                  Temperature(4.0)).quanta(), 2.0);
  EXPECT_NEAR(intracavity_occupancy(coupling(0.98), Occupancy(0.76846), Temperature(1.0)).quanta(),
              0.80194, 1e-4);
  const auto split = ResonatorCoupling(kKappaE, kKappaE, kDevice);
  const auto t4 = occupancy_to_temperature(kDevice, 4.0);
  EXPECT_NEAR(intracavity_occupancy(split, Occupancy(0.0), t4).quanta(), 2.0, 1e-9);
}

TEST(SystemNoise, ReferenceValues) {
  const auto a = amp(0.98, 0.62);
  const TransmissionPair tp(0.9, 0.8);
  EXPECT_NEAR(system_noise(a, tp, Temperature(1.0), kDevice).quanta(), 4.581, 0.002);
  EXPECT_NEAR(system_noise(a, tp, Temperature(1.0), kDevice).quanta(), 4.5808295286922197, 1e-12);
  EXPECT_NEAR(system_noise(a, tp, Temperature(4.0), kDevice).quanta(), 5.075, 0.002);
  const double one_db = db_to_linear(-1.0), one_half_db = db_to_linear(-1.5);
  EXPECT_NEAR(system_noise(a, TransmissionPair(one_db, one_db), Temperature(1.0), kDevice).quanta(),
              5.560, 0.005);
  EXPECT_NEAR(system_noise(a, TransmissionPair(one_half_db, one_half_db), Temperature(1.0), kDevice)
                  .quanta(), 8.387, 0.005);

  const auto terms = system_noise_terms(a, tp, Temperature(1.0), kDevice);
  EXPECT_NEAR(terms.amplifier, 2.403, 0.002);
  EXPECT_NEAR(terms.mxc_loss, 0.227, 0.002);
  EXPECT_NEAR(terms.plate_loss, 1.951, 0.002);
}

TEST(SystemNoise, LosslessLimit) {
  // At kappa_i = 0 the lossless line reduces to added noise plus the input vacuum.
  const AmplifierSpec ideal(ResonatorCoupling(kKappaE, 0.0, kDevice), Occupancy(0.62));
  for (double t : {0.0, 0.5, 1.0, 4.0}) {
    const double sys = system_noise(ideal, TransmissionPair(1.0, 1.0), Temperature(t), kDevice).quanta();
    EXPECT_NEAR(sys, added_noise(ideal, Temperature(t)).quanta() + 0.5, 1e-12);
  }
  // With internal loss the amplifier bracket carries (ki/ke)/2 less than
  // added noise + 0.5 does.
  for (double r : {0.5, 0.9, 0.98}) {
    const auto a = amp(r, 0.62);
    const double sys = system_noise(a, TransmissionPair(1.0, 1.0), Temperature(1.0), kDevice).quanta();
    const double ref = added_noise(a, Temperature(1.0)).quanta() + 0.5;
    EXPECT_NEAR(ref - sys, 0.5 * a.coupling().loss_ratio(), 1e-12);
  }
}

TEST(SystemNoise, Monotonicity) {
  const auto eval = [](double r, double nexc, double a1, double a2, double t) {
    return system_noise(amp(r, nexc), TransmissionPair(a1, a2), Temperature(t), kDevice).quanta();
  };
  for (int k = 0; k < 10; ++k) {
    const double a = 0.5 + 0.05 * k, b = 0.5 + 0.05 * (k + 1);
    EXPECT_GE(eval(0.98, 0.62, a, 0.8, 1.0), eval(0.98, 0.62, b, 0.8, 1.0));
    EXPECT_GE(eval(0.98, 0.62, 0.9, a, 1.0), eval(0.98, 0.62, 0.9, b, 1.0));
  }
  for (double t = 0.0; t < 5.0; t += 0.25)
    EXPECT_LE(eval(0.98, 0.62, 0.9, 0.8, t), eval(0.98, 0.62, 0.9, 0.8, t + 0.25));
  for (int k = 0; k < 10; ++k)
    EXPECT_GE(eval(0.5 + 0.05 * k, 0.62, 0.9, 0.8, 1.0), eval(0.55 + 0.05 * k, 0.62, 0.9, 0.8, 1.0));
  for (double n = 0.0; n < 2.0; n += 0.1)
    EXPECT_LE(eval(0.98, n, 0.9, 0.8, 1.0), eval(0.98, n + 0.1, 0.9, 0.8, 1.0));
}

TEST(SnrImprovement, Examples) {
  EXPECT_NEAR(snr_improvement_db(35.0, std::numeric_limits<double>::infinity(), 35.0), 0.0, 1e-12);
  EXPECT_NEAR(snr_improvement_db(1.14, 1.0, 35.0), 0.0, 1e-12);
  EXPECT_NEAR(snr_improvement_db(1.14, std::pow(10.0, 2.7), 35.0), 13.2, 0.05);
  EXPECT_THROW(snr_improvement_db(1.0, 10.0, 0.0), DomainError);

  const AmplifierSpec finite(coupling(0.98), Occupancy(0.62), std::pow(10.0, 2.7));
  const double n_add = added_noise(finite, Temperature(0.13)).quanta();
  EXPECT_DOUBLE_EQ(snr_improvement(finite, Temperature(0.13), kDevice, Occupancy(35.0)),
                   snr_improvement_db(n_add, finite.gain(), 35.0));
  EXPECT_THROW(snr_improvement(amp(0.98, 0.62), Temperature(0.13), kDevice, Occupancy(35.0)),
               DomainError);
}

}  // namespace
}  // namespace radcool
