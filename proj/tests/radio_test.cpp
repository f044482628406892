#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "wanet/radio.hpp"
#include "wanet/rng.hpp"

using wanet::RadioParams;

namespace {

RadioParams unit_params(double exponent = 2.0) {
  RadioParams p;
  p.transmit_power = 1.0;
  p.pathloss_constant = 1.0;
  p.pathloss_exponent = exponent;
  p.noise = 1.0;
  p.sensitivity_threshold = 1.0;
  return p;
}

RadioParams random_params(wanet::Rng& rng) {
  RadioParams p;
  p.transmit_power = std::exp(rng.uniform(-5, 5));
  p.pathloss_constant = std::exp(rng.uniform(-3, 3));
  p.pathloss_exponent = rng.uniform(2, 5);
  p.noise = std::exp(rng.uniform(-25, -5));
  p.sensitivity_threshold = std::exp(rng.uniform(-2, 4));
  p.interference_multiplier = rng.uniform(1, 4);
  return p;
}

} // namespace

TEST(ReceivedPower, DirectSubstitution) {
  RadioParams p = unit_params();
  p.transmit_power = 100;
  EXPECT_DOUBLE_EQ(wanet::received_power(p, 10), 1.0);
  EXPECT_DOUBLE_EQ(wanet::received_power(unit_params(4), 1), 1.0);
  p = unit_params();
  p.pathloss_constant = 2;
  EXPECT_DOUBLE_EQ(wanet::received_power(p, 10), 0.005);
}

TEST(ReceivedPower, ZeroDistanceIsAnError) {
  EXPECT_THROW(wanet::received_power(unit_params(), 0.0), wanet::Error);
  EXPECT_THROW(wanet::received_power(unit_params(), -1.0), wanet::Error);
}

TEST(ReceivedPower, MonotoneInDistanceAndPower) {
  wanet::Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    auto p = random_params(rng);
    const double r = rng.uniform(0.1, 1000);
    EXPECT_GT(wanet::received_power(p, r), wanet::received_power(p, r * 1.001));
    const double before = wanet::received_power(p, r);
    p.transmit_power *= 1.5;
    EXPECT_GT(wanet::received_power(p, r), before);
  }
}

TEST(LinkOk, InclusiveThreshold) {
  const auto p = unit_params();
  EXPECT_TRUE(wanet::link_ok(p, 1.0, 1.0));
  EXPECT_FALSE(wanet::link_ok(p, 1.01, 1.0));
  EXPECT_TRUE(wanet::link_ok(p, 0.5, 1.0));
}

TEST(TransmissionRange, ClosedForm) {
  EXPECT_DOUBLE_EQ(wanet::transmission_range(unit_params()), 1.0);
  auto p = unit_params();
  p.transmit_power = 16;
  EXPECT_DOUBLE_EQ(wanet::transmission_range(p), 4.0);
  p.pathloss_exponent = 4;
  EXPECT_DOUBLE_EQ(wanet::transmission_range(p), 2.0);
}

TEST(TransmissionRange, InvertsLinkCondition) {
  wanet::Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const auto p = random_params(rng);
    const double r = wanet::transmission_range(p);
    EXPECT_TRUE(wanet::link_ok(p, r * (1 - 1e-6), p.noise));
    EXPECT_FALSE(wanet::link_ok(p, r * (1 + 1e-6), p.noise));
    EXPECT_FALSE(wanet::link_ok(p, r * (1 + 1e-9), p.noise));
  }
}

TEST(InterferenceRange, ScalesTransmissionRange) {
  auto p = unit_params();
  p.transmit_power = 16;
  EXPECT_DOUBLE_EQ(wanet::interference_range(p), 8.0);
  p.interference_multiplier = 1.0;
  EXPECT_DOUBLE_EQ(wanet::interference_range(p), 4.0);
  p = unit_params();
  p.interference_multiplier = 3.0;
  EXPECT_DOUBLE_EQ(wanet::interference_range(p), 3.0);
}

TEST(NoiseForRange, ReproducesRequestedRange) {
  wanet::Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    auto p = random_params(rng);
    const double want = rng.uniform(1, 500);
    p.noise = wanet::noise_for_range(p, want);
    EXPECT_NEAR(wanet::transmission_range(p), want, want * 1e-12);
  }
}

TEST(SinrOk, Examples) {
  const auto p = unit_params();
  const double r_t = wanet::transmission_range(p);
  EXPECT_TRUE(wanet::sinr_ok(p, r_t, {}));
  // 1 / (1 + 1) = 0.5 < 1
  const std::vector<double> near{1.0};
  EXPECT_FALSE(wanet::sinr_ok(p, 1.0, near));
  // 1 / (0.01 + 1e-4) ~ 99 >= 1
  auto quiet = unit_params();
  quiet.noise = 0.01;
  const std::vector<double> far{100.0};
  EXPECT_TRUE(wanet::sinr_ok(quiet, 1.0, far));
}

TEST(SinrOk, EmptyInterferenceMatchesLinkOk) {
  wanet::Rng rng(9);
  for (int k = 0; k < 2000; ++k) {
    const auto p = random_params(rng);
    const double r = wanet::transmission_range(p) * rng.uniform(0.5, 1.5);
    EXPECT_EQ(wanet::sinr_ok(p, r, {}), wanet::link_ok(p, r, p.noise));
  }
}

TEST(SinrOk, AddingInterfererNeverHelps) {
  wanet::Rng rng(13);
  for (int k = 0; k < 2000; ++k) {
    const auto p = random_params(rng);
    const double r_t = wanet::transmission_range(p);
    const double r = r_t * rng.uniform(0.05, 1.2);
    std::vector<double> interferers;
    bool ok = wanet::sinr_ok(p, r, interferers);
    for (int m = 0; m < 5; ++m) {
      interferers.push_back(r_t * rng.uniform(0.1, 4.0));
      const bool now = wanet::sinr_ok(p, r, interferers);
      EXPECT_FALSE(!ok && now);
      ok = now;
    }
  }
}

TEST(RadioParamsValidate, HardAndSoftChecks) {
  auto p = unit_params();
  EXPECT_NO_THROW(p.check());
  EXPECT_TRUE(p.advisories().empty());
  p.pathloss_exponent = 6;
  EXPECT_NO_THROW(p.check());
  ASSERT_EQ(p.advisories().size(), 1u);
  std::vector<std::string> seen;
  wanet::set_warning_handler([&](std::string_view m) { seen.emplace_back(m); });
  p.validate();
  wanet::set_warning_handler({});
  EXPECT_EQ(seen.size(), 1u);

  p = unit_params();
  p.noise = 0;
  EXPECT_THROW(p.check(), wanet::Error);
  p = unit_params();
  p.interference_multiplier = 0.5;
  EXPECT_THROW(p.check(), wanet::Error);
  p = unit_params();
  p.transmit_power = -1;
  EXPECT_THROW(p.check(), wanet::Error);
}

TEST(SinrOk, PowerFormAgreesWithDistanceForm) {
  wanet::Rng rng(17);
  for (int k = 0; k < 2000; ++k) {
    const auto p = random_params(rng);
    const double r_t = wanet::transmission_range(p);
    const double r = r_t * rng.uniform(0.05, 1.2);
    std::vector<double> distances, powers;
    for (int m = 0, n = static_cast<int>(rng.below(6)); m < n; ++m) {
      distances.push_back(r_t * rng.uniform(0.1, 4.0));
      powers.push_back(wanet::received_power(p, distances.back()));
    }
    EXPECT_EQ(wanet::sinr_ok(p, r, distances),
              wanet::sinr_ok_powers(p, wanet::received_power(p, r), powers));
  }
}
