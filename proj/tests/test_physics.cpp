#include "rsswipt/channel.hpp"
#include "rsswipt/physics.hpp"

#include <gtest/gtest.h>

using namespace rsswipt;

namespace {

// Two IRs on orthogonal unit axes, one ER on the first axis, unit noise.
struct Toy {
  SystemConfig config;
  ChannelSet ch;
  Toy() {
    config.num_tx_antennas = 2;
    config.noise_power_ir = 1.0;
    config.total_power = 10.0;
    CVector e1(2), e2(2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    ch.ir_channels = {e1, e2};
    ch.er_channels = {e1};
  }
};

}  // namespace

TEST(Sinr, PrivateInterferenceAndCommon) {
  Toy t;
  auto p = PrecoderSet::zeros(2, 2, 1);
  p.priv[0] << 1.0, 0.0;  // |h1^H p1|^2 = 1
  p.priv[1] << 1.0, 1.0;  // leaks 1 into IR-1, 1 into IR-2
  p.common << 2.0, 0.0;   // 4 at IR-1, 0 at IR-2
  EXPECT_DOUBLE_EQ(sinr_private(t.ch, p, 0), 1.0 / (1.0 + 1.0));
  EXPECT_DOUBLE_EQ(sinr_private(t.ch, p, 1), 1.0 / (0.0 + 1.0));
  EXPECT_DOUBLE_EQ(sinr_common(t.ch, p, 0), 4.0 / (1.0 + 1.0 + 1.0));
  EXPECT_DOUBLE_EQ(sinr_common(t.ch, p, 1), 0.0);
}

TEST(Rates, UnitSinrIsOneBit) {
  Toy t;
  auto p = PrecoderSet::zeros(2, 2, 1);
  p.priv[1] << 0.0, 1.0;
  const auto r = achievable_rates(t.ch, p);
  EXPECT_DOUBLE_EQ(r.private_rates[1], 1.0);
  EXPECT_DOUBLE_EQ(r.private_rates[0], 0.0);
  EXPECT_DOUBLE_EQ(r.common_rate_bound, 0.0);
}

TEST(Rates, CommonBoundIsMinimum) {
  Toy t;
  auto p = PrecoderSet::zeros(2, 2, 1);
  p.common << 3.0, 1.0;
  const auto r = achievable_rates(t.ch, p);
  EXPECT_DOUBLE_EQ(r.common_rates[0], std::log2(10.0));
  EXPECT_DOUBLE_EQ(r.common_rates[1], 1.0);
  EXPECT_DOUBLE_EQ(r.common_rate_bound, 1.0);
}

TEST(Energy, HarvestedCountsEveryStream) {
  Toy t;
  t.config.harvest_efficiency = 0.5;
  auto p = PrecoderSet::zeros(2, 2, 1);
  p.common << 1.0, 0.0;
  p.priv[0] << 2.0, 5.0;
  p.energy[0] << cplx(0.0, 3.0), 0.0;
  EXPECT_DOUBLE_EQ(harvested_energy(t.ch, p, t.config, 0), 0.5 * (1.0 + 4.0 + 9.0));
  EXPECT_DOUBLE_EQ(total_harvested_energy(t.ch, p, t.config), 7.0);
}

TEST(Energy, LosMaximumIsFortyMicrowatts) {
  SystemConfig c;
  c.total_power = units::dbm_to_watts(10.0);
  const auto ch = build_los_channels({}, 4);
  EXPECT_NEAR(max_harvestable_energy(ch, c), 40e-6, 1e-15);

  // The bound is attained by MRT towards the ER with all power.
  auto p = PrecoderSet::zeros(4, 2, 1);
  p.energy[0] = ch.er_channels[0].normalized() * std::sqrt(c.total_power);
  EXPECT_NEAR(total_harvested_energy(ch, p, c), 40e-6, 1e-15);
}

TEST(Energy, MaximumNeverExceededByRandomPrecoders) {
  SystemConfig c;
  c.num_ers = 2;
  const auto ch = build_random_channels(4, 2, 2, 5);
  const double qmax = max_harvestable_energy(ch, c);
  ComplexGaussian rng(9);
  for (int t = 0; t < 200; ++t) {
    auto p = PrecoderSet::zeros(4, 2, 2);
    for (std::size_t s = 0; s < p.num_streams(); ++s) p.stream(s) = rng.vector(4);
    p = p.scaled(std::sqrt(c.total_power / total_transmit_power(p)));
    ASSERT_LE(total_harvested_energy(ch, p, c), qmax * (1 + 1e-12));
  }
}

TEST(WeightedSumRate, AddsSplitAndChecksBound) {
  Toy t;
  t.config.rate_weights = {2.0, 1.0};
  auto p = PrecoderSet::zeros(2, 2, 1);
  p.common << 1.0, 1.0;   // SINR_c = 1 at IR-1, 1/2 at IR-2 (p_2 interferes)
  p.priv[1] << 0.0, 1.0;  // R_2 = 1, no leakage into IR-1
  const CommonRateSplit ok{{0.25, 0.3}};
  const auto r = achievable_rates(t.ch, p);
  EXPECT_DOUBLE_EQ(r.common_rate_bound, std::log2(1.5));
  EXPECT_NEAR(weighted_sum_rate(t.config, t.ch, p, ok), 2.0 * 0.25 + 1.0 * (0.3 + 1.0), 1e-15);
  const CommonRateSplit too_much{{0.3, 0.3}};
  EXPECT_THROW(weighted_sum_rate(t.config, t.ch, p, too_much), InfeasibleError);
  const CommonRateSplit wrong_len{{0.5}};
  EXPECT_THROW(weighted_sum_rate(t.config, t.ch, p, wrong_len), DimensionError);
}
