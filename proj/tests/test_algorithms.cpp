#include "rsswipt/algorithms.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace rsswipt;

namespace {

constexpr double pi = std::numbers::pi;

SystemConfig los_config(double e_th_uw) {
  SystemConfig c;
  c.total_power = units::dbm_to_watts(10.0);
  c.noise_power_ir = units::dbm_to_watts(-30.0);
  c.energy_threshold = units::microwatts(e_th_uw);
  return c;
}

ChannelSet los_channels(double gamma = 1.0, double theta = 4 * pi / 9, double beta = 2 * pi / 9) {
  DeterministicChannelSpec s;
  s.gamma = gamma;
  s.theta = theta;
  s.beta = beta;
  return build_los_channels(s, 4);
}

AlgorithmConfig few_starts(std::size_t random_starts) {
  AlgorithmConfig a;
  a.num_random_starts = random_starts;
  return a;
}

struct Random {
  SystemConfig config;
  ChannelSet channels;
};

Random random_scenario(std::uint64_t seed) {
  ComplexGaussian rng(seed);
  Random r;
  r.config.num_tx_antennas = 2 + seed % 3;
  r.config.total_power = 0.5 + 2.0 * rng.uniform();
  r.config.noise_power_ir = 0.2 + rng.uniform();
  r.config.harvest_efficiency = 0.5;
  r.config.rate_weights = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
  r.channels = build_random_channels(r.config.num_tx_antennas, 2, 1, seed + 100);
  r.config.energy_threshold = 0.6 * rng.uniform() * max_harvestable_energy(r.channels, r.config);
  return r;
}

void check_traces(const ConvergenceLedger& l, double tol) {
  for (std::size_t i = 1; i < l.outer_trace.size(); ++i) EXPECT_GE(l.outer_trace[i], l.outer_trace[i - 1] - tol);
  for (const auto& t : l.inner_traces)
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LE(t[i], t[i - 1] + tol);
}

}  // namespace

TEST(Init, FullPowerAndPinnedStreams) {
  const auto c = los_config(35);
  const auto ch = los_channels();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto rs = initialize_precoders(c, ch, Strategy::rs(), i);
    EXPECT_NEAR(total_transmit_power(rs), c.total_power, 1e-15);
    const auto mulp = initialize_precoders(c, ch, Strategy::mulp(), i);
    EXPECT_EQ(mulp.common.norm(), 0.0);
    EXPECT_NEAR(total_transmit_power(mulp), c.total_power, 1e-15);
    const auto sc = initialize_precoders(c, ch, Strategy::scsic(1, 0), i);
    EXPECT_EQ(sc.priv[1].norm(), 0.0);
    EXPECT_GT(sc.common.norm(), 0.0);
  }
}

TEST(Init, DeterministicStartIsMrt) {
  const auto c = los_config(0);
  const auto ch = los_channels();
  const auto p = initialize_precoders(c, ch, Strategy::rs(), 0);
  for (std::size_t k = 0; k < 2; ++k)
    EXPECT_NEAR(std::abs(ch.ir_channels[k].dot(p.priv[k])), ch.ir_channels[k].norm() * p.priv[k].norm(), 1e-15);
  EXPECT_NEAR(power_breakdown(p).common, 0.4 * c.total_power, 1e-15);
}

TEST(Init, SameIndexSameStartDifferentIndexDifferent) {
  const auto c = los_config(0);
  const auto ch = los_channels();
  EXPECT_TRUE(initialize_precoders(c, ch, Strategy::rs(), 3) == initialize_precoders(c, ch, Strategy::rs(), 3));
  EXPECT_FALSE(initialize_precoders(c, ch, Strategy::rs(), 3) == initialize_precoders(c, ch, Strategy::rs(), 4));
  EXPECT_NE(start_seed(1, 1), start_seed(1, 2));
}

TEST(Init, ScSicNeedsTwoIrsAndAPermutation) {
  auto c = los_config(0);
  const auto ch = los_channels();
  EXPECT_THROW(initialize_precoders(c, ch, Strategy::scsic(0, 0), 0), InvariantError);
  c.num_irs = 1;
  c.rate_weights = {1.0};
  ChannelSet one = ch;
  one.ir_channels.resize(1);
  EXPECT_THROW(initialize_precoders(c, one, Strategy::scsic(1, 0), 0), InvariantError);
}

TEST(Restore, ReachesThresholdAtFullPower) {
  const auto ch = los_channels();
  for (double e : {10.0, 35.0, 39.9, 40.0}) {
    const auto c = los_config(e);
    for (auto s : {Strategy::rs(), Strategy::mulp(), Strategy::scsic(1, 0)}) {
      const auto p0 = initialize_precoders(c, ch, s, 2);
      const auto p = restore_energy_feasibility(c, ch, s, p0);
      EXPECT_GE(total_harvested_energy(ch, p, c), c.energy_threshold * (1 - 1e-12)) << e;
      EXPECT_NEAR(total_transmit_power(p), c.total_power, 1e-14);
      if (s.kind == StrategyKind::MULP) EXPECT_EQ(p.common.norm(), 0.0);
    }
  }
}

TEST(Restore, FeasibleInputUnchangedAndImpossibleThresholdThrows) {
  const auto ch = los_channels();
  const auto low = los_config(0.001);
  const auto p0 = initialize_precoders(low, ch, Strategy::rs(), 0);
  EXPECT_TRUE(restore_energy_feasibility(low, ch, Strategy::rs(), p0) == p0);
  const auto high = los_config(41);
  EXPECT_THROW(restore_energy_feasibility(high, ch, Strategy::rs(), p0), InfeasibleError);
}

TEST(Split, WithinBoundAndSurplusByWeight) {
  auto c = los_config(0);
  c.rate_weights = {1.0, 3.0};
  const auto ch = los_channels();
  const auto eff = effective_channels(c, ch);
  const auto p = initialize_precoders(c, ch, Strategy::rs(), 0);
  const double bound = achievable_rates(eff, p).common_rate_bound;
  const auto s = recover_split(c, eff, p, Strategy::rs(), {0.0, 0.0});
  EXPECT_NEAR(s.sum(), bound, 1e-12);
  EXPECT_NEAR(s.portions[1], 3.0 * s.portions[0], 1e-12);
  const auto over = recover_split(c, eff, p, Strategy::rs(), {-bound, -bound});
  EXPECT_NEAR(over.portions[0], 0.5 * bound, 1e-12);
  EXPECT_NEAR(over.sum(), bound, 1e-12);
  const auto sc = recover_split(c, eff, p, Strategy::scsic(1, 0), {-0.1, 0.0});
  EXPECT_EQ(sc.portions[0], 0.0);
  EXPECT_NEAR(sc.portions[1], bound, 1e-12);
  const auto mulp = recover_split(c, eff, p, Strategy::mulp(), {-0.1, -0.1});
  EXPECT_EQ(mulp.sum(), 0.0);
}

// MRT with all power is optimal for one IR: log2(1 + P_t ||h||^2 / sigma^2) = log2(41).
TEST(Ao, SingleUserClosedForm) {
  auto c = los_config(0);
  c.num_irs = 1;
  c.num_ers = 0;
  c.rate_weights = {1.0};
  auto ch = los_channels();
  ch.ir_channels.resize(1);
  ch.er_channels.clear();
  for (auto s : {Strategy::rs(), Strategy::mulp()}) {
    const auto rp = ao_outer_loop(c, ch, s, few_starts(2));
    EXPECT_NEAR(rp.wsr, std::log2(41.0), 1e-2);
    EXPECT_LE(rp.wsr, std::log2(41.0) + 1e-9);
  }
}

// Identical IR channels: the sum capacity is the single-user value, reached
// by every strategy.
TEST(Ao, IdenticalChannelsAllReachSingleUserRate) {
  auto c = los_config(0);
  c.num_ers = 0;
  auto ch = los_channels(1.0, 0.0);
  ch.er_channels.clear();
  const auto suite = run_strategy_suite(c, ch, few_starts(2));
  for (const auto& [k, o] : suite) {
    ASSERT_TRUE(o.point) << to_string(k) << " " << o.message;
    EXPECT_NEAR(o.point->wsr, std::log2(41.0), 1e-2) << to_string(k);
    EXPECT_LE(o.point->wsr, std::log2(41.0) + 1e-9);
  }
}

TEST(Ao, RsAtLeastMulpOnOrthogonalChannels) {
  const auto c = los_config(0);
  const auto ch = los_channels(1.0, pi / 2);
  const auto suite = run_strategy_suite(c, ch, few_starts(1), {StrategyKind::RS, StrategyKind::MULP});
  ASSERT_TRUE(suite.at(StrategyKind::RS).point);
  ASSERT_TRUE(suite.at(StrategyKind::MULP).point);
  EXPECT_GE(suite.at(StrategyKind::RS).point->wsr, suite.at(StrategyKind::MULP).point->wsr - 1e-9);
  // Orthogonal IRs: interference-free MRT with equal power is optimal for u = [1, 1].
  EXPECT_NEAR(suite.at(StrategyKind::MULP).point->wsr, 2.0 * std::log2(21.0), 1e-3);
}

TEST(Ao, MonotoneTracesOnRandomScenarios) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto r = random_scenario(seed);
    for (auto s : {Strategy::rs(), Strategy::mulp(), Strategy::scsic(1, 0)}) {
      const auto rp = ao_outer_loop(r.config, r.channels, s, few_starts(0));
      check_traces(rp.ledger, 1e-9);
    }
  }
}

TEST(Ao, OutputIsFeasible) {
  const auto c = los_config(35);
  const auto ch = los_channels();
  const auto eff = effective_channels(c, ch);
  for (auto s : {Strategy::rs(), Strategy::mulp(), Strategy::scsic(1, 0)}) {
    const auto rp = ao_outer_loop(c, ch, s, few_starts(1));
    EXPECT_GE(rp.harvested_energy_total, c.energy_threshold - 1e-12);
    EXPECT_LE(rp.power.total(), c.total_power * (1 + 1e-12));
    EXPECT_LE(rp.common_rate_split.sum(), achievable_rates(eff, rp.precoders).common_rate_bound + 1e-9);
    for (auto x : rp.common_rate_split.portions) EXPECT_GE(x, 0.0);
    // The power budget is active at a WSR optimum.
    EXPECT_NEAR(rp.power.total(), c.total_power, 1e-6 * c.total_power);
    EXPECT_NEAR(rp.wsr, weighted_sum_rate(c, eff, rp.precoders, rp.common_rate_split), 1e-12);
    EXPECT_EQ(rp.starts.size(), 2u);
    EXPECT_FALSE(rp.best_start.empty());
  }
}

TEST(Ao, ThresholdAboveMaximumIsInfeasible) {
  const auto c = los_config(45);
  EXPECT_THROW(ao_outer_loop(c, los_channels(), Strategy::rs(), few_starts(0)), InfeasibleError);
  const auto suite = run_strategy_suite(c, los_channels(), few_starts(0));
  for (const auto& [k, o] : suite) {
    EXPECT_EQ(o.status, "infeasible") << to_string(k);
    EXPECT_FALSE(o.point);
  }
}

// At E^th = q_max the feasible set has no interior; every strategy still
// returns a point that harvests the threshold with full power.
TEST(Ao, EnergyBoundaryIsSolvedExactly) {
  const auto c = los_config(40);
  const auto ch = los_channels();
  const auto eff = effective_channels(c, ch);
  for (auto s : {Strategy::rs(), Strategy::mulp(), Strategy::scsic(1, 0)}) {
    const auto rp = ao_outer_loop(c, ch, s, few_starts(1));
    EXPECT_GE(rp.harvested_energy_total, c.energy_threshold * (1 - 1e-12)) << to_string(s.kind);
    EXPECT_NEAR(rp.power.total(), c.total_power, 1e-12 * c.total_power);
    EXPECT_NEAR(rp.wsr, weighted_sum_rate(c, eff, rp.precoders, rp.common_rate_split), 1e-9);
    EXPECT_GT(rp.wsr, 0.0);
  }
  // The boundary feasible set is contained in the one slightly inside it.
  const auto inside = ao_outer_loop(los_config(39.9), ch, Strategy::rs(), few_starts(1));
  const auto at = ao_outer_loop(c, ch, Strategy::rs(), few_starts(1));
  EXPECT_GE(inside.wsr, at.wsr - 1e-3);
}

TEST(Ao, DeterministicLedgers) {
  const auto r = random_scenario(3);
  auto a = ao_outer_loop(r.config, r.channels, Strategy::rs(), few_starts(1));
  auto b = ao_outer_loop(r.config, r.channels, Strategy::rs(), few_starts(1));
  a.ledger.wall_time = b.ledger.wall_time = 0.0;
  EXPECT_TRUE(a == b);
}

TEST(Ao, SeededStartNeverLosesToItsSeed) {
  const auto c = los_config(20);
  const auto ch = los_channels();
  const auto mulp = ao_outer_loop(c, ch, Strategy::mulp(), few_starts(0));
  const auto rs = ao_outer_loop(c, ch, Strategy::rs(), few_starts(0), {{"MULP", mulp.precoders}});
  EXPECT_GE(rs.wsr, mulp.wsr - 1e-9);
  EXPECT_EQ(rs.starts.back().label, "seed-MULP");
}

TEST(Ao, RejectsInvalidAlgorithmConfig) {
  AlgorithmConfig a;
  a.inner_tolerance = 0.0;
  EXPECT_THROW(ao_outer_loop(los_config(0), los_channels(), Strategy::rs(), a), InvariantError);
}

TEST(Suite, ScSicTriesBothOrders) {
  const auto c = los_config(10);
  const auto ch = los_channels(0.3, pi / 3);
  const auto suite = run_strategy_suite(c, ch, few_starts(0), {StrategyKind::SCSIC});
  ASSERT_TRUE(suite.at(StrategyKind::SCSIC).point);
  const auto a = ao_outer_loop(c, ch, Strategy::scsic(1, 0), few_starts(0));
  const auto b = ao_outer_loop(c, ch, Strategy::scsic(0, 1), few_starts(0));
  EXPECT_NEAR(suite.at(StrategyKind::SCSIC).point->wsr, std::max(a.wsr, b.wsr), 1e-12);
  EXPECT_EQ(default_scsic_order(c, ch).decoding_order[0], 1u);
}
