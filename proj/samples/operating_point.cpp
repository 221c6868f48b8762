// Runs the three strategies at the 35 uW operating point and prints the
// power allocation of each solution.

#include "rsswipt/rsswipt.hpp"

#include <cstdio>

int main() {
  using namespace rsswipt;

  SystemConfig config;
  config.total_power = units::dbm_to_watts(10.0);
  config.noise_power_ir = units::dbm_to_watts(-30.0);
  config.energy_threshold = units::microwatts(35.0);

  DeterministicChannelSpec deployment;  // gamma = 1, theta = 4pi/9
  const ChannelSet channels = build_los_channels(deployment, config.num_tx_antennas);

  const auto outcomes = run_strategy_suite(config, channels);
  for (const auto& [kind, o] : outcomes) {
    if (!o.point) {
      std::printf("%-6s %s: %s\n", to_string(kind).c_str(), o.status.c_str(), o.message.c_str());
      continue;
    }
    const RatePoint& p = *o.point;
    std::printf("%-6s WSR %.4f  P_c %.4f  P_1 %.4f  P_2 %.4f  P_ER %.4f  Q %.2f uW  (best start: %s)\n",
                to_string(kind).c_str(), p.wsr, p.power.common, p.power.priv[0], p.power.priv[1], p.power.energy,
                units::to_microwatts(p.harvested_energy_total), p.best_start.c_str());
  }
}
