#pragma once

// Closed-form physical-layer quantities.
//
// The SINR and rate functions expect noise-normalized IR channels (see
// effective_channels()): every receiver noise term is 1. Harvested energy uses
// the ER channels as stored, so it comes out in watts.

#include "rsswipt/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsswipt {

namespace detail {

inline double gain(const CVector& h, const CVector& p) { return std::norm(h.dot(p)); }  // |h^H p|^2

// sum_j |h^H p_j|^2 over the private precoders.
inline double private_power_at(const CVector& h, const PrecoderSet& p) {
  double s = 0.0;
  for (const auto& pk : p.priv) s += gain(h, pk);
  return s;
}

}  // namespace detail

inline double sinr_common(const ChannelSet& effective, const PrecoderSet& p, std::size_t k) {
  const auto& h = effective.ir_channels.at(k);
  return detail::gain(h, p.common) / (detail::private_power_at(h, p) + 1.0);
}

inline double sinr_private(const ChannelSet& effective, const PrecoderSet& p, std::size_t k) {
  const auto& h = effective.ir_channels.at(k);
  const double own = detail::gain(h, p.priv.at(k));
  const double interference = detail::private_power_at(h, p) - own;
  return own / (std::max(interference, 0.0) + 1.0);
}

struct RateReport {
  std::vector<double> common_rates;   // R_{c,k}
  std::vector<double> private_rates;  // R_k
  double common_rate_bound = 0.0;     // min_k R_{c,k}
};

inline RateReport achievable_rates(const ChannelSet& effective, const PrecoderSet& p) {
  RateReport r;
  const std::size_t k_irs = effective.ir_channels.size();
  r.common_rate_bound = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_irs; ++k) {
    r.common_rates.push_back(std::log2(1.0 + sinr_common(effective, p, k)));
    r.private_rates.push_back(std::log2(1.0 + sinr_private(effective, p, k)));
    r.common_rate_bound = std::min(r.common_rate_bound, r.common_rates.back());
  }
  if (k_irs == 0) r.common_rate_bound = 0.0;
  return r;
}

/// Q_j = zeta (|g_j^H p_c|^2 + sum_k |g_j^H p_k|^2 + sum_j' |g_j^H f_j'|^2), in W.
inline double harvested_energy(const ChannelSet& channels, const PrecoderSet& p, const SystemConfig& config,
                               std::size_t er_index) {
  const auto& g = channels.er_channels.at(er_index);
  double q = 0.0;
  for (std::size_t s = 0; s < p.num_streams(); ++s) q += detail::gain(g, p.stream(s));
  return config.harvest_efficiency * q;
}

inline double total_harvested_energy(const ChannelSet& channels, const PrecoderSet& p, const SystemConfig& config) {
  double q = 0.0;
  for (std::size_t j = 0; j < channels.er_channels.size(); ++j) q += harvested_energy(channels, p, config, j);
  return q;
}

/// Largest sum energy reachable within the power budget:
/// zeta * P_t * lambda_max(sum_j g_j g_j^H).
inline double max_harvestable_energy(const ChannelSet& channels, const SystemConfig& config) {
  if (channels.er_channels.empty()) return 0.0;
  const auto n = channels.er_channels.front().size();
  CMatrix gram = CMatrix::Zero(n, n);
  for (const auto& g : channels.er_channels) gram += g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return config.harvest_efficiency * config.total_power * eig.eigenvalues().maxCoeff();
}

/// Relative slack allowed when checking sum C_k against the common-rate bound.
inline constexpr double kSplitTolerance = 1e-9;

/// sum_k u_k (C_k + R_k). Throws InfeasibleError if sum C_k exceeds the
/// common-rate bound by more than kSplitTolerance.
inline double weighted_sum_rate(const SystemConfig& config, const ChannelSet& effective, const PrecoderSet& p,
                                const CommonRateSplit& split) {
  const auto rates = achievable_rates(effective, p);
  if (split.portions.size() != rates.private_rates.size())
    throw DimensionError("common rate split has wrong length");
  if (split.sum() > rates.common_rate_bound + kSplitTolerance)
    throw InfeasibleError("common rate split sums to " + std::to_string(split.sum()) +
                          " which exceeds the common-rate bound " + std::to_string(rates.common_rate_bound));
  double wsr = 0.0;
  for (std::size_t k = 0; k < rates.private_rates.size(); ++k)
    wsr += config.rate_weights.at(k) * (split.portions[k] + rates.private_rates[k]);
  return wsr;
}

}  // namespace rsswipt
