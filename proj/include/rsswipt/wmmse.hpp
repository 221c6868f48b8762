#pragma once

// MSEs, MMSE equalizers, MMSE weights and augmented weighted MSEs for the
// common and private streams of every IR. Channels are noise-normalized.
//
// At the MMSE equalizer and weight the augmented WMSE equals 1 - rate for the
// corresponding stream (rates in bits, log base 2 throughout).

#include "rsswipt/core.hpp"
#include "rsswipt/physics.hpp"

#include <cmath>

namespace rsswipt {

enum class Stream { common, priv };

struct EqualizerState {
  std::vector<cplx> common_equalizers;   // g_{c,k}
  std::vector<cplx> private_equalizers;  // g_k
  std::vector<double> common_weights;    // w_{c,k}
  std::vector<double> private_weights;   // w_k
};

struct ReceivedPowers {
  double common = 1.0;  // T_{c,k} = |h^H p_c|^2 + sum_j |h^H p_j|^2 + 1
  double priv = 1.0;    // T_k = sum_j |h^H p_j|^2 + 1
};

struct WmseReport {
  std::vector<ReceivedPowers> received_powers;
  std::vector<double> common_mmse;
  std::vector<double> private_mmse;
  std::vector<double> common_augmented;
  std::vector<double> private_augmented;
};

inline ReceivedPowers received_powers(const ChannelSet& effective, const PrecoderSet& p, std::size_t k) {
  const auto& h = effective.ir_channels.at(k);
  ReceivedPowers t;
  t.priv = detail::private_power_at(h, p) + 1.0;
  t.common = t.priv + detail::gain(h, p.common);
  return t;
}

namespace detail {

inline const CVector& stream_precoder(const PrecoderSet& p, std::size_t k, Stream s) {
  return s == Stream::common ? p.common : p.priv.at(k);
}

}  // namespace detail

/// epsilon = |g|^2 T - 2 Re{g h^H p} + 1
inline double mse(const ChannelSet& effective, const PrecoderSet& p, cplx equalizer, std::size_t k, Stream s) {
  const auto t = received_powers(effective, p, k);
  const double power = s == Stream::common ? t.common : t.priv;
  const cplx hp = effective.ir_channels.at(k).dot(detail::stream_precoder(p, k, s));
  return std::norm(equalizer) * power - 2.0 * std::real(equalizer * hp) + 1.0;
}

inline double mse(const ChannelSet& effective, const PrecoderSet& p, const EqualizerState& state, std::size_t k,
                  Stream s) {
  return mse(effective, p, s == Stream::common ? state.common_equalizers.at(k) : state.private_equalizers.at(k), k,
             s);
}

/// g_{c,k} = p_c^H h_k / T_{c,k},  g_k = p_k^H h_k / T_k. Weights are left at 1.
inline EqualizerState mmse_equalizers(const ChannelSet& effective, const PrecoderSet& p) {
  EqualizerState st;
  const std::size_t n = effective.ir_channels.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& h = effective.ir_channels[k];
    const auto t = received_powers(effective, p, k);
    st.common_equalizers.push_back(p.common.dot(h) / t.common);
    st.private_equalizers.push_back(p.priv.at(k).dot(h) / t.priv);
  }
  st.common_weights.assign(n, 1.0);
  st.private_weights.assign(n, 1.0);
  return st;
}

struct MmseValues {
  std::vector<double> common;
  std::vector<double> priv;
};

/// epsilon^MMSE = (T - |h^H p|^2) / T, always in (0, 1].
inline MmseValues mmse_values(const ChannelSet& effective, const PrecoderSet& p) {
  MmseValues v;
  for (std::size_t k = 0; k < effective.ir_channels.size(); ++k) {
    const auto& h = effective.ir_channels[k];
    const auto t = received_powers(effective, p, k);
    v.common.push_back((t.common - detail::gain(h, p.common)) / t.common);
    v.priv.push_back((t.priv - detail::gain(h, p.priv.at(k))) / t.priv);
  }
  return v;
}

/// w* = 1 / epsilon^MMSE. Only the weight fields of the result are meaningful.
inline EqualizerState optimal_weights(const MmseValues& mmse) {
  EqualizerState st;
  for (double e : mmse.common) st.common_weights.push_back(1.0 / e);
  for (double e : mmse.priv) st.private_weights.push_back(1.0 / e);
  st.common_equalizers.assign(mmse.common.size(), cplx{});
  st.private_equalizers.assign(mmse.priv.size(), cplx{});
  return st;
}

/// MMSE equalizers together with the MMSE weights: the closed-form block update.
inline EqualizerState mmse_state(const ChannelSet& effective, const PrecoderSet& p) {
  auto st = mmse_equalizers(effective, p);
  const auto w = optimal_weights(mmse_values(effective, p));
  st.common_weights = w.common_weights;
  st.private_weights = w.private_weights;
  return st;
}

/// xi = w epsilon - log2(w)
inline double augmented_wmse(const ChannelSet& effective, const PrecoderSet& p, const EqualizerState& state,
                             std::size_t k, Stream s) {
  const double w = s == Stream::common ? state.common_weights.at(k) : state.private_weights.at(k);
  if (!(w > 0.0)) throw InvariantError("MSE weights must be > 0");
  return w * mse(effective, p, state, k, s) - std::log2(w);
}

inline WmseReport wmse_report(const ChannelSet& effective, const PrecoderSet& p, const EqualizerState& state) {
  WmseReport r;
  const auto mm = mmse_values(effective, p);
  r.common_mmse = mm.common;
  r.private_mmse = mm.priv;
  for (std::size_t k = 0; k < effective.ir_channels.size(); ++k) {
    r.received_powers.push_back(received_powers(effective, p, k));
    r.common_augmented.push_back(augmented_wmse(effective, p, state, k, Stream::common));
    r.private_augmented.push_back(augmented_wmse(effective, p, state, k, Stream::priv));
  }
  return r;
}

/// sum_k u_k (X_k + xi_k(P)) with (g, w) frozen in `state`.
inline double wmmse_objective(const SystemConfig& config, const ChannelSet& effective, const PrecoderSet& p,
                              const EqualizerState& state, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t k = 0; k < effective.ir_channels.size(); ++k)
    v += config.rate_weights.at(k) * (x.at(k) + augmented_wmse(effective, p, state, k, Stream::priv));
  return v;
}

}  // namespace rsswipt
