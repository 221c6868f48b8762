#pragma once

// Domain types shared by every part of the library: scenario configuration,
// channels, precoders, common-rate split, strategy and the converged result.
//
// Units: every power and energy is carried in watts. dBm and microwatts only
// appear at the CLI / JSON boundary (see units below).

#include <Eigen/Dense>

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsswipt {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The energy threshold cannot be met by any precoder within the power budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Units

namespace units {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline constexpr double microwatts(double uw) { return uw * 1e-6; }
inline constexpr double to_microwatts(double watts) { return watts * 1e6; }

}  // namespace units

// ---------------------------------------------------------------------------
// Scenario

struct SystemConfig {
  std::size_t num_tx_antennas = 4;
  std::size_t num_irs = 2;
  std::size_t num_ers = 1;
  double total_power = 0.01;       // W
  double noise_power_ir = 1e-6;    // W, variance of the IR receiver noise
  double harvest_efficiency = 1.0; // zeta
  double energy_threshold = 0.0;   // W, sum over ERs
  std::vector<double> rate_weights{1.0, 1.0};

  bool operator==(const SystemConfig&) const = default;
};

struct ChannelSet {
  std::vector<CVector> ir_channels;  // h_k, length N_t each
  std::vector<CVector> er_channels;  // g_j, length N_t each

  bool operator==(const ChannelSet& o) const {
    auto eq = [](const std::vector<CVector>& a, const std::vector<CVector>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].size() != b[i].size() || a[i] != b[i]) return false;
      return true;
    };
    return eq(ir_channels, o.ir_channels) && eq(er_channels, o.er_channels);
  }
};

struct Scenario {
  SystemConfig config;
  ChannelSet channels;
};

// ---------------------------------------------------------------------------
// Decision variables

struct PrecoderSet {
  CVector common;                // p_c
  std::vector<CVector> priv;     // p_1..p_K
  std::vector<CVector> energy;   // f_1..f_J

  static PrecoderSet zeros(std::size_t n_t, std::size_t k, std::size_t j) {
    PrecoderSet p;
    p.common = CVector::Zero(static_cast<Eigen::Index>(n_t));
    p.priv.assign(k, CVector::Zero(static_cast<Eigen::Index>(n_t)));
    p.energy.assign(j, CVector::Zero(static_cast<Eigen::Index>(n_t)));
    return p;
  }

  std::size_t num_irs() const { return priv.size(); }
  std::size_t num_ers() const { return energy.size(); }

  /// Streams in canonical order: common, private 1..K, energy 1..J.
  std::size_t num_streams() const { return 1 + priv.size() + energy.size(); }
  const CVector& stream(std::size_t s) const {
    if (s == 0) return common;
    if (s <= priv.size()) return priv[s - 1];
    return energy[s - 1 - priv.size()];
  }
  CVector& stream(std::size_t s) {
    return const_cast<CVector&>(static_cast<const PrecoderSet&>(*this).stream(s));
  }

  PrecoderSet scaled(double factor) const {
    PrecoderSet out = *this;
    for (std::size_t s = 0; s < out.num_streams(); ++s) out.stream(s) *= factor;
    return out;
  }

  bool operator==(const PrecoderSet& o) const {
    if (num_streams() != o.num_streams() || priv.size() != o.priv.size()) return false;
    for (std::size_t s = 0; s < num_streams(); ++s)
      if (stream(s).size() != o.stream(s).size() || stream(s) != o.stream(s)) return false;
    return true;
  }
};

/// ||p_c||^2 + sum_k ||p_k||^2 + sum_j ||f_j||^2
inline double total_transmit_power(const PrecoderSet& p) {
  double total = 0.0;
  for (std::size_t s = 0; s < p.num_streams(); ++s) total += p.stream(s).squaredNorm();
  return total;
}

struct PowerBreakdown {
  double common = 0.0;
  std::vector<double> priv;
  double energy = 0.0;  // sum over ER precoders

  double total() const {
    double t = common + energy;
    for (double v : priv) t += v;
    return t;
  }
  bool operator==(const PowerBreakdown&) const = default;
};

inline PowerBreakdown power_breakdown(const PrecoderSet& p) {
  PowerBreakdown b;
  b.common = p.common.squaredNorm();
  for (const auto& v : p.priv) b.priv.push_back(v.squaredNorm());
  for (const auto& f : p.energy) b.energy += f.squaredNorm();
  return b;
}

struct CommonRateSplit {
  std::vector<double> portions;  // C_k >= 0

  double sum() const {
    double s = 0.0;
    for (double c : portions) s += c;
    return s;
  }
  bool operator==(const CommonRateSplit&) const = default;
};

// ---------------------------------------------------------------------------
// Strategy

enum class StrategyKind { RS, MULP, SCSIC };

inline std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::RS: return "RS";
    case StrategyKind::MULP: return "MULP";
    case StrategyKind::SCSIC: return "SCSIC";
  }
  return "?";
}

inline StrategyKind parse_strategy_kind(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "RS") return StrategyKind::RS;
  if (s == "MULP" || s == "MU-LP") return StrategyKind::MULP;
  if (s == "SCSIC" || s == "SC-SIC" || s == "NOMA") return StrategyKind::SCSIC;
  throw Error("unknown strategy '" + s + "'");
}

struct Strategy {
  StrategyKind kind = StrategyKind::RS;
  // SC-SIC only. decoding_order[0] is the IR whose whole message travels on
  // the common stream (decoded first by both IRs); decoding_order[1] is the IR
  // that performs SIC and then decodes its own private stream.
  std::array<std::size_t, 2> decoding_order{1, 0};

  static Strategy rs() { return {StrategyKind::RS, {1, 0}}; }
  static Strategy mulp() { return {StrategyKind::MULP, {1, 0}}; }
  static Strategy scsic(std::size_t first_decoded, std::size_t sic_user) {
    return {StrategyKind::SCSIC, {first_decoded, sic_user}};
  }

  bool common_pinned() const { return kind == StrategyKind::MULP; }
  bool private_pinned(std::size_t k) const {
    return kind == StrategyKind::SCSIC && k == decoding_order[0];
  }
  bool split_pinned(std::size_t k) const {
    if (kind == StrategyKind::MULP) return true;
    return kind == StrategyKind::SCSIC && k == decoding_order[1];
  }

  bool operator==(const Strategy&) const = default;
};

// ---------------------------------------------------------------------------
// Result

struct ConvergenceLedger {
  std::vector<std::vector<double>> inner_traces;  // WMMSE per SCA iteration, per outer iteration
  std::vector<double> outer_trace;                // WSR per outer iteration
  double wall_time = 0.0;                         // s
  std::size_t rejected_steps = 0;                 // steps discarded by the monotone safeguard

  bool operator==(const ConvergenceLedger&) const = default;
};

struct StartRecord {
  std::string label;
  std::string status;  // converged | max_iterations | infeasible | numerical_failure
  double wsr = 0.0;
  std::string message;  // failure reason, empty otherwise
  bool operator==(const StartRecord&) const = default;
};

struct RatePoint {
  double wsr = 0.0;
  std::vector<double> per_ir_total_rates;  // C_k + R_k
  CommonRateSplit common_rate_split;
  double harvested_energy_total = 0.0;     // W
  PowerBreakdown power;
  std::size_t iterations_outer = 0;
  bool converged = false;
  Strategy strategy;
  PrecoderSet precoders;
  ConvergenceLedger ledger;
  std::vector<StartRecord> starts;
  std::string best_start;

  bool operator==(const RatePoint&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  std::vector<std::string> dimension_errors;
  std::vector<std::string> invariant_errors;

  bool ok() const { return dimension_errors.empty() && invariant_errors.empty(); }
  std::string message() const {
    std::ostringstream os;
    for (const auto& e : dimension_errors) os << "dimension: " << e << "\n";
    for (const auto& e : invariant_errors) os << "invariant: " << e << "\n";
    return os.str();
  }
};

inline ValidationReport validate_scenario(const SystemConfig& config, const ChannelSet& channels) {
  ValidationReport r;
  auto dim = [&](std::string m) { r.dimension_errors.push_back(std::move(m)); };
  auto inv = [&](std::string m) { r.invariant_errors.push_back(std::move(m)); };

  if (config.num_tx_antennas == 0) inv("num_tx_antennas must be positive");
  if (config.num_irs == 0) inv("num_irs must be positive");
  if (!(std::isfinite(config.total_power) && config.total_power > 0.0)) inv("total_power must be > 0");
  if (!(std::isfinite(config.noise_power_ir) && config.noise_power_ir > 0.0))
    inv("noise_power_ir must be > 0");
  if (!(config.harvest_efficiency >= 0.0 && config.harvest_efficiency <= 1.0))
    inv("harvest_efficiency must lie in [0, 1]");
  if (!(std::isfinite(config.energy_threshold) && config.energy_threshold >= 0.0))
    inv("energy_threshold must be >= 0");
  if (config.rate_weights.size() != config.num_irs)
    dim("rate_weights has " + std::to_string(config.rate_weights.size()) + " entries, expected " +
        std::to_string(config.num_irs));
  for (double u : config.rate_weights)
    if (!(std::isfinite(u) && u > 0.0)) {
      inv("rate weights must be > 0");
      break;
    }

  if (channels.ir_channels.size() != config.num_irs)
    dim("expected " + std::to_string(config.num_irs) + " IR channels, got " +
        std::to_string(channels.ir_channels.size()));
  if (channels.er_channels.size() != config.num_ers)
    dim("expected " + std::to_string(config.num_ers) + " ER channels, got " +
        std::to_string(channels.er_channels.size()));

  auto check_vectors = [&](const std::vector<CVector>& vs, const char* what) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (static_cast<std::size_t>(vs[i].size()) != config.num_tx_antennas)
        dim(std::string(what) + "[" + std::to_string(i) + "] has length " +
            std::to_string(vs[i].size()) + ", expected " + std::to_string(config.num_tx_antennas));
      if (!vs[i].allFinite()) inv(std::string(what) + "[" + std::to_string(i) + "] has non-finite entries");
    }
  };
  check_vectors(channels.ir_channels, "ir_channels");
  check_vectors(channels.er_channels, "er_channels");
  return r;
}

/// Throws DimensionError / InvariantError when the scenario is not valid.
inline void require_valid(const SystemConfig& config, const ChannelSet& channels) {
  auto r = validate_scenario(config, channels);
  if (!r.dimension_errors.empty()) throw DimensionError(r.message());
  if (!r.invariant_errors.empty()) throw InvariantError(r.message());
}

/// Channels as seen by the rate formulas: IR channels divided by the noise
/// standard deviation so the receiver noise has unit variance. ER channels are
/// left unscaled so harvested energy stays in watts.
inline ChannelSet effective_channels(const SystemConfig& config, const ChannelSet& channels) {
  ChannelSet out = channels;
  const double inv_sigma = 1.0 / std::sqrt(config.noise_power_ir);
  for (auto& h : out.ir_channels) h *= inv_sigma;
  return out;
}

}  // namespace rsswipt
