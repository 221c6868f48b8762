#pragma once

// WMMSE-based alternating optimization with an SCA inner loop.
//
// Outer loop: freeze the MMSE equalizers and weights of the current
// precoders, run the inner loop, recover the common-rate split from X, and
// repeat until the weighted sum rate stops improving. Inner loop: solve the
// convex subproblem around the current precoders until the weighted MMSE
// stops decreasing.
//
// Both loops are monotone in exact arithmetic because the previous iterate is
// feasible for the next subproblem. A step that moves the wrong way (solver
// inexactness near convergence) is discarded, the loop stops, and the event is
// counted in ConvergenceLedger::rejected_steps.
//
// MU-LP and SC-SIC run through the same machinery with pinned variables:
// MU-LP pins p_c = 0 and every C_k = 0; SC-SIC pins the private precoder of
// the IR whose message rides on the common stream and the split of the IR that
// performs SIC.

#include "rsswipt/channel.hpp"
#include "rsswipt/core.hpp"
#include "rsswipt/physics.hpp"
#include "rsswipt/subproblem.hpp"
#include "rsswipt/wmmse.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rsswipt {

struct AlgorithmConfig {
  double inner_tolerance = 1e-6;   // on WMMSE
  double outer_tolerance = 1e-4;   // on WSR
  std::size_t max_inner_iterations = 100;
  std::size_t max_outer_iterations = 500;
  std::size_t num_random_starts = 9;   // in addition to the deterministic start
  double feasibility_tolerance = 1e-9; // W
  std::uint64_t seed = 20190101;
  solver::Tolerances solver{};
};

inline void validate(const AlgorithmConfig& a) {
  if (!(a.inner_tolerance > 0.0) || !(a.outer_tolerance > 0.0) || !(a.feasibility_tolerance > 0.0))
    throw InvariantError("algorithm tolerances must be > 0");
  if (a.max_inner_iterations < 1 || a.max_outer_iterations < 1)
    throw InvariantError("iteration caps must be >= 1");
}

/// Seed of the random stream used for multi-start `start_index`.
inline std::uint64_t start_seed(std::uint64_t base, std::size_t start_index) {
  return base + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(start_index);
}

namespace detail {

inline void check_strategy(const SystemConfig& config, const Strategy& strategy) {
  if (strategy.kind != StrategyKind::SCSIC) return;
  if (config.num_irs != 2) throw InvariantError("SC-SIC requires exactly 2 IRs");
  const auto& o = strategy.decoding_order;
  if (o[0] > 1 || o[1] > 1 || o[0] == o[1]) throw InvariantError("SC-SIC decoding order must be a permutation of {0, 1}");
}

inline bool stream_pinned(const Strategy& strategy, std::size_t s, std::size_t num_irs) {
  if (s == 0) return strategy.common_pinned();
  if (s <= num_irs) return strategy.private_pinned(s - 1);
  return false;
}

inline CVector unit_or_first_axis(const CVector& v) {
  const double n = v.norm();
  if (n > 0.0) return v / n;
  CVector e = CVector::Zero(v.size());
  e(0) = 1.0;
  return e;
}

// Zeroes pinned streams and rescales so the total transmit power is P_t.
inline PrecoderSet enforce_structure(const SystemConfig& config, const Strategy& strategy, PrecoderSet p) {
  for (std::size_t s = 0; s < p.num_streams(); ++s)
    if (stream_pinned(strategy, s, config.num_irs)) p.stream(s).setZero();
  const double power = total_transmit_power(p);
  if (!(power > 0.0)) throw NumericalError("initial precoders carry no power");
  return p.scaled(std::sqrt(config.total_power / power));
}

}  // namespace detail

/// Full-power starting point. Start 0: MRT private precoders, common precoder
/// along the dominant left singular vector of [h_1 ... h_K], MRT energy
/// precoders. Starts >= 1: random complex Gaussian directions. Power split
/// common : private : energy = 0.4 : 0.4 : 0.2 before pinning, then rescaled
/// to exactly P_t.
inline PrecoderSet initialize_precoders(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                                        std::size_t start_index, std::uint64_t base_seed = AlgorithmConfig{}.seed) {
  detail::check_strategy(config, strategy);
  const std::size_t n_t = config.num_tx_antennas;
  const std::size_t K = config.num_irs;
  const std::size_t J = config.num_ers;
  const auto eff = effective_channels(config, channels);

  PrecoderSet dir = PrecoderSet::zeros(n_t, K, J);
  if (start_index == 0) {
    CMatrix H(static_cast<Eigen::Index>(n_t), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) H.col(static_cast<Eigen::Index>(k)) = eff.ir_channels[k];
    Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeThinU);
    dir.common = detail::unit_or_first_axis(svd.matrixU().col(0));
    for (std::size_t k = 0; k < K; ++k) dir.priv[k] = detail::unit_or_first_axis(eff.ir_channels[k]);
    for (std::size_t j = 0; j < J; ++j) dir.energy[j] = detail::unit_or_first_axis(channels.er_channels[j]);
  } else {
    ComplexGaussian rng(start_seed(base_seed, start_index));
    for (std::size_t s = 0; s < dir.num_streams(); ++s) dir.stream(s) = detail::unit_or_first_axis(rng.vector(n_t));
  }

  const double pt = config.total_power;
  dir.common *= std::sqrt(0.4 * pt);
  for (auto& p : dir.priv) p *= std::sqrt(0.4 * pt / static_cast<double>(K));
  for (auto& f : dir.energy) f *= std::sqrt(0.2 * pt / static_cast<double>(J));
  return detail::enforce_structure(config, strategy, std::move(dir));
}

/// Moves a starting point toward the maximum-energy beam until the sum
/// harvested energy meets the threshold with a small margin. Returns the
/// input unchanged when it already meets the threshold. Throws InfeasibleError
/// when the threshold exceeds zeta P_t lambda_max(sum_j g_j g_j^H).
inline PrecoderSet restore_energy_feasibility(const SystemConfig& config, const ChannelSet& channels,
                                              const Strategy& strategy, const PrecoderSet& p,
                                              double feasibility_tolerance = 1e-9) {
  const double e_th = config.energy_threshold;
  if (config.num_ers == 0 || e_th <= 0.0) return p;
  const double q_max = max_harvestable_energy(channels, config);
  if (e_th > q_max + feasibility_tolerance)
    throw InfeasibleError("energy threshold " + std::to_string(e_th) + " W exceeds the maximum harvestable " +
                          std::to_string(q_max) + " W");
  if (total_harvested_energy(channels, p, config) >= e_th) return p;

  const auto n = static_cast<Eigen::Index>(config.num_tx_antennas);
  CMatrix gram = CMatrix::Zero(n, n);
  for (const auto& g : channels.er_channels) gram += g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const CVector v = eig.eigenvectors().col(n - 1);

  // Energy beam that keeps each free stream's component along v.
  PrecoderSet beam = PrecoderSet::zeros(config.num_tx_antennas, config.num_irs, config.num_ers);
  double weight = 0.0;
  for (std::size_t s = 0; s < p.num_streams(); ++s) {
    if (detail::stream_pinned(strategy, s, config.num_irs)) continue;
    const cplx c = v.dot(p.stream(s));
    beam.stream(s) = c * v;
    weight += std::norm(c);
  }
  if (!(weight > 1e-30 * config.total_power)) {
    std::size_t target = config.num_irs + 1;  // first energy precoder
    while (detail::stream_pinned(strategy, target % p.num_streams(), config.num_irs)) ++target;
    beam.stream(target % p.num_streams()) = v;
  }
  beam = beam.scaled(std::sqrt(config.total_power / total_transmit_power(beam)));

  const double target = e_th + 1e-3 * (q_max - e_th);
  auto mix = [&](double t) {
    PrecoderSet m = p;
    for (std::size_t s = 0; s < m.num_streams(); ++s) m.stream(s) = (1.0 - t) * p.stream(s) + t * beam.stream(s);
    const double power = total_transmit_power(m);
    return power > 0.0 ? m.scaled(std::sqrt(config.total_power / power)) : beam;
  };
  for (int i = 1; i < 20; ++i) {
    PrecoderSet m = mix(0.05 * i);
    if (total_harvested_energy(channels, m, config) >= target) return m;
  }
  return beam;
}

/// Common-rate split for fixed precoders given the solver's X:
/// C_k = max(0, -X_k) on unpinned IRs, scaled down if the sum exceeds the
/// common-rate bound; any remaining common rate is shared among the unpinned
/// IRs in proportion to their rate weights.
inline CommonRateSplit recover_split(const SystemConfig& config, const ChannelSet& effective, const PrecoderSet& p,
                                     const Strategy& strategy, const std::vector<double>& x) {
  const std::size_t K = config.num_irs;
  CommonRateSplit split{std::vector<double>(K, 0.0)};
  if (strategy.common_pinned()) return split;
  const double bound = achievable_rates(effective, p).common_rate_bound;
  for (std::size_t k = 0; k < K; ++k)
    if (!strategy.split_pinned(k)) split.portions[k] = std::max(0.0, -x.at(k));
  const double sum = split.sum();
  if (sum > bound) {
    for (auto& c : split.portions) c *= bound / sum;
    return split;
  }
  double free_weight = 0.0;
  for (std::size_t k = 0; k < K; ++k)
    if (!strategy.split_pinned(k)) free_weight += config.rate_weights[k];
  const double surplus = bound - sum;
  if (surplus > 0.0 && free_weight > 0.0)
    for (std::size_t k = 0; k < K; ++k)
      if (!strategy.split_pinned(k)) split.portions[k] += surplus * config.rate_weights[k] / free_weight;
  return split;
}

struct InnerLoopResult {
  PrecoderSet precoders;
  std::vector<double> x;
  std::vector<double> wmmse_trace;
  std::size_t iterations = 0;
  std::size_t rejected_steps = 0;
};

/// SCA loop with (g, w) frozen. `x_in` must make (precoders_in, x_in) feasible
/// for the subproblem (e.g. x_in = -C for a split within the common-rate
/// bound of precoders_in and state = the MMSE state of precoders_in).
inline InnerLoopResult sca_inner_loop(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                                      const EqualizerState& state, const PrecoderSet& precoders_in,
                                      const std::vector<double>& x_in, const AlgorithmConfig& acfg = {}) {
  const auto eff = effective_channels(config, channels);
  InnerLoopResult res{precoders_in, x_in, {}, 0, 0};
  double prev = wmmse_objective(config, eff, precoders_in, state, x_in);
  res.wmmse_trace.push_back(prev);

  for (std::size_t t = 1; t <= acfg.max_inner_iterations; ++t) {
    const auto sub = assemble_from_state(config, channels, state, res.precoders, strategy);
    const auto sol = solver::solve(sub.problem, acfg.solver);
    res.iterations = t;
    if (sol.status == solver::Status::infeasible) {
      if (t == 1) throw InfeasibleError("SCA subproblem infeasible: " + sol.diagnostic);
      break;
    }
    if (sol.status == solver::Status::max_iterations) {
      if (solver::max_violation(sub.problem, sol.solution) > 1e-7)
        throw NumericalError("SCA subproblem hit the iteration cap at an infeasible point");
    } else if (sol.status != solver::Status::optimal) {
      throw NumericalError(std::string("SCA subproblem failed: ") + solver::to_string(sol.status) + " " +
                           sol.diagnostic);
    }

    auto [p_new, x_new] = sub.layout.unpack(sol.solution);
    const double power = total_transmit_power(p_new);
    if (power > config.total_power) p_new = p_new.scaled(std::sqrt(config.total_power / power));
    for (auto& v : x_new) v = std::min(v, 0.0);

    const double value = wmmse_objective(config, eff, p_new, state, x_new);
    if (value > prev) {
      ++res.rejected_steps;
      break;
    }
    res.precoders = std::move(p_new);
    res.x = std::move(x_new);
    res.wmmse_trace.push_back(value);
    const double change = prev - value;
    prev = value;
    if (change <= acfg.inner_tolerance) break;
  }
  return res;
}

struct StartOutcome {
  PrecoderSet precoders;
  CommonRateSplit split;
  double wsr = 0.0;
  ConvergenceLedger ledger;
  std::size_t iterations = 0;
  bool converged = false;
};

/// One AO run from a given starting point.
inline StartOutcome run_from_start(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                                   const PrecoderSet& start, const AlgorithmConfig& acfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto eff = effective_channels(config, channels);
  const std::size_t K = config.num_irs;

  StartOutcome out;
  out.precoders = restore_energy_feasibility(config, channels, strategy,
                                             detail::enforce_structure(config, strategy, start),
                                             acfg.feasibility_tolerance);
  out.split = recover_split(config, eff, out.precoders, strategy, std::vector<double>(K, 0.0));
  out.wsr = weighted_sum_rate(config, eff, out.precoders, out.split);
  out.ledger.outer_trace.push_back(out.wsr);

  for (std::size_t n = 1; n <= acfg.max_outer_iterations; ++n) {
    const auto state = mmse_state(eff, out.precoders);
    std::vector<double> x_in(K);
    for (std::size_t k = 0; k < K; ++k) x_in[k] = -out.split.portions[k];
    auto inner = sca_inner_loop(config, channels, strategy, state, out.precoders, x_in, acfg);
    out.ledger.inner_traces.push_back(inner.wmmse_trace);
    out.ledger.rejected_steps += inner.rejected_steps;
    out.iterations = n;

    auto split = recover_split(config, eff, inner.precoders, strategy, inner.x);
    const double wsr = weighted_sum_rate(config, eff, inner.precoders, split);
    if (wsr < out.wsr) {
      ++out.ledger.rejected_steps;
      out.converged = true;
      break;
    }
    const double gain = wsr - out.wsr;
    out.precoders = std::move(inner.precoders);
    out.split = std::move(split);
    out.wsr = wsr;
    out.ledger.outer_trace.push_back(wsr);
    if (gain <= acfg.outer_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.ledger.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Evaluates a converged precoder set into a RatePoint.
inline RatePoint make_rate_point(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                                 const StartOutcome& o) {
  const auto eff = effective_channels(config, channels);
  const auto rates = achievable_rates(eff, o.precoders);
  RatePoint rp;
  rp.wsr = o.wsr;
  for (std::size_t k = 0; k < config.num_irs; ++k)
    rp.per_ir_total_rates.push_back(o.split.portions[k] + rates.private_rates[k]);
  rp.common_rate_split = o.split;
  rp.harvested_energy_total = total_harvested_energy(channels, o.precoders, config);
  rp.power = power_breakdown(o.precoders);
  rp.iterations_outer = o.iterations;
  rp.converged = o.converged;
  rp.strategy = strategy;
  rp.precoders = o.precoders;
  rp.ledger = o.ledger;
  return rp;
}

struct SeedStart {
  std::string label;
  PrecoderSet precoders;
};

/// Thresholds within this fraction of the maximum harvestable energy count as
/// the boundary E^th = q_max.
inline constexpr double kEnergyBoundaryBand = 1e-6;

inline RatePoint ao_outer_loop(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                               const AlgorithmConfig& acfg = {}, const std::vector<SeedStart>& extra_seeds = {});

namespace detail {

// Orthonormal basis of the top eigenspace of sum_j g_j g_j^H.
inline CMatrix top_energy_eigenspace(const ChannelSet& channels, std::size_t n_t) {
  const auto n = static_cast<Eigen::Index>(n_t);
  CMatrix gram = CMatrix::Zero(n, n);
  for (const auto& g : channels.er_channels) gram += g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const double lmax = eig.eigenvalues()(n - 1);
  Eigen::Index d = 1;
  while (d < n && eig.eigenvalues()(n - 1 - d) >= lmax * (1.0 - 1e-9)) ++d;
  return eig.eigenvectors().rightCols(d);
}

// At E^th = q_max every stream must lie in the top eigenspace V and the power
// budget must be spent, so the linearized energy constraint has no interior
// and the cone solver cannot start. Instead optimize the coefficients a_s
// (p_s = V a_s) against the projected channels V^H h_k, where the energy
// constraint holds automatically at full power, then lift back. Any power the
// IR streams leave unused goes to an energy precoder along V.
inline RatePoint solve_on_energy_boundary(const SystemConfig& config, const ChannelSet& channels,
                                          const Strategy& strategy, const AlgorithmConfig& acfg,
                                          const std::vector<SeedStart>& extra_seeds) {
  const CMatrix V = top_energy_eigenspace(channels, config.num_tx_antennas);
  const auto d = static_cast<std::size_t>(V.cols());
  const std::size_t K = config.num_irs;

  SystemConfig rc = config;
  rc.num_tx_antennas = d;
  rc.num_ers = 0;
  rc.energy_threshold = 0.0;
  ChannelSet rch;
  for (const auto& h : channels.ir_channels) rch.ir_channels.push_back(V.adjoint() * h);

  std::vector<SeedStart> seeds;
  for (const auto& s : extra_seeds) {
    PrecoderSet q = PrecoderSet::zeros(d, K, 0);
    q.common = V.adjoint() * s.precoders.common;
    for (std::size_t k = 0; k < K; ++k) q.priv[k] = V.adjoint() * s.precoders.priv[k];
    if (total_transmit_power(q) > 0.0) seeds.push_back({s.label, q});
  }

  RatePoint rp = ao_outer_loop(rc, rch, strategy, acfg, seeds);
  PrecoderSet p = PrecoderSet::zeros(config.num_tx_antennas, K, config.num_ers);
  p.common = V * rp.precoders.common;
  for (std::size_t k = 0; k < K; ++k) p.priv[k] = V * rp.precoders.priv[k];
  const double spare = config.total_power - total_transmit_power(p);
  if (spare > 0.0) p.energy.at(0) = std::sqrt(spare) * V.col(0);
  rp.precoders = p;
  rp.harvested_energy_total = total_harvested_energy(channels, p, config);
  rp.power = power_breakdown(p);
  return rp;
}

}  // namespace detail

/// Multi-start AO: the deterministic start, `num_random_starts` random
/// starts, then any extra seeds. Returns the best converged point; every
/// start is listed in RatePoint::starts.
inline RatePoint ao_outer_loop(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                               const AlgorithmConfig& acfg, const std::vector<SeedStart>& extra_seeds) {
  require_valid(config, channels);
  validate(acfg);
  detail::check_strategy(config, strategy);
  if (config.num_ers > 0 && config.energy_threshold > max_harvestable_energy(channels, config) + acfg.feasibility_tolerance)
    throw InfeasibleError("energy threshold exceeds the maximum harvestable energy " +
                          std::to_string(max_harvestable_energy(channels, config)) + " W");
  if (config.num_ers > 0 && config.energy_threshold > 0.0 &&
      config.energy_threshold >= (1.0 - kEnergyBoundaryBand) * max_harvestable_energy(channels, config))
    return detail::solve_on_energy_boundary(config, channels, strategy, acfg, extra_seeds);

  std::vector<SeedStart> starts;
  starts.push_back({"deterministic", initialize_precoders(config, channels, strategy, 0, acfg.seed)});
  for (std::size_t i = 1; i <= acfg.num_random_starts; ++i)
    starts.push_back({"random-" + std::to_string(i), initialize_precoders(config, channels, strategy, i, acfg.seed)});
  for (const auto& s : extra_seeds) starts.push_back({"seed-" + s.label, s.precoders});

  std::optional<StartOutcome> best;
  std::string best_label;
  std::vector<StartRecord> records;
  std::size_t infeasible = 0, failed = 0;
  std::string last_error;
  for (const auto& s : starts) {
    try {
      auto o = run_from_start(config, channels, strategy, s.precoders, acfg);
      records.push_back({s.label, o.converged ? "converged" : "max_iterations", o.wsr, ""});
      if (!best || o.wsr > best->wsr) {
        best = std::move(o);
        best_label = s.label;
      }
    } catch (const InfeasibleError& e) {
      records.push_back({s.label, "infeasible", 0.0, e.what()});
      ++infeasible;
      last_error = e.what();
    } catch (const NumericalError& e) {
      records.push_back({s.label, "numerical_failure", 0.0, e.what()});
      ++failed;
      last_error = e.what();
    }
  }
  if (!best) {
    if (failed == 0) throw InfeasibleError("all starts infeasible: " + last_error);
    throw NumericalError("no start converged (" + std::to_string(failed) + " numerical failures, " +
                         std::to_string(infeasible) + " infeasible): " + last_error);
  }
  RatePoint rp = make_rate_point(config, channels, strategy, *best);
  rp.starts = std::move(records);
  rp.best_start = best_label;
  return rp;
}

struct StrategyOutcome {
  std::string status;  // converged | max_iterations | infeasible | failed
  std::string message;
  double wall_time = 0.0;  // s, all starts
  std::optional<RatePoint> point;
};

/// IR with the weaker channel first, so the stronger IR performs SIC.
inline Strategy default_scsic_order(const SystemConfig& config, const ChannelSet& channels) {
  const auto eff = effective_channels(config, channels);
  const bool second_weaker = eff.ir_channels.at(1).squaredNorm() <= eff.ir_channels.at(0).squaredNorm();
  return second_weaker ? Strategy::scsic(1, 0) : Strategy::scsic(0, 1);
}

namespace detail {

inline StrategyOutcome run_tagged(const SystemConfig& config, const ChannelSet& channels, const Strategy& strategy,
                                  const AlgorithmConfig& acfg, const std::vector<SeedStart>& seeds) {
  const auto t0 = std::chrono::steady_clock::now();
  StrategyOutcome o;
  try {
    o.point = ao_outer_loop(config, channels, strategy, acfg, seeds);
    o.status = o.point->converged ? "converged" : "max_iterations";
  } catch (const InfeasibleError& e) {
    o.status = "infeasible";
    o.message = to_string(strategy.kind) + ": " + e.what();
  } catch (const Error& e) {
    o.status = "failed";
    o.message = to_string(strategy.kind) + ": " + e.what();
  }
  o.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

}  // namespace detail

/// Runs MU-LP, SC-SIC (both decoding orders, K = 2 only) and RS. RS gets extra
/// starts seeded from the MU-LP and SC-SIC solutions, so its WSR is at least
/// theirs. `warm_starts` adds per-strategy seeds (e.g. from a neighbouring
/// sweep point).
inline std::map<StrategyKind, StrategyOutcome> run_strategy_suite(
    const SystemConfig& config, const ChannelSet& channels, const AlgorithmConfig& acfg = {},
    std::vector<StrategyKind> strategies = {StrategyKind::RS, StrategyKind::MULP, StrategyKind::SCSIC},
    const std::map<StrategyKind, std::vector<SeedStart>>& warm_starts = {}) {
  auto wanted = [&](StrategyKind k) { return std::find(strategies.begin(), strategies.end(), k) != strategies.end(); };
  auto warm = [&](StrategyKind k) {
    auto it = warm_starts.find(k);
    return it == warm_starts.end() ? std::vector<SeedStart>{} : it->second;
  };
  std::map<StrategyKind, StrategyOutcome> out;
  std::vector<SeedStart> rs_seeds;

  if (wanted(StrategyKind::MULP)) {
    auto o = detail::run_tagged(config, channels, Strategy::mulp(), acfg, warm(StrategyKind::MULP));
    if (o.point) rs_seeds.push_back({"MULP", o.point->precoders});
    out[StrategyKind::MULP] = std::move(o);
  }
  if (wanted(StrategyKind::SCSIC) && config.num_irs == 2) {
    const Strategy first = default_scsic_order(config, channels);
    const Strategy second = Strategy::scsic(first.decoding_order[1], first.decoding_order[0]);
    auto a = detail::run_tagged(config, channels, first, acfg, warm(StrategyKind::SCSIC));
    auto b = detail::run_tagged(config, channels, second, acfg, warm(StrategyKind::SCSIC));
    StrategyOutcome o = a;
    if (b.point && (!a.point || b.point->wsr > a.point->wsr)) o = b;
    o.wall_time = a.wall_time + b.wall_time;
    if (o.point) rs_seeds.push_back({"SCSIC", o.point->precoders});
    out[StrategyKind::SCSIC] = std::move(o);
  }
  if (wanted(StrategyKind::RS)) {
    auto seeds = warm(StrategyKind::RS);
    seeds.insert(seeds.end(), rs_seeds.begin(), rs_seeds.end());
    out[StrategyKind::RS] = detail::run_tagged(config, channels, Strategy::rs(), acfg, seeds);
  }
  return out;
}

}  // namespace rsswipt
