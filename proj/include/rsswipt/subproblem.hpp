#pragma once

// Assembly of the convex precoder subproblem solved at every SCA step.
//
// With equalizers and MSE weights frozen, the augmented WMSEs are convex
// quadratics in the precoders. The sum-energy constraint is replaced by its
// first-order lower bound around an expansion point, which makes the whole
// problem a convex QCQP in the real-lifted precoders and the auxiliary
// common-rate variables X_k (X_k = -C_k).
//
// Decision vector layout (before pinned variables are removed): for each
// stream s in (common, private 1..K, energy 1..J) the 2 N_t reals
// [Re p_s; Im p_s] / sqrt(P_t), then X_1..X_K. Precoders are normalized by
// sqrt(P_t) so the power constraint is the unit ball.

#include "rsswipt/core.hpp"
#include "rsswipt/physics.hpp"
#include "rsswipt/solver/qcqp.hpp"
#include "rsswipt/wmmse.hpp"

#include <cmath>
#include <vector>

namespace rsswipt {

namespace detail {

// Real 2n x 2n matrix M with [Re v; Im v]' M [Re v; Im v] = v^H H v for Hermitian H.
inline RMatrix realify_hermitian(const CMatrix& H) {
  const auto n = H.rows();
  RMatrix M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = H.real();
  M.topRightCorner(n, n) = -H.imag();
  M.bottomLeftCorner(n, n) = H.imag();
  M.bottomRightCorner(n, n) = H.real();
  return M;
}

// [Re v; Im v], so that Re{v^H p} = realify(v)' realify(p).
inline RVector realify(const CVector& v) {
  RVector r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

inline CVector complexify(const RVector& r) {
  const auto n = r.size() / 2;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(r(i), r(n + i));
  return v;
}

}  // namespace detail

class VariableLayout {
 public:
  VariableLayout() = default;
  VariableLayout(std::size_t n_t, std::size_t num_irs, std::size_t num_ers, double precoder_scale)
      : n_t_(n_t), num_irs_(num_irs), num_ers_(num_ers), scale_(precoder_scale) {
    pinned_.assign(full_size(), false);
    rebuild();
  }

  std::size_t n_t() const { return n_t_; }
  std::size_t num_irs() const { return num_irs_; }
  std::size_t num_ers() const { return num_ers_; }
  double precoder_scale() const { return scale_; }

  std::size_t num_streams() const { return 1 + num_irs_ + num_ers_; }
  std::size_t full_size() const { return 2 * n_t_ * num_streams() + num_irs_; }
  std::size_t stream_offset(std::size_t s) const { return 2 * n_t_ * s; }
  std::size_t split_offset(std::size_t k) const { return 2 * n_t_ * num_streams() + k; }

  void pin_stream(std::size_t s) {
    for (std::size_t i = 0; i < 2 * n_t_; ++i) pinned_[stream_offset(s) + i] = true;
    rebuild();
  }
  void pin_split(std::size_t k) {
    pinned_[split_offset(k)] = true;
    rebuild();
  }
  bool stream_pinned(std::size_t s) const { return pinned_[stream_offset(s)]; }
  bool split_pinned(std::size_t k) const { return pinned_[split_offset(k)]; }

  /// Number of decision variables after pinned ones are removed.
  Eigen::Index size() const { return static_cast<Eigen::Index>(free_.size()); }
  const std::vector<Eigen::Index>& free_indices() const { return free_; }
  /// Position of full index i among the free variables, or -1 if pinned.
  Eigen::Index free_position(std::size_t i) const { return position_[i]; }

  RVector pack_full(const PrecoderSet& p, const std::vector<double>& x) const {
    RVector v = RVector::Zero(static_cast<Eigen::Index>(full_size()));
    for (std::size_t s = 0; s < num_streams(); ++s)
      v.segment(static_cast<Eigen::Index>(stream_offset(s)), static_cast<Eigen::Index>(2 * n_t_)) =
          detail::realify(p.stream(s)) / scale_;
    for (std::size_t k = 0; k < num_irs_; ++k) v(static_cast<Eigen::Index>(split_offset(k))) = x.at(k);
    return v;
  }

  RVector pack(const PrecoderSet& p, const std::vector<double>& x) const { return pack_full(p, x)(free_); }

  /// Inverse of pack(); pinned variables come back as zero.
  std::pair<PrecoderSet, std::vector<double>> unpack(const RVector& free_values) const {
    RVector v = RVector::Zero(static_cast<Eigen::Index>(full_size()));
    v(free_) = free_values;
    PrecoderSet p = PrecoderSet::zeros(n_t_, num_irs_, num_ers_);
    for (std::size_t s = 0; s < num_streams(); ++s)
      p.stream(s) = detail::complexify(
                        v.segment(static_cast<Eigen::Index>(stream_offset(s)), static_cast<Eigen::Index>(2 * n_t_))) *
                    scale_;
    std::vector<double> x(num_irs_);
    for (std::size_t k = 0; k < num_irs_; ++k) x[k] = v(static_cast<Eigen::Index>(split_offset(k)));
    return {p, x};
  }

 private:
  void rebuild() {
    free_.clear();
    position_.assign(full_size(), -1);
    for (std::size_t i = 0; i < full_size(); ++i)
      if (!pinned_[i]) {
        position_[i] = static_cast<Eigen::Index>(free_.size());
        free_.push_back(static_cast<Eigen::Index>(i));
      }
  }

  std::size_t n_t_ = 0, num_irs_ = 0, num_ers_ = 0;
  double scale_ = 1.0;
  std::vector<bool> pinned_;
  std::vector<Eigen::Index> free_;
  std::vector<Eigen::Index> position_;
};

struct AssembledSubproblem {
  solver::ConvexSubproblem problem;
  VariableLayout layout;
  bool has_energy_constraint = false;
  bool split_active = false;  // false when every X_k is pinned to zero
};

/// Phi = 2 Re{p_anchor^H g g^H p} - |g^H p_anchor|^2, a global lower bound on
/// |g^H p|^2 that is tight at p = p_anchor.
inline double taylor_lower_bound(const CVector& g, const CVector& p, const CVector& p_anchor) {
  if (g.size() != p.size() || g.size() != p_anchor.size()) throw DimensionError("taylor_lower_bound: length mismatch");
  const cplx ga = g.dot(p_anchor);  // g^H p_anchor
  const cplx gp = g.dot(p);         // g^H p
  return 2.0 * std::real(std::conj(ga) * gp) - std::norm(ga);
}

/// Below this common rate (bits) at the expansion point the common stream is
/// treated as carrying nothing: the split variables are pinned to zero and the
/// common-rate constraints are dropped for this subproblem.
inline constexpr double kIdleCommonRate = 1e-9;

/// Relative slack accepted on the expansion point's transmit power.
inline constexpr double kExpansionPowerTolerance = 1e-8;

/// Builds the convex subproblem around `expansion_point` with (g, w) frozen in
/// `state`. `channels` are the stored (unnormalized) channels.
inline AssembledSubproblem assemble_from_state(const SystemConfig& config, const ChannelSet& channels,
                                               const EqualizerState& state, const PrecoderSet& expansion_point,
                                               const Strategy& strategy = Strategy::rs()) {
  const std::size_t n_t = config.num_tx_antennas;
  const std::size_t K = config.num_irs;
  const std::size_t J = config.num_ers;
  const double pt = config.total_power;
  const double scale = std::sqrt(pt);

  if (total_transmit_power(expansion_point) > pt * (1.0 + kExpansionPowerTolerance))
    throw InvariantError("expansion point exceeds the transmit power budget");

  const ChannelSet eff = effective_channels(config, channels);

  VariableLayout layout(n_t, K, J, scale);
  if (strategy.common_pinned()) layout.pin_stream(0);
  for (std::size_t k = 0; k < K; ++k) {
    if (strategy.private_pinned(k)) layout.pin_stream(1 + k);
    if (strategy.split_pinned(k)) layout.pin_split(k);
  }
  const auto rates = achievable_rates(eff, expansion_point);
  const bool split_active = !strategy.common_pinned() && rates.common_rate_bound >= kIdleCommonRate;
  if (!split_active)
    for (std::size_t k = 0; k < K; ++k)
      if (!layout.split_pinned(k)) layout.pin_split(k);

  const auto full = static_cast<Eigen::Index>(layout.full_size());
  const auto block = static_cast<Eigen::Index>(2 * n_t);
  auto off = [&](std::size_t s) { return static_cast<Eigen::Index>(layout.stream_offset(s)); };
  auto xoff = [&](std::size_t k) { return static_cast<Eigen::Index>(layout.split_offset(k)); };

  std::vector<RMatrix> gram_real;
  for (const auto& h : eff.ir_channels) gram_real.push_back(detail::realify_hermitian(h * h.adjoint()));

  // Objective: sum_k u_k (X_k + w_k eps_k(P) - log2 w_k).
  solver::QuadraticForm obj = solver::QuadraticForm::zero(full);
  for (std::size_t k = 0; k < K; ++k) {
    const double u = config.rate_weights.at(k);
    const double w = state.private_weights.at(k);
    const cplx g = state.private_equalizers.at(k);
    const double quad = u * w * std::norm(g) * pt;
    for (std::size_t j = 0; j < K; ++j) obj.P.block(off(1 + j), off(1 + j), block, block) += quad * gram_real[k];
    obj.q.segment(off(1 + k), block) += -2.0 * u * w * scale * detail::realify(std::conj(g) * eff.ir_channels[k]);
    obj.q(xoff(k)) += u;
    obj.r += u * (w * (std::norm(g) + 1.0) - std::log2(w));
  }

  std::vector<solver::Constraint> constraints;

  // Common-rate constraints: xi_{c,k}(P) - 1 - sum_j X_j <= 0.
  if (split_active) {
    for (std::size_t k = 0; k < K; ++k) {
      const double w = state.common_weights.at(k);
      const cplx g = state.common_equalizers.at(k);
      solver::QuadraticForm f = solver::QuadraticForm::zero(full);
      const double quad = w * std::norm(g) * pt;
      for (std::size_t s = 0; s <= K; ++s) f.P.block(off(s), off(s), block, block) += quad * gram_real[k];
      f.q.segment(off(0), block) += -2.0 * w * scale * detail::realify(std::conj(g) * eff.ir_channels[k]);
      for (std::size_t j = 0; j < K; ++j) f.q(xoff(j)) -= 1.0;
      f.r = w * (std::norm(g) + 1.0) - std::log2(w) - 1.0;
      constraints.emplace_back(solver::QuadraticConstraint{"common_rate_" + std::to_string(k + 1), std::move(f)});
    }
  }

  // Linearized sum-energy constraint.
  bool has_energy = false;
  if (J > 0 && config.energy_threshold > 0.0) {
    const double zeta = config.harvest_efficiency;
    CMatrix gram = CMatrix::Zero(static_cast<Eigen::Index>(n_t), static_cast<Eigen::Index>(n_t));
    for (const auto& gj : channels.er_channels) gram += gj * gj.adjoint();
    const double e_scale = max_harvestable_energy(channels, config);
    if (!(e_scale > 0.0)) throw InfeasibleError("energy threshold is positive but no energy can be harvested");
    RVector a = RVector::Zero(full);
    double constant = 0.0;
    for (std::size_t s = 0; s < layout.num_streams(); ++s) {
      if (layout.stream_pinned(s)) continue;
      const CVector& p0 = expansion_point.stream(s);
      a.segment(off(s), block) = 2.0 * zeta * scale * detail::realify(gram * p0);
      constant += zeta * std::real(p0.dot(gram * p0));
    }
    constraints.emplace_back(
        solver::LinearConstraint{"energy", a / e_scale, (config.energy_threshold + constant) / e_scale});
    has_energy = true;
  }

  // Power: the normalized precoders lie in the unit ball.
  {
    std::vector<Eigen::Index> idx;
    for (std::size_t s = 0; s < layout.num_streams(); ++s)
      for (Eigen::Index i = 0; i < block; ++i) idx.push_back(off(s) + i);
    constraints.emplace_back(solver::BallConstraint{"power", std::move(idx), 1.0});
  }

  // X_k <= 0.
  constraints.emplace_back(solver::NonPositiveConstraint{"split_sign", {}});
  for (std::size_t k = 0; k < K; ++k) std::get<solver::NonPositiveConstraint>(constraints.back()).indices.push_back(xoff(k));

  // Restrict everything to the free variables.
  const auto& fr = layout.free_indices();
  AssembledSubproblem out;
  out.layout = layout;
  out.has_energy_constraint = has_energy;
  out.split_active = split_active;
  auto& prob = out.problem;
  prob.num_variables = layout.size();
  prob.objective = {obj.P(fr, fr), obj.q(fr), obj.r};

  auto remap = [&](const std::vector<Eigen::Index>& idx) {
    std::vector<Eigen::Index> r;
    for (auto i : idx) {
      const auto pos = layout.free_position(static_cast<std::size_t>(i));
      if (pos >= 0) r.push_back(pos);
    }
    return r;
  };
  for (auto& con : constraints) {
    std::visit(
        [&](auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, solver::QuadraticConstraint>) {
            prob.constraints.emplace_back(
                solver::QuadraticConstraint{c.tag, {c.f.P(fr, fr), c.f.q(fr), c.f.r}});
          } else if constexpr (std::is_same_v<T, solver::LinearConstraint>) {
            prob.constraints.emplace_back(solver::LinearConstraint{c.tag, c.a(fr), c.bound});
          } else if constexpr (std::is_same_v<T, solver::BallConstraint>) {
            prob.constraints.emplace_back(solver::BallConstraint{c.tag, remap(c.indices), c.radius});
          } else {
            auto idx = remap(c.indices);
            if (!idx.empty()) prob.constraints.emplace_back(solver::NonPositiveConstraint{c.tag, std::move(idx)});
          }
        },
        con);
  }
  return out;
}

}  // namespace rsswipt
