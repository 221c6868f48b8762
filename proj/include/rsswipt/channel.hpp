#pragma once

// Channel construction: the deterministic two-IR / one-ER line-of-sight
// deployment with path loss, and seeded i.i.d. Rayleigh channels for tests.

#include "rsswipt/core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rsswipt {

struct DeterministicChannelSpec {
  double ir_distance = 10.0;  // d_h, m
  double er_distance = 10.0;  // d_g, m
  double path_loss_exponent_amplitude = 1.5;
  double gamma = 1.0;   // amplitude ratio of IR-2 to IR-1
  double theta = 4.0 * std::numbers::pi / 9.0;  // angle between the IRs, rad
  double beta = 2.0 * std::numbers::pi / 9.0;   // ER angle, rad

  bool operator==(const DeterministicChannelSpec&) const = default;
};

namespace detail {

// Uniform phase progression [1, e^{ja}, ..., e^{j(n-1)a}] conjugated entrywise,
// i.e. the column vector written as [1, e^{ja}, ...]^H.
inline CVector steering(std::size_t n, double angle) {
  CVector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = std::polar(1.0, -angle * static_cast<double>(i));
  return v;
}

}  // namespace detail

/// h_1 = d_h^{-a} [1,...,1]^H, h_2 = d_h^{-a} gamma [1, e^{j theta}, ...]^H,
/// g_1 = d_g^{-a} [1, e^{j beta}, ...]^H, with a the amplitude path-loss exponent.
inline ChannelSet build_los_channels(const DeterministicChannelSpec& spec, std::size_t n_t) {
  if (!(spec.ir_distance > 0.0) || !(spec.er_distance > 0.0))
    throw InvariantError("channel distances must be > 0");
  if (!(spec.gamma > 0.0)) throw InvariantError("gamma must be > 0");
  if (n_t == 0) throw InvariantError("n_t must be positive");

  const double ir_gain = std::pow(spec.ir_distance, -spec.path_loss_exponent_amplitude);
  const double er_gain = std::pow(spec.er_distance, -spec.path_loss_exponent_amplitude);

  ChannelSet ch;
  ch.ir_channels.push_back(ir_gain * detail::steering(n_t, 0.0));
  ch.ir_channels.push_back(ir_gain * spec.gamma * detail::steering(n_t, spec.theta));
  ch.er_channels.push_back(er_gain * detail::steering(n_t, spec.beta));
  return ch;
}

/// Standard complex Gaussian sampler with a fixed, documented stream:
/// std::mt19937_64 seeded with `seed`; each uniform is (u64 >> 11) * 2^-53;
/// each complex entry consumes two uniforms (u1, u2) through Box-Muller,
/// re = r cos(2 pi u2), im = r sin(2 pi u2), r = sqrt(-ln(1 - u1)), giving
/// E|x|^2 = 1.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  cplx operator()() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log1p(-u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  CVector vector(std::size_t n) {
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = (*this)();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// IR channels first (k = 0..K-1), then ER channels, entry by entry.
inline ChannelSet build_random_channels(std::size_t n_t, std::size_t num_irs, std::size_t num_ers,
                                        std::uint64_t seed) {
  ComplexGaussian rng(seed);
  ChannelSet ch;
  for (std::size_t k = 0; k < num_irs; ++k) ch.ir_channels.push_back(rng.vector(n_t));
  for (std::size_t j = 0; j < num_ers; ++j) ch.er_channels.push_back(rng.vector(n_t));
  return ch;
}

}  // namespace rsswipt
