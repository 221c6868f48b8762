#include "rsswipt/channel.hpp"
#include "rsswipt/wmmse.hpp"

#include <gtest/gtest.h>

using namespace rsswipt;

namespace {

struct Instance {
  ChannelSet eff;
  PrecoderSet p;
};

Instance random_instance(std::uint64_t seed, std::size_t n = 4, std::size_t k = 2) {
  ComplexGaussian rng(seed);
  Instance in;
  in.eff = build_random_channels(n, k, 1, seed + 1000);
  in.p = PrecoderSet::zeros(n, k, 1);
  const double scale = 0.2 + 3.0 * rng.uniform();
  for (std::size_t s = 0; s < in.p.num_streams(); ++s) in.p.stream(s) = scale * rng.vector(n);
  return in;
}

}  // namespace

TEST(Mse, WeightOneGivesPlainMse) {
  const auto in = random_instance(3);
  auto st = mmse_equalizers(in.eff, in.p);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(augmented_wmse(in.eff, in.p, st, k, Stream::priv), mse(in.eff, in.p, st, k, Stream::priv));
    EXPECT_DOUBLE_EQ(augmented_wmse(in.eff, in.p, st, k, Stream::common), mse(in.eff, in.p, st, k, Stream::common));
  }
}

TEST(Mse, MmseValuesMatchMseAtMmseEqualizer) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto in = random_instance(seed);
    const auto st = mmse_equalizers(in.eff, in.p);
    const auto mm = mmse_values(in.eff, in.p);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(mse(in.eff, in.p, st, k, Stream::priv), mm.priv[k], 1e-12);
      EXPECT_NEAR(mse(in.eff, in.p, st, k, Stream::common), mm.common[k], 1e-12);
      EXPECT_GT(mm.priv[k], 0.0);
      EXPECT_LE(mm.priv[k], 1.0);
    }
  }
}

// Oracle: the MSE is a convex quadratic in the equalizer, so any perturbation
// of the MMSE equalizer must not decrease it.
TEST(Mse, MmseEqualizerIsMinimizerUnderPerturbation) {
  ComplexGaussian rng(77);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto in = random_instance(seed);
    const auto st = mmse_equalizers(in.eff, in.p);
    for (std::size_t k = 0; k < 2; ++k)
      for (auto s : {Stream::common, Stream::priv}) {
        const cplx g0 = s == Stream::common ? st.common_equalizers[k] : st.private_equalizers[k];
        const double e0 = mse(in.eff, in.p, g0, k, s);
        for (int t = 0; t < 20; ++t) {
          const cplx d = rng() * std::pow(10.0, -3.0 * rng.uniform());
          EXPECT_GE(mse(in.eff, in.p, g0 + d, k, s), e0 - 1e-12);
        }
      }
  }
}

TEST(Mse, KnownValues) {
  // One antenna, h = 1, p_1 = 1, no interference: T = 2, g = 1/2, eps = 1/2.
  ChannelSet eff;
  eff.ir_channels = {CVector::Ones(1)};
  auto p = PrecoderSet::zeros(1, 1, 0);
  p.priv[0](0) = 1.0;
  const auto st = mmse_state(eff, p);
  EXPECT_DOUBLE_EQ(st.private_equalizers[0].real(), 0.5);
  EXPECT_DOUBLE_EQ(st.private_weights[0], 2.0);
  EXPECT_DOUBLE_EQ(mmse_values(eff, p).priv[0], 0.5);
  // xi = 2 * 0.5 - log2(2) = 0 = 1 - R with R = 1 bit
  EXPECT_NEAR(augmented_wmse(eff, p, st, 0, Stream::priv), 0.0, 1e-15);
}

TEST(Weights, InverseOfMmse) {
  const auto in = random_instance(11);
  const auto mm = mmse_values(in.eff, in.p);
  const auto w = optimal_weights(mm);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(w.private_weights[k], 1.0 / mm.priv[k]);
    EXPECT_GE(w.common_weights[k], 1.0);
  }
}

TEST(Weights, NonPositiveWeightRejected) {
  const auto in = random_instance(12);
  auto st = mmse_state(in.eff, in.p);
  st.private_weights[0] = 0.0;
  EXPECT_THROW(augmented_wmse(in.eff, in.p, st, 0, Stream::priv), InvariantError);
}

TEST(Identity, RateFromMmseMatchesPhysics) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = random_instance(seed, 3, 3);
    const auto mm = mmse_values(in.eff, in.p);
    const auto r = achievable_rates(in.eff, in.p);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(-std::log2(mm.priv[k]), r.private_rates[k], 1e-12);
      EXPECT_NEAR(-std::log2(mm.common[k]), r.common_rates[k], 1e-12);
    }
  }
}

TEST(Identity, AugmentedWmseAtMmseIsOneMinusRate) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto in = random_instance(seed);
    const auto st = mmse_state(in.eff, in.p);
    const auto r = achievable_rates(in.eff, in.p);
    const auto rep = wmse_report(in.eff, in.p, st);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(rep.private_augmented[k], 1.0 - r.private_rates[k], 1e-10);
      EXPECT_NEAR(rep.common_augmented[k], 1.0 - r.common_rates[k], 1e-10);
    }
  }
}

// Finite-difference oracle on the received power T_k: perturbing the private
// precoder of another IR changes T_k by the leaked power.
TEST(ReceivedPowers, MatchDirectSums) {
  const auto in = random_instance(5);
  const auto t0 = received_powers(in.eff, in.p, 0);
  const double leak = std::norm(in.eff.ir_channels[0].dot(in.p.priv[1]));
  auto q = in.p;
  q.priv[1].setZero();
  const auto t1 = received_powers(in.eff, q, 0);
  EXPECT_NEAR(t0.priv - t1.priv, leak, 1e-12 * t0.priv);
  EXPECT_NEAR(t0.common - t0.priv, std::norm(in.eff.ir_channels[0].dot(in.p.common)), 1e-12 * t0.common);
}

TEST(Objective, SumOfWeightedPrivatePlusX) {
  const auto in = random_instance(8);
  const auto st = mmse_state(in.eff, in.p);
  SystemConfig c;
  c.rate_weights = {0.5, 3.0};
  const std::vector<double> x{-0.2, -0.1};
  const auto r = achievable_rates(in.eff, in.p);
  const double expect = 0.5 * (-0.2 + 1.0 - r.private_rates[0]) + 3.0 * (-0.1 + 1.0 - r.private_rates[1]);
  EXPECT_NEAR(wmmse_objective(c, in.eff, in.p, st, x), expect, 1e-12);
}
