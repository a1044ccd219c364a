#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "homodyne/gkp_sim.hpp"

using namespace homodyne;

namespace {

constexpr int kCut = 20;

CMat vacuum(int dim) {
  CMat r = CMat::Zero(dim, dim);
  r(0, 0) = 1;
  return r;
}

// Gaussian mixture of coherent states on a plain Riemann grid.
CMat brute_force_noisy_vacuum(double sigma_sq, int dim) {
  const int n = 161;
  const double s = std::sqrt(sigma_sq), L = 8 * s, h = 2 * L / (n - 1);
  CMat out = CMat::Zero(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx a(-L + i * h, -L + j * h);
      double p = std::exp(-std::norm(a) / sigma_sq) / (std::numbers::pi * sigma_sq) * h * h;
      CVec c = coherent_state(a, dim);
      out += p * c * c.adjoint();
    }
  return out;
}

}  // namespace

TEST(GaussHermite, IntegratesPolynomials) {
  auto gh = gauss_hermite(21);
  double m0 = 0, m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < gh.x.size(); ++i) {
    m0 += gh.w[i];
    m2 += gh.w[i] * gh.x[i] * gh.x[i];
    m4 += gh.w[i] * std::pow(gh.x[i], 4);
  }
  double sp = std::sqrt(std::numbers::pi);
  EXPECT_NEAR(m0, sp, 1e-13);
  EXPECT_NEAR(m2, sp / 2, 1e-13);
  EXPECT_NEAR(m4, 3 * sp / 4, 1e-13);
}

TEST(Channel, BlockMatchesDenseReference) {
  for (double s2 : {0.01, 0.04}) {
    CMat a = displacement_channel(s2, kCut).to_superop();
    CMat b = displacement_channel_dense(s2, kCut).to_superop();
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Channel, DissipatorMatchesCommutatorForm) {
  std::mt19937_64 rng(4);
  const int d = 6;
  CMat L = annihilation(d);
  CMat rho = random_density_matrix(d, d, rng);
  CMat S = lindblad_dissipator(L);
  Eigen::Map<const CVec> v(rho.data(), d * d);
  CVec out = S * v;
  CMat got = Eigen::Map<const CMat>(out.data(), d, d);
  CMat want = L * rho * L.adjoint() - 0.5 * (L.adjoint() * L * rho + rho * L.adjoint() * L);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Channel, KrausAgreesWithSuperoperator) {
  std::mt19937_64 rng(20);
  for (double s2 : {0.01, 0.04}) {
    auto sup = displacement_channel(s2, kCut);
    auto kr = displacement_channel_kraus(s2, kCut);
    for (int i = 0; i < 20; ++i) {
      CMat rho = random_density_matrix(kCut + 1, 8, rng);
      EXPECT_LT(trace_distance(sup.apply(rho), kr.apply(rho)), 1e-6);
    }
  }
}

TEST(Channel, TracePreserving) {
  std::mt19937_64 rng(21);
  auto sup = displacement_channel(0.04, kCut);
  auto kr = displacement_channel_kraus(0.04, kCut);
  for (int i = 0; i < 20; ++i) {
    CMat rho = random_density_matrix(kCut + 1, kCut + 1, rng);
    EXPECT_NEAR(sup.apply(rho).trace().real(), 1.0, 1e-8);
  }
  for (int i = 0; i < 20; ++i) {
    CMat rho = random_density_matrix(kCut + 1, 8, rng);
    EXPECT_NEAR(kr.apply(rho).trace().real(), 1.0, 1e-6);
  }
}

TEST(Channel, SemigroupAddsVariances) {
  std::mt19937_64 rng(22);
  auto a = displacement_channel(0.01, kCut);
  auto b = displacement_channel(0.03, kCut);
  auto ab = displacement_channel(0.04, kCut);
  for (int i = 0; i < 10; ++i) {
    CMat rho = random_density_matrix(kCut + 1, kCut + 1, rng);
    EXPECT_LT((b.apply(a.apply(rho)) - ab.apply(rho)).cwiseAbs().maxCoeff(), 1e-7);
  }
  CMat composed = a.then(b).to_superop();
  EXPECT_LT((composed - ab.to_superop()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Channel, VacuumPhotonGain) {
  for (double s2 : {0.0025, 0.01, 0.04}) {
    CMat out = displacement_channel(s2, kCut).apply(vacuum(kCut + 1));
    EXPECT_NEAR((number_op(kCut + 1) * out).trace().real(), s2, 1e-6);
  }
}

TEST(Channel, NoisyVacuumMatchesCoherentMixture) {
  const double s2 = 0.04;
  CMat ref = brute_force_noisy_vacuum(s2, 10);
  CMat sup = displacement_channel(s2, 30).apply(vacuum(31)).topLeftCorner(10, 10);
  CMat kr = displacement_channel_kraus(s2, 30).apply(vacuum(31)).topLeftCorner(10, 10);
  EXPECT_LT((sup - ref).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((kr - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Channel, ZeroNoiseIsIdentity) {
  std::mt19937_64 rng(23);
  CMat rho = random_density_matrix(11, 11, rng);
  EXPECT_LT((displacement_channel(0.0, 10).apply(rho) - rho).norm(), 1e-14);
}

TEST(Channel, KrausCompletenessOnLowLevels) {
  auto kr = displacement_channel_kraus(0.01, kCut);
  CMat c = kr.completeness();
  EXPECT_LT((c.topLeftCorner(8, 8) - CMat::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Channel, SerialAndParallelAgree) {
  std::mt19937_64 rng(24);
  CMat rho = random_density_matrix(kCut + 1, 10, rng);
  auto bs = displacement_channel(0.02, kCut, Exec::Serial);
  auto bp = displacement_channel(0.02, kCut, Exec::Parallel);
  EXPECT_EQ((bs.to_superop() - bp.to_superop()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((bs.apply(rho, Exec::Serial) - bs.apply(rho, Exec::Parallel)).cwiseAbs().maxCoeff(), 1e-15);
  auto ks = displacement_channel_kraus(0.02, kCut, {}, Exec::Serial);
  auto kp = displacement_channel_kraus(0.02, kCut, {}, Exec::Parallel);
  ASSERT_EQ(ks.kraus_ops().size(), kp.kraus_ops().size());
  for (std::size_t i = 0; i < ks.kraus_ops().size(); ++i)
    EXPECT_EQ((ks.kraus_ops()[i] - kp.kraus_ops()[i]).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((ks.apply(rho, Exec::Serial) - ks.apply(rho, Exec::Parallel)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Channel, Errors) {
  EXPECT_THROW(displacement_channel(-0.1, 10), Error);
  EXPECT_THROW(displacement_channel(0.1, 0), Error);
  auto c = displacement_channel(0.01, 5);
  EXPECT_THROW(c.apply(CMat::Identity(4, 4)), Error);
  EXPECT_THROW(c.completeness(), Error);
  EXPECT_THROW(Channel::kraus(3, {CMat::Identity(2, 2)}), Error);
}
