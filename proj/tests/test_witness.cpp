#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "homodyne/bounds.hpp"
#include "homodyne/witness.hpp"

using namespace homodyne;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct evaluation without series branches; fine for |omega delta s| >> 1e-4.
double naive_distance_sq(double alpha, double omega, double delta, double s, double gamma) {
  double x = omega * delta * s;
  double phi = std::remainder(x, 2 * kPi);
  double d1 = (std::cos(phi) - 1) * gamma + (std::sin(phi) / x - std::cos(phi)) * alpha * s;
  double d2 = -std::sin(phi) * (gamma - alpha * s) - alpha * s * (1 - std::cos(phi)) / x;
  return 2 * (1 - std::exp(-(d1 * d1 + d2 * d2) / 2));
}

CoherentWitnessInput single(double delta, double s, double gamma) {
  return {delta, s, single_mode_ensemble(), {gamma}};
}

}  // namespace

TEST(WrapAngle, Examples) {
  EXPECT_EQ(wrap_angle_pi(0.0), 0.0);
  EXPECT_NEAR(wrap_angle_pi(1.5 * kPi), -0.5 * kPi, 1e-15);
  EXPECT_EQ(wrap_angle_pi(-kPi), kPi);
  EXPECT_EQ(wrap_angle_pi(kPi), kPi);
  EXPECT_NEAR(wrap_angle_pi(7 * kPi), kPi, 1e-12);
  EXPECT_THROW(wrap_angle_pi(INFINITY), Error);
}

TEST(WrapAngle, RangeProperty) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 2000; ++i) {
    double x = u(rng), w = wrap_angle_pi(x);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::cos(w), std::cos(x), 1e-12);
    EXPECT_NEAR(std::sin(w), std::sin(x), 1e-12);
  }
}

TEST(GPhi, ExamplesAndBand) {
  EXPECT_EQ(g_phi(0.0), 1.0);
  EXPECT_NEAR(g_phi(kPi / 2), kPi / 4, 1e-15);
  EXPECT_THROW(g_phi(3.2), Error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    double p = u(rng), g = g_phi(p);
    EXPECT_LE(1 - p * p / 9, g + 1e-15);
    EXPECT_LE(g, 1 - p * p / 12 + 1e-15);
  }
}

TEST(GPhi, SeriesBranchMatchesExtendedPrecision) {
  for (double p : {0.9e-4, -0.5e-4, 1e-6}) {
    long double h = 0.5L * p;
    long double want = h * std::cos(h) / std::sin(h);
    EXPECT_NEAR(g_phi(p), double(want), 1e-15);
  }
}

TEST(WitnessDelta, SeriesBranchMatchesExtendedPrecision) {
  for (double x : {0.9e-4, -0.7e-4, 3e-6})
    for (double gamma : {-3.0, 0.0, 2.0}) {
      long double lx = x, a = 1.0L;
      long double omc = 2 * std::sin(lx / 2) * std::sin(lx / 2);  // 1 - cos without cancellation
      long double d1 = -omc * gamma + (std::sin(lx) / lx - std::cos(lx)) * a;
      long double d2 = -std::sin(lx) * (gamma - a) - a * omc / lx;
      auto d = witness_delta(1.0, 1.0, x, 1.0, gamma);
      EXPECT_NEAR(d.d1, double(d1), 1e-15);
      EXPECT_NEAR(d.d2, double(d2), 1e-15);
    }
}

TEST(Witness, WorkedExample) {
  auto d = witness_delta(1.0, 1.0, 0.1, 1.0, 0.0);
  EXPECT_NEAR(d.d1, std::sin(0.1) / 0.1 - std::cos(0.1), 1e-15);
  EXPECT_NEAR(d.d1, 0.003330, 5e-7);
  EXPECT_NEAR(d.d2, 0.04987, 1e-5);
  double e = coherent_exact_distance_sq(single(0.1, 1.0, 0.0));
  EXPECT_NEAR(e, 2.50e-3, 5e-6);
  EXPECT_NEAR(e, naive_distance_sq(1.0, 1.0, 0.1, 1.0, 0.0), 1e-15);
  EXPECT_GE(evolution_distance_bound(0.1, 1.0, StateMoments::photons(0.0), 1.0).distance_sq, e);
}

TEST(Witness, MatchesNaiveFormula) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    double d = std::pow(10.0, -2 + 2 * u(rng)), s = -5 + 10 * u(rng), g = -3 + 6 * u(rng);
    if (std::abs(d * s) < 1e-3) continue;
    EXPECT_NEAR(coherent_exact_distance_sq(single(d, s, g)), naive_distance_sq(1, 1, d, s, g), 1e-12);
  }
}

TEST(Witness, ZeroAtZeroS) { EXPECT_EQ(coherent_exact_distance_sq(single(0.1, 0.0, 2.0)), 0.0); }

TEST(Witness, Errors) {
  EXPECT_THROW(coherent_exact_distance_sq(single(0.0, 1.0, 1.0)), Error);
  try {
    coherent_exact_distance_sq(single(0.0, 1.0, 1.0));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroDelta);
  }
  EXPECT_EQ(coherent_exact_distance_sq(single(0.0, 1.0, 1.0), true), 0.0);
  auto neg = validate_ensemble(std::vector<double>{-1.0}, std::vector<double>{1.0});
  CoherentWitnessInput in{0.1, 1.0, neg, {0.0}};
  try {
    coherent_exact_distance_sq(in);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DomainError);
  }
  CoherentWitnessInput mism{0.1, 1.0, single_mode_ensemble(), {0.0, 1.0}};
  EXPECT_THROW(coherent_exact_distance_sq(mism), Error);
}

TEST(Witness, DefaultGridShapeAndNoViolations) {
  auto g = default_witness_grid();
  EXPECT_EQ(g.deltas.size(), 12u);
  EXPECT_EQ(g.ss.size(), 21u);
  EXPECT_EQ(g.gammas.size(), 3u);
  EXPECT_NEAR(g.deltas.front(), 1e-4, 1e-18);
  EXPECT_NEAR(g.deltas.back(), 0.3, 1e-14);
  auto pts = scan_witness(g);
  EXPECT_EQ(pts.size(), 2u * 12 * 21 * 3);
  EXPECT_EQ(count_violations(pts), 0u);
}

TEST(Witness, SerialEqualsParallel) {
  auto g = default_witness_grid();
  auto a = scan_witness(g, Exec::Serial);
  auto b = scan_witness(g, Exec::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].exact, b[i].exact);
    EXPECT_EQ(a[i].bound, b[i].bound);
    EXPECT_EQ(a[i].refined, b[i].refined);
  }
}

TEST(Witness, RandomPointsDominated) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  double h = std::sqrt(1.0 / 3.0);
  auto e3 = validate_ensemble(std::vector<double>{h, h, h}, std::vector<double>{1.0, 0.7, 0.2});
  for (int i = 0; i < 1000; ++i) {
    WitnessGrid g;
    g.deltas = {std::pow(10.0, -4 + 3.5 * u(rng))};
    g.ss = {-5 + 10 * u(rng)};
    g.gammas = {-3 + 6 * u(rng)};
    g.ensembles = {single_mode_ensemble(), e3};
    EXPECT_EQ(count_violations(scan_witness(g, Exec::Serial)), 0u);
  }
}

TEST(Witness, LeadingOrderTightness) {
  for (double d : {1e-3, 1e-4})
    for (double s : {0.5, 1.0, 2.0})
      for (double g : {-3.0, 0.0, 3.0}) {
        auto in = single(d, s, g);
        double exact = coherent_exact_distance_sq(in);
        StateMoments m = StateMoments::photons(g * g);
        double refined = evolution_distance_bound_refined(d, s, m, single_mode_ensemble()).distance_sq;
        double ratio = exact / refined;
        EXPECT_GT(ratio, 0.05);
        EXPECT_LE(ratio, 1.0);
      }
}

TEST(Witness, LeadingOrderIsLowerBoundForOpposingGamma) {
  for (double d : {1e-3, 1e-4})
    for (double s : {0.5, 1.0, 2.0})
      for (double g : {-3.0, -1.0, 0.0}) {
        auto in = single(d, s, g);
        EXPECT_LE(witness_leading_order(in), coherent_exact_distance_sq(in) * (1 + 1e-6));
      }
}
