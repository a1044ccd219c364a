// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "homodyne/bounds.hpp"
#include "homodyne/gkp_planner.hpp"
#include "homodyne/gkp_sim.hpp"
#include "homodyne/witness.hpp"

using namespace homodyne;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double round_to(double x, int places) {
  double f = std::pow(10.0, places);
  return std::round(x * f) / f;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// The timed body fills the outcome; oracle work may live inside it.
bool run(int id, const char* title, double limit_ms, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (ms >= limit_ms) o.check(false, "runtime " + fmt("%.3g", ms) + " ms over limit");
  std::printf("%s  criterion %d: %s  [%.3f ms, limit %.0f ms]%s%s\n", o.ok ? "PASS" : "FAIL", id, title, ms,
              limit_ms, o.detail.empty() ? "" : "  -- ", o.detail.c_str());
  return o.ok;
}

// ---- oracles ----

double measure_general_oracle(double delta, double r, double n) {
  double t = 2 * r;
  return 4 * (delta * delta / std::pow(t, 4)) * ((t * t + 3) * n + 3);
}

double measure_sph_oracle(double delta, double r, double n) {
  double t = 2 * r, d2 = delta * delta;
  return (d2 / std::pow(t, 4)) * ((2 * t * t + 20 * d2 / (3 * t * t)) * n + 10 * d2 / (3 * t * t) + 1.5);
}

double charfn_general_oracle(double d, double g, double n) { return 4 * d * d * g * g * ((1 + g * g) * n + g * g); }

double charfn_sph_oracle(double d, double g, double n) {
  return d * d * g * g * ((2 + (4.0 / 9.0) * d * d * std::pow(g, 4)) * n + (2.0 / 9.0) * d * d * std::pow(g, 4) + 0.5 * g * g);
}

double p_succ_quadrature(double sigma) {
  // 1e6 Simpson nodes shared across the accepted cells within 12 sigma.
  auto dens = [&](double z) { return std::exp(-z * z / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * kPi)); };
  int ncell = 0;
  while ((2 * (ncell + 1) - 0.5) * kSqrtPi < 12 * sigma) ++ncell;
  int per = 1000000 / (2 * ncell + 1);
  per -= per % 2;
  double sum = 0.0;
  for (int n = -ncell; n <= ncell; ++n) {
    double a = (2 * n - 0.5) * kSqrtPi, h = kSqrtPi / per;
    double s = dens(a) + dens(a + kSqrtPi);
    for (int i = 1; i < per; ++i) s += (i % 2 ? 4 : 2) * dens(a + i * h);
    sum += s * h / 3;
  }
  return sum;
}

}  // namespace

int main() {
  int failed = 0;
  auto tally = [&](bool ok) { failed += ok ? 0 : 1; };

  tally(run(1, "finite-LO measurement fidelity golden values", 1.0, [](Outcome& o) {
    const double d = 1e-4, r = d * 730, n = 5;
    auto a = ApparatusModel::gaussian(r);
    auto gen = measurement_fidelity_bound(d, a, StateMoments::photons(n), single_mode_ensemble());
    auto sph = measurement_fidelity_bound_sph(d, a, n, std::nullopt);
    o.check(rel(gen.distance_sq, measure_general_oracle(d, r, n)) <= 1e-12, "general vs oracle");
    o.check(rel(sph.distance_sq, measure_sph_oracle(d, r, n)) <= 1e-12, "sph vs oracle");
    o.check(round_to(gen.fidelity_lb, 3) == 0.998, "general F " + fmt("%.6f", gen.fidelity_lb));
    o.check(round_to(sph.fidelity_lb, 5) == 0.99996, "sph F " + fmt("%.7f", sph.fidelity_lb));
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("F_gen=%.6f", gen.fidelity_lb) + fmt(" F_sph=%.7f", sph.fidelity_lb);
  }));

  tally(run(2, "characteristic-function error golden values", 1.0, [](Outcome& o) {
    const double d = 1e-4, n = 5;
    double g20 = charfn_error_bound(d, 20, n, CharfnVariant::General);
    double s20 = charfn_error_bound(d, 20, n, CharfnVariant::Sph);
    double s40 = charfn_error_bound(d, 40, n, CharfnVariant::Sph);
    o.check(rel(g20, charfn_general_oracle(d, 20, n)) <= 1e-12, "general vs oracle");
    o.check(rel(s20, charfn_sph_oracle(d, 20, n)) <= 1e-12, "sph 20 vs oracle");
    o.check(rel(s40, charfn_sph_oracle(d, 40, n)) <= 1e-12, "sph 40 vs oracle");
    o.check(std::abs(g20 - 0.0385) < 5e-5, "general " + fmt("%.6f", g20));
    o.check(round_to(s20, 4) == 0.0008, "sph 20 " + fmt("%.6f", s20));
    o.check(round_to(s40, 4) == 0.0130, "sph 40 " + fmt("%.6f", s40));
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("gen20=%.5f", g20) + fmt(" sph20=%.6f", s20) + fmt(" sph40=%.5f", s40);
  }));

  tally(run(3, "quadrature-moment coefficients", 1.0, [](Outcome& o) {
    double c4 = moment_error_bound(1e-4, 4, 5, 1).coefficient;
    double c6 = moment_error_bound(1e-4, 6, 5, 1).coefficient;
    o.check(std::abs(c4 - 0.027) <= 5e-4, "k=4 " + fmt("%.5f", c4));
    o.check(std::abs(c6 - 0.077) <= 5e-4, "k=6 " + fmt("%.5f", c6));
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("k4=%.5f", c4) + fmt(" k6=%.5f", c6);
  }));

  tally(run(4, "GKP budget table pipeline", 10.0, [](Outcome& o) {
    for (const auto& row : table1_rows()) {
      const auto& in = row.input;
      auto p = plan(in);
      double r = std::sqrt(2 * in.sigma_noise * in.sigma_noise - 6 * in.sigma_0 * in.sigma_0);
      double v = 2 * in.n_bar + 1, s2 = in.sigma_0 * in.sigma_0;
      double na = (3 * v - 2 + 3 * s2 + 4 * kPi) / 4, nb = (4 * v - 2 + 4 * s2 + 2 * kPi) / 4;
      double t = 2 * r;
      double c2 = 4 / (t * t) * (na + nb) + 3 / std::pow(t, 4);
      double c4 = (40.0 / 3.0) / std::pow(t, 6) * (na + nb + 0.5);
      double x = (-c2 + std::sqrt(c2 * c2 + 4 * c4 * in.eps_m)) / (2 * c4);
      double nlo = 1 / x, se = r / std::sqrt(x);
      auto at = [&](double s) { return se < s ? nlo * (s / se) * (s / se) : nlo; };
      std::string tag = "n_bar " + fmt("%.1f", in.n_bar) + ": ";
      o.check(rel(p.r, r) < 5e-5, tag + "r");
      o.check(rel(p.n_lo, nlo) < 5e-5, tag + "n_lo");
      o.check(rel(p.sigma_e, se) < 5e-5, tag + "sigma_e");
      o.check(rel(p.n_lo_at(730), at(730)) < 5e-5, tag + "n_lo@730");
      o.check(rel(p.n_lo_at(8250), at(8250)) < 5e-5, tag + "n_lo@8250");
      o.check(p.residual <= 1e-12 * in.eps_m, tag + "residual");
    }
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(table1_rows().size()) + " rows";
  }));

  tally(run(5, "witness domination on the default grid", 5000.0, [](Outcome& o) {
    auto pts = scan_witness(default_witness_grid());
    std::size_t bad = count_violations(pts), regime = 0;
    for (const auto& p : pts) regime += p.in_refined_regime;
    o.check(pts.size() == 2 * 12 * 21 * 3, "grid size");
    o.check(bad == 0, std::to_string(bad) + " violations");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(pts.size()) + " points, " + std::to_string(regime) +
                " in refined regime, " + std::to_string(bad) + " violations";
  }));

  tally(run(6, "leading-order tightness of the refined bound", 1000.0, [](Outcome& o) {
    double lo = 1e9, hi = 0;
    for (double d : {1e-3, 1e-4})
      for (double s : {0.5, 1.0, 2.0})
        for (double g : {-3.0, 0.0, 3.0}) {
          CoherentWitnessInput in{d, s, single_mode_ensemble(), {g}};
          double exact = coherent_exact_distance_sq(in);
          double refined =
              evolution_distance_bound_refined(d, s, StateMoments::photons(g * g), single_mode_ensemble()).distance_sq;
          double ratio = exact / refined;
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
          o.check(ratio > 0.05 && ratio <= 1.0, "ratio " + fmt("%.4f", ratio));
        }
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("ratio in [%.4f, ", lo) + fmt("%.4f]", hi);
  }));

  tally(run(7, "displacement channel correctness at cutoff 30", 60000.0, [](Outcome& o) {
    const int cut = 30, dim = cut + 1;
    std::mt19937_64 rng(2024);
    double worst_td = 0, worst_tr = 0, worst_sg = 0, worst_n = 0;
    for (double s2 : {0.01, 0.04}) {
      auto sup = displacement_channel(s2, cut);
      auto kr = displacement_channel_kraus(s2, cut);
      // Both forms are truncations; test states live below cutoff - 10, away from the edge.
      for (int i = 0; i < 20; ++i) {
        CMat rho = random_density_matrix(dim, cut - 10, rng);
        worst_td = std::max(worst_td, trace_distance(sup.apply(rho), kr.apply(rho)));
        CMat full = random_density_matrix(dim, dim, rng);
        worst_tr = std::max(worst_tr, std::abs(sup.apply(full).trace().real() - 1.0));
      }
      CMat vac = CMat::Zero(dim, dim);
      vac(0, 0) = 1;
      worst_n = std::max(worst_n, std::abs((number_op(dim) * sup.apply(vac)).trace().real() - s2));
      auto half = displacement_channel(0.5 * s2, cut);
      CMat rho = random_density_matrix(dim, dim, rng);
      worst_sg = std::max(worst_sg, (half.apply(half.apply(rho)) - sup.apply(rho)).cwiseAbs().maxCoeff());
    }
    auto dense = displacement_channel_dense(0.04, cut);
    double dense_gap = (dense.to_superop() - displacement_channel(0.04, cut).to_superop()).cwiseAbs().maxCoeff();
    o.check(worst_td <= 1e-6, "superop vs Kraus " + fmt("%.2e", worst_td));
    o.check(worst_tr <= 1e-8, "trace " + fmt("%.2e", worst_tr));
    o.check(worst_sg <= 1e-7, "semigroup " + fmt("%.2e", worst_sg));
    o.check(worst_n <= 1e-6, "photon gain " + fmt("%.2e", worst_n));
    o.check(dense_gap <= 1e-10, "dense vs block " + fmt("%.2e", dense_gap));
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("td=%.1e", worst_td) + fmt(" trace=%.1e", worst_tr) +
                fmt(" semigroup=%.1e", worst_sg) + fmt(" gain=%.1e", worst_n) + fmt(" dense=%.1e", dense_gap);
  }));

  tally(run(8, "GKP codeword construction", 30000.0, [](Outcome& o) {
    double worst_orth = 0, worst_mean = 0, worst_rt = 0;
    for (double nb : {2.0, 4.8}) {
      GkpCode c = build_gkp_code(gkp_delta_from_nbar(nb));
      CMat V = c.isometry();
      worst_orth = std::max(worst_orth, (V.adjoint() * V - CMat::Identity(2, 2)).cwiseAbs().maxCoeff());
      CMat q = quadrature(c.dim(), 0.0), p = quadrature(c.dim(), kPi / 2);
      for (const CVec* k : {&c.ket0, &c.ket1})
        for (const CMat* op : {&q, &p}) worst_mean = std::max(worst_mean, std::abs((k->adjoint() * *op * *k)(0)));
      double d = gkp_delta_from_nbar(nb);
      double s2 = gkp_sigma_sq_from_delta(d);
      double db = -10 * std::log10(2 * s2);
      worst_rt = std::max({worst_rt, std::abs(gkp_nbar_from_delta(d) - nb) / nb,
                           std::abs(gkp_delta_from_sigma_sq(s2) - d), std::abs(gkp_sigma_sq_from_db(db) - s2),
                           std::abs(c.squeezing_db - db)});
    }
    o.check(worst_orth <= 1e-10, "orthonormality " + fmt("%.2e", worst_orth));
    o.check(worst_mean <= 1e-8, "quadrature mean " + fmt("%.2e", worst_mean));
    o.check(worst_rt <= 1e-12, "round trip " + fmt("%.2e", worst_rt));
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("orth=%.1e", worst_orth) + fmt(" mean=%.1e", worst_mean) +
                fmt(" roundtrip=%.1e", worst_rt);
  }));

  tally(run(9, "analytic GKP fidelity via p_succ", 1000.0, [](Outcome& o) {
    double worst = 0;
    for (double s : {0.05, 0.1, 0.2, 0.5}) worst = std::max(worst, std::abs(p_succ(s) - p_succ_quadrature(s)));
    o.check(worst <= 1e-10, "quadrature " + fmt("%.2e", worst));
    o.check(std::abs(p_succ(1e-3) - 1.0) <= 1e-15, "small-sigma limit");
    double p50 = p_succ(50.0);
    o.check(std::abs(p50 - 0.5) <= 1e-3, "sigma=50 " + fmt("%.6f", p50));
    for (double sg2 : {0.01, 0.052}) {
      for (double sn2 : {0.0, 0.01}) {
        double p = p_succ(std::sqrt(3 * sg2 + sn2));
        o.check(analytic_entanglement_fidelity(sg2, sn2) == p * p, "F_e != p_succ^2");
      }
    }
    o.detail += (o.detail.empty() ? "" : "; ") + fmt("max |p - oracle|=%.1e", worst) + fmt(" p(50)=%.6f", p50);
  }));

  std::printf("%s: %d of 9 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
