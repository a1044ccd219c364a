#include "homodyne/gkp_planner.hpp"

#include <cmath>
#include <numbers>

namespace homodyne {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* name) {
  if (!(x > 0) || !std::isfinite(x)) throw Error(Errc::RangeError, std::string(name) + " must be > 0");
}
}  // namespace

void validate_budget_input(const GkpBudgetInput& in) {
  require_positive(in.n_bar, "n_bar");
  require_positive(in.sigma_noise, "sigma_noise");
  if (!(in.sigma_0 >= 0) || !std::isfinite(in.sigma_0)) throw Error(Errc::RangeError, "sigma_0 < 0");
  for (double e : {in.eps_ec, in.eps_m})
    if (!(e > 0 && e < 1)) throw Error(Errc::RangeError, "infidelity allowances must lie in (0, 1)");
}

double required_resolution(double sigma_noise, double sigma_0) {
  double v = 2.0 * sigma_noise * sigma_noise - 6.0 * sigma_0 * sigma_0;
  if (!(v > 0)) throw Error(Errc::NoBudget, "3 sigma_0^2 >= sigma_noise^2 leaves no resolution budget");
  return std::sqrt(v);
}

double sigma_noise_from(double sigma_0, double r) {
  return std::sqrt(3.0 * sigma_0 * sigma_0 + 0.5 * r * r);
}

MeasuredModePhotons measured_mode_photons(double n_bar, double sigma_0, PlanOptions opts) {
  require_positive(n_bar, "n_bar");
  double v = 2.0 * n_bar + 1.0;
  double s2 = sigma_0 * sigma_0;
  double pa = opts.pauli_allowance ? 4.0 * kPi : 0.0;
  double pb = opts.pauli_allowance ? 2.0 * kPi : 0.0;
  return {(3.0 * v - 2.0 + 3.0 * s2 + pa) / 4.0, (4.0 * v - 2.0 + 4.0 * s2 + pb) / 4.0};
}

double quartic_c2(double r, double na, double nb) {
  double t = 2.0 * r;
  double t2 = t * t;
  return 4.0 * (na + nb) / t2 + 3.0 / (t2 * t2);
}

double quartic_c4(double r, double na, double nb) {
  double t = 2.0 * r;
  return (40.0 / 3.0) * (na + nb + 0.5) / (t * t * t * t * t * t);
}

DeltaSolution solve_delta_m(double eps_m, double r, double na, double nb) {
  require_positive(eps_m, "eps_m");
  require_positive(r, "r");
  require_positive(na, "n_prime_a");
  require_positive(nb, "n_prime_b");
  double c2 = quartic_c2(r, na, nb);
  double c4 = quartic_c4(r, na, nb);
  // Positive root of c4 x^2 + c2 x - eps = 0 without cancellation.
  double x = 2.0 * eps_m / (c2 + std::sqrt(c2 * c2 + 4.0 * c4 * eps_m));
  double residual = std::abs(eps_m - (c2 * x + c4 * x * x));
  return {x, residual, c2, c4};
}

double GkpBudgetPlan::n_lo_at(double sigma_target) const {
  if (sigma_target > sigma_e) {
    double k = sigma_target / sigma_e;
    return n_lo * k * k;
  }
  return n_lo;
}

GkpBudgetPlan plan(const GkpBudgetInput& in, PlanOptions opts) {
  validate_budget_input(in);
  GkpBudgetPlan p;
  p.input = in;
  p.r = required_resolution(in.sigma_noise, in.sigma_0);
  auto np = measured_mode_photons(in.n_bar, in.sigma_0, opts);
  p.n_prime_a = np.n_prime_a;
  p.n_prime_b = np.n_prime_b;
  auto sol = solve_delta_m(in.eps_m, p.r, p.n_prime_a, p.n_prime_b);
  p.c2 = sol.c2;
  p.c4 = sol.c4;
  p.delta_m_sq = sol.delta_m_sq;
  p.residual = sol.residual;
  p.n_lo = 1.0 / p.delta_m_sq;
  p.sigma_e = p.r / std::sqrt(p.delta_m_sq);
  return p;
}

double squeezing_db(double sigma_gkp_sq) {
  require_positive(sigma_gkp_sq, "sigma_gkp^2");
  return -10.0 * std::log10(2.0 * sigma_gkp_sq);
}

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {0.229, {4.8, 0.1, 0.05, 0.06, 0.02}},
      {0.182, {7.6, 0.1, 0.05, 0.015, 0.005}},
      {0.144, {12.0, 0.1, 0.05, 0.002, 0.0005}},
      {0.144, {12.0, 0.18, 0.09, 0.008, 0.002}},
      {0.144, {12.0, 0.18, 0.045, 0.008, 0.002}},
      {0.144, {12.0, 0.15, 0.075, 0.005, 0.005}},
      {0.127, {15.4, 0.14, 0.05, 0.0008, 0.0002}},
  };
  return rows;
}

}  // namespace homodyne
