#pragma once

#include <vector>

#include "homodyne/core.hpp"

namespace homodyne {

// Photodiode added-noise figures in electrons.
inline constexpr double kPhotodiodeNoiseLow = 730.0;
inline constexpr double kPhotodiodeNoiseHigh = 8250.0;

struct GkpBudgetInput {
  double n_bar = 0.0;
  double sigma_noise = 0.0;
  double sigma_0 = 0.0;
  double eps_ec = 0.0;
  double eps_m = 0.0;
};

struct GkpBudgetPlan {
  GkpBudgetInput input;
  double r = 0.0;
  double n_prime_a = 0.0;
  double n_prime_b = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
  double delta_m_sq = 0.0;
  double n_lo = 0.0;
  double sigma_e = 0.0;
  double residual = 0.0;

  // LO photons needed when the photodiode noise is sigma_target electrons.
  double n_lo_at(double sigma_target) const;
};

struct PlanOptions {
  bool pauli_allowance = true;
};

void validate_budget_input(const GkpBudgetInput& in);

double required_resolution(double sigma_noise, double sigma_0);
// Inverse of required_resolution.
double sigma_noise_from(double sigma_0, double r);

struct MeasuredModePhotons {
  double n_prime_a, n_prime_b;
};
MeasuredModePhotons measured_mode_photons(double n_bar, double sigma_0,
                                          PlanOptions opts = {});

struct DeltaSolution {
  double delta_m_sq;
  double residual;
  double c2, c4;
};
double quartic_c2(double r, double n_prime_a, double n_prime_b);
double quartic_c4(double r, double n_prime_a, double n_prime_b);
DeltaSolution solve_delta_m(double eps_m, double r, double n_prime_a, double n_prime_b);

GkpBudgetPlan plan(const GkpBudgetInput& in, PlanOptions opts = {});

// Squeezing in dB for a GKP peak variance sigma_gkp^2.
double squeezing_db(double sigma_gkp_sq);

struct Table1Row {
  double sigma_gkp;  // as printed
  GkpBudgetInput input;
};
const std::vector<Table1Row>& table1_rows();

}  // namespace homodyne
