#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homodyne/core.hpp"

namespace homodyne {

struct FunctionMeasureMoments {
  double f0 = 0.0;
  std::optional<double> f1;
  double f2 = 0.0;
  std::optional<double> f4;

  // Point measure at kappa0, i.e. f(x) = exp(i kappa0 x).
  static FunctionMeasureMoments point(double kappa0);
};

void validate_function_moments(const FunctionMeasureMoments& fm);

struct ConditionalDisplacementSpec {
  double xi = 1.0;
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  double wt0 = 0.0, wt1 = 0.0, wt2 = 0.0;
};

struct ApparatusTransition {
  double K1 = 0.0;
  double K2 = 0.0;
  double n_half_sq = 0.0;  // <(n_tot + 1/2)^2>^{1/2}
};

enum class EvolutionForm { Conservative, Tight };

// Distance^2 between finite-LO and ideal quadrature evolution at apparatus
// eigenvalue s. Conservative is the simple general form, Tight the sharper
// intermediate one; both are capped at 2.
BoundReport evolution_distance_bound(double delta, double s, const StateMoments& m,
                                     double omega_bar_sq,
                                     EvolutionForm form = EvolutionForm::Conservative);
BoundReport evolution_distance_bound(double delta, double s, const StateMoments& m,
                                     const ModeEnsemble& ensemble,
                                     EvolutionForm form = EvolutionForm::Conservative);

BoundReport evolution_distance_bound_refined(double delta, double s, const StateMoments& m,
                                             double omega_bar_sq, double omega_bar4);
BoundReport evolution_distance_bound_refined(double delta, double s, const StateMoments& m,
                                             const ModeEnsemble& ensemble);

// Regime in which the refined form is stated: |omega_k delta s| <= pi/4 for all k.
bool refined_regime(double delta, double s, const ModeEnsemble& ensemble);

BoundReport evolution_distance_bound_sph(double delta, double s, double n_tot,
                                         std::optional<double> q_sq);

struct GaussianMoments {
  double b2, b4, b6;
};
GaussianMoments gaussian_apparatus_moments(double r);

BoundReport measurement_fidelity_bound(double delta, const ApparatusModel& apparatus,
                                       const StateMoments& m, double omega_bar_sq);
BoundReport measurement_fidelity_bound(double delta, const ApparatusModel& apparatus,
                                       const StateMoments& m, const ModeEnsemble& ensemble);

BoundReport measurement_fidelity_bound_sph(double delta, const ApparatusModel& apparatus,
                                           double n_tot, std::optional<double> q_sq);

BoundReport function_distance_bound(double delta, const FunctionMeasureMoments& fm,
                                    const StateMoments& m, double omega_bar_sq);
BoundReport function_distance_bound(double delta, const FunctionMeasureMoments& fm,
                                    const StateMoments& m, const ModeEnsemble& ensemble);

BoundReport function_distance_bound_sph(double delta, const FunctionMeasureMoments& fm,
                                        double n_tot, std::optional<double> q_sq);

struct RegularizedBound {
  BoundReport tight;
  BoundReport loose;
};
RegularizedBound regularized_function_bound(double delta, const FunctionMeasureMoments& fm,
                                            const StateMoments& m, double omega_bar_sq,
                                            double h_sq_exp);

enum class CharfnVariant { General, Sph };
double charfn_error_bound(double delta, double gamma_abs, double n_tot, CharfnVariant variant);

struct MomentErrorBound {
  double error_sq = 0.0;
  double lambda = 0.0;
  bool lambda_zero_limit = false;
  // error_sq / sqrt(q_4k)
  double coefficient = 0.0;
};
MomentErrorBound moment_error_bound(double delta, int k, double n_tot, double q_4k);
// Two-term form before optimizing over lambda.
double moment_error_bound_at_lambda(double delta, int k, double n_tot, double q_4k,
                                    double lambda);

struct ConditionalCoefficients {
  double P;
  double Q;
};
ConditionalCoefficients conditional_coefficients(const ConditionalDisplacementSpec& spec,
                                                 double p_abs);
BoundReport conditional_displacement_bound(double delta, const ConditionalDisplacementSpec& spec,
                                           double composite_exp);

double regularization_gap_bound(double p_sq_uv_sq_exp);

BoundReport apparatus_conditioning_bound(const ApparatusTransition& t);

BoundReport conditional_unitary_bound(double F_sq_exp, double Q_sq_exp);

// Keys: m1, m2a, m2b, b2, b4, n_a, n_b.
using ChainMoments = std::map<std::string, double>;

struct TeleportationBound {
  BoundReport total;
  double d_A_sq = 0.0;
  double d_B_sq = 0.0;
  double d_C_sq = 0.0;
};
TeleportationBound teleportation_bound(double delta, double xi, double sigma,
                                       const ChainMoments& chain);

struct MultiMeasurementInput {
  std::vector<FunctionMeasureMoments> per_measurement;
  double omega_tot_exp = 0.0;
  double omega_bar_sq_tot = 1.0;
};
BoundReport multi_measurement_function_bound(double delta, const MultiMeasurementInput& in);

}  // namespace homodyne
