#pragma once

#include <vector>

#include "homodyne/core.hpp"
#include "homodyne/exec.hpp"

namespace homodyne {

// Coherent input with amplitude i*gamma_k on signal mode k, vacuum on the LO.
struct CoherentWitnessInput {
  double delta = 0.0;
  double s = 0.0;
  ModeEnsemble ensemble = single_mode_ensemble();
  std::vector<double> gammas;
};

// Representative of x mod 2pi in (-pi, pi].
double wrap_angle_pi(double x);

// (phi/2) cot(phi/2), |phi| <= pi.
double g_phi(double phi);

struct DeltaComponents {
  double d1, d2;
};
DeltaComponents witness_delta(double alpha, double omega, double delta, double s, double gamma);

// Exact squared distance minimized over global phase. Requires real,
// non-negative alpha_k. delta == 0 throws ZeroDelta unless zero_delta_limit
// is set, in which case the limit 0 is returned.
double coherent_exact_distance_sq(const CoherentWitnessInput& in, bool zero_delta_limit = false);

// Leading-order prediction (9/10)^2 (<Omega> + (4/9)^2 s^2 omega_bar^2) (delta s)^2.
double witness_leading_order(const CoherentWitnessInput& in);

struct WitnessGrid {
  std::vector<double> deltas;
  std::vector<double> ss;
  std::vector<double> gammas;  // shared by every mode of an ensemble
  std::vector<ModeEnsemble> ensembles;
};

WitnessGrid default_witness_grid();

struct WitnessPoint {
  std::size_t ensemble_index = 0;
  double delta = 0.0, s = 0.0, gamma = 0.0;
  double omega_exp = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  double refined = 0.0;
  bool in_refined_regime = false;
  bool dominated = true;          // exact <= bound
  bool refined_dominated = true;  // exact <= refined (only checked in regime)
  bool skipped = false;           // delta == 0
};

// Points in ensemble-major, then delta, s, gamma order.
std::vector<WitnessPoint> scan_witness(const WitnessGrid& grid, Exec exec = Exec::Parallel);

std::size_t count_violations(const std::vector<WitnessPoint>& pts);

}  // namespace homodyne
