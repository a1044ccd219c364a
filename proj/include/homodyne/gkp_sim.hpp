#pragma once

#include <map>
#include <optional>
#include <vector>

#include "homodyne/core.hpp"
#include "homodyne/exec.hpp"
#include "homodyne/fock.hpp"

namespace homodyne {

// ---- GKP parameter relations ----

double gkp_nbar_from_delta(double delta_env);
double gkp_delta_from_nbar(double n_bar);
// (1 - e^{-D^2}) / (1 + e^{-D^2}) = tanh(D^2 / 2)
double gkp_sigma_sq_from_delta(double delta_env);
double gkp_delta_from_sigma_sq(double sigma_gkp_sq);
double gkp_sigma_sq_from_db(double db);

// ---- codewords ----

struct CutoffRule {
  int max_cutoff = 200;
  double tol = 1e-6;
  int min_cutoff = 8;
};

struct GkpCode {
  double delta_env = 0.0;
  double n_bar = 0.0;
  double sigma_gkp_sq = 0.0;
  double squeezing_db = 0.0;
  int cutoff = 0;
  double raw_overlap = 0.0;  // |<0|1>| before orthogonalization
  CVec ket0, ket1;
  CMat projector;

  int dim() const { return cutoff + 1; }
  CMat isometry() const;  // [ket0 ket1], dim x 2
};

// Codewords at a fixed cutoff.
GkpCode build_gkp_code(double delta_env, int cutoff);
// Smallest cutoff whose code projector has infidelity below rule.tol
// against the projector at rule.max_cutoff.
GkpCode build_gkp_code(double delta_env, CutoffRule rule = {});

// 1 - tr(P_a P_b) / 2, both projectors embedded in the larger space.
double projector_infidelity(const GkpCode& a, const GkpCode& b);

// ---- Gaussian displacement channel ----

struct KrausGrid {
  int nodes = 21;  // Gauss-Hermite nodes per axis
};

struct GaussHermite {
  std::vector<double> x, w;  // weight e^{-x^2}
};
GaussHermite gauss_hermite(int n);

class Channel {
 public:
  enum class Kind { DenseSuperop, BlockSuperop, Kraus };

  static Channel dense(int dim, CMat superop);
  static Channel blocks(int dim, std::vector<RMat> blocks);
  static Channel kraus(int dim, std::vector<CMat> ops);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const CMat& superop() const { return superop_; }
  const std::vector<RMat>& block_list() const { return blocks_; }
  const std::vector<CMat>& kraus_ops() const { return kraus_; }

  // Linear action on any dim x dim operator.
  CMat apply(const CMat& rho, Exec exec = Exec::Parallel) const;
  // Dense dim^2 x dim^2 matrix in column-stacked convention.
  CMat to_superop() const;
  // Sum_k M_k^dag M_k (Kraus form only).
  CMat completeness() const;
  Channel then(const Channel& next) const;  // next o this, superop forms only

 private:
  Kind kind_ = Kind::DenseSuperop;
  int dim_ = 0;
  CMat superop_;
  std::vector<RMat> blocks_;
  std::vector<CMat> kraus_;
};

// L[L] = L*(x)L - 1/2 I(x)L^dag L - 1/2 (L^dag L)^T (x) I, column stacking.
CMat lindblad_dissipator(const CMat& L);

// exp(sigma^2 (L[a] + L[a^dag])) exponentiated per m-n block.
Channel displacement_channel(double sigma_sq, int cutoff, Exec exec = Exec::Parallel);
// Reference: exponentiate the full dense superoperator.
Channel displacement_channel_dense(double sigma_sq, int cutoff);
Channel displacement_channel_kraus(double sigma_sq, int cutoff, KrausGrid grid = {},
                                   Exec exec = Exec::Parallel);

// ---- fidelity ----

// Recovery Kraus operators are 2 x dim.
using KrausSet = std::vector<CMat>;

double entanglement_fidelity(const GkpCode& code, const Channel& channel,
                             const KrausSet& recovery, Exec exec = Exec::Parallel);

// R_k = V^dag A_k^dag N(P)^{-1/2}; needs a Kraus channel.
KrausSet transpose_recovery(const GkpCode& code, const Channel& channel);
KrausSet codespace_readout(const GkpCode& code);

double p_succ(double sigma_eff);
double analytic_entanglement_fidelity(double sigma_gkp_sq, double sigma_noise_sq);
// Largest sigma_noise^2 with analytic infidelity <= eps; NoBudget when even
// zero external noise exceeds eps.
double tolerable_noise_sq(double sigma_gkp_sq, double eps);

// <n>, <q^2> (q = a + a^dag), <(n+1/2)^2>^{1/2} under composite["n_half_sq"],
// and <q^m> for each requested degree under q_pow.
StateMoments state_moments_from_fock(const CMat& rho, const std::vector<int>& q_degrees = {},
                                     double omega = 1.0);

}  // namespace homodyne
