#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace homodyne {

enum class Errc {
  NormalizationError,
  NegativeWeight,
  NegativeInput,
  RangeError,
  NonPositiveResolution,
  MissingMoment,
  OddDegree,
  DegreeTooSmall,
  SmallMomentBound,
  ZeroDelta,
  DomainError,
  NoBudget,
  CutoffTooSmall,
  DimensionMismatch,
  NonPositiveSigma,
  CutoffLeakage,
  EmptyGrid,
  ConfigError,
  NumericFailure,
};

const char* errc_name(Errc code);

// Numeric failures map to CLI exit code 4, everything else to 2.
bool is_numeric(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline constexpr double kInputTol = 1e-9;
inline constexpr double kInternalTol = 1e-12;

// Per-mode quadrature coefficients and detector weights. Construct through
// validate_ensemble; instances are immutable.
class ModeEnsemble {
 public:
  const std::vector<std::complex<double>>& alphas() const { return alphas_; }
  const std::vector<double>& omegas() const { return omegas_; }
  std::size_t size() const { return omegas_.size(); }

 private:
  friend ModeEnsemble validate_ensemble(std::vector<std::complex<double>>,
                                        std::vector<double>);
  ModeEnsemble(std::vector<std::complex<double>> a, std::vector<double> w)
      : alphas_(std::move(a)), omegas_(std::move(w)) {}

  std::vector<std::complex<double>> alphas_;
  std::vector<double> omegas_;
};

ModeEnsemble validate_ensemble(std::vector<std::complex<double>> alphas,
                               std::vector<double> omegas);
ModeEnsemble validate_ensemble(const std::vector<double>& alphas,
                               const std::vector<double>& omegas);

// One mode, alpha = 1, omega = 1: standard pulsed homodyne.
ModeEnsemble single_mode_ensemble();

// sum_k |alpha_k|^2 omega_k^2
double omega_bar_sq(const ModeEnsemble& ensemble);
// sum_k |alpha_k|^2 omega_k^4
double omega_bar_4(const ModeEnsemble& ensemble);

struct StateMoments {
  double omega_exp = 0.0;  // <Omega> = sum_k omega_k^2 <n_k>
  double n_tot = 0.0;
  std::optional<double> q_sq;
  std::map<int, double> q_pow;
  std::map<std::string, double> composite;

  // Single-mode or omega == 1 input: <Omega> = <n_tot>.
  static StateMoments photons(double n, std::optional<double> q_sq = {});
};

void validate_moments(const StateMoments& m);

// <q^2> <= 4 <n_tot> + 2 for a normalized quadrature.
double conservative_q_sq(double n_tot);

struct ApparatusModel {
  enum class Kind { GaussianResolution, ExplicitMoments };
  Kind kind = Kind::GaussianResolution;
  double r = 0.0;
  double b2 = 0.0;
  double b4 = 0.0;
  std::optional<double> b6;

  static ApparatusModel gaussian(double r);
  static ApparatusModel explicit_moments(double b2, double b4,
                                         std::optional<double> b6 = {});
};

struct BoundReport {
  double distance_sq = 0.0;
  double fidelity_lb = 1.0;
  std::string equation_id;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::string> notes;

  bool has_note(const std::string& n) const;
};

BoundReport make_report(std::string equation_id, double distance_sq,
                        std::vector<std::pair<std::string, double>> inputs,
                        std::vector<std::string> notes = {});

// Caps at 2 and adds the "capped at 2" note when the cap binds.
void cap_unit_vector_distance(BoundReport& report);

double fidelity_from_distance_sq(double eps);
double fidelity_from_overlap(double re_overlap);
// (1 - eps)^2 >= 1 - 2 eps for an overlap written as 1 - eps.
double chained_overlap_fidelity(double eps);

}  // namespace homodyne
