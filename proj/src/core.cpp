#include "homodyne/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace homodyne {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NormalizationError: return "NormalizationError";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::NegativeInput: return "NegativeInput";
    case Errc::RangeError: return "RangeError";
    case Errc::NonPositiveResolution: return "NonPositiveResolution";
    case Errc::MissingMoment: return "MissingMoment";
    case Errc::OddDegree: return "OddDegree";
    case Errc::DegreeTooSmall: return "DegreeTooSmall";
    case Errc::SmallMomentBound: return "SmallMomentBound";
    case Errc::ZeroDelta: return "ZeroDelta";
    case Errc::DomainError: return "DomainError";
    case Errc::NoBudget: return "NoBudget";
    case Errc::CutoffTooSmall: return "CutoffTooSmall";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonPositiveSigma: return "NonPositiveSigma";
    case Errc::CutoffLeakage: return "CutoffLeakage";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::ConfigError: return "ConfigError";
    case Errc::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

bool is_numeric(Errc code) {
  return code == Errc::CutoffTooSmall || code == Errc::CutoffLeakage ||
         code == Errc::NumericFailure;
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

namespace {

void require_finite_nonneg(double x, const char* name) {
  if (!std::isfinite(x)) throw Error(Errc::RangeError, std::string(name) + " is not finite");
  if (x < 0) throw Error(Errc::NegativeInput, std::string(name) + " < 0");
}

}  // namespace

ModeEnsemble validate_ensemble(std::vector<std::complex<double>> alphas,
                               std::vector<double> omegas) {
  if (alphas.empty() || alphas.size() != omegas.size())
    throw Error(Errc::DimensionMismatch, "alphas and omegas must be non-empty and of equal length");
  double norm = 0.0;
  for (auto a : alphas) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error(Errc::RangeError, "non-finite alpha");
    norm += std::norm(a);
  }
  for (double w : omegas) {
    if (!std::isfinite(w)) throw Error(Errc::RangeError, "non-finite omega");
    if (w < 0) throw Error(Errc::NegativeWeight, "omega_k < 0");
  }
  if (std::abs(norm - 1.0) > kInputTol)
    throw Error(Errc::NormalizationError, "sum |alpha_k|^2 = " + std::to_string(norm));
  double wmax = *std::max_element(omegas.begin(), omegas.end());
  if (std::abs(wmax - 1.0) > kInputTol)
    throw Error(Errc::NormalizationError, "max omega_k = " + std::to_string(wmax));
  return ModeEnsemble(std::move(alphas), std::move(omegas));
}

ModeEnsemble validate_ensemble(const std::vector<double>& alphas,
                               const std::vector<double>& omegas) {
  return validate_ensemble(std::vector<std::complex<double>>(alphas.begin(), alphas.end()),
                           omegas);
}

ModeEnsemble single_mode_ensemble() { return validate_ensemble(std::vector<double>{1.0}, std::vector<double>{1.0}); }

double omega_bar_sq(const ModeEnsemble& e) {
  double s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) s += std::norm(e.alphas()[k]) * e.omegas()[k] * e.omegas()[k];
  return s;
}

double omega_bar_4(const ModeEnsemble& e) {
  double s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    double w2 = e.omegas()[k] * e.omegas()[k];
    s += std::norm(e.alphas()[k]) * w2 * w2;
  }
  return s;
}

StateMoments StateMoments::photons(double n, std::optional<double> q_sq) {
  StateMoments m;
  m.omega_exp = n;
  m.n_tot = n;
  m.q_sq = q_sq;
  return m;
}

void validate_moments(const StateMoments& m) {
  require_finite_nonneg(m.omega_exp, "omega_exp");
  require_finite_nonneg(m.n_tot, "n_tot");
  if (m.q_sq) require_finite_nonneg(*m.q_sq, "q_sq");
  for (auto& [deg, v] : m.q_pow) require_finite_nonneg(v, "q_pow");
  for (auto& [label, v] : m.composite) require_finite_nonneg(v, label.c_str());
  if (m.omega_exp > m.n_tot * (1 + kInputTol) + kInputTol)
    throw Error(Errc::RangeError, "<Omega> exceeds <n_tot>");
}

double conservative_q_sq(double n_tot) { return 4.0 * n_tot + 2.0; }

ApparatusModel ApparatusModel::gaussian(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw Error(Errc::NonPositiveResolution, "r must be > 0");
  ApparatusModel a;
  a.kind = Kind::GaussianResolution;
  a.r = r;
  double v = 1.0 / (4.0 * r * r);  // 1/(2r)^2
  a.b2 = v;
  a.b4 = 3.0 * v * v;
  a.b6 = 15.0 * v * v * v;
  return a;
}

ApparatusModel ApparatusModel::explicit_moments(double b2, double b4, std::optional<double> b6) {
  if (!(b2 > 0) || !(b4 > 0) || (b6 && !(*b6 > 0)))
    throw Error(Errc::RangeError, "apparatus moments must be > 0");
  ApparatusModel a;
  a.kind = Kind::ExplicitMoments;
  a.b2 = b2;
  a.b4 = b4;
  a.b6 = b6;
  return a;
}

bool BoundReport::has_note(const std::string& n) const {
  return std::find(notes.begin(), notes.end(), n) != notes.end();
}

BoundReport make_report(std::string equation_id, double distance_sq,
                        std::vector<std::pair<std::string, double>> inputs,
                        std::vector<std::string> notes) {
  if (std::isnan(distance_sq)) throw Error(Errc::NumericFailure, equation_id + " produced NaN");
  BoundReport r;
  r.distance_sq = distance_sq;
  r.fidelity_lb = fidelity_from_distance_sq(distance_sq);
  r.equation_id = std::move(equation_id);
  r.inputs = std::move(inputs);
  r.notes = std::move(notes);
  return r;
}

void cap_unit_vector_distance(BoundReport& report) {
  if (report.distance_sq > 2.0) {
    report.distance_sq = 2.0;
    report.fidelity_lb = 0.0;
    report.notes.emplace_back("capped at 2");
  }
}

double fidelity_from_distance_sq(double eps) {
  if (eps < 0) throw Error(Errc::NegativeInput, "distance_sq < 0");
  return std::max(0.0, 1.0 - eps);
}

double fidelity_from_overlap(double re_overlap) {
  if (!(re_overlap >= -1.0 && re_overlap <= 1.0))
    throw Error(Errc::RangeError, "overlap outside [-1, 1]");
  return re_overlap * re_overlap;
}

double chained_overlap_fidelity(double eps) {
  if (eps < 0) throw Error(Errc::NegativeInput, "eps < 0");
  return std::max(0.0, 1.0 - 2.0 * eps);
}

}  // namespace homodyne
