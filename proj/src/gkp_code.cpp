#include <cmath>
#include <numbers>

#include "homodyne/gkp_sim.hpp"

namespace homodyne {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kEnvelopeCut = 1e-12;
// Beyond this |x| the Gaussian prefactor of psi_0 underflows.
constexpr double kMaxPeak = 37.0;

void require_positive(double x, const char* name) {
  if (!(x > 0) || !std::isfinite(x)) throw Error(Errc::RangeError, std::string(name) + " must be > 0");
}

// Unnormalized <n|exp(-D^2 n) sum_j |(2j+s) sqrt(pi)> for n <= cutoff.
Eigen::VectorXd raw_codeword(double delta_env, int cutoff, int s) {
  const int d = cutoff + 1;
  double d2 = delta_env * delta_env;
  double x_fock = std::sqrt(2.0 * cutoff + 1.0) + 10.0;
  double x_env = std::sqrt(-2.0 * std::log(kEnvelopeCut) / std::tanh(d2));
  double xmax = std::min({x_fock, x_env, kMaxPeak});
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  int jmax = int(std::ceil(xmax / (2.0 * kSqrtPi))) + 1;
  for (int j = -jmax; j <= jmax; ++j) {
    double x = (2.0 * j + s) * kSqrtPi;
    if (std::abs(x) > xmax) continue;
    auto psi = hermite_functions(x, cutoff);
    for (int n = 0; n < d; ++n) v(n) += psi[n];
  }
  for (int n = 0; n < d; ++n) v(n) *= std::exp(-d2 * n);
  return v;
}

}  // namespace

double gkp_nbar_from_delta(double delta_env) {
  require_positive(delta_env, "delta_env");
  return 1.0 / (2.0 * delta_env * delta_env);
}

double gkp_delta_from_nbar(double n_bar) {
  require_positive(n_bar, "n_bar");
  return 1.0 / std::sqrt(2.0 * n_bar);
}

double gkp_sigma_sq_from_delta(double delta_env) {
  require_positive(delta_env, "delta_env");
  return std::tanh(0.5 * delta_env * delta_env);
}

double gkp_delta_from_sigma_sq(double s) {
  if (!(s > 0 && s < 1)) throw Error(Errc::RangeError, "sigma_gkp^2 must lie in (0, 1)");
  return std::sqrt(2.0 * std::atanh(s));
}

double gkp_sigma_sq_from_db(double db) { return 0.5 * std::pow(10.0, -db / 10.0); }

CMat GkpCode::isometry() const {
  CMat v(dim(), 2);
  v.col(0) = ket0;
  v.col(1) = ket1;
  return v;
}

GkpCode build_gkp_code(double delta_env, int cutoff) {
  require_positive(delta_env, "delta_env");
  if (cutoff < 1) throw Error(Errc::DimensionMismatch, "cutoff must be >= 1");
  Eigen::VectorXd k0 = raw_codeword(delta_env, cutoff, 0);
  Eigen::VectorXd k1 = raw_codeword(delta_env, cutoff, 1);
  double n0 = k0.norm(), n1 = k1.norm();
  if (!(n0 > 0 && n1 > 0)) throw Error(Errc::NumericFailure, "codeword vanished at this cutoff");
  k0 /= n0;
  k1 /= n1;
  GkpCode c;
  c.delta_env = delta_env;
  c.n_bar = gkp_nbar_from_delta(delta_env);
  c.sigma_gkp_sq = gkp_sigma_sq_from_delta(delta_env);
  c.squeezing_db = -10.0 * std::log10(2.0 * c.sigma_gkp_sq);
  c.cutoff = cutoff;
  c.raw_overlap = std::abs(k0.dot(k1));
  k1 -= k0.dot(k1) * k0;
  double r = k1.norm();
  if (!(r > 1e-8)) throw Error(Errc::NumericFailure, "codewords are linearly dependent");
  k1 /= r;
  // Second pass keeps |<0|1>| at rounding level.
  k1 -= k0.dot(k1) * k0;
  k1.normalize();
  c.ket0 = k0.cast<cplx>();
  c.ket1 = k1.cast<cplx>();
  c.projector = c.ket0 * c.ket0.adjoint() + c.ket1 * c.ket1.adjoint();
  return c;
}

double projector_infidelity(const GkpCode& a, const GkpCode& b) {
  const GkpCode& lo = a.dim() <= b.dim() ? a : b;
  const GkpCode& hi = a.dim() <= b.dim() ? b : a;
  const int d = lo.dim();
  double s = 0.0;
  for (const CVec* u : {&lo.ket0, &lo.ket1})
    for (const CVec* v : {&hi.ket0, &hi.ket1}) s += std::norm(u->dot(v->head(d)));
  return 1.0 - 0.5 * s;
}

GkpCode build_gkp_code(double delta_env, CutoffRule rule) {
  if (rule.max_cutoff < rule.min_cutoff || rule.min_cutoff < 1)
    throw Error(Errc::RangeError, "invalid cutoff rule");
  GkpCode ref = build_gkp_code(delta_env, rule.max_cutoff);
  // The reference itself must not lean on its top levels.
  const int tail = std::min(10, ref.dim() / 4);
  double leak = ref.ket0.tail(tail).squaredNorm() + ref.ket1.tail(tail).squaredNorm();
  if (leak > rule.tol)
    throw Error(Errc::CutoffTooSmall, "codewords not converged at max_cutoff " +
                                          std::to_string(rule.max_cutoff));
  for (int c = rule.min_cutoff; c < rule.max_cutoff; c += 2) {
    GkpCode code = build_gkp_code(delta_env, c);
    if (projector_infidelity(code, ref) < rule.tol) return code;
  }
  return ref;
}

}  // namespace homodyne
