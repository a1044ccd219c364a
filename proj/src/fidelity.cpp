#include <cmath>
#include <numbers>

#include "homodyne/gkp_sim.hpp"

namespace homodyne {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTailMass = 1e-16;
}  // namespace

double p_succ(double sigma_eff) {
  if (!(sigma_eff > 0) || !std::isfinite(sigma_eff))
    throw Error(Errc::NonPositiveSigma, "sigma_eff must be > 0");
  const double c = 1.0 / (sigma_eff * std::sqrt(2.0));
  double p = std::erf(0.5 * kSqrtPi * c);
  double side = 0.0;
  for (long n = 1;; ++n) {
    double a = (2.0 * n - 0.5) * kSqrtPi * c;
    double b = (2.0 * n + 0.5) * kSqrtPi * c;
    double ta = std::erfc(a);
    side += 0.5 * (ta - std::erfc(b));
    if (0.5 * ta < kTailMass) break;
    if (n > 100000000L) throw Error(Errc::NumericFailure, "p_succ lattice sum did not converge");
  }
  return p + 2.0 * side;
}

double analytic_entanglement_fidelity(double sigma_gkp_sq, double sigma_noise_sq) {
  if (!(sigma_gkp_sq >= 0) || !(sigma_noise_sq >= 0))
    throw Error(Errc::NegativeInput, "variances must be >= 0");
  double v = 3.0 * sigma_gkp_sq + sigma_noise_sq;
  if (v == 0.0) return 1.0;
  double p = p_succ(std::sqrt(v));
  return p * p;
}

double tolerable_noise_sq(double sigma_gkp_sq, double eps) {
  if (!(eps > 0 && eps < 1)) throw Error(Errc::RangeError, "eps must lie in (0, 1)");
  auto infid = [&](double v) { return 1.0 - analytic_entanglement_fidelity(sigma_gkp_sq, v); };
  if (infid(0.0) > eps) throw Error(Errc::NoBudget, "finite-energy penalty alone exceeds eps");
  double lo = 0.0, hi = 1e-3;
  while (infid(hi) <= eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(Errc::NumericFailure, "no crossing found");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (infid(mid) <= eps ? lo : hi) = mid;
  }
  return lo;
}

KrausSet codespace_readout(const GkpCode& code) { return {code.isometry().adjoint()}; }

KrausSet transpose_recovery(const GkpCode& code, const Channel& channel) {
  if (channel.kind() != Channel::Kind::Kraus)
    throw Error(Errc::DomainError, "transpose recovery needs the Kraus form of the channel");
  if (channel.dim() != code.dim()) throw Error(Errc::DimensionMismatch, "code and channel dimensions differ");
  CMat np = channel.apply(code.projector);
  CMat isq = inverse_sqrt_psd(np);
  CMat vd = code.isometry().adjoint();
  KrausSet r;
  r.reserve(channel.kraus_ops().size());
  for (const auto& a : channel.kraus_ops()) r.push_back(vd * a.adjoint() * isq);
  return r;
}

double entanglement_fidelity(const GkpCode& code, const Channel& channel, const KrausSet& recovery,
                             Exec exec) {
  const int d = code.dim();
  if (channel.dim() != d) throw Error(Errc::DimensionMismatch, "code and channel dimensions differ");
  if (recovery.empty()) throw Error(Errc::DimensionMismatch, "empty recovery");
  for (const auto& r : recovery)
    if (r.rows() != 2 || r.cols() != d) throw Error(Errc::DimensionMismatch, "recovery Kraus must be 2 x dim");
  const CVec* kets[2] = {&code.ket0, &code.ket1};
  // F_e = 1/4 sum_ij <i| R(N(|i_L><j_L|)) |j>
  double f = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMat y = channel.apply(*kets[i] * kets[j]->adjoint(), exec);
      cplx s = 0.0;
      for (const auto& r : recovery) s += (r * y * r.adjoint())(i, j);
      f += s.real();
    }
  return 0.25 * f;
}

StateMoments state_moments_from_fock(const CMat& rho, const std::vector<int>& q_degrees,
                                     double omega) {
  validate_density(rho);
  const int d = int(rho.rows());
  double high = 0.0;
  for (int n = std::max(0, d - 5); n < d; ++n) high += rho(n, n).real();
  if (d > 5 && high > 1e-8) throw Error(Errc::CutoffLeakage, "population near the cutoff exceeds 1e-8");

  int max_deg = 2;
  for (int m : q_degrees) {
    if (m < 2 || m % 2 != 0) throw Error(Errc::RangeError, "moment degrees must be even and >= 2");
    max_deg = std::max(max_deg, m);
  }
  // Pad so q^m is exact on the support of rho.
  const int dx = d + max_deg / 2 + 1;
  CMat big = CMat::Zero(dx, dx);
  big.topLeftCorner(d, d) = rho;
  CMat q = quadrature(dx, 0.0);

  StateMoments m;
  double n = 0.0, nh = 0.0;
  for (int k = 0; k < d; ++k) {
    double p = rho(k, k).real();
    n += k * p;
    nh += (k + 0.5) * (k + 0.5) * p;
  }
  m.n_tot = n;
  m.omega_exp = omega * omega * n;
  m.composite["n_half_sq"] = std::sqrt(nh);
  CMat qk = q;
  std::map<int, double> pw;
  for (int k = 1; k <= max_deg; ++k) {
    if (k > 1) qk = qk * q;
    pw[k] = (big * qk).trace().real();
  }
  m.q_sq = pw[2];
  for (int deg : q_degrees) m.q_pow[deg] = pw[deg];
  return m;
}

}  // namespace homodyne
