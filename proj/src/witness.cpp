#include "homodyne/witness.hpp"

#include <cmath>
#include <numbers>

#include "homodyne/bounds.hpp"

namespace homodyne {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCut = 1e-4;
}  // namespace

double wrap_angle_pi(double x) {
  if (!std::isfinite(x)) throw Error(Errc::DomainError, "angle is not finite");
  if (x > -kPi && x <= kPi) return x;
  double r = std::fmod(x + kPi, 2.0 * kPi);
  if (r < 0) r += 2.0 * kPi;
  r -= kPi;
  return r <= -kPi ? kPi : r;
}

double g_phi(double phi) {
  if (!(std::abs(phi) <= kPi)) throw Error(Errc::DomainError, "|phi| > pi");
  if (std::abs(phi) < kSeriesCut) {
    double p2 = phi * phi;
    return 1.0 - p2 / 12.0 - p2 * p2 / 720.0;
  }
  return 0.5 * phi / std::tan(0.5 * phi);
}

DeltaComponents witness_delta(double alpha, double omega, double delta, double s, double gamma) {
  double x = omega * delta * s;
  double phi = wrap_angle_pi(x);
  double sinp = std::sin(phi);
  double cosm1 = -2.0 * std::sin(0.5 * phi) * std::sin(0.5 * phi);  // cos(phi) - 1
  double c1, c2;  // sin(phi)/x - cos(phi), (1 - cos(phi))/x
  if (std::abs(x) < kSeriesCut) {
    double x2 = x * x;
    c1 = x2 / 3.0 - x2 * x2 / 30.0;
    c2 = x / 2.0 - x * x2 / 24.0;
  } else {
    c1 = sinp / x - (1.0 + cosm1);
    c2 = -cosm1 / x;
  }
  double as = alpha * s;
  return {cosm1 * gamma + c1 * as, -sinp * (gamma - as) - as * c2};
}

double coherent_exact_distance_sq(const CoherentWitnessInput& in, bool zero_delta_limit) {
  const auto& e = in.ensemble;
  if (in.gammas.size() != e.size())
    throw Error(Errc::DimensionMismatch, "gammas must match the number of modes");
  if (!std::isfinite(in.delta) || in.delta < 0) throw Error(Errc::RangeError, "delta < 0");
  if (in.delta == 0.0) {
    if (zero_delta_limit) return 0.0;
    throw Error(Errc::ZeroDelta, "delta must be > 0");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    auto a = e.alphas()[k];
    if (std::abs(a.imag()) > kInternalTol || a.real() < 0)
      throw Error(Errc::DomainError, "witness requires real non-negative alpha_k");
    auto d = witness_delta(a.real(), e.omegas()[k], in.delta, in.s, in.gammas[k]);
    sum += d.d1 * d.d1 + d.d2 * d.d2;
  }
  return -2.0 * std::expm1(-0.5 * sum);
}

double witness_leading_order(const CoherentWitnessInput& in) {
  double omega_exp = 0.0;
  for (std::size_t k = 0; k < in.ensemble.size(); ++k) {
    double w = in.ensemble.omegas()[k];
    omega_exp += w * w * in.gammas[k] * in.gammas[k];
  }
  double ds = in.delta * in.s;
  double c = 4.0 / 9.0;
  return 0.81 * ds * ds * (omega_exp + c * c * in.s * in.s * omega_bar_sq(in.ensemble));
}

WitnessGrid default_witness_grid() {
  WitnessGrid g;
  const int nd = 12;
  double lo = std::log10(1e-4), hi = std::log10(0.3);
  for (int i = 0; i < nd; ++i) g.deltas.push_back(std::pow(10.0, lo + (hi - lo) * i / (nd - 1)));
  for (int i = 0; i < 21; ++i) g.ss.push_back(-5.0 + 0.5 * i);
  g.gammas = {-3.0, 0.0, 3.0};
  g.ensembles.push_back(single_mode_ensemble());
  double h = std::sqrt(0.5);
  g.ensembles.push_back(validate_ensemble(std::vector<double>{h, h}, std::vector<double>{1.0, 0.5}));
  return g;
}

namespace {

WitnessPoint eval_point(const WitnessGrid& g, std::size_t ei, std::size_t di, std::size_t si,
                        std::size_t gi) {
  WitnessPoint p;
  const auto& e = g.ensembles[ei];
  p.ensemble_index = ei;
  p.delta = g.deltas[di];
  p.s = g.ss[si];
  p.gamma = g.gammas[gi];
  double n = 0.0;
  for (double w : e.omegas()) {
    p.omega_exp += w * w * p.gamma * p.gamma;
    n += p.gamma * p.gamma;
  }
  if (p.delta == 0.0) {
    p.skipped = true;
    return p;
  }
  CoherentWitnessInput in{p.delta, p.s, e, std::vector<double>(e.size(), p.gamma)};
  p.exact = coherent_exact_distance_sq(in);
  StateMoments m;
  m.omega_exp = p.omega_exp;
  m.n_tot = n;
  p.bound = evolution_distance_bound(p.delta, p.s, m, e).distance_sq;
  p.refined = evolution_distance_bound_refined(p.delta, p.s, m, e).distance_sq;
  p.in_refined_regime = refined_regime(p.delta, p.s, e);
  p.dominated = p.exact <= p.bound;
  p.refined_dominated = !p.in_refined_regime || p.exact <= p.refined;
  return p;
}

}  // namespace

std::vector<WitnessPoint> scan_witness(const WitnessGrid& g, Exec exec) {
  const std::size_t nd = g.deltas.size(), ns = g.ss.size(), ng = g.gammas.size();
  const std::size_t per = nd * ns * ng;
  const std::size_t total = g.ensembles.size() * per;
  for (const auto& e : g.ensembles)
    for (auto a : e.alphas())
      if (std::abs(a.imag()) > kInternalTol || a.real() < 0)
        throw Error(Errc::DomainError, "witness requires real non-negative alpha_k");
  for (double d : g.deltas)
    if (!std::isfinite(d) || d < 0) throw Error(Errc::RangeError, "delta < 0");
  std::vector<WitnessPoint> out(total);
  auto body = [&](std::size_t idx) {
    std::size_t ei = idx / per, r = idx % per;
    std::size_t di = r / (ns * ng);
    r %= ns * ng;
    out[idx] = eval_point(g, ei, di, r / ng, r % ng);
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < total; ++i) body(i);
  } else {
    const long long n = static_cast<long long>(total);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  }
  return out;
}

std::size_t count_violations(const std::vector<WitnessPoint>& pts) {
  std::size_t v = 0;
  for (const auto& p : pts)
    if (!p.skipped && (!p.dominated || !p.refined_dominated)) ++v;
  return v;
}

}  // namespace homodyne
