#include "homodyne/bounds.hpp"

#include <cmath>
#include <numbers>

namespace homodyne {

namespace {

void check_delta(double delta) {
  if (!std::isfinite(delta)) throw Error(Errc::RangeError, "delta is not finite");
  if (delta < 0) throw Error(Errc::NegativeInput, "delta < 0");
}

void check_nonneg(double x, const char* name) {
  if (!std::isfinite(x)) throw Error(Errc::RangeError, std::string(name) + " is not finite");
  if (x < 0) throw Error(Errc::NegativeInput, std::string(name) + " < 0");
}

void check_obar(double obar) {
  if (!(obar >= 0.0 && obar <= 1.0 + kInputTol))
    throw Error(Errc::RangeError, "omega_bar_sq outside [0, 1]");
}

double resolve_q_sq(double n_tot, std::optional<double> q_sq, std::vector<std::string>& notes) {
  if (q_sq) {
    check_nonneg(*q_sq, "q_sq");
    return *q_sq;
  }
  notes.emplace_back("q_sq defaulted to 4n_tot+2");
  return conservative_q_sq(n_tot);
}

}  // namespace

FunctionMeasureMoments FunctionMeasureMoments::point(double kappa0) {
  double k = std::abs(kappa0);
  return {1.0, k, k * k, k * k * k * k};
}

void validate_function_moments(const FunctionMeasureMoments& fm) {
  check_nonneg(fm.f0, "f0");
  check_nonneg(fm.f2, "f2");
  if (fm.f1) {
    check_nonneg(*fm.f1, "f1");
    if (*fm.f1 * *fm.f1 > fm.f0 * fm.f2 * (1 + 1e-12) + 1e-300)
      throw Error(Errc::RangeError, "f1^2 > f0 f2 violates Cauchy-Schwarz");
  }
  if (fm.f4) check_nonneg(*fm.f4, "f4");
}

BoundReport evolution_distance_bound(double delta, double s, const StateMoments& m,
                                     double obar, EvolutionForm form) {
  check_delta(delta);
  validate_moments(m);
  check_obar(obar);
  double ds2 = (delta * s) * (delta * s);
  double s2 = s * s;
  double d2;
  std::string id;
  if (form == EvolutionForm::Conservative) {
    d2 = 4.0 * ds2 * ((1.0 + s2) * m.omega_exp + s2 * obar);
    id = "evolution.general";
  } else {
    d2 = ds2 * (2.0 * (1.0 + 2.0 * s2) * m.omega_exp + 2.5 * s2 * obar);
    id = "evolution.general.tight";
  }
  auto r = make_report(id, d2,
                       {{"delta", delta}, {"s", s}, {"omega_exp", m.omega_exp},
                        {"omega_bar_sq", obar}});
  cap_unit_vector_distance(r);
  return r;
}

BoundReport evolution_distance_bound(double delta, double s, const StateMoments& m,
                                     const ModeEnsemble& e, EvolutionForm form) {
  return evolution_distance_bound(delta, s, m, omega_bar_sq(e), form);
}

BoundReport evolution_distance_bound_refined(double delta, double s, const StateMoments& m,
                                             double obar, double obar4) {
  check_delta(delta);
  validate_moments(m);
  check_obar(obar);
  check_nonneg(obar4, "omega_bar4");
  double ds2 = (delta * s) * (delta * s);
  double s2 = s * s;
  double d2 = ds2 * (2.0 * (1.0 + (2.0 / 9.0) * s2 * ds2 * obar) * m.omega_exp +
                     s2 * (0.5 * obar + (2.0 / 9.0) * ds2 * obar4));
  auto r = make_report("evolution.refined", d2,
                       {{"delta", delta}, {"s", s}, {"omega_exp", m.omega_exp},
                        {"omega_bar_sq", obar}, {"omega_bar4", obar4}});
  cap_unit_vector_distance(r);
  return r;
}

BoundReport evolution_distance_bound_refined(double delta, double s, const StateMoments& m,
                                             const ModeEnsemble& e) {
  return evolution_distance_bound_refined(delta, s, m, omega_bar_sq(e), omega_bar_4(e));
}

bool refined_regime(double delta, double s, const ModeEnsemble& e) {
  for (double w : e.omegas())
    if (std::abs(w * delta * s) > std::numbers::pi / 4) return false;
  return true;
}

BoundReport evolution_distance_bound_sph(double delta, double s, double n_tot,
                                         std::optional<double> q_sq) {
  check_delta(delta);
  check_nonneg(n_tot, "n_tot");
  std::vector<std::string> notes;
  double q2 = resolve_q_sq(n_tot, q_sq, notes);
  double ds2 = (delta * s) * (delta * s);
  double d2 = ds2 * (2.0 * n_tot + s * s * (ds2 * q2 / 9.0 + 0.5));
  auto r = make_report("evolution.sph", d2,
                       {{"delta", delta}, {"s", s}, {"n_tot", n_tot}, {"q_sq", q2}},
                       std::move(notes));
  cap_unit_vector_distance(r);
  return r;
}

GaussianMoments gaussian_apparatus_moments(double r) {
  auto a = ApparatusModel::gaussian(r);
  return {a.b2, a.b4, *a.b6};
}

BoundReport measurement_fidelity_bound(double delta, const ApparatusModel& a,
                                       const StateMoments& m, double obar) {
  check_delta(delta);
  validate_moments(m);
  check_obar(obar);
  double d2 = 4.0 * delta * delta * (a.b2 * m.omega_exp + a.b4 * (m.omega_exp + obar));
  bool g = a.kind == ApparatusModel::Kind::GaussianResolution;
  std::vector<std::pair<std::string, double>> in{{"delta", delta}};
  if (g) in.emplace_back("r", a.r);
  in.insert(in.end(), {{"b2", a.b2}, {"b4", a.b4}, {"omega_exp", m.omega_exp},
                       {"omega_bar_sq", obar}});
  return make_report(g ? "measurement.gaussian" : "measurement.general", d2, std::move(in));
}

BoundReport measurement_fidelity_bound(double delta, const ApparatusModel& a,
                                       const StateMoments& m, const ModeEnsemble& e) {
  return measurement_fidelity_bound(delta, a, m, omega_bar_sq(e));
}

BoundReport measurement_fidelity_bound_sph(double delta, const ApparatusModel& a, double n_tot,
                                           std::optional<double> q_sq) {
  check_delta(delta);
  check_nonneg(n_tot, "n_tot");
  if (!a.b6) throw Error(Errc::MissingMoment, "sph measurement bound needs b6");
  std::vector<std::string> notes;
  double q2 = resolve_q_sq(n_tot, q_sq, notes);
  double d2 = delta * delta * (2.0 * a.b2 * n_tot + delta * delta * *a.b6 * q2 / 9.0 + 0.5 * a.b4);
  bool g = a.kind == ApparatusModel::Kind::GaussianResolution;
  std::vector<std::pair<std::string, double>> in{{"delta", delta}};
  if (g) in.emplace_back("r", a.r);
  in.insert(in.end(), {{"b2", a.b2}, {"b4", a.b4}, {"b6", *a.b6}, {"n_tot", n_tot}, {"q_sq", q2}});
  return make_report(g ? "measurement.gaussian.sph" : "measurement.sph", d2, std::move(in),
                     std::move(notes));
}

BoundReport function_distance_bound(double delta, const FunctionMeasureMoments& fm,
                                    const StateMoments& m, double obar) {
  check_delta(delta);
  validate_function_moments(fm);
  validate_moments(m);
  check_obar(obar);
  double d2 = 4.0 * delta * delta * (fm.f0 + fm.f2) * fm.f2 * (m.omega_exp + obar);
  return make_report("function.general", d2,
                     {{"delta", delta}, {"f0", fm.f0}, {"f2", fm.f2},
                      {"omega_exp", m.omega_exp}, {"omega_bar_sq", obar}});
}

BoundReport function_distance_bound(double delta, const FunctionMeasureMoments& fm,
                                    const StateMoments& m, const ModeEnsemble& e) {
  return function_distance_bound(delta, fm, m, omega_bar_sq(e));
}

BoundReport function_distance_bound_sph(double delta, const FunctionMeasureMoments& fm,
                                        double n_tot, std::optional<double> q_sq) {
  check_delta(delta);
  validate_function_moments(fm);
  check_nonneg(n_tot, "n_tot");
  if (!fm.f4) throw Error(Errc::MissingMoment, "sph function bound needs f4");
  std::vector<std::string> notes;
  double q2 = resolve_q_sq(n_tot, q_sq, notes);
  double d2 = delta * delta * (fm.f0 + fm.f2) *
              (2.0 * n_tot + delta * delta * *fm.f4 * q2 / 9.0 + 0.5 * fm.f2);
  return make_report("function.sph", d2,
                     {{"delta", delta}, {"f0", fm.f0}, {"f2", fm.f2}, {"f4", *fm.f4},
                      {"n_tot", n_tot}, {"q_sq", q2}},
                     std::move(notes));
}

RegularizedBound regularized_function_bound(double delta, const FunctionMeasureMoments& fm,
                                            const StateMoments& m, double obar,
                                            double h_sq_exp) {
  check_delta(delta);
  validate_function_moments(fm);
  validate_moments(m);
  check_obar(obar);
  check_nonneg(h_sq_exp, "h_sq_exp");
  double a = 2.0 * delta * std::sqrt((fm.f0 + fm.f2) * fm.f2) * std::sqrt(m.omega_exp + obar);
  double b = std::sqrt(h_sq_exp);
  std::vector<std::pair<std::string, double>> in{
      {"delta", delta},           {"f0", fm.f0},           {"f2", fm.f2},
      {"omega_exp", m.omega_exp}, {"omega_bar_sq", obar}, {"h_sq_exp", h_sq_exp}};
  return {make_report("function.regularized.tight", (a + b) * (a + b), in),
          make_report("function.regularized.loose", 2.0 * a * a + 2.0 * h_sq_exp, in)};
}

double charfn_error_bound(double delta, double gamma_abs, double n_tot, CharfnVariant v) {
  check_delta(delta);
  check_nonneg(gamma_abs, "gamma_abs");
  check_nonneg(n_tot, "n_tot");
  double d2 = delta * delta;
  double g2 = gamma_abs * gamma_abs;
  if (v == CharfnVariant::General) return 4.0 * d2 * g2 * ((1.0 + g2) * n_tot + g2);
  double g4 = g2 * g2;
  return d2 * g2 * ((2.0 + (4.0 / 9.0) * d2 * g4) * n_tot + (2.0 / 9.0) * d2 * g4 + 0.5 * g2);
}

namespace {

void check_moment_inputs(int k, double n_tot, double q_4k) {
  if (k % 2 != 0) throw Error(Errc::OddDegree, "k must be even");
  if (k < 4) throw Error(Errc::DegreeTooSmall, "k must be >= 4");
  check_nonneg(n_tot, "n_tot");
  if (!(q_4k >= 0.5)) throw Error(Errc::SmallMomentBound, "q_4k must be >= 1/2");
}

}  // namespace

MomentErrorBound moment_error_bound(double delta, int k, double n_tot, double q_4k) {
  check_delta(delta);
  check_moment_inputs(k, n_tot, q_4k);
  double sn3 = std::pow(std::sin(std::numbers::pi / k), 3);
  double root6 = std::sqrt(6.0);
  MomentErrorBound out;
  if (delta == 0.0) {
    out.lambda_zero_limit = true;
    return out;
  }
  double lam_pow = 4.0 * root6 * delta * std::sqrt(n_tot + 1.0) / (sn3 * std::sqrt(q_4k));
  out.lambda = std::pow(lam_pow, 1.0 / (2.0 * (k - 1)));
  out.coefficient = 16.0 * root6 * delta * std::sqrt(n_tot + 1.0) / sn3;
  out.error_sq = out.coefficient * std::sqrt(q_4k);
  return out;
}

double moment_error_bound_at_lambda(double delta, int k, double n_tot, double q_4k,
                                    double lambda) {
  check_delta(delta);
  check_moment_inputs(k, n_tot, q_4k);
  if (!(lambda > 0)) throw Error(Errc::RangeError, "lambda must be > 0");
  double sn = std::sin(std::numbers::pi / k);
  double sn3 = sn * sn * sn;
  double first = 32.0 / (sn3 * std::pow(lambda, 2.0 * (k - 1))) * delta * delta *
                 (1.0 + 2.0 / sn + lambda * lambda * 4.0 / sn3) * (n_tot + 1.0);
  return first + 2.0 * std::pow(lambda, 2.0 * k) * q_4k;
}

ConditionalCoefficients conditional_coefficients(const ConditionalDisplacementSpec& s,
                                                 double p_abs) {
  check_nonneg(p_abs, "|p|");
  double P = (std::sqrt(s.w0 * s.wt0) + p_abs * std::sqrt(s.w1 * s.wt1)) / std::sqrt(std::numbers::pi) + 1.0;
  double Q = p_abs * (s.wt2 + p_abs * (s.wt1 * s.wt1 + 2.0 * s.xi * s.xi));
  return {P, Q};
}

BoundReport conditional_displacement_bound(double delta, const ConditionalDisplacementSpec& s,
                                           double composite_exp) {
  check_delta(delta);
  for (double v : {s.w0, s.w1, s.w2, s.wt0, s.wt1, s.wt2}) check_nonneg(v, "w-norm");
  check_nonneg(composite_exp, "composite_exp");
  return make_report("conditional.displacement", 4.0 * delta * delta * composite_exp,
                     {{"delta", delta}, {"xi", s.xi}, {"composite_exp", composite_exp}});
}

double regularization_gap_bound(double x) {
  check_nonneg(x, "<p^2 (u-v)^2>");
  return x;
}

BoundReport apparatus_conditioning_bound(const ApparatusTransition& t) {
  check_nonneg(t.K1, "K1");
  check_nonneg(t.K2, "K2");
  check_nonneg(t.n_half_sq, "n_half_sq");
  return make_report("conditional.apparatus", 2.0 * t.K1 * t.K1 * t.K2 * t.n_half_sq,
                     {{"K1", t.K1}, {"K2", t.K2}, {"n_half_sq", t.n_half_sq}});
}

BoundReport conditional_unitary_bound(double F_sq_exp, double Q_sq_exp) {
  check_nonneg(F_sq_exp, "F_sq_exp");
  check_nonneg(Q_sq_exp, "Q_sq_exp");
  return make_report("conditional.unitary", 2.0 * std::sqrt(F_sq_exp) * std::sqrt(Q_sq_exp),
                     {{"F_sq_exp", F_sq_exp}, {"Q_sq_exp", Q_sq_exp}});
}

TeleportationBound teleportation_bound(double delta, double xi, double sigma,
                                       const ChainMoments& chain) {
  check_delta(delta);
  check_nonneg(xi, "xi");
  check_nonneg(sigma, "sigma");
  auto get = [&](const char* key) {
    auto it = chain.find(key);
    if (it == chain.end()) throw Error(Errc::MissingMoment, std::string("chain moment ") + key);
    check_nonneg(it->second, key);
    return it->second;
  };
  double m1 = get("m1"), m2a = get("m2a"), m2b = get("m2b");
  double b2 = get("b2"), b4 = get("b4"), n_a = get("n_a"), n_b = get("n_b");

  TeleportationBound out;
  out.d_B_sq = 16.0 * delta * delta * xi * xi * m1;
  double c = 2.0 * xi * xi * delta * delta * sigma * sigma;
  double d_C = std::sqrt(c * m2a) + std::sqrt(c * m2b);
  out.d_C_sq = d_C * d_C;
  auto meas = [&](double n) { return 4.0 * delta * delta * (b2 * n + b4 * (n + 1.0)); };
  double d_A = std::sqrt(meas(n_a)) + std::sqrt(meas(n_b));
  out.d_A_sq = d_A * d_A;
  double d = d_A + std::sqrt(out.d_B_sq) + d_C;
  out.total = make_report("teleportation.chain", d * d,
                          {{"delta", delta}, {"xi", xi}, {"sigma", sigma}, {"m1", m1},
                           {"m2a", m2a}, {"m2b", m2b}, {"b2", b2}, {"b4", b4},
                           {"n_a", n_a}, {"n_b", n_b}});
  return out;
}

BoundReport multi_measurement_function_bound(double delta, const MultiMeasurementInput& in) {
  check_delta(delta);
  check_nonneg(in.omega_tot_exp, "omega_tot_exp");
  check_obar(in.omega_bar_sq_tot);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& fm : in.per_measurement) {
    validate_function_moments(fm);
    if (!fm.f1) throw Error(Errc::MissingMoment, "multi-measurement bound needs f1");
    s1 += *fm.f1 * *fm.f1;
    s2 += fm.f2 * fm.f2;
  }
  double d2 = 4.0 * delta * delta * ((s1 + s2) * in.omega_tot_exp + s2 * in.omega_bar_sq_tot);
  return make_report("function.multi", d2,
                     {{"delta", delta}, {"m", double(in.per_measurement.size())},
                      {"f_tot1_sq", s1}, {"f_tot2_sq", s2}, {"omega_tot_exp", in.omega_tot_exp},
                      {"omega_bar_sq_tot", in.omega_bar_sq_tot}});
}

}  // namespace homodyne
