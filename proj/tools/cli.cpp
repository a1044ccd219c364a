#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "homodyne/bounds.hpp"
#include "homodyne/gkp_planner.hpp"
#include "homodyne/gkp_sim.hpp"
#include "homodyne/witness.hpp"

namespace homodyne::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(Errc::ConfigError, where + ": " + what);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) config_error(where, "expected a number");
  return v.get<double>();
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> base_provenance(const std::string& cmd, const json& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return {"homodyne " + cmd, std::string("config-fnv1a64 ") + buf};
}

// Evaluate body(i) for i in [0, n) across threads, rethrowing the first
// failure in index order so errors are deterministic.
template <class F>
void parallel_rows(std::size_t n, F&& body) {
  std::vector<std::exception_ptr> err(n);
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < nn; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      err[i] = std::current_exception();
    }
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
}

// ---- bound ----

using Params = std::map<std::string, double>;

double need(const Params& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) config_error("/params", std::string("missing parameter '") + key + "'");
  return it->second;
}

std::optional<double> opt(const Params& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  return it->second;
}

std::optional<ModeEnsemble> parse_ensemble(const json& cfg, const std::string& where) {
  if (!cfg.contains("ensemble")) return std::nullopt;
  const json& e = cfg["ensemble"];
  if (!e.is_object() || !e.contains("alphas") || !e.contains("omegas"))
    config_error(where, "ensemble needs 'alphas' and 'omegas'");
  std::vector<std::complex<double>> a;
  std::vector<double> w;
  for (std::size_t i = 0; i < e["alphas"].size(); ++i) {
    const json& v = e["alphas"][i];
    std::string w_at = where + "/alphas/" + std::to_string(i);
    if (v.is_array()) {
      if (v.size() != 2) config_error(w_at, "complex alpha must be [re, im]");
      a.emplace_back(as_number(v[0], w_at), as_number(v[1], w_at));
    } else {
      a.emplace_back(as_number(v, w_at), 0.0);
    }
  }
  for (std::size_t i = 0; i < e["omegas"].size(); ++i)
    w.push_back(as_number(e["omegas"][i], where + "/omegas/" + std::to_string(i)));
  return validate_ensemble(std::move(a), std::move(w));
}

std::string ensemble_label(const ModeEnsemble& e) {
  std::vector<std::string> a, w;
  char buf[64];
  for (auto x : e.alphas()) {
    if (x.imag() == 0.0)
      std::snprintf(buf, sizeof buf, "%.17g", x.real());
    else
      std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
    a.emplace_back(buf);
  }
  for (double x : e.omegas()) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    w.emplace_back(buf);
  }
  return "a=" + join(a, "|") + ";w=" + join(w, "|");
}

StateMoments moments_from(const Params& p) {
  StateMoments m;
  m.omega_exp = need(p, "omega_exp");
  m.n_tot = opt(p, "n_tot").value_or(m.omega_exp);
  m.q_sq = opt(p, "q_sq");
  return m;
}

double obar_from(const Params& p, const std::optional<ModeEnsemble>& e) {
  if (auto v = opt(p, "omega_bar_sq")) return *v;
  return e ? omega_bar_sq(*e) : 1.0;
}

ApparatusModel apparatus_from(const Params& p, double delta) {
  if (auto r = opt(p, "r")) return ApparatusModel::gaussian(*r);
  if (auto sigma = opt(p, "sigma")) return ApparatusModel::gaussian(delta * *sigma);
  if (p.count("b2") && p.count("b4")) return ApparatusModel::explicit_moments(need(p, "b2"), need(p, "b4"), opt(p, "b6"));
  config_error("/params", "apparatus needs 'r', 'sigma' (electrons) or explicit 'b2','b4'[,'b6']");
}

FunctionMeasureMoments fm_from(const Params& p) {
  if (auto k = opt(p, "kappa0")) return FunctionMeasureMoments::point(*k);
  FunctionMeasureMoments fm;
  fm.f0 = need(p, "f0");
  fm.f1 = opt(p, "f1");
  fm.f2 = need(p, "f2");
  fm.f4 = opt(p, "f4");
  return fm;
}

std::vector<BoundReport> eval_bound(const std::string& kind, const Params& p, const json& cfg,
                                    const std::optional<ModeEnsemble>& ens) {
  if (kind == "evolution" || kind == "evolution-tight") {
    auto form = kind == "evolution" ? EvolutionForm::Conservative : EvolutionForm::Tight;
    return {evolution_distance_bound(need(p, "delta"), need(p, "s"), moments_from(p), obar_from(p, ens), form)};
  }
  if (kind == "evolution-refined") {
    double o4 = opt(p, "omega_bar4").value_or(ens ? omega_bar_4(*ens) : 1.0);
    return {evolution_distance_bound_refined(need(p, "delta"), need(p, "s"), moments_from(p), obar_from(p, ens), o4)};
  }
  if (kind == "evolution-sph")
    return {evolution_distance_bound_sph(need(p, "delta"), need(p, "s"), need(p, "n_tot"), opt(p, "q_sq"))};
  if (kind == "measure") {
    double d = need(p, "delta");
    return {measurement_fidelity_bound(d, apparatus_from(p, d), moments_from(p), obar_from(p, ens))};
  }
  if (kind == "measure-sph") {
    double d = need(p, "delta");
    return {measurement_fidelity_bound_sph(d, apparatus_from(p, d), need(p, "n_tot"), opt(p, "q_sq"))};
  }
  if (kind == "charfn") {
    std::string v = cfg.value("variant", "general");
    if (v != "general" && v != "sph") config_error("/variant", "expected 'general' or 'sph'");
    double x = charfn_error_bound(need(p, "delta"), need(p, "gamma_abs"), need(p, "n_tot"),
                                  v == "sph" ? CharfnVariant::Sph : CharfnVariant::General);
    return {make_report("charfn." + v, x, {})};
  }
  if (kind == "moment") {
    double d = need(p, "delta"), n = need(p, "n_tot"), q = need(p, "q_4k");
    double kd = need(p, "k");
    if (kd != std::floor(kd)) config_error("/params/k", "degree must be an integer");
    int k = int(kd);
    if (auto lam = opt(p, "lambda"))
      return {make_report("moment.at_lambda", moment_error_bound_at_lambda(d, k, n, q, *lam), {})};
    auto r = moment_error_bound(d, k, n, q);
    std::vector<std::string> notes{"lambda_used=" + fmt17(r.lambda), "coefficient=" + fmt17(r.coefficient)};
    if (r.lambda_zero_limit) notes.emplace_back("lambda=0 limit at delta=0");
    if (r.lambda > 1.0) notes.emplace_back("lambda>1: optimized form may undercut the two-term form");
    return {make_report("moment.optimized", r.error_sq, {}, notes)};
  }
  if (kind == "function")
    return {function_distance_bound(need(p, "delta"), fm_from(p), moments_from(p), obar_from(p, ens))};
  if (kind == "function-sph")
    return {function_distance_bound_sph(need(p, "delta"), fm_from(p), need(p, "n_tot"), opt(p, "q_sq"))};
  if (kind == "regularized") {
    auto r = regularized_function_bound(need(p, "delta"), fm_from(p), moments_from(p), obar_from(p, ens),
                                        need(p, "h_sq_exp"));
    return {r.tight, r.loose};
  }
  if (kind == "conddisp") {
    ConditionalDisplacementSpec s;
    s.xi = need(p, "xi");
    s.w0 = opt(p, "w0").value_or(0.0);
    s.w1 = opt(p, "w1").value_or(0.0);
    s.w2 = opt(p, "w2").value_or(0.0);
    s.wt0 = opt(p, "wt0").value_or(0.0);
    s.wt1 = opt(p, "wt1").value_or(0.0);
    s.wt2 = opt(p, "wt2").value_or(0.0);
    return {conditional_displacement_bound(need(p, "delta"), s, need(p, "composite_exp"))};
  }
  if (kind == "gap")
    return {make_report("conditional.regularization_gap", regularization_gap_bound(need(p, "p_sq_uv_sq_exp")), {})};
  if (kind == "conditioning")
    return {apparatus_conditioning_bound({need(p, "K1"), need(p, "K2"), need(p, "n_half_sq")})};
  if (kind == "condu") return {conditional_unitary_bound(need(p, "F_sq_exp"), need(p, "Q_sq_exp"))};
  if (kind == "teleport") {
    ChainMoments chain;
    for (const char* key : {"m1", "m2a", "m2b", "b2", "b4", "n_a", "n_b"})
      if (auto v = opt(p, key)) chain[key] = *v;
    auto t = teleportation_bound(need(p, "delta"), need(p, "xi"), need(p, "sigma"), chain);
    t.total.notes = {"d_A_sq=" + fmt17(t.d_A_sq), "d_B_sq=" + fmt17(t.d_B_sq), "d_C_sq=" + fmt17(t.d_C_sq)};
    return {t.total};
  }
  if (kind == "multi") {
    if (!cfg.contains("per_measurement") || !cfg["per_measurement"].is_array())
      config_error("/per_measurement", "multi needs a list of per-measurement moments");
    MultiMeasurementInput in;
    for (std::size_t i = 0; i < cfg["per_measurement"].size(); ++i) {
      const json& j = cfg["per_measurement"][i];
      std::string w = "/per_measurement/" + std::to_string(i);
      FunctionMeasureMoments fm;
      fm.f0 = j.contains("f0") ? as_number(j["f0"], w + "/f0") : 0.0;
      if (!j.contains("f1") || !j.contains("f2")) config_error(w, "needs 'f1' and 'f2'");
      fm.f1 = as_number(j["f1"], w + "/f1");
      fm.f2 = as_number(j["f2"], w + "/f2");
      if (!j.contains("f0")) fm.f0 = fm.f2 > 0 ? (*fm.f1 * *fm.f1) / fm.f2 : 0.0;
      in.per_measurement.push_back(fm);
    }
    in.omega_tot_exp = need(p, "omega_tot_exp");
    in.omega_bar_sq_tot = opt(p, "omega_bar_sq_tot").value_or(1.0);
    return {multi_measurement_function_bound(need(p, "delta"), in)};
  }
  config_error("/kind", "unknown bound kind '" + kind + "'");
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(Errc::ConfigError, "no column " + name);
  return std::size_t(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& col) const {
  return std::get<double>(rows.at(row).at(column(col)));
}

std::string render(const Table& t, Format f) {
  std::ostringstream os;
  for (const auto& p : t.provenance) os << "# " << sanitize(p) << "\n";
  if (f == Format::Csv) {
    os << join(t.columns, ",") << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ",";
        if (auto d = std::get_if<double>(&r[i]))
          os << fmt17(*d);
        else
          os << sanitize(std::get<std::string>(r[i]));
      }
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& r : t.rows) {
    std::vector<std::string> c;
    for (std::size_t i = 0; i < r.size(); ++i) {
      c.push_back(std::holds_alternative<double>(r[i]) ? fmt_short(std::get<double>(r[i]))
                                                       : std::get<std::string>(r[i]));
      width[i] = std::max(width[i], c.back().size());
    }
    cells.push_back(std::move(c));
  }
  auto line = [&](const std::vector<std::string>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      os << c[i] << std::string(width[i] - c[i].size(), ' ');
      os << (i + 1 < c.size() ? "  " : "\n");
    }
  };
  line(t.columns);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& c : cells) line(c);
  return os.str();
}

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1 + std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n');
    throw Error(Errc::ConfigError, "line " + std::to_string(line) + ": " + e.what());
  }
}

std::uint64_t config_hash(const json& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : cfg.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> expand_axis(const json& spec, const std::string& where) {
  if (spec.is_number()) return {spec.get<double>()};
  if (spec.is_array()) {
    std::vector<double> v;
    for (std::size_t i = 0; i < spec.size(); ++i) v.push_back(as_number(spec[i], where + "/" + std::to_string(i)));
    if (v.empty()) throw Error(Errc::EmptyGrid, where + ": empty grid");
    return v;
  }
  if (spec.is_object() && spec.size() == 1 && (spec.contains("linspace") || spec.contains("logspace"))) {
    bool lin = spec.contains("linspace");
    const json& a = lin ? spec["linspace"] : spec["logspace"];
    std::string w = where + (lin ? "/linspace" : "/logspace");
    if (!a.is_array() || a.size() != 3) config_error(w, "expected [start, stop, count]");
    double lo = as_number(a[0], w), hi = as_number(a[1], w), nd = as_number(a[2], w);
    if (nd != std::floor(nd) || nd < 0) config_error(w, "count must be a non-negative integer");
    int n = int(nd);
    if (n == 0) throw Error(Errc::EmptyGrid, w + ": empty grid");
    if (!lin && !(lo > 0 && hi > 0)) config_error(w, "logspace endpoints must be > 0");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
      double t = n == 1 ? 0.0 : double(i) / (n - 1);
      v[i] = lin ? lo + (hi - lo) * t : std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * t);
    }
    return v;
  }
  config_error(where, "expected a number, a list, or {\"linspace\"|\"logspace\": [start, stop, count]}");
}

Table cmd_bound(const json& cfg, const RunOptions&) {
  if (!cfg.is_object()) config_error("/", "config must be an object");
  if (!cfg.contains("kind") || !cfg["kind"].is_string()) config_error("/kind", "missing bound kind");
  const std::string kind = cfg["kind"];
  if (!cfg.contains("params") || !cfg["params"].is_object()) config_error("/params", "missing parameter block");

  std::vector<std::string> names;
  std::vector<std::vector<double>> axes;
  for (auto it = cfg["params"].begin(); it != cfg["params"].end(); ++it) {
    names.push_back(it.key());
    axes.push_back(expand_axis(it.value(), "/params/" + it.key()));
  }
  auto ens = parse_ensemble(cfg, "/ensemble");

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  std::vector<std::vector<BoundReport>> results(total);
  std::vector<Params> points(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (std::size_t k = names.size(); k-- > 0;) {
      points[i][names[k]] = axes[k][r % axes[k].size()];
      r /= axes[k].size();
    }
  }
  parallel_rows(total, [&](std::size_t i) { results[i] = eval_bound(kind, points[i], cfg, ens); });

  Table t;
  t.provenance = base_provenance("bound " + kind, cfg);
  if (ens) t.provenance.push_back("ensemble " + ensemble_label(*ens));
  t.columns.push_back("equation_id");
  for (const auto& n : names) t.columns.push_back(n);
  t.columns.insert(t.columns.end(), {"distance_sq", "fidelity_lb", "notes"});
  for (std::size_t i = 0; i < total; ++i)
    for (const auto& rep : results[i]) {
      std::vector<Cell> row{rep.equation_id};
      for (const auto& n : names) row.emplace_back(points[i].at(n));
      row.emplace_back(rep.distance_sq);
      row.emplace_back(rep.fidelity_lb);
      row.emplace_back(join(rep.notes, ";"));
      t.rows.push_back(std::move(row));
    }
  return t;
}

Table cmd_gkp_plan(const json& cfg, const RunOptions&) {
  if (!cfg.is_object()) config_error("/", "config must be an object");
  std::vector<GkpBudgetInput> inputs;
  const json rows = cfg.value("rows", json("table1"));
  if (rows.is_string()) {
    if (rows.get<std::string>() != "table1") config_error("/rows", "only \"table1\" is a named row set");
    for (const auto& r : table1_rows()) inputs.push_back(r.input);
  } else if (rows.is_array()) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string w = "/rows/" + std::to_string(i);
      const json& j = rows[i];
      if (!j.is_object()) config_error(w, "expected an object");
      GkpBudgetInput in;
      for (auto [key, dst] : {std::pair{"n_bar", &in.n_bar}, {"sigma_noise", &in.sigma_noise},
                              {"sigma_0", &in.sigma_0}, {"eps_ec", &in.eps_ec}, {"eps_m", &in.eps_m}}) {
        if (!j.contains(key)) config_error(w, std::string("missing '") + key + "'");
        *dst = as_number(j[key], w + "/" + key);
      }
      inputs.push_back(in);
    }
  } else {
    config_error("/rows", "expected \"table1\" or a list of rows");
  }
  if (inputs.empty()) throw Error(Errc::EmptyGrid, "/rows: no rows");
  PlanOptions opts;
  if (cfg.contains("pauli_allowance")) {
    if (!cfg["pauli_allowance"].is_boolean()) config_error("/pauli_allowance", "expected true or false");
    opts.pauli_allowance = cfg["pauli_allowance"].get<bool>();
  }

  Table t;
  t.provenance = base_provenance("gkp plan", cfg);
  t.provenance.push_back("n_lo_at columns assume photodiode noise of 730 and 8250 electrons");
  t.provenance.push_back("sigma_noise_max: largest noise whose analytic infidelity stays within eps_ec");
  t.columns = {"n_bar", "sigma_gkp", "dB", "sigma_noise", "sigma_0", "eps_ec", "eps_m", "r",
               "n_prime_a", "n_prime_b", "delta_m_sq", "n_lo", "sigma_e", "n_lo_at_730",
               "n_lo_at_8250", "residual", "analytic_infidelity", "sigma_noise_max", "flags"};
  t.rows.resize(inputs.size());
  parallel_rows(inputs.size(), [&](std::size_t i) {
    const auto& in = inputs[i];
    validate_budget_input(in);
    double sg2 = gkp_sigma_sq_from_delta(gkp_delta_from_nbar(in.n_bar));
    double infid = 1.0 - analytic_entanglement_fidelity(sg2, in.sigma_noise * in.sigma_noise);
    std::vector<std::string> flags;
    std::vector<Cell> row{in.n_bar, std::sqrt(sg2), squeezing_db(sg2), in.sigma_noise, in.sigma_0, in.eps_ec, in.eps_m};
    try {
      auto p = plan(in, opts);
      row.insert(row.end(), {p.r, p.n_prime_a, p.n_prime_b, p.delta_m_sq, p.n_lo, p.sigma_e,
                             p.n_lo_at(kPhotodiodeNoiseLow), p.n_lo_at(kPhotodiodeNoiseHigh), p.residual});
    } catch (const Error& e) {
      if (e.code() != Errc::NoBudget) throw;
      flags.emplace_back("no-budget");
      for (int k = 0; k < 9; ++k) row.emplace_back(std::nan(""));
    }
    row.emplace_back(infid);
    double smax = std::nan("");
    try {
      smax = std::sqrt(tolerable_noise_sq(sg2, in.eps_ec));
    } catch (const Error& e) {
      if (e.code() != Errc::NoBudget) throw;
    }
    row.emplace_back(smax);
    if (infid > in.eps_ec) flags.emplace_back("ec-budget-infeasible");
    row.emplace_back(flags.empty() ? std::string("ok") : join(flags, ";"));
    t.rows[i] = std::move(row);
  });
  return t;
}

Table cmd_gkp_fidelity(const json& cfg, const RunOptions&) {
  if (!cfg.is_object()) config_error("/", "config must be an object");
  std::string code_type = cfg.value("code_type", "square");
  if (code_type == "triv")
    throw Error(Errc::ConfigError, "/code_type: the trivial-encoding curve needs an optimized recovery, which is out of scope");
  if (code_type != "square") config_error("/code_type", "expected \"square\"");
  std::string mode = cfg.value("mode", "analytic");
  if (mode != "analytic" && mode != "numeric-transpose")
    config_error("/mode", "expected \"analytic\" or \"numeric-transpose\"");

  std::vector<double> s2;
  if (cfg.contains("sigma_noise_sq")) {
    s2 = expand_axis(cfg["sigma_noise_sq"], "/sigma_noise_sq");
  } else if (cfg.contains("sigma_noise")) {
    for (double s : expand_axis(cfg["sigma_noise"], "/sigma_noise")) s2.push_back(s * s);
  } else {
    config_error("/", "needs 'sigma_noise' or 'sigma_noise_sq'");
  }
  for (double v : s2)
    if (!(v >= 0)) config_error("/sigma_noise_sq", "noise variance must be >= 0");

  if (!cfg.contains("codes") || !cfg["codes"].is_array()) config_error("/codes", "expected a list of codes");
  std::vector<double> deltas;
  for (std::size_t i = 0; i < cfg["codes"].size(); ++i) {
    const json& c = cfg["codes"][i];
    std::string w = "/codes/" + std::to_string(i);
    if (c.contains("n_bar"))
      deltas.push_back(gkp_delta_from_nbar(as_number(c["n_bar"], w + "/n_bar")));
    else if (c.contains("delta"))
      deltas.push_back(as_number(c["delta"], w + "/delta"));
    else
      config_error(w, "code needs 'n_bar' or 'delta'");
  }
  if (deltas.empty()) throw Error(Errc::EmptyGrid, "/codes: no codes");

  CutoffRule rule;
  rule.max_cutoff = cfg.value("max_cutoff", rule.max_cutoff);
  rule.tol = cfg.value("cutoff_tol", rule.tol);
  KrausGrid grid;
  grid.nodes = cfg.value("kraus_nodes", grid.nodes);

  Table t;
  t.provenance = base_provenance("gkp fidelity", cfg);
  if (mode == "analytic")
    t.provenance.push_back("analytic: infidelity = 1 - p_succ(sqrt(3 sigma_gkp^2 + sigma_noise^2))^2");
  else
    t.provenance.push_back("numeric-transpose: transpose-channel recovery; qualitative and not comparable to optimized-recovery curves");
  t.columns = {"n_bar", "dB", "sigma_noise_sq", "infidelity", "mode"};
  for (double d : deltas) {
    double sg2 = gkp_sigma_sq_from_delta(d);
    double nb = gkp_nbar_from_delta(d);
    std::vector<double> infid(s2.size());
    if (mode == "analytic") {
      parallel_rows(s2.size(), [&](std::size_t i) { infid[i] = 1.0 - analytic_entanglement_fidelity(sg2, s2[i]); });
    } else {
      GkpCode code = build_gkp_code(d, rule);
      t.provenance.push_back("n_bar " + fmt17(nb) + " cutoff " + std::to_string(code.cutoff));
      for (std::size_t i = 0; i < s2.size(); ++i) {
        Channel ch = displacement_channel_kraus(s2[i], code.cutoff, grid);
        infid[i] = 1.0 - entanglement_fidelity(code, ch, transpose_recovery(code, ch));
      }
    }
    for (std::size_t i = 0; i < s2.size(); ++i)
      t.rows.push_back({nb, squeezing_db(sg2), s2[i], infid[i], mode});
  }
  return t;
}

Table cmd_witness(const json& cfg, const RunOptions& opts) {
  if (!cfg.is_object()) config_error("/", "config must be an object");
  WitnessGrid g = default_witness_grid();
  if (cfg.contains("delta")) g.deltas = expand_axis(cfg["delta"], "/delta");
  if (cfg.contains("s")) g.ss = expand_axis(cfg["s"], "/s");
  if (cfg.contains("gamma")) g.gammas = expand_axis(cfg["gamma"], "/gamma");
  if (cfg.contains("ensembles")) {
    if (!cfg["ensembles"].is_array() || cfg["ensembles"].empty())
      config_error("/ensembles", "expected a non-empty list");
    g.ensembles.clear();
    for (std::size_t i = 0; i < cfg["ensembles"].size(); ++i) {
      json wrap{{"ensemble", cfg["ensembles"][i]}};
      g.ensembles.push_back(*parse_ensemble(wrap, "/ensembles/" + std::to_string(i)));
    }
  }
  int random_points = cfg.value("random_points", 0);
  if (random_points < 0) config_error("/random_points", "must be >= 0");

  std::vector<WitnessPoint> pts;
  std::vector<std::string> origin;
  {
    WitnessGrid pos = g;
    pos.deltas.clear();
    for (double d : g.deltas)
      if (d > 0) pos.deltas.push_back(d);
    if (!pos.deltas.empty()) pts = scan_witness(pos);
    origin.assign(pts.size(), "grid");
    // delta == 0 rows are reported but not evaluated.
    for (double d : g.deltas) {
      if (d != 0.0) continue;
      for (std::size_t e = 0; e < g.ensembles.size(); ++e)
        for (double s : g.ss)
          for (double gm : g.gammas) {
            WitnessPoint p;
            p.ensemble_index = e;
            p.s = s;
            p.gamma = gm;
            p.skipped = true;
            pts.push_back(p);
            origin.push_back("grid");
          }
    }
  }
  if (random_points > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ld(std::log10(1e-4), std::log10(0.3)), us(-5.0, 5.0), ug(-3.0, 3.0);
    for (int i = 0; i < random_points; ++i) {
      WitnessGrid one;
      one.deltas = {std::pow(10.0, ld(rng))};
      one.ss = {us(rng)};
      one.gammas = {ug(rng)};
      one.ensembles = g.ensembles;
      auto r = scan_witness(one, Exec::Serial);
      for (auto& p : r) {
        pts.push_back(p);
        origin.push_back("random");
      }
    }
  }

  Table t;
  t.provenance = base_provenance("witness", cfg);
  t.provenance.push_back("seed " + std::to_string(opts.seed));
  t.columns = {"ensemble", "delta", "s", "gamma", "omega_exp", "exact_distance_sq", "bound_distance_sq",
               "refined_distance_sq", "in_refined_regime", "dominated", "refined_dominated", "source", "notes"};
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    std::string note;
    if (p.skipped) {
      note = "skipped: ZeroDelta";
    } else if (!p.dominated || !p.refined_dominated) {
      note = "VIOLATION";
      ++violations;
    }
    t.rows.push_back({ensemble_label(g.ensembles[p.ensemble_index]), p.delta, p.s, p.gamma, p.omega_exp,
                      p.exact, p.bound, p.refined, double(p.in_refined_regime), double(p.dominated),
                      double(p.refined_dominated), origin[i], note});
  }
  t.provenance.push_back("violations " + std::to_string(violations));
  t.violation = violations > 0;
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"Finite-LO homodyne bound evaluator and GKP budget tools"};
  app.require_subcommand(1);
  std::string config_path, out_path, format = "csv";
  RunOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv or pretty")->check(CLI::IsMember({"csv", "pretty"}));
    sub->add_option("--threads", opts.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", opts.seed, "seed for randomized scans");
  };
  auto* bound = app.add_subcommand("bound", "evaluate closed-form bounds over a parameter grid");
  add_common(bound);
  auto* gkp = app.add_subcommand("gkp", "GKP budget planning and fidelity curves");
  gkp->require_subcommand(1);
  auto* plan_cmd = gkp->add_subcommand("plan", "LO photon budget table");
  add_common(plan_cmd);
  auto* fid_cmd = gkp->add_subcommand("fidelity", "entanglement infidelity curves");
  add_common(fid_cmd);
  auto* wit = app.add_subcommand("witness", "exact coherent-state distance vs bounds");
  add_common(wit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (opts.threads > 0) set_num_threads(opts.threads);
    std::ifstream in(config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    json cfg = parse_config(ss.str());
    Table t;
    if (*bound) t = cmd_bound(cfg, opts);
    else if (*plan_cmd) t = cmd_gkp_plan(cfg, opts);
    else if (*fid_cmd) t = cmd_gkp_fidelity(cfg, opts);
    else t = cmd_witness(cfg, opts);
    std::string text = render(t, format == "pretty" ? Format::Pretty : Format::Csv);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw Error(Errc::ConfigError, "cannot write " + out_path);
      out << text;
    }
    if (t.violation) {
      std::cerr << "witness: domination violated, see rows marked VIOLATION\n";
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numeric(e.code()) ? 4 : 2;
  } catch (const json::exception& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: NumericFailure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace homodyne::cli
