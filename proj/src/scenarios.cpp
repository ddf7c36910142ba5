#include "cavitybec/scenarios.hpp"

#include "cavitybec/charge.hpp"
#include "cavitybec/critical.hpp"
#include "cavitybec/lattice_count.hpp"
#include "cavitybec/special.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cavitybec {

namespace {

using special::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool same_length(double a, double b) { return std::abs(a - b) <= eta_tie_tolerance * std::max(a, b); }

CavityGeometry geometry(const RunConfig& c) { return CavityGeometry(c.L[0], c.L[1], c.L[2], c.bc); }

ChargeOptions charge_options(const RunConfig& c) {
  ChargeOptions o;
  o.cutoff = c.cutoff;
  return o;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// Fields every output carries.
Table base_table(const RunConfig& c) {
  Table t;
  t.meta("program", "cavitybec");
  t.meta("subcommand", c.subcommand);
  t.meta("preset", c.preset.empty() ? "none" : c.preset);
  for (const auto& [k, v] : c.resolved) t.meta("config." + k, v);
  t.meta("engine", std::string(to_string(c.engine)));
  t.meta("bc", std::string(to_string(c.bc)));
  t.meta("charge_cutoff", c.cutoff);
  t.meta("mu_tolerance", 1e-14);
  t.meta("dominance", c.dominance);
  return t;
}

void geometry_meta(Table& t, const RunConfig& c) {
  t.meta("L1", c.L[0]);
  t.meta("L2", c.L[1]);
  t.meta("L3", c.L[2]);
  t.meta("m", c.m);
  t.meta("Q", c.Q);
}

bool wants_exact(const RunConfig& c) { return c.engine != EngineChoice::Asymptotic; }
bool wants_asymptotic(const RunConfig& c) { return c.engine != EngineChoice::Exact; }

// Class charges from the asymptotic formulas at mu = m, each class capped by
// what the higher classes leave over; the remainder is the ground state.
std::array<double, 4> saturated_fractions(double T, const RunConfig& c, const CavityGeometry& g,
                                          Scenario s) {
  std::array<double, 4> f{};
  double left = 1.0;
  auto take = [&](double q) {
    const double share = std::clamp(q / c.Q, 0.0, left);
    left -= share;
    return share;
  };
  if (s == Scenario::Isotropic) {
    f[3] = take(asymptotic_Q_excited(T, c.m, c.m, g));
  } else {
    f[3] = take(asymptotic_Q3(T, c.m, c.m, g, s));
    f[2] = take(asymptotic_Q2(T, c.m, c.m, g, s));
    f[1] = take(asymptotic_Q1(T, c.m, c.m, g, s));
  }
  f[0] = left;
  return f;
}

}  // namespace

Scenario infer_scenario(const CavityGeometry& g) {
  const double a = g.L(0), b = g.L(1), c = g.L(2);
  const bool ab = same_length(a, b), bc = same_length(b, c);
  if (ab && bc) return Scenario::Isotropic;
  if (ab && b < c) return Scenario::OneD;
  if (bc && a < b) return Scenario::TwoD;
  if (a < b && b < c) return Scenario::ThreeStep;
  throw ValidationError("edge lengths must satisfy L1 <= L2 <= L3");
}

std::vector<double> sweep_grid(double lo, double hi, int points, SweepScale scale) {
  if (!(lo > 0.0 && lo < hi)) throw ValidationError("sweep needs 0 < lo < hi");
  if (points < 2) throw ValidationError("sweep needs at least 2 points");
  if (scale == SweepScale::Log) return geometric_grid(lo, hi, static_cast<std::size_t>(points));
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

std::optional<double> reference_tc(const std::string& preset) {
  if (preset == "fig4a") return 1.97;
  if (preset == "fig4b") return 2.03;
  if (preset == "fig4c") return 0.98;
  if (preset == "fig4d" || preset == "fig4e") return 0.79;
  return std::nullopt;
}

Table run_fig1(const RunConfig& c) {
  const AnisotropyVector a(c.a);
  if (a.dim() > 2) throw ValidationError("fig1 takes a two-component anisotropy (a1,a2)");
  const AnisotropyVector full = cavity_anisotropy(a);
  const std::vector<double> grid = integer_grid(c.epsilon_max);
  const std::vector<CountResult> res = residual_series(full, grid, c.bc, WorkBudget{c.budget});

  std::vector<ResidualSample> samples;
  samples.reserve(res.size());
  for (const auto& r : res) samples.emplace_back(r.epsilon, r.residual);
  const std::vector<double> sup = running_supremum(samples);

  Table t = base_table(c);
  t.meta("a", join(full.values()));
  t.meta("epsilon_max", static_cast<double>(c.epsilon_max));
  SupFitOptions fo;
  fo.min_epsilon = std::max(10.0, static_cast<double>(a.max() * a.max()));
  t.meta("fit_min_epsilon", fo.min_epsilon);
  std::optional<SupFit> fit;
  try {
    fit = fit_sup_exponent(samples, fo);
    t.meta("gamma", fit->exponent_gamma);
    t.meta("prefactor", fit->prefactor);
    t.meta("fit_points", static_cast<double>(fit->points_used));
  } catch (const std::exception& e) {
    t.meta("gamma", nan);
    t.meta("fit_status", e.what());
  }

  t.columns = {"epsilon", "count", "smooth", "delta", "running_sup", "power_law"};
  for (std::size_t i = 0; i < res.size(); ++i) {
    const double law = fit ? fit->prefactor * std::pow(res[i].epsilon, fit->exponent_gamma) : nan;
    t.rows.push_back({res[i].epsilon, static_cast<double>(res[i].exact_count), res[i].smooth_part,
                      res[i].residual, sup[i], law});
  }
  return t;
}

Table run_fig2(const RunConfig& c) {
  const CavityGeometry g = geometry(c);
  const double tc0 = bulk_tc(c.Q, g, c.m);
  const FiniteTc ftc = finite_tc(c.Q, g, c.m);
  const std::vector<double> ts = sweep_grid(c.t_min.value_or(0.02), c.t_max.value_or(1.2), c.points, c.scale);

  Table t = base_table(c);
  geometry_meta(t, c);
  t.meta("Tc0", tc0);
  t.meta("Tc", ftc.root.T);
  t.meta("Tc_residual", ftc.root.residual);
  t.meta("temperature_unit", "Tc0");

  const ChargeOptions opts = charge_options(c);
  struct Row {
    double frac = nan, mu = nan, residual = nan;
  };
  std::vector<Row> exact(ts.size());
  if (wants_exact(c)) {
    exact = parallel_map(ts.size(), [&](std::size_t i) {
      const PartitionedCharge p = partitioned_charge(ts[i] * tc0, c.Q, g, c.m, opts);
      return Row{p.Q[0] / c.Q, p.mu_solved, p.residual};
    });
  }

  t.columns = {"t", "T", "bulk_fraction", "corrected_fraction"};
  if (wants_exact(c)) {
    t.columns.insert(t.columns.end(), {"exact_fraction", "exact_mu", "mu_residual"});
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double T = ts[i] * tc0;
    std::vector<Cell> row{ts[i], T, std::max(0.0, 1.0 - ts[i] * ts[i]),
                          condensate_fraction(T, c.Q, g, c.m).value};
    if (wants_exact(c)) row.insert(row.end(), {exact[i].frac, exact[i].mu, exact[i].residual});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_fig3(const RunConfig& c) {
  const std::vector<double> axis = geometric_grid(1.0, c.ratio_max, static_cast<std::size_t>(c.grid));
  const std::size_t n = axis.size();
  const double L1 = c.L[0];
  RegimeOptions ro;
  ro.dominance = c.dominance;
  const std::vector<RegimeReport> reports = parallel_map(n * n, [&](std::size_t k) {
    const double L2 = axis[k / n] * L1;
    const double L3 = axis[k % n] * L2;
    const double Q = c.q_tilde * c.m * L2 / pi;
    return classify_regime(Q, CavityGeometry(L1, L2, L3, c.bc), c.m, ro);
  });

  Table t = base_table(c);
  t.meta("Q_tilde", c.q_tilde);
  t.meta("m", c.m);
  t.meta("L1", L1);
  t.meta("ratio_max", c.ratio_max);
  t.meta("grid", static_cast<double>(c.grid));
  t.meta("axes", "log");
  t.columns = {"L2_over_L1", "L3_over_L2", "label", "margin_A", "margin_B", "margin_C", "T3D", "eta_max"};
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const RegimeReport& r = reports[k];
    t.rows.push_back({axis[k / n], axis[k % n], std::string(to_string(r.label)), r.margin_A, r.margin_B,
                      r.margin_C, r.T3D, r.eta_max});
  }
  return t;
}

Table run_fig4(const RunConfig& c) {
  const CavityGeometry g = geometry(c);
  const Scenario s = infer_scenario(g);
  const CriticalSet cs = critical_set(c.Q, g, c.m, s);
  const double t3 = t3d(c.Q, g, c.m, s).T;
  const std::vector<double> ts = sweep_grid(c.t_min.value_or(0.02), c.t_max.value_or(1.5), c.points, c.scale);

  Table t = base_table(c);
  geometry_meta(t, c);
  t.meta("scenario", std::string(to_string(s)));
  t.meta("temperature_unit", "T3D");
  t.meta("sweep_scale", std::string(to_string(c.scale)));
  t.meta("Tc_bulk", cs.Tc_bulk);
  t.meta("Tc_finite", cs.Tc_finite);
  t.meta("T3D", t3);
  t.meta("T3D_residual", t3d(c.Q, g, c.m, s).residual);
  if (s == Scenario::TwoD || s == Scenario::ThreeStep) t.meta("T2D", cs.T2D);
  if (s != Scenario::Isotropic) t.meta("T1D", cs.T1D);
  if (const auto cap = reference_tc(c.preset)) {
    t.meta("reference_T3D", *cap);
    t.meta("reference_deviation", t3 / *cap - 1.0);
  }
  if (wants_asymptotic(c)) t.meta("asymptotic_model", "class charges at mu = m, capped in order 3, 2, 1");

  const ChargeOptions opts = charge_options(c);
  std::vector<PartitionedCharge> exact;
  if (wants_exact(c)) {
    exact = parallel_map(ts.size(), [&](std::size_t i) { return partitioned_charge(ts[i] * t3, c.Q, g, c.m, opts); });
  }

  t.columns = {"t", "T"};
  if (wants_exact(c)) t.columns.insert(t.columns.end(), {"mu", "Q0/Q", "Q1/Q", "Q2/Q", "Q3/Q", "mu_residual"});
  if (wants_asymptotic(c)) t.columns.insert(t.columns.end(), {"asym_Q0/Q", "asym_Q1/Q", "asym_Q2/Q", "asym_Q3/Q"});
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double T = ts[i] * t3;
    std::vector<Cell> row{ts[i], T};
    if (wants_exact(c)) {
      const PartitionedCharge& p = exact[i];
      row.insert(row.end(), {p.mu_solved, p.Q[0] / c.Q, p.Q[1] / c.Q, p.Q[2] / c.Q, p.Q[3] / c.Q, p.residual});
    }
    if (wants_asymptotic(c)) {
      const auto f = saturated_fractions(T, c, g, s);
      row.insert(row.end(), {f[0], f[1], f[2], f[3]});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_tc(const RunConfig& c) {
  const CavityGeometry g = geometry(c);
  const Scenario s = infer_scenario(g);
  Table t = base_table(c);
  geometry_meta(t, c);
  t.meta("scenario", std::string(to_string(s)));
  t.columns = {"quantity", "value", "residual"};

  const FiniteTc f = finite_tc(c.Q, g, c.m);
  t.rows.push_back({std::string("Tc_bulk"), f.bulk, nan});
  t.rows.push_back({std::string("Tc_finite"), f.root.T, f.root.residual});
  t.rows.push_back({std::string("Tc_finite/Tc_bulk"), f.root.T / f.bulk, nan});
  t.rows.push_back({std::string("perturbative_ratio"), f.perturbative_ratio, nan});
  if (s != Scenario::Isotropic) {
    const RootResult r3 = t3d(c.Q, g, c.m, s);
    t.rows.push_back({std::string("T3D"), r3.T, r3.residual});
    if (s == Scenario::TwoD || s == Scenario::ThreeStep) {
      const T2D r2 = t2d(c.Q, g, c.m, s);
      t.rows.push_back({std::string("T2D"), r2.root.T, r2.root.residual});
      t.rows.push_back({std::string("T2D_closed_form"), r2.closed_form, nan});
    }
    t.rows.push_back({std::string("T1D"), t1d(c.Q, g, c.m), nan});
  }
  if (const auto cap = reference_tc(c.preset)) {
    const double ours = s == Scenario::Isotropic ? f.root.T : t3d(c.Q, g, c.m, s).T;
    t.rows.push_back({std::string("reference_value"), *cap, nan});
    t.rows.push_back({std::string("reference_deviation"), ours / *cap - 1.0, nan});
  }
  return t;
}

Table run_count(const RunConfig& c) {
  const AnisotropyVector a(c.a);
  Table t = base_table(c);
  t.meta("a", join(a.values()));
  t.meta("epsilon", c.epsilon);
  t.columns = {"quantity", "value"};
  t.rows.push_back({std::string("bruteforce"),
                    static_cast<double>(count_bruteforce(a, c.epsilon, WorkBudget{c.budget}))});

  FourierOptions fo;
  const std::int64_t lmax = fourier_lmax_for(a, c.epsilon, fo);
  const double terms = std::pow(2.0 * static_cast<double>(lmax) + 1.0, static_cast<double>(a.dim()));
  t.meta("fourier_tolerance", fo.tolerance);
  if (terms > static_cast<double>(c.budget) / 10.0) {
    t.meta("fourier_status", "skipped: " + format_number(terms) + " series terms exceed budget/10");
    return t;
  }
  const FourierCount fc = count_fourier(a, c.epsilon, lmax, fo);
  t.rows.push_back({std::string("fourier"), fc.value});
  t.rows.push_back({std::string("fourier_rounded"), std::round(fc.value)});
  t.rows.push_back({std::string("volume_term"), fc.volume_term});
  t.rows.push_back({std::string("l_max"), static_cast<double>(lmax)});
  t.rows.push_back({std::string("sigma"), fc.sigma});
  t.rows.push_back({std::string("smoothing_bound"), fc.smoothing_bound});
  t.rows.push_back({std::string("tail_estimate"), fc.tail_estimate});
  return t;
}

Table run_classify(const RunConfig& c) {
  const CavityGeometry g = geometry(c);
  RegimeOptions ro;
  ro.dominance = c.dominance;
  const RegimeReport r = classify_regime(c.Q, g, c.m, ro);
  Table t = base_table(c);
  geometry_meta(t, c);
  t.meta("label", std::string(to_string(r.label)));
  t.columns = {"quantity", "value"};
  auto add = [&](const char* k, double v) { t.rows.push_back({std::string(k), v}); };
  add("L3/L2", r.ratio_32);
  add("L3/L1", r.ratio_31);
  add("Q_tilde", r.Q_tilde);
  add("margin_A", r.margin_A);
  add("margin_B", r.margin_B);
  add("margin_C", r.margin_C);
  add("condition_A", r.condition_A);
  add("condition_B", r.condition_B);
  add("condition_C", r.condition_C);
  add("T3D", r.T3D);
  add("T_eta", r.T_eta);
  add("eta_max", r.eta_max);
  t.rows.push_back({std::string("label"), std::string(to_string(r.label))});
  return t;
}

Table run(const RunConfig& c) {
  if (c.subcommand == "fig1") return run_fig1(c);
  if (c.subcommand == "fig2") return run_fig2(c);
  if (c.subcommand == "fig3") return run_fig3(c);
  if (c.subcommand == "fig4") return run_fig4(c);
  if (c.subcommand == "tc") return run_tc(c);
  if (c.subcommand == "count") return run_count(c);
  if (c.subcommand == "classify") return run_classify(c);
  throw ValidationError("unknown subcommand '" + c.subcommand + "'");
}

}  // namespace cavitybec
