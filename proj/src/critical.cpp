#include "cavitybec/critical.hpp"

#include "cavitybec/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace cavitybec {

namespace {

using special::pi;

// Value and derivative of lhs(T) - Q.
using Equation = std::function<std::pair<double, double>(double)>;

// Safeguarded Newton for the sign change of f above the seed's basin.
RootResult solve_root(const Equation& f, double seed, double Q, const char* what) {
  if (!(seed > 0.0) || !std::isfinite(seed)) throw NoRoot(std::string(what) + ": invalid seed");
  double lo = seed, hi = seed;
  int guard = 0;
  while (f(hi).first < 0.0) {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi)) throw NoRoot(std::string(what) + ": no upper bracket");
  }
  guard = 0;
  while (f(lo).first > 0.0) {
    lo /= 2.0;
    if (++guard > 200 || lo < 1e-12 * seed) throw NoRoot(std::string(what) + ": no positive root");
  }
  RootResult r;
  double T = std::clamp(seed, lo, hi);
  for (r.iterations = 0; r.iterations < 200; ++r.iterations) {
    const auto [v, d] = f(T);
    if (v == 0.0) break;
    (v < 0.0 ? lo : hi) = T;
    double next = T - v / d;
    if (!(d > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - T) <= 4.0 * std::numeric_limits<double>::epsilon() * T) {
      T = next;
      break;
    }
    T = next;
  }
  r.T = T;
  r.residual = std::abs(f(T).first) / Q;
  return r;
}

void validate(double Q, double m) {
  if (!(Q > 0.0) || !std::isfinite(Q)) throw std::invalid_argument("charge must be > 0");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("mass must be > 0");
}

// b2 and b32 at mu = m.
std::pair<double, double> critical_coeffs(const CavityGeometry& g, double m) {
  const HeatKernelCoeffs c = heat_kernel_coeffs(g);
  return {8.0 * m * std::pow(pi, 1.5) / 3.0 * c.A3, 4.0 * m * c.A2};
}

// b2 T^2 + k T log(T L1 / pi) - Q.
Equation step_equation(const CavityGeometry& g, double m, double Q, double k) {
  const double b2 = critical_coeffs(g, m).first;
  const double scale = g.L(0) / pi;
  return [=](double T) {
    const double lg = std::log(T * scale);
    return std::make_pair(b2 * T * T + k * T * lg - Q, 2.0 * b2 * T + k * (lg + 1.0));
  };
}

double step_coefficient(const CavityGeometry& g, double m, Scenario scenario) {
  const double b32 = critical_coeffs(g, m).second;
  const double L2 = g.L(1), L3 = g.L(2);
  switch (scenario) {
    case Scenario::OneD: return -b32 / 3.0 + 4.0 * m * L2 * L3 / pi;
    case Scenario::TwoD: return b32 / 3.0 + m * L3 * L3 / pi;
    case Scenario::ThreeStep: return b32 / 3.0 + m * L2 * L3 / pi;
    case Scenario::Isotropic: break;
  }
  throw std::invalid_argument("step equation needs an anisotropic scenario");
}

}  // namespace

double bulk_tc(double Q, const CavityGeometry& g, double m) {
  validate(Q, m);
  return std::sqrt(3.0 * Q / (m * g.volume()));
}

FiniteTc finite_tc(double Q, const CavityGeometry& g, double m) {
  validate(Q, m);
  const auto [b2, b32] = critical_coeffs(g, m);
  const double L3 = g.L(2);
  const Equation f = [=](double T) {
    const double lg = std::log(T * L3);
    return std::make_pair(b2 * T * T + b32 * T * lg - Q, 2.0 * b2 * T + b32 * (lg + 1.0));
  };
  FiniteTc out;
  out.bulk = bulk_tc(Q, g, m);
  out.root = solve_root(f, out.bulk, Q, "finite_tc");
  out.perturbative_ratio = 1.0 - b32 * std::log(Q * L3 * L3 / b2) / (4.0 * std::sqrt(b2 * Q));
  return out;
}

CondensateFraction condensate_fraction(double T, double Q, const CavityGeometry& g, double m) {
  validate(Q, m);
  if (!(T >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  const auto [b2, b32] = critical_coeffs(g, m);
  const double L3 = g.L(2);
  const double t = T / bulk_tc(Q, g, m);
  const double root = std::sqrt(b2 * Q);
  const double t_log_t = t > 0.0 ? t * std::log(t) : 0.0;
  CondensateFraction out;
  out.unclamped = 1.0 - t * t + b32 * std::log(Q * L3 * L3 / b2) / (2.0 * root) * (t * t - t) - b32 / root * t_log_t;
  out.value = std::clamp(out.unclamped, 0.0, 1.0);
  out.clamped = out.value != out.unclamped;
  return out;
}

double t3d_equation(double T, double Q, const CavityGeometry& g, double m, Scenario scenario) {
  if (scenario == Scenario::Isotropic) {
    const auto [b2, b32] = critical_coeffs(g, m);
    return b2 * T * T + b32 * T * std::log(T * g.L(2)) - Q;
  }
  return step_equation(g, m, Q, step_coefficient(g, m, scenario))(T).first;
}

RootResult t3d(double Q, const CavityGeometry& g, double m, Scenario scenario) {
  validate(Q, m);
  if (scenario == Scenario::Isotropic) return finite_tc(Q, g, m).root;
  smooth_dos(g, scenario);  // geometry check
  g.anisotropy();
  const Equation f = step_equation(g, m, Q, step_coefficient(g, m, scenario));
  return solve_root(f, bulk_tc(Q, g, m), Q, "t3d");
}

T2D t2d(double Q, const CavityGeometry& g, double m, Scenario scenario) {
  validate(Q, m);
  if (scenario != Scenario::TwoD && scenario != Scenario::ThreeStep) {
    throw std::invalid_argument("T_2D is defined for the 2D and 3step scenarios");
  }
  smooth_dos(g, scenario);  // geometry check
  const double L2 = g.L(1), L3 = g.L(2);
  T2D out;
  out.b_tilde = scenario == Scenario::TwoD ? m * L3 * L3 / pi : m * L2 * L3 / pi;
  out.length = scenario == Scenario::TwoD ? L3 : L2;
  const double bt = out.b_tilde, L = out.length;
  const double arg = Q * L / bt;
  out.closed_form = arg > 1.0 ? Q / (bt * std::log(arg)) : std::numeric_limits<double>::quiet_NaN();

  const Equation f = [=](double T) {
    const double lg = std::log(L * T);
    return std::make_pair(bt * T * lg - Q, bt * (lg + 1.0));
  };
  const double seed = std::isfinite(out.closed_form) ? out.closed_form : std::max(Q / bt, 2.0 / L);
  out.root = solve_root(f, seed, Q, "t2d");

  // Same saturation through the two-dimensional charge formula at mu = m.
  const double eps1 = smooth_dos(g, scenario).eps1_2d;
  const double mt = pi * std::sqrt(eps1) / L3;
  const double pref = m * L2 * L3 / (2.0 * pi);
  const Equation q2 = [=](double T) {
    const double lg = std::log(T / mt);
    return std::make_pair(2.0 * pref * T * lg - Q, 2.0 * pref * (lg + 1.0));
  };
  out.saturation_root = solve_root(q2, out.root.T, Q, "t2d saturation");
  return out;
}

double t1d(double Q, const CavityGeometry& g, double m) {
  validate(Q, m);
  const double L3 = g.L(2);
  return pi * Q / (2.0 * m * L3 * L3 * std::log(2.0 * pi));
}

std::string_view to_string(RegimeLabel l) {
  switch (l) {
    case RegimeLabel::OneStep: return "one-step";
    case RegimeLabel::TwoStep1D: return "two-step-1D";
    case RegimeLabel::TwoStep2D: return "two-step-2D";
    case RegimeLabel::ThreeStep: return "three-step";
    case RegimeLabel::Frozen: return "frozen";
  }
  return "?";
}

RegimeReport classify_regime(double Q, const CavityGeometry& g, double m, const RegimeOptions& options) {
  validate(Q, m);
  if (!(options.dominance > 0.0)) throw std::invalid_argument("dominance must be > 0");
  std::array<double, 3> L = g.lengths();
  std::sort(L.begin(), L.end());
  RegimeReport r;
  r.L1 = L[0];
  r.L2 = L[1];
  r.L3 = L[2];
  r.dominance = options.dominance;
  r.ratio_32 = r.L3 / r.L2;
  r.ratio_31 = r.L3 / r.L1;
  r.Q_tilde = pi * Q / (m * r.L2);
  const double lq = std::log(r.Q_tilde);
  const double l2pi = std::log(2.0 * pi);
  auto margin = [](double lhs, double rhs) {
    return rhs > 0.0 ? std::log(lhs / rhs) : std::numeric_limits<double>::infinity();
  };
  r.margin_A = margin(r.ratio_32, lq / (2.0 * l2pi));
  r.margin_B = margin(r.ratio_31, pi * r.Q_tilde / (3.0 * lq * lq));
  r.margin_C = margin(r.ratio_31 * r.ratio_32 * r.ratio_32, pi * r.Q_tilde / (12.0 * l2pi * l2pi));
  const double threshold = std::log(options.dominance);
  r.condition_A = r.margin_A >= threshold;
  r.condition_B = r.margin_B >= threshold;
  r.condition_C = r.margin_C >= threshold;

  const CavityGeometry sorted(r.L1, r.L2, r.L3, g.bc());
  try {
    const double k = step_coefficient(sorted, m, Scenario::ThreeStep);
    r.T3D = solve_root(step_equation(sorted, m, Q, k), bulk_tc(Q, sorted, m), Q, "t3d").T;
  } catch (const NoRoot&) {
    r.T3D = bulk_tc(Q, sorted, m);
  }
  // The log-corrected roots assume eta << 1 and stay near pi / L1 however
  // thin the cavity gets, so freeze-out is judged at the leading-order value.
  r.T_eta = bulk_tc(Q, sorted, m);
  r.eta_max = 1.0 / (2.0 * pi * r.T_eta * r.L1);

  if (r.eta_max > 1.0) {
    r.label = RegimeLabel::Frozen;
  } else if (r.condition_A && r.condition_B && r.condition_C) {
    r.label = RegimeLabel::ThreeStep;
  } else if (r.condition_C) {
    r.label = RegimeLabel::TwoStep1D;
  } else if (r.condition_B) {
    r.label = RegimeLabel::TwoStep2D;
  } else {
    r.label = RegimeLabel::OneStep;
  }
  return r;
}

CriticalSet critical_set(double Q, const CavityGeometry& g, double m, Scenario scenario) {
  CriticalSet s;
  s.scenario = scenario;
  s.Tc_bulk = bulk_tc(Q, g, m);
  s.Tc_finite = finite_tc(Q, g, m).root.T;
  s.T3D = t3d(Q, g, m, scenario).T;
  if (scenario == Scenario::TwoD || scenario == Scenario::ThreeStep) s.T2D = t2d(Q, g, m, scenario).root.T;
  if (scenario != Scenario::Isotropic) s.T1D = t1d(Q, g, m);
  return s;
}

}  // namespace cavitybec
