#include "cavitybec/charge.hpp"

#include "cavitybec/effective_action.hpp"
#include "cavitybec/lattice_count.hpp"
#include "cavitybec/special.hpp"
#include "lattice_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace cavitybec {

namespace {

using special::pi;

struct Level {
  double omega;  // sorting key; equal levels compare equal
  int cls;
};

// Upper bound on the number of cavity modes with wave number <= k.
double box_count(const CavityGeometry& g, double k) {
  double n = 1.0;
  for (int i = 0; i < 3; ++i) n *= k * g.L(i) / pi + 1.0;
  return n;
}

double wave_number_at(double E0, double m, double T, double x) {
  const double E = E0 + x * T;
  return std::sqrt(std::max(0.0, E * E - m * m));
}

// Every mode with beta (E - E0) below x_max (or at it when inclusive),
// merged into distinct (level, class) groups.
void enumerate_modes(const CavityGeometry& g, double m, double beta, double E0, double x_max, bool inclusive,
                     std::uint64_t budget, std::array<std::vector<double>, 4>& x_out,
                     std::array<std::vector<double>, 4>& mult_out, std::uint64_t& count) {
  const bool neumann = g.bc() == Boundary::Neumann;
  const std::int64_t start = neumann ? 0 : 1;
  const double T = 1.0 / beta;
  const double E_max = E0 + x_max * T;
  const double w_max = E_max * E_max - m * m;

  const bool integer_levels = g.has_integer_anisotropy();
  std::array<double, 3> k2{};
  for (int i = 0; i < 3; ++i) k2[i] = std::pow(pi / g.L(i), 2);
  std::array<std::int64_t, 3> a2{1, 1, 1};
  if (integer_levels) {
    const auto a = g.anisotropy();
    a2 = {a[0] * a[0], a[1] * a[1], 1};
  }
  const double unit = k2[2];
  auto omega = [&](std::int64_t n1, std::int64_t n2, std::int64_t n3) {
    if (integer_levels) return unit * static_cast<double>(a2[0] * n1 * n1 + a2[1] * n2 * n2 + n3 * n3);
    return k2[0] * n1 * n1 + k2[1] * n2 * n2 + k2[2] * n3 * n3;
  };
  const double w0 = omega(start, start, start);
  // Stable E - E0 for both boundary conditions.
  auto excess = [&](double w) {
    const double E = std::sqrt(m * m + w);
    return (w - w0) / (E + E0);
  };
  auto keep = [&](double w) {
    const double x = beta * excess(w);
    return inclusive ? x <= x_max : x < x_max;
  };

  std::array<int, 8> cls{};
  for (unsigned mask = 0; mask < 8; ++mask) cls[mask] = classify_excitation(mask, g);

  std::vector<Level> levels;
  for (std::int64_t n1 = start; omega(n1, start, start) <= w_max && keep(omega(n1, start, start)); ++n1) {
    for (std::int64_t n2 = start; keep(omega(n1, n2, start)); ++n2) {
      for (std::int64_t n3 = start;; ++n3) {
        const double w = omega(n1, n2, n3);
        if (!keep(w)) break;
        if (levels.size() >= budget) {
          throw BudgetExceeded("charge sum needs more than " + std::to_string(budget) + " modes");
        }
        const unsigned mask = (n1 > start ? 1u : 0u) | (n2 > start ? 2u : 0u) | (n3 > start ? 4u : 0u);
        levels.push_back({w, cls[mask]});
      }
    }
  }
  count = levels.size();
  std::sort(levels.begin(), levels.end(),
            [](const Level& a, const Level& b) { return a.cls != b.cls ? a.cls < b.cls : a.omega < b.omega; });
  for (std::size_t i = 0; i < levels.size();) {
    std::size_t j = i;
    while (j < levels.size() && levels[j].cls == levels[i].cls && levels[j].omega == levels[i].omega) ++j;
    x_out[levels[i].cls].push_back(beta * excess(levels[i].omega));
    mult_out[levels[i].cls].push_back(static_cast<double>(j - i));
    i = j;
  }
}

}  // namespace

std::string_view to_string(ChargeMethod m) {
  switch (m) {
    case ChargeMethod::Auto: return "auto";
    case ChargeMethod::Direct: return "direct";
    case ChargeMethod::Resummed: return "resummed";
  }
  return "?";
}

double lowest_mode_energy(const CavityGeometry& g, double m) {
  if (g.bc() == Boundary::Neumann) return m;
  double w = 0.0;
  for (int i = 0; i < 3; ++i) w += std::pow(pi / g.L(i), 2);
  return std::sqrt(m * m + w);
}

ChargeEngine::ChargeEngine(const CavityGeometry& g, double m, double T, const ChargeOptions& options)
    : m_(m), T_(T), beta_(1.0 / T), E0_(lowest_mode_energy(g, m)), options_(options) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("temperature must be > 0");
  if (!(m >= 0.0)) throw std::invalid_argument("mass must be >= 0");
  if (!(E0_ > 0.0)) throw std::invalid_argument("Neumann cavity needs m > 0 (otherwise E0 = 0)");
  if (!(options.cutoff >= 30.0)) throw std::invalid_argument("cutoff must be >= 30");
  if (options.bose_terms < 1) throw std::invalid_argument("bose_terms must be >= 1");
  if (!(options.low_mode_window > 0.0)) throw std::invalid_argument("low_mode_window must be > 0");

  const bool neumann = g.bc() == Boundary::Neumann;
  const double estimate = box_count(g, wave_number_at(E0_, m, T, options.cutoff));
  method_ = options.method;
  if (method_ == ChargeMethod::Auto) {
    method_ = (!neumann || estimate <= static_cast<double>(options.direct_threshold)) ? ChargeMethod::Direct
                                                                                     : ChargeMethod::Resummed;
  }
  if (method_ == ChargeMethod::Resummed && !neumann) {
    throw std::invalid_argument("resummed charge sums are implemented for Neumann walls only");
  }

  if (method_ == ChargeMethod::Direct) {
    if (estimate > 50.0 * static_cast<double>(options.mode_budget)) {
      throw BudgetExceeded("charge sum needs about " + std::to_string(estimate) + " modes, budget is " +
                           std::to_string(options.mode_budget));
    }
    enumerate_modes(g, m, beta_, E0_, options.cutoff, true, options.mode_budget, x_, mult_, modes_);
    // Modes above the cutoff, binned in unit steps of beta (E - E0).
    double tail = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double x = options.cutoff + i;
      const double t = box_count(g, wave_number_at(E0_, m, T, x + 1.0)) * std::exp(-x);
      tail += t;
      if (t < 1e-30 * tail) break;
    }
    tail_ = tail / (1.0 - std::exp(-options.cutoff));
    return;
  }

  const double X = options.low_mode_window;
  enumerate_modes(g, m, beta_, E0_, X, false, options.mode_budget, x_, mult_, modes_);
  const int J = options.bose_terms;
  const std::array<double, 3> L = g.lengths();
  for (int c = 0; c < 4; ++c) high_[c].assign(J, 0.0);
  for (int j = 1; j <= J; ++j) {
    const double a = j * beta_;
    std::array<double, 4> full{1.0, 0.0, 0.0, 0.0};
    for (unsigned mask = 1; mask < 8; ++mask) {
      full[classify_excitation(mask, g)] += detail::excited_class_sum(L, m, a, mask);
    }
    for (int c = 0; c < 4; ++c) {
      double low = 0.0;
      for (std::size_t i = 0; i < x_[c].size(); ++i) low += mult_[c][i] * std::exp(-j * x_[c][i]);
      high_[c][j - 1] = std::max(0.0, full[c] - low);
    }
  }
  double high_total = 0.0;
  for (int c = 0; c < 4; ++c) high_total += high_[c][0];
  tail_ = std::exp(-J * X) * high_total / (1.0 - std::exp(-X));
}

ChargeSum ChargeEngine::evaluate(double d) const {
  ChargeSum out;
  out.method = method_;
  out.modes = modes_;
  out.tail_bound = tail_;
  const double anti = 2.0 * beta_ * E0_ - d;
  for (int c = 0; c < 4; ++c) {
    long double s = 0.0L;
    const auto& x = x_[c];
    const auto& w = mult_[c];
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += w[i] * (1.0 / std::expm1(x[i] + d) - 1.0 / std::expm1(x[i] + anti));
    }
    if (method_ == ChargeMethod::Resummed) {
      const double half = beta_ * m_ - d;
      for (std::size_t j = 1; j <= high_[c].size(); ++j) {
        const double weight = std::exp(-static_cast<double>(j) * d) * -std::expm1(-2.0 * j * half);
        s += weight * high_[c][j - 1];
      }
    }
    out.by_class[c] = static_cast<double>(s);
    out.value += out.by_class[c];
  }
  return out;
}

ChargeSum ChargeEngine::at_gap(double gap) const {
  if (!(gap > 0.0) || !(gap < 2.0 * E0_)) {
    throw std::domain_error("chemical potential must satisfy |mu| < E0");
  }
  if (gap <= E0_) return evaluate(beta_ * gap);
  // Negative mu: particles and antiparticles trade places.
  ChargeSum s = evaluate(beta_ * (2.0 * E0_ - gap));
  s.value = -s.value;
  for (double& q : s.by_class) q = -q;
  return s;
}

ChargeSum ChargeEngine::at_mu(double mu) const {
  if (!(std::abs(mu) < E0_)) throw std::domain_error("chemical potential must satisfy |mu| < E0");
  return at_gap(E0_ - mu);
}

ChargeSum exact_charge(const ThermoState& st, const CavityGeometry& g, const ChargeOptions& options) {
  return ChargeEngine(g, st.m, st.T, options).at_mu(st.mu);
}

MuSolution solve_mu(const ChargeEngine& engine, double Q_target) {
  if (!(Q_target > 0.0) || !std::isfinite(Q_target)) throw std::invalid_argument("target charge must be > 0");
  const double E0 = engine.E0();
  // Charge decreases with the gap, from +infinity at 0 to 0 at E0.
  double hi = E0;
  double lo = E0 / 2.0;
  ChargeSum at_lo = engine.at_gap(lo);
  while (at_lo.value <= Q_target) {
    hi = lo;
    lo /= 16.0;
    if (lo < 1e-300 * E0) throw std::runtime_error("could not bracket the chemical potential");
    at_lo = engine.at_gap(lo);
  }
  MuSolution best;
  best.gap = lo;
  best.sum = at_lo;
  best.residual = std::abs(at_lo.value - Q_target) / Q_target;
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const ChargeSum s = engine.at_gap(mid);
    const double r = std::abs(s.value - Q_target) / Q_target;
    if (r < best.residual) {
      best.gap = mid;
      best.sum = s;
      best.residual = r;
    }
    if (r <= 1e-14) break;
    (s.value > Q_target ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  best.iterations = it;
  best.mu = E0 - best.gap;
  best.charge = best.sum.value;
  return best;
}

MuSolution solve_mu(double T, double Q_target, const CavityGeometry& g, double m, const ChargeOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be > 0");
  return solve_mu(ChargeEngine(g, m, T, options), Q_target);
}

PartitionedCharge partitioned_charge(double T, double Q_target, const CavityGeometry& g, double m,
                                     const ChargeOptions& options) {
  const ChargeEngine engine(g, m, T, options);
  const MuSolution sol = solve_mu(engine, Q_target);
  PartitionedCharge p;
  p.Q = sol.sum.by_class;
  p.Q_total = Q_target;
  p.mu_solved = sol.mu;
  p.gap = sol.gap;
  p.residual = sol.residual;
  p.engine = Engine::Exact;
  p.method = engine.method();
  return p;
}

namespace {

struct Leading {
  double b2;
  double b32;
};

Leading leading_coeffs(double mu, double m, const CavityGeometry& g) {
  FieldParams fp;
  fp.m = m;
  fp.mu = mu;
  const ChargeExpansion e = charge_coeffs(heat_kernel_coeffs(g), fp);
  return {e.b2, e.b32};
}

double log_ratio(double T, double mu, double m, const CavityGeometry& g, double eps1) {
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be > 0");
  const double L3 = g.L(2);
  const double mt2 = pi * pi * eps1 / (L3 * L3) + m * m - mu * mu;
  if (!(mt2 > 0.0)) throw std::domain_error("infrared cutoff mass squared must be > 0");
  return std::log(T * T / mt2);
}

}  // namespace

double asymptotic_Q_excited(double T, double mu, double m, const CavityGeometry& g) {
  const Leading c = leading_coeffs(mu, m, g);
  return c.b2 * T * T + c.b32 * T / 2.0 * log_ratio(T, mu, m, g, 1.0);
}

double asymptotic_Q3(double T, double mu, double m, const CavityGeometry& g, Scenario scenario) {
  if (scenario == Scenario::Isotropic) throw std::invalid_argument("Q3 needs an anisotropic scenario");
  const SmoothDos dos = smooth_dos(g, scenario);
  const Leading c = leading_coeffs(mu, m, g);
  const double sign = scenario == Scenario::OneD ? -1.0 : 1.0;
  return c.b2 * T * T + sign * c.b32 * T / 6.0 * log_ratio(T, mu, m, g, dos.eps1_3d);
}

double asymptotic_Q2(double T, double mu, double m, const CavityGeometry& g, Scenario scenario) {
  if (scenario == Scenario::Isotropic) throw std::invalid_argument("Q2 needs an anisotropic scenario");
  const SmoothDos dos = smooth_dos(g, scenario);
  const double prefactor = scenario == Scenario::OneD ? 2.0 / pi : 1.0 / (2.0 * pi);
  return prefactor * mu * g.L(1) * g.L(2) * T * log_ratio(T, mu, m, g, dos.eps1_2d);
}

double asymptotic_Q1(double T, double mu, double m, const CavityGeometry& g, Scenario scenario) {
  if (scenario == Scenario::Isotropic) throw std::invalid_argument("Q1 needs an anisotropic scenario");
  if (!(T > 0.0)) throw std::invalid_argument("temperature must be > 0");
  (void)m;
  const double factor = scenario == Scenario::TwoD ? 4.0 : 2.0;
  const double L3 = g.L(2);
  return factor * mu * L3 * L3 * T * std::log(2.0 * pi) / pi;
}

}  // namespace cavitybec
