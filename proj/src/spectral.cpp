#include "cavitybec/spectral.hpp"

#include "cavitybec/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cavitybec {

namespace {

using special::pi;

bool tied(double x, double y) { return std::abs(x - y) <= eta_tie_tolerance * std::max(x, y); }

// Terms below this relative size are dropped from every theta series.
constexpr double series_floor = 1e-18;

double direct_half_sum(int n0, double t) {
  double sum = 0.0;
  for (long n = n0;; ++n) {
    const double term = std::exp(-static_cast<double>(n * n) * t);
    sum += term;
    if (term <= series_floor * sum || term == 0.0) break;
  }
  return sum;
}

// Per-axis exponent pi^2 eta^2 tau.
std::array<double, 3> axis_exponents(double tau, const CavityGeometry& g, double beta) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const EtaVector e = eta_vector(g, beta);
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) t[i] = pi * pi * e.eta[i] * e.eta[i] * tau;
  return t;
}

}  // namespace

CavityGeometry::CavityGeometry(double L1, double L2, double L3, Boundary bc) : L_{L1, L2, L3}, bc_(bc) {
  for (double l : L_) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("cavity lengths must be positive");
  }
}

std::array<std::int64_t, 2> CavityGeometry::anisotropy() const {
  std::array<std::int64_t, 2> a{};
  for (int i = 0; i < 2; ++i) {
    const double r = L_[2] / L_[i];
    const double n = std::round(r);
    if (n < 1.0 || std::abs(r - n) > 1e-9 * r) {
      throw std::domain_error("L3/L" + std::to_string(i + 1) + " = " + std::to_string(r) +
                              " is not a positive integer");
    }
    a[i] = static_cast<std::int64_t>(n);
  }
  return a;
}

bool CavityGeometry::has_integer_anisotropy() const {
  try {
    anisotropy();
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

std::array<int, 3> EtaVector::descending() const {
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [this](int a, int b) { return eta[a] > eta[b]; });
  return idx;
}

EtaVector eta_vector(const CavityGeometry& g, double beta) {
  EtaVector e;
  const double beta_bar = beta / (2.0 * pi);
  for (int i = 0; i < 3; ++i) e.eta[i] = beta_bar / g.L(i);
  return e;
}

double eigenvalue(const ModeIndex& n, const CavityGeometry& g) {
  const std::int64_t lowest = g.bc() == Boundary::Neumann ? 0 : 1;
  double w = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (n.n[i] < lowest) {
      throw std::invalid_argument("mode index below " + std::to_string(lowest) + " for " +
                                  std::string(to_string(g.bc())) + " boundary");
    }
    const double k = pi * static_cast<double>(n.n[i]) / g.L(i);
    w += k * k;
  }
  return w;
}

double theta3(double z, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("theta3 needs tau > 0");
  if (tau >= pi) {
    double sum = 0.0;
    for (long n = 1;; ++n) {
      const double w = std::exp(-static_cast<double>(n * n) * tau);
      sum += w * std::cos(2.0 * n * z);
      if (w <= series_floor) break;
    }
    return 1.0 + 2.0 * sum;
  }
  // Dual series: sqrt(pi/tau) sum_k exp(-(z - pi k)^2 / tau).
  const long k0 = std::lround(z / pi);
  double sum = std::exp(-std::pow(z - pi * k0, 2) / tau);
  for (long j = 1;; ++j) {
    const double up = std::exp(-std::pow(z - pi * (k0 + j), 2) / tau);
    const double down = std::exp(-std::pow(z - pi * (k0 - j), 2) / tau);
    sum += up + down;
    if (up + down <= series_floor * sum) break;
  }
  return std::sqrt(pi / tau) * sum;
}

double theta_half_sum(int n0, double t) {
  if (n0 < 0 || n0 > 2) throw std::invalid_argument("theta_half_sum supports n0 = 0, 1, 2");
  if (!(t > 0.0)) throw std::invalid_argument("theta_half_sum needs t > 0");
  if (t >= 0.3) return direct_half_sum(n0, t);
  const double th = theta3(0.0, t);
  switch (n0) {
    case 0: return 0.5 * (th + 1.0);
    case 1: return 0.5 * (th - 1.0);
    default: return 0.5 * (th - 1.0) - std::exp(-t);
  }
}

double heat_kernel_exact(double tau, const CavityGeometry& g, double beta) {
  const auto t = axis_exponents(tau, g, beta);
  const int n0 = g.bc() == Boundary::Neumann ? 0 : 1;
  return theta_half_sum(n0, t[0]) * theta_half_sum(n0, t[1]) * theta_half_sum(n0, t[2]);
}

HeatKernelCoeffs heat_kernel_coeffs(const CavityGeometry& g) {
  const double L1 = g.L(0), L2 = g.L(1), L3 = g.L(2);
  HeatKernelCoeffs c;
  c.bc_sign = boundary_sign(g.bc());
  c.A3 = L1 * L2 * L3 / (8.0 * std::pow(pi, 1.5));
  c.A2 = c.bc_sign * (L1 * L2 + L1 * L3 + L2 * L3) / (8.0 * pi);
  c.A1 = (L1 + L2 + L3) / (8.0 * std::sqrt(pi));
  c.A0 = c.bc_sign / 8.0;
  return c;
}

double heat_kernel_asymptotic(double tau, const HeatKernelCoeffs& c, double beta) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const double x = beta / (2.0 * pi) * std::sqrt(tau);
  return c.A0 + c.A1 / x + c.A2 / (x * x) + c.A3 / (x * x * x);
}

int classify_excitation(unsigned excited_mask, const CavityGeometry& g) {
  if (excited_mask == 0) return 0;
  // Largest eta means shortest edge.
  int star = -1;
  for (int i = 0; i < 3; ++i) {
    if ((excited_mask & (1u << i)) && (star < 0 || g.L(i) < g.L(star))) star = i;
  }
  const double eta_star = 1.0 / g.L(star);
  int below = 0, tied_excited = 0;
  for (int j = 0; j < 3; ++j) {
    const double eta_j = 1.0 / g.L(j);
    if (tied(eta_j, eta_star)) {
      if (excited_mask & (1u << j)) ++tied_excited;
    } else if (eta_j < eta_star) {
      ++below;
    }
  }
  return below + tied_excited;
}

int classify_mode(const ModeIndex& n, const CavityGeometry& g) {
  const std::int64_t ground = g.bc() == Boundary::Neumann ? 0 : 1;
  unsigned mask = 0;
  for (int i = 0; i < 3; ++i) {
    if (n.n[i] < ground) throw std::invalid_argument("mode index invalid for boundary condition");
    if (n.n[i] > ground) mask |= 1u << i;
  }
  return classify_excitation(mask, g);
}

PartitionedKernels partitioned_heat_kernels(double tau, const CavityGeometry& g, double beta) {
  const auto t = axis_exponents(tau, g, beta);
  const bool neumann = g.bc() == Boundary::Neumann;
  std::array<double, 3> ground{}, excited{};
  for (int i = 0; i < 3; ++i) {
    ground[i] = neumann ? 1.0 : std::exp(-t[i]);
    excited[i] = theta_half_sum(neumann ? 1 : 2, t[i]);
  }
  PartitionedKernels out;
  for (unsigned mask = 0; mask < 8; ++mask) {
    double term = 1.0;
    for (int i = 0; i < 3; ++i) term *= (mask & (1u << i)) ? excited[i] : ground[i];
    out.K[classify_excitation(mask, g)] += term;
  }
  return out;
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Isotropic: return "isotropic";
    case Scenario::OneD: return "1D";
    case Scenario::TwoD: return "2D";
    case Scenario::ThreeStep: return "3step";
  }
  return "?";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "isotropic") return Scenario::Isotropic;
  if (s == "1D" || s == "1d") return Scenario::OneD;
  if (s == "2D" || s == "2d") return Scenario::TwoD;
  if (s == "3step" || s == "3-step" || s == "three-step") return Scenario::ThreeStep;
  throw std::invalid_argument("unknown scenario '" + std::string(s) + "'");
}

double SmoothDos::rho3(double eps) const { return weyl * std::sqrt(eps) + surface; }

SmoothDos smooth_dos(const CavityGeometry& g, Scenario scenario) {
  const double L1 = g.L(0), L2 = g.L(1), L3 = g.L(2);
  const double a1 = L3 / L1, a2 = L3 / L2;
  SmoothDos d;
  d.weyl = pi / 4.0 / (a1 * a2);
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("geometry does not fit scenario ") + what);
  };
  switch (scenario) {
    case Scenario::Isotropic:
      d.surface = boundary_sign(g.bc()) * pi / 8.0 * (1.0 / (a1 * a2) + 1.0 / a1 + 1.0 / a2);
      return d;
    case Scenario::OneD:
      require(tied(L1, L2) && L2 < L3 && !tied(L2, L3), "1D (L1 = L2 < L3)");
      d.surface = -pi / 24.0 * (1.0 / (a1 * a1) + 2.0 / a1);
      d.rho2 = pi / (2.0 * a1);
      d.eps1_3d = a1 * a1;
      d.eps1_2d = a1 * a1;
      return d;
    case Scenario::TwoD:
      require(L1 < L2 && !tied(L1, L2) && tied(L2, L3), "2D (L1 < L2 = L3)");
      d.surface = pi / 24.0 * (2.0 / a1 + 1.0);
      d.rho2 = pi / 4.0;
      d.eps1_3d = a1 * a1;
      d.eps1_2d = 1.0;
      return d;
    case Scenario::ThreeStep:
      require(L1 < L2 && !tied(L1, L2) && L2 < L3 && !tied(L2, L3), "3step (L1 < L2 < L3)");
      d.surface = pi / 24.0 * (1.0 / (a1 * a2) + 1.0 / a1 + 1.0 / a2);
      d.rho2 = pi / (4.0 * a2);
      d.eps1_3d = a1 * a1;
      d.eps1_2d = a2 * a2;
      return d;
  }
  return d;
}

}  // namespace cavitybec
