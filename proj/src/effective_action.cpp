#include "cavitybec/effective_action.hpp"

#include "cavitybec/special.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

namespace cavitybec {

namespace {

using special::pi;

constexpr double pole_window = 1e-6;

void reject_pole(double s, double pole, const char* what) {
  if (std::abs(s - pole) < pole_window) {
    throw PoleProximity(std::string(what) + ": s = " + std::to_string(s) + " is at a pole");
  }
}

bool near_nonpositive_integer(double x) {
  return x < pole_window && std::abs(x - std::round(x)) < pole_window;
}

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void validate(const FieldParams& fp) {
  if (!(fp.m >= 0.0)) throw std::invalid_argument("mass must be >= 0");
  if (!(fp.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(fp.l_scale > 0.0)) throw std::invalid_argument("l_scale must be > 0");
}

}  // namespace

Zeta1Value zeta1(double s, const HeatKernelCoeffs& c, const FieldParams& fp) {
  validate(fp);
  const double gap2 = fp.m * fp.m - fp.mu * fp.mu;
  if (gap2 < 0.0) throw std::domain_error("zeta1 needs m^2 >= mu^2");
  const double A[4] = {c.A0, c.A1, c.A2, c.A3};
  Zeta1Value out;
  const double inv_gamma_s = special::gamma_inv(s);
  for (int k = 0; k < 4; ++k) {
    if (A[k] == 0.0) continue;
    const double h = 0.5 * k;
    double ratio;
    if (k == 0) {
      ratio = 1.0;
    } else if (k == 2) {
      reject_pole(s, 1.0, "zeta1");
      ratio = 1.0 / (s - 1.0);
    } else {
      if (near_nonpositive_integer(s - h)) {
        throw PoleProximity("zeta1: s = " + std::to_string(s) + " is at a pole");
      }
      ratio = special::gamma(s - h) * inv_gamma_s;
    }
    if (ratio == 0.0) continue;
    const double expo = h - s;
    if (gap2 == 0.0) {
      if (expo < 0.0) {
        out.divergent = true;
        out.value += std::copysign(std::numeric_limits<double>::infinity(), ratio * A[k]);
      }
      continue;
    }
    out.value += ratio * A[k] * std::pow(gap2, expo);
  }
  return out;
}

double zeta2_expanded(double s, const HeatKernelCoeffs& c, const FieldParams& fp) {
  validate(fp);
  for (double p : {1.5, 1.0, 0.5, 0.0}) reject_pole(s, p, "zeta2_expanded");
  if (s >= 2.0 - pole_window && std::abs(s - std::round(s)) < pole_window) {
    throw PoleProximity("zeta2_expanded: s = " + std::to_string(s) + " is at a pole");
  }
  if (std::abs(s - 0.5 - std::round(s - 0.5)) < pole_window && (s > 2.0 || s < 0.0)) {
    throw PoleProximity("zeta2_expanded: s = " + std::to_string(s) + " is at a pole");
  }
  const double b = fp.beta / (2.0 * pi);
  const double m2 = fp.m * fp.m, mu2 = fp.mu * fp.mu;
  using special::gamma;
  using special::riemann_zeta;

  const double g1 = c.A3 / (b * b * b) * std::pow(pi, 2.0 * s - 3.5) * riemann_zeta(4.0 - 2.0 * s) * gamma(2.0 - s);
  const double g2 = c.A2 / (b * b) * std::pow(pi, 2.0 * s - 2.5) * riemann_zeta(3.0 - 2.0 * s) * gamma(1.5 - s);
  const double g3 = std::pow(pi, 2.0 * s - 1.5) / b * riemann_zeta(2.0 - 2.0 * s) * gamma(1.0 - s) *
                    (c.A1 - c.A3 * (m2 + (2.0 * s - 2.0) * mu2));
  const double g5 = b * riemann_zeta(2.0 * s + 1.0) * gamma(s + 0.5) *
                    (c.A3 * ((m2 - mu2) * (m2 - mu2) / 2.0 + (s + 1.5) * (s + 0.5) * 2.0 * mu2 * mu2 / 3.0) -
                     c.A1 * (m2 + 2.0 * s * mu2));
  // The fourth group carries Gamma(s), which cancels the overall 1/Gamma(s).
  const double g4 = riemann_zeta(2.0 * s) * (c.A0 - c.A2 * (m2 + (2.0 * s - 1.0) * mu2));

  const double pre = 2.0 * std::pow(b, 2.0 * s);
  return pre * (special::gamma_inv(s) * (g1 + g2 + g3 + g5) + g4);
}

ActionCoefficients action_coeffs(const HeatKernelCoeffs& c, const FieldParams& fp) {
  validate(fp);
  const double m2 = fp.m * fp.m, mu2 = fp.mu * fp.mu;
  const double gap2 = m2 - mu2;
  if (gap2 < 0.0) throw std::domain_error("action coefficients need m^2 >= mu^2");
  const double sqrt_pi = std::sqrt(pi);
  const double log2pi = std::log(2.0 * pi);
  ActionCoefficients a;
  a.c3 = -sqrt_pi / 45.0 * c.A3;
  a.c2 = -special::zeta3 * c.A2 / (pi * pi);
  a.c1 = -sqrt_pi / 3.0 * (c.A1 - c.A3 * (m2 - 2.0 * mu2));
  a.c12 = 2.0 * (c.A0 - c.A2 * gap2);
  // Gamma-function weights of the gap-dependent part at s = 0: Gamma(-3/2),
  // Gamma(-1/2), a log for the corner term. Checked against thermal integrals.
  a.c0 = (2.0 * log2pi + std::log(gap2)) * c.A0 + 2.0 * sqrt_pi * std::sqrt(gap2) * c.A1 -
         (x_log_x(gap2) + (2.0 * log2pi - 1.0) * m2 - (2.0 * log2pi - 3.0) * mu2) * c.A2 -
         4.0 * sqrt_pi / 3.0 * std::pow(gap2, 1.5) * c.A3;
  a.cm12 = -(c.A3 * (gap2 * gap2 + mu2 * mu2) - 2.0 * c.A1 * m2) / sqrt_pi;
  return a;
}

double effective_action(const ActionCoefficients& a, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const double b = beta / (2.0 * pi);
  const double lb = std::log(b);
  return a.c3 / (b * b * b) + a.c2 / (b * b) + a.c1 / b + a.c12 * lb + a.c0 + a.cm12 * b * lb;
}

double effective_action(const HeatKernelCoeffs& c, const FieldParams& fp) {
  return effective_action(action_coeffs(c, fp), fp.beta);
}

double ChargeExpansion::leading(double T) const { return b2 * T * T + b32 * T * std::log(T); }

double ChargeExpansion::value(double T) const {
  return leading(T) + b1 * T + b12 * std::log(T) + b0;
}

ChargeExpansion charge_coeffs(const HeatKernelCoeffs& c, const FieldParams& fp) {
  if (!(fp.m >= 0.0)) throw std::invalid_argument("mass must be >= 0");
  if (!(fp.l_scale > 0.0)) throw std::invalid_argument("l_scale must be > 0");
  const double mu = fp.mu, m2 = fp.m * fp.m, mu2 = mu * mu;
  const double gap2 = m2 - mu2;
  if (gap2 < -1e-14 * m2) throw std::domain_error("charge expansion needs |mu| <= m");
  const double sqrt_pi = std::sqrt(pi);
  ChargeExpansion e;
  e.b2 = 8.0 * mu * std::pow(pi, 1.5) / 3.0 * c.A3;
  e.b32 = 4.0 * mu * c.A2;
  e.C = c.A3 * (4.0 * mu2 - m2);
  if (gap2 <= 0.0) {
    e.subleading_valid = false;
    e.b1 = e.b12 = e.b0 = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  const double gap = std::sqrt(gap2);
  // Single power of mu in the A3 term: the charge is odd in mu.
  e.b1 = -mu * (4.0 * sqrt_pi * gap * c.A3 + 2.0 * (std::log(gap2) - 2.0) * c.A2 -
                2.0 * sqrt_pi * c.A1 / gap - 2.0 * c.A0 / gap2);
  e.b12 = -mu * e.C / (2.0 * sqrt_pi);
  e.b0 = mu / (2.0 * sqrt_pi) *
         (2.0 * e.C * (special::digamma_half + 3.0 * special::euler_gamma) + 32.0 / 3.0 * c.A3 * mu2 -
          8.0 * c.A1 - std::log(fp.l_scale * fp.l_scale) * e.C);
  return e;
}

double b2_from_volume(double mu, double volume) { return mu * volume / 3.0; }

}  // namespace cavitybec
