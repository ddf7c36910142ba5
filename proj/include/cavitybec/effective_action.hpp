#pragma once

// Zeta-function regularized one-loop effective action of the charged field
// in the cavity, and the high-temperature expansion of the net charge.

#include "cavitybec/spectral.hpp"

#include <stdexcept>

namespace cavitybec {

struct FieldParams {
  double m = 0.0;
  double mu = 0.0;
  double beta = 1.0;
  /// Length scale of the functional measure; only enters b0.
  double l_scale = 1.0;
};

/// Thrown when s sits within 1e-6 of a pole of the requested expression.
class PoleProximity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Zeta1Value {
  double value = 0.0;
  /// Set when m^2 - mu^2 = 0 makes a term with A_k != 0 blow up.
  bool divergent = false;
};

/// sum_k Gamma(s - k/2)/Gamma(s) A_k (m^2 - mu^2)^{k/2 - s}.
Zeta1Value zeta1(double s, const HeatKernelCoeffs& c, const FieldParams& fp);

/// Small-beta_bar expansion of the thermal part of the zeta function,
/// five groups ordered by powers of beta_bar.
double zeta2_expanded(double s, const HeatKernelCoeffs& c, const FieldParams& fp);

/// Gamma = c3/b^3 + c2/b^2 + c1/b + c12 log b + c0 + cm12 b log b, b = beta_bar.
struct ActionCoefficients {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c12 = 0.0;
  double c0 = 0.0;
  double cm12 = 0.0;
};

/// Requires m^2 >= mu^2; c0 is -inf at m^2 = mu^2 (corner term).
ActionCoefficients action_coeffs(const HeatKernelCoeffs& c, const FieldParams& fp);

/// Assembled effective action without the classical term.
double effective_action(const ActionCoefficients& a, double beta);
double effective_action(const HeatKernelCoeffs& c, const FieldParams& fp);

/// Q = b2 T^2 + b32 T log T + b1 T + b12 log T + b0.
struct ChargeExpansion {
  double b2 = 0.0;
  double b32 = 0.0;
  double b1 = 0.0;
  double b12 = 0.0;
  double b0 = 0.0;
  /// C = A3 (4 mu^2 - m^2).
  double C = 0.0;
  /// False at |mu| = m, where b1, b12, b0 are left as NaN.
  bool subleading_valid = true;

  double leading(double T) const;
  double value(double T) const;
};

/// Requires |mu| <= m; fp.beta is not used.
ChargeExpansion charge_coeffs(const HeatKernelCoeffs& c, const FieldParams& fp);

/// b2 written through the volume: mu V / 3.
double b2_from_volume(double mu, double volume);

}  // namespace cavitybec
