#pragma once

// Critical temperatures, the analytic condensate fraction, and the
// classification of multistep condensation regimes.

#include "cavitybec/spectral.hpp"

#include <stdexcept>
#include <string_view>

namespace cavitybec {

class NoRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootResult {
  double T = 0.0;
  /// |lhs - rhs| / Q of the defining equation at T.
  double residual = 0.0;
  int iterations = 0;
};

/// sqrt(Q / b2) with mu = m, i.e. sqrt(3 Q / (m V)).
double bulk_tc(double Q, const CavityGeometry& g, double m);

struct FiniteTc {
  RootResult root;
  double bulk = 0.0;
  /// 1 - b32 log(Q L3^2 / b2) / (4 sqrt(b2 Q)), the small-b32 estimate of Tc / Tc0.
  double perturbative_ratio = 1.0;
};

/// Root of Q = b2 T^2 + b32 T log(T L3) nearest the bulk value.
FiniteTc finite_tc(double Q, const CavityGeometry& g, double m);

struct CondensateFraction {
  double value = 0.0;
  double unclamped = 0.0;
  bool clamped = false;
};

/// Ground-state share of the charge from the finite-size corrected expansion.
CondensateFraction condensate_fraction(double T, double Q, const CavityGeometry& g, double m);

/// Left-hand side minus Q of the scenario's T_3D equation (mu = m).
double t3d_equation(double T, double Q, const CavityGeometry& g, double m, Scenario scenario);

/// Temperature where the three-dimensionally excited modes saturate.
/// Isotropic falls back to finite_tc.
RootResult t3d(double Q, const CavityGeometry& g, double m, Scenario scenario);

struct T2D {
  /// Root of Q = bt T log(L T).
  RootResult root;
  /// Q / (bt log(Q L / bt)).
  double closed_form = 0.0;
  /// Root of asymptotic_Q2(T, mu = m) = Q.
  RootResult saturation_root;
  double b_tilde = 0.0;
  double length = 0.0;
};

/// Scenario must be TwoD (bt = m L3^2/pi, L = L3) or ThreeStep (bt = m L2 L3/pi, L = L2).
T2D t2d(double Q, const CavityGeometry& g, double m, Scenario scenario);

/// pi Q / (2 m L3^2 log(2 pi)).
double t1d(double Q, const CavityGeometry& g, double m);

enum class RegimeLabel { OneStep, TwoStep1D, TwoStep2D, ThreeStep, Frozen };

std::string_view to_string(RegimeLabel l);

struct RegimeOptions {
  /// A condition holds when lhs >= dominance * rhs.
  double dominance = 3.0;
};

struct RegimeReport {
  /// Sorted edges L1 <= L2 <= L3.
  double L1 = 0.0, L2 = 0.0, L3 = 0.0;
  double ratio_32 = 0.0;  ///< L3 / L2
  double ratio_31 = 0.0;  ///< L3 / L1
  double Q_tilde = 0.0;   ///< pi Q / (m L2)
  /// log(lhs / rhs) of the three inequalities.
  double margin_A = 0.0, margin_B = 0.0, margin_C = 0.0;
  bool condition_A = false, condition_B = false, condition_C = false;
  double T3D = 0.0;
  /// Temperature of the freeze-out check: the bulk critical temperature.
  double T_eta = 0.0;
  /// 1 / (2 pi T_eta L1).
  double eta_max = 0.0;
  double dominance = 0.0;
  RegimeLabel label = RegimeLabel::OneStep;
};

RegimeReport classify_regime(double Q, const CavityGeometry& g, double m, const RegimeOptions& options = {});

struct CriticalSet {
  double Tc_bulk = 0.0;
  double Tc_finite = 0.0;
  double T3D = 0.0;
  double T2D = 0.0;  ///< 0 when the scenario has no two-dimensional step
  double T1D = 0.0;
  Scenario scenario = Scenario::Isotropic;
};

CriticalSet critical_set(double Q, const CavityGeometry& g, double m, Scenario scenario);

}  // namespace cavitybec
