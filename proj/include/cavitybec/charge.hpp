#pragma once

// Net charge of the ideal relativistic Bose gas in the cavity: exact sums
// over the discrete spectrum, the chemical potential at fixed charge, the
// split of the charge by excitation class, and the asymptotic formulas.

#include "cavitybec/spectral.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cavitybec {

struct ThermoState {
  double T = 1.0;
  double mu = 0.0;
  double m = 1.0;
  double Q_total = 0.0;
};

enum class ChargeMethod {
  Auto,      ///< Direct when the mode count is small, Resummed otherwise
  Direct,    ///< every mode with beta (E - E0) <= cutoff
  Resummed,  ///< low modes explicitly, the rest through Bose series of lattice sums
};

std::string_view to_string(ChargeMethod m);

struct ChargeOptions {
  /// Modes with beta (E - E0) above this are dropped (Direct).
  double cutoff = 40.0;
  ChargeMethod method = ChargeMethod::Auto;
  /// Auto switches to Resummed above this many (estimated) modes.
  std::uint64_t direct_threshold = 300'000;
  /// Hard limit on enumerated modes.
  std::uint64_t mode_budget = 5'000'000;
  /// Resummed: modes with beta (E - E0) below this are summed explicitly.
  double low_mode_window = 1.0;
  /// Resummed: number of Bose-series terms.
  int bose_terms = 40;
};

struct ChargeSum {
  double value = 0.0;
  std::array<double, 4> by_class{};
  double tail_bound = 0.0;
  std::uint64_t modes = 0;
  ChargeMethod method = ChargeMethod::Direct;
};

/// Lowest single-particle energy: m (Neumann) or sqrt(m^2 + sum (pi/L_i)^2).
double lowest_mode_energy(const CavityGeometry& g, double m);

/// Exact charge at one temperature as a function of the chemical potential.
/// Construction does the mu-independent work; evaluations are cheap.
class ChargeEngine {
 public:
  ChargeEngine(const CavityGeometry& g, double m, double T, const ChargeOptions& options = {});

  /// Charge at mu = E0 - gap, 0 < gap < 2 E0.
  ChargeSum at_gap(double gap) const;
  /// Charge at |mu| < E0.
  ChargeSum at_mu(double mu) const;

  double E0() const { return E0_; }
  double T() const { return T_; }
  ChargeMethod method() const { return method_; }
  std::uint64_t modes() const { return modes_; }

 private:
  ChargeSum evaluate(double d) const;

  double m_;
  double T_;
  double beta_;
  double E0_;
  ChargeMethod method_;
  ChargeOptions options_;
  // Distinct levels per class: x = beta (E - E0) and multiplicity.
  std::array<std::vector<double>, 4> x_;
  std::array<std::vector<double>, 4> mult_;
  // Resummed: Bose-series coefficients of the modes above the window.
  std::array<std::vector<double>, 4> high_;
  std::uint64_t modes_ = 0;
  double tail_ = 0.0;
};

ChargeSum exact_charge(const ThermoState& st, const CavityGeometry& g, const ChargeOptions& options = {});

struct MuSolution {
  double mu = 0.0;
  /// E0 - mu, carried separately because mu loses digits near E0.
  double gap = 0.0;
  double charge = 0.0;
  double residual = 0.0;
  int iterations = 0;
  ChargeSum sum;
};

MuSolution solve_mu(const ChargeEngine& engine, double Q_target);
MuSolution solve_mu(double T, double Q_target, const CavityGeometry& g, double m,
                    const ChargeOptions& options = {});

enum class Engine { Exact, Asymptotic };

struct PartitionedCharge {
  std::array<double, 4> Q{};
  double Q_total = 0.0;
  double mu_solved = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  Engine engine = Engine::Exact;
  ChargeMethod method = ChargeMethod::Direct;
};

PartitionedCharge partitioned_charge(double T, double Q_target, const CavityGeometry& g, double m,
                                     const ChargeOptions& options = {});

/// b2 T^2 + (b32 T / 2) log(T^2 / mt^2), mt^2 = pi^2/L3^2 + m^2 - mu^2.
double asymptotic_Q_excited(double T, double mu, double m, const CavityGeometry& g);

/// b2 T^2 -/+ (b32 T / 6) log(T^2 / mt^2); minus for the 1D scenario.
double asymptotic_Q3(double T, double mu, double m, const CavityGeometry& g, Scenario scenario);

/// Charge of the two-dimensionally excited modes.
double asymptotic_Q2(double T, double mu, double m, const CavityGeometry& g, Scenario scenario);

/// Charge of the one-dimensionally excited modes.
double asymptotic_Q1(double T, double mu, double m, const CavityGeometry& g, Scenario scenario);

}  // namespace cavitybec
