#pragma once

// Cavity spectrum: eigenvalues, theta functions, exact and asymptotic heat
// kernels, and the partition of modes by how many directions are excited.

#include "cavitybec/boundary.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace cavitybec {

/// Rectangular box with edges L1, L2, L3 and one boundary condition on all walls.
class CavityGeometry {
 public:
  CavityGeometry(double L1, double L2, double L3, Boundary bc = Boundary::Neumann);

  double L(std::size_t i) const { return L_[i]; }
  const std::array<double, 3>& lengths() const { return L_; }
  Boundary bc() const { return bc_; }
  double volume() const { return L_[0] * L_[1] * L_[2]; }

  /// a1 = L3/L1, a2 = L3/L2 as exact integers; throws std::domain_error otherwise.
  std::array<std::int64_t, 2> anisotropy() const;
  bool has_integer_anisotropy() const;

 private:
  std::array<double, 3> L_;
  Boundary bc_;
};

struct ModeIndex {
  std::array<std::int64_t, 3> n{};
};

/// eta_i = beta_bar / L_i with beta_bar = beta / (2 pi).
struct EtaVector {
  std::array<double, 3> eta{};
  /// Axis indices ordered by eta, largest first (stable for ties).
  std::array<int, 3> descending() const;
};

EtaVector eta_vector(const CavityGeometry& g, double beta);

/// Relative tolerance below which two eta values count as equal.
inline constexpr double eta_tie_tolerance = 1e-9;

/// omega_N = sum (pi n_i / L_i)^2.
double eigenvalue(const ModeIndex& n, const CavityGeometry& g);

/// theta_3 with imaginary nome: 1 + 2 sum_{n>=1} exp(-n^2 tau) cos(2 n z).
double theta3(double z, double tau);

/// sum_{n >= n0} exp(-n^2 t), n0 in {0, 1, 2}, without cancellation.
double theta_half_sum(int n0, double t);

/// sum over all modes of exp(-beta_bar^2 omega_N tau).
double heat_kernel_exact(double tau, const CavityGeometry& g, double beta);

struct HeatKernelCoeffs {
  double A0 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  int bc_sign = 1;
};

HeatKernelCoeffs heat_kernel_coeffs(const CavityGeometry& g);

/// sum_k A_k / (beta_bar^k tau^{k/2}).
double heat_kernel_asymptotic(double tau, const HeatKernelCoeffs& c, double beta);

/// Excitation class in {0, 1, 2, 3}; see the README for the rule.
int classify_mode(const ModeIndex& n, const CavityGeometry& g);

/// Class of a mode given only which axes are excited (bit i set for axis i).
int classify_excitation(unsigned excited_mask, const CavityGeometry& g);

struct PartitionedKernels {
  std::array<double, 4> K{};
  double total() const { return K[0] + K[1] + K[2] + K[3]; }
};

PartitionedKernels partitioned_heat_kernels(double tau, const CavityGeometry& g, double beta);

enum class Scenario { Isotropic, OneD, TwoD, ThreeStep };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

/// rho3(eps) = weyl sqrt(eps) + surface, rho2(eps) = rho2 (constant).
struct SmoothDos {
  double weyl = 0.0;
  double surface = 0.0;
  double rho2 = 0.0;
  /// Lowest excited level for the three- and two-dimensional classes.
  double eps1_3d = 1.0;
  double eps1_2d = 1.0;
  double rho3(double eps) const;
};

/// Throws std::invalid_argument when the geometry does not fit the scenario.
SmoothDos smooth_dos(const CavityGeometry& g, Scenario scenario);

}  // namespace cavitybec
