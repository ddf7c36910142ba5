#pragma once

// Counting integer points n in the ellipsoid sum_i a_i^2 n_i^2 <= eps.
//
// Three routes are provided and cross-checked by the tests:
//   * count_bruteforce   direct enumeration of the bounding box (the oracle);
//   * count_fourier      Poisson-resummed Bessel series, optionally smeared
//                        by a Gaussian so the series converges absolutely;
//   * CumulativeDosTable one-pass histogram of the octant, for sweeps.
//
// Points on the boundary (sum == eps) are inside: every route counts the
// closed ellipsoid.

#include "cavitybec/boundary.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cavitybec {

/// Integer scale factors a_1..a_d, each >= 1.
class AnisotropyVector {
 public:
  AnisotropyVector(std::initializer_list<std::int64_t> a);
  explicit AnisotropyVector(std::vector<std::int64_t> a);

  std::size_t dim() const { return a_.size(); }
  std::int64_t operator[](std::size_t i) const { return a_[i]; }
  const std::vector<std::int64_t>& values() const { return a_; }
  /// A = a_1 * ... * a_d.
  double product() const;
  std::int64_t max() const;

 private:
  std::vector<std::int64_t> a_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorkBudget {
  std::uint64_t max_points = 100'000'000;
};

/// |{n in Z^d : sum a_i^2 n_i^2 <= eps}| by enumeration.
/// Throws BudgetExceeded when the bounding box holds more than
/// budget.max_points candidates.
std::uint64_t count_bruteforce(const AnisotropyVector& a, double eps, WorkBudget budget = {});

enum class Smoothing {
  None,   ///< raw truncated series at eps
  Auto,   ///< closed-ball count via a midpoint evaluation and automatic width
  Fixed,  ///< caller-supplied width, evaluated at eps
};

struct FourierOptions {
  Smoothing smoothing = Smoothing::Auto;
  /// Gaussian width in the a-scaled coordinates (Smoothing::Fixed only).
  double sigma = 0.0;
  /// Tail estimate allowed at l_max before NonConvergence is thrown.
  double tolerance = 0.05;
  bool require_convergence = true;
};

struct FourierCount {
  double value = 0.0;
  double volume_term = 0.0;
  double eval_epsilon = 0.0;   ///< where the series was evaluated
  double sigma = 0.0;          ///< smearing width actually used
  double smoothing_bound = 0.0;
  double tail_estimate = 0.0;
  std::uint64_t terms = 0;
};

/// Volume term plus the Bessel series over nonzero lattice vectors l with
/// |l_i| <= l_max. The l = 0 term is V_d eps^{d/2} / A.
FourierCount count_fourier(const AnisotropyVector& a, double eps, std::int64_t l_max,
                           const FourierOptions& options = {});

/// Smallest l_max whose tail estimate is below options.tolerance.
std::int64_t fourier_lmax_for(const AnisotropyVector& a, double eps,
                              const FourierOptions& options = {});

/// Number of cavity modes with dimensionless energy <= eps (d in {1,2,3}).
/// Built from full-lattice counts of every coordinate subspace.
std::uint64_t cumulative_dos(const AnisotropyVector& a, double eps, Boundary bc,
                             WorkBudget budget = {});

/// Octant histogram of mode levels up to an integer eps_max, for sweeps.
class CumulativeDosTable {
 public:
  CumulativeDosTable(const AnisotropyVector& a, std::int64_t eps_max, Boundary bc,
                     WorkBudget budget = {});
  std::uint64_t operator()(double eps) const;
  std::int64_t eps_max() const { return eps_max_; }

 private:
  std::int64_t eps_max_;
  std::vector<std::uint64_t> cumulative_;
};

struct CountResult {
  double epsilon = 0.0;
  std::uint64_t exact_count = 0;
  double smooth_part = 0.0;
  double residual = 0.0;
};

/// Three-dimensional anisotropy (a1, a2[, a3]); a 2-vector means a3 = 1.
AnisotropyVector cavity_anisotropy(const AnisotropyVector& a);

/// Volume plus coordinate-plane terms of the three-dimensional cumulative count.
double smooth_cumulative_dos(const AnisotropyVector& a, double eps, Boundary bc);

/// Exact count, its smooth part and the oscillating remainder.
CountResult residual_delta(const AnisotropyVector& a, double eps, Boundary bc,
                           WorkBudget budget = {});

/// residual_delta at every epsilon of the grid, sharing one histogram.
std::vector<CountResult> residual_series(const AnisotropyVector& a, std::span<const double> grid,
                                         Boundary bc, WorkBudget budget = {});

/// n points spaced geometrically from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);
/// 1, 2, ..., eps_max.
std::vector<double> integer_grid(std::int64_t eps_max);

struct SupFit {
  double exponent_gamma = 0.0;
  double prefactor = 0.0;
  std::pair<double, double> sample_range{0.0, 0.0};
  std::size_t points_used = 0;
};

struct SupFitOptions {
  /// Samples below this are transient and excluded from the fit.
  double min_epsilon = 10.0;
  std::size_t min_samples = 100;
  double min_decades = 2.0;
  std::size_t min_increases = 10;
};

/// (epsilon, residual) pairs, epsilon ascending.
using ResidualSample = std::pair<double, double>;

/// Running supremum of the residual, then a log-log least-squares fit over
/// the points where the supremum strictly increases.
SupFit fit_sup_exponent(std::span<const ResidualSample> samples, const SupFitOptions& options = {});

/// Running supremum, element-wise (same length as samples).
std::vector<double> running_supremum(std::span<const ResidualSample> samples);

}  // namespace cavitybec
