#pragma once

// Sums of exp(-a (E_n - m)) over cavity modes with a prescribed set of
// excited axes, E_n = sqrt(m^2 + sum_i (pi n_i / L_i)^2), Neumann indexing.
// Long axes are Poisson resummed, short axes are summed directly.

#include <array>

namespace cavitybec::detail {

struct AxisSumStats {
  long direct_terms = 0;
  long dual_terms = 0;
};

/// sum over n with n_i >= 1 for i in mask and n_i = 0 otherwise.
/// Requires m > 0 and a > 0.
double excited_class_sum(const std::array<double, 3>& L, double m, double a, unsigned mask,
                         AxisSumStats* stats = nullptr);

}  // namespace cavitybec::detail
