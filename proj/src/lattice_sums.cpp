#include "lattice_sums.hpp"

#include "cavitybec/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cavitybec::detail {

namespace {

using special::pi;

constexpr double relative_floor = 1e-20;

struct Context {
  const std::array<double, 3>& L;
  double m;
  double a;
  AxisSumStats* stats;
};

// a m - M s with s = sqrt(a^2 + w2), written without cancellation.
double scaled_exponent(double M, double m, double a, double s, double w2) {
  const double dm = M - m;
  return -(dm * s + m * (w2 / (s + a)));
}

// Fourier transform of exp(-a sqrt(M^2 + |y|^2)) in p dimensions at
// angular frequency sqrt(w2), times exp(a m).
double dual_kernel(int p, double M, double m, double a, double w2) {
  const double s = std::sqrt(a * a + w2);
  const double x = M * s;
  const double e = std::exp(scaled_exponent(M, m, a, s, w2));
  if (e == 0.0) return 0.0;
  switch (p) {
    case 1: return 2.0 * a * M * special::bessel_k1_scaled(x) * e / s;
    case 2: return 2.0 * pi * a * (1.0 + x) * e / (s * s * s);
    default: return 4.0 * pi * a * M * M * special::bessel_k2_scaled(x) * e / (s * s);
  }
}

double dual_sum(const Context& c, const std::vector<int>& axes, std::size_t idx, double w2, double M) {
  if (idx == axes.size()) {
    if (c.stats) ++c.stats->dual_terms;
    return dual_kernel(static_cast<int>(axes.size()), M, c.m, c.a, w2);
  }
  const double step = 2.0 * c.L[axes[idx]];
  double sum = 0.0;
  for (long k = 0;; ++k) {
    const double wk = step * static_cast<double>(k);
    const double v = dual_sum(c, axes, idx + 1, w2 + wk * wk, M);
    sum += k == 0 ? v : 2.0 * v;
    if (v == 0.0 || (k > 0 && v <= relative_floor * sum)) break;
  }
  return sum;
}

// Full-lattice sum over the axes in U at effective mass M, times exp(a m).
double poisson(const Context& c, const std::vector<int>& U, double M) {
  if (U.empty()) {
    if (c.stats) ++c.stats->direct_terms;
    const double dm = (M * M - c.m * c.m) / (M + c.m);
    return std::exp(-c.a * dm);
  }
  double jacobian = 1.0;
  for (int i : U) jacobian *= c.L[i] / pi;
  return jacobian * dual_sum(c, U, 0, 0.0, M);
}

double direct_sum(const Context& c, const std::vector<int>& D, std::size_t idx, double w2,
                  const std::vector<int>& U) {
  if (idx == D.size()) return poisson(c, U, std::sqrt(c.m * c.m + w2));
  const double k0 = pi / c.L[D[idx]];
  double sum = 0.0;
  for (long n = 1;; ++n) {
    const double kn = k0 * static_cast<double>(n);
    const double v = direct_sum(c, D, idx + 1, w2 + kn * kn, U);
    sum += v;
    if (v == 0.0 || v <= relative_floor * sum) break;
  }
  return sum;
}

}  // namespace

double excited_class_sum(const std::array<double, 3>& L, double m, double a, unsigned mask,
                         AxisSumStats* stats) {
  if (!(m > 0.0)) throw std::invalid_argument("lattice sums need m > 0");
  if (!(a > 0.0)) throw std::invalid_argument("lattice sums need a > 0");
  std::vector<int> direct, dual;
  for (int i = 0; i < 3; ++i) {
    if (!(mask & (1u << i))) continue;
    const double k = pi / L[i];
    const double first_step = a * (k * k) / (std::sqrt(m * m + k * k) + m);
    const double direct_cost = 40.0 * L[i] / (a * pi);
    const double dual_cost = 40.0 / (2.0 * L[i] * m);
    // Resumming an axis whose first excitation is already strongly
    // suppressed would subtract two nearly equal numbers.
    (dual_cost < direct_cost && first_step < 2.3 ? dual : direct).push_back(i);
  }
  const Context c{L, m, a, stats};
  // Inclusion-exclusion over the resummed axes: n_i >= 1 is half of the
  // full line minus the n_i = 0 term.
  const std::size_t p = dual.size();
  double total = 0.0;
  for (unsigned sub = 0; sub < (1u << p); ++sub) {
    std::vector<int> U;
    for (std::size_t i = 0; i < p; ++i)
      if (sub & (1u << i)) U.push_back(dual[i]);
    const double sign = ((p - U.size()) % 2 == 0) ? 1.0 : -1.0;
    total += sign * direct_sum(c, direct, 0, 0.0, U);
  }
  return std::ldexp(total, -static_cast<int>(p));
}

}  // namespace cavitybec::detail
