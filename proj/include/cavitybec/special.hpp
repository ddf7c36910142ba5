#pragma once

// Thin wrappers over the special functions the library needs. GSL does the
// heavy lifting; every wrapper checks the GSL status and throws on failure
// instead of returning a silently wrong value.

#include <numbers>

namespace cavitybec::special {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
/// Apery's constant.
inline constexpr double zeta3 = 1.2020569031595942853997381615114499907650;
/// psi(1/2) = -gamma - 2 log 2.
inline constexpr double digamma_half = -1.9635100260214234794409763329987555671931;

double gamma(double x);
/// 1/Gamma(x), zero at the non-positive integers.
double gamma_inv(double x);
double riemann_zeta(double s);
/// Derivative of the Riemann zeta function at zero, -log(2 pi)/2.
double riemann_zeta_prime_zero();

/// Bessel function of the first kind J_nu(x), x >= 0.
double bessel_j(double nu, double x);

/// Exponentially scaled modified Bessel functions e^x K_1(x), e^x K_2(x).
double bessel_k1_scaled(double x);
double bessel_k2_scaled(double x);

}  // namespace cavitybec::special
