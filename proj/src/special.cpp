#include "cavitybec/special.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_zeta.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace cavitybec::special {

namespace {

// GSL aborts by default; we want status codes.
struct ErrorHandlerOff {
  ErrorHandlerOff() { gsl_set_error_handler_off(); }
};
const ErrorHandlerOff error_handler_off;

double checked(int status, const gsl_sf_result& r, const char* what) {
  if (status != GSL_SUCCESS && status != GSL_EUNDRFLW) {
    throw std::domain_error(std::string(what) + ": " + gsl_strerror(status));
  }
  return status == GSL_EUNDRFLW ? 0.0 : r.val;
}

}  // namespace

double gamma(double x) {
  gsl_sf_result r;
  return checked(gsl_sf_gamma_e(x, &r), r, "gamma");
}

double gamma_inv(double x) {
  gsl_sf_result r;
  return checked(gsl_sf_gammainv_e(x, &r), r, "gamma_inv");
}

double riemann_zeta(double s) {
  gsl_sf_result r;
  return checked(gsl_sf_zeta_e(s, &r), r, "riemann_zeta");
}

double riemann_zeta_prime_zero() { return -0.5 * std::log(2.0 * pi); }

double bessel_j(double nu, double x) {
  gsl_sf_result r;
  return checked(gsl_sf_bessel_Jnu_e(nu, x, &r), r, "bessel_j");
}

double bessel_k1_scaled(double x) {
  gsl_sf_result r;
  return checked(gsl_sf_bessel_K1_scaled_e(x, &r), r, "bessel_k1_scaled");
}

double bessel_k2_scaled(double x) {
  gsl_sf_result r;
  return checked(gsl_sf_bessel_Kn_scaled_e(2, x, &r), r, "bessel_k2_scaled");
}

}  // namespace cavitybec::special
