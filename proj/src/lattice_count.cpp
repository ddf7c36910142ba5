#include "cavitybec/lattice_count.hpp"

#include "cavitybec/special.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cavitybec {

namespace {

using special::pi;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Largest integer level not above eps; -1 if eps < 0.
std::int64_t floor_level(double eps) {
  if (!std::isfinite(eps)) throw std::invalid_argument("epsilon must be finite");
  if (eps < 0.0) return -1;
  if (eps > 9.0e18) throw std::invalid_argument("epsilon too large");
  return static_cast<std::int64_t>(std::floor(eps));
}

std::uint64_t axis_bound(std::uint64_t level, std::int64_t a) {
  const auto a2 = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(a);
  return isqrt(level / a2);
}

void check_budget(long double candidates, const WorkBudget& budget) {
  if (candidates > static_cast<long double>(budget.max_points)) {
    throw BudgetExceeded("enumeration needs " + std::to_string(static_cast<double>(candidates)) +
                         " candidate points, budget is " + std::to_string(budget.max_points));
  }
}

std::uint64_t count_rec(const std::vector<std::int64_t>& a, std::size_t axis, std::uint64_t rem) {
  const std::uint64_t b = axis_bound(rem, a[axis]);
  if (axis + 1 == a.size()) return 2 * b + 1;
  const auto a2 = static_cast<std::uint64_t>(a[axis] * a[axis]);
  std::uint64_t total = count_rec(a, axis + 1, rem);
  for (std::uint64_t n = 1; n <= b; ++n) total += 2 * count_rec(a, axis + 1, rem - a2 * n * n);
  return total;
}

double unit_ball_volume(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(pi, h) / std::tgamma(h + 1.0);
}

double unit_sphere_area(std::size_t d) { return static_cast<double>(d) * unit_ball_volume(d); }

// J_{d/2}(x) / x^{d/2} style kernels use these.
double bessel_half_order(std::size_t d, double x) {
  if (d == 1) return std::sqrt(2.0 / (pi * x)) * std::sin(x);
  if (d == 3 && x > 1.0) return std::sqrt(2.0 / (pi * x)) * (std::sin(x) / x - std::cos(x));
  return special::bessel_j(0.5 * static_cast<double>(d), x);
}

// Bound on the part of the series with |l/a| >= q0.
double tail_bound(std::size_t d, double radius, double alpha, double q0) {
  if (alpha <= 0.0) return std::numeric_limits<double>::infinity();
  const double sa = std::sqrt(alpha);
  return unit_sphere_area(d) / pi * std::pow(radius, 0.5 * (d - 1.0)) *
         std::pow(q0, 0.5 * (d - 3.0)) * std::sqrt(pi) / (2.0 * sa) * std::erfc(sa * q0);
}

struct Evaluation {
  double eps = 0.0;
  double sigma = 0.0;
  double bound = 0.0;
};

// Where to evaluate the series and how wide a Gaussian to use.
Evaluation plan_evaluation(const AnisotropyVector& a, double eps, const FourierOptions& o) {
  const std::size_t d = a.dim();
  Evaluation ev;
  switch (o.smoothing) {
    case Smoothing::None:
      ev.eps = eps;
      return ev;
    case Smoothing::Fixed:
      if (!(o.sigma > 0.0)) throw std::invalid_argument("fixed smoothing needs sigma > 0");
      ev.eps = eps;
      ev.sigma = o.sigma;
      ev.bound = std::numeric_limits<double>::quiet_NaN();
      return ev;
    case Smoothing::Auto:
      break;
  }
  // Levels are integers, so any evaluation point strictly between floor(eps)
  // and floor(eps) + 1 gives the closed count. The midpoint keeps both shells
  // as far away as possible.
  const double level = std::floor(eps);
  ev.eps = level + 0.5;
  const double r_in = std::sqrt(level);
  const double r_mid = std::sqrt(ev.eps);
  const double r_out = std::sqrt(level + 1.0);
  const double gap = std::min(r_mid - r_in, r_out - r_mid);
  const double points = unit_ball_volume(d) * std::pow(r_out + 1.0, static_cast<double>(d)) / a.product() + 1.0;
  double k = 6.0;
  for (;; k += 0.25) {
    ev.bound = points * gsl_cdf_chisq_Q(k * k, static_cast<double>(d));
    if (ev.bound <= 0.01 || k >= 40.0) break;
  }
  ev.sigma = gap / k;
  return ev;
}

}  // namespace

AnisotropyVector::AnisotropyVector(std::initializer_list<std::int64_t> a)
    : AnisotropyVector(std::vector<std::int64_t>(a)) {}

AnisotropyVector::AnisotropyVector(std::vector<std::int64_t> a) : a_(std::move(a)) {
  if (a_.empty()) throw std::invalid_argument("anisotropy vector must be nonempty");
  for (auto v : a_) {
    if (v < 1) throw std::invalid_argument("anisotropy entries must be positive integers");
    if (v > 3'000'000'000LL) throw std::invalid_argument("anisotropy entry too large");
  }
}

double AnisotropyVector::product() const {
  double p = 1.0;
  for (auto v : a_) p *= static_cast<double>(v);
  return p;
}

std::int64_t AnisotropyVector::max() const { return *std::max_element(a_.begin(), a_.end()); }

std::uint64_t count_bruteforce(const AnisotropyVector& a, double eps, WorkBudget budget) {
  const std::int64_t level = floor_level(eps);
  if (level < 0) return 0;
  const auto lv = static_cast<std::uint64_t>(level);
  long double box = 1.0L;
  for (auto v : a.values()) box *= 2.0L * axis_bound(lv, v) + 1.0L;
  check_budget(box, budget);
  return count_rec(a.values(), 0, lv);
}

FourierCount count_fourier(const AnisotropyVector& a, double eps, std::int64_t l_max,
                           const FourierOptions& options) {
  const std::size_t d = a.dim();
  if (d < 1 || d > 3) throw std::invalid_argument("count_fourier supports d = 1, 2, 3");
  if (!std::isfinite(eps) || eps < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (l_max < 0) throw std::invalid_argument("l_max must be >= 0");

  const Evaluation ev = plan_evaluation(a, eps, options);
  const double A = a.product();
  const double radius = std::sqrt(ev.eps);
  const double alpha = 2.0 * pi * pi * ev.sigma * ev.sigma;

  FourierCount out;
  out.eval_epsilon = ev.eps;
  out.sigma = ev.sigma;
  out.smoothing_bound = ev.bound;
  out.volume_term = unit_ball_volume(d) * std::pow(ev.eps, 0.5 * d) / A;

  const double q0 = static_cast<double>(l_max + 1) / static_cast<double>(a.max());
  out.tail_estimate = tail_bound(d, radius, alpha, q0);
  if (options.require_convergence && !(out.tail_estimate <= options.tolerance)) {
    throw NonConvergence("Fourier series tail " + std::to_string(out.tail_estimate) +
                         " exceeds tolerance at l_max = " + std::to_string(l_max));
  }

  // Beyond q_cut the Gaussian factor is below 1e-18.
  const double q_cut2 = alpha > 0.0 ? 41.45 / alpha : std::numeric_limits<double>::infinity();
  const double prefactor = std::pow(ev.eps, 0.25 * d) / A;

  double series = 0.0;
  std::uint64_t terms = 0;
  std::vector<double> inv_a(d);
  for (std::size_t i = 0; i < d; ++i) inv_a[i] = 1.0 / static_cast<double>(a[i]);

  auto term = [&](double q2, int nonzero) {
    const double q = std::sqrt(q2);
    const double x = 2.0 * pi * q * radius;
    double t = radius > 0.0 ? bessel_half_order(d, x) / std::pow(q, 0.5 * d) : 0.0;
    if (alpha > 0.0) t *= std::exp(-alpha * q2);
    ++terms;
    return std::ldexp(t, nonzero);
  };

  // Non-negative octant with multiplicity 2^(number of nonzero components).
  for (std::int64_t l1 = 0; l1 <= l_max; ++l1) {
    const double q1 = l1 * inv_a[0];
    const double s1 = q1 * q1;
    if (s1 > q_cut2) break;
    if (d == 1) {
      if (l1 > 0) series += term(s1, 1);
      continue;
    }
    for (std::int64_t l2 = 0; l2 <= l_max; ++l2) {
      const double q2v = l2 * inv_a[1];
      const double s2 = s1 + q2v * q2v;
      if (s2 > q_cut2) break;
      const int nz2 = (l1 > 0) + (l2 > 0);
      if (d == 2) {
        if (nz2 > 0) series += term(s2, nz2);
        continue;
      }
      for (std::int64_t l3 = 0; l3 <= l_max; ++l3) {
        const double q3v = l3 * inv_a[2];
        const double s3 = s2 + q3v * q3v;
        if (s3 > q_cut2) break;
        const int nz3 = nz2 + (l3 > 0);
        if (nz3 > 0) series += term(s3, nz3);
      }
    }
  }
  out.terms = terms;
  out.value = out.volume_term + prefactor * series;
  return out;
}

std::int64_t fourier_lmax_for(const AnisotropyVector& a, double eps, const FourierOptions& options) {
  const std::size_t d = a.dim();
  if (d < 1 || d > 3) throw std::invalid_argument("count_fourier supports d = 1, 2, 3");
  if (!std::isfinite(eps) || eps < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  const Evaluation ev = plan_evaluation(a, eps, options);
  const double alpha = 2.0 * pi * pi * ev.sigma * ev.sigma;
  if (alpha <= 0.0) throw NonConvergence("unsmoothed series has no finite l_max");
  const double radius = std::sqrt(ev.eps);
  const double step = 1.0 / static_cast<double>(a.max());
  double hi = step;
  while (tail_bound(d, radius, alpha, hi) > options.tolerance) hi *= 2.0;
  double lo = hi / 2.0;
  for (int it = 0; it < 100 && hi - lo > 0.25 * step; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail_bound(d, radius, alpha, mid) > options.tolerance ? lo : hi) = mid;
  }
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(hi * a.max())) - 1);
}

std::uint64_t cumulative_dos(const AnisotropyVector& a, double eps, Boundary bc, WorkBudget budget) {
  const std::size_t d = a.dim();
  if (d > 3) throw std::invalid_argument("cumulative_dos supports d = 1, 2, 3");
  if (floor_level(eps) < 0) return 0;
  const long long s = boundary_sign(bc);
  // 2^d times the octant count: sum over coordinate subspaces of the full
  // lattice counts, each signed by the boundary condition.
  long long total = 0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<std::int64_t> sub;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (1u << i)) sub.push_back(a[i]);
    const long long full = sub.empty() ? 1 : static_cast<long long>(count_bruteforce(AnisotropyVector(sub), eps, budget));
    long long sign = 1;
    for (std::size_t k = sub.size(); k < d; ++k) sign *= s;
    total += sign * full;
  }
  return static_cast<std::uint64_t>(total >> d);
}

CumulativeDosTable::CumulativeDosTable(const AnisotropyVector& a, std::int64_t eps_max, Boundary bc,
                                       WorkBudget budget)
    : eps_max_(eps_max) {
  if (eps_max < 0) throw std::invalid_argument("eps_max must be >= 0");
  const std::size_t d = a.dim();
  const auto lv = static_cast<std::uint64_t>(eps_max);
  const std::uint64_t start = bc == Boundary::Neumann ? 0 : 1;
  long double box = 1.0L;
  for (auto v : a.values()) box *= static_cast<long double>(axis_bound(lv, v)) + 1.0L;
  check_budget(box, budget);

  std::vector<std::uint64_t> hist(lv + 1, 0);
  std::vector<std::uint64_t> a2(d);
  for (std::size_t i = 0; i < d; ++i) a2[i] = static_cast<std::uint64_t>(a[i] * a[i]);

  auto fill = [&](auto& self, std::size_t axis, std::uint64_t level) -> void {
    for (std::uint64_t n = start;; ++n) {
      const std::uint64_t next = level + a2[axis] * n * n;
      if (next > lv) break;
      if (axis + 1 == d)
        ++hist[next];
      else
        self(self, axis + 1, next);
    }
  };
  fill(fill, 0, 0);
  cumulative_.resize(hist.size());
  std::partial_sum(hist.begin(), hist.end(), cumulative_.begin());
}

std::uint64_t CumulativeDosTable::operator()(double eps) const {
  const std::int64_t level = floor_level(eps);
  if (level < 0) return 0;
  if (level > eps_max_) throw std::out_of_range("epsilon beyond the tabulated range");
  return cumulative_[static_cast<std::size_t>(level)];
}

AnisotropyVector cavity_anisotropy(const AnisotropyVector& a) {
  if (a.dim() == 3) return a;
  if (a.dim() == 2) return AnisotropyVector{a[0], a[1], 1};
  throw std::invalid_argument("cavity anisotropy needs 2 or 3 entries");
}

double smooth_cumulative_dos(const AnisotropyVector& a, double eps, Boundary bc) {
  const AnisotropyVector c = cavity_anisotropy(a);
  if (eps <= 0.0) return 0.0;
  const double a1 = c[0], a2 = c[1], a3 = c[2];
  const double volume = pi / 6.0 * std::pow(eps, 1.5) / (a1 * a2 * a3);
  const double faces = pi * eps / 8.0 * (1.0 / (a1 * a2) + 1.0 / (a1 * a3) + 1.0 / (a2 * a3));
  return volume + boundary_sign(bc) * faces;
}

CountResult residual_delta(const AnisotropyVector& a, double eps, Boundary bc, WorkBudget budget) {
  const AnisotropyVector c = cavity_anisotropy(a);
  CountResult r;
  r.epsilon = eps;
  r.exact_count = cumulative_dos(c, eps, bc, budget);
  r.smooth_part = smooth_cumulative_dos(c, eps, bc);
  r.residual = static_cast<double>(r.exact_count) - r.smooth_part;
  return r;
}

std::vector<CountResult> residual_series(const AnisotropyVector& a, std::span<const double> grid,
                                         Boundary bc, WorkBudget budget) {
  const AnisotropyVector c = cavity_anisotropy(a);
  std::vector<CountResult> out;
  if (grid.empty()) return out;
  const double top = *std::max_element(grid.begin(), grid.end());
  const CumulativeDosTable table(c, std::max<std::int64_t>(0, floor_level(top)), bc, budget);
  out.reserve(grid.size());
  for (double eps : grid) {
    CountResult r;
    r.epsilon = eps;
    r.exact_count = table(eps);
    r.smooth_part = smooth_cumulative_dos(c, eps, bc);
    r.residual = static_cast<double>(r.exact_count) - r.smooth_part;
    out.push_back(r);
  }
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("geometric grid needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.back() = hi;
  return g;
}

std::vector<double> integer_grid(std::int64_t eps_max) {
  if (eps_max < 1) throw std::invalid_argument("eps_max must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(eps_max));
  std::iota(g.begin(), g.end(), 1.0);
  return g;
}

std::vector<double> running_supremum(std::span<const ResidualSample> samples) {
  std::vector<double> sup(samples.size());
  double m = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m = std::max(m, std::abs(samples[i].second));
    sup[i] = m;
  }
  return sup;
}

SupFit fit_sup_exponent(std::span<const ResidualSample> samples, const SupFitOptions& options) {
  if (samples.size() < options.min_samples) {
    throw std::invalid_argument("need at least " + std::to_string(options.min_samples) + " samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0)) throw std::invalid_argument("sample epsilons must be positive");
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("sample epsilons must be strictly increasing");
    }
  }
  const double lo = samples.front().first, hi = samples.back().first;
  if (std::log10(hi / lo) < options.min_decades) {
    throw std::invalid_argument("samples must span at least " + std::to_string(options.min_decades) +
                                " decades");
  }

  const std::vector<double> sup = running_supremum(samples);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool increase = i == 0 ? sup[i] > 0.0 : sup[i] > sup[i - 1];
    if (increase && sup[i] > 0.0 && samples[i].first >= options.min_epsilon) {
      xs.push_back(std::log(samples[i].first));
      ys.push_back(std::log(sup[i]));
    }
  }
  if (xs.size() < options.min_increases) {
    throw DegenerateFit("running supremum increases only " + std::to_string(xs.size()) + " times");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("all increases at one epsilon");
  SupFit fit;
  fit.exponent_gamma = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent_gamma * mx);
  fit.sample_range = {std::exp(xs.front()), std::exp(xs.back())};
  fit.points_used = xs.size();
  return fit;
}

}  // namespace cavitybec
