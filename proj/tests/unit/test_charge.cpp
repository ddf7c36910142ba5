#include "cavitybec/charge.hpp"

#include "cavitybec/critical.hpp"
#include "cavitybec/lattice_count.hpp"
#include "cavitybec/effective_action.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cavitybec;

namespace {

constexpr double pi = M_PI;

struct ModeSum {
  double total = 0.0;
  std::array<double, 4> by_class{};
};

// Net charge summed mode by mode from the Bose distribution.
ModeSum charge_by_modes(const CavityGeometry& g, double m, double T, double mu) {
  ModeSum s;
  const int lo = g.bc() == Boundary::Neumann ? 0 : 1;
  const double Emax = std::sqrt(m * m + 3 * std::pow(pi * (lo + 1), 2)) + 45.0 * T;
  auto k = [&](int i, int n) { return pi * n / g.L(static_cast<std::size_t>(i)); };
  for (int a = lo; k(0, a) <= Emax; ++a) {
    for (int b = lo; std::hypot(k(0, a), k(1, b)) <= Emax; ++b) {
      for (int c = lo;; ++c) {
        const double E = std::sqrt(m * m + k(0, a) * k(0, a) + k(1, b) * k(1, b) + k(2, c) * k(2, c));
        if (E > Emax) break;
        const double q = 1.0 / std::expm1((E - mu) / T) - 1.0 / std::expm1((E + mu) / T);
        s.total += q;
        s.by_class[static_cast<std::size_t>(classify_mode(ModeIndex{{a, b, c}}, g))] += q;
      }
    }
  }
  return s;
}

}  // namespace

TEST(LowestMode, NeumannAndDirichlet) {
  EXPECT_DOUBLE_EQ(lowest_mode_energy(CavityGeometry(1, 2, 3), 0.7), 0.7);
  const double k2 = pi * pi * (1 + 0.25 + 1.0 / 9.0);
  EXPECT_NEAR(lowest_mode_energy(CavityGeometry(1, 2, 3, Boundary::Dirichlet), 0.7), std::sqrt(0.49 + k2), 1e-14);
}

TEST(ExactCharge, MatchesModeSum) {
  struct Case {
    CavityGeometry g;
    double m, T, mu;
  };
  for (const Case& c : {Case{CavityGeometry(1, 2, 3), 1.0, 2.0, 0.6}, Case{CavityGeometry(3, 3, 3), 2.0, 1.5, 1.99},
                        Case{CavityGeometry(1, 2, 3, Boundary::Dirichlet), 0.5, 3.0, 1.0},
                        Case{CavityGeometry(0.5, 4, 4), 0.3, 1.0, -0.2}}) {
    const ChargeSum s = exact_charge(ThermoState{c.T, c.mu, c.m, 0.0}, c.g);
    const ModeSum ref = charge_by_modes(c.g, c.m, c.T, c.mu);
    EXPECT_NEAR(s.value / ref.total, 1.0, 1e-12);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(s.by_class[k], ref.by_class[k], 1e-10 * std::abs(ref.total));
  }
}

TEST(ExactCharge, ResummedAgreesWithDirect) {
  const CavityGeometry g(2, 4, 8);
  ChargeOptions direct, resummed;
  direct.method = ChargeMethod::Direct;
  resummed.method = ChargeMethod::Resummed;
  for (double T : {0.3, 1.0, 2.0}) {
    const ChargeEngine d(g, 0.5, T, direct), r(g, 0.5, T, resummed);
    EXPECT_EQ(r.method(), ChargeMethod::Resummed);
    for (double gap : {1e-6, 1e-2, 0.3}) {
      const ChargeSum a = d.at_gap(gap), b = r.at_gap(gap);
      EXPECT_NEAR(b.value / a.value, 1.0, 1e-12) << T << " " << gap;
      for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(b.by_class[k], a.by_class[k], 1e-11 * a.value);
    }
  }
}

TEST(ExactCharge, OddAndIncreasingInMu) {
  const ChargeEngine e(CavityGeometry(1, 3, 5), 1.0, 2.0);
  EXPECT_NEAR(e.at_mu(0.4).value, -e.at_mu(-0.4).value, 1e-12 * e.at_mu(0.4).value);
  EXPECT_EQ(e.at_mu(0.0).value, 0.0);
  double prev = -1e300;
  for (double mu = -0.99; mu < 1.0; mu += 0.05) {
    const double q = e.at_mu(mu).value;
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(ExactCharge, GapAboveE0UsesAntisymmetry) {
  const ChargeEngine e(CavityGeometry(1, 3, 5), 1.0, 2.0);
  EXPECT_NEAR(e.at_gap(1.5).value, e.at_mu(-0.5).value, 1e-12 * std::abs(e.at_mu(0.5).value));
}

TEST(ExactCharge, Validation) {
  EXPECT_THROW(ChargeEngine(CavityGeometry(1, 2, 3), 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ChargeEngine(CavityGeometry(1, 2, 3), 1.0, -1.0), std::invalid_argument);
  ChargeOptions o;
  o.cutoff = 10;
  EXPECT_THROW(ChargeEngine(CavityGeometry(1, 2, 3), 1.0, 1.0, o), std::invalid_argument);
  ChargeOptions r;
  r.method = ChargeMethod::Resummed;
  EXPECT_THROW(ChargeEngine(CavityGeometry(1, 2, 3, Boundary::Dirichlet), 1.0, 1.0, r), std::invalid_argument);
  ChargeOptions tiny;
  tiny.method = ChargeMethod::Direct;
  tiny.mode_budget = 10;
  EXPECT_THROW(ChargeEngine(CavityGeometry(10, 20, 30), 1.0, 5.0, tiny), BudgetExceeded);
  const ChargeEngine e(CavityGeometry(1, 2, 3), 1.0, 1.0);
  EXPECT_THROW(e.at_mu(1.0), std::domain_error);
}

TEST(SolveMu, RoundTrip) {
  const CavityGeometry g(2, 100, 600);
  for (double T : {0.02, 0.2, 0.7, 1.5}) {
    const MuSolution s = solve_mu(T, 4000.0, g, 0.5);
    EXPECT_LT(s.residual, 1e-12);
    const ChargeEngine e(g, 0.5, T);
    EXPECT_NEAR(e.at_gap(s.gap).value / 4000.0, 1.0, 1e-12);
    EXPECT_LT(s.mu, 0.5);
    EXPECT_NEAR(s.mu, 0.5 - s.gap, 1e-15);
  }
}

TEST(SolveMu, MuDecreasesWithTemperature) {
  const CavityGeometry g(2, 100, 600);
  double prev = 1.0;
  for (double T = 0.05; T < 1.2; T += 0.1) {
    const double mu = solve_mu(T, 4000.0, g, 0.5).mu;
    EXPECT_LT(mu, prev);
    prev = mu;
  }
  // Deep in the condensed phase the ground mode holds at most Q, so gap >= T / Q.
  const double gap = solve_mu(0.01, 4000.0, g, 0.5).gap;
  EXPECT_GT(gap, 0.01 / 4000.0);
  EXPECT_LT(gap, 10.0 * 0.01 / 4000.0);
}

TEST(PartitionedCharge, FractionsSumToOne) {
  const PartitionedCharge p = partitioned_charge(0.5, 4000.0, CavityGeometry(2, 100, 600), 0.5);
  double sum = 0.0;
  for (double q : p.Q) {
    EXPECT_GE(q, 0.0);
    sum += q;
  }
  EXPECT_NEAR(sum / p.Q_total, 1.0, 1e-12);
  EXPECT_EQ(p.engine, Engine::Exact);
}

TEST(Asymptotic, ExcitedChargeFormula) {
  const CavityGeometry g(2, 5, 9);
  const double T = 4.0, mu = 0.3, m = 0.5;
  const ChargeExpansion e = charge_coeffs(heat_kernel_coeffs(g), FieldParams{m, mu, 1.0, 1.0});
  const double mt2 = pi * pi / 81.0 + m * m - mu * mu;
  EXPECT_NEAR(asymptotic_Q_excited(T, mu, m, g), e.b2 * T * T + 0.5 * e.b32 * T * std::log(T * T / mt2), 1e-10);
}

TEST(Asymptotic, OneDimensionalClassLinearAtCriticalMu) {
  const CavityGeometry g(2, 100, 600);
  const double q = asymptotic_Q1(0.1, 0.5, 0.5, g, Scenario::ThreeStep);
  EXPECT_NEAR(asymptotic_Q1(0.2, 0.5, 0.5, g, Scenario::ThreeStep), 2.0 * q, 1e-12 * q);
  EXPECT_NEAR(q, 2.0 * 0.5 * 600.0 * 600.0 * 0.1 * std::log(2 * pi) / pi, 1e-9);
}

TEST(Asymptotic, TwoDimensionalClassSaturatesAtT2D) {
  const CavityGeometry g(2, 200, 200);
  const T2D r = t2d(8000.0, g, 0.5, Scenario::TwoD);
  EXPECT_NEAR(asymptotic_Q2(r.saturation_root.T, 0.5, 0.5, g, Scenario::TwoD) / 8000.0, 1.0, 1e-10);
}

TEST(Asymptotic, IsotropicScenarioRejected) {
  const CavityGeometry g(3, 3, 3);
  EXPECT_THROW(asymptotic_Q3(1.0, 1.0, 2.0, g, Scenario::Isotropic), std::invalid_argument);
  EXPECT_THROW(asymptotic_Q1(1.0, 1.0, 2.0, g, Scenario::Isotropic), std::invalid_argument);
}

TEST(Asymptotic, ExpansionTracksExactInLargeBox) {
  // gap * L >> 1 and T >> gap: the five-term series against the full mode sum.
  const CavityGeometry g(20, 26, 34);
  const double m = 1.0;
  for (double mu : {0.3, 0.6}) {
    const ChargeExpansion e = charge_coeffs(heat_kernel_coeffs(g), FieldParams{m, mu, 1.0, 1.0});
    for (double T : {4.0, 8.0}) {
      const double exact = exact_charge(ThermoState{T, mu, m, 0.0}, g).value;
      EXPECT_NEAR(e.value(T) / exact, 1.0, 2.5e-3 * 4.0 / T) << mu << " " << T;
    }
  }
}
