#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "radblow/theorems.hpp"

namespace radblow {
namespace {

ModelConfig make_config(Coupling delta, double gamma) {
  ModelConfig c;
  c.gamma = gamma;
  c.delta = delta;
  return c;
}

const HypothesisCheck* find_check(const HypothesisReport& r, const std::string& name) {
  for (const auto& c : r.checks) if (c.name == name) return &c;
  return nullptr;
}

TEST(TheoremIds, Strings) {
  EXPECT_EQ(to_string(theorem_for(Coupling::kEuler)), "T1_euler");
  EXPECT_EQ(to_string(theorem_for(Coupling::kGravitational)), "T2_gravity");
  EXPECT_EQ(to_string(theorem_for(Coupling::kElectrostatic)), "T3_electro");
  EXPECT_EQ(to_string(TheoremId::kT4Sharp), "T4_sharp");
  EXPECT_EQ(to_string(TheoremId::kT5SharpGravity), "T5_sharp_gravity");
}

TEST(Hypotheses, Eq27PassesForAnyEps) {
  const auto g = make_grid(20.0, 2048);
  const auto c = make_config(Coupling::kEuler, 1.4);
  for (double eps : {0.01, 0.1, 1.0, 3.0}) {
    const auto s = init_state({Family::kEq27SharpScaling, eps, {}}, c, g);
    const auto rep = check_hypotheses(s, g, c);
    EXPECT_TRUE(rep.ok()) << eps;
    EXPECT_GT(rep.F0, 0.0);
    EXPECT_FALSE(rep.condition.has_value());
  }
}

TEST(Hypotheses, OutwardVelocityFailsF0) {
  const auto g = make_grid(20.0, 256);
  const auto c = make_config(Coupling::kEuler, 1.4);
  auto s = init_state({Family::kEq27Base, 1.0, {}}, c, g);
  for (auto& v : s.v) v = std::abs(v);
  const auto rep = check_hypotheses(s, g, c);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(find_check(rep, "F0_positive")->ok);
  EXPECT_TRUE(find_check(rep, "rho0_center_zero")->ok);
}

TEST(Hypotheses, CentralDensityFails) {
  const auto g = make_grid(20.0, 256);
  const auto c = make_config(Coupling::kEuler, 1.4);
  auto s = init_state({Family::kEq27Base, 1.0, {}}, c, g);
  s.rho[0] = 0.3;
  EXPECT_FALSE(find_check(check_hypotheses(s, g, c), "rho0_center_zero")->ok);
}

TEST(Hypotheses, ElectrostaticWindow) {
  const auto g = make_grid(20.0, 256);
  const auto c = make_config(Coupling::kElectrostatic, 1.4);
  const auto s = init_state({Family::kEq27ElectroScaling, 0.01, {}}, c, g);
  const auto rep = check_hypotheses(s, g, c, 0.25);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(find_check(rep, "gamma_sigma_window")->ok);
  EXPECT_FALSE(find_check(rep, "condition20")->ok);
}

TEST(Hypotheses, ElectrostaticConditionHolds) {
  const auto g = make_grid(20.0, 2048);
  const auto c = make_config(Coupling::kElectrostatic, 5.0 / 3.0);
  const auto s = init_state({Family::kEq27ElectroScaling, 0.01, {}}, c, g);
  const auto rep = check_hypotheses(s, g, c, 0.25);
  EXPECT_TRUE(rep.ok());
  ASSERT_TRUE(rep.condition.has_value());
  EXPECT_GT(rep.condition->lhs / rep.condition->rhs, 1.2);
}

TEST(Hypotheses, ConditionMonotoneInEps) {
  const auto g = make_grid(20.0, 1024);
  const auto c = make_config(Coupling::kElectrostatic, 5.0 / 3.0);
  bool seen_hold = false;
  for (double eps : {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005}) {
    const auto s = init_state({Family::kEq27ElectroScaling, eps, {}}, c, g);
    const bool holds = check_hypotheses(s, g, c).ok();
    if (seen_hold) {
      EXPECT_TRUE(holds) << eps;
    }
    seen_hold = seen_hold || holds;
  }
  EXPECT_TRUE(seen_hold);
}

TEST(Lifespan, Values) {
  EXPECT_EQ(lifespan_upper(Coupling::kEuler, 2.0), 1.0);
  EXPECT_EQ(lifespan_upper(Coupling::kGravitational, 2.0), 1.0);
  EXPECT_EQ(lifespan_upper(Coupling::kElectrostatic, 2.0), 2.0);
  EXPECT_NEAR(lifespan_upper(Coupling::kEuler, 0.147563809330583838), 13.5534587313305635, 1e-12);
  EXPECT_THROW(lifespan_upper(Coupling::kEuler, 0.0), HypothesisViolation);
  EXPECT_THROW(lifespan_upper(Coupling::kEuler, -1.0), HypothesisViolation);
}

TEST(Lifespan, HomogeneousOfDegreeMinusOne) {
  for (double f0 : {0.1, 0.37, 2.0}) {
    for (double lam : {0.5, 3.0}) {
      EXPECT_DOUBLE_EQ(lifespan_upper(Coupling::kEuler, lam * f0), lifespan_upper(Coupling::kEuler, f0) / lam);
    }
  }
}

TEST(Envelope, Values) {
  EXPECT_EQ(riccati_envelope(0.7, 0.0, 0.5), 0.7);
  EXPECT_EQ(riccati_envelope(1.0, 1.0, 0.5), 2.0);
  EXPECT_GT(riccati_envelope(1.0, 1.999999, 0.5), 1e5);
  EXPECT_THROW(riccati_envelope(1.0, 2.0, 0.5), DomainError);
  EXPECT_THROW(riccati_envelope(1.0, 5.0, 0.25), DomainError);
  double prev = 0.0;
  for (double t = 0.0; t < 3.9; t += 0.1) {
    const double e = riccati_envelope(1.0, t, 0.25);
    EXPECT_GT(e, prev);
    prev = e;
  }
}

DiagnosticSeries riccati_series(double F0, double rate, double t_end, std::size_t n) {
  DiagnosticSeries s;
  for (std::size_t k = 0; k < n; ++k) {
    DiagnosticRecord r;
    r.t = t_end * static_cast<double>(k) / static_cast<double>(n - 1);
    r.F = F0 / (1.0 - rate * F0 * r.t);
    r.Q = rate * r.F * r.F;
    s.push_back(r);
  }
  return s;
}

TEST(Monitor, VacuumResidualsAreZero) {
  DiagnosticSeries s(5);
  for (std::size_t k = 0; k < s.size(); ++k) s[k].t = 0.1 * static_cast<double>(k);
  const auto m = monitor_riccati(s, Coupling::kEuler);
  for (double r : m.residual) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(m.min_residual, 0.0);
  EXPECT_THROW(monitor_riccati(DiagnosticSeries(2), Coupling::kEuler), InvalidArgument);
}

TEST(Monitor, ExactRiccatiTrajectory) {
  const auto s = riccati_series(1.0, 0.5, 1.0, 2001);
  const auto m = monitor_riccati(s, Coupling::kEuler);
  for (std::size_t k = 1; k + 1 < s.size(); ++k) EXPECT_GT(m.residual[k], -1e-5);
  // One-sided differences at the ends are first order.
  EXPECT_GT(m.min_residual, -2e-3);
  EXPECT_LT(monitor_envelope(s, 1.0, 0.5), 1e-14);
}

TEST(Monitor, ElectrostaticShift) {
  const auto s = riccati_series(1.0, 0.5, 1.0, 101);
  const auto a = monitor_riccati(s, Coupling::kEuler, 3.0);
  const auto b = monitor_riccati(s, Coupling::kElectrostatic, 3.0);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_DOUBLE_EQ(b.residual[k], a.residual[k] + 3.0);
}

TEST(Monitor, EnvelopeZeroWhenAbove) {
  auto s = riccati_series(1.0, 0.5, 1.5, 300);
  for (auto& r : s) r.F *= 1.0 + r.t;
  EXPECT_EQ(monitor_envelope(s, 1.0, 0.5), 0.0);
}

TEST(Monitor, EnvelopeDetectsViolation) {
  auto s = riccati_series(1.0, 0.5, 1.0, 11);
  s[5].F -= 0.25;
  EXPECT_NEAR(monitor_envelope(s, 1.0, 0.5), 0.25, 1e-12);
}

TEST(Monitor, TimeDerivativeExactOnQuadratics) {
  DiagnosticSeries s;
  for (double t : {0.0, 0.1, 0.15, 0.4, 0.45, 1.0}) {
    DiagnosticRecord r;
    r.t = t;
    r.F = 3.0 * t * t - t + 2.0;
    s.push_back(r);
  }
  const auto d = time_derivative_F(s);
  for (std::size_t k = 1; k + 1 < s.size(); ++k) EXPECT_NEAR(d[k], 6.0 * s[k].t - 1.0, 1e-12);
}

TEST(WellPosed, Values) {
  EXPECT_EQ(wellposed_lower(Coupling::kEuler, 4.0, 1.4), 0.5);
  EXPECT_EQ(wellposed_lower(Coupling::kGravitational, 1.0, 5.0 / 3.0), 1.0);
  EXPECT_THROW(wellposed_lower(Coupling::kEuler, 0.0, 1.4), InvalidArgument);
  for (double eps : {0.05, 0.1, 0.2}) {
    EXPECT_NEAR(wellposed_lower(Coupling::kEuler, 7.0 * eps * eps, 1.4) * eps, 1.0 / std::sqrt(7.0), 1e-14);
  }
}

TEST(Verify, EulerRunOnEq27) {
  const auto g = make_grid(20.0, 1024);
  const auto c = make_config(Coupling::kEuler, 1.4);
  const InitialDataSpec spec{Family::kEq27Base, 1.0, {}};
  const auto res = run(c, spec, g);
  const auto v = verify_run(res, init_state(spec, c, g), g);
  EXPECT_EQ(v.theorem_id, TheoremId::kT1Euler);
  EXPECT_TRUE(v.hypotheses_ok());
  ASSERT_TRUE(v.predicted_upper.has_value());
  EXPECT_NEAR(*v.predicted_upper, 13.5534587313305635, 1e-4);
  ASSERT_TRUE(v.observed_T_num.has_value());
  EXPECT_TRUE(v.bound_respected());
  ASSERT_TRUE(v.min_riccati_residual.has_value());
  ASSERT_TRUE(v.identity_defect.has_value());
  EXPECT_GE(*v.min_riccati_residual, -*v.identity_defect);
  EXPECT_LE(*v.envelope_violation, *v.identity_defect);
}

TEST(Verify, FailedHypothesesLeaveNoBound) {
  const auto g = make_grid(20.0, 256);
  const auto c = make_config(Coupling::kElectrostatic, 1.4);
  const InitialDataSpec spec{Family::kEq27Base, 1.0, {}};
  RunResult fake;
  fake.config = c;
  const auto v = verify_run(fake, init_state(spec, c, g), g);
  EXPECT_FALSE(v.hypotheses_ok());
  EXPECT_FALSE(v.predicted_upper.has_value());
}

TEST(Verify, GravityRun) {
  const auto g = make_grid(20.0, 1024);
  const InitialDataSpec spec{Family::kEq27Base, 1.0, {}};
  const auto c = make_config(Coupling::kGravitational, 1.4);
  const auto res = run(c, spec, g);
  for (const auto& r : res.series) EXPECT_GE(r.R, 0.0);
  const auto v = verify_run(res, init_state(spec, c, g), g);
  EXPECT_EQ(v.theorem_id, TheoremId::kT2Gravity);
  EXPECT_TRUE(v.bound_respected());
  EXPECT_GE(*v.min_riccati_residual, -*v.identity_defect);
}

}  // namespace
}  // namespace radblow
