#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "radblow/grid.hpp"
#include "radblow/model.hpp"

namespace radblow {
namespace {

TEST(RadialGrid, FourCells) {
  const auto g = make_grid(20.0, 4);
  EXPECT_EQ(g.dr, 5.0);
  ASSERT_EQ(g.centers.size(), 4u);
  EXPECT_EQ(g.centers[0], 2.5);
  EXPECT_EQ(g.centers[1], 7.5);
  EXPECT_EQ(g.centers[2], 12.5);
  EXPECT_EQ(g.centers[3], 17.5);
}

TEST(RadialGrid, SingleCell) {
  const auto g = make_grid(1.0, 1);
  ASSERT_EQ(g.centers.size(), 1u);
  EXPECT_EQ(g.centers[0], 0.5);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], 0.0);
  EXPECT_EQ(g.edges[1], 1.0);
}

TEST(RadialGrid, DyadicSpacingIsExact) {
  const auto g = make_grid(20.0, 4096);
  EXPECT_EQ(g.dr, 0.0048828125);
  EXPECT_EQ(g.edges.front(), 0.0);
  EXPECT_EQ(g.edges.back(), 20.0);
  for (std::size_t i = 1; i < g.n_cells; ++i) ASSERT_GT(g.centers[i], g.centers[i - 1]);
  EXPECT_GT(g.centers.front(), 0.0);
}

TEST(RadialGrid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(0.0, 16), InvalidArgument);
  EXPECT_THROW(make_grid(-1.0, 16), InvalidArgument);
  EXPECT_THROW(make_grid(1.0, 0), InvalidArgument);
}

TEST(Profile, Eq27Values) {
  auto [rho0, v0] = profile_eq27(0.0);
  EXPECT_EQ(rho0, 0.0);
  EXPECT_EQ(v0, 0.0);
  auto [rho1, v1] = profile_eq27(1.0);
  EXPECT_NEAR(rho1, 0.367879441171442, 1e-15);
  EXPECT_NEAR(v1, -0.367879441171442, 1e-15);
  auto [rho_far, v_far] = profile_eq27(30.0);
  EXPECT_LT(rho_far, 1e-300);
  EXPECT_LE(std::abs(v_far), 1e-300);
}

TEST(Closures, SoundSpeed) {
  EXPECT_EQ(sound_speed(0.0, 1.4), 0.0);
  EXPECT_NEAR(sound_speed(1.0, 1.4), 1.18321595661992, 1e-13);
  EXPECT_NEAR(sound_speed(4.0, 5.0 / 3.0), 2.04932594600832, 1e-13);
  EXPECT_THROW(sound_speed(-1e-3, 1.4), InvalidArgument);
}

TEST(Closures, Zeta) {
  EXPECT_EQ(zeta_of_rho(0.0, 5.0 / 3.0), 0.0);
  EXPECT_NEAR(zeta_of_rho(1.0, 5.0 / 3.0), 3.87298334620742, 1e-13);
  EXPECT_THROW(zeta_of_rho(1.0, 1.0), InvalidArgument);
  // rho -> eps^{2/(gamma-1)} rho gives zeta -> eps zeta.
  const double gamma = 1.4, eps = 0.3, rho = 0.7;
  EXPECT_NEAR(zeta_of_rho(std::pow(eps, 2.0 / (gamma - 1.0)) * rho, gamma), eps * zeta_of_rho(rho, gamma), 1e-14);
}

TEST(Closures, ZetaIsMonotone) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> gam(1.01, 3.0);
  for (int k = 0; k < 500; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double g = gam(rng);
    EXPECT_LE(zeta_of_rho(a, g), zeta_of_rho(b, g));
  }
}

ModelConfig config(double gamma) {
  ModelConfig c;
  c.gamma = gamma;
  return c;
}

TEST(InitState, SharpScalingAtUnitEpsIsProfile) {
  const auto g = make_grid(20.0, 256);
  const auto s = init_state({Family::kEq27SharpScaling, 1.0, {}}, config(1.3), g);
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const auto [rho, v] = profile_eq27(g.centers[i]);
    ASSERT_EQ(s.rho[i], rho);
    ASSERT_EQ(s.v[i], v);
  }
  EXPECT_EQ(s.t, 0.0);
}

TEST(InitState, SharpScalingExponents) {
  const auto g = make_grid(20.0, 256);
  const auto base = init_state({Family::kEq27Base, 1.0, {}}, config(5.0 / 3.0), g);
  const auto s = init_state({Family::kEq27SharpScaling, 0.1, {}}, config(5.0 / 3.0), g);
  for (std::size_t i = 0; i < g.n_cells; i += 17) {
    EXPECT_NEAR(s.rho[i], 1e-3 * base.rho[i], 1e-12 * base.rho[i]);
    EXPECT_NEAR(s.v[i], 0.1 * base.v[i], 1e-15 * std::abs(base.v[i]));
  }
}

TEST(InitState, ElectroScaling) {
  const auto g = make_grid(20.0, 256);
  const auto base = init_state({Family::kEq27Base, 1.0, {}}, config(5.0 / 3.0), g);
  const auto s = init_state({Family::kEq27ElectroScaling, 0.01, {}}, config(5.0 / 3.0), g);
  for (std::size_t i = 0; i < g.n_cells; i += 13) {
    EXPECT_DOUBLE_EQ(s.rho[i], 0.01 * base.rho[i]);
    EXPECT_DOUBLE_EQ(s.v[i], 100.0 * base.v[i]);
  }
}

TEST(InitState, SharpScalingIsHomogeneous) {
  const auto g = make_grid(20.0, 128);
  for (double gamma : {1.2, 1.4, 5.0 / 3.0}) {
    for (double eps : {0.05, 0.3, 1.7}) {
      const auto a = init_state({Family::kEq27SharpScaling, eps, {}}, config(gamma), g);
      const auto b = init_state({Family::kEq27SharpScaling, 2 * eps, {}}, config(gamma), g);
      const double k = std::pow(2.0, 2.0 / (gamma - 1.0));
      for (std::size_t i = 0; i < g.n_cells; ++i) {
        ASSERT_NEAR(b.v[i], 2.0 * a.v[i], 1e-15 * std::abs(b.v[i]));
        ASSERT_NEAR(b.rho[i], k * a.rho[i], 1e-13 * b.rho[i]);
      }
    }
  }
}

TEST(InitState, CenterCompatibility) {
  for (auto fam : {Family::kEq27Base, Family::kEq27SharpScaling, Family::kEq27ElectroScaling}) {
    for (double eps : {0.01, 0.5, 2.0}) {
      const auto g = make_grid(20.0, 512);
      const auto s = init_state({fam, eps, {}}, config(1.4), g);
      double max_grad = 0.0;
      for (std::size_t i = 0; i + 1 < g.n_cells; ++i) {
        ASSERT_GE(s.rho[i], 0.0);
        max_grad = std::max(max_grad, std::abs(s.v[i + 1] - s.v[i]) / g.dr);
      }
      const double v_center = 1.5 * s.v[0] - 0.5 * s.v[1];
      EXPECT_LT(std::abs(v_center), 10.0 * g.dr * max_grad);
    }
  }
}

TEST(InitState, TableFamily) {
  const auto g = make_grid(4.0, 16);
  InitialDataSpec spec{Family::kTable, 1.0, {{0.0, 0.0, 0.0}, {1.0, 2.0, -1.0}, {2.0, 0.0, 0.0}}};
  const auto s = init_state(spec, config(1.4), g);
  // centre 0.125 -> 1/8 of the way to the second sample
  EXPECT_DOUBLE_EQ(s.rho[0], 0.25);
  EXPECT_DOUBLE_EQ(s.v[0], -0.125);
  EXPECT_DOUBLE_EQ(s.rho[15], 0.0);
}

TEST(InitState, TableMustVanishAtCenter) {
  const auto g = make_grid(4.0, 16);
  InitialDataSpec bad{Family::kTable, 1.0, {{0.0, 0.5, 0.0}, {1.0, 1.0, 0.0}}};
  EXPECT_THROW(init_state(bad, config(1.4), g), HypothesisViolation);
  InitialDataSpec bad_v{Family::kTable, 1.0, {{0.0, 0.0, 0.2}, {1.0, 1.0, 0.0}}};
  EXPECT_THROW(init_state(bad_v, config(1.4), g), HypothesisViolation);
}

TEST(InitState, RejectsNonPositiveEps) {
  const auto g = make_grid(4.0, 16);
  EXPECT_THROW(init_state({Family::kEq27SharpScaling, 0.0, {}}, config(1.4), g), InvalidArgument);
}

TEST(ModelConfig, Validation) {
  ModelConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 0.9;
  try {
    c.validate();
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("gamma must exceed 1"), std::string::npos);
  }
  c = ModelConfig{};
  c.delta = Coupling::kGravitational;
  c.dim_n = 2;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.dim_n = 3;
  c.gamma = 1.8;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ModelConfig{};
  c.dim_n = 2;
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(coupling_from_int(2), InvalidArgument);
}

}  // namespace
}  // namespace radblow
