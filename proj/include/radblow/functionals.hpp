#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "radblow/errors.hpp"
#include "radblow/grid.hpp"
#include "radblow/model.hpp"

// Averaged quantities along a radial state. Every integral is the midpoint
// rule on the grid centres, truncated at r_max. F and Q share the weights
// e^{-r_i} dr, and those weights sum to (dr/2)/sinh(dr/2) * (1 - e^{-r_max}) < 1,
// so F^2 <= 2Q is an exact finite-sum inequality.

namespace radblow {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Area of the unit sphere in R^n (4 pi for n = 3).
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

inline double mass(const FluidState& s, const RadialGrid& g, int dim_n = 3) {
  const double wn = dim_n == 3 ? kFourPi : unit_sphere_area(dim_n);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    sum += s.rho[i] * (dim_n == 3 ? r * r : std::pow(r, dim_n - 1));
  }
  return wn * sum * g.dr;
}

/// m(r_i) = 4 pi sum_{j <= i} rho_j r_j^2 dr. Nondecreasing for rho >= 0.
inline std::vector<double> cumulative_mass(const FluidState& s, const RadialGrid& g) {
  std::vector<double> m(g.n_cells);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    acc += s.rho[i] * r * r;
    m[i] = kFourPi * acc * g.dr;
  }
  return m;
}

inline double kernel_K(double l, double r) {
  if (!(l > 0.0) || !(r > 0.0)) throw InvalidArgument("kernel_K: arguments must be positive");
  return 1.0 / std::max(l, r);
}

struct EnergyParts {
  double kinetic = 0.0;
  double internal = 0.0;
  /// Includes the sign delta; nonnegative for the electrostatic case.
  double potential = 0.0;

  double total() const noexcept { return kinetic + internal + potential; }
};

namespace detail {

inline EnergyParts local_energy(const FluidState& s, const RadialGrid& g, double gamma, int dim_n) {
  const double wn = dim_n == 3 ? kFourPi : unit_sphere_area(dim_n);
  EnergyParts e;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    const double vol = (dim_n == 3 ? r * r : std::pow(r, dim_n - 1)) * g.dr;
    e.kinetic += 0.5 * s.rho[i] * s.v[i] * s.v[i] * vol;
    e.internal += std::pow(s.rho[i], gamma) / (gamma - 1.0) * vol;
  }
  e.kinetic *= wn;
  e.internal *= wn;
  return e;
}

}  // namespace detail

/// sum_i sum_j K(r_i, r_j) rho_i rho_j r_i^2 r_j^2 dr^2 in O(N), using
/// K = 1/max(l, r): an inner prefix sum for j <= i and a suffix sum of
/// rho_j r_j dr for j > i.
inline double coulomb_double_sum(const FluidState& s, const RadialGrid& g) {
  const std::size_t n = g.n_cells;
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const double r = g.centers[k];
    suffix[k] = suffix[k + 1] + s.rho[k] * r * g.dr;
  }
  double prefix = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.centers[i];
    const double wi = s.rho[i] * r * r * g.dr;
    prefix += wi;
    total += wi * (prefix / r + suffix[i + 1]);
  }
  return total;
}

/// O(N^2) reference for coulomb_double_sum.
inline double coulomb_double_sum_direct(const FluidState& s, const RadialGrid& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double ri = g.centers[i];
    double row = 0.0;
    for (std::size_t j = 0; j < g.n_cells; ++j) {
      const double rj = g.centers[j];
      row += kernel_K(rj, ri) * s.rho[j] * rj * rj;
    }
    total += s.rho[i] * ri * ri * row;
  }
  return total * g.dr * g.dr;
}

inline EnergyParts physical_energy_parts(const FluidState& s, const RadialGrid& g, double gamma,
                                         Coupling delta, int dim_n = 3) {
  EnergyParts e = detail::local_energy(s, g, gamma, dim_n);
  if (delta != Coupling::kEuler) {
    constexpr double k8Pi2 = 8.0 * std::numbers::pi * std::numbers::pi;
    e.potential = sign_of(delta) * k8Pi2 * coulomb_double_sum(s, g);
  }
  return e;
}

inline double physical_energy(const FluidState& s, const RadialGrid& g, double gamma, Coupling delta,
                              int dim_n = 3) {
  return physical_energy_parts(s, g, gamma, delta, dim_n).total();
}

inline double physical_energy_direct(const FluidState& s, const RadialGrid& g, double gamma,
                                     Coupling delta) {
  EnergyParts e = detail::local_energy(s, g, gamma, 3);
  if (delta != Coupling::kEuler) {
    constexpr double k8Pi2 = 8.0 * std::numbers::pi * std::numbers::pi;
    e.potential = sign_of(delta) * k8Pi2 * coulomb_double_sum_direct(s, g);
  }
  return e.total();
}

/// Weighted total radial velocity -int v e^{-r} dr.
inline double F_functional(const FluidState& s, const RadialGrid& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) sum += s.v[i] * std::exp(-g.centers[i]);
  return -sum * g.dr;
}

/// Weighted kinetic energy (1/2) int v^2 e^{-r} dr.
inline double Q_functional(const FluidState& s, const RadialGrid& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) sum += s.v[i] * s.v[i] * std::exp(-g.centers[i]);
  return 0.5 * sum * g.dr;
}

/// gamma/(gamma-1) int rho^{gamma-1} e^{-r} dr: the pressure contribution to
/// dF/dt after integrating by parts (the term dropped in the Riccati bound).
inline double pressure_term(const FluidState& s, const RadialGrid& g, double gamma) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    sum += std::pow(s.rho[i], gamma - 1.0) * std::exp(-g.centers[i]);
  }
  return gamma / (gamma - 1.0) * sum * g.dr;
}

/// Electrostatic correction 4 pi int r^{-2} (int_0^r rho l^2 dl) e^{-r} dr.
inline double R_functional(const FluidState& s, const RadialGrid& g) {
  const auto m = cumulative_mass(s, g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    sum += m[i] / (r * r) * std::exp(-r);
  }
  return sum * g.dr;
}

/// O(N^2) reference for R_functional.
inline double R_functional_direct(const FluidState& s, const RadialGrid& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    double inner = 0.0;
    for (std::size_t j = 0; j <= i; ++j) inner += s.rho[j] * g.centers[j] * g.centers[j];
    sum += kFourPi * inner * g.dr / (r * r) * std::exp(-r);
  }
  return sum * g.dr;
}

/// W = max |v_{i+1} - v_i| / dr over adjacent centres.
inline double max_gradient(const FluidState& s, const RadialGrid& g) {
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < g.n_cells; ++i) w = std::max(w, std::abs(s.v[i + 1] - s.v[i]));
  return w / g.dr;
}

struct BlowupConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

inline BlowupConstants constants_c1_c2(double sigma) {
  if (!(sigma > 0.0 && sigma < 0.5)) throw InvalidArgument("sigma must lie in (0, 1/2)");
  const double p = (3.0 - sigma) / (2.0 - sigma);
  const double c1 = (2.0 - sigma) / (3.0 - sigma) *
                    std::pow((3.0 - sigma) / (3.0 - 3.0 * sigma + sigma * sigma), p);
  const double c2 = kFourPi * std::exp(-1.0) * (1.0 + sigma) / (sigma * (3.0 - sigma));
  return {c1, c2};
}

/// Lower end of the admissible adiabatic-index window (3 - sigma)/(2 - sigma).
inline double electro_gamma_floor(double sigma) { return (3.0 - sigma) / (2.0 - sigma); }

struct Condition20 {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// F(0)^2 / 4 >= c1 (M(0) + (gamma - 1) E_1(0)) + c2.
inline Condition20 condition20(const FluidState& s0, const RadialGrid& g, double sigma, double gamma) {
  const auto c = constants_c1_c2(sigma);
  if (!(gamma > electro_gamma_floor(sigma) && gamma <= 5.0 / 3.0 + 1e-15)) {
    throw HypothesisViolation("gamma outside ((3 - sigma)/(2 - sigma), 5/3] for the given sigma");
  }
  const double F0 = F_functional(s0, g);
  const double M0 = mass(s0, g);
  const double E1 = physical_energy(s0, g, gamma, Coupling::kElectrostatic);
  Condition20 out;
  out.lhs = 0.25 * F0 * F0;
  out.rhs = c.c1 * (M0 + (gamma - 1.0) * E1) + c.c2;
  out.holds = out.lhs >= out.rhs;
  return out;
}

/// Radial surrogate of the third-order energy:
/// sum_{k=0..3} int (|d^k zeta|^2 + |d^k v|^2) r^2 dr with central
/// differences. Ghost cells mirror zeta evenly and v oddly at the centre and
/// extend both constantly past r_max.
inline double sobolev_surrogate_energy(const FluidState& s, const RadialGrid& g, double gamma) {
  const std::size_t n = g.n_cells;
  if (n < kMinSolverCells) throw InvalidArgument("sobolev_surrogate_energy: need at least 8 cells");
  constexpr std::size_t kGhost = 2;
  std::vector<double> z(n + 2 * kGhost);
  std::vector<double> u(n + 2 * kGhost);
  for (std::size_t i = 0; i < n; ++i) {
    z[i + kGhost] = zeta_of_rho(s.rho[i], gamma);
    u[i + kGhost] = s.v[i];
  }
  for (std::size_t k = 0; k < kGhost; ++k) {
    z[kGhost - 1 - k] = z[kGhost + k];
    u[kGhost - 1 - k] = -u[kGhost + k];
    z[n + kGhost + k] = z[n + kGhost - 1];
    u[n + kGhost + k] = u[n + kGhost - 1];
  }
  const double h = g.dr;
  const double h2 = h * h;
  const double h3 = h2 * h;
  auto derivs = [&](const std::vector<double>& f, std::size_t j) {
    const double d1 = (f[j + 1] - f[j - 1]) / (2.0 * h);
    const double d2 = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
    const double d3 = (f[j + 2] - 2.0 * f[j + 1] + 2.0 * f[j - 1] - f[j - 2]) / (2.0 * h3);
    return f[j] * f[j] + d1 * d1 + d2 * d2 + d3 * d3;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.centers[i];
    sum += (derivs(z, i + kGhost) + derivs(u, i + kGhost)) * r * r;
  }
  return sum * h;
}

/// One row of the diagnostic time series.
struct DiagnosticRecord {
  double t = 0.0;
  double M = 0.0;
  double E_delta = 0.0;
  double F = 0.0;
  double Q = 0.0;
  double R = 0.0;
  /// Pressure term gamma/(gamma-1) int rho^{gamma-1} e^{-r} dr.
  double P = 0.0;
  double W = 0.0;
  /// Mass that has left through r_max since t = 0.
  double outflow = 0.0;
  std::optional<double> E_sobolev;
};

using DiagnosticSeries = std::vector<DiagnosticRecord>;

inline DiagnosticRecord evaluate_record(const FluidState& s, const RadialGrid& g, const ModelConfig& cfg,
                                        double outflow = 0.0) {
  DiagnosticRecord rec;
  rec.t = s.t;
  rec.M = mass(s, g, cfg.dim_n);
  rec.E_delta = physical_energy(s, g, cfg.gamma, cfg.delta, cfg.dim_n);
  rec.F = F_functional(s, g);
  rec.Q = Q_functional(s, g);
  rec.R = R_functional(s, g);
  rec.P = pressure_term(s, g, cfg.gamma);
  rec.W = max_gradient(s, g);
  rec.outflow = outflow;
  return rec;
}

}  // namespace radblow
