#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "radblow/errors.hpp"
#include "radblow/grid.hpp"

namespace radblow {

/// Sign of the self-consistent radial force. Gravity attracts, the
/// electrostatic force repels, plain Euler has none.
enum class Coupling : int { kGravitational = -1, kEuler = 0, kElectrostatic = 1 };

inline int sign_of(Coupling c) noexcept { return static_cast<int>(c); }

inline Coupling coupling_from_int(int delta) {
  switch (delta) {
    case -1: return Coupling::kGravitational;
    case 0: return Coupling::kEuler;
    case 1: return Coupling::kElectrostatic;
    default: throw InvalidArgument("delta must be one of -1, 0, +1");
  }
}

struct ModelConfig {
  double gamma = 1.4;
  Coupling delta = Coupling::kEuler;
  int dim_n = 3;
  double cfl = 0.2;
  double density_floor = 1e-14;
  double blowup_gradient_factor = 10.0;
  double t_max = 50.0;

  /// Throws InvalidArgument naming the offending field.
  void validate() const {
    if (!(gamma > 1.0)) throw InvalidArgument("gamma must exceed 1");
    if (delta != Coupling::kEuler) {
      if (gamma > 5.0 / 3.0 + 1e-15) {
        throw InvalidArgument("gamma must not exceed 5/3 when delta != 0");
      }
      if (dim_n != 3) throw InvalidArgument("dim_n must equal 3 when delta != 0");
    }
    if (dim_n < 2) throw InvalidArgument("dim_n must be at least 2");
    if (!(cfl > 0.0 && cfl < 1.0)) throw InvalidArgument("cfl must lie in (0, 1)");
    if (!(density_floor > 0.0)) throw InvalidArgument("density_floor must be positive");
    if (!(blowup_gradient_factor > 1.0)) {
      throw InvalidArgument("blowup_gradient_factor must exceed 1");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  }
};

/// Density and radial velocity sampled at cell centres.
struct FluidState {
  std::vector<double> rho;
  std::vector<double> v;
  double t = 0.0;

  std::size_t size() const noexcept { return rho.size(); }
};

inline FluidState vacuum_state(const RadialGrid& grid) {
  return FluidState{std::vector<double>(grid.n_cells, 0.0), std::vector<double>(grid.n_cells, 0.0), 0.0};
}

enum class Family { kEq27Base, kEq27SharpScaling, kEq27ElectroScaling, kTable };

inline std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::kEq27Base: return "eq27_base";
    case Family::kEq27SharpScaling: return "eq27_sharp_scaling";
    case Family::kEq27ElectroScaling: return "eq27_electro_scaling";
    case Family::kTable: return "table";
  }
  return "unknown";
}

inline Family family_from_string(std::string_view s) {
  if (s == "eq27_base") return Family::kEq27Base;
  if (s == "eq27_sharp_scaling") return Family::kEq27SharpScaling;
  if (s == "eq27_electro_scaling") return Family::kEq27ElectroScaling;
  if (s == "table") return Family::kTable;
  throw InvalidArgument("unknown initial-data family '" + std::string(s) + "'");
}

struct TableSample {
  double r = 0.0;
  double rho = 0.0;
  double v = 0.0;
};

struct InitialDataSpec {
  Family family = Family::kEq27Base;
  double eps = 1.0;
  std::vector<TableSample> table;
};

// ---------------------------------------------------------------------------
// Thermodynamic closures, p = rho^gamma.

inline double sound_speed(double rho, double gamma) {
  if (rho < 0.0) throw InvalidArgument("sound_speed: negative density");
  return std::sqrt(gamma * std::pow(rho, gamma - 1.0));
}

/// zeta = 2 s(rho) / (gamma - 1); linear in epsilon under the sharp scaling.
inline double zeta_of_rho(double rho, double gamma) {
  if (!(gamma > 1.0)) throw InvalidArgument("zeta_of_rho: gamma must exceed 1");
  return 2.0 / (gamma - 1.0) * sound_speed(rho, gamma);
}

// ---------------------------------------------------------------------------
// Initial data.

/// (r^2 e^{-r^2}, -r^3 e^{-r^2}): the radial profile of rho = |x|^2 e^{-|x|^2},
/// u = -x |x|^2 e^{-|x|^2}.
inline std::pair<double, double> profile_eq27(double r) {
  const double g = std::exp(-r * r);
  return {r * r * g, -r * r * r * g};
}

/// Multipliers (density, velocity) applied to profile_eq27 for each family.
inline std::pair<double, double> family_scales(const InitialDataSpec& spec, double gamma) {
  switch (spec.family) {
    case Family::kEq27Base: return {1.0, 1.0};
    case Family::kEq27SharpScaling: return {std::pow(spec.eps, 2.0 / (gamma - 1.0)), spec.eps};
    case Family::kEq27ElectroScaling: return {spec.eps, 1.0 / spec.eps};
    case Family::kTable: return {1.0, 1.0};
  }
  return {1.0, 1.0};
}

namespace detail {

inline void validate_table(const std::vector<TableSample>& table) {
  if (table.size() < 2) throw InvalidArgument("table family needs at least two samples");
  if (table.front().r != 0.0) throw InvalidArgument("table must start at r = 0");
  if (table.front().rho != 0.0) {
    throw HypothesisViolation("table data violate rho(0) = 0");
  }
  if (table.front().v != 0.0) {
    throw HypothesisViolation("table data violate v(0) = 0");
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& s = table[k];
    if (!std::isfinite(s.r) || !std::isfinite(s.rho) || !std::isfinite(s.v)) {
      throw InvalidArgument("table sample " + std::to_string(k) + " is not finite");
    }
    if (s.rho < 0.0) throw InvalidArgument("table sample " + std::to_string(k) + " has negative density");
    if (k > 0 && !(s.r > table[k - 1].r)) {
      throw InvalidArgument("table radii must be strictly increasing");
    }
  }
}

// Piecewise-linear interpolation; constant extension beyond the last sample.
inline std::pair<double, double> interpolate_table(const std::vector<TableSample>& table, double r) {
  if (r >= table.back().r) return {table.back().rho, table.back().v};
  std::size_t lo = 0;
  std::size_t hi = table.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (table[mid].r <= r) lo = mid; else hi = mid;
  }
  const auto& a = table[lo];
  const auto& b = table[hi];
  const double w = (r - a.r) / (b.r - a.r);
  return {a.rho + w * (b.rho - a.rho), a.v + w * (b.v - a.v)};
}

}  // namespace detail

inline FluidState init_state(const InitialDataSpec& spec, const ModelConfig& cfg, const RadialGrid& grid) {
  if (!(spec.eps > 0.0) || !std::isfinite(spec.eps)) throw InvalidArgument("eps must be positive");
  FluidState s = vacuum_state(grid);
  if (spec.family == Family::kTable) {
    detail::validate_table(spec.table);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      std::tie(s.rho[i], s.v[i]) = detail::interpolate_table(spec.table, grid.centers[i]);
    }
    return s;
  }
  const auto [rho_scale, v_scale] = family_scales(spec, cfg.gamma);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const auto [rho, v] = profile_eq27(grid.centers[i]);
    s.rho[i] = rho_scale * rho;
    s.v[i] = v_scale * v;
  }
  return s;
}

}  // namespace radblow
