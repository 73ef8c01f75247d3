#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "radblow/errors.hpp"

namespace radblow {

/// Uniform cell-centred discretisation of (0, r_max].
///
/// Cell i covers [edges[i], edges[i+1]] with centre (i + 1/2) dr. All radial
/// integrals in the library use the midpoint rule on these centres.
struct RadialGrid {
  double r_max = 0.0;
  std::size_t n_cells = 0;
  double dr = 0.0;
  std::vector<double> centers;
  std::vector<double> edges;

  std::size_t size() const noexcept { return n_cells; }
};

/// Smallest grid the solver and the Sobolev surrogate accept; third
/// differences need two cells of stencil on each side.
inline constexpr std::size_t kMinSolverCells = 8;

inline RadialGrid make_grid(double r_max, std::size_t n_cells) {
  if (!(r_max > 0.0)) {
    throw InvalidArgument("make_grid: r_max must be positive");
  }
  if (n_cells == 0) {
    throw InvalidArgument("make_grid: n_cells must be at least 1");
  }
  RadialGrid g;
  g.r_max = r_max;
  g.n_cells = n_cells;
  g.dr = r_max / static_cast<double>(n_cells);
  g.centers.resize(n_cells);
  g.edges.resize(n_cells + 1);
  for (std::size_t i = 0; i < n_cells; ++i) {
    g.centers[i] = (static_cast<double>(i) + 0.5) * g.dr;
    g.edges[i] = static_cast<double>(i) * g.dr;
  }
  g.edges[n_cells] = r_max;
  return g;
}

}  // namespace radblow
