#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radblow/errors.hpp"
#include "radblow/functionals.hpp"
#include "radblow/grid.hpp"
#include "radblow/model.hpp"

// Finite-volume integrator for the radial system
//
//   d_t rho + r^{1-n} d_r (r^{n-1} rho v) = 0
//   d_t (rho v) + r^{1-n} d_r (r^{n-1} rho v^2) + d_r p = rho a,   a = delta m(r) / r^2
//
// on the cell-centred grid. Piecewise-linear minmod reconstruction of (rho, v),
// local Lax-Friedrichs interface fluxes, SSP-RK2 in time. Mass and advective
// momentum fluxes are weighted by the edge area r^{n-1}, cell volumes are
// r_i^{n-1} dr, so the discrete mass sum_i w_n rho_i r_i^{n-1} dr telescopes
// exactly to the flux through r_max. Pressure enters only through its face
// difference. The centre is a reflecting wall (rho even, v odd); r_max is a
// zero-gradient outflow boundary.

namespace radblow {

inline double pressure(double rho, double gamma) {
  if (rho < 0.0) throw InvalidArgument("pressure: negative density");
  return std::pow(rho, gamma);
}

/// a(r_i) = delta m(r_i) / r_i^2; identically zero for the Euler case.
inline std::vector<double> poisson_accel(const FluidState& s, const RadialGrid& g, Coupling delta) {
  std::vector<double> a(g.n_cells, 0.0);
  if (delta == Coupling::kEuler) return a;
  const auto m = cumulative_mass(s, g);
  const double sign = sign_of(delta);
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double r = g.centers[i];
    a[i] = sign * m[i] / (r * r);
  }
  return a;
}

/// Time derivatives of the conserved pair (rho, rho v) at cell centres, plus
/// the mass leaving through r_max per unit time.
struct Tendencies {
  std::vector<double> drho;
  std::vector<double> dmom;
  double outflow_rate = 0.0;
};

namespace detail {

inline double minmod(double a, double b) noexcept {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

inline double edge_area(double r, int n) noexcept {
  return n == 3 ? r * r : std::pow(r, n - 1);
}

inline void require_finite(const FluidState& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.rho[i]) || !std::isfinite(s.v[i])) {
      throw NumericalFailure("non-finite state at cell " + std::to_string(i) + ", t = " +
                             std::to_string(s.t));
    }
  }
}

}  // namespace detail

inline Tendencies rhs(const FluidState& s, const RadialGrid& g, const ModelConfig& cfg) {
  detail::require_finite(s);
  const std::size_t n = g.n_cells;
  const int dim = cfg.dim_n;
  const double h = g.dr;

  // Face-centred reconstructions: left state at face f comes from cell f-1,
  // right state from cell f. Faces run 0..n.
  std::vector<double> rho_l(n + 1), rho_r(n + 1), v_l(n + 1), v_r(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho_m = i == 0 ? s.rho[0] : s.rho[i - 1];
    const double rho_p = i + 1 == n ? s.rho[n - 1] : s.rho[i + 1];
    const double v_m = i == 0 ? -s.v[0] : s.v[i - 1];
    const double v_p = i + 1 == n ? s.v[n - 1] : s.v[i + 1];

    double drho = detail::minmod(s.rho[i] - rho_m, rho_p - s.rho[i]);
    // Scaling limiter: shrink the density slope until both face values are
    // nonnegative.
    if (drho != 0.0) {
      const double theta = std::min(1.0, s.rho[i] / (0.5 * std::abs(drho)));
      drho *= theta;
    }
    const double dv = detail::minmod(s.v[i] - v_m, v_p - s.v[i]);

    rho_r[i] = s.rho[i] - 0.5 * drho;
    rho_l[i + 1] = s.rho[i] + 0.5 * drho;
    v_r[i] = s.v[i] - 0.5 * dv;
    v_l[i + 1] = s.v[i] + 0.5 * dv;
  }
  rho_l[0] = rho_r[0];
  v_l[0] = -v_r[0];
  rho_r[n] = rho_l[n];
  v_r[n] = v_l[n];

  std::vector<double> mass_flux(n + 1), mom_flux(n + 1), p_face(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const double rl = rho_l[f], rr = rho_r[f], ul = v_l[f], ur = v_r[f];
    const double sl = std::abs(ul) + sound_speed(std::max(rl, cfg.density_floor), cfg.gamma);
    const double sr = std::abs(ur) + sound_speed(std::max(rr, cfg.density_floor), cfg.gamma);
    const double a = std::max(sl, sr);
    const double area = detail::edge_area(g.edges[f], dim);
    mass_flux[f] = area * (0.5 * (rl * ul + rr * ur) - 0.5 * a * (rr - rl));
    mom_flux[f] = area * (0.5 * (rl * ul * ul + rr * ur * ur) - 0.5 * a * (rr * ur - rl * ul));
    p_face[f] = 0.5 * (pressure(rl, cfg.gamma) + pressure(rr, cfg.gamma));
  }

  const auto accel = poisson_accel(s, g, cfg.delta);
  Tendencies t;
  t.drho.resize(n);
  t.dmom.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vol = detail::edge_area(g.centers[i], dim) * h;
    t.drho[i] = -(mass_flux[i + 1] - mass_flux[i]) / vol;
    t.dmom[i] = -(mom_flux[i + 1] - mom_flux[i]) / vol - (p_face[i + 1] - p_face[i]) / h +
                s.rho[i] * accel[i];
  }
  const double wn = dim == 3 ? kFourPi : unit_sphere_area(dim);
  t.outflow_rate = wn * mass_flux[n];
  return t;
}

/// dt = cfl dr / max_i (|v_i| + s(max(rho_i, floor))), capped at t_max / 10.
inline double cfl_dt(const FluidState& s, const RadialGrid& g, const ModelConfig& cfg) {
  double smax = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    smax = std::max(smax, std::abs(s.v[i]) + sound_speed(std::max(s.rho[i], cfg.density_floor), cfg.gamma));
  }
  const double cap = 0.1 * cfg.t_max;
  if (!(smax > 0.0)) return cap;
  return std::min(cfg.cfl * g.dr / smax, cap);
}

struct StepOutcome {
  FluidState state;
  /// Mass that crossed r_max during the step.
  double outflow = 0.0;
};

namespace detail {

inline FluidState euler_update(const FluidState& s, const Tendencies& k, double dt) {
  FluidState out;
  out.t = s.t + dt;
  out.rho.resize(s.size());
  out.v.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.rho[i] = s.rho[i] + dt * k.drho[i];
    const double mom = s.rho[i] * s.v[i] + dt * k.dmom[i];
    out.v[i] = out.rho[i] > 0.0 ? mom / out.rho[i] : 0.0;
  }
  return out;
}

inline void require_nonnegative(const FluidState& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.rho[i] < 0.0) {
      throw NumericalFailure("negative density " + std::to_string(s.rho[i]) + " at cell " +
                             std::to_string(i) + ", t = " + std::to_string(s.t));
    }
  }
}

}  // namespace detail

/// Two-stage SSP Runge-Kutta step; reports the mass that left through r_max.
inline StepOutcome advance(const FluidState& s, const RadialGrid& g, const ModelConfig& cfg, double dt) {
  const Tendencies k0 = rhs(s, g, cfg);
  FluidState s1 = detail::euler_update(s, k0, dt);
  detail::require_nonnegative(s1);
  const Tendencies k1 = rhs(s1, g, cfg);
  FluidState s2 = detail::euler_update(s1, k1, dt);

  StepOutcome out;
  out.state.t = s.t + dt;
  out.state.rho.resize(s.size());
  out.state.v.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = 0.5 * (s.rho[i] + s2.rho[i]);
    const double mom = 0.5 * (s.rho[i] * s.v[i] + s2.rho[i] * s2.v[i]);
    out.state.rho[i] = rho;
    out.state.v[i] = rho > 0.0 ? mom / rho : 0.0;
  }
  detail::require_nonnegative(out.state);
  detail::require_finite(out.state);
  out.outflow = 0.5 * dt * (k0.outflow_rate + k1.outflow_rate);
  return out;
}

inline FluidState step(const FluidState& s, const RadialGrid& g, const ModelConfig& cfg, double dt) {
  return advance(s, g, cfg, dt).state;
}

// ---------------------------------------------------------------------------
// Blow-up detection.

struct GradientSample {
  double t = 0.0;
  double W = 0.0;
};

struct BlowupReport {
  bool detected = false;
  std::optional<double> t_detect;
  /// Root of a least-squares line through 1/W(t).
  std::optional<double> t_extrapolated;
  std::string criterion;
  std::vector<GradientSample> max_gradient_history;
};

/// Flags the first sample with W >= factor * W(0) and extrapolates the
/// singular time from a linear fit of 1/W on the last quarter of the samples
/// preceding the crossing.
inline BlowupReport detect_blowup(const std::vector<GradientSample>& history, double factor) {
  if (history.empty()) throw InvalidArgument("detect_blowup: empty history");
  BlowupReport rep;
  rep.max_gradient_history = history;
  const double w0 = history.front().W;
  if (!(w0 > 0.0)) return rep;
  const double threshold = factor * w0;

  std::size_t hit = history.size();
  for (std::size_t k = 1; k < history.size(); ++k) {
    if (history[k].W >= threshold) {
      hit = k;
      break;
    }
  }
  if (hit == history.size()) return rep;

  rep.detected = true;
  rep.t_detect = history[hit].t;
  rep.criterion = "max_gradient";

  const std::size_t begin = std::min(3 * hit / 4, hit >= 2 ? hit - 2 : std::size_t{0});
  const std::size_t count = hit - begin;
  if (count < 2) return rep;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t k = begin; k < hit; ++k) {
    const double t = history[k].t;
    const double y = 1.0 / history[k].W;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double c = static_cast<double>(count);
  const double denom = c * stt - st * st;
  if (denom == 0.0) return rep;
  const double slope = (c * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / c;
  if (slope < 0.0) rep.t_extrapolated = -intercept / slope;
  return rep;
}

// ---------------------------------------------------------------------------
// Orchestration.

struct RunResult {
  ModelConfig config;
  InitialDataSpec spec;
  DiagnosticSeries series;
  BlowupReport blowup;
  /// max_k |M(t_k) + outflow(t_k) - M(0)| / M(0).
  double mass_drift = 0.0;
  double wall_time = 0.0;
  FluidState final_state;
};

/// Numerical failure during run(); carries the series recorded so far.
class RunFailure : public NumericalFailure {
 public:
  RunFailure(const std::string& what, DiagnosticSeries partial)
      : NumericalFailure(what), partial_(std::move(partial)) {}

  const DiagnosticSeries& partial() const noexcept { return partial_; }

 private:
  DiagnosticSeries partial_;
};

/// Called after every accepted step with the new state and its record.
using StepObserver = std::function<void(const FluidState&, const DiagnosticRecord&)>;

/// Halvings of dt tried before a failed step aborts the run.
inline constexpr int kMaxStepRetries = 4;

inline RunResult run(const ModelConfig& cfg, const InitialDataSpec& spec, const RadialGrid& grid,
                     const StepObserver& observer = {}) {
  cfg.validate();
  if (grid.n_cells < kMinSolverCells) throw InvalidArgument("run: grid needs at least 8 cells");
  const auto start = std::chrono::steady_clock::now();

  RunResult res;
  res.config = cfg;
  res.spec = spec;
  FluidState state = init_state(spec, cfg, grid);
  double outflow = 0.0;

  DiagnosticRecord rec0 = evaluate_record(state, grid, cfg, outflow);
  rec0.E_sobolev = sobolev_surrogate_energy(state, grid, cfg.gamma);
  res.series.push_back(rec0);
  if (observer) observer(state, rec0);

  std::vector<GradientSample> history{{rec0.t, rec0.W}};
  const double threshold = cfg.blowup_gradient_factor * rec0.W;
  const double m0 = rec0.M;
  double drift = 0.0;

  while (state.t < cfg.t_max) {
    double dt = std::min(cfl_dt(state, grid, cfg), cfg.t_max - state.t);
    std::optional<StepOutcome> next;
    for (int attempt = 0; attempt <= kMaxStepRetries && !next; ++attempt) {
      try {
        next = advance(state, grid, cfg, dt);
      } catch (const NumericalFailure& e) {
        if (attempt == kMaxStepRetries) throw RunFailure(e.what(), res.series);
        dt *= 0.5;
      }
    }
    state = std::move(next->state);
    // Last step lands exactly on t_max.
    if (cfg.t_max - state.t <= 1e-14 * cfg.t_max) state.t = cfg.t_max;
    outflow += next->outflow;

    const DiagnosticRecord rec = evaluate_record(state, grid, cfg, outflow);
    res.series.push_back(rec);
    history.push_back({rec.t, rec.W});
    if (m0 > 0.0) drift = std::max(drift, std::abs(rec.M + rec.outflow - m0) / m0);
    if (observer) observer(state, rec);
    if (rec0.W > 0.0 && rec.W >= threshold) break;
  }

  res.blowup = detect_blowup(history, cfg.blowup_gradient_factor);
  res.mass_drift = drift;
  res.final_state = std::move(state);
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace radblow
