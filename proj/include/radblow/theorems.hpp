#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radblow/dynamics.hpp"
#include "radblow/errors.hpp"
#include "radblow/functionals.hpp"
#include "radblow/model.hpp"

// Lifespan bounds, Riccati comparison envelopes and trajectory monitors for
// the three radial systems.

namespace radblow {

enum class TheoremId { kT1Euler, kT2Gravity, kT3Electro, kT4Sharp, kT5SharpGravity };

inline std::string_view to_string(TheoremId id) noexcept {
  switch (id) {
    case TheoremId::kT1Euler: return "T1_euler";
    case TheoremId::kT2Gravity: return "T2_gravity";
    case TheoremId::kT3Electro: return "T3_electro";
    case TheoremId::kT4Sharp: return "T4_sharp";
    case TheoremId::kT5SharpGravity: return "T5_sharp_gravity";
  }
  return "unknown";
}

inline TheoremId theorem_for(Coupling delta) noexcept {
  switch (delta) {
    case Coupling::kEuler: return TheoremId::kT1Euler;
    case Coupling::kGravitational: return TheoremId::kT2Gravity;
    case Coupling::kElectrostatic: return TheoremId::kT3Electro;
  }
  return TheoremId::kT1Euler;
}

inline constexpr double kDefaultSigma = 0.25;

struct HypothesisCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  double F0 = 0.0;
  std::optional<Condition20> condition;

  bool ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.ok; });
  }
};

/// Checks rho_0(0) = 0 and F(0) > 0; for the electrostatic system also the
/// (sigma, gamma) window and the initial-data inequality of condition20.
/// Never throws on failed hypotheses, only on malformed arguments.
///
/// rho_0(0) = 0 is tested as rho at the first two cells being below
/// 10 dr^2 max(rho): a cell-centred sample of r^2-like data can't be zero.
inline HypothesisReport check_hypotheses(const FluidState& s0, const RadialGrid& g, const ModelConfig& cfg,
                                         double sigma = kDefaultSigma) {
  HypothesisReport rep;
  const double rho_max = s0.rho.empty() ? 0.0 : *std::max_element(s0.rho.begin(), s0.rho.end());
  const double tol = 10.0 * g.dr * g.dr * rho_max;
  bool center_ok = true;
  for (std::size_t i = 0; i < std::min<std::size_t>(2, s0.size()); ++i) center_ok = center_ok && s0.rho[i] <= tol;
  rep.checks.push_back({"rho0_center_zero", center_ok,
                        "rho[0..1] <= " + std::to_string(tol)});

  rep.F0 = F_functional(s0, g);
  rep.checks.push_back({"F0_positive", rep.F0 > 0.0, "F(0) = " + std::to_string(rep.F0)});

  if (cfg.delta == Coupling::kElectrostatic) {
    const bool sigma_ok = sigma > 0.0 && sigma < 0.5;
    const bool window_ok = sigma_ok && cfg.gamma > electro_gamma_floor(sigma) && cfg.gamma <= 5.0 / 3.0 + 1e-15;
    rep.checks.push_back({"gamma_sigma_window", window_ok,
                          sigma_ok ? "(3-sigma)/(2-sigma) = " + std::to_string(electro_gamma_floor(sigma))
                                   : "sigma outside (0, 1/2)"});
    if (window_ok) {
      rep.condition = condition20(s0, g, sigma, cfg.gamma);
      rep.checks.push_back({"condition20", rep.condition->holds,
                            "lhs = " + std::to_string(rep.condition->lhs) +
                                ", rhs = " + std::to_string(rep.condition->rhs)});
    } else {
      rep.checks.push_back({"condition20", false, "not evaluated: gamma outside window"});
    }
  }
  return rep;
}

/// 2/F0 (Euler, gravity) or 4/F0 (electrostatic).
inline double lifespan_upper(Coupling delta, double F0) {
  if (!(F0 > 0.0)) throw HypothesisViolation("lifespan_upper: F(0) must be positive");
  return (delta == Coupling::kElectrostatic ? 4.0 : 2.0) / F0;
}

/// Comparison rate: dF/dt >= rate F^2 integrates to F0 / (1 - rate F0 t).
inline double riccati_rate(Coupling delta) noexcept {
  return delta == Coupling::kElectrostatic ? 0.25 : 0.5;
}

inline double riccati_envelope(double F0, double t, double rate) {
  if (!(F0 > 0.0)) throw InvalidArgument("riccati_envelope: F0 must be positive");
  const double denom = 1.0 - rate * F0 * t;
  if (!(denom > 0.0)) throw DomainError("riccati_envelope: t at or past the pole 1/(rate F0)");
  return F0 / denom;
}

/// dF/dt at each record: three-point formula on nonuniform stamps in the
/// interior, one-sided differences at the two ends.
inline std::vector<double> time_derivative_F(const DiagnosticSeries& series) {
  const std::size_t n = series.size();
  if (n < 3) throw InvalidArgument("time_derivative_F: need at least 3 records");
  std::vector<double> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = series[k].t - series[k - 1].t;
    const double h2 = series[k + 1].t - series[k].t;
    d[k] = (h1 * h1 * series[k + 1].F - h2 * h2 * series[k - 1].F + (h2 * h2 - h1 * h1) * series[k].F) /
           (h1 * h2 * (h1 + h2));
  }
  d[0] = (series[1].F - series[0].F) / (series[1].t - series[0].t);
  d[n - 1] = (series[n - 1].F - series[n - 2].F) / (series[n - 1].t - series[n - 2].t);
  return d;
}

struct RiccatiMonitor {
  std::vector<double> dF_dt;
  std::vector<double> residual;
  double min_residual = 0.0;
};

/// residual = dF/dt - Q, plus bound_rhs = c1 (M(0) + (gamma-1) E_1(0)) + c2
/// for the electrostatic system.
inline RiccatiMonitor monitor_riccati(const DiagnosticSeries& series, Coupling delta,
                                      std::optional<double> bound_rhs = std::nullopt) {
  RiccatiMonitor mon;
  mon.dF_dt = time_derivative_F(series);
  const double shift = delta == Coupling::kElectrostatic ? bound_rhs.value_or(0.0) : 0.0;
  mon.residual.resize(series.size());
  mon.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < series.size(); ++k) {
    mon.residual[k] = mon.dF_dt[k] - series[k].Q + shift;
    mon.min_residual = std::min(mon.min_residual, mon.residual[k]);
  }
  return mon;
}

/// max over recorded t below the pole of (envelope(t) - F(t))^+.
inline double monitor_envelope(const DiagnosticSeries& series, double F0, double rate) {
  if (!(F0 > 0.0)) throw InvalidArgument("monitor_envelope: F0 must be positive");
  const double pole = 1.0 / (rate * F0);
  double worst = 0.0;
  for (const auto& rec : series) {
    if (rec.t >= pole) break;
    worst = std::max(worst, riccati_envelope(F0, rec.t, rate) - rec.F);
  }
  return worst;
}

/// max_k |dF/dt - (Q + P - delta R)|: the discrete defect of the exact
/// identity for dF/dt. Its decay under grid refinement sets the tolerance for
/// the one-sided monitors.
inline double identity_defect(const DiagnosticSeries& series, Coupling delta) {
  const auto d = time_derivative_F(series);
  double worst = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& r = series[k];
    const double exact = r.Q + r.P - sign_of(delta) * r.R;
    worst = std::max(worst, std::abs(d[k] - exact));
  }
  return worst;
}

/// Un-normalised local-existence predictor: E0^{-1/2} for Euler,
/// max(E0^{-1/2}, E0^{(gamma-3)/(2(gamma-1))}) with a Poisson force. The
/// implied constants are unknown, so only ratios across runs are meaningful.
inline double wellposed_lower(Coupling delta, double E0, double gamma) {
  if (!(E0 > 0.0)) throw InvalidArgument("wellposed_lower: E0 must be positive");
  const double base = 1.0 / std::sqrt(E0);
  if (delta == Coupling::kEuler) return base;
  return std::max(base, std::pow(E0, (gamma - 3.0) / (2.0 * (gamma - 1.0))));
}

struct TheoremVerdict {
  TheoremId theorem_id = TheoremId::kT1Euler;
  HypothesisReport hypotheses;
  std::optional<double> predicted_upper;
  std::optional<double> observed_T_num;
  std::optional<double> min_riccati_residual;
  std::optional<double> envelope_violation;
  std::optional<double> identity_defect;

  bool hypotheses_ok() const noexcept { return hypotheses.ok(); }
  /// T_num <= predicted upper bound, or no blow-up observed yet.
  bool bound_respected(double tolerance = 0.0) const noexcept {
    if (!predicted_upper || !observed_T_num) return true;
    return *observed_T_num <= *predicted_upper * (1.0 + tolerance);
  }
};

inline TheoremVerdict verify_run(const RunResult& run_result, const FluidState& initial, const RadialGrid& g,
                                 double sigma = kDefaultSigma) {
  const ModelConfig& cfg = run_result.config;
  TheoremVerdict v;
  v.theorem_id = theorem_for(cfg.delta);
  v.hypotheses = check_hypotheses(initial, g, cfg, sigma);
  if (run_result.blowup.detected) v.observed_T_num = run_result.blowup.t_detect;
  if (!v.hypotheses.ok()) return v;

  const double F0 = v.hypotheses.F0;
  v.predicted_upper = lifespan_upper(cfg.delta, F0);
  const auto& series = run_result.series;
  if (series.size() >= 3) {
    std::optional<double> shift;
    if (v.hypotheses.condition) shift = v.hypotheses.condition->rhs;
    v.min_riccati_residual = monitor_riccati(series, cfg.delta, shift).min_residual;
    v.identity_defect = identity_defect(series, cfg.delta);
  }
  v.envelope_violation = monitor_envelope(series, F0, riccati_rate(cfg.delta));
  return v;
}

}  // namespace radblow
