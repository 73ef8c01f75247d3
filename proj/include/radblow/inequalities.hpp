#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "radblow/errors.hpp"
#include "radblow/functionals.hpp"
#include "radblow/grid.hpp"
#include "radblow/model.hpp"

// Standalone checks of the weighted Hardy inequality
//
//   int_0^inf r^{-mu} (int_0^r f)^q dr <= (q/(mu-1))^q int_0^inf f^q r^{q-mu} dr
//
// and of the chain that bounds the electrostatic correction R(t).

namespace radblow {

inline double hardy_best_constant(double mu, double q) {
  if (!(mu > 1.0)) throw InvalidArgument("hardy_best_constant: mu must exceed 1");
  if (!(q > 1.0)) throw InvalidArgument("hardy_best_constant: q must exceed 1");
  return std::pow(q / (mu - 1.0), q);
}

/// f(l) = coeff * l^power on (lo, hi]; zero elsewhere.
struct PowerSegment {
  double lo = 0.0;
  double hi = 0.0;
  double coeff = 0.0;
  double power = 0.0;
};

/// Nonnegative piecewise-power function: disjoint segments sorted by lo.
using PiecewisePower = std::vector<PowerSegment>;

/// Step function with values[k] on (edges[k], edges[k+1]].
inline PiecewisePower step_function(const std::vector<double>& edges, const std::vector<double>& values) {
  if (edges.size() != values.size() + 1) throw InvalidArgument("step_function: need values.size() + 1 edges");
  PiecewisePower f;
  for (std::size_t k = 0; k < values.size(); ++k) f.push_back({edges[k], edges[k + 1], values[k], 0.0});
  return f;
}

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

namespace detail {

// int_a^b r^e dr for 0 <= a < b <= inf. Divergence is the caller's concern.
inline double power_integral(double a, double b, double e) {
  if (e == -1.0) return std::log(b / a);
  if (std::isinf(b)) return -std::pow(a, e + 1.0) / (e + 1.0);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

// Antiderivative growth of one segment: int_lo^r coeff l^power dl.
inline double segment_primitive(const PowerSegment& s, double r) {
  if (s.power == -1.0) return s.coeff * std::log(r / s.lo);
  return s.coeff * (std::pow(r, s.power + 1.0) - std::pow(s.lo, s.power + 1.0)) / (s.power + 1.0);
}

inline void validate_segments(const PiecewisePower& f) {
  double prev_hi = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& s = f[k];
    if (!(s.lo >= 0.0) || !(s.hi > s.lo) || !std::isfinite(s.hi)) {
      throw InvalidArgument("segment " + std::to_string(k) + ": need 0 <= lo < hi < inf");
    }
    if (s.lo < prev_hi) throw InvalidArgument("segments must be sorted and disjoint");
    if (!(s.coeff >= 0.0) || !std::isfinite(s.coeff) || !std::isfinite(s.power)) {
      throw InvalidArgument("segment " + std::to_string(k) + ": coefficient must be finite and nonnegative");
    }
    prev_hi = s.hi;
  }
}

}  // namespace detail

/// Both sides of the weighted Hardy inequality for a nonnegative piecewise-power f.
///
/// The right side and every left-side piece on which int_0^r f is a pure
/// power (constant, or growing from zero at the origin) are integrated in
/// closed form. The remaining left-side pieces are smooth on a bounded
/// interval away from the origin and use double-exponential quadrature at
/// 1e-15 relative tolerance.
inline HardyResult weighted_hardy_check(const PiecewisePower& f, double mu, double q) {
  const double C = hardy_best_constant(mu, q);
  detail::validate_segments(f);

  HardyResult out;
  double rhs_integral = 0.0;
  double G = 0.0;  // int_0^r f at the current sweep position
  double pos = 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;

  auto add_constant_piece = [&](double a, double b) {
    if (G == 0.0 || b <= a) return;
    out.lhs += std::pow(G, q) * detail::power_integral(a, b, -mu);
  };

  for (const auto& s : f) {
    add_constant_piece(pos, s.lo);
    if (s.coeff > 0.0) {
      const double e_rhs = s.power * q + q - mu;
      if (s.lo == 0.0 && e_rhs <= -1.0) throw DivergenceError("right side diverges at r = 0");
      rhs_integral += std::pow(s.coeff, q) * detail::power_integral(s.lo, s.hi, e_rhs);

      if (s.lo == 0.0) {
        if (s.power <= -1.0) throw DivergenceError("int_0^r f diverges at r = 0");
        // G(r) = coeff r^{p+1}/(p+1): a pure power.
        const double e_lhs = (s.power + 1.0) * q - mu;
        if (e_lhs <= -1.0) throw DivergenceError("left side diverges at r = 0");
        out.lhs += std::pow(s.coeff / (s.power + 1.0), q) * detail::power_integral(0.0, s.hi, e_lhs);
      } else {
        const double G0 = G;
        auto integrand = [&](double r) {
          const double inner = G0 + detail::segment_primitive(s, r);
          return std::pow(r, -mu) * std::pow(std::max(inner, 0.0), q);
        };
        out.lhs += integrator.integrate(integrand, s.lo, s.hi, 1e-15);
      }
      G += detail::segment_primitive(s, s.hi);
    }
    pos = s.hi;
  }
  // Tail (pos, inf): G is constant and mu > 1 keeps the integral finite.
  if (G > 0.0) out.lhs += std::pow(G, q) * std::pow(pos, 1.0 - mu) / (mu - 1.0);

  out.rhs = C * rhs_integral;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

struct HardySuiteReport {
  std::uint64_t seed = 0;
  int trials = 0;
  int passed = 0;
  int violations = 0;
  /// Largest lhs/rhs seen; the inequality says it stays <= 1.
  double worst_ratio = 0.0;
};

/// Random nonnegative step functions with random (mu, q) in (1, 4]^2. Supports
/// touching the origin are only drawn when q - mu > -1 so both sides converge.
inline HardySuiteReport hardy_property_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(1.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pieces(1, 8);

  HardySuiteReport rep;
  rep.seed = seed;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    // (1, 4]: flip the half-open draw [1, 4).
    const double mu = 5.0 - exponent(rng);
    const double q = 5.0 - exponent(rng);
    const bool from_origin = q - mu > -1.0 && unit(rng) < 0.5;
    double x = from_origin ? 0.0 : 0.05 + 2.0 * unit(rng);
    const int k = pieces(rng);
    std::vector<double> edges{x};
    std::vector<double> values;
    for (int j = 0; j < k; ++j) {
      x += 0.05 + 1.5 * unit(rng);
      edges.push_back(x);
      values.push_back(unit(rng) < 0.2 ? 0.0 : 3.0 * unit(rng));
    }
    const auto res = weighted_hardy_check(step_function(edges, values), mu, q);
    if (res.holds) ++rep.passed; else ++rep.violations;
    if (res.rhs > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, res.lhs / res.rhs);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Bound chain for R(t).

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct RBoundReport {
  double R_value = 0.0;
  double bound = 0.0;
  bool holds = false;
  std::vector<ChainLink> chain_detail;
  /// 4 pi Gamma(sigma) / (3 - sigma): the exact value of the Young tail term
  /// that the constant c2 is meant to dominate.
  double tail_exact = 0.0;

  bool all_links_hold() const noexcept {
    return std::all_of(chain_detail.begin(), chain_detail.end(), [](const ChainLink& l) { return l.holds; });
  }
  const ChainLink* link(const std::string& name) const noexcept {
    for (const auto& l : chain_detail) if (l.name == name) return &l;
    return nullptr;
  }
};

/// Evaluates R(t) <= c1 (M(0) + (gamma-1) E_1(0)) + c2 end to end and link by
/// link on the grid:
///
///   compensate     R <= 4 pi int r^{sigma-2} H(r) e^{-r} dr,  H = int_0^r rho l^{2-sigma}
///   young          ... <= young_main + young_tail
///   drop_weight    young_main <= 4 pi (2-sigma)/(3-sigma) int r^{-mu} H^p dr
///   hardy          ... <= 4 pi c1 int rho^p r^2 dr
///   split          int rho^p r^2 <= int_{rho<=1} rho r^2 + int_{rho>1} rho^gamma r^2
///   energy         int (rho + rho^gamma) r^2 <= (M(0) + (gamma-1) E_1(0)) / (4 pi)
///   tail_constant  young_tail <= c2
///
/// with p = (3-sigma)/(2-sigma) and mu = 1 - sigma + p. Every integral is the
/// grid midpoint sum.
inline RBoundReport r_bound_check(const FluidState& s, const RadialGrid& g, double sigma, double gamma, double M0,
                                  double E1_0) {
  const auto c = constants_c1_c2(sigma);
  if (!(gamma > electro_gamma_floor(sigma) && gamma <= 5.0 / 3.0 + 1e-15)) {
    throw HypothesisViolation("gamma outside ((3 - sigma)/(2 - sigma), 5/3] for the given sigma");
  }
  const std::size_t n = g.n_cells;
  const double h = g.dr;
  const double p = electro_gamma_floor(sigma);
  const double mu = 1.0 - sigma + p;

  const double M = mass(s, g);
  if (M > 0.0) {
    const double mean_density = M / (kFourPi / 3.0 * g.r_max * g.r_max * g.r_max);
    const double r1 = g.centers[0];
    const double m1 = kFourPi * s.rho[0] * r1 * r1 * h;
    if (m1 / (r1 * r1) > 1e6 * mean_density) {
      throw InvalidArgument("r_bound_check: central mass concentration makes m(r)/r^2 ill-posed");
    }
  }

  RBoundReport rep;
  rep.R_value = R_functional(s, g);
  rep.bound = c.c1 * (M0 + (gamma - 1.0) * E1_0) + c.c2;
  rep.holds = rep.R_value <= rep.bound;
  rep.tail_exact = kFourPi * std::tgamma(sigma) / (3.0 - sigma);

  double compensated = 0.0, young_main = 0.0, young_tail = 0.0, dropped = 0.0;
  double sum_p = 0.0, split_low = 0.0, split_high = 0.0, sum_rho = 0.0, sum_gamma = 0.0;
  double H = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.centers[i];
    const double rho = s.rho[i];
    H += rho * std::pow(r, 2.0 - sigma) * h;
    const double w = std::exp(-r);
    compensated += std::pow(r, sigma - 2.0) * H * w;
    const double ratio_p = std::pow(H / r, p);
    young_main += std::pow(r, sigma - 1.0) * (2.0 - sigma) / (3.0 - sigma) * ratio_p * w;
    young_tail += std::pow(r, sigma - 1.0) / (3.0 - sigma) * w;
    dropped += std::pow(r, -mu) * std::pow(H, p);
    const double r2 = r * r;
    sum_p += std::pow(rho, p) * r2;
    if (rho <= 1.0) split_low += rho * r2; else split_high += std::pow(rho, gamma) * r2;
    sum_rho += rho * r2;
    sum_gamma += std::pow(rho, gamma) * r2;
  }
  const double scale = kFourPi * h;
  compensated *= scale;
  young_main *= scale;
  young_tail *= scale;
  dropped *= scale * (2.0 - sigma) / (3.0 - sigma);
  sum_p *= h;
  split_low *= h;
  split_high *= h;
  const double energy_side = (sum_rho + sum_gamma) * h;
  const double hardy_rhs = kFourPi * c.c1 * sum_p;

  auto add = [&](std::string name, double lhs, double rhs) {
    rep.chain_detail.push_back({std::move(name), lhs, rhs, lhs <= rhs * (1.0 + 1e-12)});
  };
  add("compensate", rep.R_value, compensated);
  add("young", compensated, young_main + young_tail);
  add("drop_weight", young_main, dropped);
  add("hardy", dropped, hardy_rhs);
  add("split", sum_p, split_low + split_high);
  add("energy", energy_side, (M0 + (gamma - 1.0) * E1_0) / kFourPi);
  add("tail_constant", young_tail, c.c2);
  return rep;
}

}  // namespace radblow
