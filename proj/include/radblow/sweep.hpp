#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "radblow/dynamics.hpp"
#include "radblow/errors.hpp"
#include "radblow/theorems.hpp"

namespace radblow {

struct SweepRow {
  double eps = 0.0;
  double F0 = 0.0;
  double E0_hat = 0.0;
  std::optional<double> T_num;
  std::optional<double> T_upper;
  std::optional<double> T_lower_raw;
  std::optional<double> ratio_upper;
  bool hypotheses_ok = false;
  /// Empty unless the run failed; the other fields then hold what was known.
  std::string failure;

  /// Ran to t_max without the detector firing.
  bool censored() const noexcept { return !T_num && failure.empty(); }

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;

  friend bool operator==(const PowerLawFit&, const PowerLawFit&) = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<PowerLawFit> fit;

  std::size_t censored_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.censored(); }));
  }
  /// More than a quarter of the rows never blew up.
  bool censoring_warning() const noexcept { return !rows.empty() && 4 * censored_count() > rows.size(); }

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Least squares of log y against log x.
inline PowerLawFit fit_powerlaw(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw InvalidArgument("fit_powerlaw: need at least 3 pairs");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pairs) {
    if (!(x > 0.0) || !(y > 0.0)) throw InvalidArgument("fit_powerlaw: values must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pairs) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("fit_powerlaw: x values must not all coincide");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

/// Fit over rows with a detected blow-up; absent with fewer than 3 such rows.
inline std::optional<PowerLawFit> fit_rows(const std::vector<SweepRow>& rows) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& r : rows) {
    if (r.T_num && *r.T_num > 0.0) pairs.emplace_back(r.eps, *r.T_num);
  }
  if (pairs.size() < 3) return std::nullopt;
  return fit_powerlaw(pairs);
}

inline SweepRow sweep_row(double eps, Family family, const ModelConfig& cfg, const RadialGrid& grid, double sigma) {
  SweepRow row;
  row.eps = eps;
  try {
    const InitialDataSpec spec{family, eps, {}};
    const FluidState s0 = init_state(spec, cfg, grid);
    row.F0 = F_functional(s0, grid);
    row.E0_hat = sobolev_surrogate_energy(s0, grid, cfg.gamma);
    const auto hyp = check_hypotheses(s0, grid, cfg, sigma);
    row.hypotheses_ok = hyp.ok();
    if (row.F0 > 0.0) row.T_upper = lifespan_upper(cfg.delta, row.F0);
    if (row.E0_hat > 0.0) row.T_lower_raw = wellposed_lower(cfg.delta, row.E0_hat, cfg.gamma);
    const RunResult res = run(cfg, spec, grid);
    if (res.blowup.detected) row.T_num = res.blowup.t_detect;
    if (row.T_num && row.T_upper) row.ratio_upper = *row.T_num / *row.T_upper;
  } catch (const std::exception& e) {
    row.failure = e.what();
    if (row.failure.empty()) row.failure = "unknown failure";
  }
  return row;
}

/// One run per epsilon, rows ordered by epsilon. With jobs > 1 rows are
/// computed concurrently; each row is independent, so the result does not
/// depend on scheduling.
inline SweepResult run_sweep(std::vector<double> eps_list, Family family, const ModelConfig& cfg,
                             const RadialGrid& grid, int jobs = 1, double sigma = kDefaultSigma) {
  if (eps_list.empty()) throw InvalidArgument("run_sweep: empty eps_list");
  for (double e : eps_list) {
    if (!(e > 0.0)) throw InvalidArgument("run_sweep: eps values must be positive");
  }
  cfg.validate();
  std::sort(eps_list.begin(), eps_list.end());

  SweepResult out;
  out.rows.resize(eps_list.size());
  const std::size_t workers = std::max(1, jobs);
  for (std::size_t base = 0; base < eps_list.size(); base += workers) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t end = std::min(eps_list.size(), base + workers);
    for (std::size_t k = base; k < end; ++k) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                 [&, k] { return sweep_row(eps_list[k], family, cfg, grid, sigma); }));
    }
    for (std::size_t k = base; k < end; ++k) out.rows[k] = batch[k - base].get();
  }
  out.fit = fit_rows(out.rows);
  return out;
}

// ---------------------------------------------------------------------------
// Record store: one JSON object per line. The first line is a header record;
// each further line is one SweepRow. Every record carries "v": 1.

inline constexpr int kStoreVersion = 1;

namespace detail {

inline nlohmann::json optional_json(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

inline std::optional<double> optional_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace detail

inline nlohmann::json row_to_json(const SweepRow& r) {
  return nlohmann::json{{"v", kStoreVersion},
                        {"eps", r.eps},
                        {"F0", r.F0},
                        {"E0_hat", r.E0_hat},
                        {"T_num", detail::optional_json(r.T_num)},
                        {"T_upper", detail::optional_json(r.T_upper)},
                        {"T_lower_raw", detail::optional_json(r.T_lower_raw)},
                        {"ratio_upper", detail::optional_json(r.ratio_upper)},
                        {"hypotheses_ok", r.hypotheses_ok},
                        {"failure", r.failure}};
}

inline SweepRow row_from_json(const nlohmann::json& j) {
  SweepRow r;
  r.eps = j.at("eps").get<double>();
  r.F0 = j.at("F0").get<double>();
  r.E0_hat = j.at("E0_hat").get<double>();
  r.T_num = detail::optional_field(j, "T_num");
  r.T_upper = detail::optional_field(j, "T_upper");
  r.T_lower_raw = detail::optional_field(j, "T_lower_raw");
  r.ratio_upper = detail::optional_field(j, "ratio_upper");
  r.hypotheses_ok = j.at("hypotheses_ok").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  return r;
}

inline std::string store_header_line() {
  return nlohmann::json{{"v", kStoreVersion}, {"record", "header"}}.dump();
}

inline void persist_runs(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("persist_runs: cannot open '" + path + "' for writing");
  out << store_header_line() << '\n';
  for (const auto& r : result.rows) out << row_to_json(r).dump() << '\n';
  if (!out) throw InvalidArgument("persist_runs: write to '" + path + "' failed");
}

/// Appends one row to an existing store (or starts a new one).
inline void append_run(const SweepRow& row, const std::string& path) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw InvalidArgument("append_run: cannot open '" + path + "'");
  if (fresh) out << store_header_line() << '\n';
  out << row_to_json(row).dump() << '\n';
}

/// Thrown when a store was written under a different schema version.
class SchemaVersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

inline SweepResult load_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("load_runs: cannot open '" + path + "'");
  SweepResult out;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), lineno);
    }
    try {
      if (!j.is_object() || !j.contains("v")) throw ParseError("record lacks schema version field \"v\"", lineno);
      const int v = j.at("v").get<int>();
      if (v != kStoreVersion) {
        throw SchemaVersionError("schema version mismatch: store has v = " + std::to_string(v) +
                                     ", expected " + std::to_string(kStoreVersion),
                                 lineno);
      }
      if (j.contains("record") && j.at("record") == "header") {
        saw_header = true;
        continue;
      }
      out.rows.push_back(row_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), lineno);
    }
  }
  if (!saw_header) throw ParseError("missing header record", lineno == 0 ? 1 : lineno);
  std::sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.eps < b.eps; });
  out.fit = fit_rows(out.rows);
  return out;
}

}  // namespace radblow
