#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "radblow/config.hpp"
#include "radblow/dynamics.hpp"
#include "radblow/inequalities.hpp"
#include "radblow/sweep.hpp"
#include "radblow/theorems.hpp"

// Command implementations behind tools/radblow. Each returns the process exit
// status: 0 success, 1 usage/config/I-O error, 2 theorem hypothesis
// violation, 3 numerical failure.

namespace radblow {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitHypothesis = 2, kExitNumerical = 3 };

/// 17 significant digits: enough to round-trip any double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string{};
}

inline void write_series_csv(std::ostream& out, const DiagnosticSeries& series, Coupling delta,
                             std::optional<double> bound_rhs) {
  out << "t,M,E_delta,F,Q,R,W,dF_dt,riccati_residual,envelope\n";
  std::optional<RiccatiMonitor> mon;
  if (series.size() >= 3) mon = monitor_riccati(series, delta, bound_rhs);
  const double F0 = series.empty() ? 0.0 : series.front().F;
  const double rate = riccati_rate(delta);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& r = series[k];
    std::optional<double> envelope;
    if (F0 > 0.0 && rate * F0 * r.t < 1.0) envelope = riccati_envelope(F0, r.t, rate);
    out << format_number(r.t) << ',' << format_number(r.M) << ',' << format_number(r.E_delta) << ','
        << format_number(r.F) << ',' << format_number(r.Q) << ',' << format_number(r.R) << ','
        << format_number(r.W) << ',' << (mon ? format_number(mon->dF_dt[k]) : "") << ','
        << (mon ? format_number(mon->residual[k]) : "") << ',' << format_optional(envelope) << '\n';
  }
}

namespace detail {

inline nlohmann::json opt(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

inline nlohmann::json hypotheses_json(const HypothesisReport& h) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : h.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  nlohmann::json j{{"ok", h.ok()}, {"F0", h.F0}, {"checks", checks}};
  if (h.condition) j["condition20"] = {{"holds", h.condition->holds}, {"lhs", h.condition->lhs}, {"rhs", h.condition->rhs}};
  return j;
}

inline nlohmann::json summary_json(const RunConfig& cfg, const RunResult* res, const TheoremVerdict& verdict,
                                   const std::string& status) {
  const auto& m = cfg.model;
  nlohmann::json j;
  j["status"] = status;
  j["config"] = {{"gamma", m.gamma},       {"delta", sign_of(m.delta)},
                 {"dim_n", m.dim_n},       {"cfl", m.cfl},
                 {"density_floor", m.density_floor},
                 {"blowup_gradient_factor", m.blowup_gradient_factor},
                 {"t_max", m.t_max},       {"n_cells", cfg.n_cells},
                 {"r_max", cfg.r_max},     {"sigma", cfg.sigma}};
  j["spec"] = {{"family", std::string(to_string(cfg.data.family))}, {"eps", cfg.data.eps}};
  if (res) {
    j["records"] = res->series.size();
    j["mass_drift"] = res->mass_drift;
    j["wall_time"] = res->wall_time;
    j["blowup"] = {{"detected", res->blowup.detected},
                   {"t_detect", opt(res->blowup.t_detect)},
                   {"t_extrapolated", opt(res->blowup.t_extrapolated)},
                   {"criterion", res->blowup.criterion}};
  }
  j["verdict"] = {{"theorem_id", std::string(to_string(verdict.theorem_id))},
                  {"hypotheses", hypotheses_json(verdict.hypotheses)},
                  {"predicted_upper", opt(verdict.predicted_upper)},
                  {"observed_T_num", opt(verdict.observed_T_num)},
                  {"min_riccati_residual", opt(verdict.min_riccati_residual)},
                  {"envelope_violation", opt(verdict.envelope_violation)},
                  {"identity_defect", opt(verdict.identity_defect)}};
  return j;
}

// Refuses to reuse a directory that already holds outputs unless forced.
inline bool prepare_output_dir(const std::filesystem::path& dir, const std::vector<std::string>& outputs, bool force,
                               std::ostream& err) {
  namespace fs = std::filesystem;
  if (!force) {
    for (const auto& name : outputs) {
      if (fs::exists(dir / name)) {
        err << "error: " << (dir / name).string() << " already exists; pass --force to overwrite\n";
        return false;
      }
    }
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << dir.string() << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

}  // namespace detail

inline int cmd_run(const std::string& config_path, const std::string& out_dir, bool force, std::ostream& out,
                   std::ostream& err) {
  namespace fs = std::filesystem;
  RunConfig cfg;
  try {
    cfg = load_config(config_path, false);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const fs::path dir(out_dir);
  if (!detail::prepare_output_dir(dir, {"series.csv", "summary.json"}, force, err)) return kExitUsage;

  try {
    const RadialGrid grid = make_grid(cfg.r_max, cfg.n_cells);
    FluidState s0;
    try {
      s0 = init_state(cfg.data, cfg.model, grid);
    } catch (const HypothesisViolation& e) {
      err << "hypothesis violation: " << e.what() << '\n';
      return kExitHypothesis;
    }
    TheoremVerdict pre;
    pre.theorem_id = theorem_for(cfg.model.delta);
    pre.hypotheses = check_hypotheses(s0, grid, cfg.model, cfg.sigma);
    if (cfg.verify_theorem && !pre.hypotheses.ok()) {
      detail::write_text(dir / "summary.json",
                         detail::summary_json(cfg, nullptr, pre, "hypothesis_violation").dump(2) + "\n");
      for (const auto& c : pre.hypotheses.checks) {
        if (!c.ok) err << "hypothesis violation: " << c.name << " (" << c.detail << ")\n";
      }
      return kExitHypothesis;
    }

    std::optional<double> bound_rhs;
    if (pre.hypotheses.condition) bound_rhs = pre.hypotheses.condition->rhs;
    RunResult res;
    try {
      res = run(cfg.model, cfg.data, grid);
    } catch (const RunFailure& e) {
      std::ofstream csv(dir / "series.csv", std::ios::trunc);
      write_series_csv(csv, e.partial(), cfg.model.delta, bound_rhs);
      detail::write_text(dir / "summary.json",
                         detail::summary_json(cfg, nullptr, pre, std::string("numerical_failure: ") + e.what()).dump(2) + "\n");
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    }
    const TheoremVerdict verdict = verify_run(res, s0, grid, cfg.sigma);
    {
      std::ofstream csv(dir / "series.csv", std::ios::trunc);
      write_series_csv(csv, res.series, cfg.model.delta, bound_rhs);
      if (!csv) throw InvalidArgument("cannot write series.csv");
    }
    detail::write_text(dir / "summary.json", detail::summary_json(cfg, &res, verdict, "ok").dump(2) + "\n");

    out << "theorem " << to_string(verdict.theorem_id) << ": hypotheses "
        << (verdict.hypotheses_ok() ? "ok" : "NOT satisfied") << '\n';
    out << "records " << res.series.size() << ", t_end " << format_number(res.series.back().t) << '\n';
    if (res.blowup.detected) {
      out << "blow-up detected at t = " << format_number(*res.blowup.t_detect) << '\n';
    } else {
      out << "no blow-up by t_max\n";
    }
    if (verdict.predicted_upper) out << "predicted upper bound " << format_number(*verdict.predicted_upper) << '\n';
    return kExitOk;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& res) {
  out << "eps,F0,E0_hat,T_num,T_upper,T_lower_raw,ratio_upper,hypotheses_ok,censored,failure\n";
  for (const auto& r : res.rows) {
    std::string failure = r.failure;
    for (char& ch : failure) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << format_number(r.eps) << ',' << format_number(r.F0) << ',' << format_number(r.E0_hat) << ','
        << format_optional(r.T_num) << ',' << format_optional(r.T_upper) << ',' << format_optional(r.T_lower_raw)
        << ',' << format_optional(r.ratio_upper) << ',' << (r.hypotheses_ok ? 1 : 0) << ','
        << (r.censored() ? 1 : 0) << ',' << failure << '\n';
  }
}

inline int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool force, int jobs,
                     std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  RunConfig cfg;
  try {
    cfg = load_config(config_path, true);
    if (cfg.data.family == Family::kTable) throw ConfigError("family 'table' cannot be swept over eps");
    if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const fs::path dir(out_dir);
  if (!detail::prepare_output_dir(dir, {"runs.jsonl", "sweep.csv", "fit.json"}, force, err)) return kExitUsage;

  try {
    const RadialGrid grid = make_grid(cfg.r_max, cfg.n_cells);
    const SweepResult res = run_sweep(cfg.eps_list, cfg.data.family, cfg.model, grid, jobs, cfg.sigma);
    persist_runs(res, (dir / "runs.jsonl").string());
    {
      std::ofstream csv(dir / "sweep.csv", std::ios::trunc);
      write_sweep_csv(csv, res);
    }
    nlohmann::json fit{{"rows", res.rows.size()},
                       {"censored", res.censored_count()},
                       {"censoring_warning", res.censoring_warning()}};
    if (res.fit) {
      fit["slope"] = res.fit->slope;
      fit["intercept"] = res.fit->intercept;
      fit["r2"] = res.fit->r2;
    } else {
      fit["slope"] = nullptr;
      fit["intercept"] = nullptr;
      fit["r2"] = nullptr;
    }
    detail::write_text(dir / "fit.json", fit.dump(2) + "\n");

    if (res.censoring_warning()) {
      err << "warning: " << res.censored_count() << " of " << res.rows.size()
          << " rows reached t_max without blow-up and were excluded from the fit\n";
    }
    if (res.fit) {
      out << "fit: slope " << format_number(res.fit->slope) << ", r2 " << format_number(res.fit->r2) << '\n';
    } else {
      out << "fit: fewer than 3 rows with detected blow-up\n";
    }
    bool any_failed = false, hyp_failed = false;
    for (const auto& r : res.rows) {
      any_failed = any_failed || !r.failure.empty();
      hyp_failed = hyp_failed || !r.hypotheses_ok;
    }
    if (cfg.verify_theorem && hyp_failed) {
      err << "hypothesis violation in at least one sweep row\n";
      return kExitHypothesis;
    }
    if (any_failed) {
      err << "numerical failure in at least one sweep row (see sweep.csv)\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

inline int cmd_check_inequalities(std::uint64_t seed, int trials, std::ostream& out, std::ostream& err) {
  if (trials < 1) {
    err << "error: --trials must be at least 1\n";
    return kExitUsage;
  }
  const auto rep = hardy_property_suite(seed, trials);
  const auto exact = weighted_hardy_check({{0.0, 1.0, 1.0, 1.0}}, 3.0, 2.0);
  out << "weighted Hardy property suite: seed " << seed << ", trials " << rep.trials << '\n';
  out << "passed " << rep.passed << ", violations " << rep.violations << '\n';
  out << "worst lhs/rhs " << format_number(rep.worst_ratio) << '\n';
  out << "closed form f(l) = l on (0,1], q = 2, mu = 3: lhs " << format_number(exact.lhs) << ", rhs "
      << format_number(exact.rhs) << '\n';
  return rep.violations == 0 && exact.holds ? kExitOk : kExitHypothesis;
}

inline int cmd_report(const std::string& store_path, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::exists(store_path)) {
    err << "error: store '" << store_path << "' does not exist\n";
    return kExitUsage;
  }
  SweepResult res;
  try {
    res = load_runs(store_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto cell = [](const std::optional<double>& x) {
    std::ostringstream s;
    if (x) s << std::setprecision(6) << *x; else s << "-";
    return s.str();
  };
  out << std::left << std::setw(12) << "eps" << std::setw(14) << "F0" << std::setw(14) << "E0_hat" << std::setw(14)
      << "T_num" << std::setw(14) << "T_upper" << std::setw(14) << "T_lower_raw" << std::setw(12) << "ratio"
      << std::setw(6) << "hyp" << "censored\n";
  std::size_t completed = 0;
  for (const auto& r : res.rows) {
    if (r.T_num) ++completed;
    out << std::left << std::setw(12) << cell(r.eps) << std::setw(14) << cell(r.F0) << std::setw(14) << cell(r.E0_hat)
        << std::setw(14) << cell(r.T_num) << std::setw(14) << cell(r.T_upper) << std::setw(14) << cell(r.T_lower_raw)
        << std::setw(12) << cell(r.ratio_upper) << std::setw(6) << (r.hypotheses_ok ? "yes" : "no")
        << (r.censored() ? "yes" : "no") << '\n';
  }
  if (completed == 0) {
    out << "no completed runs\n";
  } else if (res.fit) {
    out << "fit: T_num ~ eps^" << format_number(res.fit->slope) << " (r2 " << format_number(res.fit->r2)
        << ", deviation from -1: " << format_number(res.fit->slope + 1.0) << ")\n";
  } else {
    out << "fit: fewer than 3 completed runs\n";
  }
  return kExitOk;
}

}  // namespace radblow
