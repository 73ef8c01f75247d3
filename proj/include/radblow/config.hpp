#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "radblow/errors.hpp"
#include "radblow/grid.hpp"
#include "radblow/model.hpp"
#include "radblow/theorems.hpp"

namespace radblow {

/// Contents of a run/sweep configuration file (a JSON object).
struct RunConfig {
  ModelConfig model;
  InitialDataSpec data;
  std::vector<double> eps_list;
  double sigma = kDefaultSigma;
  std::size_t n_cells = 2048;
  double r_max = 20.0;
  std::uint64_t seed = 0;
  /// Exit with status 2 when the theorem hypotheses fail.
  bool verify_theorem = false;
};

/// Config problem; the message names the key.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace detail {

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{"gamma", "delta", "dim_n", "family", "eps", "eps_list",
                                          "sigma", "n_cells", "r_max", "cfl", "t_max",
                                          "blowup_gradient_factor", "seed", "table", "verify_theorem",
                                          "density_floor"};
  return keys;
}

template <class T>
T config_get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("invalid value for key '" + key + "'");
  }
}

}  // namespace detail

/// Parses and validates a config. `need_eps_list` selects between the run
/// (scalar eps) and sweep (eps_list) forms.
inline RunConfig parse_config(const nlohmann::json& j, bool need_eps_list) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!detail::config_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
  }
  for (const char* key : {"gamma", "delta", "family"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }
  RunConfig c;
  c.model.gamma = detail::config_get<double>(j, "gamma");
  c.model.delta = coupling_from_int(detail::config_get<int>(j, "delta"));
  if (j.contains("dim_n")) c.model.dim_n = detail::config_get<int>(j, "dim_n");
  if (j.contains("cfl")) c.model.cfl = detail::config_get<double>(j, "cfl");
  if (j.contains("t_max")) c.model.t_max = detail::config_get<double>(j, "t_max");
  if (j.contains("blowup_gradient_factor")) {
    c.model.blowup_gradient_factor = detail::config_get<double>(j, "blowup_gradient_factor");
  }
  if (j.contains("density_floor")) c.model.density_floor = detail::config_get<double>(j, "density_floor");
  c.model.validate();

  c.data.family = family_from_string(detail::config_get<std::string>(j, "family"));
  if (need_eps_list) {
    if (!j.contains("eps_list")) throw ConfigError("missing required key 'eps_list'");
    c.eps_list = detail::config_get<std::vector<double>>(j, "eps_list");
    if (c.eps_list.empty()) throw ConfigError("eps_list must not be empty");
    for (double e : c.eps_list) {
      if (!(e > 0.0)) throw ConfigError("eps_list entries must be positive");
    }
  } else if (c.data.family != Family::kTable) {
    if (!j.contains("eps")) throw ConfigError("missing required key 'eps'");
  }
  if (j.contains("eps")) {
    c.data.eps = detail::config_get<double>(j, "eps");
    if (!(c.data.eps > 0.0)) throw ConfigError("eps must be positive");
  }
  if (c.data.family == Family::kTable) {
    if (!j.contains("table")) throw ConfigError("missing required key 'table' for family 'table'");
    const auto& t = j.at("table");
    const auto r = detail::config_get<std::vector<double>>(t, "r");
    const auto rho = detail::config_get<std::vector<double>>(t, "rho");
    const auto v = detail::config_get<std::vector<double>>(t, "v");
    if (r.size() != rho.size() || r.size() != v.size()) {
      throw ConfigError("table arrays 'r', 'rho', 'v' must have equal length");
    }
    for (std::size_t k = 0; k < r.size(); ++k) c.data.table.push_back({r[k], rho[k], v[k]});
  }
  if (j.contains("sigma")) c.sigma = detail::config_get<double>(j, "sigma");
  if (!(c.sigma > 0.0 && c.sigma < 0.5)) throw ConfigError("sigma must lie in (0, 1/2)");
  if (j.contains("n_cells")) c.n_cells = detail::config_get<std::size_t>(j, "n_cells");
  if (c.n_cells < kMinSolverCells) throw ConfigError("n_cells must be at least 8");
  if (j.contains("r_max")) c.r_max = detail::config_get<double>(j, "r_max");
  if (!(c.r_max > 0.0)) throw ConfigError("r_max must be positive");
  if (j.contains("seed")) c.seed = detail::config_get<std::uint64_t>(j, "seed");
  if (j.contains("verify_theorem")) c.verify_theorem = detail::config_get<bool>(j, "verify_theorem");
  return c;
}

inline RunConfig load_config(const std::string& path, bool need_eps_list) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, need_eps_list);
}

}  // namespace radblow
