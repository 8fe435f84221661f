#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "pwell/error.hpp"
#include "pwell/monitors.hpp"
#include "pwell/regime.hpp"
#include "pwell/solver.hpp"
#include "pwell/verify.hpp"
#include "pwell/wells.hpp"

namespace pwell {

using Json = nlohmann::ordered_json;

/// 17 significant digits: binary64 values round-trip exactly.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) os << (i ? "," : "") << kTrajectoryColumns[i];
  os << "\n";
  for (const auto& r : tr.rows) {
    const double v[] = {r.t, r.l2, r.grad, r.h1_sq, r.power, r.J, r.I, r.ledger, r.energy_residual,
                        r.N, r.Ndot, r.Nddot, r.concavity_margin, r.dt};
    for (std::size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << format_double(v[i]);
    os << "\n";
  }
}

inline void write_curve_csv(std::ostream& os, const WellCurve& c) {
  os << "delta,r,d_formula,d_nehari\n";
  for (std::size_t i = 0; i < c.delta.size(); ++i)
    os << format_double(c.delta[i]) << "," << format_double(c.r[i]) << ","
       << (c.d_formula[i] ? format_double(*c.d_formula[i]) : std::string()) << "," << format_double(c.d_nehari[i])
       << "\n";
}

/// Non-finite values become null.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

inline Json to_json(const DomainSpec& d) {
  return Json{{"dim", d.dim()}, {"lengths", d.lengths()}, {"resolution", d.resolution()}};
}

inline Json to_json(const WellConstants& k) {
  Json j;
  j["domain"] = to_json(k.domain);
  j["p"] = k.params.p();
  j["sobolev_C"] = k.sobolev_C;
  j["sobolev_method"] = k.sobolev_method;
  j["sobolev_iterations"] = k.sobolev_iterations;
  j["safety"] = k.safety;
  j["C_eff"] = k.C_eff();
  j["lambda1"] = k.lambda1;
  j["d_hat"] = k.d_hat;
  j["d_formula_at_1"] = k.d_formula_at_1;
  j["d_hat_over_d_formula"] = k.d_hat / k.d_formula_at_1;
  j["delta0"] = k.delta0;
  j["pool_size"] = k.depth->pool().size();
  return j;
}

inline Json to_json(const RegimeReport& r) {
  Json j;
  j["J0"] = number(r.J0);
  j["I0"] = number(r.I0);
  j["grad_sq0"] = number(r.grad_sq0);
  j["h1_sq0"] = number(r.h1_sq0);
  j["d_hat"] = r.d_hat;
  j["d_formula_at_1"] = r.d_formula_at_1;
  j["lambda1"] = r.lambda1;
  j["trivial"] = r.trivial;
  j["in_W"] = r.in_W;
  j["in_V"] = r.in_V;
  j["near_critical"] = r.near_critical;
  j["delta1"] = optional_number(r.delta1);
  j["delta2"] = optional_number(r.delta2);
  j["predicted_regime"] = to_string(r.predicted_regime);
  j["mu_pred"] = r.mu_pred;
  j["high_energy_checks"] = {r.high_energy_checks[0], r.high_energy_checks[1], r.high_energy_checks[2]};
  j["alpha"] = optional_number(r.alpha);
  j["lambda_alpha_lower"] = optional_number(r.lambda_alpha_lower);
  j["lambda_alpha_estimate"] = optional_number(r.lambda_alpha_estimate);
  Json grid = Json::array();
  for (std::size_t i = 0; i < r.delta_grid.size(); ++i)
    grid.push_back({{"delta", r.delta_grid[i]}, {"in_W", static_cast<bool>(r.in_W_delta[i])},
                    {"in_V", static_cast<bool>(r.in_V_delta[i])}});
  j["delta_membership"] = std::move(grid);
  return j;
}

inline Json to_json(const VerifyReport& rep) {
  Json props = Json::array();
  std::size_t failed = 0;
  for (const auto& p : rep.properties) {
    props.push_back({{"name", p.name},
                     {"passed", p.passed()},
                     {"cases", p.cases},
                     {"failures", p.failures},
                     {"worst", number(p.worst)}});
    if (!p.passed()) ++failed;
  }
  return Json{{"passed", rep.passed()}, {"properties_failed", failed}, {"properties", std::move(props)}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace pwell
