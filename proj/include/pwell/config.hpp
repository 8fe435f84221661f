#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pwell/domain.hpp"
#include "pwell/error.hpp"
#include "pwell/functionals.hpp"
#include "pwell/random_fields.hpp"
#include "pwell/solver.hpp"
#include "pwell/wells.hpp"

namespace pwell {

struct InitialMode {
  std::vector<std::size_t> index;  ///< one entry per axis, 1-based
  double amplitude = 0.0;
};

struct InitialSpec {
  std::vector<InitialMode> modes;
  std::optional<std::uint64_t> random_seed;  ///< adds a random smooth field when set
  std::size_t random_modes = 0;              ///< 0 = every mode
  double random_amplitude = 0.5;             ///< max |v| of the random part
};

struct AnalysisConfig {
  std::size_t directions = 1000;
  std::size_t sobolev_starts = 20;
  std::size_t refine_candidates = 2;
  std::size_t delta_points = 200;
  double safety = 1.05;
  std::optional<double> alpha;
  std::uint64_t seed = 7;
  double sweep_min = 0.05;
  double sweep_max = 5.0;
  std::size_t sweep_count = 100;
  bool sweep_simulate = false;

  AnalysisBudget budget() const {
    AnalysisBudget b;
    b.sobolev.starts = sobolev_starts;
    b.sobolev.seed = seed;
    b.depth.directions = directions;
    b.depth.refine_candidates = refine_candidates;
    b.depth.seed = seed;
    b.safety = safety;
    b.curve_points = delta_points;
    return b;
  }
};

struct ExperimentConfig {
  DomainSpec domain = DomainSpec::interval(1.0, 128);
  ModelParams model{3.0};
  InitialSpec initial;
  SolverConfig solver;
  AnalysisConfig analysis;

  /// Overrides every seed (initial data and sampling).
  void set_seed(std::uint64_t seed) {
    analysis.seed = seed;
    if (initial.random_seed) initial.random_seed = seed;
  }
};

struct ConfigKey {
  const char* section;
  const char* key;
  const char* fallback;  ///< nullptr when required
  const char* help;
};

/// Every accepted key. Sections domain, model and initial are required.
inline constexpr ConfigKey kConfigKeys[] = {
    {"domain", "dim", nullptr, "1 or 2"},
    {"domain", "lengths", "1", "comma-separated side lengths, one per axis"},
    {"domain", "resolution", "128", "comma-separated interior grid counts (>= 8)"},
    {"model", "p", nullptr, "power index, p > 1"},
    {"initial", "modes", "", "semicolon-separated index:amplitude pairs, index is i or i,j"},
    {"initial", "random_seed", "", "add a random smooth field drawn with this seed"},
    {"initial", "random_modes", "0", "restrict the random field to modes <= this (0 = all)"},
    {"initial", "random_amplitude", "0.5", "max |v| of the random field"},
    {"solver", "t_end", "1", "final time"},
    {"solver", "dt_init", "1e-3", "first trial step"},
    {"solver", "dt_min", "0", "smallest step (0 = 1e-12 t_end)"},
    {"solver", "dt_max", "0.25", "largest step"},
    {"solver", "rel_tol", "1e-8", "relative local error tolerance"},
    {"solver", "abs_tol", "1e-12", "absolute local error tolerance"},
    {"solver", "blowup_threshold", "1e6", "H^1_0 norm declaring blow-up"},
    {"solver", "oversample", "2", "fine-grid factor for the source term"},
    {"solver", "record_stride", "1", "record every n-th accepted step"},
    {"analysis", "directions", "1000", "random directions for the well depth"},
    {"analysis", "sobolev_starts", "20", "multi-start count for the Sobolev constant"},
    {"analysis", "refine_candidates", "2", "directions refined per anchor"},
    {"analysis", "delta_points", "200", "delta grid size of the well curve"},
    {"analysis", "safety", "1.05", "safety factor on the Sobolev constant"},
    {"analysis", "alpha", "", "energy level for the supercritical test"},
    {"analysis", "seed", "7", "sampling seed"},
    {"analysis", "sweep_min", "0.05", "smallest sweep amplitude"},
    {"analysis", "sweep_max", "5", "largest sweep amplitude"},
    {"analysis", "sweep_count", "100", "sweep amplitudes (linear grid)"},
    {"analysis", "sweep_simulate", "false", "also simulate every sweep row"},
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, int line, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw ConfigError(what + ": not a number: '" + s + "'", line);
  if (!std::isfinite(v)) throw ConfigError(what + ": value must be finite", line);
  return v;
}

inline std::uint64_t parse_uint(const std::string& s, int line, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError(what + ": not a non-negative integer: '" + s + "'", line);
  return v;
}

inline bool parse_bool(const std::string& s, int line, const std::string& what) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(what + ": expected true or false", line);
}

inline const ConfigKey* find_key(const std::string& section, const std::string& key) {
  for (const auto& k : kConfigKeys)
    if (section == k.section && key == k.key) return &k;
  return nullptr;
}

}  // namespace detail

/// Parses the sectioned key = value format. Errors carry the offending line.
inline ExperimentConfig parse_config(const std::string& text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, std::map<std::string, Entry>> entries;
  std::map<std::string, int> section_line;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = detail::trim(std::string_view(raw).substr(0, hash));
    if (s.empty() || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", line);
      section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
      static const char* known[] = {"domain", "model", "initial", "solver", "analysis"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("unknown section [" + section + "]", line);
      if (section_line.count(section))
        throw ConfigError("duplicate section [" + section + "] (first at line " +
                              std::to_string(section_line[section]) + ")",
                          line);
      section_line[section] = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    const std::string key = detail::trim(std::string_view(s).substr(0, eq));
    const std::string value = detail::trim(std::string_view(s).substr(eq + 1));
    if (!detail::find_key(section, key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    auto& sec = entries[section];
    if (auto it = sec.find(key); it != sec.end())
      throw ConfigError("duplicate key '" + key + "' at lines " + std::to_string(it->second.line) + " and " +
                            std::to_string(line),
                        line);
    sec[key] = Entry{value, line};
  }
  for (const char* required : {"domain", "model", "initial"})
    if (!section_line.count(required)) throw ConfigError(std::string("missing section [") + required + "]");

  auto get = [&](const char* sec, const char* key) -> std::pair<std::string, int> {
    auto s = entries.find(sec);
    if (s != entries.end()) {
      auto e = s->second.find(key);
      if (e != s->second.end()) return {e->second.value, e->second.line};
    }
    const auto* k = detail::find_key(sec, key);
    if (!k->fallback)
      throw ConfigError(std::string("missing key '") + key + "' in [" + sec + "]", section_line.count(sec) ? section_line[sec] : 0);
    return {k->fallback, 0};
  };
  auto num = [&](const char* sec, const char* key) {
    auto [v, l] = get(sec, key);
    return detail::parse_double(v, l, key);
  };
  auto uint = [&](const char* sec, const char* key) {
    auto [v, l] = get(sec, key);
    return detail::parse_uint(v, l, key);
  };
  auto positive = [&](const char* sec, const char* key) {
    const double v = num(sec, key);
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive", get(sec, key).second);
    return v;
  };

  ExperimentConfig cfg;
  {
    const auto dim = uint("domain", "dim");
    const int dim_line = get("domain", "dim").second;
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2", dim_line);
    auto [lv, ll] = get("domain", "lengths");
    auto [rv, rl] = get("domain", "resolution");
    auto lens = detail::split(lv, ',');
    auto res = detail::split(rv, ',');
    if (lens.size() == 1 && dim == 2) lens.push_back(lens[0]);
    if (res.size() == 1 && dim == 2) res.push_back(res[0]);
    if (lens.size() != dim) throw ConfigError("lengths needs one value per axis", ll);
    if (res.size() != dim) throw ConfigError("resolution needs one value per axis", rl);
    std::vector<double> L;
    std::vector<std::size_t> N;
    for (const auto& x : lens) L.push_back(detail::parse_double(x, ll, "lengths"));
    for (const auto& x : res) N.push_back(detail::parse_uint(x, rl, "resolution"));
    try {
      cfg.domain = DomainSpec(L, N);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what(), ll > 0 ? ll : rl);
    }
  }
  {
    const double p = num("model", "p");
    if (!(p > 1.0)) throw ConfigError("p must satisfy p > 1", get("model", "p").second);
    cfg.model = ModelParams(p);
  }
  {
    auto [mv, ml] = get("initial", "modes");
    if (!mv.empty()) {
      for (const auto& pair : detail::split(mv, ';')) {
        if (pair.empty()) continue;
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw ConfigError("mode entry needs index:amplitude", ml);
        InitialMode m;
        for (const auto& i : detail::split(std::string_view(pair).substr(0, colon), ','))
          m.index.push_back(detail::parse_uint(i, ml, "mode index"));
        m.amplitude = detail::parse_double(detail::trim(std::string_view(pair).substr(colon + 1)), ml, "amplitude");
        if (m.index.size() != cfg.domain.dim()) throw ConfigError("mode index needs one entry per axis", ml);
        for (std::size_t a = 0; a < m.index.size(); ++a)
          if (m.index[a] < 1 || m.index[a] > cfg.domain.points(a)) throw ConfigError("mode index out of range", ml);
        cfg.initial.modes.push_back(std::move(m));
      }
    }
    auto [sv, sl] = get("initial", "random_seed");
    if (!sv.empty()) cfg.initial.random_seed = detail::parse_uint(sv, sl, "random_seed");
    cfg.initial.random_modes = uint("initial", "random_modes");
    cfg.initial.random_amplitude = positive("initial", "random_amplitude");
  }
  {
    auto& s = cfg.solver;
    s.t_end = positive("solver", "t_end");
    s.dt_init = positive("solver", "dt_init");
    s.dt_min = num("solver", "dt_min");
    if (s.dt_min < 0.0) throw ConfigError("dt_min must be non-negative", get("solver", "dt_min").second);
    s.dt_max = positive("solver", "dt_max");
    s.rel_tol = positive("solver", "rel_tol");
    s.abs_tol = positive("solver", "abs_tol");
    s.blowup_threshold = positive("solver", "blowup_threshold");
    s.oversample = static_cast<int>(uint("solver", "oversample"));
    s.record_stride = uint("solver", "record_stride");
    try {
      s.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what(), section_line.count("solver") ? section_line["solver"] : 0);
    }
  }
  {
    auto& a = cfg.analysis;
    a.directions = uint("analysis", "directions");
    a.sobolev_starts = uint("analysis", "sobolev_starts");
    a.refine_candidates = uint("analysis", "refine_candidates");
    a.delta_points = uint("analysis", "delta_points");
    a.safety = num("analysis", "safety");
    if (a.safety < 1.0) throw ConfigError("safety must be >= 1", get("analysis", "safety").second);
    if (a.sobolev_starts < 1) throw ConfigError("sobolev_starts must be >= 1", get("analysis", "sobolev_starts").second);
    if (a.delta_points < 3) throw ConfigError("delta_points must be >= 3", get("analysis", "delta_points").second);
    auto [av, al] = get("analysis", "alpha");
    if (!av.empty()) a.alpha = detail::parse_double(av, al, "alpha");
    a.seed = uint("analysis", "seed");
    a.sweep_min = positive("analysis", "sweep_min");
    a.sweep_max = positive("analysis", "sweep_max");
    a.sweep_count = uint("analysis", "sweep_count");
    if (!(a.sweep_max >= a.sweep_min) || a.sweep_count < 1)
      throw ConfigError("sweep grid needs sweep_min <= sweep_max and sweep_count >= 1", get("analysis", "sweep_count").second);
    auto [bv, bl] = get("analysis", "sweep_simulate");
    a.sweep_simulate = detail::parse_bool(bv, bl, "sweep_simulate");
  }
  return cfg;
}

namespace detail {
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

/// Writes a configuration that parses back to the same values.
inline std::string format_config(const ExperimentConfig& c) {
  using detail::fmt;
  std::ostringstream o;
  const auto& d = c.domain;
  o << "[domain]\ndim = " << d.dim() << "\nlengths = ";
  for (std::size_t a = 0; a < d.dim(); ++a) o << (a ? "," : "") << fmt(d.lengths()[a]);
  o << "\nresolution = ";
  for (std::size_t a = 0; a < d.dim(); ++a) o << (a ? "," : "") << d.points(a);
  o << "\n\n[model]\np = " << fmt(c.model.p()) << "\n\n[initial]\nmodes = ";
  for (std::size_t i = 0; i < c.initial.modes.size(); ++i) {
    const auto& m = c.initial.modes[i];
    o << (i ? "; " : "");
    for (std::size_t a = 0; a < m.index.size(); ++a) o << (a ? "," : "") << m.index[a];
    o << ":" << fmt(m.amplitude);
  }
  o << "\n";
  if (c.initial.random_seed) o << "random_seed = " << *c.initial.random_seed << "\n";
  o << "random_modes = " << c.initial.random_modes << "\nrandom_amplitude = " << fmt(c.initial.random_amplitude);
  const auto& s = c.solver;
  o << "\n\n[solver]\nt_end = " << fmt(s.t_end) << "\ndt_init = " << fmt(s.dt_init) << "\ndt_min = " << fmt(s.dt_min)
    << "\ndt_max = " << fmt(s.dt_max) << "\nrel_tol = " << fmt(s.rel_tol) << "\nabs_tol = " << fmt(s.abs_tol)
    << "\nblowup_threshold = " << fmt(s.blowup_threshold) << "\noversample = " << s.oversample
    << "\nrecord_stride = " << s.record_stride;
  const auto& a = c.analysis;
  o << "\n\n[analysis]\ndirections = " << a.directions << "\nsobolev_starts = " << a.sobolev_starts
    << "\nrefine_candidates = " << a.refine_candidates << "\ndelta_points = " << a.delta_points
    << "\nsafety = " << fmt(a.safety) << "\n";
  if (a.alpha) o << "alpha = " << fmt(*a.alpha) << "\n";
  o << "seed = " << a.seed << "\nsweep_min = " << fmt(a.sweep_min) << "\nsweep_max = " << fmt(a.sweep_max)
    << "\nsweep_count = " << a.sweep_count << "\nsweep_simulate = " << (a.sweep_simulate ? "true" : "false") << "\n";
  return o.str();
}

/// Spectral coefficients of the configured initial data.
inline std::vector<double> initial_coefficients(const ExperimentConfig& c, const Discretization& disc) {
  const auto& d = disc.domain();
  std::vector<double> q(d.size(), 0.0);
  if (c.initial.random_seed) {
    q = random_smooth_coeffs(disc, *c.initial.random_seed, 0, c.initial.random_modes);
    const auto fine = disc.fine_values(q);
    double m = 0.0;
    for (double x : fine) m = std::max(m, std::abs(x));
    if (m > 0.0)
      for (double& x : q) x *= c.initial.random_amplitude / m;
  }
  for (const auto& m : c.initial.modes) {
    std::size_t flat = m.index[0] - 1;
    if (d.dim() == 2) flat = flat * d.points(1) + (m.index[1] - 1);
    q[flat] += m.amplitude;
  }
  return q;
}

}  // namespace pwell
