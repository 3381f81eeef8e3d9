#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "dicke/error.hpp"
#include "dicke/model.hpp"

namespace dicke::io {

using json = nlohmann::ordered_json;

struct CriticalPointsBlock {
  double q_min = -6.0, q_max = 6.0;
  int q_count = 21;
  double Q_min = -1.9, Q_max = 1.9;
  int Q_count = 21;
};

struct PoincareBlock {
  std::vector<double> eps{-5.0, -4.0, -3.0, -2.5, -2.0, -1.0, -0.8, 1.0};
  int trajectories = 20;
  double t_max = 1000.0;
  double tol = 1e-10;
  std::string direction = "both";  // both | upward | downward
};

struct LyapunovBlock {
  std::vector<double> eps{-5.0, -2.5, 1.0};
  int trajectories = 20;
  double t_max = 5000.0;
  double tol = 1e-10;
};

/// Options shared by the commands that diagonalize H.
struct QuantumBlock {
  std::string solver = "dense";  // dense | window
  double eps_max = 1.0;          // window ceiling and convergence-check ceiling
  std::string alpha_convention = "semiclassical";  // semiclassical | literal
  double memory_budget_gib = 3.0;
};

struct SpectrumBlock {
  QuantumBlock quantum;
  bool save_vectors = false;
};

struct PeresBlock {
  QuantumBlock quantum;
  std::vector<std::string> observables{"C", "number", "jz"};
  double tau = 0.98;
};

struct DispersionBlock {
  QuantumBlock quantum;
  double tau = 0.98;
};

struct ConvergenceBlock {
  double eps_max = 1.0;
  std::string alpha_convention = "semiclassical";
};

struct CrosscheckBlock {
  int samples = 50;
  std::vector<double> j_values{15.0, 30.0};
  double tolerance = 1e-3;
  double noise_floor = 1e-8;  // deviations below this count as equal when comparing sizes (Fock tail roundoff)
  std::string alpha_convention = "semiclassical";
};

struct RunConfig {
  ModelParams params;
  int n_max = 0;  // 0 selects the default 8 j
  std::uint64_t seed = 0;
  int workers = 0;  // 0 uses every hardware thread
  CriticalPointsBlock critical_points;
  PoincareBlock poincare;
  LyapunovBlock lyapunov;
  SpectrumBlock spectrum;
  PeresBlock peres;
  DispersionBlock dispersion;
  ConvergenceBlock convergence;
  CrosscheckBlock crosscheck;

  [[nodiscard]] int resolved_n_max() const {
    return n_max > 0 ? n_max : static_cast<int>(std::lround(8.0 * params.j));
  }
};

namespace detail {

/// Reads the keys of one JSON object, rejecting anything not read.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("config entry '" + where("") + "' must be an object");
  }

  template <class T>
  void read(const std::string& key, T& out) {
    known_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("invalid value for key '" + where(key) + "': " + e.what());
    }
  }

  template <class F>
  void block(const std::string& key, F&& parse) {
    known_.insert(key);
    if (obj_.contains(key)) parse(obj_.at(key), where(key));
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!known_.count(k)) throw ConfigError("unknown config key '" + where(k) + "'");
    }
  }

 private:
  [[nodiscard]] std::string where(const std::string& key) const {
    if (path_.empty()) return key;
    return key.empty() ? path_ : path_ + "." + key;
  }
  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

inline void read_quantum(ObjectReader& r, QuantumBlock& q) {
  r.read("solver", q.solver);
  r.read("eps_max", q.eps_max);
  r.read("alpha_convention", q.alpha_convention);
  r.read("memory_budget_gib", q.memory_budget_gib);
}

inline json quantum_json(const QuantumBlock& q) {
  return {{"solver", q.solver},
          {"eps_max", q.eps_max},
          {"alpha_convention", q.alpha_convention},
          {"memory_budget_gib", q.memory_budget_gib}};
}

inline void require_one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ConfigError("invalid value '" + v + "' for key '" + key + "': expected " + list);
}

}  // namespace detail

/// Checks the cross-field constraints; messages name the offending key.
inline void validate(const RunConfig& c) {
  c.params.validate();
  if (c.n_max < 0) throw ConfigError("invalid parameter 'n_max': must be >= 1 (or 0 for the default 8 j)");
  auto positive = [](const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError("invalid parameter '" + key + "': must be positive");
  };
  positive("poincare.t_max", c.poincare.t_max);
  positive("lyapunov.t_max", c.lyapunov.t_max);
  positive("poincare.trajectories", c.poincare.trajectories);
  positive("lyapunov.trajectories", c.lyapunov.trajectories);
  positive("crosscheck.samples", c.crosscheck.samples);
  positive("critical-points.q_count", c.critical_points.q_count);
  positive("critical-points.Q_count", c.critical_points.Q_count);
  for (const auto& [name, tol] : {std::pair{"poincare.tol", c.poincare.tol}, std::pair{"lyapunov.tol", c.lyapunov.tol}}) {
    if (!(tol >= 1e-12 && tol <= 1e-6)) throw ConfigError(std::string("invalid parameter '") + name + "': must lie in [1e-12, 1e-6]");
  }
  detail::require_one_of("poincare.direction", c.poincare.direction, {"both", "upward", "downward"});
  for (const auto& [name, q] : {std::pair{"spectrum", &c.spectrum.quantum}, std::pair{"peres", &c.peres.quantum},
                                std::pair{"dispersion", &c.dispersion.quantum}}) {
    detail::require_one_of(std::string(name) + ".solver", q->solver, {"dense", "window"});
    detail::require_one_of(std::string(name) + ".alpha_convention", q->alpha_convention, {"semiclassical", "literal"});
    positive(std::string(name) + ".memory_budget_gib", q->memory_budget_gib);
  }
  detail::require_one_of("convergence.alpha_convention", c.convergence.alpha_convention, {"semiclassical", "literal"});
  detail::require_one_of("crosscheck.alpha_convention", c.crosscheck.alpha_convention, {"semiclassical", "literal"});
  for (const auto& o : c.peres.observables) {
    detail::require_one_of("peres.observables", o, {"number", "jz", "C", "jzprime", "parity"});
  }
  for (double tau : {c.peres.tau, c.dispersion.tau}) {
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("invalid parameter 'tau': must lie in (0, 1)");
  }
  for (double j : c.crosscheck.j_values) {
    if (!(j >= 0.5) || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-12) {
      throw ConfigError("invalid parameter 'crosscheck.j_values': entries must be positive multiples of 1/2");
    }
  }
}

/// Overlays the keys present in `doc` onto `c`.
inline void apply_json(RunConfig& c, const json& doc) {
  detail::ObjectReader top(doc, "");
  top.read("omega", c.params.omega);
  top.read("omega0", c.params.omega0);
  top.read("lambda", c.params.lambda);
  top.read("alpha", c.params.alpha);
  top.read("j", c.params.j);
  top.read("n_max", c.n_max);
  top.read("seed", c.seed);
  top.read("workers", c.workers);
  top.block("critical-points", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    auto& g = c.critical_points;
    r.read("q_min", g.q_min);
    r.read("q_max", g.q_max);
    r.read("q_count", g.q_count);
    r.read("Q_min", g.Q_min);
    r.read("Q_max", g.Q_max);
    r.read("Q_count", g.Q_count);
    r.finish();
  });
  top.block("poincare", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    r.read("eps", c.poincare.eps);
    r.read("trajectories", c.poincare.trajectories);
    r.read("t_max", c.poincare.t_max);
    r.read("tol", c.poincare.tol);
    r.read("direction", c.poincare.direction);
    r.finish();
  });
  top.block("lyapunov", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    r.read("eps", c.lyapunov.eps);
    r.read("trajectories", c.lyapunov.trajectories);
    r.read("t_max", c.lyapunov.t_max);
    r.read("tol", c.lyapunov.tol);
    r.finish();
  });
  top.block("spectrum", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    detail::read_quantum(r, c.spectrum.quantum);
    r.read("save_vectors", c.spectrum.save_vectors);
    r.finish();
  });
  top.block("peres", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    detail::read_quantum(r, c.peres.quantum);
    r.read("observables", c.peres.observables);
    r.read("tau", c.peres.tau);
    r.finish();
  });
  top.block("dispersion", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    detail::read_quantum(r, c.dispersion.quantum);
    r.read("tau", c.dispersion.tau);
    r.finish();
  });
  top.block("convergence", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    r.read("eps_max", c.convergence.eps_max);
    r.read("alpha_convention", c.convergence.alpha_convention);
    r.finish();
  });
  top.block("crosscheck", [&](const json& b, const std::string& path) {
    detail::ObjectReader r(b, path);
    r.read("samples", c.crosscheck.samples);
    r.read("j_values", c.crosscheck.j_values);
    r.read("tolerance", c.crosscheck.tolerance);
    r.read("noise_floor", c.crosscheck.noise_floor);
    r.read("alpha_convention", c.crosscheck.alpha_convention);
    r.finish();
  });
  top.finish();
}

[[nodiscard]] inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

/// Complete resolved configuration; apply_json(RunConfig{}, to_json(c)) == c.
[[nodiscard]] inline json to_json(const RunConfig& c) {
  const auto& g = c.critical_points;
  return {
      {"omega", c.params.omega},
      {"omega0", c.params.omega0},
      {"lambda", c.params.lambda},
      {"alpha", c.params.alpha},
      {"j", c.params.j},
      {"n_max", c.resolved_n_max()},
      {"seed", c.seed},
      {"workers", c.workers},
      {"critical-points",
       {{"q_min", g.q_min}, {"q_max", g.q_max}, {"q_count", g.q_count}, {"Q_min", g.Q_min}, {"Q_max", g.Q_max},
        {"Q_count", g.Q_count}}},
      {"poincare",
       {{"eps", c.poincare.eps},
        {"trajectories", c.poincare.trajectories},
        {"t_max", c.poincare.t_max},
        {"tol", c.poincare.tol},
        {"direction", c.poincare.direction}}},
      {"lyapunov",
       {{"eps", c.lyapunov.eps},
        {"trajectories", c.lyapunov.trajectories},
        {"t_max", c.lyapunov.t_max},
        {"tol", c.lyapunov.tol}}},
      {"spectrum", [&] {
         json b = detail::quantum_json(c.spectrum.quantum);
         b["save_vectors"] = c.spectrum.save_vectors;
         return b;
       }()},
      {"peres", [&] {
         json b = detail::quantum_json(c.peres.quantum);
         b["observables"] = c.peres.observables;
         b["tau"] = c.peres.tau;
         return b;
       }()},
      {"dispersion", [&] {
         json b = detail::quantum_json(c.dispersion.quantum);
         b["tau"] = c.dispersion.tau;
         return b;
       }()},
      {"convergence", {{"eps_max", c.convergence.eps_max}, {"alpha_convention", c.convergence.alpha_convention}}},
      {"crosscheck",
       {{"samples", c.crosscheck.samples},
        {"j_values", c.crosscheck.j_values},
        {"tolerance", c.crosscheck.tolerance},
        {"noise_floor", c.crosscheck.noise_floor},
        {"alpha_convention", c.crosscheck.alpha_convention}}},
  };
}

}  // namespace dicke::io
