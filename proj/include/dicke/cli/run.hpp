#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dicke/classical/critical_points.hpp"
#include "dicke/classical/lyapunov.hpp"
#include "dicke/classical/poincare.hpp"
#include "dicke/classical/sampling.hpp"
#include "dicke/io/config.hpp"
#include "dicke/io/csv.hpp"
#include "dicke/io/eigenvectors.hpp"
#include "dicke/io/manifest.hpp"
#include "dicke/io/plot_scripts.hpp"
#include "dicke/observables/constants.hpp"
#include "dicke/observables/diagonal.hpp"
#include "dicke/observables/dispersion.hpp"
#include "dicke/observables/peres.hpp"
#include "dicke/quantum/coherent_state.hpp"
#include "dicke/quantum/spectrum.hpp"
#include "dicke/quantum/truncation.hpp"
#include "dicke/util/parallel.hpp"
#include "dicke/util/rng.hpp"

namespace dicke::cli {

namespace fs = std::filesystem;
using io::json;

enum ExitCode { kOk = 0, kConfigFailure = 1, kNumericalFailure = 2 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"critical-points", "poincare",    "lyapunov",    "spectrum",
                                              "peres",           "dispersion",  "convergence", "crosscheck"};
  return names;
}

/// Command-line values that override the configuration file.
struct Overrides {
  std::optional<double> omega, omega0, lambda, alpha, j, t_max, eps_max;
  std::optional<int> n_max, trajectories, workers;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps;
  std::vector<std::string> observables;
  std::optional<std::string> solver;
};

inline void apply_overrides(io::RunConfig& c, const std::string& command, const Overrides& o) {
  if (o.omega) c.params.omega = *o.omega;
  if (o.omega0) c.params.omega0 = *o.omega0;
  if (o.lambda) c.params.lambda = *o.lambda;
  if (o.alpha) c.params.alpha = *o.alpha;
  if (o.j) c.params.j = *o.j;
  if (o.n_max) c.n_max = *o.n_max;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (!o.eps.empty()) {
    if (command == "poincare") c.poincare.eps = o.eps;
    else if (command == "lyapunov") c.lyapunov.eps = o.eps;
    else throw ConfigError("option '--eps' does not apply to command '" + command + "'");
  }
  if (o.t_max) {
    if (command == "poincare") c.poincare.t_max = *o.t_max;
    else if (command == "lyapunov") c.lyapunov.t_max = *o.t_max;
    else throw ConfigError("option '--t-max' does not apply to command '" + command + "'");
  }
  if (o.trajectories) {
    if (command == "poincare") c.poincare.trajectories = *o.trajectories;
    else if (command == "lyapunov") c.lyapunov.trajectories = *o.trajectories;
    else throw ConfigError("option '--trajectories' does not apply to command '" + command + "'");
  }
  if (!o.observables.empty()) {
    if (command != "peres") throw ConfigError("option '--observable' does not apply to command '" + command + "'");
    c.peres.observables = o.observables;
  }
  io::QuantumBlock* q = command == "spectrum"     ? &c.spectrum.quantum
                        : command == "peres"      ? &c.peres.quantum
                        : command == "dispersion" ? &c.dispersion.quantum
                                                  : nullptr;
  if (o.solver) {
    if (!q) throw ConfigError("option '--solver' does not apply to command '" + command + "'");
    q->solver = *o.solver;
  }
  if (o.eps_max) {
    if (q) q->eps_max = *o.eps_max;
    else if (command == "convergence") c.convergence.eps_max = *o.eps_max;
    else throw ConfigError("option '--eps-max' does not apply to command '" + command + "'");
  }
}

namespace detail {

inline quantum::AlphaConvention convention(const std::string& name) {
  return name == "literal" ? quantum::AlphaConvention::literal : quantum::AlphaConvention::semiclassical;
}

inline classical::SeedGrid seed_grid(const io::CriticalPointsBlock& b) {
  return {b.q_min, b.q_max, b.q_count, b.Q_min, b.Q_max, b.Q_count};
}

inline unsigned workers(const io::RunConfig& c) { return static_cast<unsigned>(std::max(0, c.workers)); }

struct Context {
  const io::RunConfig& cfg;
  fs::path out;
  std::ostream& err;
  io::Manifest& manifest;
};

inline void cmd_critical_points(Context& ctx) {
  const auto& p = ctx.cfg.params;
  const auto pts = classical::find_critical_points(p, seed_grid(ctx.cfg.critical_points));
  if (pts.empty()) throw NumericalError("no critical points found from the seed grid");
  io::CsvWriter csv(ctx.out / "critical_points.csv", {"lambda", "alpha", "q", "p", "Q", "P", "eps", "kind"});
  for (const auto& c : pts) csv.row() << p.lambda << p.alpha << c.x.q << c.x.p << c.x.Q << c.x.P << c.eps.eps << to_string(c.kind);
  ctx.manifest.outputs.push_back("critical_points.csv");
  ctx.manifest.diagnostics["count"] = pts.size();
}

inline void cmd_poincare(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& b = cfg.poincare;
  const auto filter = b.direction == "upward"     ? classical::CrossingFilter::upward
                      : b.direction == "downward" ? classical::CrossingFilter::downward
                                                  : classical::CrossingFilter::both;
  const std::size_t per = static_cast<std::size_t>(b.trajectories);
  const std::size_t items = b.eps.size() * per;
  std::vector<std::vector<classical::SectionPoint>> sections(items);
  std::vector<double> eps0(items), drift(items);
  classical::FlowOptions fo;
  fo.tol = b.tol;
  parallel_for(items, [&](std::size_t i) {
    const std::size_t e = i / per, t = i % per;
    const auto x0 = classical::sample_initial_condition({b.eps[e]}, cfg.params, stream_seed(cfg.seed, i));
    eps0[i] = classical::hamiltonian(x0, cfg.params).eps;
    sections[i] = classical::poincare_section(x0, b.t_max, cfg.params, filter, static_cast<std::int64_t>(t), fo);
  }, workers(cfg));

  std::vector<std::string> files;
  for (std::size_t e = 0; e < b.eps.size(); ++e) {
    const std::string name = "poincare_eps_" + io::format_label(b.eps[e]) + ".csv";
    io::CsvWriter csv(ctx.out / name, {"traj_id", "t", "q", "p", "Q", "direction", "eps0"});
    for (std::size_t t = 0; t < per; ++t) {
      const std::size_t i = e * per + t;
      for (const auto& s : sections[i]) csv.row() << static_cast<long>(s.traj_id) << s.t << s.q << s.p << s.Q << s.direction << eps0[i];
    }
    files.push_back(name);
    ctx.manifest.outputs.push_back(name);
  }
  io::write_text(ctx.out / "poincare.gp", io::poincare_plot_script(files, b.eps));
  ctx.manifest.outputs.push_back("poincare.gp");
  std::size_t total = 0;
  for (const auto& s : sections) total += s.size();
  ctx.manifest.diagnostics["section_points"] = total;
}

inline void cmd_lyapunov(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& b = cfg.lyapunov;
  const std::size_t per = static_cast<std::size_t>(b.trajectories);
  const std::size_t items = b.eps.size() * per;
  std::vector<classical::LyapunovResult> res(items);
  parallel_for(items, [&](std::size_t i) {
    const auto x0 = classical::sample_initial_condition({b.eps[i / per]}, cfg.params, stream_seed(cfg.seed, i));
    classical::LyapunovOptions lo;
    lo.tol = b.tol;
    lo.seed = stream_seed(cfg.seed ^ 0x4c59415055ULL, i);
    res[i] = classical::lyapunov_max(x0, b.t_max, cfg.params, lo);
  }, workers(cfg));
  io::CsvWriter csv(ctx.out / "lyapunov.csv", {"traj_id", "eps0", "exponent", "t_max"});
  for (std::size_t i = 0; i < items; ++i) csv.row() << static_cast<long>(i) << res[i].eps0.eps << res[i].exponent << res[i].t_max;
  ctx.manifest.outputs.push_back("lyapunov.csv");
}

/// Diagonalizes H as configured, after the mandatory truncation audit.
inline quantum::SpectrumResult solve(Context& ctx, const io::QuantumBlock& q) {
  const auto& cfg = ctx.cfg;
  const int n_max = cfg.resolved_n_max();
  const auto conv = convention(q.alpha_convention);
  const quantum::QuantumBasis basis(cfg.params.j, n_max);
  const auto budget = static_cast<std::size_t>(q.memory_budget_gib * double(1ULL << 30));

  if (q.solver != "window") quantum::check_dense_budget(basis, budget, "spectrum");

  json& diag = ctx.manifest.diagnostics;
  if (n_max >= 10) {
    const auto rep = quantum::check_truncation(cfg.params, n_max, q.eps_max, conv);
    diag["truncation"] = {{"n_max", rep.n_max},       {"n_max_reference", rep.n_max_reference},
                          {"eps_max", rep.eps_max},   {"levels", rep.levels},
                          {"max_delta", rep.max_delta}, {"converged", rep.converged}};
    if (!rep.converged) {
      ctx.err << "warning: spectrum up to eps=" << q.eps_max << " is not converged at n_max=" << n_max
              << " (max |delta eps| = " << rep.max_delta << " against n_max=" << rep.n_max_reference << ")\n";
    }
  } else {
    ctx.err << "warning: n_max=" << n_max << " is below 10; truncation audit skipped\n";
    diag["truncation"] = nullptr;
  }

  quantum::SpectrumResult s;
  if (q.solver == "window") {
    quantum::WindowOptions wo;
    wo.alpha_convention = conv;
    wo.memory_budget_bytes = budget;
    s = quantum::diagonalize_window(cfg.params, basis, q.eps_max, wo);
  } else {
    quantum::HamiltonianOptions ho;
    ho.alpha_convention = conv;
    ho.memory_budget_bytes = budget;
    s = quantum::diagonalize(quantum::build_hamiltonian(cfg.params, basis, ho), cfg.params, basis);
  }
  const auto parity = observables::diagonal_operator(quantum::OperatorRole::parity, basis);
  diag["parity_rotated_clusters"] = quantum::rotate_degenerate_clusters(
      s, [&](const Eigen::MatrixXd& v) { return parity.apply(v); });
  const auto check = quantum::verify_spectrum(s, conv);
  diag["solver"] = q.solver;
  diag["levels"] = s.size();
  diag["max_residual"] = check.max_residual;
  diag["max_orthonormality_error"] = check.max_orthonormality;
  if (check.max_residual > 1e-8 * s.h_norm || check.max_orthonormality > 1e-10) {
    throw NumericalError("eigensolver accuracy check failed: residual " + io::format_double(check.max_residual) +
                         ", orthonormality " + io::format_double(check.max_orthonormality));
  }
  return s;
}

inline void cmd_spectrum(Context& ctx) {
  const auto s = solve(ctx, ctx.cfg.spectrum.quantum);
  io::CsvWriter csv(ctx.out / "spectrum.csv", {"n", "E_n", "eps_n"});
  for (Eigen::Index n = 0; n < s.size(); ++n) csv.row() << static_cast<long>(n) << s.energies(n) << s.eps(n);
  ctx.manifest.outputs.push_back("spectrum.csv");
  if (ctx.cfg.spectrum.save_vectors) {
    io::write_eigenvectors(ctx.out / "eigenvectors.bin", s);
    ctx.manifest.outputs.push_back("eigenvectors.bin");
  }
}

inline void record_wells(Context& ctx, const observables::WellConstants& wc) {
  ctx.manifest.diagnostics["well_constants"] = {
      {"q_c", wc.q_c}, {"eps_c1", wc.eps_c1}, {"eps_c2", wc.eps_c2}, {"tau", wc.tau}};
}

inline void cmd_peres(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto wc = observables::well_constants(cfg.params, cfg.peres.tau);
  record_wells(ctx, wc);
  const auto s = solve(ctx, cfg.peres.quantum);
  const auto sec = observables::q_sectors(s.basis);
  auto warn = [&](const std::string& m) { ctx.err << "warning: " << m << '\n'; };
  const auto c_op = observables::well_sign_sectors(s.basis, sec, wc.q_c, warn);
  const Eigen::VectorXd c_nn = observables::diagonal_expectations(s, c_op);

  std::vector<Eigen::VectorXd> values;
  for (const auto& name : cfg.peres.observables) {
    if (name == "C") values.push_back(c_nn);
    else if (name == "jzprime") values.push_back(observables::diagonal_expectations(s, observables::jzprime_sectors(s.basis, cfg.params, sec)));
    else {
      const auto role = name == "number" ? quantum::OperatorRole::number
                        : name == "jz"   ? quantum::OperatorRole::jz
                                         : quantum::OperatorRole::parity;
      values.push_back(observables::diagonal_expectations(s, observables::diagonal_operator(role, s.basis)));
    }
  }
  io::CsvWriter csv(ctx.out / "peres.csv", {"n", "eps_n", "obs", "value", "well"});
  for (std::size_t o = 0; o < values.size(); ++o) {
    for (const auto& r : observables::peres_lattice(s, cfg.peres.observables[o], values[o], c_nn, wc)) {
      csv.row() << static_cast<long>(r.n) << r.eps_n.eps << r.obs << r.value << observables::to_string(r.well);
    }
  }
  ctx.manifest.outputs.push_back("peres.csv");
  io::write_text(ctx.out / "peres.gp", io::peres_plot_script("peres.csv", cfg.peres.observables, wc.eps_c1, wc.eps_c2));
  ctx.manifest.outputs.push_back("peres.gp");
}

inline void cmd_dispersion(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto wc = observables::well_constants(cfg.params, cfg.dispersion.tau);
  record_wells(ctx, wc);
  const auto s = solve(ctx, cfg.dispersion.quantum);
  const auto sec = observables::q_sectors(s.basis);
  auto warn = [&](const std::string& m) { ctx.err << "warning: " << m << '\n'; };
  const Eigen::VectorXd c_nn =
      observables::diagonal_expectations(s, observables::well_sign_sectors(s.basis, sec, wc.q_c, warn));
  const auto d = observables::dispersion_Jzprime(s, observables::jzprime_sectors(s.basis, cfg.params, sec));
  const auto bands = observables::band_quantum_numbers(d, s.basis.j());
  io::CsvWriter csv(ctx.out / "dispersion.csv",
                    {"n", "eps_n", "jzprime_mean", "jzprime_var", "band_index", "classifiable", "well"});
  for (Eigen::Index n = 0; n < s.size(); ++n) {
    const auto& b = bands[static_cast<std::size_t>(n)];
    csv.row() << static_cast<long>(n) << s.eps(n) << b.mean << b.variance << b.m_prime << (b.classifiable ? 1 : 0)
              << observables::to_string(observables::classify_wells(c_nn(n), s.eps(n), wc));
  }
  ctx.manifest.outputs.push_back("dispersion.csv");
}

inline void cmd_convergence(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto rep = quantum::check_truncation(cfg.params, cfg.resolved_n_max(), cfg.convergence.eps_max,
                                             convention(cfg.convergence.alpha_convention));
  io::CsvWriter csv(ctx.out / "convergence.csv",
                    {"n_max", "n_max_reference", "eps_max", "levels", "max_delta", "converged"});
  csv.row() << rep.n_max << rep.n_max_reference << rep.eps_max << static_cast<long>(rep.levels) << rep.max_delta
            << (rep.converged ? 1 : 0);
  ctx.manifest.outputs.push_back("convergence.csv");
  ctx.manifest.diagnostics["converged"] = rep.converged;
  if (!rep.converged) {
    ctx.err << "not converged: max |delta eps| = " << rep.max_delta << " for " << rep.levels << " levels\n";
  }
}

/// Random in-domain phase-space points shared by every spin size.
inline std::vector<classical::PhaseState> crosscheck_points(std::uint64_t seed, int count) {
  std::vector<classical::PhaseState> pts;
  for (int i = 0; i < count; ++i) {
    auto rng = stream_rng(seed ^ 0x43524f5353ULL, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> boson(-3.0, 3.0), angle(0.0, 2.0 * M_PI), unit(0.0, 1.0);
    const double q = boson(rng), p = boson(rng);
    const double rad = 1.9 * std::sqrt(unit(rng)), phi = angle(rng);
    pts.push_back({q, p, rad * std::cos(phi), rad * std::sin(phi)});
  }
  return pts;
}

struct CrosscheckResult {
  std::vector<double> j_values;
  std::vector<double> max_deviation;
  bool passed = false;
};

inline CrosscheckResult cmd_crosscheck(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& b = cfg.crosscheck;
  const auto pts = crosscheck_points(cfg.seed, b.samples);
  const auto conv = convention(b.alpha_convention);
  io::CsvWriter csv(ctx.out / "crosscheck.csv",
                    {"j", "sample", "q", "p", "Q", "P", "eps_quantum", "eps_classical", "deviation", "n_max"});
  CrosscheckResult res;
  for (double j : b.j_values) {
    ModelParams p = cfg.params;
    p.j = j;
    double worst = 0.0;
    std::vector<double> eq(pts.size()), ec(pts.size());
    std::vector<int> cut(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto& x = pts[i];
      cut[i] = quantum::detail::suggested_cutoff(0.5 * j * (x.q * x.q + x.p * x.p)) + 1;
      const quantum::QuantumBasis basis(j, cut[i]);
      eq[i] = quantum::reduced_energy_expectation(quantum::build_coherent_state(x, basis), p, basis, conv);
      ec[i] = classical::hamiltonian(x, p).eps;
    }, workers(cfg));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double dev = std::abs(eq[i] - ec[i]);
      worst = std::max(worst, dev);
      const auto& x = pts[i];
      csv.row() << j << static_cast<long>(i) << x.q << x.p << x.Q << x.P << eq[i] << ec[i] << dev << cut[i];
    }
    res.j_values.push_back(j);
    res.max_deviation.push_back(worst);
  }
  ctx.manifest.outputs.push_back("crosscheck.csv");

  bool ok = true;
  for (std::size_t k = 0; k < res.j_values.size(); ++k) {
    if (res.j_values[k] >= 15.0 && !(res.max_deviation[k] < b.tolerance)) ok = false;
    for (std::size_t l = 0; l < res.j_values.size(); ++l) {
      if (res.j_values[l] > res.j_values[k] &&
          res.max_deviation[l] > std::max(res.max_deviation[k], b.noise_floor)) ok = false;
    }
  }
  res.passed = ok;
  json per = json::array();
  for (std::size_t k = 0; k < res.j_values.size(); ++k) per.push_back({{"j", res.j_values[k]}, {"max_deviation", res.max_deviation[k]}});
  ctx.manifest.diagnostics["crosscheck"] = per;
  ctx.manifest.diagnostics["passed"] = ok;
  return res;
}

}  // namespace detail

/// Runs one resolved command, writing data files and the manifest into `out`.
inline int execute(const std::string& command, const io::RunConfig& cfg, const fs::path& out, std::ostream& err) {
  fs::create_directories(out);
  io::Manifest manifest{command, cfg, {}, json::object()};
  detail::Context ctx{cfg, out, err, manifest};
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  if (command == "critical-points") detail::cmd_critical_points(ctx);
  else if (command == "poincare") detail::cmd_poincare(ctx);
  else if (command == "lyapunov") detail::cmd_lyapunov(ctx);
  else if (command == "spectrum") detail::cmd_spectrum(ctx);
  else if (command == "peres") detail::cmd_peres(ctx);
  else if (command == "dispersion") detail::cmd_dispersion(ctx);
  else if (command == "convergence") detail::cmd_convergence(ctx);
  else if (command == "crosscheck") {
    if (!detail::cmd_crosscheck(ctx).passed) {
      err << "crosscheck failed: deviation above tolerance or growing with j (see crosscheck.csv)\n";
      code = kNumericalFailure;
    }
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  manifest.diagnostics["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_manifest(out, manifest);
  return code;
}

/// Entry point: `dicke <command> [options]` or `dicke replay <manifest> [--out dir]`.
inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  CLI::App app{"Classical and quantum chaos analysis of the deformed Dicke model", "dicke"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path, out_dir, manifest_path;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", o.seed, "64-bit master seed");
    sub->add_option("--omega", o.omega, "boson frequency");
    sub->add_option("--omega0", o.omega0, "atomic level splitting");
    sub->add_option("--lambda", o.lambda, "atom-field coupling");
    sub->add_option("--alpha", o.alpha, "deformation strength");
    sub->add_option("--j", o.j, "collective spin j = N/2");
    sub->add_option("--n-max", o.n_max, "Fock cutoff (default 8 j)");
    sub->add_option("--workers", o.workers, "worker threads (0 = all)");
    sub->add_option("--eps", o.eps, "reduced energies")->expected(1, -1)->allow_extra_args();
    sub->add_option("--t-max", o.t_max, "integration time");
    sub->add_option("--trajectories", o.trajectories, "trajectories per energy");
    sub->add_option("--observable", o.observables, "number|jz|C|jzprime|parity")->expected(1, -1);
    sub->add_option("--solver", o.solver, "dense|window");
    sub->add_option("--eps-max", o.eps_max, "energy ceiling for the window solver and the truncation audit");
  };
  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    sub->callback([&command, name] { command = name; });
  }
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a run manifest");
  replay->add_option("manifest", manifest_path, "run_manifest.json")->required();
  replay->add_option("--out", out_dir, "output directory");
  replay->callback([&command] { command = "replay"; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  }

  try {
    io::RunConfig cfg;
    if (command == "replay") {
      const json m = io::load_json_file(manifest_path);
      if (!m.contains("command") || !m.contains("config")) throw ConfigError("manifest lacks 'command' or 'config'");
      command = m.at("command").get<std::string>();
      io::apply_json(cfg, m.at("config"));
      if (out_dir.empty()) out_dir = (fs::path(manifest_path).parent_path() / "replay").string();
    } else {
      if (!config_path.empty()) io::apply_json(cfg, io::load_json_file(config_path));
      apply_overrides(cfg, command, o);
    }
    if (out_dir.empty()) out_dir = ".";
    io::validate(cfg);
    return execute(command, cfg, out_dir, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), err);
}

}  // namespace dicke::cli
