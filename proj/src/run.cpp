#include <cstdio>
#include <fstream>
#include <ostream>

#include "gqarch/cli.hpp"
#include "gqarch/error.hpp"
#include "gqarch/inference.hpp"
#include "gqarch/series_io.hpp"

namespace gqarch {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write output file '" + path + "'");
  return f;
}

void write_comments(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << l << '\n';
}

void print_theta(std::ostream& out, const char* label, const Theta& t) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s gamma=%.6f omega=%.6f a=%.6f d=%.6f c=%.6f\n", label, t.gamma, t.omega, t.a,
                t.d, t.c);
  out << buf;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const Theta theta = theta_from_config(cfg);
  SimConfig sim;
  sim.n = cfg.get_size("n");
  sim.seed = cfg.seed;
  sim.innovation = innovation_from_config(cfg);
  sim.presample = cfg.get_bool("presample");
  sim.force = cfg.get_bool("force");
  const SamplePath path = simulate(theta, sim);
  write_series_file(cfg.output_path, path, config_comment_block(cfg));
  out << "wrote " << path.size() << " observations";
  if (path.presample) out << " and " << path.presample->size() << " pre-sample values";
  out << " to " << cfg.output_path << '\n';
  return kExitOk;
}

int run_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SamplePath series = load_series(cfg.input_path);
  const PastMode mode = past_mode_from_config(cfg);
  const OptimOptions opts = optim_options_from_config(cfg);
  const QmlObjective objective(series, mode);
  if (series.size() < 50) err << "warning: estimating from only " << series.size() << " observations\n";
  const EstimateResult est = estimate(objective, opts);

  std::optional<InfoMatrices> info;
  double condition = 0.0;
  try {
    info = info_matrices(objective, est.theta_hat);
    condition = info->condition_number;
  } catch (const SingularInformationError& e) {
    err << "warning: " << e.what() << "; standard errors withheld\n";
    condition = e.partial().condition_number;
    info = e.partial();
  } catch (const DomainError& e) {
    err << "warning: " << e.what() << "; standard errors withheld\n";
  }

  for (const auto& line : config_comment_block(cfg)) out << line << '\n';
  out << "QML estimate (" << to_string(mode) << ", n = " << series.size() << ", window = "
      << objective.window_size() << ")\n";
  char buf[200];
  out << "  param        estimate      std.err   boundary\n";
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const double se = info && info->se ? (*info->se)[i] : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(buf, sizeof buf, "  %-6s  %14.8f  %11.6f   %s\n", coord_name(i).c_str(), est.theta_hat[i], se,
                  est.at_boundary[i] ? "yes" : "no");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  objective %.12f  converged %s  iterations %zu  starts %zu\n", est.objective,
                est.converged ? "yes" : "no", est.iterations, est.starts_used);
  out << buf;
  if (info) {
    std::snprintf(buf, sizeof buf, "  kappa4_hat %.6f  cond(B) %.3e\n", info->kappa4_hat, condition);
    out << buf;
  }
  for (const auto& w : est.warnings) out << "  warning: " << w << '\n';

  if (!cfg.output_path.empty()) {
    auto f = open_output(cfg.output_path);
    write_comments(f, config_comment_block(cfg));
    f << "gamma,omega,a,d,c,se_gamma,se_omega,se_a,se_d,se_c,objective,converged,iterations,starts_used,"
         "floor_activated,kappa4,condition_number,mode,n\n";
    for (std::size_t i = 0; i < kNumParams; ++i) f << format_real(est.theta_hat[i]) << ',';
    for (std::size_t i = 0; i < kNumParams; ++i)
      f << (info && info->se ? format_real((*info->se)[i]) : std::string("nan")) << ',';
    f << format_real(est.objective) << ',' << (est.converged ? 1 : 0) << ',' << est.iterations << ','
      << est.starts_used << ',' << (est.floor_activated ? 1 : 0) << ','
      << (info ? format_real(info->kappa4_hat) : std::string("nan")) << ',' << format_real(condition) << ','
      << to_string(mode) << ',' << series.size() << '\n';
  }
  return kExitOk;
}

int run_mc_command(const RunConfig& cfg, std::ostream& out) {
  const McDesign design = mc_design_from_config(cfg);
  const McReport report = run_mc(design);
  const auto comments = config_comment_block(cfg);
  {
    auto f = open_output(cfg.output_path);
    write_comments(f, comments);
    write_mc_csv(f, report, design);
  }
  const std::string table_path = cfg.get("table");
  if (table_path.empty()) {
    write_mc_table(out, report);
  } else {
    auto f = open_output(table_path);
    write_comments(f, comments);
    write_mc_table(f, report);
    out << "wrote table to " << table_path << '\n';
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu cells, wall time %.1f s\n", report.cells.size(), report.wall_time);
  out << buf;
  return kExitOk;
}

int run_diagnose(const RunConfig& cfg, std::ostream& out) {
  const SamplePath series = load_series(cfg.input_path);
  const std::size_t max_lag = cfg.get_size("max_lag");
  const auto acf = acf_squares(series, max_lag);
  const MemorySlope fit = memory_slope_from_acf(acf, cfg.get_size("lag_lo"), cfg.get_size("lag_hi"));
  char buf[200];
  std::snprintf(buf, sizeof buf, "fitted slope %.6f over lags %zu-%zu, implied d %.6f", fit.slope,
                cfg.get_size("lag_lo"), cfg.get_size("lag_hi"), fit.d_implied);
  const std::string summary = buf;
  out << summary << '\n';
  if (!cfg.output_path.empty()) {
    auto f = open_output(cfg.output_path);
    write_comments(f, config_comment_block(cfg));
    f << "# " << summary << '\n';
    f << "lag,acf\n";
    for (std::size_t k = 0; k < acf.size(); ++k) f << k << ',' << format_real(acf[k]) << '\n';
  }
  return kExitOk;
}

int run_feasibility(const RunConfig& cfg, std::ostream& out) {
  const Theta theta = theta_from_config(cfg);
  const auto rep = check_feasibility(theta, cfg.get_double("mu4"), cfg.get_double("k4"));
  for (const auto& line : config_comment_block(cfg)) out << line << '\n';
  print_theta(out, "theta", theta);
  out << "B2 = " << format_real(rep.b2) << '\n';
  out << "l2_ok = " << (rep.l2_ok ? "true" : "false") << "  (slack 1 - gamma - B2 = " << format_real(rep.slack_l2)
      << ")\n";
  out << "l4_ok = " << (rep.l4_ok ? "true" : "false") << "  (slack 1 - gamma - K4 mu4 B2^2 = "
      << format_real(rep.slack_l4) << ")\n";
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::simulate: return run_simulate(config, out);
      case Command::estimate: return run_estimate(config, out, err);
      case Command::mc: return run_mc_command(config, out);
      case Command::diagnose: return run_diagnose(config, out);
      case Command::feasibility: return run_feasibility(config, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace gqarch
