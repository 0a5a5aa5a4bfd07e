#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "condlight/cli.hpp"
#include "condlight/errors.hpp"

namespace condlight::cli {

namespace {

struct OutputOptions {
  std::string format = "csv";
  std::string path;
  unsigned workers = 0;
};

void add_output_options(CLI::App& cmd, OutputOptions& o) {
  cmd.add_option("--format", o.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--out", o.path, "Write to this file instead of stdout");
  cmd.add_option("--workers", o.workers, "Worker threads (0 = all cores)");
}

void emit(const Table& table, Format format, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_table(table, format, out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  write_table(table, format, file);
  if (!file) throw UsageError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    items.push_back(item);
  }
  return items;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional photon statistics of heralded two-mode squeezed light", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  // stats
  StatsParams stats;
  OutputOptions stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Conditional statistics at one parameter point");
  stats_cmd->add_option("--lambda", stats.lambda, "Squeezing lambda = tanh^2 r")->required();
  stats_cmd->add_option("--x0", stats.x0, "Acceptance threshold |x| > x0")->required();
  stats_cmd->add_option("--eta", stats.eta, "Homodyne efficiency");
  stats_cmd->add_option("--nbar", stats.n_bar, "Thermal photons in the auxiliary mode");
  stats_cmd->add_option("--tol", stats.tol, "Truncation tolerance for p_n");
  stats_cmd->add_flag("--distribution", stats.distribution, "Emit p_n and q_n per photon number");
  add_output_options(*stats_cmd, stats_out);

  // sweep
  std::string spec_path, sw_lambda, sw_x0, sw_eta, sw_nbar, sw_quantities, sw_radii;
  std::optional<double> sw_tol;
  std::optional<int> sw_pn_max;
  OutputOptions sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate quantities over a parameter grid");
  sweep_cmd->add_option("--spec", spec_path, "JSON sweep spec file");
  sweep_cmd->add_option("--lambda", sw_lambda, "Grid: a,b,c or start:stop:count");
  sweep_cmd->add_option("--x0", sw_x0, "Grid for the threshold");
  sweep_cmd->add_option("--eta", sw_eta, "Grid for the efficiency");
  sweep_cmd->add_option("--nbar", sw_nbar, "Grid for the auxiliary thermal photons");
  sweep_cmd->add_option("--quantities", sw_quantities,
                        "Comma list from C,mean,second_factorial,Q,p_n,husimi,wigner");
  sweep_cmd->add_option("--tol", sw_tol, "Truncation tolerance for p_n");
  sweep_cmd->add_option("--pn-max", sw_pn_max, "Largest n reported in p_n columns");
  sweep_cmd->add_option("--radii", sw_radii, "Radius grid for husimi / wigner columns");
  auto* sweep_format = sweep_cmd->add_option("--format", sweep_out.format, "csv or json")
                           ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", sweep_out.path, "Write to this file instead of stdout");
  sweep_cmd->add_option("--workers", sweep_out.workers, "Worker threads (0 = all cores)");

  // figure
  FigureJob figure;
  std::string fig_lambda, fig_x0, fig_eta, fig_q, fig_radii;
  OutputOptions figure_out;
  auto* figure_cmd = app.add_subcommand("figure", "Regenerate figure data (fig2 .. fig6)");
  figure_cmd->add_option("id", figure.id, "fig2, fig3, fig4, fig5 or fig6")->required();
  figure_cmd->add_option("--lambda", fig_lambda, "Override the lambda list");
  figure_cmd->add_option("--x0", fig_x0, "Override the threshold list");
  figure_cmd->add_option("--eta", fig_eta, "Override the efficiency list");
  figure_cmd->add_option("--q", fig_q, "Override the Q target list");
  figure_cmd->add_option("--radii", fig_radii, "Override the radius grid");
  figure_cmd->add_option("--tol", figure.tol, "Truncation tolerance for p_n");
  add_output_options(*figure_cmd, figure_out);

  // montecarlo
  MonteCarloParams mc;
  OutputOptions mc_out;
  auto* mc_cmd = app.add_subcommand("montecarlo", "Simulate the heralding experiment shot by shot");
  mc_cmd->add_option("--lambda", mc.lambda, "Squeezing lambda = tanh^2 r")->required();
  mc_cmd->add_option("--x0", mc.x0, "Acceptance threshold |x| > x0")->required();
  mc_cmd->add_option("--eta", mc.eta, "Homodyne efficiency");
  mc_cmd->add_option("--nbar", mc.n_bar, "Thermal photons in the auxiliary mode");
  mc_cmd->add_option("--shots", mc.shots, "Number of shots");
  mc_cmd->add_option("--seed", mc.seed, "Random seed");
  mc_cmd->add_option("--tol", mc.tol, "Truncation tolerance for the analytic p_n");
  add_output_options(*mc_cmd, mc_out);

  // solve
  SolveParams solve;
  OutputOptions solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "Root finding and optimisation");
  solve_cmd->add_option("kind", solve.kind, "x0-for-q, x0-min, optimal-lambda or eta-threshold")
      ->required();
  solve_cmd->add_option("--lambda", solve.lambda, "Squeezing lambda (x0-for-q)");
  solve_cmd->add_option("--q", solve.q, "Target Mandel Q (x0-for-q, optimal-lambda)");
  solve_cmd->add_option("--eta", solve.eta, "Homodyne efficiency");
  solve_cmd->add_option("--nbar", solve.n_bar, "Thermal photons in the auxiliary mode");
  solve_cmd->add_option("--scan-points", solve.scan_points, "Lambda scan size (optimal-lambda)");
  add_output_options(*solve_cmd, solve_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*stats_cmd) {
      emit(run_stats(stats), parse_format(stats_out.format), stats_out.path, out);
    } else if (*sweep_cmd) {
      SweepSpec spec;
      if (!spec_path.empty()) spec = parse_sweep_spec(read_file(spec_path));
      if (!sw_lambda.empty()) spec.lambda = parse_grid(sw_lambda);
      if (!sw_x0.empty()) spec.x0 = parse_grid(sw_x0);
      if (!sw_eta.empty()) spec.eta = parse_grid(sw_eta);
      if (!sw_nbar.empty()) spec.n_bar = parse_grid(sw_nbar);
      if (!sw_radii.empty()) spec.radii = parse_grid(sw_radii);
      if (!sw_quantities.empty()) spec.quantities = split_list(sw_quantities);
      if (sw_tol) spec.tol = *sw_tol;
      if (sw_pn_max) spec.pn_max = *sw_pn_max;
      if (sweep_format->count() > 0) spec.format = parse_format(sweep_out.format);
      if (!sweep_out.path.empty()) spec.output_path = sweep_out.path;
      if (spec.lambda.empty()) throw UsageError("sweep needs a lambda grid (--lambda or spec)");
      emit(run_sweep(spec, sweep_out.workers), spec.format, spec.output_path.value_or(""), out);
    } else if (*figure_cmd) {
      if (!fig_lambda.empty()) figure.lambda = parse_grid(fig_lambda);
      if (!fig_x0.empty()) figure.x0 = parse_grid(fig_x0);
      if (!fig_eta.empty()) figure.eta = parse_grid(fig_eta);
      if (!fig_q.empty()) figure.q = parse_grid(fig_q);
      if (!fig_radii.empty()) figure.radii = parse_grid(fig_radii);
      emit(run_figure(figure, figure_out.workers), parse_format(figure_out.format),
           figure_out.path, out);
    } else if (*mc_cmd) {
      emit(run_montecarlo(mc, mc_out.workers), parse_format(mc_out.format), mc_out.path, out);
    } else if (*solve_cmd) {
      emit(run_solve(solve), parse_format(solve_out.format), solve_out.path, out);
    }
  } catch (const NonConvergenceError& e) {
    err << kToolName << ": numerical non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const UsageError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace condlight::cli
