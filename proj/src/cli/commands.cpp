#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "cli/common.hpp"
#include "cli/parallel.hpp"
#include "condlight/cli.hpp"
#include "condlight/conditional_stats.hpp"
#include "condlight/oracles.hpp"
#include "condlight/phase_space.hpp"
#include "condlight/solvers.hpp"

namespace condlight::cli {

namespace {

const std::set<std::string> kQuantities = {"C",      "mean",   "second_factorial", "Q",
                                           "p_n",    "husimi", "wigner"};

bool wants(const SweepSpec& spec, const std::string& q) {
  return std::find(spec.quantities.begin(), spec.quantities.end(), q) != spec.quantities.end();
}

std::vector<Column> sweep_columns(const SweepSpec& spec) {
  std::vector<Column> cols = {
      {"lambda", "two-mode squeezing lambda = tanh^2 r"},
      {"x0", "idler quadrature threshold, accept |x| > x0"},
      {"eta", "homodyne efficiency"},
      {"nbar", "auxiliary-mode thermal photons"},
  };
  if (wants(spec, "C")) cols.push_back({"C", "generation (acceptance) probability"});
  if (wants(spec, "mean")) cols.push_back({"mean_n", "mean photon number <n>"});
  if (wants(spec, "second_factorial")) {
    cols.push_back({"second_factorial", "second factorial moment <n(n-1)>"});
  }
  if (wants(spec, "Q")) cols.push_back({"Q", "Mandel Q factor"});
  if (wants(spec, "p_n")) {
    for (int n = 0; n <= spec.pn_max; ++n) {
      cols.push_back({"p_" + std::to_string(n), "probability of " + std::to_string(n) + " photons"});
    }
  }
  if (wants(spec, "husimi")) {
    for (std::size_t i = 0; i < spec.radii.size(); ++i) {
      cols.push_back({"husimi_" + std::to_string(i),
                      "Husimi function at |alpha| = " + format_number(spec.radii[i])});
    }
  }
  if (wants(spec, "wigner")) {
    for (std::size_t i = 0; i < spec.radii.size(); ++i) {
      cols.push_back({"wigner_" + std::to_string(i),
                      "Wigner function at radius " + format_number(spec.radii[i])});
    }
  }
  cols.push_back({"error", "diagnostic for quantities that are undefined at this point"});
  return cols;
}

std::vector<Cell> evaluate_point(const SweepSpec& spec, double lambda, double x0, double eta,
                                 double n_bar) {
  std::vector<Cell> row = {lambda, x0, eta, n_bar};
  std::string errors;
  const auto note = [&](const std::exception& e) {
    if (!errors.empty()) errors += "; ";
    errors += e.what();
  };
  const auto s = Squeezing::from_lambda(lambda);
  const auto w = AcceptanceWindow::threshold(x0);
  const DetectorModel d(eta, n_bar);
  const auto scalar = [&](auto fn) -> Cell {
    try {
      return fn();
    } catch (const std::exception& e) {
      note(e);
      return std::monostate{};
    }
  };
  if (wants(spec, "C")) row.push_back(scalar([&] { return acceptance_probability(s, w, d); }));
  if (wants(spec, "mean")) row.push_back(scalar([&] { return mean_photon(s, w, d); }));
  if (wants(spec, "second_factorial")) {
    row.push_back(scalar([&] { return second_factorial_moment(s, w, d); }));
  }
  if (wants(spec, "Q")) row.push_back(scalar([&] { return mandel_q(s, w, d); }));

  const bool need_p = wants(spec, "p_n") || wants(spec, "husimi") || wants(spec, "wigner");
  std::optional<ConditionalStatistics> stats;
  if (need_p) {
    try {
      stats = photon_distribution(s, w, d, spec.tol);
    } catch (const std::exception& e) {
      note(e);
    }
  }
  const auto fill = [&](std::size_t count, auto value) {
    for (std::size_t i = 0; i < count; ++i) {
      row.push_back(stats ? Cell{value(i)} : Cell{std::monostate{}});
    }
  };
  if (wants(spec, "p_n")) {
    fill(static_cast<std::size_t>(spec.pn_max) + 1,
         [&](std::size_t n) { return n < stats->p.size() ? stats->p[n] : 0.0; });
  }
  if (wants(spec, "husimi")) {
    fill(spec.radii.size(), [&](std::size_t i) { return phase_space::husimi(stats->p, spec.radii[i]); });
  }
  if (wants(spec, "wigner")) {
    fill(spec.radii.size(), [&](std::size_t i) { return phase_space::wigner(stats->p, spec.radii[i]); });
  }
  row.push_back(errors.empty() ? Cell{std::monostate{}} : Cell{errors});
  return row;
}

std::vector<double> json_grid(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto& v : j) {
      if (!v.is_number()) throw UsageError("spec: '" + key + "' entries must be numbers");
      values.push_back(v.get<double>());
    }
    return values;
  }
  if (j.is_object()) {
    if (!j.contains("start") || !j.contains("stop") || !j.contains("count")) {
      throw UsageError("spec: range '" + key + "' needs start, stop, count");
    }
    Spacing spacing = Spacing::linear;
    if (j.contains("spacing")) {
      const auto name = j.at("spacing").get<std::string>();
      if (name == "log_one_minus") {
        spacing = Spacing::log_one_minus;
      } else if (name != "linear") {
        throw UsageError("spec: unknown spacing '" + name + "'");
      }
    }
    return make_range(j.at("start").get<double>(), j.at("stop").get<double>(),
                      j.at("count").get<int>(), spacing);
  }
  if (j.is_string()) return parse_grid(j.get<std::string>());
  throw UsageError("spec: '" + key + "' must be a number, array, range object or string");
}

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::monostate{}};
}

double z_score(double empirical, double analytic, double se) {
  const double diff = empirical - analytic;
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

}  // namespace

std::vector<std::pair<std::string, Cell>> base_metadata(const std::string& command) {
  return {{"tool", std::string(kToolName)},
          {"version", std::string(kVersion)},
          {"command", command}};
}

void validate_point(double lambda, double x0, double eta, double n_bar) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw UsageError("lambda must lie in [0, 1)");
  if (!(x0 >= 0.0) || !std::isfinite(x0)) throw UsageError("x0 must be finite and >= 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw UsageError("eta must lie in (0, 1]");
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw UsageError("nbar must be finite and >= 0");
}

void validate_tol(double tol) {
  if (!(tol > 0.0 && tol <= 1e-3)) throw UsageError("tol must lie in (0, 1e-3]");
}

// ---------------------------------------------------------------------------

void SweepSpec::validate() const {
  const auto nonempty = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw UsageError(std::string("sweep: grid '") + name + "' is empty");
  };
  nonempty(lambda, "lambda");
  nonempty(x0, "x0");
  nonempty(eta, "eta");
  nonempty(n_bar, "nbar");
  for (double l : lambda) validate_point(l, 0.0, 1.0, 0.0);
  for (double x : x0) validate_point(0.0, x, 1.0, 0.0);
  for (double e : eta) validate_point(0.0, 0.0, e, 0.0);
  for (double nb : n_bar) validate_point(0.0, 0.0, 1.0, nb);
  if (quantities.empty()) throw UsageError("sweep: no quantities requested");
  for (const auto& q : quantities) {
    if (!kQuantities.count(q)) throw UsageError("sweep: unknown quantity '" + q + "'");
  }
  validate_tol(tol);
  if (pn_max < 0) throw UsageError("sweep: pn_max must be >= 0");
  for (double r : radii) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("sweep: radii must be >= 0");
  }
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("spec: top level must be an object");
  SweepSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "lambda") {
        spec.lambda = json_grid(value, key);
      } else if (key == "x0") {
        spec.x0 = json_grid(value, key);
      } else if (key == "eta") {
        spec.eta = json_grid(value, key);
      } else if (key == "nbar" || key == "n_bar") {
        spec.n_bar = json_grid(value, key);
      } else if (key == "radii") {
        spec.radii = json_grid(value, key);
      } else if (key == "quantities") {
        spec.quantities = value.get<std::vector<std::string>>();
      } else if (key == "tol") {
        spec.tol = value.get<double>();
      } else if (key == "pn_max") {
        spec.pn_max = value.get<int>();
      } else if (key == "output") {
        if (value.contains("format")) spec.format = parse_format(value.at("format"));
        if (value.contains("path")) spec.output_path = value.at("path").get<std::string>();
      } else {
        throw UsageError("spec: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

Table run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  Table table;
  table.metadata = base_metadata("sweep");
  table.metadata.emplace_back("lambda", describe_grid(spec.lambda));
  table.metadata.emplace_back("x0", describe_grid(spec.x0));
  table.metadata.emplace_back("eta", describe_grid(spec.eta));
  table.metadata.emplace_back("nbar", describe_grid(spec.n_bar));
  table.metadata.emplace_back("tol", spec.tol);
  if (wants(spec, "husimi") || wants(spec, "wigner")) {
    table.metadata.emplace_back("radii", describe_grid(spec.radii));
  }
  table.columns = sweep_columns(spec);

  const std::size_t nx = spec.x0.size(), ne = spec.eta.size(), nn = spec.n_bar.size();
  const std::size_t total = spec.lambda.size() * nx * ne * nn;
  table.rows.resize(total);
  detail::parallel_for(total, workers, [&](std::size_t idx) {
    const std::size_t in = idx % nn;
    const std::size_t ie = (idx / nn) % ne;
    const std::size_t ix = (idx / (nn * ne)) % nx;
    const std::size_t il = idx / (nn * ne * nx);
    table.rows[idx] =
        evaluate_point(spec, spec.lambda[il], spec.x0[ix], spec.eta[ie], spec.n_bar[in]);
  });
  return table;
}

// ---------------------------------------------------------------------------

Table run_stats(const StatsParams& params) {
  validate_point(params.lambda, params.x0, params.eta, params.n_bar);
  validate_tol(params.tol);
  const auto s = Squeezing::from_lambda(params.lambda);
  const auto w = AcceptanceWindow::threshold(params.x0);
  const DetectorModel d(params.eta, params.n_bar);
  if (params.lambda == 0.0) {
    throw UsageError("Q is undefined at lambda = 0 (vacuum signal has zero mean photon number)");
  }

  if (!params.distribution) {
    SweepSpec spec;
    spec.lambda = {params.lambda};
    spec.x0 = {params.x0};
    spec.eta = {params.eta};
    spec.n_bar = {params.n_bar};
    spec.tol = params.tol;
    Table table = run_sweep(spec, 1);
    table.metadata = base_metadata("stats");
    return table;
  }

  const auto stats = photon_distribution(s, w, d, params.tol);
  Table table;
  table.metadata = base_metadata("stats");
  table.metadata.emplace_back("lambda", params.lambda);
  table.metadata.emplace_back("x0", params.x0);
  table.metadata.emplace_back("eta", params.eta);
  table.metadata.emplace_back("nbar", params.n_bar);
  table.metadata.emplace_back("tol", params.tol);
  table.metadata.emplace_back("C", stats.acceptance_probability);
  table.metadata.emplace_back("mean_n", stats.mean_n);
  table.metadata.emplace_back("second_factorial", stats.second_factorial);
  table.metadata.emplace_back("Q", optional_cell(stats.mandel_q));
  table.metadata.emplace_back("n_max", static_cast<std::int64_t>(stats.n_max()));
  table.metadata.emplace_back("truncation_error_bound", stats.truncation_error_bound);
  table.columns = {{"n", "photon number"},
                   {"p_n", "conditional photon-number probability"},
                   {"q_n", "acceptance probability of the idler Fock state |n>"}};
  for (std::size_t n = 0; n < stats.p.size(); ++n) {
    table.rows.push_back({static_cast<std::int64_t>(n), stats.p[n], stats.q[n]});
  }
  return table;
}

// ---------------------------------------------------------------------------

Table run_montecarlo(const MonteCarloParams& params, unsigned workers) {
  validate_point(params.lambda, params.x0, params.eta, params.n_bar);
  validate_tol(params.tol);
  if (params.shots < 1) throw UsageError("shots must be >= 1");
  const auto s = Squeezing::from_lambda(params.lambda);
  const auto w = AcceptanceWindow::threshold(params.x0);
  const DetectorModel d(params.eta, params.n_bar);

  const auto mc = oracles::monte_carlo_experiment(s, w, d, params.shots, params.seed, workers);
  const auto stats = photon_distribution(s, w, d, params.tol);

  Table table;
  table.metadata = base_metadata("montecarlo");
  table.metadata.emplace_back("lambda", params.lambda);
  table.metadata.emplace_back("x0", params.x0);
  table.metadata.emplace_back("eta", params.eta);
  table.metadata.emplace_back("nbar", params.n_bar);
  table.metadata.emplace_back("shots", static_cast<std::int64_t>(mc.shots));
  table.metadata.emplace_back("seed", static_cast<std::int64_t>(mc.seed));
  table.metadata.emplace_back("accepted", static_cast<std::int64_t>(mc.accepted));
  if (mc.warning) table.metadata.emplace_back("warning", *mc.warning);
  table.columns = {{"quantity", "estimated quantity"},
                   {"empirical", "Monte Carlo estimate"},
                   {"standard_error", "standard error of the estimate"},
                   {"analytic", "closed-form value"},
                   {"z_score", "(empirical - analytic) / standard_error"}};

  const auto add = [&](const std::string& name, const std::optional<double>& emp, double se,
                       const std::optional<double>& analytic) {
    Cell z = std::monostate{};
    if (emp && analytic) z = z_score(*emp, *analytic, se);
    table.rows.push_back({name, optional_cell(emp), se, optional_cell(analytic), z});
  };
  add("C", mc.empirical_C, mc.standard_errors.acceptance_probability,
      stats.acceptance_probability);
  if (mc.accepted > 0) {
    add("mean_n", mc.empirical_mean, mc.standard_errors.mean, stats.mean_n);
    add("Q", mc.empirical_Q, mc.standard_errors.mandel_q, stats.mandel_q);
    for (std::size_t n = 0; n < mc.empirical_p.size(); ++n) {
      add("p_" + std::to_string(n), mc.empirical_p[n], mc.standard_errors.p[n],
          n < stats.p.size() ? stats.p[n] : 0.0);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

Table run_solve(const SolveParams& params) {
  validate_point(params.lambda.value_or(0.0), 0.0, params.eta, params.n_bar);
  const DetectorModel d(params.eta, params.n_bar);
  solvers::SolveReport report;
  Table table;
  table.metadata = base_metadata("solve");
  table.metadata.emplace_back("kind", params.kind);

  const auto require = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError("solve " + params.kind + " requires " + flag);
    return *v;
  };
  if (params.kind == "x0-for-q") {
    const double lambda = require(params.lambda, "--lambda");
    const double q = require(params.q, "--q");
    if (lambda == 0.0) throw UsageError("solve x0-for-q requires lambda > 0");
    if (!(q >= -1.0)) throw UsageError("--q must be >= -1");
    table.metadata.emplace_back("lambda", lambda);
    table.metadata.emplace_back("q", q);
    report = solvers::solve_x0_for_q(Squeezing::from_lambda(lambda), q, d);
  } else if (params.kind == "x0-min") {
    report = d.is_ideal() ? solvers::x0_min() : solvers::x0_min(d);
  } else if (params.kind == "optimal-lambda") {
    const double q = require(params.q, "--q");
    if (!(q >= -1.0)) throw UsageError("--q must be >= -1");
    if (params.scan_points < 3) throw UsageError("--scan-points must be >= 3");
    table.metadata.emplace_back("q", q);
    solvers::OptimalLambdaOptions options;
    options.scan_points = params.scan_points;
    report = solvers::optimal_lambda(q, d, options);
  } else if (params.kind == "eta-threshold") {
    report.solution = solvers::eta_threshold(params.n_bar);
    report.feasible = true;
  } else {
    throw UsageError("unknown solve kind '" + params.kind +
                     "' (expected x0-for-q, x0-min, optimal-lambda, eta-threshold)");
  }
  table.metadata.emplace_back("eta", params.eta);
  table.metadata.emplace_back("nbar", params.n_bar);
  table.columns = {{"kind", "solved problem"},
                   {"solution", "x0, lambda or eta depending on kind"},
                   {"residual", "equation residual at the solution"},
                   {"iterations", "solver iterations / function evaluations"},
                   {"bracket_lo", "final bracket lower end"},
                   {"bracket_hi", "final bracket upper end"},
                   {"feasible", "whether the target is attainable"},
                   {"objective", "maximum generation probability (optimal-lambda)"},
                   {"boundary_supremum", "supremum approached as lambda -> 0, not attained"}};
  table.rows.push_back({params.kind, report.solution, report.residual,
                        static_cast<std::int64_t>(report.iterations), report.bracket_lo,
                        report.bracket_hi, report.feasible, optional_cell(report.objective),
                        report.boundary_supremum});
  return table;
}

}  // namespace condlight::cli
