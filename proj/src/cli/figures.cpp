#include <cstdint>

#include "cli/common.hpp"
#include "cli/parallel.hpp"
#include "condlight/cli.hpp"
#include "condlight/conditional_stats.hpp"
#include "condlight/phase_space.hpp"
#include "condlight/solvers.hpp"

namespace condlight::cli {

namespace {

struct Grids {
  std::vector<double> lambda, x0, eta, q, radii;
};

Grids defaults_for(const std::string& id) {
  if (id == "fig2") return {{0.05, 0.1, 0.2}, make_range(0.0, 4.0, 201), {1.0}, {}, {}};
  if (id == "fig3") return {default_lambda_axis(), {}, {1.0}, {0.0, -0.05, -0.1, -0.2}, {}};
  if (id == "fig4") return {{0.25}, {0.0, 1.0, 2.0, 3.0}, {1.0}, {}, {}};
  if (id == "fig5") return {{0.25}, {0.0, 2.0}, {1.0}, {}, make_range(0.0, 4.0, 201)};
  if (id == "fig6") return {default_lambda_axis(), {}, {0.9, 0.8, 0.7, 0.6}, {0.0, -0.05}, {}};
  throw UsageError("unknown figure id '" + id + "' (expected fig2, fig3, fig4, fig5, fig6)");
}

Grids resolve(const FigureJob& job) {
  Grids g = defaults_for(job.id);
  if (job.lambda) g.lambda = *job.lambda;
  if (job.x0) g.x0 = *job.x0;
  if (job.eta) g.eta = *job.eta;
  if (job.q) g.q = *job.q;
  if (job.radii) g.radii = *job.radii;
  return g;
}

void check_grids(const Grids& g, const std::string& id) {
  const auto nonempty = [&](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw UsageError(id + ": grid '" + name + "' is empty");
  };
  nonempty(g.lambda, "lambda");
  nonempty(g.eta, "eta");
  for (double l : g.lambda) validate_point(l, 0.0, 1.0, 0.0);
  for (double x : g.x0) validate_point(0.0, x, 1.0, 0.0);
  for (double e : g.eta) validate_point(0.0, 0.0, e, 0.0);
  for (double q : g.q) {
    if (!(q >= -1.0)) throw UsageError(id + ": q targets must be >= -1");
  }
  for (double r : g.radii) {
    if (!(r >= 0.0)) throw UsageError(id + ": radii must be >= 0");
  }
}

Table moments_vs_threshold(const Grids& g, unsigned workers) {
  Table t;
  t.columns = {{"lambda", "two-mode squeezing lambda"},
               {"x0", "idler quadrature threshold"},
               {"eta", "homodyne efficiency"},
               {"C", "generation probability"},
               {"mean_n", "mean photon number"},
               {"Q", "Mandel Q factor"}};
  const std::size_t nx = g.x0.size(), ne = g.eta.size();
  t.rows.resize(g.lambda.size() * nx * ne);
  detail::parallel_for(t.rows.size(), workers, [&](std::size_t i) {
    const double l = g.lambda[i / (nx * ne)], x0 = g.x0[(i / ne) % nx], eta = g.eta[i % ne];
    const auto s = Squeezing::from_lambda(l);
    const auto w = AcceptanceWindow::threshold(x0);
    const DetectorModel d(eta, 0.0);
    const Cell q = l > 0.0 ? Cell{mandel_q(s, w, d)} : Cell{std::monostate{}};
    t.rows[i] = {l, x0, eta, acceptance_probability(s, w, d), mean_photon(s, w, d), q};
  });
  return t;
}

Table probability_on_q_contours(const Grids& g, unsigned workers) {
  Table t;
  t.columns = {{"eta", "homodyne efficiency"},
               {"q_target", "prescribed Mandel Q factor"},
               {"lambda", "two-mode squeezing lambda"},
               {"x0", "threshold giving Q = q_target (empty when unreachable)"},
               {"C", "generation probability at that threshold (0 when unreachable)"},
               {"feasible", "whether q_target is reachable at this lambda"}};
  const std::size_t nq = g.q.size(), nl = g.lambda.size();
  t.rows.resize(g.eta.size() * nq * nl);
  detail::parallel_for(t.rows.size(), workers, [&](std::size_t i) {
    const double eta = g.eta[i / (nq * nl)], q = g.q[(i / nl) % nq], l = g.lambda[i % nl];
    const DetectorModel d(eta, 0.0);
    std::vector<Cell> row = {eta, q, l};
    if (l == 0.0) {
      row.insert(row.end(), {std::monostate{}, 0.0, false});
    } else {
      const auto s = Squeezing::from_lambda(l);
      const auto r = solvers::solve_x0_for_q(s, q, d);
      if (r.feasible) {
        row.insert(row.end(), {r.solution,
                               acceptance_probability(s, AcceptanceWindow::threshold(r.solution), d),
                               true});
      } else {
        row.insert(row.end(), {std::monostate{}, 0.0, false});
      }
    }
    t.rows[i] = std::move(row);
  });
  return t;
}

Table distributions(const Grids& g, double tol, unsigned workers) {
  Table t;
  t.columns = {{"lambda", "two-mode squeezing lambda"},
               {"x0", "idler quadrature threshold"},
               {"eta", "homodyne efficiency"},
               {"Q", "Mandel Q factor of the distribution"},
               {"n", "photon number"},
               {"p_n", "conditional photon-number probability"}};
  const std::size_t nx = g.x0.size(), ne = g.eta.size();
  std::vector<std::vector<std::vector<Cell>>> blocks(g.lambda.size() * nx * ne);
  detail::parallel_for(blocks.size(), workers, [&](std::size_t i) {
    const double l = g.lambda[i / (nx * ne)], x0 = g.x0[(i / ne) % nx], eta = g.eta[i % ne];
    const auto stats = photon_distribution(Squeezing::from_lambda(l),
                                           AcceptanceWindow::threshold(x0), DetectorModel(eta, 0.0), tol);
    const Cell q = stats.mandel_q ? Cell{*stats.mandel_q} : Cell{std::monostate{}};
    for (std::size_t n = 0; n < stats.p.size(); ++n) {
      blocks[i].push_back({l, x0, eta, q, static_cast<std::int64_t>(n), stats.p[n]});
    }
  });
  for (auto& b : blocks) {
    for (auto& row : b) t.rows.push_back(std::move(row));
  }
  return t;
}

Table profiles(const Grids& g, double tol, unsigned workers) {
  Table t;
  t.columns = {{"lambda", "two-mode squeezing lambda"},
               {"x0", "idler quadrature threshold"},
               {"eta", "homodyne efficiency"},
               {"r", "phase-space radius |alpha|"},
               {"husimi", "Husimi function (phase averaged)"},
               {"wigner", "Wigner function (phase averaged)"}};
  const std::size_t nx = g.x0.size(), ne = g.eta.size(), nr = g.radii.size();
  t.rows.resize(g.lambda.size() * nx * ne * nr);
  std::vector<std::vector<double>> dists(g.lambda.size() * nx * ne);
  detail::parallel_for(dists.size(), workers, [&](std::size_t i) {
    const double l = g.lambda[i / (nx * ne)], x0 = g.x0[(i / ne) % nx], eta = g.eta[i % ne];
    dists[i] = photon_distribution(Squeezing::from_lambda(l), AcceptanceWindow::threshold(x0),
                                   DetectorModel(eta, 0.0), tol)
                   .p;
  });
  detail::parallel_for(t.rows.size(), workers, [&](std::size_t i) {
    const std::size_t block = i / nr;
    const double l = g.lambda[block / (nx * ne)], x0 = g.x0[(block / ne) % nx];
    const double eta = g.eta[block % ne], r = g.radii[i % nr];
    t.rows[i] = {l, x0, eta, r, phase_space::husimi(dists[block], r),
                 phase_space::wigner(dists[block], r)};
  });
  return t;
}

}  // namespace

std::vector<double> default_lambda_axis() {
  return make_range(0.001, 0.95, 200, Spacing::log_one_minus);
}

Table run_figure(const FigureJob& job, unsigned workers) {
  const Grids g = resolve(job);
  check_grids(g, job.id);
  validate_tol(job.tol);

  Table table;
  if (job.id == "fig2") {
    table = moments_vs_threshold(g, workers);
  } else if (job.id == "fig3" || job.id == "fig6") {
    table = probability_on_q_contours(g, workers);
  } else if (job.id == "fig4") {
    table = distributions(g, job.tol, workers);
  } else {
    table = profiles(g, job.tol, workers);
  }

  table.metadata = base_metadata("figure");
  table.metadata.emplace_back("figure", job.id);
  table.metadata.emplace_back("lambda", describe_grid(g.lambda));
  if (!g.x0.empty()) table.metadata.emplace_back("x0", describe_grid(g.x0));
  table.metadata.emplace_back("eta", describe_grid(g.eta));
  table.metadata.emplace_back("nbar", 0.0);
  if (!g.q.empty()) table.metadata.emplace_back("q_target", describe_grid(g.q));
  if (!g.radii.empty()) table.metadata.emplace_back("radii", describe_grid(g.radii));
  if (job.id == "fig4" || job.id == "fig5") table.metadata.emplace_back("tol", job.tol);
  return table;
}

}  // namespace condlight::cli
