#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

/// Command-line surface: tables, parameter grids, and the subcommands
/// stats / sweep / figure / montecarlo / solve.
namespace condlight::cli {

inline constexpr const char* kToolName = "condlight";
inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

/// Bad flags, bad spec files, or parameters outside their domain.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Column {
  std::string name;
  std::string description;
};

/// Output of every subcommand. CSV carries metadata and column descriptions
/// as a "# key: value" comment block ahead of the header row; JSON mirrors
/// the same names.
struct Table {
  std::vector<std::pair<std::string, Cell>> metadata;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(const std::string& name) const;
};

enum class Format { csv, json };

Format parse_format(const std::string& s);

/// %.17g, which round-trips every double.
std::string format_number(double v);
std::string format_cell(const Cell& c);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);
void write_table(const Table& table, Format format, std::ostream& out);

// ---------------------------------------------------------------------------
// Grids

enum class Spacing { linear, log_one_minus };

/// Parses "a,b,c" (explicit list) or "start:stop:count" (linear range).
std::vector<double> parse_grid(const std::string& text);

/// count points from start to stop; log_one_minus spaces 1 - v
/// logarithmically.
std::vector<double> make_range(double start, double stop, int count,
                               Spacing spacing = Spacing::linear);

std::string describe_grid(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Commands

struct StatsParams {
  double lambda = 0.0;
  double x0 = 0.0;
  double eta = 1.0;
  double n_bar = 0.0;
  double tol = 1e-12;
  bool distribution = false;
};

/// One-row table of C, mean_n, second_factorial, Q; or, with distribution,
/// a per-n table of p_n and q_n with the scalars in the metadata.
Table run_stats(const StatsParams& params);

struct SweepSpec {
  std::vector<double> lambda;
  std::vector<double> x0{0.0};
  std::vector<double> eta{1.0};
  std::vector<double> n_bar{0.0};
  /// Subset of C, mean, second_factorial, Q, p_n, husimi, wigner.
  std::vector<std::string> quantities{"C", "mean", "second_factorial", "Q"};
  double tol = 1e-12;
  /// Number of p_n columns minus one.
  int pn_max = 10;
  /// Radii for husimi / wigner columns.
  std::vector<double> radii{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  Format format = Format::csv;
  std::optional<std::string> output_path;

  void validate() const;
};

/// Parses a sweep spec document. Grids are a number, an array, or an object
/// {"start", "stop", "count", "spacing": "linear" | "log_one_minus"}.
SweepSpec parse_sweep_spec(const std::string& json_text);

/// One row per grid point, lambda outermost then x0, eta, n_bar. Points
/// where a quantity is undefined leave it empty and fill the error column.
Table run_sweep(const SweepSpec& spec, unsigned workers = 0);

struct FigureJob {
  std::string id;
  std::optional<std::vector<double>> lambda;
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> eta;
  std::optional<std::vector<double>> q;
  std::optional<std::vector<double>> radii;
  double tol = 1e-12;
};

/// Data behind figures fig2..fig6 with the default parameter sets unless
/// overridden. Unknown ids raise UsageError.
Table run_figure(const FigureJob& job, unsigned workers = 0);

std::vector<double> default_lambda_axis();

struct MonteCarloParams {
  double lambda = 0.0;
  double x0 = 0.0;
  double eta = 1.0;
  double n_bar = 0.0;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 1;
  double tol = 1e-12;
};

/// Empirical estimates next to the analytic values, with z-scores.
Table run_montecarlo(const MonteCarloParams& params, unsigned workers = 0);

struct SolveParams {
  std::string kind;  // x0-for-q, x0-min, optimal-lambda, eta-threshold
  std::optional<double> lambda;
  std::optional<double> q;
  double eta = 1.0;
  double n_bar = 0.0;
  int scan_points = 50;
};

Table run_solve(const SolveParams& params);

/// Entry point behind the executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace condlight::cli
