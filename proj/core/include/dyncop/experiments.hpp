#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dyncop/correlation_path.hpp"
#include "dyncop/limit_law.hpp"
#include "dyncop/nonparametric.hpp"
#include "dyncop/parametric.hpp"

namespace dyncop {

/// Parameters shared by every subcommand; each command reads the subset it
/// needs. Fixed config and seed give byte-identical output for any thread count.
struct ExperimentConfig {
  std::string path = "const";  // const | linear | power | table:<file>
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  std::size_t n = 1000;
  std::size_t reps = 1000;
  std::uint64_t seed = 20140101;
  std::string estimator = "spearman";
  std::string route = "spearman";
  std::vector<double> d{0.2, 0.3, 0.4, 0.5};
  std::string bandwidth;  // empty: use d; "plugin": pilot m''; otherwise a fixed h
  std::string grid;       // command-specific; empty selects the default
  std::string regime = "hr";
  std::string kind = "hotelling";
  std::string in;
  std::string out;
  int table = 1;
  bool empirical = false;
  unsigned threads = 1;

  // replicate-table filters; unset means every column of the table.
  std::optional<std::size_t> only_n;
  std::optional<double> only_alpha;
  std::optional<double> only_beta;
  std::optional<double> only_gamma;
  // Hotelling null; unset falls back to (alpha, beta, gamma).
  std::optional<std::array<double, 3>> null_theta;
};

/// Builds the path named by config.path; ConfigError names the bad field.
CorrelationPath make_path(const ExperimentConfig& config);
LimitRegime parse_regime(const std::string& text);

struct SummaryRow {
  std::string column;  // e.g. "alpha=1;n=300"
  std::string estimand;
  double truth = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // population variance over replications
  double mse = 0.0;
  double mc_se = 0.0;  // sqrt(variance / reps)
  std::size_t reps = 0;
  std::size_t failures = 0;  // replications that used a best-iterate fallback
};

struct SummaryTable {
  int table_id = 1;
  std::uint64_t seed = 0;
  std::vector<SummaryRow> rows;

  const SummaryRow* find(const std::string& column, const std::string& estimand) const;
};

/// Mean, variance and MSE of `values` around `truth` with population formulas.
SummaryRow summarize(std::string column, std::string estimand, double truth,
                     const std::vector<double>& values);

/// Monte-Carlo replication of simulation tables 1-3. Replication r of
/// column c draws from RngStream(seed, (c << 32) | r); reductions are in
/// replication order.
SummaryTable replicate_table(const ExperimentConfig& config);

void write_summary_csv(const SummaryTable& table, std::ostream& out);

/// Flat CSV (header row plus one value row) for a fit and its report.
void write_param_fit_csv(const ParamFit& fit, const AsymptoticReport* report, std::ostream& out);
ParamFit read_param_fit_csv(std::istream& in);

void write_curve_csv(const std::vector<CurveFit>& fits, std::ostream& out);

// Subcommands. Each writes its CSV to `out` and an optional human-readable
// summary to `log`.
void cmd_simulate(const ExperimentConfig& config, std::ostream& out);
void cmd_fit_param(const ExperimentConfig& config, std::ostream& out, std::ostream& log);
void cmd_fit_nonparam(const ExperimentConfig& config, std::ostream& out, std::ostream& log);
void cmd_limit(const ExperimentConfig& config, std::ostream& out);
void cmd_replicate_table(const ExperimentConfig& config, std::ostream& out, std::ostream& log);
void cmd_test(const ExperimentConfig& config, std::ostream& out, std::ostream& log);

}  // namespace dyncop
