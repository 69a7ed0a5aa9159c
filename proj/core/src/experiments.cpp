#include "dyncop/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dyncop/copula.hpp"
#include "dyncop/csv.hpp"
#include "dyncop/errors.hpp"
#include "dyncop/parallel.hpp"
#include "dyncop/rng.hpp"

namespace dyncop {

CorrelationPath make_path(const ExperimentConfig& config) {
  try {
    if (config.path == "const") return CorrelationPath::constant(config.alpha);
    if (config.path == "linear") return CorrelationPath::linear(config.alpha, config.beta);
    if (config.path == "power") {
      return CorrelationPath::power(config.alpha, config.beta, config.gamma);
    }
    if (config.path.rfind("table:", 0) == 0) {
      return CorrelationPath::tabulated(read_knots_file(config.path.substr(6)));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--path/--alpha/--beta/--gamma: ") + e.what());
  }
  throw ConfigError("--path: unknown path '" + config.path +
                    "' (expected const, linear, power or table:<file>)");
}

LimitRegime parse_regime(const std::string& text) {
  if (text == "hr" || text == "mixture") return LimitRegime::HuslerReissMixture;
  if (text == "comonotone") return LimitRegime::Comonotone;
  if (text == "independent") return LimitRegime::Independent;
  throw ConfigError("--regime: unknown regime '" + text +
                    "' (expected hr, comonotone or independent)");
}

namespace {

Estimator config_estimator(const std::string& text, const char* flag) {
  try {
    return parse_estimator(text);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(flag) + ": " + e.what());
  }
}

std::string label_number(double v) { return format_double(v); }

void require_reps(const ExperimentConfig& config) {
  if (config.reps < 1) throw ConfigError("--reps: must be >= 1");
}

std::vector<double> parse_number_list(const std::string& text, char sep, const char* flag) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

// "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_curve_grid(const std::string& text) {
  if (text.empty()) return default_curve_grid();
  if (text.find(':') != std::string::npos) {
    const auto parts = parse_number_list(text, ':', "--grid");
    if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] >= parts[0])) {
      throw ConfigError("--grid: expected start:stop:step with step > 0");
    }
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long k = 0; k <= count; ++k) {
      // Round to 12 digits so 0.1 + k * 0.01 prints as the intended grid value.
      const double s = parts[0] + static_cast<double>(k) * parts[2];
      grid.push_back(std::round(s * 1e12) / 1e12);
    }
    return grid;
  }
  return parse_number_list(text, ',', "--grid");
}

// "x,y;x,y;..."
std::vector<std::pair<double, double>> parse_xy_grid(const std::string& text) {
  const std::string spec = text.empty() ? "-1,-1;-0.5,-0.5;-1,-2;-2,-1;-0.5,-2;-2,-0.5" : text;
  std::vector<std::pair<double, double>> grid;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ';')) {
    const auto xy = parse_number_list(item, ',', "--grid");
    if (xy.size() != 2) throw ConfigError("--grid: expected x,y pairs separated by ';'");
    if (!(xy[0] < 0.0 && xy[1] < 0.0)) throw ConfigError("--grid: limit points need x < 0 and y < 0");
    grid.emplace_back(xy[0], xy[1]);
  }
  return grid;
}

}  // namespace

// ----------------------------------------------------------------------------
// Summary tables

const SummaryRow* SummaryTable::find(const std::string& column, const std::string& estimand) const {
  for (const auto& row : rows) {
    if (row.column == column && row.estimand == estimand) return &row;
  }
  return nullptr;
}

SummaryRow summarize(std::string column, std::string estimand, double truth,
                     const std::vector<double>& values) {
  SummaryRow row;
  row.column = std::move(column);
  row.estimand = std::move(estimand);
  row.truth = truth;
  row.reps = values.size();
  if (values.empty()) return row;
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  row.mean = sum / count;
  double ss = 0.0;
  for (double v : values) ss += (v - row.mean) * (v - row.mean);
  row.variance = ss / count;
  const double bias = row.mean - truth;
  row.mse = row.variance + bias * bias;
  row.mc_se = std::sqrt(row.variance / count);
  return row;
}

namespace {

struct ColumnSpec {
  std::string label;
  CorrelationPath path;
  std::size_t n;
};

struct RepOutcome {
  std::vector<double> estimates;
  bool fallback = false;
};

template <class Fn>
std::vector<RepOutcome> run_column(const ExperimentConfig& config, std::size_t column_index,
                                   const ColumnSpec& column, Fn&& estimate) {
  const RhoSchedule schedule = build_schedule(column.path, column.n);
  std::vector<RepOutcome> outcomes(config.reps);
  parallel_for_index(config.reps, config.threads, [&](std::size_t r) {
    RngStream stream(config.seed, (static_cast<std::uint64_t>(column_index) << 32) | r);
    const PairedSample sample = sample_array(schedule, stream);
    outcomes[r] = estimate(sample);
  });
  return outcomes;
}

void append_rows(SummaryTable& table, const ColumnSpec& column,
                 const std::vector<RepOutcome>& outcomes, const std::vector<std::string>& names,
                 const std::vector<double>& truths) {
  std::size_t failures = 0;
  for (const auto& o : outcomes) failures += o.fallback ? 1 : 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> values;
    values.reserve(outcomes.size());
    for (const auto& o : outcomes) values.push_back(o.estimates[k]);
    SummaryRow row = summarize(column.label, names[k], truths[k], values);
    row.failures = failures;
    table.rows.push_back(std::move(row));
  }
}

const std::vector<std::size_t> kTableSizes{300, 1000, 3000};

bool keep_n(const ExperimentConfig& c, std::size_t n) { return !c.only_n || *c.only_n == n; }

}  // namespace

SummaryTable replicate_table(const ExperimentConfig& config) {
  require_reps(config);
  SummaryTable table;
  table.table_id = config.table;
  table.seed = config.seed;
  std::size_t column_index = 0;

  switch (config.table) {
    case 1: {
      for (std::size_t n : kTableSizes) {
        for (double alpha : {1.0, 10.0}) {
          const std::size_t idx = column_index++;
          if (!keep_n(config, n) || (config.only_alpha && *config.only_alpha != alpha)) continue;
          ColumnSpec col{"alpha=" + label_number(alpha) + ";n=" + std::to_string(n),
                         CorrelationPath::constant(alpha), n};
          const auto outcomes = run_column(config, idx, col, [](const PairedSample& s) {
            return RepOutcome{{fit_constant(s, Estimator::Spearman).alpha,
                               fit_constant(s, Estimator::Pearson).alpha}};
          });
          append_rows(table, col, outcomes, {"alpha_hat", "alpha_star"}, {alpha, alpha});
        }
      }
      break;
    }
    case 2: {
      for (std::size_t n : kTableSizes) {
        for (double beta : {1.0, 0.0}) {
          const std::size_t idx = column_index++;
          if (!keep_n(config, n) || (config.only_beta && *config.only_beta != beta)) continue;
          ColumnSpec col{"beta=" + label_number(beta) + ";n=" + std::to_string(n),
                         CorrelationPath::linear(1.0, beta), n};
          const auto outcomes = run_column(config, idx, col, [](const PairedSample& s) {
            const ParamFit a = fit_linear(s, Estimator::Spearman);
            const ParamFit b = fit_linear(s, Estimator::Pearson);
            return RepOutcome{{a.alpha, a.beta, a.alpha + a.beta / 2.0, a.alpha / 2.0 + a.beta / 3.0,
                               b.alpha, b.beta, b.alpha + b.beta / 2.0, b.alpha / 2.0 + b.beta / 3.0}};
          });
          append_rows(table, col, outcomes,
                      {"alpha_hat", "beta_hat", "alpha_hat+beta_hat/2", "alpha_hat/2+beta_hat/3",
                       "alpha_star", "beta_star", "alpha_star+beta_star/2",
                       "alpha_star/2+beta_star/3"},
                      {1.0, beta, 1.0 + beta / 2.0, 0.5 + beta / 3.0, 1.0, beta, 1.0 + beta / 2.0,
                       0.5 + beta / 3.0});
        }
      }
      break;
    }
    case 3: {
      const std::size_t n = config.only_n.value_or(3000);
      for (double gamma : {0.5, 1.0}) {
        const std::size_t idx = column_index++;
        if (config.only_gamma && *config.only_gamma != gamma) continue;
        ColumnSpec col{"gamma=" + label_number(gamma) + ";n=" + std::to_string(n),
                       CorrelationPath::power(1.0, 1.0, gamma), n};
        const auto outcomes = run_column(config, idx, col, [](const PairedSample& s) {
          try {
            const ParamFit f = fit_power(s, Estimator::Spearman);
            return RepOutcome{{f.alpha, f.beta, f.gamma}};
          } catch (const FitNonConvergence& e) {
            const ParamFit& f = e.best_iterate();
            return RepOutcome{{f.alpha, f.beta, f.gamma}, true};
          }
        });
        append_rows(table, col, outcomes, {"alpha_hat", "beta_hat", "gamma_hat"}, {1.0, 1.0, gamma});
      }
      break;
    }
    default:
      throw ConfigError("--table: expected 1, 2 or 3");
  }
  if (table.rows.empty()) throw ConfigError("replicate-table: the filters select no column");
  return table;
}

void write_summary_csv(const SummaryTable& table, std::ostream& out) {
  out << "# dyncop replicate-table table=" << table.table_id << " seed=" << table.seed << "\n";
  out << "table,column,estimand,truth,mean,variance,mse,mc_se,reps,fallbacks\n";
  for (const auto& r : table.rows) {
    out << table.table_id << ',' << r.column << ',' << r.estimand << ',' << format_double(r.truth)
        << ',' << format_double(r.mean) << ',' << format_double(r.variance) << ','
        << format_double(r.mse) << ',' << format_double(r.mc_se) << ',' << r.reps << ','
        << r.failures << '\n';
  }
}

// ----------------------------------------------------------------------------
// Fit serialization

void write_param_fit_csv(const ParamFit& fit, const AsymptoticReport* report, std::ostream& out) {
  std::vector<std::string> keys{"family", "estimator", "n", "alpha", "beta", "gamma",
                                "residual_norm", "gamma_roots"};
  std::string roots;
  for (std::size_t k = 0; k < fit.gamma_roots.size(); ++k) {
    roots += (k ? ";" : "") + format_double(fit.gamma_roots[k]);
  }
  std::vector<std::string> values{to_string(fit.family), to_string(fit.estimator),
                                  std::to_string(fit.n),  format_double(fit.alpha),
                                  format_double(fit.beta), format_double(fit.gamma),
                                  format_double(fit.residual_norm), roots};
  if (report) {
    const auto d = report->sigma.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
      keys.push_back("scaling_" + std::to_string(i + 1));
      values.push_back(format_double(report->scaling(i)));
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j) {
        keys.push_back("sigma_" + std::to_string(i + 1) + std::to_string(j + 1));
        values.push_back(format_double(report->sigma(i, j)));
      }
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        keys.push_back("delta_" + std::to_string(i + 1) + std::to_string(j + 1));
        values.push_back(format_double(report->delta_hat(i, j)));
      }
    }
  }
  for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << keys[k];
  out << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << values[k];
  out << '\n';
}

ParamFit read_param_fit_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  if (table.rows.empty()) throw ConfigError("fit csv: no value row");
  auto col = [&](const char* name) {
    const int c = table.column(name);
    if (c < 0) throw ConfigError(std::string("fit csv: missing column ") + name);
    return c;
  };
  ParamFit fit;
  fit.family = parse_model_family(table.rows[0][static_cast<std::size_t>(col("family"))]);
  fit.estimator = parse_estimator(table.rows[0][static_cast<std::size_t>(col("estimator"))]);
  fit.n = static_cast<std::size_t>(table.number(0, col("n")));
  fit.alpha = table.number(0, col("alpha"));
  fit.beta = table.number(0, col("beta"));
  fit.gamma = table.number(0, col("gamma"));
  fit.residual_norm = table.number(0, col("residual_norm"));
  const std::string roots = table.rows[0][static_cast<std::size_t>(col("gamma_roots"))];
  if (!roots.empty()) fit.gamma_roots = parse_number_list(roots, ';', "gamma_roots");
  return fit;
}

void write_curve_csv(const std::vector<CurveFit>& fits, std::ostream& out) {
  out << "s,m_hat,route,h,kernel,flag\n";
  for (const auto& fit : fits) {
    for (const auto& p : fit.points) {
      out << format_double(p.s) << ',' << (p.flagged ? std::string() : format_double(p.m_hat))
          << ',' << to_string(fit.route) << ',' << format_double(fit.h) << ',' << fit.kernel_id
          << ',' << (p.flagged ? "out_of_range" : "ok") << '\n';
    }
  }
}

// ----------------------------------------------------------------------------
// Subcommands

void cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
  const CorrelationPath path = make_path(config);
  if (config.n < 2) throw ConfigError("--n: must be >= 2");
  RhoSchedule schedule = [&] {
    try {
      return build_schedule(path, config.n);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--path/--n: ") + e.what());
    }
  }();
  RngStream stream(config.seed, 0);
  const PairedSample sample = sample_array(schedule, stream);
  out << "# dyncop simulate path=" << path.describe() << " n=" << config.n
      << " seed=" << config.seed << "\n";
  out << "i,u,v\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out << (i + 1) << ',' << format_double(sample.u()[i]) << ',' << format_double(sample.v()[i])
        << '\n';
  }
}

namespace {

PairedSample load_input(const ExperimentConfig& config) {
  if (config.in.empty()) throw ConfigError("--in: an input CSV is required");
  return read_paired_sample_file(config.in);
}

ParamFit fit_family(const PairedSample& sample, ModelFamily family, Estimator estimator) {
  switch (family) {
    case ModelFamily::Constant: return fit_constant(sample, estimator);
    case ModelFamily::Linear: return fit_linear(sample, estimator);
    case ModelFamily::Power: return fit_power(sample, estimator);
  }
  throw ConfigError("unknown family");
}

ModelFamily config_family(const ExperimentConfig& config) {
  try {
    return parse_model_family(config.path);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("--path: ") + e.what());
  }
}

void log_fit(const ParamFit& fit, std::ostream& log) {
  log << "family=" << to_string(fit.family) << " estimator=" << to_string(fit.estimator)
      << " n=" << fit.n << "\n  alpha=" << format_double(fit.alpha);
  if (fit.family != ModelFamily::Constant) log << " beta=" << format_double(fit.beta);
  if (fit.family == ModelFamily::Power) log << " gamma=" << format_double(fit.gamma);
  log << "\n  residual_norm=" << format_double(fit.residual_norm) << "\n";
  for (const auto& w : fit.warnings) log << "  warning: " << w << "\n";
}

void log_test(const char* name, const TestResult& t, std::ostream& log) {
  log << name << ": statistic=" << format_double(t.statistic) << " dof=" << t.dof
      << " p_value=" << format_double(t.p_value) << "  [H0: " << t.null_description << "]\n";
}

}  // namespace

void cmd_fit_param(const ExperimentConfig& config, std::ostream& out, std::ostream& log) {
  const ModelFamily family = config_family(config);
  const Estimator estimator = config_estimator(config.estimator, "--estimator");
  const PairedSample sample = load_input(config);
  ParamFit fit;
  try {
    fit = fit_family(sample, family, estimator);
  } catch (const FitNonConvergence& e) {
    log << "fit did not converge; best iterate:\n";
    log_fit(e.best_iterate(), log);
    throw;
  }
  const AsymptoticReport report = asymptotic_report(fit);
  write_param_fit_csv(fit, &report, out);
  log_fit(fit, log);
  if (config.null_theta) {
    log_test("hotelling", hotelling_test(fit, report, *config.null_theta), log);
  }
  if (family == ModelFamily::Linear) log_test("constancy", constancy_test(sample, estimator), log);
}

void cmd_fit_nonparam(const ExperimentConfig& config, std::ostream& out, std::ostream& log) {
  const Estimator route = config_estimator(config.route, "--route");
  const PairedSample sample = load_input(config);
  const std::vector<double> grid = parse_curve_grid(config.grid);
  const Kernel kernel = Kernel::epanechnikov();
  const std::size_t n = sample.size();
  if (n < 10) throw ConfigError("--in: needs at least 10 observations");

  std::vector<double> bandwidths;
  std::vector<std::string> tags;
  if (config.bandwidth.empty()) {
    for (double d : config.d) {
      if (!(d > 0.0)) throw ConfigError("--d: values must be > 0");
      bandwidths.push_back(practical_bandwidth(n, d));
      tags.push_back("d" + format_double(d));
    }
  } else if (config.bandwidth == "plugin") {
    const double m2 = pilot_second_derivative(sample);
    log << "pilot m''=" << format_double(m2) << "\n";
    bandwidths.push_back(optimal_bandwidth(m2, n, kernel, route));
    tags.push_back("plugin");
  } else {
    const auto h = parse_number_list(config.bandwidth, ',', "--bandwidth");
    for (double v : h) {
      bandwidths.push_back(v);
      tags.push_back("h" + format_double(v));
    }
  }

  const std::vector<double> z = responses(sample, route);
  std::vector<CurveFit> fits;
  for (double h : bandwidths) {
    if (!(h > 0.0 && h < 0.5)) {
      throw ConfigError("bandwidth h=" + format_double(h) + " is outside (0, 1/2)");
    }
    fits.push_back(fit_m_curve(z, grid, h, kernel, route));
  }
  for (std::size_t k = 0; k < fits.size(); ++k) {
    std::size_t flagged = 0;
    for (const auto& p : fits[k].points) flagged += p.flagged ? 1 : 0;
    log << tags[k] << ": h=" << format_double(fits[k].h) << " lambda=" << format_double(fits[k].lambda)
        << " flagged=" << flagged << "/" << fits[k].points.size() << "\n";
  }

  if (!config.out.empty() && fits.size() == 1) {
    std::ofstream f(config.out);
    if (!f) throw ConfigError("--out: cannot write '" + config.out + "'");
    write_curve_csv(fits, f);
    return;
  }
  if (!config.out.empty()) {
    const auto dot = config.out.find_last_of('.');
    const bool has_ext = dot != std::string::npos && config.out.find('/', dot) == std::string::npos;
    const std::string stem = has_ext ? config.out.substr(0, dot) : config.out;
    const std::string ext = has_ext ? config.out.substr(dot) : ".csv";
    for (std::size_t k = 0; k < fits.size(); ++k) {
      const std::string file = stem + "_" + tags[k] + ext;
      std::ofstream f(file);
      if (!f) throw ConfigError("--out: cannot write '" + file + "'");
      write_curve_csv({fits[k]}, f);
      log << "wrote " << file << "\n";
    }
    return;
  }
  write_curve_csv(fits, out);
}

void cmd_limit(const ExperimentConfig& config, std::ostream& out) {
  const CorrelationPath path = make_path(config);
  const LimitRegime regime = parse_regime(config.regime);
  const auto grid = parse_xy_grid(config.grid);
  std::optional<LimitLaw> law;
  try {
    law.emplace(path, regime);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--regime/--path: ") + e.what());
  }
  out << "# dyncop limit path=" << path.describe() << " regime=" << to_string(regime) << "\n";
  if (config.empirical) {
    require_reps(config);
    if (config.n < 10) throw ConfigError("--n: must be >= 10");
    MaximaExperiment exp;
    exp.path = path;
    exp.regime = regime;
    exp.n = config.n;
    exp.replications = config.reps;
    exp.grid = grid;
    exp.seed = config.seed;
    const auto rows = [&] {
      try {
        return empirical_maxima_cdf(exp, config.threads);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("--path/--n: ") + e.what());
      }
    }();
    out << "x,y,empirical,limit,gap\n";
    for (const auto& r : rows) {
      out << format_double(r.x) << ',' << format_double(r.y) << ',' << format_double(r.empirical)
          << ',' << format_double(r.limit) << ',' << format_double(r.gap) << '\n';
    }
  } else {
    out << "x,y,G,l\n";
    for (const auto& [x, y] : grid) {
      out << format_double(x) << ',' << format_double(y) << ',' << format_double(limit_cdf(*law, x, y))
          << ',' << format_double(tail_dependence_fn(*law, x, y)) << '\n';
    }
  }
  out << "# lambda=" << format_double(tail_coefficient(*law)) << "\n";
}

void cmd_replicate_table(const ExperimentConfig& config, std::ostream& out, std::ostream& log) {
  const SummaryTable table = replicate_table(config);
  write_summary_csv(table, out);
  log << "table " << table.table_id << " (" << config.reps << " replications, seed " << config.seed
      << ")\n";
  for (const auto& r : table.rows) {
    log << "  " << std::left << std::setw(16) << r.column << std::setw(26) << r.estimand
        << " E=" << std::setw(10) << std::setprecision(4) << std::fixed << r.mean
        << " V=" << std::setw(10) << r.variance << " MSE=" << std::setw(10) << r.mse
        << " se=" << r.mc_se;
    if (r.failures) log << " fallbacks=" << r.failures;
    log << "\n" << std::defaultfloat << std::setprecision(6);
  }
}

void cmd_test(const ExperimentConfig& config, std::ostream& out, std::ostream& log) {
  const Estimator estimator = config_estimator(config.estimator, "--estimator");
  const PairedSample sample = load_input(config);
  TestResult result;
  if (config.kind == "hotelling") {
    const ModelFamily family = config_family(config);
    const ParamFit fit = fit_family(sample, family, estimator);
    const AsymptoticReport report = asymptotic_report(fit);
    const auto null_theta =
        config.null_theta.value_or(std::array<double, 3>{config.alpha, config.beta, config.gamma});
    result = hotelling_test(fit, report, null_theta);
  } else if (config.kind == "constancy") {
    result = constancy_test(sample, estimator);
  } else {
    throw ConfigError("--kind: expected hotelling or constancy");
  }
  out << "kind,estimator,statistic,dof,p_value\n"
      << config.kind << ',' << to_string(estimator) << ',' << format_double(result.statistic) << ','
      << result.dof << ',' << format_double(result.p_value) << '\n';
  log_test(config.kind.c_str(), result, log);
}

}  // namespace dyncop
