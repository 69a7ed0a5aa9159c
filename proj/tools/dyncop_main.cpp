// dyncop: simulate, fit and evaluate the dynamic bivariate normal copula.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dyncop/errors.hpp"
#include "dyncop/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::array<double, 3> parse_null(const std::string& text) {
  std::array<double, 3> out{};
  std::istringstream is(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(is, item, ',')) {
    if (k >= 3) throw dyncop::ConfigError("--null: expected alpha,beta,gamma");
    try {
      out[k++] = std::stod(item);
    } catch (const std::exception&) {
      throw dyncop::ConfigError("--null: cannot parse '" + item + "'");
    }
  }
  if (k == 0) throw dyncop::ConfigError("--null: expected alpha,beta,gamma");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic bivariate normal copula: simulation, limit laws and estimation of m(s)"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  dyncop::ExperimentConfig cfg;
  std::string d_list = "0.2,0.3,0.4,0.5";
  std::string null_text;

  app.add_option("--path", cfg.path, "const | linear | power | table:<file>")->capture_default_str();
  auto* alpha = app.add_option("--alpha", cfg.alpha, "alpha")->capture_default_str();
  auto* beta = app.add_option("--beta", cfg.beta, "beta")->capture_default_str();
  auto* gamma = app.add_option("--gamma", cfg.gamma, "gamma")->capture_default_str();
  auto* n_opt = app.add_option("--n", cfg.n, "sample size")->capture_default_str();
  app.add_option("--reps", cfg.reps, "Monte-Carlo replications")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--estimator", cfg.estimator, "spearman | pearson")->capture_default_str();
  app.add_option("--route", cfg.route, "spearman | pearson (nonparametric)")->capture_default_str();
  app.add_option("--d", d_list, "bandwidth constants d in h = d (log^2 n / n)^{1/5}")
      ->capture_default_str();
  app.add_option("--bandwidth", cfg.bandwidth, "fixed h list, or 'plugin' for the pilot rule");
  app.add_option("--grid", cfg.grid,
                 "fit-nonparam: start:stop:step or s list; limit: x,y;x,y;...");
  app.add_option("--regime", cfg.regime, "hr | comonotone | independent")->capture_default_str();
  app.add_option("--kind", cfg.kind, "hotelling | constancy")->capture_default_str();
  app.add_option("--table", cfg.table, "table id 1, 2 or 3")->capture_default_str();
  app.add_option("--in", cfg.in, "input CSV with columns u,v or x,y");
  app.add_option("--out", cfg.out, "output file (default: stdout)");
  app.add_option("--null", null_text, "Hotelling null alpha,beta,gamma");
  app.add_option("--threads", cfg.threads, "worker threads for replications")->capture_default_str();
  app.add_flag("--empirical", cfg.empirical, "limit: add a Monte-Carlo maxima comparison");

  auto* simulate = app.add_subcommand("simulate", "sample a triangular array")->fallthrough();
  auto* fit_param = app.add_subcommand("fit-param", "fit m(s) parametrically")->fallthrough();
  auto* fit_nonparam = app.add_subcommand("fit-nonparam", "local-linear estimate of m(s)")->fallthrough();
  auto* limit = app.add_subcommand("limit", "evaluate G, l and the tail coefficient")->fallthrough();
  auto* replicate = app.add_subcommand("replicate-table", "Monte-Carlo replication of tables 1-3")
                        ->fallthrough();
  auto* test = app.add_subcommand("test", "Hotelling or constancy test on a CSV")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (!null_text.empty()) cfg.null_theta = parse_null(null_text);
    if (!d_list.empty()) {
      cfg.d.clear();
      std::istringstream is(d_list);
      std::string item;
      while (std::getline(is, item, ',')) {
        try {
          cfg.d.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw dyncop::ConfigError("--d: cannot parse '" + item + "'");
        }
      }
    }
    if (replicate->parsed()) {
      if (n_opt->count() > 0) cfg.only_n = cfg.n;
      if (alpha->count() > 0) cfg.only_alpha = cfg.alpha;
      if (beta->count() > 0) cfg.only_beta = cfg.beta;
      if (gamma->count() > 0) cfg.only_gamma = cfg.gamma;
    }

    std::ofstream file;
    const bool to_file = !cfg.out.empty() && !fit_nonparam->parsed();
    if (to_file) {
      file.open(cfg.out);
      if (!file) throw dyncop::ConfigError("--out: cannot write '" + cfg.out + "'");
    }
    std::ostream& out = to_file ? static_cast<std::ostream&>(file) : std::cout;
    std::ostream& log = to_file ? std::cout : std::cerr;

    if (simulate->parsed()) {
      dyncop::cmd_simulate(cfg, out);
    } else if (fit_param->parsed()) {
      dyncop::cmd_fit_param(cfg, out, log);
    } else if (fit_nonparam->parsed()) {
      dyncop::cmd_fit_nonparam(cfg, std::cout, std::cerr);
    } else if (limit->parsed()) {
      dyncop::cmd_limit(cfg, out);
    } else if (replicate->parsed()) {
      dyncop::cmd_replicate_table(cfg, out, log);
    } else if (test->parsed()) {
      dyncop::cmd_test(cfg, out, log);
    }
  } catch (const dyncop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const dyncop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const dyncop::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  return 0;
}
