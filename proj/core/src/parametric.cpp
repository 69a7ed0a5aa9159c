#include "dyncop/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/math/tools/toms748_solve.hpp>

#include "dyncop/normal.hpp"
#include "dyncop/quadrature.hpp"

namespace dyncop {

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Constant: return "const";
    case ModelFamily::Linear: return "linear";
    case ModelFamily::Power: return "power";
  }
  return "unknown";
}

ModelFamily parse_model_family(const std::string& text) {
  if (text == "const" || text == "constant") return ModelFamily::Constant;
  if (text == "linear") return ModelFamily::Linear;
  if (text == "power") return ModelFamily::Power;
  throw ConfigError("unknown model family '" + text + "' (expected const, linear or power)");
}

int parameter_count(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::Constant: return 1;
    case ModelFamily::Linear: return 2;
    case ModelFamily::Power: return 3;
  }
  return 0;
}

std::vector<double> spearman_responses(const PairedSample& sample) {
  const auto& pu = sample.pseudo_u();
  const auto& pv = sample.pseudo_v();
  std::vector<double> z(sample.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (pu[i] - 0.5) * (pv[i] - 0.5);
  return z;
}

std::vector<double> pearson_responses(const PairedSample& sample) {
  const auto& pu = sample.pseudo_u();
  const auto& pv = sample.pseudo_v();
  std::vector<double> z(sample.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std_normal_quantile(pu[i]) * std_normal_quantile(pv[i]);
  }
  return z;
}

std::vector<double> responses(const PairedSample& sample, Estimator estimator) {
  return estimator == Estimator::Spearman ? spearman_responses(sample) : pearson_responses(sample);
}

namespace {

constexpr std::array<double, 1> kConstantExponents{0.0};
constexpr std::array<double, 2> kLinearExponents{0.0, 1.0};

double scaled_norm(const Eigen::VectorXd& scores, std::size_t n) {
  return scores.cwiseAbs().maxCoeff() / static_cast<double>(n);
}

// Third power-family equation sum_i r_i s^gamma log s, given the residuals.
double third_score(const Eigen::VectorXd& residuals, const Eigen::MatrixXd& basis,
                   const std::vector<double>& log_s) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    total += residuals(i) * basis(i, 1) * log_s[static_cast<std::size_t>(i)];
  }
  return total;
}

std::vector<double> log_design(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::log(static_cast<double>(i + 1) / static_cast<double>(n));
  }
  return out;
}

void add_common_warnings(ParamFit& fit) {
  if (fit.family != ModelFamily::Constant && !(fit.alpha > 0.0)) {
    fit.warnings.push_back("alpha_hat <= 0: m(s) may leave the positive range");
  }
  if (fit.family == ModelFamily::Power && std::fabs(fit.beta) < 1e-3) {
    fit.warnings.push_back("|beta_hat| < 1e-3: gamma is poorly identified");
  }
}

}  // namespace

Eigen::VectorXd score_equations(std::span<const double> responses, Estimator estimator,
                                ModelFamily family, double alpha, double beta, double gamma) {
  const std::size_t n = responses.size();
  switch (family) {
    case ModelFamily::Constant: {
      BasisScoreSystem sys(responses, power_basis(n, kConstantExponents), estimator);
      return sys.scores(Eigen::VectorXd::Constant(1, alpha));
    }
    case ModelFamily::Linear: {
      BasisScoreSystem sys(responses, power_basis(n, kLinearExponents), estimator);
      return sys.scores(Eigen::Vector2d(alpha, beta));
    }
    case ModelFamily::Power: {
      const std::array<double, 2> exps{0.0, gamma};
      BasisScoreSystem sys(responses, power_basis(n, exps), estimator);
      const Eigen::Vector2d theta(alpha, beta);
      const Eigen::VectorXd r = sys.residuals(theta);
      Eigen::VectorXd out(3);
      out.head<2>() = sys.basis().transpose() * r;
      out(2) = third_score(r, sys.basis(), log_design(n));
      return out;
    }
  }
  return {};
}

ParamFit fit_constant(std::span<const double> responses, Estimator estimator) {
  const std::size_t n = responses.size();
  if (n < 2) throw DomainError("fit_constant: needs n >= 2");
  const double log_n = std::log(static_cast<double>(n));
  const double mean = std::accumulate(responses.begin(), responses.end(), 0.0) /
                      static_cast<double>(n);
  ParamFit fit;
  fit.family = ModelFamily::Constant;
  fit.estimator = estimator;
  fit.n = n;
  fit.beta = 0.0;
  fit.gamma = 1.0;
  if (estimator == Estimator::Pearson) {
    fit.alpha = (1.0 - mean) * log_n;
  } else {
    if (!(std::fabs(mean) <= 1.0 / 12.0)) {
      throw DomainError("fit_constant: mean Spearman response lies outside [-1/12, 1/12]");
    }
    fit.alpha = (1.0 - 2.0 * std::sin(2.0 * kPi * mean)) * log_n;
  }
  fit.residual_norm =
      scaled_norm(score_equations(responses, estimator, fit.family, fit.alpha, 0.0, 1.0), n);
  add_common_warnings(fit);
  return fit;
}

ParamFit fit_linear(std::span<const double> responses, Estimator estimator) {
  const std::size_t n = responses.size();
  if (n < 4) throw DomainError("fit_linear: needs n >= 4");
  BasisScoreSystem sys(responses, power_basis(n, kLinearExponents), estimator);
  const Eigen::VectorXd theta = sys.solve();
  ParamFit fit;
  fit.family = ModelFamily::Linear;
  fit.estimator = estimator;
  fit.n = n;
  fit.alpha = theta(0);
  fit.beta = theta(1);
  fit.gamma = 1.0;
  fit.residual_norm = scaled_norm(sys.scores(theta), n);
  add_common_warnings(fit);
  return fit;
}

std::array<double, 2> solve_power_inner(std::span<const double> responses, Estimator estimator,
                                        double gamma) {
  const std::array<double, 2> exps{0.0, gamma};
  BasisScoreSystem sys(responses, power_basis(responses.size(), exps), estimator);
  const Eigen::VectorXd theta = sys.solve();
  return {theta(0), theta(1)};
}

ParamFit fit_power(std::span<const double> responses, Estimator estimator,
                   const PowerSolverConfig& config) {
  const std::size_t n = responses.size();
  if (n < 10) throw DomainError("fit_power: needs n >= 10");
  if (!(config.gamma_min > 0.0 && config.gamma_max > config.gamma_min && config.grid_points >= 2)) {
    throw DomainError("fit_power: invalid gamma grid");
  }
  const std::vector<double> log_s = log_design(n);

  struct Profile {
    double gamma;
    double alpha;
    double beta;
    double g;     // third score equation at the inner solution
    double loss;  // least-squares loss sum_i r_i^2
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::optional<Eigen::VectorXd> warm;

  // Inner (alpha, beta) solve at fixed gamma, warm-started from the last success.
  auto profile = [&](double gamma) -> Profile {
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 2);
    for (std::size_t i = 0; i < n; ++i) {
      basis(static_cast<Eigen::Index>(i), 0) = 1.0;
      basis(static_cast<Eigen::Index>(i), 1) = std::exp(gamma * log_s[i]);
    }
    BasisScoreSystem sys(responses, std::move(basis), estimator);
    try {
      const Eigen::VectorXd theta = sys.solve(warm, config.tol * 1e-2);
      warm = theta;
      const Eigen::VectorXd r = sys.residuals(theta);
      return {gamma, theta(0), theta(1), third_score(r, sys.basis(), log_s), r.squaredNorm()};
    } catch (const NumericalError&) {
      return {gamma, nan, nan, nan, nan};
    }
  };

  std::vector<Profile> grid;
  grid.reserve(static_cast<std::size_t>(config.grid_points));
  const double ratio = std::log(config.gamma_max / config.gamma_min) / (config.grid_points - 1);
  for (int k = 0; k < config.grid_points; ++k) {
    grid.push_back(profile(config.gamma_min * std::exp(ratio * k)));
  }

  std::vector<Profile> roots;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const Profile& lo = grid[k];
    const Profile& hi = grid[k + 1];
    if (!std::isfinite(lo.g) || !std::isfinite(hi.g)) continue;
    if (lo.g == 0.0) {
      roots.push_back(lo);
      continue;
    }
    if ((lo.g < 0.0) == (hi.g < 0.0) || hi.g == 0.0) continue;
    warm = Eigen::Vector2d(lo.alpha, lo.beta);
    std::uintmax_t max_iter = 200;
    try {
      const auto bracket = boost::math::tools::toms748_solve(
          [&](double gamma) {
            const double g = profile(gamma).g;
            if (!std::isfinite(g)) throw NumericalError("inner solve failed inside bracket");
            return g;
          },
          lo.gamma, hi.gamma, lo.g, hi.g, boost::math::tools::eps_tolerance<double>(), max_iter);
      const double gamma = std::fabs(profile(bracket.first).g) <= std::fabs(profile(bracket.second).g)
                               ? bracket.first
                               : bracket.second;
      const Profile root = profile(gamma);
      if (std::isfinite(root.g)) roots.push_back(root);
    } catch (const NumericalError&) {
      continue;
    }
  }
  if (std::isfinite(grid.back().g) && grid.back().g == 0.0) roots.push_back(grid.back());

  auto to_fit = [&](const Profile& p) {
    ParamFit fit;
    fit.family = ModelFamily::Power;
    fit.estimator = estimator;
    fit.n = n;
    fit.alpha = p.alpha;
    fit.beta = p.beta;
    fit.gamma = p.gamma;
    fit.residual_norm = scaled_norm(
        score_equations(responses, estimator, ModelFamily::Power, p.alpha, p.beta, p.gamma), n);
    for (const auto& r : roots) fit.gamma_roots.push_back(r.gamma);
    add_common_warnings(fit);
    return fit;
  };
  auto by_loss = [](const Profile& a, const Profile& b) {
    if (!std::isfinite(a.loss)) return false;
    if (!std::isfinite(b.loss)) return true;
    return a.loss < b.loss;
  };

  if (roots.empty()) {
    const auto best = std::min_element(grid.begin(), grid.end(), by_loss);
    if (best == grid.end() || !std::isfinite(best->loss)) {
      throw NumericalError("fit_power: inner system failed on the whole gamma grid");
    }
    ParamFit fit = to_fit(*best);
    fit.warnings.push_back("no root of the gamma equation bracketed on [" +
                           std::to_string(config.gamma_min) + ", " +
                           std::to_string(config.gamma_max) + "]");
    throw FitNonConvergence("fit_power: no root of the profiled gamma equation", std::move(fit));
  }
  // Several roots: keep the one with the smallest least-squares loss.
  return to_fit(*std::min_element(roots.begin(), roots.end(), by_loss));
}

ParamFit fit_constant(const PairedSample& sample, Estimator estimator) {
  return fit_constant(responses(sample, estimator), estimator);
}
ParamFit fit_linear(const PairedSample& sample, Estimator estimator) {
  return fit_linear(responses(sample, estimator), estimator);
}
ParamFit fit_power(const PairedSample& sample, Estimator estimator, const PowerSolverConfig& config) {
  return fit_power(responses(sample, estimator), estimator, config);
}

}  // namespace dyncop
