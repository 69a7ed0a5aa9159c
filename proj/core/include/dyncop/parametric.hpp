#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dyncop/copula.hpp"
#include "dyncop/errors.hpp"
#include "dyncop/score_system.hpp"

namespace dyncop {

enum class ModelFamily { Constant, Linear, Power };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& text);

/// Number of free parameters: 1, 2 or 3.
int parameter_count(ModelFamily family) noexcept;

struct ParamFit {
  ModelFamily family = ModelFamily::Constant;
  Estimator estimator = Estimator::Spearman;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  /// max_k |l_nk| / n at the returned parameters.
  double residual_norm = 0.0;
  std::size_t n = 0;
  /// Every bracketed root of the profiled gamma equation (power family).
  std::vector<double> gamma_roots;
  std::vector<std::string> warnings;

  std::array<double, 3> theta() const { return {alpha, beta, gamma}; }
};

/// Thrown by fit_power when no root of the profiled third score equation is
/// bracketed; carries the grid point with the smallest least-squares loss.
class FitNonConvergence : public NumericalError {
 public:
  FitNonConvergence(const std::string& what, ParamFit best)
      : NumericalError(what), best_(std::move(best)) {}
  const ParamFit& best_iterate() const noexcept { return best_; }

 private:
  ParamFit best_;
};

/// Z_i = (pseudo_u_i - 1/2)(pseudo_v_i - 1/2).
std::vector<double> spearman_responses(const PairedSample& sample);
/// Z*_i = Phi^-1(pseudo_u_i) Phi^-1(pseudo_v_i).
std::vector<double> pearson_responses(const PairedSample& sample);
std::vector<double> responses(const PairedSample& sample, Estimator estimator);

/// The score equations l_n1.. l_nK of the family at (alpha, beta, gamma);
/// the linear family uses gamma = 1 and the first two equations.
Eigen::VectorXd score_equations(std::span<const double> responses, Estimator estimator,
                                ModelFamily family, double alpha, double beta, double gamma);

struct PowerSolverConfig {
  double gamma_min = 0.02;
  double gamma_max = 50.0;
  int grid_points = 80;
  double tol = 1e-10;
};

// Response-level entry points; the sample overloads compute responses first.
ParamFit fit_constant(std::span<const double> responses, Estimator estimator);
ParamFit fit_linear(std::span<const double> responses, Estimator estimator);
ParamFit fit_power(std::span<const double> responses, Estimator estimator,
                   const PowerSolverConfig& config = {});

ParamFit fit_constant(const PairedSample& sample, Estimator estimator);
ParamFit fit_linear(const PairedSample& sample, Estimator estimator);
ParamFit fit_power(const PairedSample& sample, Estimator estimator,
                   const PowerSolverConfig& config = {});

/// (alpha, beta) solving the first two power-family equations at fixed gamma.
std::array<double, 2> solve_power_inner(std::span<const double> responses, Estimator estimator,
                                        double gamma);

/// Limit covariance and scaling objects at the fitted parameters.
///
/// The asymptotic statement is scaling * delta_hat * (theta_hat - theta) -> N(0, sigma).
/// Power family: 3x3 objects. Linear family: 2x2 objects for the contrasts
/// (alpha + beta/2, alpha/2 + beta/3). Constant family: 1x1, the linear
/// result at beta = 0.
struct AsymptoticReport {
  ModelFamily family = ModelFamily::Power;
  Estimator estimator = Estimator::Spearman;
  std::size_t n = 0;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma0;
  Eigen::MatrixXd delta_hat;
  Eigen::VectorXd scaling;
};

AsymptoticReport asymptotic_report(const ParamFit& fit);

/// Integral over (0, 1) of (u - 1/2)^2 phi(Phi^-1(u)).
double rank_variance_integral();

/// Sigma for the Spearman power fit; sigma_11 integrates the positive part of m.
Eigen::Matrix3d spearman_power_sigma(double alpha, double beta, double gamma);
/// Sigma* for the Pearson power fit.
Eigen::Matrix3d pearson_power_sigma(double alpha, double beta, double gamma);
/// Delta for the Spearman system; the Pearson Delta* is 2 sqrt(3) pi times this.
Eigen::Matrix3d power_delta(double beta, double gamma);
/// Sigma-tilde (2x2) for the linear family, including the 12 pi^2 factor on
/// the Spearman side.
Eigen::Matrix2d linear_sigma_tilde(Estimator estimator, double alpha, double beta);

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::string null_description;
};

/// Hotelling T^2 test of theta = null_theta against a chi-square reference
/// with parameter_count(fit.family) degrees of freedom.
TestResult hotelling_test(const ParamFit& fit, const AsymptoticReport& report,
                          const std::array<double, 3>& null_theta);

/// Test of beta = 0 in m(s) = alpha + beta s through the contrast
/// (alpha/2 + beta/3) - (alpha + beta/2)/2 = beta/12 at rate sqrt(n)/log n.
TestResult constancy_test(std::span<const double> responses, Estimator estimator);
TestResult constancy_test(const PairedSample& sample, Estimator estimator);

}  // namespace dyncop
