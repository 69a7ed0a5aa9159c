#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dyncop/copula.hpp"
#include "dyncop/score_system.hpp"

namespace dyncop {

/// Symmetric kernel supported on [-1, 1] with its moments precomputed.
class Kernel {
 public:
  static Kernel epanechnikov();
  /// Moments are computed by quadrature. Throws DomainError if the function
  /// is not symmetric, negative somewhere, or does not integrate to one.
  static Kernel custom(std::string id, std::function<double(double)> fn);

  const std::string& id() const noexcept { return id_; }
  double operator()(double t) const { return (t < -1.0 || t > 1.0) ? 0.0 : fn_(t); }
  double mass() const noexcept { return mass_; }                  // int k
  double second_moment() const noexcept { return second_moment_; }  // int t^2 k
  double roughness() const noexcept { return roughness_; }          // int k^2

 private:
  Kernel(std::string id, std::function<double(double)> fn, double mass, double second, double rough)
      : id_(std::move(id)), fn_(std::move(fn)), mass_(mass), second_moment_(second), roughness_(rough) {}

  std::string id_;
  std::function<double(double)> fn_;
  double mass_;
  double second_moment_;
  double roughness_;
};

/// Local-linear weights w_j = k((s - j/n)/h) [s_{n,2} - (s - j/n) s_{n,1}],
/// j = 1..n (zero outside the window). DomainError if fewer than two design
/// points get positive kernel weight or s, h are out of range.
std::vector<double> local_linear_weights(double s, std::size_t n, double h, const Kernel& k);

/// Sum_j w_j y_j / Sum_j w_j for responses y_1..y_n.
double local_linear_smooth(std::span<const double> y, double s, double h, const Kernel& k);

/// Q-hat(s) on the grid from the Spearman responses of `sample`.
std::vector<double> fit_q_curve(const PairedSample& sample, std::span<const double> grid, double h,
                                const Kernel& k);

struct CurvePoint {
  double s;
  double m_hat;  // NaN when flagged
  bool flagged;  // Spearman back-transform undefined (|Q-hat| > 1/12)
};

struct CurveFit {
  std::vector<CurvePoint> points;
  double h = 0.0;
  std::string kernel_id;
  Estimator route = Estimator::Spearman;
  std::size_t n = 0;
  /// h^2 sqrt(n h) / log n at this (n, h).
  double lambda = 0.0;
};

/// m-hat (Spearman route) or m-hat* (Pearson route) on the grid.
CurveFit fit_m_curve(const PairedSample& sample, std::span<const double> grid, double h,
                     const Kernel& k, Estimator route);
/// The same from precomputed responses of the chosen route.
CurveFit fit_m_curve(std::span<const double> responses, std::span<const double> grid, double h,
                     const Kernel& k, Estimator route);

/// Asymptotic MSE-optimal bandwidth for a given m''(s). DomainError if m'' = 0.
double optimal_bandwidth(double m_second_deriv, std::size_t n, const Kernel& k, Estimator route);

/// d (log^2 n / n)^{1/5}.
double practical_bandwidth(std::size_t n, double d);

struct LimitParams {
  double bias;
  double variance;
};

/// Bias and variance of the normal limit of (sqrt(nh)/log n)(m-hat(s) - m(s)).
LimitParams normal_limit_params(double m_second_deriv, double lambda_limit, const Kernel& k,
                               Estimator route);

/// Pilot m'' from a quadratic m(s) = a + b s + c s^2 fitted by the Spearman
/// score equations; returns 2c.
double pilot_second_derivative(const PairedSample& sample);

/// Default evaluation grid 0.10, 0.11, ..., 0.90.
std::vector<double> default_curve_grid();

}  // namespace dyncop
