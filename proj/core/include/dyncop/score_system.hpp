#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace dyncop {

/// Which moment identity drives estimation: E[(U-1/2)(V-1/2)] = asin(rho/2)/(2 pi)
/// (Spearman) or E[Phi^-1(U) Phi^-1(V)] = rho (Pearson).
enum class Estimator { Spearman, Pearson };

std::string to_string(Estimator estimator);
Estimator parse_estimator(const std::string& text);

/// Expected response for correlation rho. The Spearman target is defined
/// for |rho| <= 2.
double response_target(Estimator estimator, double rho);
double response_target_slope(Estimator estimator, double rho);

/// Linear-in-parameters score system
///   sum_i (z_i - T(1 - (B theta)_i / log n)) B_ik = 0,  k = 1..K,
/// where row i of B holds the basis functions at s = i/n. The Spearman
/// system omits the dT/drho factor from the weights, as the estimating
/// equations are defined that way.
class BasisScoreSystem {
 public:
  BasisScoreSystem(std::span<const double> responses, Eigen::MatrixXd basis, Estimator estimator);

  std::size_t n() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  double log_n() const noexcept { return log_n_; }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

  /// Raw per-observation residuals z_i - T(rho_i(theta)); NaN entries mark
  /// a theta outside the target's domain.
  Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd scores(const Eigen::VectorXd& theta) const;

  /// Root of the system. Pearson: the exact normal-equation solution.
  /// Spearman: damped Newton from the solution of the system linearized at
  /// rho = 1 (or from `start`). Throws NumericalError when the scaled score
  /// max_k |l_k| / n cannot be brought below `tol`.
  Eigen::VectorXd solve(std::optional<Eigen::VectorXd> start = std::nullopt,
                        double tol = 1e-12) const;

 private:
  Eigen::VectorXd linearized_start() const;

  Eigen::Map<const Eigen::VectorXd> z_;
  Eigen::MatrixXd basis_;
  Estimator estimator_;
  double log_n_;
};

/// Basis matrix with rows (s^p_1, ..., s^p_K) at s = i/n; p = 0 is the constant.
Eigen::MatrixXd power_basis(std::size_t n, std::span<const double> exponents);

}  // namespace dyncop
