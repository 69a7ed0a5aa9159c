#include "dyncop/score_system.hpp"

#include <cmath>
#include <limits>

#include "dyncop/errors.hpp"
#include "dyncop/normal.hpp"

namespace dyncop {

std::string to_string(Estimator estimator) {
  return estimator == Estimator::Spearman ? "spearman" : "pearson";
}

Estimator parse_estimator(const std::string& text) {
  if (text == "spearman") return Estimator::Spearman;
  if (text == "pearson") return Estimator::Pearson;
  throw ConfigError("unknown estimator '" + text + "' (expected spearman or pearson)");
}

double response_target(Estimator estimator, double rho) {
  if (estimator == Estimator::Pearson) return rho;
  const double half = 0.5 * rho;
  if (!(std::fabs(half) <= 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::asin(half) / (2.0 * kPi);
}

double response_target_slope(Estimator estimator, double rho) {
  if (estimator == Estimator::Pearson) return 1.0;
  const double half = 0.5 * rho;
  if (!(std::fabs(half) < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return 0.25 / (kPi * std::sqrt(1.0 - half * half));
}

Eigen::MatrixXd power_basis(std::size_t n, std::span<const double> exponents) {
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(n);
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          exponents[k] == 0.0 ? 1.0 : std::pow(s, exponents[k]);
    }
  }
  return basis;
}

BasisScoreSystem::BasisScoreSystem(std::span<const double> responses, Eigen::MatrixXd basis,
                                   Estimator estimator)
    : z_(responses.data(), static_cast<Eigen::Index>(responses.size())),
      basis_(std::move(basis)),
      estimator_(estimator),
      log_n_(std::log(static_cast<double>(responses.size()))) {
  if (static_cast<std::size_t>(basis_.rows()) != responses.size()) {
    throw DomainError("BasisScoreSystem: basis rows must match the number of responses");
  }
  if (responses.size() < 2) throw DomainError("BasisScoreSystem: needs n >= 2");
}

Eigen::VectorXd BasisScoreSystem::residuals(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd m = basis_ * theta;
  Eigen::VectorXd r(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    r(i) = z_(i) - response_target(estimator_, 1.0 - m(i) / log_n_);
  }
  return r;
}

Eigen::VectorXd BasisScoreSystem::scores(const Eigen::VectorXd& theta) const {
  return basis_.transpose() * residuals(theta);
}

Eigen::VectorXd BasisScoreSystem::linearized_start() const {
  // T(rho) ~ T(1) - T'(1) (B theta) / log n, so theta solves
  // B'B theta = (log n / T'(1)) B' (T(1) - z).
  const double t1 = response_target(estimator_, 1.0);
  const double slope1 = estimator_ == Estimator::Pearson ? 1.0 : 0.25 / (kPi * std::sqrt(0.75));
  const Eigen::MatrixXd gram = basis_.transpose() * basis_;
  const Eigen::VectorXd rhs =
      basis_.transpose() * (Eigen::VectorXd::Constant(z_.size(), t1) - z_) * (log_n_ / slope1);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw NumericalError("score system: singular design (fewer distinct design points than parameters)");
  }
  return ldlt.solve(rhs);
}

Eigen::VectorXd BasisScoreSystem::solve(std::optional<Eigen::VectorXd> start, double tol) const {
  Eigen::VectorXd theta = linearized_start();
  if (estimator_ == Estimator::Pearson) return theta;  // target is linear in theta
  if (start && start->size() == theta.size()) {
    const Eigen::VectorXd candidate = *start;
    if (scores(candidate).allFinite()) theta = candidate;
  }

  const double scale = static_cast<double>(n());
  auto score_norm = [&](const Eigen::VectorXd& s) {
    return s.allFinite() ? s.cwiseAbs().maxCoeff() / scale : std::numeric_limits<double>::infinity();
  };

  Eigen::VectorXd score = scores(theta);
  double norm = score_norm(score);
  for (int iter = 0; iter < 100 && norm > tol; ++iter) {
    const Eigen::VectorXd m = basis_ * theta;
    Eigen::VectorXd weight(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      weight(i) = response_target_slope(estimator_, 1.0 - m(i) / log_n_) / log_n_;
    }
    if (!weight.allFinite()) break;
    const Eigen::MatrixXd jac = basis_.transpose() * weight.asDiagonal() * basis_;
    const Eigen::VectorXd step = jac.ldlt().solve(-score);
    if (!step.allFinite()) break;

    double damp = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half, damp *= 0.5) {
      const Eigen::VectorXd trial = theta + damp * step;
      const Eigen::VectorXd trial_score = scores(trial);
      const double trial_norm = score_norm(trial_score);
      if (trial_norm < norm) {
        theta = trial;
        score = trial_score;
        norm = trial_norm;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(norm <= tol)) {
    // Newton stalls at rounding level; accept anything well inside the
    // caller-facing 1e-10 contract.
    if (!(norm <= 1e-10)) {
      throw NumericalError("score system: Newton iteration did not converge (scaled score " +
                           std::to_string(norm) + ")");
    }
  }
  return theta;
}

}  // namespace dyncop
