#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "dyncop/normal.hpp"
#include "dyncop/parametric.hpp"
#include "dyncop/quadrature.hpp"

namespace dyncop {

namespace {

// (12 pi^2)^{1/2} converts the Spearman Delta normalization to the
// contrast normalization of the linear family: (6 pi / sqrt 3)^2 = 12 pi^2.
constexpr double kTwelvePiSq = 12.0 * kPi * kPi;

// Integral of the positive part of sqrt(m). Fitted paths may dip below zero;
// those stretches contribute nothing. The substitution s = t^p with
// p * gamma >= 2 removes the cusp of s^gamma at the origin, and a quadratic
// substitution at a sign change of m removes the square-root edge there.
double root_m_integral(double alpha, double beta, double gamma) {
  if (beta == 0.0) return std::sqrt(std::max(0.0, alpha));
  const double p = std::max(1.0, std::ceil(2.0 / gamma));
  const auto g = [&](double t) {
    const double m = alpha + beta * std::pow(t, p * gamma);
    return m > 0.0 ? std::sqrt(m) * p * std::pow(t, p - 1.0) : 0.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (alpha < 0.0 && beta > 0.0) {
    if (alpha + beta <= 0.0) return 0.0;
    lo = std::pow(-alpha / beta, 1.0 / (p * gamma));
  } else if (alpha + beta < 0.0 && beta < 0.0) {
    if (alpha <= 0.0) return 0.0;
    hi = std::pow(-alpha / beta, 1.0 / (p * gamma));
  } else {
    return integrate(g, 0.0, 1.0, kCoefficientQuadrature);
  }
  const double width = hi - lo;
  if (!(width > 0.0)) return 0.0;
  const bool edge_at_lo = lo > 0.0;
  return integrate(
      [&](double u) {
        const double t = edge_at_lo ? lo + width * u * u : hi - width * u * u;
        return g(t) * 2.0 * width * u;
      },
      0.0, 1.0, kCoefficientQuadrature);
}

double chi_square_tail(double x, int dof) {
  if (!(x > 0.0)) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

}  // namespace

double rank_variance_integral() {
  static const double value = integrate(
      [](double u) {
        const double d = u - 0.5;
        return d * d * std_normal_pdf(std_normal_quantile(u));
      },
      0.0, 1.0, QuadratureSpec{1e-14, 60});
  return value;
}

Eigen::Matrix3d spearman_power_sigma(double alpha, double beta, double gamma) {
  const double a = 1.0 + gamma;
  const double b = 1.0 + 2.0 * gamma;
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  sigma(0, 0) = std::sqrt(2.0) * root_m_integral(alpha, beta, gamma) * rank_variance_integral();
  sigma(1, 1) = 1.0 / (180.0 * b) - 1.0 / (180.0 * a * a);
  sigma(2, 2) = 1.0 / (90.0 * b * b * b) - 1.0 / (180.0 * a * a * a * a);
  sigma(1, 2) = sigma(2, 1) = -1.0 / (180.0 * b * b) + 1.0 / (180.0 * a * a * a);
  return sigma;
}

Eigen::Matrix3d pearson_power_sigma(double alpha, double beta, double gamma) {
  const double a = 1.0 + gamma;
  const double b = 1.0 + 2.0 * gamma;
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  const double lead = alpha + beta / a;
  sigma(0, 0) = 4.0 * lead * lead + 2.0 * beta * beta * (1.0 / b - 1.0 / (a * a));
  sigma(1, 1) = 2.0 / b - 2.0 / (a * a);
  sigma(2, 2) = 4.0 / (b * b * b) - 2.0 / (a * a * a * a);
  sigma(1, 2) = sigma(2, 1) = -2.0 / (b * b) + 2.0 / (a * a * a);
  return sigma;
}

Eigen::Matrix3d power_delta(double beta, double gamma) {
  const double a = 1.0 + gamma;
  const double b = 1.0 + 2.0 * gamma;
  Eigen::Matrix3d delta;
  delta << 1.0, 1.0 / a, -beta / (a * a),
           1.0 / a, 1.0 / b, -beta / (b * b),
           -1.0 / (a * a), -1.0 / (b * b), 2.0 * beta / (b * b * b);
  return delta * (std::sqrt(3.0) / (6.0 * kPi));
}

Eigen::Matrix2d linear_sigma_tilde(Estimator estimator, double alpha, double beta) {
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  if (estimator == Estimator::Spearman) {
    sigma(0, 0) = std::sqrt(2.0) * root_m_integral(alpha, beta, 1.0) * rank_variance_integral();
    sigma(1, 1) = 1.0 / 2160.0;
    sigma *= kTwelvePiSq;
  } else {
    sigma(0, 0) = 4.0 * alpha * alpha + 4.0 * alpha * beta + 7.0 * beta * beta / 6.0;
    sigma(1, 1) = 1.0 / 6.0;
  }
  return sigma;
}

AsymptoticReport asymptotic_report(const ParamFit& fit) {
  if (fit.n < 2) throw DomainError("asymptotic_report: fit has no sample size");
  AsymptoticReport rep;
  rep.family = fit.family;
  rep.estimator = fit.estimator;
  rep.n = fit.n;
  const double root_n = std::sqrt(static_cast<double>(fit.n));
  const double log_n = std::log(static_cast<double>(fit.n));
  const bool spearman = fit.estimator == Estimator::Spearman;
  const double lead_rate = spearman ? root_n / std::pow(log_n, 0.75) : root_n;
  const double slow_rate = root_n / log_n;

  switch (fit.family) {
    case ModelFamily::Power: {
      rep.sigma = spearman ? spearman_power_sigma(fit.alpha, fit.beta, fit.gamma)
                           : pearson_power_sigma(fit.alpha, fit.beta, fit.gamma);
      rep.delta_hat = power_delta(fit.beta, fit.gamma);
      if (!spearman) rep.delta_hat *= 2.0 * std::sqrt(3.0) * kPi;
      rep.scaling = Eigen::Vector3d(lead_rate, slow_rate, slow_rate);
      break;
    }
    case ModelFamily::Linear: {
      rep.sigma = linear_sigma_tilde(fit.estimator, fit.alpha, fit.beta);
      Eigen::Matrix2d contrasts;
      contrasts << 1.0, 0.5, 0.5, 1.0 / 3.0;
      rep.delta_hat = contrasts;
      rep.scaling = Eigen::Vector2d(lead_rate, slow_rate);
      break;
    }
    case ModelFamily::Constant: {
      rep.sigma = linear_sigma_tilde(fit.estimator, fit.alpha, 0.0).topLeftCorner(1, 1);
      rep.delta_hat = Eigen::MatrixXd::Identity(1, 1);
      rep.scaling = Eigen::VectorXd::Constant(1, lead_rate);
      break;
    }
  }
  rep.sigma0 = rep.sigma;
  rep.sigma0.row(0).setZero();
  rep.sigma0.col(0).setZero();
  return rep;
}

TestResult hotelling_test(const ParamFit& fit, const AsymptoticReport& report,
                          const std::array<double, 3>& null_theta) {
  const int d = parameter_count(fit.family);
  if (report.sigma.rows() != d) throw DomainError("hotelling_test: report does not match the fit");
  if (!(report.sigma(0, 0) > 0.0)) {
    throw NumericalError("hotelling_test: Sigma is singular in the alpha (sigma_11) block");
  }
  if (d > 1) {
    const Eigen::MatrixXd lower = report.sigma.bottomRightCorner(d - 1, d - 1);
    if (!(lower.determinant() > 0.0)) {
      throw NumericalError("hotelling_test: Sigma is singular in the (beta, gamma) block");
    }
  }
  const auto theta = fit.theta();
  Eigen::VectorXd diff(d);
  for (int k = 0; k < d; ++k) diff(k) = theta[static_cast<std::size_t>(k)] - null_theta[static_cast<std::size_t>(k)];
  const Eigen::VectorXd v = report.scaling.cwiseProduct(report.delta_hat * diff);

  TestResult out;
  out.statistic = v.dot(report.sigma.ldlt().solve(v));
  out.dof = d;
  out.p_value = chi_square_tail(out.statistic, d);
  out.null_description = "theta = (" + std::to_string(null_theta[0]);
  if (d > 1) out.null_description += ", " + std::to_string(null_theta[1]);
  if (d > 2) out.null_description += ", " + std::to_string(null_theta[2]);
  out.null_description += ") for the " + to_string(fit.family) + " family";
  return out;
}

TestResult constancy_test(std::span<const double> responses, Estimator estimator) {
  const ParamFit fit = fit_linear(responses, estimator);
  const double n = static_cast<double>(fit.n);
  const double slow_rate = std::sqrt(n) / std::log(n);
  // Only the sigma-tilde_22 entry is needed; it does not depend on (alpha, beta).
  const double variance = estimator == Estimator::Spearman ? kTwelvePiSq / 2160.0 : 1.0 / 6.0;
  const double z = slow_rate * (fit.beta / 12.0) / std::sqrt(variance);
  TestResult out;
  out.statistic = z * z;
  out.dof = 1;
  out.p_value = chi_square_tail(out.statistic, 1);
  out.null_description = "beta = 0 in m(s) = alpha + beta s (" + to_string(estimator) + ")";
  return out;
}

TestResult constancy_test(const PairedSample& sample, Estimator estimator) {
  return constancy_test(responses(sample, estimator), estimator);
}

}  // namespace dyncop
