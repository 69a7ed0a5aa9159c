#include "dyncop/nonparametric.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "dyncop/errors.hpp"
#include "dyncop/normal.hpp"
#include "dyncop/parametric.hpp"
#include "dyncop/quadrature.hpp"

namespace dyncop {

Kernel Kernel::epanechnikov() {
  return Kernel("epanechnikov", [](double t) { return 0.75 * (1.0 - t * t); }, 1.0, 0.2, 0.6);
}

Kernel Kernel::custom(std::string id, std::function<double(double)> fn) {
  const QuadratureSpec quad{1e-13, 60};
  for (double t : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double a = fn(t);
    const double b = fn(-t);
    if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("Kernel: must be nonnegative on [-1, 1]");
    if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a))) {
      throw DomainError("Kernel: must be symmetric");
    }
  }
  const double mass = integrate(fn, -1.0, 1.0, quad);
  if (std::fabs(mass - 1.0) > 1e-10) {
    throw DomainError("Kernel: must integrate to one on [-1, 1]");
  }
  const double second = integrate([&](double t) { return t * t * fn(t); }, -1.0, 1.0, quad);
  const double rough = integrate([&](double t) { return fn(t) * fn(t); }, -1.0, 1.0, quad);
  return Kernel(std::move(id), std::move(fn), mass, second, rough);
}

namespace {

void check_window_args(double s, double h) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("local-linear: s must lie in (0, 1)");
  if (!(h > 0.0 && h < 0.5)) throw DomainError("local-linear: h must lie in (0, 1/2)");
}

struct Window {
  std::size_t first;  // 0-based index of j = first + 1
  std::vector<double> weights;
};

Window window_weights(double s, std::size_t n, double h, const Kernel& k) {
  check_window_args(s, h);
  const double nd = static_cast<double>(n);
  // j/n in [s - h, s + h].
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil((s - h) * nd)));
  const auto hi = static_cast<std::size_t>(std::min(nd, std::floor((s + h) * nd)));
  Window w{lo - 1, {}};
  if (hi < lo) throw DomainError("local-linear: empty window at s = " + std::to_string(s));
  std::vector<double> kern(hi - lo + 1);
  std::vector<double> dist(hi - lo + 1);
  double s1 = 0.0;
  double s2 = 0.0;
  std::size_t positive = 0;
  for (std::size_t j = lo; j <= hi; ++j) {
    const double d = s - static_cast<double>(j) / nd;
    const double kv = k(d / h);
    kern[j - lo] = kv;
    dist[j - lo] = d;
    s1 += kv * d;
    s2 += kv * d * d;
    if (kv > 0.0) ++positive;
  }
  if (positive < 2) {
    throw DomainError("local-linear: fewer than two design points in the window at s = " +
                      std::to_string(s));
  }
  w.weights.resize(kern.size());
  for (std::size_t t = 0; t < kern.size(); ++t) w.weights[t] = kern[t] * (s2 - dist[t] * s1);
  return w;
}

double window_smooth(const Window& w, std::span<const double> y) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < w.weights.size(); ++t) {
    num += w.weights[t] * y[w.first + t];
    den += w.weights[t];
  }
  return num / den;
}

}  // namespace

std::vector<double> local_linear_weights(double s, std::size_t n, double h, const Kernel& k) {
  const Window w = window_weights(s, n, h, k);
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < w.weights.size(); ++t) out[w.first + t] = w.weights[t];
  return out;
}

double local_linear_smooth(std::span<const double> y, double s, double h, const Kernel& k) {
  return window_smooth(window_weights(s, y.size(), h, k), y);
}

std::vector<double> fit_q_curve(const PairedSample& sample, std::span<const double> grid, double h,
                                const Kernel& k) {
  const std::vector<double> z = spearman_responses(sample);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double s : grid) out.push_back(local_linear_smooth(z, s, h, k));
  return out;
}

CurveFit fit_m_curve(std::span<const double> responses, std::span<const double> grid, double h,
                     const Kernel& k, Estimator route) {
  const std::size_t n = responses.size();
  if (n < 2) throw DomainError("fit_m_curve: needs n >= 2");
  const double log_n = std::log(static_cast<double>(n));
  CurveFit fit;
  fit.h = h;
  fit.kernel_id = k.id();
  fit.route = route;
  fit.n = n;
  fit.lambda = h * h * std::sqrt(static_cast<double>(n) * h) / log_n;
  fit.points.reserve(grid.size());
  for (double s : grid) {
    const double smooth = local_linear_smooth(responses, s, h, k);
    CurvePoint p{s, std::numeric_limits<double>::quiet_NaN(), false};
    if (route == Estimator::Pearson) {
      p.m_hat = -(smooth - 1.0) * log_n;
    } else if (std::fabs(smooth) <= 1.0 / 12.0) {
      p.m_hat = (1.0 - 2.0 * std::sin(2.0 * kPi * smooth)) * log_n;
    } else {
      p.flagged = true;
    }
    fit.points.push_back(p);
  }
  return fit;
}

CurveFit fit_m_curve(const PairedSample& sample, std::span<const double> grid, double h,
                     const Kernel& k, Estimator route) {
  return fit_m_curve(responses(sample, route), grid, h, k, route);
}

double optimal_bandwidth(double m_second_deriv, std::size_t n, const Kernel& k, Estimator route) {
  if (m_second_deriv == 0.0 || !std::isfinite(m_second_deriv)) {
    throw DomainError("optimal_bandwidth: m''(s) = 0 makes the optimal bandwidth unbounded");
  }
  if (n < 10) throw DomainError("optimal_bandwidth: needs n >= 10");
  const double log_n = std::log(static_cast<double>(n));
  const double rate = std::pow(log_n * log_n / static_cast<double>(n), 0.2);
  const double variance = route == Estimator::Spearman ? kPi * kPi * k.roughness() / 15.0
                                                       : 2.0 * k.roughness();
  const double bias = m_second_deriv * k.second_moment();
  return rate * std::pow(variance / (bias * bias), 0.2);
}

double practical_bandwidth(std::size_t n, double d) {
  if (n < 10) throw DomainError("practical_bandwidth: needs n >= 10");
  if (!(d >= 0.0)) throw DomainError("practical_bandwidth: d must be nonnegative");
  const double log_n = std::log(static_cast<double>(n));
  return d * std::pow(log_n * log_n / static_cast<double>(n), 0.2);
}

LimitParams normal_limit_params(double m_second_deriv, double lambda_limit, const Kernel& k,
                               Estimator route) {
  const double variance = route == Estimator::Spearman ? kPi * kPi * k.roughness() / 15.0
                                                       : 2.0 * k.roughness();
  return {0.5 * lambda_limit * m_second_deriv * k.second_moment(), variance};
}

double pilot_second_derivative(const PairedSample& sample) {
  const std::vector<double> z = spearman_responses(sample);
  constexpr std::array<double, 3> exps{0.0, 1.0, 2.0};
  BasisScoreSystem sys(z, power_basis(z.size(), exps), Estimator::Spearman);
  return 2.0 * sys.solve()(2);
}

std::vector<double> default_curve_grid() {
  std::vector<double> grid;
  for (int k = 10; k <= 90; ++k) grid.push_back(k / 100.0);
  return grid;
}

}  // namespace dyncop
