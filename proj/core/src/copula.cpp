#include "dyncop/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "dyncop/errors.hpp"
#include "dyncop/normal.hpp"

namespace dyncop {

namespace {

void check_unit_open(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(what) + ": argument must lie in (0, 1)");
  }
}

void check_rho_open(double rho, const char* what) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw DomainError(std::string(what) + ": rho must lie in (-1, 1)");
  }
}

}  // namespace

RhoSchedule build_schedule(const CorrelationPath& path, std::size_t n) {
  if (n < 2) throw DomainError("build_schedule: n must be >= 2");
  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> rho(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double m = path(static_cast<double>(i) / static_cast<double>(n));
    if (!(m >= 0.0)) {
      throw DomainError("build_schedule: m(" + std::to_string(i) + "/n) is negative");
    }
    if (!(m < 2.0 * log_n)) {
      throw DomainError("build_schedule: m(" + std::to_string(i) +
                        "/n) >= 2 log n puts rho outside (-1, 1]");
    }
    rho[i - 1] = 1.0 - m / log_n;
  }
  return RhoSchedule(std::move(rho));
}

double copula_density(double u, double v, double rho) {
  check_unit_open(u, "copula_density");
  check_unit_open(v, "copula_density");
  check_rho_open(rho, "copula_density");
  const double x = std_normal_quantile(u);
  const double y = std_normal_quantile(v);
  const double one_minus = 1.0 - rho * rho;
  const double expo = (2.0 * rho * x * y - rho * rho * (x * x + y * y)) / (2.0 * one_minus);
  return std::exp(expo) / std::sqrt(one_minus);
}

double conditional_cdf(double u, double v, double rho) {
  check_unit_open(u, "conditional_cdf");
  check_unit_open(v, "conditional_cdf");
  check_rho_open(rho, "conditional_cdf");
  const double x = std_normal_quantile(u);
  const double y = std_normal_quantile(v);
  return std_normal_cdf((y - rho * x) / std::sqrt(1.0 - rho * rho));
}

double spearman_map(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("spearman_map: |rho| must be <= 1");
  return std::asin(0.5 * rho) / (2.0 * kPi);
}

double spearman_map_inverse(double q) {
  // A few ulps of slack so spearman_map(+-1) maps back.
  constexpr double kEdge = 1.0 / 12.0;
  if (!(std::fabs(q) <= kEdge * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()))) {
    throw DomainError("spearman_map_inverse: |q| must be <= 1/12");
  }
  return std::clamp(2.0 * std::sin(2.0 * kPi * std::clamp(q, -kEdge, kEdge)), -1.0, 1.0);
}

double kendall_map(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("kendall_map: |rho| must be <= 1");
  return 2.0 * std::asin(rho) / kPi;
}

std::pair<double, double> sample_pair(double rho, RngStream& stream) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("sample_pair: |rho| must be <= 1");
  const double z1 = stream.std_normal();
  const double z2 = stream.std_normal();
  const double w = rho * z1 + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * z2;
  return {std_normal_cdf(z1), std_normal_cdf(w)};
}

std::vector<double> pseudo_observations(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(n);
  const double denom = static_cast<double>(n) + 1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Ranks i+1..j share their average.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out[order[k]] = rank / denom;
    i = j;
  }
  return out;
}

PairedSample::PairedSample(std::vector<double> u, std::vector<double> v)
    : u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() != v_.size()) throw DomainError("PairedSample: column lengths differ");
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(v_[i])) {
      throw DomainError("PairedSample: non-finite value at row " + std::to_string(i + 1));
    }
  }
  pseudo_u_ = pseudo_observations(u_);
  pseudo_v_ = pseudo_observations(v_);
}

PairedSample sample_array(const RhoSchedule& schedule, RngStream& stream) {
  const std::size_t n = schedule.n();
  std::vector<double> u(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::tie(u[i], v[i]) = sample_pair(schedule[i], stream);
  }
  return PairedSample(std::move(u), std::move(v));
}

}  // namespace dyncop
