#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dyncop/correlation_path.hpp"
#include "dyncop/rng.hpp"

namespace dyncop {

/// rho_1..rho_n for a sample of size n; rho[i - 1] belongs to design point i/n.
class RhoSchedule {
 public:
  std::size_t n() const noexcept { return rho_.size(); }
  const std::vector<double>& rho() const noexcept { return rho_; }
  double operator[](std::size_t i) const { return rho_[i]; }

 private:
  friend RhoSchedule build_schedule(const CorrelationPath& path, std::size_t n);
  explicit RhoSchedule(std::vector<double> rho) : rho_(std::move(rho)) {}
  std::vector<double> rho_;
};

/// rho_i = 1 - m(i/n) / log n. Throws DomainError if n < 2, m(i/n) < 0, or
/// m(i/n) >= 2 log n (rho_i would leave (-1, 1]).
RhoSchedule build_schedule(const CorrelationPath& path, std::size_t n);

/// Normal copula density c(u, v; rho). DomainError on u, v outside (0, 1)
/// or |rho| >= 1.
double copula_density(double u, double v, double rho);

/// dC(u, v; rho)/du = Phi((Phi^-1(v) - rho Phi^-1(u)) / sqrt(1 - rho^2)).
double conditional_cdf(double u, double v, double rho);

/// E[(U - 1/2)(V - 1/2)] = asin(rho / 2) / (2 pi).
double spearman_map(double rho);
/// rho = 2 sin(2 pi q); DomainError for |q| > 1/12.
double spearman_map_inverse(double q);
/// E sgn((U - U')(V - V')) = 2 asin(rho) / pi. Reference only.
double kendall_map(double rho);

/// One pair (Phi(Z1), Phi(rho Z1 + sqrt(1 - rho^2) Z2)). rho = 1 gives U = V.
std::pair<double, double> sample_pair(double rho, RngStream& stream);

/// Rank-based pseudo-observations rank / (n + 1), average ranks on ties.
std::vector<double> pseudo_observations(std::span<const double> values);

/// n bivariate observations in time order i = 1..n, with cached
/// pseudo-observations. The raw columns may be on any scale.
class PairedSample {
 public:
  PairedSample(std::vector<double> u, std::vector<double> v);

  std::size_t size() const noexcept { return u_.size(); }
  const std::vector<double>& u() const noexcept { return u_; }
  const std::vector<double>& v() const noexcept { return v_; }
  const std::vector<double>& pseudo_u() const noexcept { return pseudo_u_; }
  const std::vector<double>& pseudo_v() const noexcept { return pseudo_v_; }

 private:
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<double> pseudo_u_;
  std::vector<double> pseudo_v_;
};

PairedSample sample_array(const RhoSchedule& schedule, RngStream& stream);

}  // namespace dyncop
