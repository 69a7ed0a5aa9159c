#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dyncop {

enum class PathFamily { Constant, Linear, Power, Tabulated };

std::string to_string(PathFamily family);

struct Knot {
  double s;
  double m;
};

/// The drift function m(s) on [0, 1] that sets the correlation of the i-th
/// pair to rho_i = 1 - m(i/n) / log n.
///
/// Constant: m = alpha. Linear: m = alpha + beta s. Power: m = alpha + beta s^gamma
/// with alpha > 0, beta != 0, gamma > 0. Tabulated: linear interpolation between
/// knots, constant beyond the first and last knot.
class CorrelationPath {
 public:
  static CorrelationPath constant(double alpha);
  static CorrelationPath linear(double alpha, double beta);
  static CorrelationPath power(double alpha, double beta, double gamma);
  static CorrelationPath tabulated(std::vector<Knot> knots);

  PathFamily family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  double operator()(double s) const;

  /// Points in (0, 1) where m is not smooth; quadrature splits panels there.
  std::vector<double> breakpoints() const;

  /// Smallest value of m on [0, 1] (exact for every family).
  double min_on_unit() const;

  std::string describe() const;

 private:
  CorrelationPath(PathFamily family, double alpha, double beta, double gamma,
                  std::vector<Knot> knots)
      : family_(family), alpha_(alpha), beta_(beta), gamma_(gamma), knots_(std::move(knots)) {}

  PathFamily family_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 1.0;
  std::vector<Knot> knots_;
};

}  // namespace dyncop
