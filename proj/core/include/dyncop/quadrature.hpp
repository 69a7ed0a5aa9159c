#pragma once

#include <functional>

namespace dyncop {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 50;

  void validate() const;
};

// Defaults used by the tail coefficient / covariance integrals and by G(x, y).
inline constexpr QuadratureSpec kCoefficientQuadrature{1e-10, 50};
inline constexpr QuadratureSpec kLimitCdfQuadrature{1e-8, 50};

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
///
/// Panels are bisected until |K15 - G7| on every panel is within its share of
/// `spec.abs_tol`. Throws NumericalError if a panel still fails at
/// `spec.max_depth`, DomainError if a >= b or f returns a non-finite value.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

}  // namespace dyncop
