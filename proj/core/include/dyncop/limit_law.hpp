#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dyncop/correlation_path.hpp"
#include "dyncop/quadrature.hpp"

namespace dyncop {

enum class LimitRegime {
  Comonotone,          // max m(i/n) -> 0
  Independent,         // min m(i/n) -> infinity
  HuslerReissMixture,  // m continuous and positive on [0, 1]
};

std::string to_string(LimitRegime regime);

/// Limiting law of (n(max U_i - 1), n(max V_i - 1)) for a correlation path.
/// The regime is chosen by the caller, never inferred from the path.
class LimitLaw {
 public:
  /// DomainError when the mixture regime is requested for a path that is
  /// not strictly positive on [0, 1].
  LimitLaw(CorrelationPath path, LimitRegime regime, QuadratureSpec quad = kLimitCdfQuadrature);

  const CorrelationPath& path() const noexcept { return path_; }
  LimitRegime regime() const noexcept { return regime_; }
  const QuadratureSpec& quadrature() const noexcept { return quad_; }

 private:
  CorrelationPath path_;
  LimitRegime regime_;
  QuadratureSpec quad_;
};

/// G(x, y) for x, y < 0.
double limit_cdf(const LimitLaw& law, double x, double y);

/// l(x, y) = lim t^{-1} (1 - G(tx, ty)), homogeneous of degree one.
double tail_dependence_fn(const LimitLaw& law, double x, double y);

/// lambda = l(-1, -1) in [1, 2]. Evaluated with kCoefficientQuadrature
/// unless the law carries a tighter tolerance.
double tail_coefficient(const LimitLaw& law);

struct MaximaExperiment {
  CorrelationPath path = CorrelationPath::constant(1.0);
  LimitRegime regime = LimitRegime::HuslerReissMixture;
  std::size_t n = 1000;
  std::size_t replications = 1000;
  std::vector<std::pair<double, double>> grid;
  std::uint64_t seed = 1;

  void validate() const;
};

struct MaximaRow {
  double x;
  double y;
  double empirical;
  double limit;
  double gap;
};

/// Monte-Carlo joint CDF of the normalized componentwise maxima on the grid,
/// beside G(x, y). Replication r draws from RngStream(seed, r); the result
/// does not depend on `threads`.
std::vector<MaximaRow> empirical_maxima_cdf(const MaximaExperiment& exp, unsigned threads = 1);

}  // namespace dyncop
