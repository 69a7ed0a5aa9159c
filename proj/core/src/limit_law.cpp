#include "dyncop/limit_law.hpp"

#include <algorithm>
#include <cmath>

#include "dyncop/copula.hpp"
#include "dyncop/errors.hpp"
#include "dyncop/normal.hpp"
#include "dyncop/parallel.hpp"
#include "dyncop/rng.hpp"

namespace dyncop {

std::string to_string(LimitRegime regime) {
  switch (regime) {
    case LimitRegime::Comonotone: return "comonotone";
    case LimitRegime::Independent: return "independent";
    case LimitRegime::HuslerReissMixture: return "hr";
  }
  return "unknown";
}

LimitLaw::LimitLaw(CorrelationPath path, LimitRegime regime, QuadratureSpec quad)
    : path_(std::move(path)), regime_(regime), quad_(quad) {
  quad_.validate();
  if (regime_ == LimitRegime::HuslerReissMixture && !(path_.min_on_unit() > 0.0)) {
    throw DomainError("LimitLaw: the Husler-Reiss mixture regime needs m(s) > 0 on [0, 1]; " +
                      path_.describe() + " is not strictly positive");
  }
}

namespace {

void check_negative(double x, double y) {
  if (!(x < 0.0) || !(y < 0.0)) throw DomainError("limit law: requires x < 0 and y < 0");
}

// Integral over [0, 1] of Phi(sqrt(m) + shift / (2 sqrt(m))), split at the
// path's kinks.
double mixture_integral(const LimitLaw& law, double shift, const QuadratureSpec& quad) {
  const CorrelationPath& path = law.path();
  auto integrand = [&](double s) {
    const double root = std::sqrt(path(s));
    return std_normal_cdf(root + shift / (2.0 * root));
  };
  std::vector<double> cuts{0.0};
  for (double b : path.breakpoints()) cuts.push_back(b);
  cuts.push_back(1.0);
  double total = 0.0;
  const double share = 1.0 / static_cast<double>(cuts.size() - 1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += integrate(integrand, cuts[k], cuts[k + 1],
                       QuadratureSpec{quad.abs_tol * share, quad.max_depth});
  }
  return total;
}

double mixture_l(const LimitLaw& law, double x, double y, const QuadratureSpec& quad) {
  if (x == y) return -2.0 * x * mixture_integral(law, 0.0, quad);
  const double log_ratio = std::log(x / y);
  return -x * mixture_integral(law, log_ratio, quad) - y * mixture_integral(law, -log_ratio, quad);
}

}  // namespace

double tail_dependence_fn(const LimitLaw& law, double x, double y) {
  check_negative(x, y);
  switch (law.regime()) {
    case LimitRegime::Comonotone: return -std::min(x, y);
    case LimitRegime::Independent: return -x - y;
    case LimitRegime::HuslerReissMixture: return mixture_l(law, x, y, law.quadrature());
  }
  return 0.0;
}

double limit_cdf(const LimitLaw& law, double x, double y) {
  return std::exp(-tail_dependence_fn(law, x, y));
}

double tail_coefficient(const LimitLaw& law) {
  switch (law.regime()) {
    case LimitRegime::Comonotone: return 1.0;
    case LimitRegime::Independent: return 2.0;
    case LimitRegime::HuslerReissMixture: {
      QuadratureSpec quad = law.quadrature();
      quad.abs_tol = std::min(quad.abs_tol, kCoefficientQuadrature.abs_tol);
      return 2.0 * mixture_integral(law, 0.0, quad);
    }
  }
  return 0.0;
}

void MaximaExperiment::validate() const {
  if (replications < 1) throw DomainError("MaximaExperiment: replications must be >= 1");
  if (n < 2) throw DomainError("MaximaExperiment: n must be >= 2");
  for (const auto& [x, y] : grid) {
    if (!(x < 0.0) || !(y < 0.0)) {
      throw DomainError("MaximaExperiment: grid points must be strictly negative");
    }
  }
}

std::vector<MaximaRow> empirical_maxima_cdf(const MaximaExperiment& exp, unsigned threads) {
  exp.validate();
  const RhoSchedule schedule = build_schedule(exp.path, exp.n);
  const LimitLaw law(exp.path, exp.regime);
  const double n = static_cast<double>(exp.n);

  // Normalized maxima per replication. Phi is monotone, so max U = Phi(max Z1)
  // and max V = Phi(max W); n(Phi(z) - 1) is taken through the upper tail to
  // keep precision near 1. Draws follow sample_pair's consumption order.
  std::vector<std::pair<double, double>> maxima(exp.replications);
  parallel_for_index(exp.replications, threads, [&](std::size_t r) {
    RngStream stream(exp.seed, r);
    double max_z = -INFINITY;
    double max_w = -INFINITY;
    for (std::size_t i = 0; i < exp.n; ++i) {
      const double rho = schedule[i];
      const double z1 = stream.std_normal();
      const double z2 = stream.std_normal();
      const double w = rho * z1 + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * z2;
      max_z = std::max(max_z, z1);
      max_w = std::max(max_w, w);
    }
    maxima[r] = {-n * std_normal_sf(max_z), -n * std_normal_sf(max_w)};
  });

  std::vector<MaximaRow> rows;
  rows.reserve(exp.grid.size());
  for (const auto& [x, y] : exp.grid) {
    std::size_t hits = 0;
    for (const auto& [mu, mv] : maxima) {
      if (mu <= x && mv <= y) ++hits;
    }
    const double empirical = static_cast<double>(hits) / static_cast<double>(exp.replications);
    const double limit = limit_cdf(law, x, y);
    rows.push_back({x, y, empirical, limit, std::fabs(empirical - limit)});
  }
  return rows;
}

}  // namespace dyncop
