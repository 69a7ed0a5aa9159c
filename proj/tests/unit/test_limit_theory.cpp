#include <cmath>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "dyncop/errors.hpp"
#include "dyncop/limit_law.hpp"
#include "dyncop/normal.hpp"

using namespace dyncop;

namespace {

constexpr double kTwoPhi1 = 1.6826894921370858972;
constexpr double kExpMinusTwoPhi1 = 0.18587339814818439986;
constexpr double kLambdaLinear11 = 1.7738668413320228731;
constexpr double kGLinear11 = 0.10074691512342148454;   // (-0.5, -2)
constexpr double kGConst1 = 0.076908283792934483313;   // (-1, -2)
// Exact finite-n probability for Constant(1) at (-0.5, -0.5).
constexpr double kMaximaExact100 = 0.42917246666706295405;
constexpr double kMaximaExact10000 = 0.4325808298172727931;

LimitLaw hr(CorrelationPath p) { return LimitLaw(std::move(p), LimitRegime::HuslerReissMixture); }

// Closed form for a constant path.
double reiss_closed_form(double lambda0, double x, double y) {
  const double r = std::sqrt(lambda0);
  return std::exp(std_normal_cdf(r + std::log(x / y) / (2.0 * r)) * x +
                  std_normal_cdf(r + std::log(y / x) / (2.0 * r)) * y);
}

const std::vector<std::pair<double, double>> kGrid{
    {-1.0, -1.0}, {-0.5, -0.5}, {-1.0, -2.0}, {-2.0, -1.0}, {-0.1, -3.0}, {-0.7, -0.69}};

}  // namespace

TEST_SUITE("limit_cdf") {
  TEST_CASE("degenerate regimes") {
    const LimitLaw co(CorrelationPath::constant(0.0), LimitRegime::Comonotone);
    const LimitLaw in(CorrelationPath::constant(0.0), LimitRegime::Independent);
    CHECK(limit_cdf(co, -1.0, -2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(limit_cdf(in, -1.0, -2.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
    CHECK(limit_cdf(co, -1.0, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(limit_cdf(in, -1.0, -1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(tail_coefficient(co) == 1.0);
    CHECK(tail_coefficient(in) == 2.0);
  }

  TEST_CASE("mixture against oracles") {
    CHECK(limit_cdf(hr(CorrelationPath::constant(1.0)), -1.0, -1.0) ==
          doctest::Approx(kExpMinusTwoPhi1).epsilon(1e-9));
    CHECK(std::fabs(limit_cdf(hr(CorrelationPath::constant(1.0)), -1.0, -2.0) - kGConst1) < 1e-8);
    CHECK(std::fabs(limit_cdf(hr(CorrelationPath::linear(1.0, 1.0)), -0.5, -2.0) - kGLinear11) < 1e-8);
  }

  TEST_CASE("constant path equals the closed form") {
    for (double lambda0 : {0.25, 1.0, 4.0}) {
      const auto law = hr(CorrelationPath::constant(lambda0));
      for (const auto& [x, y] : kGrid) {
        CHECK(std::fabs(limit_cdf(law, x, y) - reiss_closed_form(lambda0, x, y)) < 1e-8);
      }
    }
  }

  TEST_CASE("dependence ordering, symmetry and monotonicity") {
    const std::vector<CorrelationPath> paths{
        CorrelationPath::constant(0.3), CorrelationPath::linear(1.0, 2.0),
        CorrelationPath::power(0.5, 1.0, 0.5),
        CorrelationPath::tabulated({{0.0, 0.5}, {0.5, 3.0}, {1.0, 1.0}})};
    for (const auto& p : paths) {
      const auto law = hr(p);
      for (const auto& [x, y] : kGrid) {
        const double g = limit_cdf(law, x, y);
        CHECK(g > std::exp(x + y));
        CHECK(g < std::exp(std::min(x, y)));
        CHECK(std::fabs(g - limit_cdf(law, y, x)) < 1e-12);
        CHECK(limit_cdf(law, x * 0.9, y) >= g);
        CHECK(limit_cdf(law, x, y * 0.9) >= g);
      }
    }
  }

  TEST_CASE("x near y is continuous with the x = y branch") {
    const auto law = hr(CorrelationPath::linear(0.5, 1.0));
    const double at = limit_cdf(law, -1.0, -1.0);
    CHECK(std::fabs(limit_cdf(law, -1.0, -1.0 - 1e-9) - at) < 1e-8);
    CHECK(std::fabs(limit_cdf(law, -1.0 - 1e-12, -1.0) - at) < 1e-8);
  }

  TEST_CASE("domain errors") {
    const auto law = hr(CorrelationPath::constant(1.0));
    CHECK_THROWS_AS(limit_cdf(law, 0.0, -1.0), DomainError);
    CHECK_THROWS_AS(limit_cdf(law, -1.0, 0.5), DomainError);
    CHECK_THROWS_AS(tail_dependence_fn(law, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(hr(CorrelationPath::constant(0.0)), DomainError);
    CHECK_THROWS_AS(hr(CorrelationPath::linear(-1.0, 2.0)), DomainError);
  }
}

TEST_SUITE("tail_dependence") {
  TEST_CASE("homogeneity of degree one") {
    const auto law = hr(CorrelationPath::constant(1.0));
    const double base = tail_dependence_fn(law, -1.0, -2.0);
    CHECK(std::fabs(tail_dependence_fn(law, -3.0, -6.0) - 3.0 * base) < 1e-9);
    const auto lin = hr(CorrelationPath::linear(1.0, 1.0));
    for (double t : {0.1, 1.0, 10.0}) {
      for (const auto& [x, y] : kGrid) {
        const double l = tail_dependence_fn(lin, x, y);
        CHECK(std::fabs(tail_dependence_fn(lin, t * x, t * y) - t * l) <= 1e-9 * t * l);
      }
    }
  }

  TEST_CASE("bounds") {
    const auto law = hr(CorrelationPath::constant(4.0));
    const double l = tail_dependence_fn(law, -1.0, -2.0);
    CHECK(l >= 2.0);
    CHECK(l <= 3.0);
    CHECK(tail_dependence_fn(hr(CorrelationPath::constant(1.0)), -1.0, -1.0) ==
          doctest::Approx(kTwoPhi1).epsilon(1e-10));
  }
}

TEST_SUITE("tail_coefficient") {
  TEST_CASE("constant paths against the closed form") {
    const double oracle[] = {1.3829249225480262073, 1.6826894921370858972, 1.9544997361036415856,
                             1.9984345977419974503};
    const double ms[] = {0.25, 1.0, 4.0, 10.0};
    for (int k = 0; k < 4; ++k) {
      CAPTURE(ms[k]);
      const double lambda = tail_coefficient(hr(CorrelationPath::constant(ms[k])));
      CHECK(std::fabs(lambda - oracle[k]) <= 1e-10);
      CHECK(std::fabs(lambda - 2.0 * std_normal_cdf(std::sqrt(ms[k]))) <= 1e-10);
    }
  }

  TEST_CASE("non-constant path and agreement with l(-1, -1)") {
    const auto law = hr(CorrelationPath::linear(1.0, 1.0));
    CHECK(std::fabs(tail_coefficient(law) - kLambdaLinear11) <= 1e-10);
    CHECK(std::fabs(tail_coefficient(law) - tail_dependence_fn(law, -1.0, -1.0)) <= 2e-8);
  }

  TEST_CASE("limits in m") {
    CHECK(tail_coefficient(hr(CorrelationPath::constant(1e-8))) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(tail_coefficient(hr(CorrelationPath::constant(200.0))) == doctest::Approx(2.0).epsilon(1e-12));
    const double lambda = tail_coefficient(hr(CorrelationPath::tabulated({{0.0, 0.1}, {1.0, 9.0}})));
    CHECK(lambda > 1.0);
    CHECK(lambda < 2.0);
  }
}

TEST_SUITE("maxima_experiment") {
  TEST_CASE("validation") {
    MaximaExperiment e;
    e.grid = {{-1.0, -1.0}};
    e.replications = 0;
    CHECK_THROWS_AS(e.validate(), DomainError);
    e.replications = 1;
    e.grid = {{-1.0, 0.0}};
    CHECK_THROWS_AS(e.validate(), DomainError);
  }

  TEST_CASE("single replication gives 0 or 1") {
    MaximaExperiment e;
    e.n = 100;
    e.replications = 1;
    e.grid = kGrid;
    for (const auto& row : empirical_maxima_cdf(e)) {
      CHECK((row.empirical == 0.0 || row.empirical == 1.0));
      CHECK(row.gap == doctest::Approx(std::fabs(row.empirical - row.limit)));
    }
  }

  TEST_CASE("comonotone path: joint probability equals the marginal at min(x, y)") {
    MaximaExperiment e;
    e.path = CorrelationPath::constant(0.0);
    e.regime = LimitRegime::Comonotone;
    e.n = 200;
    e.replications = 400;
    e.grid = {{-1.0, -2.0}, {-2.0, -2.0}, {-2.0, -1.0}};
    const auto rows = empirical_maxima_cdf(e);
    CHECK(rows[0].empirical == rows[1].empirical);
    CHECK(rows[2].empirical == rows[1].empirical);
    CHECK(rows[0].limit == doctest::Approx(std::exp(-2.0)));
  }

  TEST_CASE("result does not depend on the thread count") {
    MaximaExperiment e;
    e.n = 300;
    e.replications = 257;
    e.grid = kGrid;
    const auto one = empirical_maxima_cdf(e, 1);
    const auto four = empirical_maxima_cdf(e, 4);
    for (std::size_t k = 0; k < one.size(); ++k) {
      CHECK(one[k].empirical == four[k].empirical);
      CHECK(one[k].limit == four[k].limit);
    }
  }

  TEST_CASE("empirical probability is close to the limit at moderate n") {
    MaximaExperiment e;
    e.n = 2000;
    e.replications = 2000;
    e.grid = {{-1.0, -1.0}};
    const auto row = empirical_maxima_cdf(e).front();
    // Slow convergence: only a coarse band.
    CHECK(row.gap < 0.1);
  }

  TEST_CASE("empirical probability matches the exact finite-n law") {
    MaximaExperiment e;
    e.grid = {{-0.5, -0.5}};
    for (auto [n, reps, exact] : {std::tuple{std::size_t{100}, std::size_t{40000}, kMaximaExact100},
                                  std::tuple{std::size_t{10000}, std::size_t{4000}, kMaximaExact10000}}) {
      CAPTURE(n);
      e.n = n;
      e.replications = reps;
      e.seed = 99;
      const auto row = empirical_maxima_cdf(e).front();
      const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(reps));
      CHECK(std::fabs(row.empirical - exact) < 3.0 * se);
    }
    // The finite-n law is already within 0.002 of G at n = 100.
    const double g = limit_cdf(hr(CorrelationPath::constant(1.0)), -0.5, -0.5);
    CHECK(std::fabs(kMaximaExact100 - g) < 2e-3);
    CHECK(std::fabs(kMaximaExact10000 - g) < 2e-3);
  }
}
