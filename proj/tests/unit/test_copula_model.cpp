#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "dyncop/copula.hpp"
#include "dyncop/correlation_path.hpp"
#include "dyncop/errors.hpp"
#include "dyncop/normal.hpp"
#include "dyncop/quadrature.hpp"

using namespace dyncop;

namespace {

constexpr double kRhoConst1N100 = 0.78285275904837408617;
constexpr double kRhoConst1N3000 = 0.87509941411627126202;
constexpr double kSpearmanRho3000 = 0.072076797264073923657;
// Exact expectation at n = 3000, including the O(1/n) rank bias.
constexpr double kPseudoMoment3000 = 0.072013234836209743597;
constexpr double kSpearman07828528 = 0.064009120360077484815;
constexpr double kC1_03_06_05 = 0.7241794622227225728;

// Integral of c(u, v; rho) over the unit square, done on the normal scale
// where c du dv becomes the bivariate normal density.
// Mass of c(u, v; rho) on the normal scale. The inner variable follows the
// conditional law, y = rho x + sqrt(1 - rho^2) w, so the integrand stays smooth.
double density_mass(double rho) {
  const QuadratureSpec spec{1e-8, 50};
  const double r = std::sqrt(1.0 - rho * rho);
  return integrate(
      [&](double x) {
        return integrate(
            [&](double w) {
              const double y = rho * x + r * w;
              const double u = std_normal_cdf(x);
              const double v = std_normal_cdf(y);
              if (u <= 0.0 || u >= 1.0 || v <= 0.0 || v >= 1.0) return 0.0;
              return copula_density(u, v, rho) * std_normal_pdf(x) * std_normal_pdf(y) * r;
            },
            -9.0, 9.0, spec);
      },
      -9.0, 9.0, spec);
}

}  // namespace

TEST_SUITE("correlation_path") {
  TEST_CASE("families evaluate their formulas") {
    CHECK(CorrelationPath::constant(2.0)(0.3) == 2.0);
    CHECK(CorrelationPath::linear(1.0, 2.0)(0.25) == 1.5);
    CHECK(CorrelationPath::power(1.0, 1.0, 0.5)(0.25) == 1.5);
    CHECK(CorrelationPath::power(1.0, -0.5, 2.0).min_on_unit() == 0.5);
    CHECK(CorrelationPath::linear(3.0, -1.0).min_on_unit() == 2.0);
    CHECK(to_string(PathFamily::Tabulated) == "table");
  }

  TEST_CASE("power path rejects non-identifiable parameters") {
    CHECK_THROWS_AS(CorrelationPath::power(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(CorrelationPath::power(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(CorrelationPath::power(1.0, 1.0, 0.0), DomainError);
  }

  TEST_CASE("tabulated path interpolates linearly and extrapolates flat") {
    const auto p = CorrelationPath::tabulated({{0.8, 3.0}, {0.2, 1.0}, {0.5, 2.0}});
    CHECK(p(0.0) == 1.0);
    CHECK(p(0.2) == 1.0);
    CHECK(p(0.35) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p(0.65) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(p(1.0) == 3.0);
    CHECK(p.min_on_unit() == 1.0);
    CHECK(p.breakpoints() == std::vector<double>{0.2, 0.5, 0.8});
    CHECK_THROWS_AS(CorrelationPath::tabulated({}), DomainError);
    CHECK_THROWS_AS(CorrelationPath::tabulated({{0.5, 1.0}, {0.5, 2.0}}), DomainError);
  }
}

TEST_SUITE("schedule") {
  TEST_CASE("m = 0 gives rho = 1") {
    const auto s = build_schedule(CorrelationPath::constant(0.0), 17);
    CHECK(s.n() == 17);
    for (double r : s.rho()) CHECK(r == 1.0);
  }

  TEST_CASE("constant path matches the log oracle") {
    const auto s = build_schedule(CorrelationPath::constant(1.0), 100);
    for (double r : s.rho()) CHECK(r == doctest::Approx(kRhoConst1N100).epsilon(1e-15));
    CHECK(build_schedule(CorrelationPath::constant(1.0), 3000)[0] ==
          doctest::Approx(kRhoConst1N3000).epsilon(1e-15));
  }

  TEST_CASE("constant path reproduces (1 - rho_i) log n = lambda") {
    for (double lambda : {0.5, 1.0, 3.0}) {
      const std::size_t n = 1000;
      const auto s = build_schedule(CorrelationPath::constant(lambda), n);
      for (double r : s.rho()) CHECK((1.0 - r) * std::log(1000.0) == doctest::Approx(lambda).epsilon(1e-13));
    }
  }

  TEST_CASE("rho_i uses design point i/n") {
    const auto s = build_schedule(CorrelationPath::linear(1.0, 1.0), 10);
    const double L = std::log(10.0);
    CHECK(s[0] == doctest::Approx(1.0 - 1.1 / L).epsilon(1e-15));
    CHECK(s[9] == doctest::Approx(1.0 - 2.0 / L).epsilon(1e-15));
  }

  TEST_CASE("guards") {
    // m(1) = 2 > 2 log 2.
    CHECK_THROWS_AS(build_schedule(CorrelationPath::linear(1.0, 1.0), 2), DomainError);
    CHECK_THROWS_AS(build_schedule(CorrelationPath::constant(-0.1), 10), DomainError);
    CHECK_THROWS_AS(build_schedule(CorrelationPath::constant(1.0), 1), DomainError);
    // m = 2 log n exactly is rejected (rho = -1).
    CHECK_THROWS_AS(build_schedule(CorrelationPath::constant(2.0 * std::log(50.0)), 50), DomainError);
  }
}

TEST_SUITE("copula") {
  TEST_CASE("density special values") {
    CHECK(copula_density(0.3, 0.7, 0.0) == 1.0);
    CHECK(copula_density(0.2, 0.9, 0.5) == copula_density(0.9, 0.2, 0.5));
    CHECK_THROWS_AS(copula_density(0.0, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(copula_density(0.5, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(copula_density(0.5, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(copula_density(0.5, 0.5, -1.0), DomainError);
  }

  TEST_CASE("density integrates to one") {
    for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.8, 0.9, 0.99}) {
      CAPTURE(rho);
      CHECK(std::fabs(density_mass(rho) - 1.0) <= 1e-6);
    }
  }

  TEST_CASE("conditional cdf") {
    CHECK(conditional_cdf(0.4, 0.25, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::fabs(conditional_cdf(0.4, 0.4, 0.999999) - 0.5) < 1e-3);
    CHECK(conditional_cdf(0.3, 0.6, 0.5) == doctest::Approx(kC1_03_06_05).epsilon(1e-13));
    CHECK(conditional_cdf(0.3, 1e-12, 0.5) < 1e-6);
    CHECK(conditional_cdf(0.3, 1.0 - 1e-12, 0.5) > 1.0 - 1e-6);
    CHECK_THROWS_AS(conditional_cdf(0.3, 0.6, 1.0), DomainError);
  }

  TEST_CASE("conditional cdf derivative matches the density") {
    const double h = 1e-5;
    for (double rho : {-0.6, 0.3, 0.9}) {
      for (double u : {0.2, 0.5, 0.8}) {
        for (double v : {0.1, 0.45, 0.7}) {
          const double num = (conditional_cdf(u, v + h, rho) - conditional_cdf(u, v - h, rho)) / (2.0 * h);
          CHECK(std::fabs(num - copula_density(u, v, rho)) < 1e-4);
        }
      }
    }
  }

  TEST_CASE("conditional cdf is nondecreasing in v") {
    double prev = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double c = conditional_cdf(0.3, k / 100.0, 0.7);
      CHECK(c >= prev);
      prev = c;
    }
  }

  TEST_CASE("dependence maps") {
    CHECK(spearman_map(0.0) == 0.0);
    CHECK(spearman_map(1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(spearman_map(0.7828528) == doctest::Approx(kSpearman07828528).epsilon(1e-14));
    CHECK(spearman_map(kRhoConst1N3000) == doctest::Approx(kSpearmanRho3000).epsilon(1e-14));
    CHECK(spearman_map(-0.4) == -spearman_map(0.4));
    CHECK(spearman_map_inverse(0.0) == 0.0);
    CHECK(spearman_map_inverse(1.0 / 12.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kendall_map(0.0) == 0.0);
    CHECK(kendall_map(1.0) == 1.0);
    CHECK(kendall_map(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(spearman_map_inverse(0.09), DomainError);
    CHECK_THROWS_AS(spearman_map(1.5), DomainError);
  }

  TEST_CASE("spearman map round trip") {
    for (int k = -100; k <= 100; ++k) {
      const double rho = k / 100.0;
      CHECK(std::fabs(spearman_map_inverse(spearman_map(rho)) - rho) <= 1e-12);
    }
    double prev = -1.0;
    for (int k = -100; k <= 100; ++k) {
      const double q = spearman_map(k / 100.0);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_SUITE("sampling") {
  TEST_CASE("sample_pair replays and is comonotone at rho = 1") {
    RngStream a(5, 1);
    RngStream b(5, 1);
    CHECK(sample_pair(0.4, a) == sample_pair(0.4, b));
    RngStream c(5, 2);
    const auto [u, v] = sample_pair(1.0, c);
    CHECK(u == v);
  }

  TEST_CASE("independence and Pearson moment") {
    const int n = 100000;
    RngStream s0(17, 0);
    double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
    for (int i = 0; i < n; ++i) {
      const auto [u, v] = sample_pair(0.0, s0);
      su += u; sv += v; suu += u * u; svv += v * v; suv += u * v;
    }
    const double cov = suv / n - (su / n) * (sv / n);
    const double corr = cov / std::sqrt((suu / n - su * su / n / n) * (svv / n - sv * sv / n / n));
    CHECK(std::fabs(corr) < 0.013);

    RngStream s9(17, 9);
    double prod = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto [u, v] = sample_pair(0.9, s9);
      prod += std_normal_quantile(u) * std_normal_quantile(v);
    }
    CHECK(std::fabs(prod / n - 0.9) < 0.02);
  }

  TEST_CASE("marginals are uniform (Kolmogorov-Smirnov at 1%)") {
    const int n = 100000;
    RngStream s(23, 0);
    std::vector<double> us(n), vs(n);
    for (int i = 0; i < n; ++i) std::tie(us[i], vs[i]) = sample_pair(0.7, s);
    for (auto* col : {&us, &vs}) {
      std::sort(col->begin(), col->end());
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        d = std::max({d, (i + 1.0) / n - (*col)[i], (*col)[i] - static_cast<double>(i) / n});
      }
      CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
    }
  }

  TEST_CASE("sample_array") {
    RngStream s(1, 0);
    const auto comonotone = sample_array(build_schedule(CorrelationPath::constant(0.0), 2), s);
    CHECK(comonotone.u()[0] == comonotone.v()[0]);
    CHECK(comonotone.u()[1] == comonotone.v()[1]);

    RngStream t(2, 0);
    const auto sample = sample_array(build_schedule(CorrelationPath::constant(1.0), 50), t);
    auto pu = sample.pseudo_u();
    std::sort(pu.begin(), pu.end());
    for (std::size_t i = 0; i < pu.size(); ++i) CHECK(pu[i] == (i + 1.0) / 51.0);
  }

  TEST_CASE("Spearman moment of pseudo-observations over 200 seeds") {
    const auto schedule = build_schedule(CorrelationPath::constant(1.0), 3000);
    std::vector<double> means;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      RngStream s(seed, 0);
      const auto sample = sample_array(schedule, s);
      double acc = 0.0;
      for (std::size_t i = 0; i < sample.size(); ++i) {
        acc += (sample.pseudo_u()[i] - 0.5) * (sample.pseudo_v()[i] - 0.5);
      }
      means.push_back(acc / 3000.0);
    }
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / 200.0;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    const double se = std::sqrt(var / 199.0 / 200.0);
    CHECK(std::fabs(mean - kPseudoMoment3000) < 3.0 * se);
  }
}

TEST_SUITE("pseudo_observations") {
  TEST_CASE("ranks over n + 1") {
    const std::vector<double> x{3.0, -1.0, 10.0, 2.0};
    const auto p = pseudo_observations(x);
    CHECK(p == std::vector<double>{0.6, 0.2, 0.8, 0.4});
  }

  TEST_CASE("average ranks on ties") {
    const std::vector<double> x{1.0, 2.0, 2.0, 2.0, 5.0};
    const auto p = pseudo_observations(x);
    CHECK(p[0] == doctest::Approx(1.0 / 6.0));
    CHECK(p[1] == doctest::Approx(3.0 / 6.0));
    CHECK(p[2] == p[1]);
    CHECK(p[3] == p[1]);
    CHECK(p[4] == doctest::Approx(5.0 / 6.0));
  }

  TEST_CASE("single observation") {
    const PairedSample one({0.3}, {0.9});
    CHECK(one.pseudo_u()[0] == 0.5);
    CHECK(one.pseudo_v()[0] == 0.5);
  }

  TEST_CASE("rank invariance under increasing transforms") {
    RngStream s(8, 8);
    const auto sample = sample_array(build_schedule(CorrelationPath::constant(1.0), 200), s);
    std::vector<double> x(sample.size()), y(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      x[i] = std::exp(5.0 * sample.u()[i]);
      y[i] = std_normal_quantile(sample.v()[i]) * 3.0 - 7.0;
    }
    const PairedSample raw(x, y);
    CHECK(raw.pseudo_u() == sample.pseudo_u());
    CHECK(raw.pseudo_v() == sample.pseudo_v());
  }

  TEST_CASE("PairedSample validation") {
    CHECK_THROWS_AS(PairedSample({0.1, 0.2}, {0.3}), DomainError);
    CHECK_THROWS_AS(PairedSample({0.1, NAN}, {0.3, 0.4}), DomainError);
  }
}
