#include "dyncop/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dyncop/errors.hpp"

namespace dyncop {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) plus the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(centre - dx) + f(centre + dx);
    k += kKronrodWeights[i] * sum;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * sum;
  }
  k *= half;
  g *= half;
  if (!std::isfinite(k)) throw DomainError("integrate: integrand is not finite");
  return {k, std::fabs(k - g)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth, int max_depth) {
  const Panel p = gauss_kronrod(f, a, b);
  if (p.error <= tol) return p.kronrod;
  if (depth >= max_depth) {
    throw NumericalError("integrate: no convergence on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "] at depth " + std::to_string(depth));
  }
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (max_depth < 10) throw DomainError("QuadratureSpec: max_depth must be >= 10");
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw DomainError("integrate: requires a < b");
  return adapt(f, a, b, spec.abs_tol, 0, spec.max_depth);
}

}  // namespace dyncop
