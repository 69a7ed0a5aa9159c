#include "dyncop/correlation_path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyncop/errors.hpp"

namespace dyncop {

std::string to_string(PathFamily family) {
  switch (family) {
    case PathFamily::Constant: return "const";
    case PathFamily::Linear: return "linear";
    case PathFamily::Power: return "power";
    case PathFamily::Tabulated: return "table";
  }
  return "unknown";
}

CorrelationPath CorrelationPath::constant(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("constant path: alpha must be finite");
  return {PathFamily::Constant, alpha, 0.0, 1.0, {}};
}

CorrelationPath CorrelationPath::linear(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("linear path: parameters must be finite");
  }
  return {PathFamily::Linear, alpha, beta, 1.0, {}};
}

CorrelationPath CorrelationPath::power(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("power path: alpha must be > 0");
  }
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw DomainError("power path: beta must be nonzero (gamma is not identified at beta = 0)");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("power path: gamma must be > 0");
  }
  return {PathFamily::Power, alpha, beta, gamma, {}};
}

CorrelationPath CorrelationPath::tabulated(std::vector<Knot> knots) {
  if (knots.empty()) throw DomainError("tabulated path: needs at least one knot");
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.s < b.s; });
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].s) || !std::isfinite(knots[i].m)) {
      throw DomainError("tabulated path: knots must be finite");
    }
    if (i > 0 && knots[i].s == knots[i - 1].s) {
      throw DomainError("tabulated path: duplicate knot abscissa");
    }
  }
  return {PathFamily::Tabulated, 0.0, 0.0, 1.0, std::move(knots)};
}

double CorrelationPath::operator()(double s) const {
  switch (family_) {
    case PathFamily::Constant: return alpha_;
    case PathFamily::Linear: return alpha_ + beta_ * s;
    case PathFamily::Power: return alpha_ + beta_ * std::pow(s, gamma_);
    case PathFamily::Tabulated: {
      if (s <= knots_.front().s) return knots_.front().m;
      if (s >= knots_.back().s) return knots_.back().m;
      const auto hi = std::upper_bound(knots_.begin(), knots_.end(), s,
                                       [](double v, const Knot& k) { return v < k.s; });
      const auto lo = hi - 1;
      const double t = (s - lo->s) / (hi->s - lo->s);
      return lo->m + t * (hi->m - lo->m);
    }
  }
  return 0.0;
}

std::vector<double> CorrelationPath::breakpoints() const {
  std::vector<double> out;
  if (family_ == PathFamily::Tabulated) {
    for (const auto& k : knots_) {
      if (k.s > 0.0 && k.s < 1.0) out.push_back(k.s);
    }
  }
  return out;
}

double CorrelationPath::min_on_unit() const {
  switch (family_) {
    case PathFamily::Constant: return alpha_;
    case PathFamily::Linear:
    case PathFamily::Power: return std::min(alpha_, alpha_ + beta_);
    case PathFamily::Tabulated: {
      double lo = std::min((*this)(0.0), (*this)(1.0));
      for (double s : breakpoints()) lo = std::min(lo, (*this)(s));
      return lo;
    }
  }
  return 0.0;
}

std::string CorrelationPath::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(family_);
  switch (family_) {
    case PathFamily::Constant: os << "(alpha=" << alpha_ << ")"; break;
    case PathFamily::Linear: os << "(alpha=" << alpha_ << ";beta=" << beta_ << ")"; break;
    case PathFamily::Power:
      os << "(alpha=" << alpha_ << ";beta=" << beta_ << ";gamma=" << gamma_ << ")";
      break;
    case PathFamily::Tabulated: os << "(knots=" << knots_.size() << ")"; break;
  }
  return os.str();
}

}  // namespace dyncop
