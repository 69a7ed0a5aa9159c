#pragma once

namespace dyncop {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Standard normal density.
double std_normal_pdf(double x) noexcept;

/// Standard normal distribution function Phi(x), absolute error below 1e-15.
/// Saturates to 0 or 1 in the far tails.
double std_normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x) without cancellation.
double std_normal_sf(double x) noexcept;

/// Inverse of Phi on (0, 1). Throws DomainError outside the open interval.
///
/// Wichura's AS241 rational approximation (PPND16) followed by one Halley
/// step against std_normal_cdf; relative accuracy is near machine epsilon
/// over the whole range.
double std_normal_quantile(double p);

}  // namespace dyncop
