#pragma once

#include <utility>

namespace doseeffect {

/// f(x) = l1 + 1 / ((l2 - l1)^-1 + exp(m x + p)), with m != 0 and l2 > l1.
///
/// m < 0 gives an increasing curve from l1 to l2; m > 0 a decreasing one
/// from l2 to l1.
struct LogisticParams {
  double m = -1.0;
  double p = 0.0;
  double l1 = 0.0;
  double l2 = 1.0;

  /// (l2 - l1)^-1, the constant term of the denominator.
  double inverse_span() const noexcept { return 1.0 / (l2 - l1); }
};

/// Abscissa, ordinate and slope at an inflection point. Exact when produced
/// by inflection(); approximate when produced from sampled data.
struct InflectionData {
  double theta = 0.0;
  double f_theta = 0.0;
  double f_prime_theta = 0.0;
};

void validate(const LogisticParams& params);

/// Saturates to the asymptote when exp(m x + p) leaves the floating range.
double eval(const LogisticParams& params, double x);

double eval_derivative(const LogisticParams& params, double x);

/// Second derivative; changes sign at the inflection point.
double eval_second_derivative(const LogisticParams& params, double x);

InflectionData inflection(const LogisticParams& params);

/// (limit at -inf, limit at +inf).
std::pair<double, double> limits(const LogisticParams& params);

/// Rebuilds (m, p, l1, l2) from l1, f(0) and the inflection data:
///   l2 = 2 f(theta) - l1
///   m  = -2 f'(theta) / (f(theta) - l1)
///   p  = log(1 / (f(0) - l1) - 1 / (2 (f(theta) - l1)))
/// theta itself is not used; it is implied by the other three for exact data.
/// Throws Error(DomainError) on an inconsistent geometry.
LogisticParams params_from_inflection(double l1, double f0,
                                      const InflectionData& inf);

/// Residual of the equation satisfied by the lower asymptote:
///   log(2 (f(theta) - f(0)) / (f(0) - l1) + 1) - 2 theta f'(theta) / (f(theta) - l1)
double l1_residual(double l1_candidate, double f0, const InflectionData& inf);

/// |f(x) - (f(0) - m * integral_0^x (f - l1)(1 - (f - l1)/(l2 - l1)) du)|,
/// with the integral by adaptive Simpson at absolute tolerance 1e-8.
double ode_residual(const LogisticParams& params, double x);

}  // namespace doseeffect
