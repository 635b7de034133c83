#include "doseeffect/logistic.hpp"

#include <cmath>

#include "doseeffect/error.hpp"
#include "doseeffect/quadrature.hpp"

namespace doseeffect {
namespace {

// 1 / ((l2 - l1)^-1 + exp(m x + p)), i.e. f(x) - l1.
double excess(const LogisticParams& params, double x) {
  return 1.0 / (params.inverse_span() + std::exp(params.m * x + params.p));
}

}  // namespace

void validate(const LogisticParams& params) {
  if (!std::isfinite(params.m) || !std::isfinite(params.p) ||
      !std::isfinite(params.l1) || !std::isfinite(params.l2)) {
    throw Error(ErrorCode::InvalidArgument, "logistic parameters must be finite");
  }
  if (params.m == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "logistic slope parameter m must be nonzero");
  }
  if (!(params.l2 > params.l1)) {
    throw Error(ErrorCode::InvalidArgument, "logistic asymptotes require l2 > l1");
  }
}

double eval(const LogisticParams& params, double x) {
  validate(params);
  return params.l1 + excess(params, x);
}

double eval_derivative(const LogisticParams& params, double x) {
  validate(params);
  // f' = -m s (1 - s / (l2 - l1)) with s = f - l1; finite even when exp overflows.
  const double s = excess(params, x);
  return -params.m * s * (1.0 - s * params.inverse_span());
}

double eval_second_derivative(const LogisticParams& params, double x) {
  validate(params);
  const double a = params.inverse_span();
  const double s = excess(params, x);
  const double u = 1.0 - s * a;  // e / (a + e)
  // f'' = m^2 s u (1 - 2 s a)
  return params.m * params.m * s * u * (1.0 - 2.0 * s * a);
}

InflectionData inflection(const LogisticParams& params) {
  validate(params);
  const double span = params.l2 - params.l1;
  return {-(std::log(span) + params.p) / params.m, 0.5 * (params.l1 + params.l2),
          -params.m * span / 4.0};
}

std::pair<double, double> limits(const LogisticParams& params) {
  validate(params);
  if (params.m < 0.0) return {params.l1, params.l2};
  return {params.l2, params.l1};
}

LogisticParams params_from_inflection(double l1, double f0, const InflectionData& inf) {
  if (!(f0 > l1) || !(inf.f_theta > l1)) {
    throw Error(ErrorCode::DomainError,
                "f(0) and f(theta) must both lie above the lower asymptote");
  }
  const double half_span = inf.f_theta - l1;
  const double arg = 1.0 / (f0 - l1) - 1.0 / (2.0 * half_span);
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "f(0) is not below the upper asymptote 2 f(theta) - l1");
  }
  LogisticParams out{-2.0 * inf.f_prime_theta / half_span, std::log(arg), l1,
                     2.0 * inf.f_theta - l1};
  if (out.m == 0.0 || !std::isfinite(out.m) || !std::isfinite(out.p)) {
    throw Error(ErrorCode::DomainError, "inflection slope yields a degenerate curve");
  }
  return out;
}

double l1_residual(double l1_candidate, double f0, const InflectionData& inf) {
  if (!(f0 > l1_candidate) || !(inf.f_theta > l1_candidate)) {
    throw Error(ErrorCode::DomainError, "candidate l1 must lie below f(0) and f(theta)");
  }
  const double arg = 2.0 * (inf.f_theta - f0) / (f0 - l1_candidate) + 1.0;
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::DomainError, "logarithm argument is not positive");
  }
  return std::log(arg) -
         2.0 * inf.theta * inf.f_prime_theta / (inf.f_theta - l1_candidate);
}

double ode_residual(const LogisticParams& params, double x) {
  validate(params);
  if (x == 0.0) return 0.0;
  const double a = params.inverse_span();
  auto rhs = [&params, a](double u) {
    const double s = excess(params, u);
    return s * (1.0 - s * a);
  };
  const double integral = adaptive_simpson(rhs, 0.0, x, 1e-8);
  const double predicted = eval(params, 0.0) - params.m * integral;
  return std::abs(eval(params, x) - predicted);
}

}  // namespace doseeffect
