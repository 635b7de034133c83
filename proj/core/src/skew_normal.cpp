#include "doseeffect/skew_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doseeffect/error.hpp"
#include "doseeffect/quadrature.hpp"

namespace doseeffect {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

// ((4 - pi) / 2)
constexpr double kSkewFactor = (4.0 - kPi) / 2.0;

double skewness_of_delta(double delta) {
  const double b = delta * kSqrt2OverPi;
  const double var_ratio = 1.0 - b * b;
  return kSkewFactor * b * b * b / std::pow(var_ratio, 1.5);
}

}  // namespace

double skewness_bound() noexcept {
  static const double bound = skewness_of_delta(1.0);
  return bound;
}

void validate(const SkewNormalParams& params) {
  if (!std::isfinite(params.xi) || !std::isfinite(params.omega) ||
      !std::isfinite(params.alpha) || !(params.omega > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "skew-normal parameters require finite values and omega > 0");
  }
}

double erf(double x) noexcept { return std::erf(x); }

double delta_of_shape(double alpha) noexcept {
  return alpha / std::sqrt(1.0 + alpha * alpha);
}

double sn_pdf(const SkewNormalParams& params, double x) {
  validate(params);
  const double z = (x - params.xi) / params.omega;
  const double normal = std::exp(-0.5 * z * z) / (params.omega * std::sqrt(2.0 * kPi));
  // 1 + erf(t) == erfc(-t), without cancellation in the left tail.
  return normal * std::erfc(-params.alpha * z / kSqrt2);
}

double sn_cdf(const SkewNormalParams& params, double x) {
  validate(params);
  if (std::isnan(x)) return x;
  if (x == -INFINITY) return 0.0;
  if (x == INFINITY) return 1.0;

  // Both tails of the law are dominated by a normal of scale omega, so
  // xi +- 40 omega carries all representable mass.
  const double reach = 40.0 * params.omega;
  const double lower = params.xi - reach;
  const double upper = params.xi + reach;
  if (x <= lower) return 0.0;
  if (x >= upper) return 1.0;

  auto pdf = [&params](double t) { return sn_pdf(params, t); };
  constexpr double tol = 1e-10;
  constexpr int panels = 64;
  double p = 0.0;
  if (x <= params.xi) {
    p = adaptive_simpson(pdf, lower, x, tol, panels);
  } else {
    p = 1.0 - adaptive_simpson(pdf, x, upper, tol, panels);
  }
  return std::clamp(p, 0.0, 1.0);
}

MomentTriple moments_of_params(const SkewNormalParams& params) {
  validate(params);
  const double delta = delta_of_shape(params.alpha);
  const double b = delta * kSqrt2OverPi;
  return {params.xi + params.omega * b, params.omega * std::sqrt(1.0 - b * b),
          skewness_of_delta(delta)};
}

MomentInversion invert_moments(const MomentTriple& moments, SkewClamp clamp) {
  if (!std::isfinite(moments.mu) || !std::isfinite(moments.sigma) ||
      !std::isfinite(moments.gamma) || !(moments.sigma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "moment triple requires finite values and sigma > 0");
  }

  MomentInversion out;
  double gamma = moments.gamma;
  if (clamp == SkewClamp::on) {
    if (std::abs(gamma) >= kSkewnessClamp) {
      gamma = std::copysign(kSkewnessClamp, gamma);
      out.clamped = true;
    }
  } else if (std::abs(gamma) >= skewness_bound()) {
    throw Error(ErrorCode::InfeasibleSkewness,
                "skewness " + std::to_string(moments.gamma) +
                    " is outside the skew-normal range (|gamma| < " +
                    std::to_string(skewness_bound()) + ")");
  }

  const double g23 = std::cbrt(gamma * gamma);
  const double abs_delta = std::sqrt(g23) * std::sqrt(kPi / 2.0) /
                           std::sqrt(g23 + std::cbrt(kSkewFactor * kSkewFactor));
  const double delta = std::copysign(abs_delta, gamma);
  const double omega = moments.sigma / std::sqrt(1.0 - 2.0 * delta * delta / kPi);

  out.delta = delta;
  out.params = {moments.mu - omega * delta * kSqrt2OverPi, omega,
                delta / std::sqrt(1.0 - delta * delta)};
  return out;
}

SkewNormalParams params_of_moments(const MomentTriple& moments, SkewClamp clamp) {
  return invert_moments(moments, clamp).params;
}

MomentTriple estimate_moments(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw Error(ErrorCode::DegenerateSample,
                "at least two observations are required");
  }
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  if (*lo == *hi) {
    throw Error(ErrorCode::DegenerateSample, "sample has zero variance");
  }

  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  for (double x : sample) sum += x;
  const double mean = sum / n;

  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  const double sd = std::sqrt(m2);
  return {mean, sd, m3 / (sd * sd * sd)};
}

SkewNormalParams estimate_params(std::span<const double> sample, SkewClamp clamp) {
  return params_of_moments(estimate_moments(sample), clamp);
}

std::vector<double> sn_sample(const SkewNormalParams& params, std::uint64_t seed,
                              std::size_t n) {
  validate(params);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double delta = delta_of_shape(params.alpha);
  const double ortho = std::sqrt(1.0 - delta * delta);

  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z0 = normal(engine);
    const double z1 = normal(engine);
    out.push_back(params.xi + params.omega * (delta * std::abs(z0) + ortho * z1));
  }
  return out;
}

}  // namespace doseeffect
