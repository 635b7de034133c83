#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace doseeffect {

/// Location / scale / shape of a skew-normal law. `omega > 0`, all finite.
struct SkewNormalParams {
  double xi = 0.0;
  double omega = 1.0;
  double alpha = 0.0;
};

/// Mean, standard deviation and Pearson skewness of a distribution.
///
/// Estimated or curve-evaluated triples may carry |gamma| beyond the
/// skew-normal feasibility bound; only the inversion to SkewNormalParams
/// enforces it.
struct MomentTriple {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.0;
};

/// Largest attainable |skewness| of the skew-normal family (limit delta -> 1).
double skewness_bound() noexcept;

/// Clamp target for infeasible skewness values.
inline constexpr double kSkewnessClamp = 0.995;

enum class SkewClamp { on, off };

/// Throws Error(InvalidArgument) unless omega > 0 and every field is finite.
void validate(const SkewNormalParams& params);

/// Error function with relative error well under 1e-13 (delegates to the C
/// library, which is accurate to a few ulp).
double erf(double x) noexcept;

/// delta = alpha / sqrt(1 + alpha^2).
double delta_of_shape(double alpha) noexcept;

double sn_pdf(const SkewNormalParams& params, double x);

/// P(X <= x), by adaptive quadrature of the density (absolute tolerance 1e-10).
double sn_cdf(const SkewNormalParams& params, double x);

MomentTriple moments_of_params(const SkewNormalParams& params);

struct MomentInversion {
  SkewNormalParams params;
  double delta = 0.0;
  bool clamped = false;
};

/// Method-of-moments inversion. With SkewClamp::on, |gamma| >= 0.995 is
/// replaced by +-0.995 and flagged; with SkewClamp::off, |gamma| at or above
/// the family bound raises Error(InfeasibleSkewness).
MomentInversion invert_moments(const MomentTriple& moments,
                               SkewClamp clamp = SkewClamp::on);

SkewNormalParams params_of_moments(const MomentTriple& moments,
                                   SkewClamp clamp = SkewClamp::on);

/// Sample mean, 1/n standard deviation and 1/n cube-average skewness.
/// Throws Error(DegenerateSample) for n < 2 or a constant sample.
MomentTriple estimate_moments(std::span<const double> sample);

SkewNormalParams estimate_params(std::span<const double> sample,
                                 SkewClamp clamp = SkewClamp::on);

/// Draws `n` variates via X = xi + omega (delta |Z0| + sqrt(1 - delta^2) Z1).
/// Deterministic for a fixed seed.
std::vector<double> sn_sample(const SkewNormalParams& params, std::uint64_t seed,
                              std::size_t n);

}  // namespace doseeffect
