#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>

#include "doseeffect/logistic.hpp"

namespace doseeffect {

/// Steepest-secant interval of a sampled curve and the midpoint/secant
/// approximations of theta, f(theta) and f'(theta) it yields.
struct InflectionApprox {
  std::size_t index = 0;  ///< zero-based start of the selected interval
  double theta_n = 0.0;
  double gamma_n = 0.0;
  double delta_n = 0.0;

  InflectionData as_inflection() const noexcept { return {theta_n, gamma_n, delta_n}; }
};

/// v(d) = l + exp(-m d^2 + p d + q), m > 0.
struct GaussianTypeParams {
  double l = 0.0;
  double m = 1.0;
  double p = 0.0;
  double q = 0.0;
};

double eval(const GaussianTypeParams& params, double d);

/// Slope and intercept estimates (m_hat, p_hat) of the line z = p - m x.
struct LinRegResult {
  double slope_estimate = 0.0;
  double intercept_estimate = 0.0;
};

/// `published` applies the 1/(n-1) centering exactly as published; `standard` is
/// ordinary least squares.
enum class RegressionFormula { published, standard };

/// Phi(y) = log(1/(y - l1) - 1/(l2 - l1)); linearizes a logistic with known
/// asymptotes: Phi(f(x)) = p + m x. Throws DomainError outside (l1, l2).
double phi_transform(double y, double l1, double l2);

/// Regression of zs on xs returning (m_hat, p_hat) for z = p - m x.
/// Throws SingularDesign if the centered design vanishes.
LinRegResult linear_regression(std::span<const double> xs, std::span<const double> zs,
                               RegressionFormula formula = RegressionFormula::published);

LogisticParams fit_known_limits(std::span<const double> xs, std::span<const double> ys,
                                double l1, double l2,
                                RegressionFormula formula = RegressionFormula::standard);

/// Smallest index wins ties. Throws TooFewPoints / NonMonotoneAbscissae.
InflectionApprox detect_inflection(std::span<const double> xs, std::span<const double> ys);

/// Residual of (gamma_n - y1)/(y1 - l1) + 1/2 - exp(2 theta_n delta_n / (gamma_n - l1)) / 2.
double l1_equation_residual(double l1, double y1, const InflectionApprox& approx);

/// Root of l1_equation_residual on (bracket_lo, y1): 512-point sign-change
/// scan, bisection to 1e-12 width, then one Newton polish step.
double solve_l1(double y1, const InflectionApprox& approx, double bracket_lo);

/// Default lower end of the scan: y1 - 10 (gamma_n - y1).
double default_l1_bracket(double y1, const InflectionApprox& approx) noexcept;

struct BothKnown {
  double l1;
  double l2;
};
struct L1Known {
  double l1;
};
struct NoneKnown {
  std::optional<double> bracket_lo;
};
using Knowledge = std::variant<BothKnown, L1Known, NoneKnown>;

enum class Regime { both_known, l1_known, none_known };

struct FitReport {
  Regime regime = Regime::none_known;
  InflectionApprox approx;
  /// Residual of the asymptote equation at the returned l1 (none_known only).
  std::optional<double> l1_equation_residual;
  /// Whether decreasing data were fitted by reflection through the midrange.
  bool mirrored = false;
  /// Sum of squared curve residuals at the input points.
  double sse = 0.0;
};

struct LogisticFit {
  LogisticParams params;
  FitReport report;
};

/// End-to-end logistic fit under one of the three asymptote-knowledge regimes.
/// Abscissae not starting at 0 are shifted for fitting and p is mapped back.
LogisticFit fit_logistic(std::span<const double> xs, std::span<const double> ys,
                         const Knowledge& knowledge,
                         RegressionFormula formula = RegressionFormula::standard);

struct QuadraticCoefficients {
  double a = 0.0;  ///< x^2
  double b = 0.0;  ///< x
  double c = 0.0;  ///< constant
};

/// Least-squares y = a x^2 + b x + c through 3x3 normal equations with
/// partial pivoting. Throws SingularDesign with fewer than 3 distinct xs.
QuadraticCoefficients polyfit_quadratic(std::span<const double> xs,
                                        std::span<const double> ys);

struct FixedOffset {
  double l;
};
/// `steps` uniform candidates on [lo, hi]; infeasible ones are skipped.
struct GridOffset {
  double lo;
  double hi;
  std::size_t steps = 256;
};
using OffsetMode = std::variant<FixedOffset, GridOffset>;

/// 256 candidates strictly below min(vs), spanning one data range.
GridOffset default_offset_grid(std::span<const double> vs);

/// Fits l + exp(-m d^2 + p d + q) by quadratic regression on log(v - l).
/// Grid mode keeps the feasible candidate with the smallest original-units
/// SSE. Throws NoFeasibleOffset when no candidate gives a decaying curve
/// with v - l > 0 everywhere.
GaussianTypeParams fit_gaussian_type(std::span<const double> ds,
                                     std::span<const double> vs,
                                     const OffsetMode& offset);

}  // namespace doseeffect
