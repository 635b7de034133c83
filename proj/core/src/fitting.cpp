#include "doseeffect/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "doseeffect/error.hpp"

namespace doseeffect {
namespace {

constexpr std::size_t kScanPoints = 512;
constexpr double kBisectionWidth = 1e-12;

void require_same_length(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "abscissae and ordinates differ in length (" +
                    std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + ")");
  }
}

void require_strictly_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw Error(ErrorCode::NonMonotoneAbscissae,
                  "abscissae must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

enum class Direction { increasing, decreasing, neither };

Direction direction_of(std::span<const double> ys) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    up = up && ys[i] > ys[i - 1];
    down = down && ys[i] < ys[i - 1];
  }
  if (up) return Direction::increasing;
  if (down) return Direction::decreasing;
  return Direction::neither;
}

double l1_equation_derivative(double l1, double y1, const InflectionApprox& approx) {
  const double c = 2.0 * approx.theta_n * approx.delta_n;
  const double g = approx.gamma_n - l1;
  const double r = y1 - l1;
  return (approx.gamma_n - y1) / (r * r) - 0.5 * std::exp(c / g) * c / (g * g);
}

double sse_of(const LogisticParams& params, std::span<const double> xs,
              std::span<const double> ys) {
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = eval(params, xs[i]) - ys[i];
    sse += r * r;
  }
  return sse;
}

// Reflects a fit of (c - y) back onto y. With a = 1/(l2' - l1'):
//   c - l1' - 1/(a + e^t) = (c - l2') + 1/(a + e^(-t + 2 log a)).
LogisticParams unmirror(const LogisticParams& fitted, double c) {
  const double span = fitted.l2 - fitted.l1;
  return {-fitted.m, -fitted.p - 2.0 * std::log(span), c - fitted.l2, c - fitted.l1};
}

struct OffsetCandidate {
  GaussianTypeParams params;
  double sse = 0.0;
};

std::optional<OffsetCandidate> try_offset(std::span<const double> ds,
                                          std::span<const double> vs, double l) {
  std::vector<double> logs;
  logs.reserve(vs.size());
  for (double v : vs) {
    const double shifted = v - l;
    if (!(shifted > 0.0) || !std::isfinite(shifted)) return std::nullopt;
    logs.push_back(std::log(shifted));
  }
  const QuadraticCoefficients quad = polyfit_quadratic(ds, logs);
  if (!(quad.a < 0.0)) return std::nullopt;

  OffsetCandidate out{{l, -quad.a, quad.b, quad.c}, 0.0};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = eval(out.params, ds[i]) - vs[i];
    out.sse += r * r;
  }
  return out;
}

}  // namespace

double eval(const GaussianTypeParams& params, double d) {
  return params.l + std::exp(-params.m * d * d + params.p * d + params.q);
}

double phi_transform(double y, double l1, double l2) {
  if (!(l2 > l1)) {
    throw Error(ErrorCode::InvalidArgument, "phi transform requires l2 > l1");
  }
  if (!(y > l1 && y < l2)) {
    throw Error(ErrorCode::DomainError, "observation " + std::to_string(y) +
                                            " lies outside the open band (l1, l2)");
  }
  const double arg = 1.0 / (y - l1) - 1.0 / (l2 - l1);
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::DomainError, "observation too close to the upper asymptote");
  }
  return std::log(arg);
}

LinRegResult linear_regression(std::span<const double> xs, std::span<const double> zs,
                               RegressionFormula formula) {
  require_same_length(xs, zs);
  const std::size_t n = xs.size();
  if (n < 2) {
    throw Error(ErrorCode::TooFewPoints, "regression needs at least two points");
  }
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    throw Error(ErrorCode::SingularDesign, "all abscissae are equal");
  }

  if (formula == RegressionFormula::standard) {
    double mx = 0.0;
    double mz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += xs[i];
      mz += zs[i];
    }
    mx /= static_cast<double>(n);
    mz /= static_cast<double>(n);
    double sxx = 0.0;
    double sxz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxz += (xs[i] - mx) * (zs[i] - mz);
    }
    const double m_hat = -sxz / sxx;
    return {m_hat, mz + m_hat * mx};
  }

  // Published estimator, verbatim: raw sums with 1/(n-1) centering.
  double sx = 0.0;
  double sz = 0.0;
  double sxz = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sz += zs[i];
    sxz += xs[i] * zs[i];
    sxx += xs[i] * xs[i];
  }
  const double k = static_cast<double>(n - 1);
  const double denominator = -sx * sx / k + sxx;
  const double scale = sx * sx / k + sxx;
  if (std::abs(denominator) <= 1e-14 * scale) {
    throw Error(ErrorCode::SingularDesign, "regression denominator vanishes");
  }
  const double m_hat = -(-sx * sz / k + sxz) / denominator;
  return {m_hat, sz / k + m_hat * sx / k};
}

LogisticParams fit_known_limits(std::span<const double> xs, std::span<const double> ys,
                                double l1, double l2, RegressionFormula formula) {
  require_same_length(xs, ys);
  if (xs.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "fit needs at least two points");
  }
  std::vector<double> zs;
  zs.reserve(ys.size());
  for (double y : ys) zs.push_back(phi_transform(y, l1, l2));
  // The estimators target z = p - m x, but Phi(f(x)) = p + m x for the
  // curve as defined, so the slope changes sign here.
  const LinRegResult line = linear_regression(xs, zs, formula);
  LogisticParams out{-line.slope_estimate, line.intercept_estimate, l1, l2};
  if (out.m == 0.0 || !std::isfinite(out.m) || !std::isfinite(out.p)) {
    throw Error(ErrorCode::DomainError, "regression produced a flat or non-finite curve");
  }
  return out;
}

InflectionApprox detect_inflection(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  if (xs.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "inflection detection needs at least two points");
  }
  require_strictly_increasing(xs);

  std::size_t best = 0;
  double best_slope = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if (i == 0 || std::abs(slope) > std::abs(best_slope)) {
      best = i;
      best_slope = slope;
    }
  }
  return {best, (xs[best + 1] + xs[best]) / 2.0, (ys[best + 1] + ys[best]) / 2.0,
          best_slope};
}

double l1_equation_residual(double l1, double y1, const InflectionApprox& approx) {
  return (approx.gamma_n - y1) / (y1 - l1) + 0.5 -
         0.5 * std::exp(2.0 * approx.theta_n * approx.delta_n / (approx.gamma_n - l1));
}

double default_l1_bracket(double y1, const InflectionApprox& approx) noexcept {
  return y1 - 10.0 * (approx.gamma_n - y1);
}

double solve_l1(double y1, const InflectionApprox& approx, double bracket_lo) {
  if (!(y1 < approx.gamma_n)) {
    throw Error(ErrorCode::DomainError,
                "first observation must lie below the inflection ordinate");
  }
  if (!(bracket_lo < y1) || !std::isfinite(bracket_lo)) {
    throw Error(ErrorCode::InvalidArgument, "bracket must start below the first observation");
  }

  const double hi = y1 - 1e-9 * (y1 - bracket_lo);
  auto residual = [&](double l) { return l1_equation_residual(l, y1, approx); };

  std::array<double, kScanPoints> grid{};
  std::array<double, kScanPoints> values{};
  bool any_finite = false;
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    grid[i] = bracket_lo + (hi - bracket_lo) * static_cast<double>(i) /
                               static_cast<double>(kScanPoints - 1);
    values[i] = residual(grid[i]);
    any_finite = any_finite || std::isfinite(values[i]);
  }
  if (!any_finite) {
    throw Error(ErrorCode::NonFinite, "asymptote equation is non-finite on the whole bracket");
  }

  std::optional<std::size_t> cell;
  for (std::size_t i = 0; i + 1 < kScanPoints; ++i) {
    if (std::isnan(values[i]) || std::isnan(values[i + 1])) continue;
    if (values[i] == 0.0) return grid[i];
    if (std::signbit(values[i]) != std::signbit(values[i + 1])) {
      cell = i;
      break;
    }
  }
  if (!cell) {
    throw Error(ErrorCode::NoBracket, "no sign change of the asymptote equation on the bracket");
  }

  double lo = grid[*cell];
  double up = grid[*cell + 1];
  double f_lo = values[*cell];
  while (up - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + up);
    if (mid <= lo || mid >= up) break;
    const double f_mid = residual(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      up = mid;
    }
  }

  double root = 0.5 * (lo + up);
  const double f_root = residual(root);
  const double slope = l1_equation_derivative(root, y1, approx);
  if (slope != 0.0 && std::isfinite(slope)) {
    const double polished = root - f_root / slope;
    if (polished >= lo && polished <= up &&
        std::abs(residual(polished)) <= std::abs(f_root)) {
      root = polished;
    }
  }
  return root;
}

LogisticFit fit_logistic(std::span<const double> xs, std::span<const double> ys,
                         const Knowledge& knowledge, RegressionFormula formula) {
  require_same_length(xs, ys);
  LogisticFit out;
  out.report.approx = detect_inflection(xs, ys);

  if (const auto* both = std::get_if<BothKnown>(&knowledge)) {
    out.report.regime = Regime::both_known;
    out.params = fit_known_limits(xs, ys, both->l1, both->l2, formula);
  } else if (const auto* lower = std::get_if<L1Known>(&knowledge)) {
    out.report.regime = Regime::l1_known;
    const double l2 = 2.0 * out.report.approx.gamma_n - lower->l1;
    if (!(l2 > lower->l1)) {
      throw Error(ErrorCode::DomainError,
                  "inflection ordinate does not lie above the given l1");
    }
    out.params = fit_known_limits(xs, ys, lower->l1, l2, formula);
  } else {
    out.report.regime = Regime::none_known;
    const Direction dir = direction_of(ys);
    if (dir == Direction::neither) {
      throw Error(ErrorCode::NonMonotoneData,
                  "asymptote-free fitting needs strictly monotone observations");
    }

    const double x0 = xs.front();
    std::vector<double> us(xs.begin(), xs.end());
    for (double& u : us) u -= x0;

    std::vector<double> vs(ys.begin(), ys.end());
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    const double reflect = *lo_it + *hi_it;
    out.report.mirrored = dir == Direction::decreasing;
    if (out.report.mirrored) {
      for (double& v : vs) v = reflect - v;
    }

    const InflectionApprox approx = detect_inflection(us, vs);
    const double y1 = vs.front();
    const auto& opts = std::get<NoneKnown>(knowledge);
    const double bracket = opts.bracket_lo.value_or(default_l1_bracket(y1, approx));
    const double l1 = solve_l1(y1, approx, bracket);
    out.report.l1_equation_residual = l1_equation_residual(l1, y1, approx);

    LogisticParams fitted = params_from_inflection(l1, y1, approx.as_inflection());
    if (out.report.mirrored) fitted = unmirror(fitted, reflect);
    fitted.p -= fitted.m * x0;
    out.params = fitted;
  }

  validate(out.params);
  out.report.sse = sse_of(out.params, xs, ys);
  return out;
}

QuadraticCoefficients polyfit_quadratic(std::span<const double> xs,
                                        std::span<const double> ys) {
  require_same_length(xs, ys);
  if (std::set<double>(xs.begin(), xs.end()).size() < 3) {
    throw Error(ErrorCode::SingularDesign,
                "quadratic regression needs at least three distinct abscissae");
  }

  // Normal equations in the unknowns (c, b, a).
  std::array<double, 5> power_sums{};
  std::array<double, 3> rhs{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double xp = 1.0;
    for (std::size_t k = 0; k < 5; ++k) {
      power_sums[k] += xp;
      if (k < 3) rhs[k] += xp * ys[i];
      xp *= xs[i];
    }
  }
  std::array<std::array<double, 4>, 3> aug{};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) aug[r][c] = power_sums[r + c];
    aug[r][3] = rhs[r];
  }

  for (std::size_t col = 0; col < 3; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < 3; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    if (aug[pivot][col] == 0.0) {
      throw Error(ErrorCode::SingularDesign, "normal equations are singular");
    }
    std::swap(aug[col], aug[pivot]);
    for (std::size_t r = col + 1; r < 3; ++r) {
      const double factor = aug[r][col] / aug[col][col];
      for (std::size_t c = col; c < 4; ++c) aug[r][c] -= factor * aug[col][c];
    }
  }
  std::array<double, 3> sol{};
  for (std::size_t r = 3; r-- > 0;) {
    double acc = aug[r][3];
    for (std::size_t c = r + 1; c < 3; ++c) acc -= aug[r][c] * sol[c];
    sol[r] = acc / aug[r][r];
  }
  return {sol[2], sol[1], sol[0]};
}

GridOffset default_offset_grid(std::span<const double> vs) {
  if (vs.empty()) {
    throw Error(ErrorCode::TooFewPoints, "no values to place an offset grid under");
  }
  const auto [lo_it, hi_it] = std::minmax_element(vs.begin(), vs.end());
  double span = *hi_it - *lo_it;
  if (!(span > 0.0)) span = std::max(std::abs(*lo_it), 1.0);
  constexpr std::size_t steps = 256;
  return {*lo_it - span, *lo_it - span / static_cast<double>(steps), steps};
}

GaussianTypeParams fit_gaussian_type(std::span<const double> ds, std::span<const double> vs,
                                     const OffsetMode& offset) {
  require_same_length(ds, vs);
  if (const auto* fixed = std::get_if<FixedOffset>(&offset)) {
    auto candidate = try_offset(ds, vs, fixed->l);
    if (!candidate) {
      throw Error(ErrorCode::NoFeasibleOffset,
                  "offset " + std::to_string(fixed->l) +
                      " leaves a nonpositive value or a non-decaying fit");
    }
    return candidate->params;
  }

  const auto& grid = std::get<GridOffset>(offset);
  if (grid.steps == 0 || !(grid.hi >= grid.lo)) {
    throw Error(ErrorCode::InvalidArgument, "offset grid needs lo <= hi and steps >= 1");
  }
  std::optional<OffsetCandidate> best;
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double l = grid.steps == 1
                         ? grid.lo
                         : grid.lo + (grid.hi - grid.lo) * static_cast<double>(k) /
                                         static_cast<double>(grid.steps - 1);
    auto candidate = try_offset(ds, vs, l);
    if (candidate && (!best || candidate->sse < best->sse)) best = candidate;
  }
  if (!best) {
    throw Error(ErrorCode::NoFeasibleOffset, "no candidate offset yields a feasible fit");
  }
  return best->params;
}

}  // namespace doseeffect
