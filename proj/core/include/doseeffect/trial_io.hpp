#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace doseeffect {

/// Raw effect observations e_1(d), ..., e_n(d) at one administered dose.
struct DoseCohort {
  double dose = 0.0;
  std::vector<double> observations;
};

/// Per-dose mean, 1/n standard deviation and cube-average skewness.
struct SummaryRow {
  double dose = 0.0;
  double mean_hat = 0.0;
  double sd_hat = 0.0;
  double skew_hat = 0.0;
  std::size_t n = 0;
};

/// `%.*g`-style rendering via std::to_chars.
std::string format_number(double value, int significant_digits);

/// Parses a finite decimal; returns false on any trailing garbage.
bool parse_number(std::string_view text, double& out);

/// Long-format `dose,value` CSV. Cohorts are grouped by exact dose and
/// returned in ascending dose order.
/// Throws ParseError (with line number), NegativeDose or EmptyInput.
std::vector<DoseCohort> parse_csv(std::istream& input);

/// Summary CSV with header `dose,mean,sd,skew` and an optional trailing `n`.
std::vector<SummaryRow> parse_summary_csv(std::istream& input);

/// Throws DegenerateCohort for n < 2 or zero variance.
std::vector<SummaryRow> summarize(std::span<const DoseCohort> cohorts);

/// `dose,mean,sd,skew,n` with 6 significant digits.
void emit_summary(std::span<const SummaryRow> rows, std::ostream& out);

/// Long-format observations at 17 significant digits (lossless).
void emit_observations(std::span<const DoseCohort> cohorts, std::ostream& out);

/// Uniform grid on [lo, hi] with `steps` points, endpoints included; a
/// single step yields the midpoint.
std::vector<double> uniform_grid(double lo, double hi, std::size_t steps);

using Curve = std::function<double(double)>;

/// `x,y` rows on uniform_grid(lo, hi, steps).
void emit_curve_points(const Curve& curve, double lo, double hi, std::size_t steps,
                       std::ostream& out);

/// Static SVG 1.1 polyline of the curve in an 800x500 viewBox with linear
/// axes and tick labels.
void emit_curve_svg(const Curve& curve, double lo, double hi, std::size_t steps,
                    std::string_view title, std::ostream& out);

}  // namespace doseeffect
