#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "doseeffect/fitting.hpp"
#include "doseeffect/logistic.hpp"
#include "doseeffect/skew_normal.hpp"
#include "doseeffect/trial_io.hpp"

namespace doseeffect {

using SigmaCurve = std::variant<LogisticParams, GaussianTypeParams>;

/// Mean, dispersion and skewness as functions of dose.
///
/// The Gaussian-type dispersion curve must have offset 0 so that it vanishes
/// at large doses; both Gaussian-type curves need m > 0.
struct DoseEffectModel {
  LogisticParams mu_curve;
  SigmaCurve sigma_curve;
  GaussianTypeParams gamma_curve;
  double d0_hat = 0.0;
};

void validate(const DoseEffectModel& model);

double eval(const SigmaCurve& curve, double d);

enum class SigmaFamily { logistic, gaussian_type };

std::string_view to_string(SigmaFamily family) noexcept;

struct SigmaShape {
  SigmaFamily family = SigmaFamily::gaussian_type;
  std::size_t d0_index = 0;
  double d0_hat = 0.0;
};

/// Splits the dispersion profile at its (last) maximum d0_hat. The head
/// before d0_hat counts as constant when max - min <= tol_rel * mean of the
/// head, which selects the logistic family; otherwise Gaussian-type.
/// Throws NoDecreasingTail unless sd_hats strictly decrease from d0_hat on.
SigmaShape classify_sigma_shape(std::span<const double> doses,
                                std::span<const double> sd_hats,
                                double tol_rel = 0.05);

MomentTriple moments_at(const DoseEffectModel& model, double d);

struct DoseReport {
  double dose = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  SkewNormalParams skew_params;
  bool clamped = false;
};

/// Total: infeasible skewness is clamped and flagged.
DoseReport params_at(const DoseEffectModel& model, double d);

/// Substream key for a dose: seed ^ splitmix64(bits of d).
std::uint64_t dose_stream_key(std::uint64_t seed, double d) noexcept;

std::vector<double> simulate(const DoseEffectModel& model, double d, std::size_t n,
                             std::uint64_t seed);

struct DecreasingClause {
  bool passed = false;
  /// First grid point at or after d0_hat where sigma fails to decrease.
  std::optional<double> first_violation;
  /// Start of the strictly decreasing tail that reaches the horizon.
  std::optional<double> tail_start;
};

struct VanishingClause {
  bool passed = false;
  double sigma_at_horizon = 0.0;
  double limit = 0.0;  ///< analytic limit of sigma at +inf
};

struct AssumptionReport {
  DecreasingClause decreasing;
  VanishingClause vanishing;
  bool passed() const noexcept { return decreasing.passed && vanishing.passed; }
};

/// Grid check (1024 points on [d0_hat, horizon]) of the dispersion
/// assumptions: a strictly decreasing tail reaching the horizon, and
/// sigma(horizon) < eps.
AssumptionReport check_assumptions(const DoseEffectModel& model, double horizon,
                                   double eps);

/// Same checks on an arbitrary dispersion curve (the limit is reported as NaN).
AssumptionReport check_assumptions(const Curve& sigma, double d0_hat, double horizon,
                                   double eps);

struct Admissible {
  double mean_min = 0.0;
  double sd_max = 0.0;
  double skew_min = 0.0;
};
struct Scalarized {
  double w_mean = 1.0;
  double w_sd = 0.0;
  double w_skew = 0.0;
};
using DoseCriteria = std::variant<Admissible, Scalarized>;

struct OptimalDoseReport {
  double dose = 0.0;
  MomentTriple at_dose;
  double model_sd_min = 0.0;
  double model_sd_max = 0.0;
  std::optional<double> empirical_sd_min;
  std::optional<double> empirical_sd_max;
  /// Empirical row at exactly the chosen dose, when one was supplied.
  std::optional<SummaryRow> empirical_at_dose;
  std::size_t grid_points = 0;
};

/// Index maximizing w_mean*mean~ - w_sd*sd~ + w_skew*skew~ where ~ is
/// min-max normalization over the inputs (constant columns map to 0).
/// Ties go to the smallest index.
std::size_t scalarized_argmax(std::span<const double> means, std::span<const double> sds,
                              std::span<const double> skews, const Scalarized& weights);

/// Searches a 1024-point grid on [lo, hi]. Admissible mode returns the
/// smallest dose meeting every threshold (or throws NoAdmissibleDose).
OptimalDoseReport optimal_dose(const DoseEffectModel& model, double lo, double hi,
                               const DoseCriteria& criteria,
                               std::span<const SummaryRow> empirical = {});

struct ModelFitOptions {
  Knowledge mean_knowledge = NoneKnown{};
  /// Offset for the skewness curve; default is the grid below min(skew).
  std::optional<OffsetMode> skew_offset;
  double constant_tol = 0.05;
  RegressionFormula formula = RegressionFormula::standard;
};

struct ModelFit {
  DoseEffectModel model;
  FitReport mean_report;
  SigmaShape sigma_shape;
};

/// Full pipeline on per-dose summaries: logistic mean curve, dispersion
/// family by shape, Gaussian-type skewness curve.
ModelFit fit_model(std::span<const SummaryRow> rows, const ModelFitOptions& options = {});

}  // namespace doseeffect
