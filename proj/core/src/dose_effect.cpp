#include "doseeffect/dose_effect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "doseeffect/error.hpp"

namespace doseeffect {
namespace {

constexpr std::size_t kGridPoints = 1024;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_dose(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw Error(ErrorCode::InvalidArgument, "dose must be finite and nonnegative");
  }
}

void validate_gaussian(const GaussianTypeParams& g, const char* what) {
  if (!std::isfinite(g.l) || !std::isfinite(g.m) || !std::isfinite(g.p) ||
      !std::isfinite(g.q) || !(g.m > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " curve needs finite coefficients and m > 0");
  }
}

// Strictly monotone transform of sigma used for the decreasing check. It
// does not saturate where sigma itself rounds to its asymptote.
double dispersion_proxy(const SigmaCurve& curve, double d) {
  if (const auto* g = std::get_if<GaussianTypeParams>(&curve)) {
    return -g->m * d * d + g->p * d + g->q;
  }
  const auto& l = std::get<LogisticParams>(curve);
  const double t = l.m * d + l.p;
  const double a = l.inverse_span();
  // log(sigma - l1) = -log(a + e^t)
  if (t > 0.0) return -(t + std::log1p(a * std::exp(-t)));
  return -std::log(a + std::exp(t));
}

DecreasingClause decreasing_tail(const std::function<double(double)>& proxy, double from,
                                 double horizon) {
  const auto grid = uniform_grid(from, horizon, kGridPoints);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = proxy(grid[i]);

  DecreasingClause out;
  std::optional<std::size_t> last_violation;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(values[i + 1] < values[i])) {
      if (!out.first_violation) out.first_violation = grid[i];
      last_violation = i;
    }
  }
  if (!last_violation) {
    out.tail_start = grid.front();
  } else if (*last_violation + 2 < grid.size()) {
    out.tail_start = grid[*last_violation + 1];
  }
  out.passed = out.tail_start.has_value();
  return out;
}

std::vector<double> normalized(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::vector<double> out(values.size(), 0.0);
  if (*hi > *lo) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / (*hi - *lo);
  }
  return out;
}

}  // namespace

void validate(const DoseEffectModel& model) {
  validate(model.mu_curve);
  if (const auto* l = std::get_if<LogisticParams>(&model.sigma_curve)) {
    validate(*l);
    if (l->l1 < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "logistic dispersion curve must stay positive (l1 >= 0)");
    }
  } else {
    const auto& g = std::get<GaussianTypeParams>(model.sigma_curve);
    validate_gaussian(g, "dispersion");
    if (g.l != 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "Gaussian-type dispersion curve must have offset 0");
    }
  }
  validate_gaussian(model.gamma_curve, "skewness");
  if (!std::isfinite(model.d0_hat) || model.d0_hat < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "d0_hat must be finite and nonnegative");
  }
}

double eval(const SigmaCurve& curve, double d) {
  return std::visit([d](const auto& c) { return eval(c, d); }, curve);
}

std::string_view to_string(SigmaFamily family) noexcept {
  return family == SigmaFamily::logistic ? "logistic" : "gaussian_type";
}

SigmaShape classify_sigma_shape(std::span<const double> doses,
                                std::span<const double> sd_hats, double tol_rel) {
  if (doses.size() != sd_hats.size()) {
    throw Error(ErrorCode::InvalidArgument, "doses and dispersions differ in length");
  }
  if (doses.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "shape classification needs at least three doses");
  }
  for (std::size_t i = 1; i < doses.size(); ++i) {
    if (!(doses[i] > doses[i - 1])) {
      throw Error(ErrorCode::NonMonotoneAbscissae, "doses must be strictly increasing");
    }
  }

  std::size_t peak = 0;
  for (std::size_t i = 1; i < sd_hats.size(); ++i) {
    if (sd_hats[i] >= sd_hats[peak]) peak = i;
  }
  if (peak + 1 == sd_hats.size()) {
    throw Error(ErrorCode::NoDecreasingTail, "dispersion never decreases after its maximum");
  }
  for (std::size_t i = peak + 1; i < sd_hats.size(); ++i) {
    if (!(sd_hats[i] < sd_hats[i - 1])) {
      throw Error(ErrorCode::NoDecreasingTail,
                  "dispersion is not decreasing beyond its maximum");
    }
  }

  // Initial segment up to and including the peak.
  const auto head = sd_hats.first(peak + 1);
  const auto [lo, hi] = std::minmax_element(head.begin(), head.end());
  double mean = 0.0;
  for (double v : head) mean += v;
  mean /= static_cast<double>(head.size());
  const bool constant = *hi - *lo <= tol_rel * std::abs(mean);

  return {constant ? SigmaFamily::logistic : SigmaFamily::gaussian_type, peak, doses[peak]};
}

MomentTriple moments_at(const DoseEffectModel& model, double d) {
  require_dose(d);
  double sd = eval(model.sigma_curve, d);
  // Far beyond the bump the Gaussian-type curve underflows; keep sd > 0.
  sd = std::max(sd, std::numeric_limits<double>::min());
  return {eval(model.mu_curve, d), sd, eval(model.gamma_curve, d)};
}

DoseReport params_at(const DoseEffectModel& model, double d) {
  const MomentTriple m = moments_at(model, d);
  const MomentInversion inv = invert_moments(m, SkewClamp::on);
  return {d, m.mu, m.sigma, m.gamma, inv.params, inv.clamped};
}

std::uint64_t dose_stream_key(std::uint64_t seed, double d) noexcept {
  if (d == 0.0) d = 0.0;  // fold -0.0
  return seed ^ splitmix64(std::bit_cast<std::uint64_t>(d));
}

std::vector<double> simulate(const DoseEffectModel& model, double d, std::size_t n,
                             std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  const DoseReport report = params_at(model, d);
  return sn_sample(report.skew_params, dose_stream_key(seed, d), n);
}

AssumptionReport check_assumptions(const DoseEffectModel& model, double horizon,
                                   double eps) {
  if (!(horizon > model.d0_hat)) {
    throw Error(ErrorCode::InvalidArgument, "horizon must exceed d0_hat");
  }
  AssumptionReport report;
  report.decreasing = decreasing_tail(
      [&](double d) { return dispersion_proxy(model.sigma_curve, d); }, model.d0_hat,
      horizon);

  report.vanishing.sigma_at_horizon = eval(model.sigma_curve, horizon);
  if (const auto* l = std::get_if<LogisticParams>(&model.sigma_curve)) {
    report.vanishing.limit = limits(*l).second;
  } else {
    report.vanishing.limit = std::get<GaussianTypeParams>(model.sigma_curve).l;
  }
  report.vanishing.passed = report.vanishing.sigma_at_horizon < eps;
  return report;
}

AssumptionReport check_assumptions(const Curve& sigma, double d0_hat, double horizon,
                                   double eps) {
  if (!(horizon > d0_hat)) {
    throw Error(ErrorCode::InvalidArgument, "horizon must exceed d0_hat");
  }
  AssumptionReport report;
  report.decreasing = decreasing_tail(sigma, d0_hat, horizon);
  report.vanishing.sigma_at_horizon = sigma(horizon);
  report.vanishing.limit = std::numeric_limits<double>::quiet_NaN();
  report.vanishing.passed = report.vanishing.sigma_at_horizon < eps;
  return report;
}

std::size_t scalarized_argmax(std::span<const double> means, std::span<const double> sds,
                              std::span<const double> skews, const Scalarized& weights) {
  if (means.empty() || means.size() != sds.size() || means.size() != skews.size()) {
    throw Error(ErrorCode::InvalidArgument, "criterion columns must be nonempty and aligned");
  }
  const auto mean_n = normalized(means);
  const auto sd_n = normalized(sds);
  const auto skew_n = normalized(skews);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double score =
        weights.w_mean * mean_n[i] - weights.w_sd * sd_n[i] + weights.w_skew * skew_n[i];
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

OptimalDoseReport optimal_dose(const DoseEffectModel& model, double lo, double hi,
                               const DoseCriteria& criteria,
                               std::span<const SummaryRow> empirical) {
  require_dose(lo);
  if (!(lo < hi) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidArgument, "dose interval needs lo < hi");
  }
  const auto grid = uniform_grid(lo, hi, kGridPoints);
  std::vector<double> means(grid.size());
  std::vector<double> sds(grid.size());
  std::vector<double> skews(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MomentTriple m = moments_at(model, grid[i]);
    means[i] = m.mu;
    sds[i] = m.sigma;
    skews[i] = m.gamma;
  }

  std::size_t chosen = 0;
  if (const auto* w = std::get_if<Scalarized>(&criteria)) {
    chosen = scalarized_argmax(means, sds, skews, *w);
  } else {
    const auto& t = std::get<Admissible>(criteria);
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < grid.size() && !first; ++i) {
      if (means[i] >= t.mean_min && sds[i] <= t.sd_max && skews[i] >= t.skew_min) first = i;
    }
    if (!first) {
      throw Error(ErrorCode::NoAdmissibleDose,
                  "no dose on the interval meets the admissibility thresholds");
    }
    chosen = *first;
  }

  OptimalDoseReport report;
  report.dose = grid[chosen];
  report.at_dose = {means[chosen], sds[chosen], skews[chosen]};
  const auto [sd_lo, sd_hi] = std::minmax_element(sds.begin(), sds.end());
  report.model_sd_min = *sd_lo;
  report.model_sd_max = *sd_hi;
  report.grid_points = grid.size();
  for (const auto& row : empirical) {
    if (row.dose == report.dose) report.empirical_at_dose = row;
    if (row.dose < lo || row.dose > hi) continue;
    report.empirical_sd_min = std::min(report.empirical_sd_min.value_or(row.sd_hat), row.sd_hat);
    report.empirical_sd_max = std::max(report.empirical_sd_max.value_or(row.sd_hat), row.sd_hat);
  }
  return report;
}

ModelFit fit_model(std::span<const SummaryRow> rows, const ModelFitOptions& options) {
  if (rows.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "model fitting needs at least three doses");
  }
  std::vector<double> doses;
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<double> skews;
  for (const auto& row : rows) {
    doses.push_back(row.dose);
    means.push_back(row.mean_hat);
    sds.push_back(row.sd_hat);
    skews.push_back(row.skew_hat);
  }

  ModelFit out;
  LogisticFit mean_fit = fit_logistic(doses, means, options.mean_knowledge, options.formula);
  out.model.mu_curve = mean_fit.params;
  out.mean_report = mean_fit.report;

  out.sigma_shape = classify_sigma_shape(doses, sds, options.constant_tol);
  out.model.d0_hat = out.sigma_shape.d0_hat;
  if (out.sigma_shape.family == SigmaFamily::gaussian_type) {
    out.model.sigma_curve = fit_gaussian_type(doses, sds, FixedOffset{0.0});
  } else {
    // A plateau with ties or small wiggles is not strictly monotone; the
    // tail from d0_hat on always is, and its first point sits on the plateau.
    const bool strictly_decreasing =
        std::adjacent_find(sds.begin(), sds.end(), std::less_equal<>{}) == sds.end();
    const std::size_t first = strictly_decreasing ? 0 : out.sigma_shape.d0_index;
    const std::span<const double> tail_doses = std::span(doses).subspan(first);
    const std::span<const double> tail_sds = std::span(sds).subspan(first);
    const LogisticFit sigma_fit =
        fit_logistic(tail_doses, tail_sds, NoneKnown{}, options.formula);
    if (sigma_fit.params.l1 < 0.0) {
      throw Error(ErrorCode::DomainError,
                  "logistic dispersion fit has a negative lower asymptote");
    }
    out.model.sigma_curve = sigma_fit.params;
  }

  const OffsetMode skew_offset = options.skew_offset.value_or(default_offset_grid(skews));
  out.model.gamma_curve = fit_gaussian_type(doses, skews, skew_offset);

  validate(out.model);
  return out;
}

}  // namespace doseeffect
