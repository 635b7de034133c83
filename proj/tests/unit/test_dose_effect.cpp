#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "doseeffect/dose_effect.hpp"
#include "test_support.hpp"

using namespace doseeffect;

namespace {

const std::vector<double> kDoses{0, 0.75, 1.5, 3};
const std::vector<double> kSds{26.9715, 30.8113, 44.6582, 31.9657};

std::vector<SummaryRow> escape_rows() {
  return {{0, 33.3875, 26.9715, -0.0276, 8},
          {0.75, 44.1625, 30.8113, -0.1381, 8},
          {1.5, 51.5, 44.6582, 1.2827, 8},
          {3, 78.225, 31.9657, 0.3504, 8}};
}

// The curves exactly as printed for the escape-time data.
DoseEffectModel printed_model() {
  DoseEffectModel m;
  m.mu_curve = {-0.8278, -2.5929, 21.8153, 21.8153 + 1.0 / 0.0116};
  m.sigma_curve = GaussianTypeParams{0.0, 0.1502, 0.5289, 3.2459};
  m.gamma_curve = {0.2381, 0.6503, 2.2935, -1.5578};
  m.d0_hat = 1.5;
  return m;
}

// Closed-form inverse of an increasing logistic.
double logistic_inverse(const LogisticParams& p, double y) {
  return (std::log(1.0 / (y - p.l1) - 1.0 / (p.l2 - p.l1)) - p.p) / p.m;
}

}  // namespace

TEST_CASE("classify_sigma_shape") {
  const SigmaShape escape = classify_sigma_shape(kDoses, kSds);
  CHECK(escape.family == SigmaFamily::gaussian_type);
  CHECK(escape.d0_index == 2);
  CHECK(escape.d0_hat == 1.5);

  const std::vector<double> ds{0, 1, 2, 3, 4};
  SUBCASE("plateau then decline") {
    const std::vector<double> sds{10.0, 10.2, 10.1, 8.0, 5.0};
    const SigmaShape s = classify_sigma_shape(ds, sds);
    CHECK(s.family == SigmaFamily::logistic);
    CHECK(s.d0_index == 1);
    CHECK(s.d0_hat == 1.0);
  }
  SUBCASE("decreasing from the first dose") {
    const std::vector<double> sds{10.0, 9.0, 7.0, 4.0, 2.0};
    CHECK(classify_sigma_shape(ds, sds).family == SigmaFamily::logistic);
    CHECK(classify_sigma_shape(ds, sds).d0_index == 0);
  }
  SUBCASE("the last of several maxima is the split point") {
    const std::vector<double> sds{5.0, 9.0, 7.0, 9.0, 2.0};
    CHECK(classify_sigma_shape(ds, sds).d0_index == 3);
  }
  SUBCASE("tolerance decides what counts as constant") {
    const std::vector<double> sds{10.0, 10.2, 10.1, 8.0, 5.0};
    CHECK(classify_sigma_shape(ds, sds, 0.01).family == SigmaFamily::gaussian_type);
  }
  SUBCASE("no decreasing tail") {
    CHECK_ERROR_CODE(classify_sigma_shape(ds, std::vector<double>{1, 2, 3, 4, 5}),
                     ErrorCode::NoDecreasingTail);
    CHECK_ERROR_CODE(classify_sigma_shape(ds, std::vector<double>{1, 5, 4, 4, 3}),
                     ErrorCode::NoDecreasingTail);
    CHECK_ERROR_CODE(classify_sigma_shape(ds, std::vector<double>{1, 5, 4, 4.5, 3}),
                     ErrorCode::NoDecreasingTail);
  }
  SUBCASE("invalid inputs") {
    CHECK_ERROR_CODE(classify_sigma_shape(std::vector<double>{0, 1}, std::vector<double>{2, 1}),
                     ErrorCode::TooFewPoints);
    CHECK_ERROR_CODE(classify_sigma_shape(std::vector<double>{0, 2, 1},
                                          std::vector<double>{3, 2, 1}),
                     ErrorCode::NonMonotoneAbscissae);
  }
}

TEST_CASE("moments_at and params_at") {
  const DoseEffectModel model = printed_model();
  const MomentTriple at0 = moments_at(model, 0.0);
  CHECK(at0.mu == doctest::Approx(33.38899938578726).epsilon(1e-13));
  CHECK(at0.sigma == doctest::Approx(std::exp(3.2459)).epsilon(1e-15));
  CHECK(std::abs(at0.gamma - 0.4487) < 1e-3);
  CHECK(std::abs(moments_at(model, 3.0).sigma - 32.4903) < 5e-3);

  SUBCASE("feasible skewness maps back to the same moments") {
    const DoseReport r = params_at(model, 0.0);
    CHECK_FALSE(r.clamped);
    const MomentTriple back = moments_of_params(r.skew_params);
    CHECK(back.mu == doctest::Approx(r.mean).epsilon(1e-12));
    CHECK(back.sigma == doctest::Approx(r.sd).epsilon(1e-12));
    CHECK(back.gamma == doctest::Approx(r.skewness).epsilon(1e-10));
  }
  SUBCASE("infeasible skewness is clamped and flagged") {
    // The printed skewness curve peaks near d = 1.76 well above the bound.
    const DoseReport r = params_at(model, 1.76);
    CHECK(r.skewness > skewness_bound());
    CHECK(r.clamped);
    const MomentTriple back = moments_of_params(r.skew_params);
    CHECK(back.gamma == doctest::Approx(kSkewnessClamp).epsilon(1e-9));
    CHECK(back.mu == doctest::Approx(r.mean).epsilon(1e-12));
    CHECK(back.sigma == doctest::Approx(r.sd).epsilon(1e-12));
  }
  SUBCASE("far doses keep a positive scale") {
    const DoseReport r = params_at(model, 200.0);
    CHECK(r.sd > 0.0);
    CHECK(std::isfinite(r.skew_params.omega));
  }
  CHECK_ERROR_CODE(moments_at(model, -1.0), ErrorCode::InvalidArgument);
}

TEST_CASE("validate") {
  DoseEffectModel m = printed_model();
  CHECK_NOTHROW(validate(m));
  m.sigma_curve = GaussianTypeParams{0.1, 0.1502, 0.5289, 3.2459};
  CHECK_ERROR_CODE(validate(m), ErrorCode::InvalidArgument);
  m = printed_model();
  m.gamma_curve.m = -0.5;
  CHECK_ERROR_CODE(validate(m), ErrorCode::InvalidArgument);
  m = printed_model();
  m.sigma_curve = LogisticParams{1.0, 0.0, -1.0, 5.0};
  CHECK_ERROR_CODE(validate(m), ErrorCode::InvalidArgument);
}

TEST_CASE("simulate") {
  const DoseEffectModel model = printed_model();
  CHECK(simulate(model, 3.0, 500, 42) == simulate(model, 3.0, 500, 42));
  CHECK(simulate(model, 3.0, 500, 42) != simulate(model, 3.0, 500, 43));
  CHECK(simulate(model, 3.0, 500, 42) != simulate(model, 2.0, 500, 42));
  // Shorter draws are prefixes of longer ones.
  const auto longer = simulate(model, 1.0, 100, 9);
  const auto shorter = simulate(model, 1.0, 10, 9);
  CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
  CHECK(dose_stream_key(5, 0.0) == dose_stream_key(5, -0.0));
  CHECK(dose_stream_key(5, 1.0) != dose_stream_key(5, 2.0));

  SUBCASE("sample moments track the model") {
    const std::size_t n = 400000;
    for (double d : {0.0, 1.0, 3.0}) {
      const auto xs = simulate(model, d, n, 2024);
      // Clamped doses are sampled at the clamped skewness.
      const MomentTriple target = moments_of_params(params_at(model, d).skew_params);
      const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
      CHECK(std::abs(mean - target.mu) < 4.0 * target.sigma / std::sqrt(static_cast<double>(n)));
      const MomentTriple est = estimate_moments(xs);
      CHECK(std::abs(est.sigma - target.sigma) < 0.01 * target.sigma);
      CHECK(std::abs(est.gamma - target.gamma) < 0.02);
    }
  }
  CHECK_ERROR_CODE(simulate(model, 1.0, 0, 1), ErrorCode::InvalidArgument);
}

TEST_CASE("check_assumptions") {
  const auto rows = escape_rows();
  const DoseEffectModel fitted = fit_model(rows).model;

  SUBCASE("fitted escape-time model") {
    const AssumptionReport r = check_assumptions(fitted, 20.0, 1e-3);
    CHECK(r.passed());
    REQUIRE(r.decreasing.tail_start.has_value());
    // The Gaussian dispersion turns down at p / (2 m).
    const auto& s = std::get<GaussianTypeParams>(fitted.sigma_curve);
    const double vertex = s.p / (2.0 * s.m);
    CHECK(std::abs(*r.decreasing.tail_start - vertex) < (20.0 - 1.5) / 1023.0);
    CHECK(r.vanishing.limit == 0.0);
    CHECK(r.vanishing.sigma_at_horizon < 1e-3);
  }
  SUBCASE("logistic dispersion with a positive floor does not vanish") {
    DoseEffectModel m = fitted;
    m.sigma_curve = LogisticParams{1.2, -2.0, 5.0, 40.0};
    m.d0_hat = 0.0;
    const AssumptionReport r = check_assumptions(m, 20.0, 1e-3);
    CHECK(r.decreasing.passed);
    CHECK_FALSE(r.vanishing.passed);
    CHECK(r.vanishing.limit == 5.0);
    CHECK_FALSE(r.passed());
  }
  SUBCASE("constant dispersion is never decreasing") {
    const AssumptionReport r = check_assumptions([](double) { return 3.0; }, 0.0, 20.0, 1e-3);
    CHECK_FALSE(r.decreasing.passed);
    CHECK_FALSE(r.vanishing.passed);
    CHECK(std::isnan(r.vanishing.limit));
  }
  SUBCASE("short horizon") {
    CHECK(check_assumptions(fitted, 4.0, 1e-3).decreasing.passed);
    CHECK_FALSE(check_assumptions(fitted, 4.0, 1e-3).vanishing.passed);
    CHECK_ERROR_CODE(check_assumptions(fitted, 1.0, 1e-3), ErrorCode::InvalidArgument);
  }
}

TEST_CASE("scalarized_argmax") {
  const std::vector<double> means{1, 4, 3, 4};
  const std::vector<double> sds{2, 2, 1, 2};
  const std::vector<double> skews{0, 0, 0, 1};
  CHECK(scalarized_argmax(means, sds, skews, {}) == 1);
  CHECK(scalarized_argmax(means, sds, skews, {1, 0, 1}) == 3);
  CHECK(scalarized_argmax(means, sds, skews, {0, 1, 0}) == 2);

  // Positive affine maps of any column leave the choice unchanged.
  std::vector<double> means2;
  std::vector<double> sds2;
  for (double v : means) means2.push_back(7.5 * v - 30.0);
  for (double v : sds) sds2.push_back(0.01 * v + 4.0);
  for (const Scalarized w : {Scalarized{1, 0, 0}, Scalarized{1, 2, 0.5}, Scalarized{0.2, 1, 3}}) {
    CHECK(scalarized_argmax(means, sds, skews, w) == scalarized_argmax(means2, sds2, skews, w));
  }
  CHECK_ERROR_CODE(scalarized_argmax(means, sds, std::vector<double>{0}, {}),
                   ErrorCode::InvalidArgument);
}

TEST_CASE("optimal_dose") {
  const auto rows = escape_rows();
  const DoseEffectModel fitted = fit_model(rows).model;

  SUBCASE("maximal mean on [0, 3]") {
    const OptimalDoseReport r = optimal_dose(fitted, 0.0, 3.0, Scalarized{}, rows);
    CHECK(r.dose == 3.0);
    CHECK(r.grid_points == 1024);
    CHECK(std::abs(r.at_dose.sigma - 32.4903) < 5e-4);
    REQUIRE(r.empirical_at_dose.has_value());
    CHECK(r.empirical_at_dose->skew_hat == 0.3504);
    CHECK(r.empirical_sd_min == 26.9715);
    CHECK(r.empirical_sd_max == 44.6582);
    CHECK(r.model_sd_min <= r.at_dose.sigma);
    CHECK(r.model_sd_max >= r.at_dose.sigma);
  }
  SUBCASE("smallest admissible dose") {
    const OptimalDoseReport r = optimal_dose(fitted, 0.0, 3.0, Admissible{60.0, 100.0, -10.0});
    const double h = 3.0 / 1023.0;
    const double crossing = logistic_inverse(fitted.mu_curve, 60.0);
    CHECK(r.dose == doctest::Approx(std::ceil(crossing / h) * h).epsilon(1e-12));
    CHECK(r.at_dose.mu >= 60.0);
    CHECK(eval(fitted.mu_curve, r.dose - h) < 60.0);
  }
  SUBCASE("nothing admissible") {
    CHECK_ERROR_CODE(optimal_dose(fitted, 0.0, 3.0, Admissible{200.0, 100.0, -10.0}),
                     ErrorCode::NoAdmissibleDose);
  }
  CHECK_ERROR_CODE(optimal_dose(fitted, 3.0, 3.0, Scalarized{}), ErrorCode::InvalidArgument);
}

TEST_CASE("fit_model") {
  const auto rows = escape_rows();
  const ModelFit fit = fit_model(rows);
  CHECK(fit.sigma_shape.family == SigmaFamily::gaussian_type);
  CHECK(fit.model.d0_hat == 1.5);
  CHECK(fit.model.mu_curve.l1 == doctest::Approx(21.8152689883453207).epsilon(1e-12));
  const auto& s = std::get<GaussianTypeParams>(fit.model.sigma_curve);
  CHECK(s.l == 0.0);
  CHECK(std::abs(s.m - 0.1502) < 5e-4);
  CHECK(std::abs(s.p - 0.5289) < 5e-4);
  CHECK(std::abs(s.q - 3.2459) < 5e-4);
  CHECK(fit.model.gamma_curve.l < -0.1381);
  CHECK(fit.model.gamma_curve.m > 0.0);

  SUBCASE("zero skewness offset is infeasible for these data") {
    ModelFitOptions opts;
    opts.skew_offset = FixedOffset{0.0};
    CHECK_ERROR_CODE(fit_model(rows, opts), ErrorCode::NoFeasibleOffset);
  }
  SUBCASE("plateau dispersion selects a logistic curve") {
    const LogisticParams truth{1.5, -7.151, 4.0, 34.0};  // decreasing near 2.5, floor 4
    std::vector<SummaryRow> r;
    for (double d : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      r.push_back({d, 20.0 + 10.0 * d, eval(truth, d), 0.5 - 0.01 * (d - 2.0) * (d - 2.0), 10});
    }
    r[1].sd_hat = r[0].sd_hat + 0.05;  // a wiggle on the plateau
    // Mean must be sigmoid for the mean fit; bend it.
    for (auto& row : r) row.mean_hat = eval(LogisticParams{-1.2, -2.0, 10.0, 90.0}, row.dose);
    const ModelFit f = fit_model(r);
    CHECK(f.sigma_shape.family == SigmaFamily::logistic);
    CHECK(f.sigma_shape.d0_index == 1);
    const auto& ls = std::get<LogisticParams>(f.model.sigma_curve);
    CHECK(ls.m > 0.0);
    CHECK(ls.l1 >= 0.0);
  }
  CHECK_ERROR_CODE(fit_model(std::span(rows).first(2)), ErrorCode::TooFewPoints);
}
