#include <cmath>
#include <random>

#include "doctest.h"
#include "doseeffect/logistic.hpp"
#include "test_support.hpp"

using namespace doseeffect;
using doseeffect::testing::close_rel;

namespace {

// Mean escape-time curve as printed: l1 = 21.8153, (l2 - l1)^-1 = 0.0116.
const LogisticParams kEscapeMean{-0.8278, -2.5929, 21.8153, 21.8153 + 1.0 / 0.0116};

LogisticParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double sign = u(rng) < 0.5 ? -1.0 : 1.0;
  const double l1 = -50 + 100 * u(rng);
  return {sign * (0.1 + 2.9 * u(rng)), -3 + 6 * u(rng), l1, l1 + 0.5 + 100 * u(rng)};
}

}  // namespace

TEST_CASE("eval") {
  // Close to the observed means 33.3875 and 78.225.
  CHECK(eval(kEscapeMean, 0.0) == doctest::Approx(33.38899938578726).epsilon(1e-13));
  CHECK(eval(kEscapeMean, 3.0) == doctest::Approx(77.85979612419615).epsilon(1e-13));

  SUBCASE("range and saturation") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
      const LogisticParams p = random_params(rng);
      for (double x = -5; x <= 5; x += 0.5) {
        const double y = eval(p, x);
        CHECK(y > p.l1);
        CHECK(y < p.l2);
      }
    }
    const LogisticParams unit{-1, 0, 0, 1};
    CHECK(eval(unit, -1e6) == 0.0);
    CHECK(eval(unit, 1e6) == 1.0);
    CHECK(std::isfinite(eval_derivative(unit, -1e6)));
  }
  SUBCASE("monotone in the direction set by m") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 50; ++k) {
      const LogisticParams p = random_params(rng);
      double prev = eval(p, -4.0);
      for (int i = 1; i < 100; ++i) {
        const double y = eval(p, -4.0 + 8.0 * i / 99);
        if (p.m < 0) CHECK(y > prev);
        else CHECK(y < prev);
        prev = y;
      }
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_ERROR_CODE(eval({0, 0, 0, 1}, 0), ErrorCode::InvalidArgument);
    CHECK_ERROR_CODE(eval({-1, 0, 1, 1}, 0), ErrorCode::InvalidArgument);
  }
}

TEST_CASE("eval_derivative") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const LogisticParams p = random_params(rng);
    for (double x : {-2.0, -0.3, 0.0, 1.1, 2.5}) {
      const double d = eval_derivative(p, x);
      CHECK(std::signbit(d) == (p.m > 0));
      const double h = 1e-5;
      const double fd = (eval(p, x + h) - eval(p, x - h)) / (2 * h);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("inflection") {
  // The printed coefficients are rounded to 4 decimals, which moves theta
  // off the fitted 2.25 by about 1.6e-3.
  CHECK(inflection(kEscapeMean).theta == doctest::Approx(2.251570646134112).epsilon(1e-13));
  LogisticParams rounded_l2 = kEscapeMean;
  rounded_l2.l2 = 107.9097;
  CHECK(std::abs(inflection(rounded_l2).theta - 2.25) < 1e-3);

  const InflectionData unit = inflection({-1, 0, 0, 1});
  CHECK(unit.theta == 0.0);
  CHECK(unit.f_theta == 0.5);

  SUBCASE("identities and sign change of the curvature") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 100; ++k) {
      const LogisticParams p = random_params(rng);
      const InflectionData i = inflection(p);
      CHECK(close_rel(eval(p, i.theta), 0.5 * (p.l1 + p.l2), 1e-12));
      CHECK(close_rel(eval_derivative(p, i.theta), -p.m * (p.l2 - p.l1) / 4, 1e-12));
      CHECK(std::abs(i.f_theta - eval(p, i.theta)) <= 1e-12 * std::max(1.0, std::abs(i.f_theta)));
      const double step = 0.1 / std::abs(p.m);
      CHECK(std::signbit(eval_second_derivative(p, i.theta - step)) !=
            std::signbit(eval_second_derivative(p, i.theta + step)));
    }
  }
}

TEST_CASE("limits") {
  const auto [lo, hi] = limits(kEscapeMean);
  CHECK(lo == kEscapeMean.l1);
  CHECK(hi == kEscapeMean.l2);

  const LogisticParams dec{1, 0.3, 2, 5};
  CHECK(limits(dec) == std::pair{5.0, 2.0});
  for (const auto& p : {kEscapeMean, dec}) {
    const auto [at_minus, at_plus] = limits(p);
    CHECK(std::abs(eval(p, -50 / std::abs(p.m)) - at_minus) < 1e-6);
    CHECK(std::abs(eval(p, 50 / std::abs(p.m)) - at_plus) < 1e-6);
  }
}

TEST_CASE("params_from_inflection") {
  SUBCASE("escape-time inflection data") {
    const double l2 = 2 * 64.8625 - 21.8153;
    const LogisticParams p =
        params_from_inflection(21.8153, 33.3875, {2.25, 64.8625, 17.816666666666666});
    CHECK(p.m == doctest::Approx(-0.8278).epsilon(1e-4));
    CHECK(p.p == doctest::Approx(-2.5929).epsilon(1e-4));
    CHECK(p.l2 == doctest::Approx(l2).epsilon(1e-15));
    CHECK(p.l2 == doctest::Approx(107.9097).epsilon(1e-7));
  }
  SUBCASE("round trip is the identity") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
      const LogisticParams p = random_params(rng);
      const LogisticParams back = params_from_inflection(p.l1, eval(p, 0.0), inflection(p));
      CHECK(close_rel(back.m, p.m, 1e-12));
      CHECK(std::abs(back.p - p.p) <= 1e-12 * std::max(1.0, std::abs(p.p)));
      CHECK(close_rel(back.l2, p.l2, 1e-12));
      CHECK(back.l1 == p.l1);
    }
  }
  SUBCASE("inconsistent geometry") {
    const InflectionData inf{2.25, 64.8625, 17.8167};
    CHECK_ERROR_CODE(params_from_inflection(21.8153, 2 * 64.8625 - 21.8153 + 0.1, inf),
                     ErrorCode::DomainError);
    CHECK_ERROR_CODE(params_from_inflection(40.0, 33.0, inf), ErrorCode::DomainError);
  }
}

TEST_CASE("l1_residual") {
  SUBCASE("vanishes at the true asymptote") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 100; ++k) {
      const LogisticParams p = random_params(rng);
      CHECK(std::abs(l1_residual(p.l1, eval(p, 0.0), inflection(p))) < 1e-11);
    }
  }
  SUBCASE("escape-time data") {
    const InflectionData inf{2.25, 64.8625, 17.816666666666666};
    CHECK(std::abs(l1_residual(21.8153, 33.3875, inf)) < 1e-3);
    // Continuous approaching from above: nearby candidates give nearby residuals.
    const double r0 = l1_residual(21.8153, 33.3875, inf);
    CHECK(std::abs(l1_residual(21.8153 + 1e-9, 33.3875, inf) - r0) < 1e-6);
  }
  CHECK_ERROR_CODE(l1_residual(40.0, 33.0, {1, 50, 1}), ErrorCode::DomainError);
}

TEST_CASE("ode_residual") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(-10, 10);
  for (int k = 0; k < 100; ++k) {
    const LogisticParams p = random_params(rng);
    CHECK(ode_residual(p, 0.0) == 0.0);
    CHECK(ode_residual(p, ux(rng)) <= 1e-6);
  }
  CHECK(ode_residual({-1, 0, 0, 1}, 5.0) <= 1e-8);
  CHECK(ode_residual({-1, 0, 0, 1}, -5.0) <= 1e-8);
}
