#include "priornet/special.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "helpers.hpp"

using priornet::digamma;
using priornet::ln_gamma;

namespace {
constexpr double kEulerMascheroni = 0.57721566490153286061;
}

TEST_CASE("ln_gamma known values") {
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(0).scale(1e-15));
  CHECK(ln_gamma(2.0) == doctest::Approx(0.0).epsilon(0).scale(1e-15));
  CHECK(ln_gamma(6.0) == doctest::Approx(std::log(120.0)).epsilon(1e-14));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-14));
}

TEST_CASE("digamma known values") {
  CHECK(digamma(1.0) == doctest::Approx(-kEulerMascheroni).epsilon(1e-13));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerMascheroni).epsilon(1e-13));
  // Cross-check by finite differences of ln_gamma.
  const double fd = testutil::central_diff([](double x) { return ln_gamma(x); }, 10.5, 1e-5);
  CHECK(digamma(10.5) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("ln_gamma agrees with std::lgamma over the working range") {
  // std::lgamma is an independent implementation; compare in ulp-aware
  // terms since |ln Gamma| grows to ~1.3e7 at the top of the range.
  for (double x : {1e-3, 1e-2, 0.1, 0.5, 1.5, 3.0, 9.99, 10.01, 123.456, 1e4, 1e6}) {
    const double mine = ln_gamma(x);
    const double ref = std::lgamma(x);
    const double tol = 1e-12 + 4e-15 * std::abs(ref);
    CHECK(std::abs(mine - ref) <= tol);
  }
}

TEST_CASE("digamma absolute accuracy against recurrence") {
  // psi(x+1) = psi(x) + 1/x, exercised across the full working range.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e6));
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(u(rng));
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-9);
  }
}

TEST_CASE("digamma matches finite differences of ln_gamma") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(std::log(0.5), std::log(1e4));
  for (int i = 0; i < 500; ++i) {
    const double x = std::exp(u(rng));
    const double fd = testutil::central_diff([](double v) { return ln_gamma(v); }, x, 1e-5);
    CHECK(std::abs(digamma(x) - fd) <= 1e-5);
  }
}

TEST_CASE("ln_gamma is convex on sampled grids") {
  for (double lo : {0.01, 1.0, 100.0}) {
    const double h = lo * 0.05;
    for (int i = 1; i < 200; ++i) {
      const double x = lo + i * h;
      const double second = ln_gamma(x - h) + ln_gamma(x + h) - 2.0 * ln_gamma(x);
      CHECK(second >= -1e-9);
    }
  }
}

TEST_CASE("domain errors for invalid arguments") {
  CHECK_THROWS_AS(ln_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(ln_gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(ln_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(ln_gamma(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-0.25), std::domain_error);
  CHECK_THROWS_AS(digamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(digamma(std::numeric_limits<double>::infinity()), std::domain_error);
}
