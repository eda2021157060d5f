#include "priornet/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace priornet {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // ln(2*pi)/2

// Both series are applied only for x >= kSeriesThreshold, where the last
// retained term is already below 1e-15.
constexpr double kSeriesThreshold = 10.0;

void check_domain(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(std::string(name) + ": argument must be a finite positive real, got " +
                            std::to_string(x));
  }
}

}  // namespace

double ln_gamma(double x) {
  check_domain(x, "ln_gamma");
  double shift = 0.0;
  while (x < kSeriesThreshold) {
    shift -= std::log(x);
    x += 1.0;
  }
  // Stirling series with Bernoulli-number coefficients B_2..B_16.
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r * (1.0 / 12.0 +
           r2 * (-1.0 / 360.0 +
                 r2 * (1.0 / 1260.0 +
                       r2 * (-1.0 / 1680.0 +
                             r2 * (1.0 / 1188.0 +
                                   r2 * (-691.0 / 360360.0 +
                                         r2 * (1.0 / 156.0 + r2 * (-3617.0 / 122400.0))))))));
  return shift + (x - 0.5) * std::log(x) - x + kHalfLogTwoPi + series;
}

double digamma(double x) {
  check_domain(x, "digamma");
  double shift = 0.0;
  while (x < kSeriesThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum_n B_2n / (2n x^2n)
  const double r2 = 1.0 / (x * x);
  const double series =
      r2 * (-1.0 / 12.0 +
            r2 * (1.0 / 120.0 +
                  r2 * (-1.0 / 252.0 +
                        r2 * (1.0 / 240.0 +
                              r2 * (-1.0 / 132.0 +
                                    r2 * (691.0 / 32760.0 + r2 * (-1.0 / 12.0)))))));
  return shift + std::log(x) - 0.5 / x + series;
}

}  // namespace priornet
