#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

// Central finite difference at step h.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and its standard error.
inline MeanAndError mean_and_error(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Random concentrations alpha_c ~ exp(U[lo, hi]).
inline std::vector<double> random_alpha(std::size_t k, std::mt19937_64& rng, double lo = -3.0,
                                        double hi = 6.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> alpha(k);
  for (double& a : alpha) a = std::exp(u(rng));
  return alpha;
}

// Random point on the simplex interior (normalized uniforms).
inline std::vector<double> random_simplex_point(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> mu(k);
  double sum = 0.0;
  for (double& m : mu) {
    m = u(rng);
    sum += m;
  }
  for (double& m : mu) m /= sum;
  return mu;
}

}  // namespace testutil
