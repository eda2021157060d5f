#include "priornet/dirichlet.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "priornet/special.hpp"

namespace priornet {

namespace {

constexpr double kSimplexSumTolerance = 1e-12;

void check_same_dimension(const DirichletParams& p, const DirichletParams& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("Dirichlet dimension mismatch: " + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()));
  }
}

}  // namespace

DirichletParams::DirichletParams(std::vector<double> concentrations)
    : alpha(std::move(concentrations)) {
  if (alpha.size() < 2) {
    throw std::invalid_argument("DirichletParams: need at least 2 concentrations");
  }
  double sum = 0.0;
  for (double a : alpha) {
    if (!std::isfinite(a) || a <= 0.0) {
      throw std::invalid_argument("DirichletParams: every concentration must be finite and > 0");
    }
    sum += a;
  }
  if (!std::isfinite(sum)) {
    throw std::invalid_argument("DirichletParams: precision overflows");
  }
}

double DirichletParams::precision() const {
  double sum = 0.0;
  for (double a : alpha) sum += a;
  return sum;
}

Categorical::Categorical(std::vector<double> probabilities) : mu(std::move(probabilities)) {
  if (mu.size() < 2) {
    throw std::invalid_argument("Categorical: need at least 2 classes");
  }
  double sum = 0.0;
  for (double p : mu) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("Categorical: probabilities must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
    throw std::invalid_argument("Categorical: probabilities sum to " + std::to_string(sum) +
                                ", expected 1");
  }
}

double log_pdf(const DirichletParams& d, const Categorical& mu) {
  if (d.size() != mu.size()) {
    throw std::invalid_argument("log_pdf: dimension mismatch: " + std::to_string(d.size()) +
                                " vs " + std::to_string(mu.size()));
  }
  double result = ln_gamma(d.precision());
  for (std::size_t c = 0; c < d.size(); ++c) {
    result -= ln_gamma(d.alpha[c]);
    const double m = mu.mu[c];
    if (m == 0.0) {
      if (d.alpha[c] < 1.0) {
        throw std::domain_error("log_pdf: density diverges at mu_c = 0 with alpha_c < 1");
      }
      if (d.alpha[c] > 1.0) {
        return -std::numeric_limits<double>::infinity();
      }
      // alpha_c == 1: (alpha_c - 1) ln mu_c -> 0
      continue;
    }
    result += (d.alpha[c] - 1.0) * std::log(m);
  }
  return result;
}

Categorical mean(const DirichletParams& d) {
  const double alpha0 = d.precision();
  std::vector<double> mu(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) mu[c] = d.alpha[c] / alpha0;
  return Categorical(std::move(mu));
}

double differential_entropy(const DirichletParams& d) {
  const double alpha0 = d.precision();
  const double psi0 = digamma(alpha0);
  double result = -ln_gamma(alpha0);
  for (double a : d.alpha) {
    result += ln_gamma(a) - (a - 1.0) * (digamma(a) - psi0);
  }
  return result;
}

double expected_data_entropy(const DirichletParams& d) {
  const double alpha0 = d.precision();
  const double psi0 = digamma(alpha0 + 1.0);
  double result = 0.0;
  for (double a : d.alpha) {
    result -= (a / alpha0) * (digamma(a + 1.0) - psi0);
  }
  return result;
}

double mutual_information(const DirichletParams& d) {
  const double alpha0 = d.precision();
  const double psi0 = digamma(alpha0 + 1.0);
  double result = 0.0;
  for (double a : d.alpha) {
    const double ratio = a / alpha0;
    result -= ratio * (std::log(ratio) - digamma(a + 1.0) + psi0);
  }
  return result;
}

double kl_divergence(const DirichletParams& p, const DirichletParams& q) {
  check_same_dimension(p, q);
  const double alpha0 = p.precision();
  const double beta0 = q.precision();
  const double psi0 = digamma(alpha0);
  double result = ln_gamma(alpha0) - ln_gamma(beta0);
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double a = p.alpha[c];
    const double b = q.alpha[c];
    result += ln_gamma(b) - ln_gamma(a) + (a - b) * (digamma(a) - psi0);
  }
  return result;
}

double categorical_entropy(const Categorical& mu) {
  double h = 0.0;
  for (double p : mu.mu) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

Categorical sample(const DirichletParams& d, std::mt19937_64& rng) {
  std::vector<double> draws(d.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    std::gamma_distribution<double> gamma(d.alpha[c], 1.0);
    draws[c] = gamma(rng);
    sum += draws[c];
  }
  for (double& v : draws) v /= sum;
  return Categorical(std::move(draws));
}

}  // namespace priornet
