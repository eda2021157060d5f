#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace priornet {

/// Concentration parameters of a Dirichlet distribution over the
/// (K-1)-simplex. Immutable after construction; every alpha_c must be a
/// finite positive real and K >= 2.
struct DirichletParams {
  std::vector<double> alpha;

  explicit DirichletParams(std::vector<double> concentrations);

  std::size_t size() const { return alpha.size(); }
  /// alpha0, the sum of the concentrations. Controls sharpness.
  double precision() const;
};

/// A categorical distribution over K classes: mu_c >= 0, sum mu_c = 1
/// within 1e-12.
struct Categorical {
  std::vector<double> mu;

  explicit Categorical(std::vector<double> probabilities);

  std::size_t size() const { return mu.size(); }
};

/// ln Dir(mu | alpha). Boundary convention: mu_c = 0 contributes 0 when
/// alpha_c = 1 and yields -infinity when alpha_c > 1; when alpha_c < 1 the
/// density diverges and a std::domain_error is thrown.
double log_pdf(const DirichletParams& d, const Categorical& mu);

/// Mean of the Dirichlet, mu_c = alpha_c / alpha0.
Categorical mean(const DirichletParams& d);

/// Differential entropy of the Dirichlet density, in nats:
///   sum_c ln Gamma(alpha_c) - ln Gamma(alpha0)
///   - sum_c (alpha_c - 1)(psi(alpha_c) - psi(alpha0))
double differential_entropy(const DirichletParams& d);

/// Expected entropy of a categorical drawn from the Dirichlet, in nats:
///   -sum_c (alpha_c/alpha0)(psi(alpha_c + 1) - psi(alpha0 + 1))
double expected_data_entropy(const DirichletParams& d);

/// Mutual information between the class label and the categorical, in nats:
///   -sum_c (alpha_c/alpha0)(ln(alpha_c/alpha0) - psi(alpha_c+1) + psi(alpha0+1))
/// Algebraically equals
/// categorical_entropy(mean(d)) - expected_data_entropy(d).
double mutual_information(const DirichletParams& d);

/// KL[Dir(p) || Dir(q)] in closed form, in nats. Dimensions must match.
double kl_divergence(const DirichletParams& p, const DirichletParams& q);

/// Shannon entropy -sum mu_c ln mu_c in nats, with 0 ln 0 := 0.
double categorical_entropy(const Categorical& mu);

/// Draw one categorical from Dir(alpha) via K independent Gamma(alpha_c, 1)
/// variates normalized by their sum.
Categorical sample(const DirichletParams& d, std::mt19937_64& rng);

}  // namespace priornet
