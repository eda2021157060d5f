#include "priornet/measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace priornet {

EnsemblePrediction::EnsemblePrediction(std::vector<Categorical> predictions)
    : members(std::move(predictions)) {
  if (members.empty()) {
    throw std::invalid_argument("EnsemblePrediction: need at least one member");
  }
  const std::size_t k = members.front().size();
  for (const Categorical& m : members) {
    if (m.size() != k) {
      throw std::invalid_argument("EnsemblePrediction: members disagree on class count");
    }
  }
}

UncertaintyScores scores_from_categorical(const Categorical& mu) {
  UncertaintyScores s;
  s.max_prob = *std::max_element(mu.mu.begin(), mu.mu.end());
  s.entropy = categorical_entropy(mu);
  return s;
}

UncertaintyScores scores_from_ensemble(const EnsemblePrediction& ensemble) {
  const std::size_t k = ensemble.num_classes();
  // Running means keep identical members bit-exact: the increment is zero
  // whenever a member equals the mean so far.
  std::vector<double> mean_mu(k, 0.0);
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Categorical& member = ensemble.members[i];
    const double inv = 1.0 / static_cast<double>(i + 1);
    for (std::size_t c = 0; c < k; ++c) {
      mean_mu[c] += (member.mu[c] - mean_mu[c]) * inv;
    }
    mean_entropy += (categorical_entropy(member) - mean_entropy) * inv;
  }

  const Categorical predictive(std::move(mean_mu));
  UncertaintyScores s = scores_from_categorical(predictive);
  s.mutual_information = std::max(0.0, s.entropy - mean_entropy);
  return s;
}

UncertaintyScores scores_from_dirichlet(const DirichletParams& d) {
  UncertaintyScores s = scores_from_categorical(mean(d));
  s.mutual_information = mutual_information(d);
  s.differential_entropy = differential_entropy(d);
  return s;
}

}  // namespace priornet
