#pragma once

#include <optional>
#include <vector>

#include "priornet/dirichlet.hpp"

namespace priornet {

/// M categorical predictions from M stochastic forward passes of the same
/// network (MC dropout). All members share the class count; M >= 1.
struct EnsemblePrediction {
  std::vector<Categorical> members;

  explicit EnsemblePrediction(std::vector<Categorical> predictions);

  std::size_t size() const { return members.size(); }
  std::size_t num_classes() const { return members.front().size(); }
};

/// Uncertainty measures for one input. max_prob and entropy exist for every
/// prediction source; mutual_information only for ensembles and Dirichlet
/// outputs; differential_entropy only for Dirichlet outputs. Higher value
/// means more uncertain for every measure except max_prob, where lower
/// means more uncertain (the detection harness negates it).
struct UncertaintyScores {
  double max_prob = 0.0;
  double entropy = 0.0;
  std::optional<double> mutual_information;
  std::optional<double> differential_entropy;
};

/// Measures from a plain class posterior (DNN source).
UncertaintyScores scores_from_categorical(const Categorical& mu);

/// Measures from an MC-dropout ensemble: max_prob and entropy of the
/// member-wise mean, mutual information as mean entropy minus expected
/// member entropy (clamped at 0 against roundoff).
UncertaintyScores scores_from_ensemble(const EnsemblePrediction& ensemble);

/// All four measures from a Dirichlet output: max_prob/entropy of the mean,
/// plus closed-form mutual information and differential entropy.
UncertaintyScores scores_from_dirichlet(const DirichletParams& d);

}  // namespace priornet
