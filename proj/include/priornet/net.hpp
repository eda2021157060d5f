#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "priornet/dirichlet.hpp"
#include "priornet/measures.hpp"

namespace priornet {

enum class Activation { kRelu, kLeakyRelu };

constexpr double kLeakyReluSlope = 0.01;

/// Logits are clamped to [-kLogitClamp, kLogitClamp] before exponentiation,
/// bounding the concentrations to about [9.4e-14, 1.1e13]. The clamp
/// saturates: its gradient is zero outside the linear region.
constexpr double kLogitClamp = 30.0;

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation activation);

/// One fully-connected layer. Weights are row-major (output_dim x
/// input_dim). keep_prob is the dropout keep probability applied to this
/// layer's input vector; 1.0 disables dropout for the layer.
struct DenseLayer {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  double keep_prob = 1.0;

  double weight(std::size_t row, std::size_t col) const { return weights[row * input_dim + col]; }
  double& weight(std::size_t row, std::size_t col) { return weights[row * input_dim + col]; }
};

/// Feed-forward classifier. The activation is applied after every layer
/// except the last; the final layer emits raw logits. Immutable during
/// inference; the training loop is the single writer.
struct Mlp {
  std::vector<DenseLayer> layers;
  Activation activation = Activation::kRelu;

  std::size_t input_dim() const { return layers.front().input_dim; }
  std::size_t output_dim() const { return layers.back().output_dim; }

  /// Validates dimension chaining and keep probabilities; throws
  /// std::invalid_argument on violation.
  void validate() const;
};

/// Builds an MLP with He-style fan-in initialization. hidden_keep_prob is
/// the dropout keep probability on every hidden activation (the input
/// layer itself is never dropped).
Mlp make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
             std::size_t num_classes, Activation activation, double hidden_keep_prob,
             std::uint64_t seed);

/// Per-layer dropout scale vectors: each entry is 0 (dropped) or 1/keep_prob
/// (kept, inverted-dropout scaling). An empty vector means the identity mask.
struct DropoutMasks {
  std::vector<std::vector<double>> scales;
};

/// Everything backward() needs: the post-dropout input of every layer, each
/// layer's pre-activation vector, and the masks that were applied.
struct ForwardTrace {
  std::vector<std::vector<double>> layer_inputs;
  std::vector<std::vector<double>> pre_activations;
  DropoutMasks masks;
};

/// Deterministic forward pass (no dropout; inverted-dropout training needs
/// no inference-time rescaling).
std::vector<double> forward(const Mlp& net, std::span<const double> x,
                            ForwardTrace* trace = nullptr);

/// Samples Bernoulli(keep_prob) masks for every layer with keep_prob < 1.
DropoutMasks sample_dropout_masks(const Mlp& net, std::mt19937_64& rng);

/// Forward pass with the given fixed masks (used by training and by
/// finite-difference gradient checks, which must replay identical masks).
std::vector<double> forward_masked(const Mlp& net, std::span<const double> x,
                                   const DropoutMasks& masks, ForwardTrace* trace = nullptr);

/// Stochastic forward pass: fresh masks from rng, then forward_masked.
std::vector<double> forward_stochastic(const Mlp& net, std::span<const double> x,
                                       std::mt19937_64& rng, ForwardTrace* trace = nullptr);

/// Gradients with the same shape as the network parameters.
struct MlpGradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;

  static MlpGradients zeros_like(const Mlp& net);
  void add_scaled(const MlpGradients& other, double factor);
  void scale(double factor);
};

/// Exact reverse-mode gradients of every weight and bias given dL/dz,
/// respecting the dropout masks recorded in the trace. Throws
/// std::invalid_argument if the trace does not match the network topology.
MlpGradients backward(const Mlp& net, const ForwardTrace& trace, std::span<const double> grad_z);

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Dirichlet concentrations alpha_c = exp(clamp(z_c)); the mean of the
/// result equals softmax(z) up to clamping.
DirichletParams to_dirichlet(std::span<const double> logits);

/// M stochastic forward passes converted to categoricals via softmax.
/// Deterministic for a fixed seed. Layers with keep_prob = 1 consume no
/// randomness, so a dropout-free network yields M identical members.
EnsemblePrediction mc_dropout_predict(const Mlp& net, std::span<const double> x, std::size_t count,
                                      std::uint64_t seed);

/// Self-describing JSON checkpoint: topology, activation, keep
/// probabilities, and row-major weight/bias arrays at full double
/// precision.
void save_checkpoint(const Mlp& net, const std::filesystem::path& path);
Mlp load_checkpoint(const std::filesystem::path& path);

}  // namespace priornet
