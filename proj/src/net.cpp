#include "priornet/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "priornet/errors.hpp"

namespace priornet {

namespace {

double activate(double v, Activation activation) {
  if (v > 0.0) return v;
  return activation == Activation::kRelu ? 0.0 : kLeakyReluSlope * v;
}

double activate_grad(double pre, Activation activation) {
  if (pre > 0.0) return 1.0;
  return activation == Activation::kRelu ? 0.0 : kLeakyReluSlope;
}

void check_input_dim(const Mlp& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw std::invalid_argument("forward: input has " + std::to_string(x.size()) +
                                " features, network expects " + std::to_string(net.input_dim()));
  }
}

}  // namespace

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  throw std::invalid_argument("unknown activation: " + name);
}

std::string activation_name(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "leaky_relu";
}

void Mlp::validate() const {
  if (layers.empty()) {
    throw std::invalid_argument("Mlp: need at least one layer");
  }
  if (output_dim() < 2) {
    throw std::invalid_argument("Mlp: output dimension must be >= 2");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& layer = layers[i];
    if (layer.weights.size() != layer.input_dim * layer.output_dim ||
        layer.bias.size() != layer.output_dim) {
      throw std::invalid_argument("Mlp: layer " + std::to_string(i) + " has inconsistent shapes");
    }
    if (layer.keep_prob <= 0.0 || layer.keep_prob > 1.0) {
      throw std::invalid_argument("Mlp: keep_prob must lie in (0, 1]");
    }
    if (i > 0 && layers[i - 1].output_dim != layer.input_dim) {
      throw std::invalid_argument("Mlp: layer " + std::to_string(i) +
                                  " input does not chain with previous output");
    }
  }
}

Mlp make_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
             std::size_t num_classes, Activation activation, double hidden_keep_prob,
             std::uint64_t seed) {
  Mlp net;
  net.activation = activation;
  std::mt19937_64 rng(seed);
  std::size_t fan_in = input_dim;
  std::vector<std::size_t> dims = hidden_dims;
  dims.push_back(num_classes);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    DenseLayer layer;
    layer.input_dim = fan_in;
    layer.output_dim = dims[i];
    // Hidden activations are dropped; the raw input vector is not.
    layer.keep_prob = (i == 0) ? 1.0 : hidden_keep_prob;
    std::normal_distribution<double> init(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
    layer.weights.resize(fan_in * dims[i]);
    for (double& w : layer.weights) w = init(rng);
    layer.bias.assign(dims[i], 0.0);
    net.layers.push_back(std::move(layer));
    fan_in = dims[i];
  }
  net.validate();
  return net;
}

std::vector<double> forward(const Mlp& net, std::span<const double> x, ForwardTrace* trace) {
  return forward_masked(net, x, DropoutMasks{}, trace);
}

DropoutMasks sample_dropout_masks(const Mlp& net, std::mt19937_64& rng) {
  DropoutMasks masks;
  masks.scales.resize(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const DenseLayer& layer = net.layers[i];
    if (layer.keep_prob >= 1.0) continue;
    std::bernoulli_distribution keep(layer.keep_prob);
    std::vector<double>& scale = masks.scales[i];
    scale.resize(layer.input_dim);
    for (double& s : scale) {
      s = keep(rng) ? 1.0 / layer.keep_prob : 0.0;
    }
  }
  return masks;
}

std::vector<double> forward_masked(const Mlp& net, std::span<const double> x,
                                   const DropoutMasks& masks, ForwardTrace* trace) {
  check_input_dim(net, x);
  if (trace) {
    trace->layer_inputs.assign(net.layers.size(), {});
    trace->pre_activations.assign(net.layers.size(), {});
    trace->masks = masks;
  }

  std::vector<double> current(x.begin(), x.end());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const DenseLayer& layer = net.layers[i];
    if (i < masks.scales.size() && !masks.scales[i].empty()) {
      const std::vector<double>& scale = masks.scales[i];
      if (scale.size() != layer.input_dim) {
        throw std::invalid_argument("forward_masked: mask size does not match layer input");
      }
      for (std::size_t j = 0; j < current.size(); ++j) current[j] *= scale[j];
    }
    if (trace) trace->layer_inputs[i] = current;

    std::vector<double> pre(layer.output_dim);
    for (std::size_t r = 0; r < layer.output_dim; ++r) {
      double acc = layer.bias[r];
      const double* row = layer.weights.data() + r * layer.input_dim;
      for (std::size_t c = 0; c < layer.input_dim; ++c) acc += row[c] * current[c];
      pre[r] = acc;
    }
    if (trace) trace->pre_activations[i] = pre;

    if (i + 1 == net.layers.size()) {
      current = std::move(pre);
    } else {
      current.resize(layer.output_dim);
      for (std::size_t r = 0; r < layer.output_dim; ++r) {
        current[r] = activate(pre[r], net.activation);
      }
    }
  }
  return current;
}

std::vector<double> forward_stochastic(const Mlp& net, std::span<const double> x,
                                       std::mt19937_64& rng, ForwardTrace* trace) {
  return forward_masked(net, x, sample_dropout_masks(net, rng), trace);
}

MlpGradients MlpGradients::zeros_like(const Mlp& net) {
  MlpGradients g;
  g.weights.reserve(net.layers.size());
  g.bias.reserve(net.layers.size());
  for (const DenseLayer& layer : net.layers) {
    g.weights.emplace_back(layer.weights.size(), 0.0);
    g.bias.emplace_back(layer.bias.size(), 0.0);
  }
  return g;
}

void MlpGradients::add_scaled(const MlpGradients& other, double factor) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = 0; j < weights[i].size(); ++j) weights[i][j] += factor * other.weights[i][j];
    for (std::size_t j = 0; j < bias[i].size(); ++j) bias[i][j] += factor * other.bias[i][j];
  }
}

void MlpGradients::scale(double factor) {
  for (auto& w : weights)
    for (double& v : w) v *= factor;
  for (auto& b : bias)
    for (double& v : b) v *= factor;
}

MlpGradients backward(const Mlp& net, const ForwardTrace& trace, std::span<const double> grad_z) {
  if (trace.layer_inputs.size() != net.layers.size() ||
      trace.pre_activations.size() != net.layers.size()) {
    throw std::invalid_argument("backward: trace does not match network depth");
  }
  if (grad_z.size() != net.output_dim()) {
    throw std::invalid_argument("backward: grad_z dimension mismatch");
  }
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    if (trace.layer_inputs[i].size() != net.layers[i].input_dim ||
        trace.pre_activations[i].size() != net.layers[i].output_dim) {
      throw std::invalid_argument("backward: trace layer " + std::to_string(i) +
                                  " does not match network shapes");
    }
  }

  MlpGradients grads = MlpGradients::zeros_like(net);
  std::vector<double> grad_pre(grad_z.begin(), grad_z.end());

  for (std::size_t i = net.layers.size(); i-- > 0;) {
    const DenseLayer& layer = net.layers[i];
    const std::vector<double>& input = trace.layer_inputs[i];

    for (std::size_t r = 0; r < layer.output_dim; ++r) {
      grads.bias[i][r] = grad_pre[r];
      double* wrow = grads.weights[i].data() + r * layer.input_dim;
      for (std::size_t c = 0; c < layer.input_dim; ++c) wrow[c] = grad_pre[r] * input[c];
    }
    if (i == 0) break;

    std::vector<double> grad_input(layer.input_dim, 0.0);
    for (std::size_t r = 0; r < layer.output_dim; ++r) {
      const double* row = layer.weights.data() + r * layer.input_dim;
      for (std::size_t c = 0; c < layer.input_dim; ++c) grad_input[c] += grad_pre[r] * row[c];
    }
    if (i < trace.masks.scales.size() && !trace.masks.scales[i].empty()) {
      for (std::size_t c = 0; c < grad_input.size(); ++c) {
        grad_input[c] *= trace.masks.scales[i][c];
      }
    }
    const std::vector<double>& prev_pre = trace.pre_activations[i - 1];
    grad_pre.assign(prev_pre.size(), 0.0);
    for (std::size_t c = 0; c < prev_pre.size(); ++c) {
      grad_pre[c] = grad_input[c] * activate_grad(prev_pre[c], net.activation);
    }
  }
  return grads;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double max_z = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out[c] = std::exp(logits[c] - max_z);
    sum += out[c];
  }
  for (double& v : out) v /= sum;
  return out;
}

DirichletParams to_dirichlet(std::span<const double> logits) {
  std::vector<double> alpha(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) {
    alpha[c] = std::exp(std::clamp(logits[c], -kLogitClamp, kLogitClamp));
  }
  return DirichletParams(std::move(alpha));
}

EnsemblePrediction mc_dropout_predict(const Mlp& net, std::span<const double> x, std::size_t count,
                                      std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("mc_dropout_predict: need at least one pass");
  }
  std::mt19937_64 rng(seed);
  std::vector<Categorical> members;
  members.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::vector<double> z = forward_stochastic(net, x, rng);
    members.emplace_back(softmax(z));
  }
  return EnsemblePrediction(std::move(members));
}

void save_checkpoint(const Mlp& net, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = "priornet-checkpoint";
  doc["version"] = 1;
  doc["activation"] = activation_name(net.activation);
  doc["input_dim"] = net.input_dim();
  doc["output_dim"] = net.output_dim();
  nlohmann::json layers = nlohmann::json::array();
  for (const DenseLayer& layer : net.layers) {
    nlohmann::json l;
    l["input_dim"] = layer.input_dim;
    l["output_dim"] = layer.output_dim;
    l["keep_prob"] = layer.keep_prob;
    l["weights"] = layer.weights;
    l["bias"] = layer.bias;
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write checkpoint: " + path.string());
  }
  out << doc.dump(2) << '\n';
}

Mlp load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read checkpoint: " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("checkpoint is not valid JSON: " + std::string(e.what()), 1, e.byte);
  }
  try {
    if (doc.at("format").get<std::string>() != "priornet-checkpoint") {
      throw ParseError("not a priornet checkpoint", 1, 1);
    }
    Mlp net;
    net.activation = activation_from_name(doc.at("activation").get<std::string>());
    for (const nlohmann::json& l : doc.at("layers")) {
      DenseLayer layer;
      layer.input_dim = l.at("input_dim").get<std::size_t>();
      layer.output_dim = l.at("output_dim").get<std::size_t>();
      layer.keep_prob = l.at("keep_prob").get<double>();
      layer.weights = l.at("weights").get<std::vector<double>>();
      layer.bias = l.at("bias").get<std::vector<double>>();
      net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed checkpoint: " + std::string(e.what()), 1, 1);
  } catch (const std::invalid_argument& e) {
    throw ParseError("malformed checkpoint: " + std::string(e.what()), 1, 1);
  }
}

}  // namespace priornet
