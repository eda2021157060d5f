#include "priornet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "priornet/errors.hpp"
#include "priornet/special.hpp"

namespace priornet {

TargetSpec::TargetSpec(double alpha0, double epsilon, std::size_t k)
    : target_precision(alpha0), smoothing(epsilon), num_classes(k) {
  if (k < 2) {
    throw std::invalid_argument("TargetSpec: need at least 2 classes");
  }
  const double on_class = 1.0 - static_cast<double>(k - 1) * epsilon;
  if (!(epsilon > 0.0) || !(on_class > epsilon)) {
    throw std::invalid_argument("TargetSpec: smoothing must satisfy 0 < eps and 1-(K-1)eps > eps");
  }
  if (!(alpha0 > static_cast<double>(k))) {
    throw std::invalid_argument("TargetSpec: target precision must exceed K");
  }
}

DirichletParams target_dirichlet_in(std::size_t label, const TargetSpec& spec) {
  if (label >= spec.num_classes) {
    throw std::invalid_argument("target_dirichlet_in: label out of range");
  }
  const double k = static_cast<double>(spec.num_classes);
  std::vector<double> alpha(spec.num_classes, spec.target_precision * spec.smoothing);
  alpha[label] = spec.target_precision * (1.0 - (k - 1.0) * spec.smoothing);
  return DirichletParams(std::move(alpha));
}

DirichletParams target_dirichlet_out(std::size_t num_classes) {
  if (num_classes < 2) {
    throw std::invalid_argument("target_dirichlet_out: need at least 2 classes");
  }
  return DirichletParams(std::vector<double>(num_classes, 1.0));
}

LossGrad dpn_loss_and_grad(std::span<const double> z, const DirichletParams& target) {
  if (z.size() != target.size()) {
    throw std::invalid_argument("dpn_loss_and_grad: dimension mismatch");
  }
  const DirichletParams model = to_dirichlet(z);
  LossGrad out;
  out.loss = kl_divergence(target, model);
  out.grad_z.resize(z.size());
  const double beta0 = model.precision();
  const double psi_beta0 = digamma(beta0);
  const double psi_target0 = digamma(target.precision());
  for (std::size_t c = 0; c < z.size(); ++c) {
    if (std::abs(z[c]) >= kLogitClamp) {
      out.grad_z[c] = 0.0;  // clamp saturated
      continue;
    }
    const double dl_dbeta =
        digamma(model.alpha[c]) - psi_beta0 - (digamma(target.alpha[c]) - psi_target0);
    out.grad_z[c] = model.alpha[c] * dl_dbeta;
  }
  return out;
}

LossGrad ce_loss_and_grad(std::span<const double> z, std::size_t label) {
  if (label >= z.size()) {
    throw std::invalid_argument("ce_loss_and_grad: label out of range");
  }
  std::vector<double> probs = softmax(z);
  LossGrad out;
  out.loss = -std::log(probs[label]);
  out.grad_z = std::move(probs);
  out.grad_z[label] -= 1.0;
  return out;
}

LrSchedule LrSchedule::constant(double lr, double total_epochs) {
  if (lr < 0.0) {
    throw std::invalid_argument("LrSchedule: learning rate must be >= 0");
  }
  LrSchedule s;
  s.variant = LrVariant::kConstant;
  s.initial_lr = lr;
  s.total_epochs = total_epochs;
  return s;
}

LrSchedule LrSchedule::exponential_decay(double lr, double rate_per_epoch, double total_epochs) {
  if (!(lr > 0.0) || !(rate_per_epoch > 0.0)) {
    throw std::invalid_argument("LrSchedule: lr and decay rate must be > 0");
  }
  LrSchedule s;
  s.variant = LrVariant::kExponentialDecay;
  s.initial_lr = lr;
  s.decay_rate = rate_per_epoch;
  s.total_epochs = total_epochs;
  return s;
}

LrSchedule LrSchedule::one_cycle(double lr, double cycle_epochs, double total_epochs) {
  if (!(lr > 0.0)) {
    throw std::invalid_argument("LrSchedule: lr must be > 0");
  }
  if (!(cycle_epochs > 0.0) || cycle_epochs > total_epochs) {
    throw std::invalid_argument("LrSchedule: need 0 < cycle length <= total epochs");
  }
  LrSchedule s;
  s.variant = LrVariant::kOneCycle;
  s.initial_lr = lr;
  s.cycle_epochs = cycle_epochs;
  s.total_epochs = total_epochs;
  return s;
}

double lr_at(const LrSchedule& schedule, double epoch) {
  if (epoch < 0.0 || epoch > schedule.total_epochs) {
    throw std::out_of_range("lr_at: epoch " + std::to_string(epoch) + " outside [0, " +
                            std::to_string(schedule.total_epochs) + "]");
  }
  switch (schedule.variant) {
    case LrVariant::kConstant:
      return schedule.initial_lr;
    case LrVariant::kExponentialDecay:
      return schedule.initial_lr * std::pow(schedule.decay_rate, epoch);
    case LrVariant::kOneCycle: {
      const double lr = schedule.initial_lr;
      const double half = schedule.cycle_epochs / 2.0;
      if (epoch <= half) {
        return std::lerp(lr, 10.0 * lr, epoch / half);
      }
      if (epoch <= schedule.cycle_epochs) {
        return std::lerp(10.0 * lr, lr, (epoch - half) / half);
      }
      const double tail = schedule.total_epochs - schedule.cycle_epochs;
      if (tail <= 0.0) return lr;
      return std::lerp(lr, schedule.floor, (epoch - schedule.cycle_epochs) / tail);
    }
  }
  throw std::logic_error("lr_at: unknown schedule variant");
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "nadam") return OptimizerKind::kNadam;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "momentum") return OptimizerKind::kMomentum;
  throw std::invalid_argument("unknown optimizer: " + name);
}

std::string optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kNadam:
      return "nadam";
    case OptimizerKind::kAdam:
      return "adam";
    case OptimizerKind::kMomentum:
      return "momentum";
  }
  return "unknown";
}

Optimizer::Optimizer(OptimizerKind kind, double beta1, double beta2, double epsilon)
    : kind_(kind), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("Optimizer: need 0 <= beta < 1 and epsilon > 0");
  }
}

void Optimizer::ensure_state(const Mlp& net) {
  if (!m_weights_.empty()) return;
  for (const DenseLayer& layer : net.layers) {
    m_weights_.emplace_back(layer.weights.size(), 0.0);
    v_weights_.emplace_back(layer.weights.size(), 0.0);
    m_bias_.emplace_back(layer.bias.size(), 0.0);
    v_bias_.emplace_back(layer.bias.size(), 0.0);
  }
}

void Optimizer::update(std::span<double> params, std::span<const double> grads,
                       std::span<double> m, std::span<double> v, double lr) const {
  const double t = static_cast<double>(t_);
  const double m_corr = 1.0 - std::pow(beta1_, t);
  const double v_corr = 1.0 - std::pow(beta2_, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    switch (kind_) {
      case OptimizerKind::kMomentum:
        m[i] = beta1_ * m[i] + g;
        params[i] -= lr * m[i];
        break;
      case OptimizerKind::kAdam: {
        m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
        v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
        const double m_hat = m[i] / m_corr;
        const double v_hat = v[i] / v_corr;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon_);
        break;
      }
      case OptimizerKind::kNadam: {
        m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
        v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
        const double m_hat = m[i] / m_corr;
        const double v_hat = v[i] / v_corr;
        // Nesterov lookahead on the first moment.
        const double direction = beta1_ * m_hat + (1.0 - beta1_) * g / m_corr;
        params[i] -= lr * direction / (std::sqrt(v_hat) + epsilon_);
        break;
      }
    }
  }
}

void Optimizer::step(Mlp& net, const MlpGradients& grads, double lr) {
  ensure_state(net);
  ++t_;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    update(net.layers[i].weights, grads.weights[i], m_weights_[i], v_weights_[i], lr);
    update(net.layers[i].bias, grads.bias[i], m_bias_[i], v_bias_[i], lr);
  }
}

namespace {

struct StepLosses {
  double in_kl = 0.0;
  double ce = 0.0;
  double ood_kl = 0.0;
};

// Shared batch loop for the DPN and DNN objectives. The DNN path is the
// degenerate case with no OOD stream and a pure cross-entropy objective.
TrainResult train_loop(Mlp net, const LabeledDataset& in_data, const UnlabeledDataset* ood_data,
                       const TargetSpec* spec, const TrainConfig& config, bool use_kl) {
  net.validate();
  if (in_data.size() == 0) {
    throw std::invalid_argument("train: in-domain dataset is empty");
  }
  if (config.batch_size == 0) {
    throw std::invalid_argument("train: batch size must be >= 1");
  }
  if (config.schedule.total_epochs < static_cast<double>(config.epochs)) {
    throw std::invalid_argument("train: schedule covers fewer epochs than requested");
  }
  if (in_data.dim() != net.input_dim()) {
    throw std::invalid_argument("train: dataset dimension does not match network input");
  }
  if (static_cast<std::size_t>(in_data.num_classes) > net.output_dim()) {
    throw std::invalid_argument("train: dataset has more classes than network outputs");
  }
  const std::size_t ood_batch =
      ood_data ? static_cast<std::size_t>(
                     std::llround(config.ood_batch_ratio * static_cast<double>(config.batch_size)))
               : 0;
  if (ood_batch > 0 && ood_data->size() == 0) {
    throw std::invalid_argument("train: OOD dataset is empty but an OOD stream was requested");
  }
  if (ood_data && ood_data->size() > 0 && ood_data->dim() != net.input_dim()) {
    throw std::invalid_argument("train: OOD dimension does not match network input");
  }

  const std::size_t k = net.output_dim();
  const DirichletParams flat_target = target_dirichlet_out(k);
  std::mt19937_64 rng(config.seed);

  std::vector<std::size_t> in_order(in_data.size());
  std::iota(in_order.begin(), in_order.end(), 0);
  std::vector<std::size_t> ood_order;
  if (ood_batch > 0) {
    ood_order.resize(ood_data->size());
    std::iota(ood_order.begin(), ood_order.end(), 0);
  }
  std::size_t ood_cursor = 0;

  Optimizer optimizer(config.optimizer, config.beta1, config.beta2, config.epsilon_opt);
  const std::size_t num_batches = (in_data.size() + config.batch_size - 1) / config.batch_size;

  TrainResult result{std::move(net), {}};
  result.history.reserve(config.epochs);
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(in_order.begin(), in_order.end(), rng);
    StepLosses epoch_losses;

    for (std::size_t b = 0; b < num_batches; ++b) {
      const double fractional_epoch =
          static_cast<double>(epoch) + static_cast<double>(b) / static_cast<double>(num_batches);
      const double lr = lr_at(config.schedule, fractional_epoch);

      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(begin + config.batch_size, in_data.size());
      const double inv_batch = 1.0 / static_cast<double>(end - begin);

      MlpGradients grads = MlpGradients::zeros_like(result.net);
      ForwardTrace trace;
      StepLosses losses;

      for (std::size_t idx = begin; idx < end; ++idx) {
        const std::size_t i = in_order[idx];
        const std::vector<double> z =
            forward_stochastic(result.net, in_data.features[i], rng, &trace);
        std::vector<double> grad_z(k, 0.0);
        if (use_kl) {
          const DirichletParams target =
              target_dirichlet_in(static_cast<std::size_t>(in_data.labels[i]), *spec);
          LossGrad kl = dpn_loss_and_grad(z, target);
          losses.in_kl += kl.loss;
          for (std::size_t c = 0; c < k; ++c) grad_z[c] += kl.grad_z[c];
        }
        if (!use_kl || config.ce_weight != 0.0) {
          const double weight = use_kl ? config.ce_weight : 1.0;
          LossGrad ce = ce_loss_and_grad(z, static_cast<std::size_t>(in_data.labels[i]));
          losses.ce += ce.loss;
          for (std::size_t c = 0; c < k; ++c) grad_z[c] += weight * ce.grad_z[c];
        }
        grads.add_scaled(backward(result.net, trace, grad_z), inv_batch);
      }
      losses.in_kl *= inv_batch;
      losses.ce *= inv_batch;

      if (ood_batch > 0) {
        const double inv_ood = 1.0 / static_cast<double>(ood_batch);
        for (std::size_t j = 0; j < ood_batch; ++j) {
          if (ood_cursor == 0) std::shuffle(ood_order.begin(), ood_order.end(), rng);
          const std::size_t i = ood_order[ood_cursor];
          ood_cursor = (ood_cursor + 1) % ood_order.size();
          const std::vector<double> z =
              forward_stochastic(result.net, ood_data->features[i], rng, &trace);
          LossGrad kl = dpn_loss_and_grad(z, flat_target);
          losses.ood_kl += kl.loss;
          std::vector<double> grad_z = std::move(kl.grad_z);
          for (double& g : grad_z) g *= inv_ood;
          grads.add_scaled(backward(result.net, trace, grad_z), 1.0);
        }
        losses.ood_kl *= inv_ood;
      }

      const double ce_weight = use_kl ? config.ce_weight : 1.0;
      const double total = losses.in_kl + ce_weight * losses.ce + losses.ood_kl;
      if (!std::isfinite(total)) {
        throw NumericError("train: non-finite loss", step, lr, b);
      }
      optimizer.step(result.net, grads, lr);
      ++step;

      epoch_losses.in_kl += losses.in_kl;
      epoch_losses.ce += losses.ce;
      epoch_losses.ood_kl += losses.ood_kl;
    }

    const double inv_steps = 1.0 / static_cast<double>(num_batches);
    EpochLosses mean;
    mean.in_kl = epoch_losses.in_kl * inv_steps;
    mean.ce = epoch_losses.ce * inv_steps;
    mean.ood_kl = epoch_losses.ood_kl * inv_steps;
    mean.total = mean.in_kl + (use_kl ? config.ce_weight : 1.0) * mean.ce + mean.ood_kl;
    result.history.push_back(mean);
  }
  return result;
}

}  // namespace

TrainResult train_dpn(Mlp net, const LabeledDataset& in_data, const UnlabeledDataset& ood_data,
                      const TargetSpec& spec, const TrainConfig& config) {
  if (spec.num_classes != net.output_dim()) {
    throw std::invalid_argument("train_dpn: target spec classes do not match network outputs");
  }
  return train_loop(std::move(net), in_data, &ood_data, &spec, config, /*use_kl=*/true);
}

TrainResult train_dnn(Mlp net, const LabeledDataset& in_data, const TrainConfig& config) {
  return train_loop(std::move(net), in_data, nullptr, nullptr, config, /*use_kl=*/false);
}

}  // namespace priornet
