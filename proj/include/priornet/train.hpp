#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "priornet/data.hpp"
#include "priornet/dirichlet.hpp"
#include "priornet/net.hpp"

namespace priornet {

/// In-distribution Dirichlet target specification: the target precision
/// alpha0_hat and the label-smoothing mass epsilon. The smoothed target
/// mean keeps a strict majority on the labeled class and the target stays
/// sharper than flat.
struct TargetSpec {
  double target_precision = 100.0;
  double smoothing = 0.01;
  std::size_t num_classes = 0;

  TargetSpec(double alpha0, double epsilon, std::size_t k);
};

/// Smoothed in-distribution target: mean 1-(K-1)eps on the labeled class
/// and eps elsewhere, scaled to the target precision.
DirichletParams target_dirichlet_in(std::size_t label, const TargetSpec& spec);

/// Flat Dirichlet (1,...,1): the maximally uncertain target used for
/// out-of-distribution inputs.
DirichletParams target_dirichlet_out(std::size_t num_classes);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_z;
};

/// Forward KL from the target to the model Dirichlet with concentrations
/// beta = exp(clamp(z)). The z-gradient is analytic:
///   d loss / d beta_c = psi(beta_c) - psi(beta0) - (psi(target_c) - psi(target0))
///   d loss / d z_c    = beta_c * d loss / d beta_c   (zero where clamped)
LossGrad dpn_loss_and_grad(std::span<const double> z, const DirichletParams& target);

/// Auxiliary cross-entropy: loss = -ln softmax(z)_label,
/// grad = softmax(z) - onehot(label).
LossGrad ce_loss_and_grad(std::span<const double> z, std::size_t label);

enum class LrVariant { kConstant, kExponentialDecay, kOneCycle };

/// Learning-rate schedule, indexed by fractional epoch.
///   constant:    lr
///   exponential: lr * rate^epoch
///   one_cycle:   linear lr -> 10 lr over the first half cycle, back to lr
///                at the cycle end, then linear decay to the floor (1e-6)
///                at the final epoch.
struct LrSchedule {
  LrVariant variant = LrVariant::kConstant;
  double initial_lr = 1e-3;
  double decay_rate = 1.0;
  double cycle_epochs = 0.0;
  double total_epochs = 0.0;
  double floor = 1e-6;

  static LrSchedule constant(double lr, double total_epochs);
  static LrSchedule exponential_decay(double lr, double rate_per_epoch, double total_epochs);
  static LrSchedule one_cycle(double lr, double cycle_epochs, double total_epochs);
};

/// Learning rate at a fractional epoch in [0, total_epochs]; out-of-range
/// epochs throw std::out_of_range.
double lr_at(const LrSchedule& schedule, double epoch);

enum class OptimizerKind { kNadam, kAdam, kMomentum };

OptimizerKind optimizer_from_name(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

/// Adaptive-moment optimizer with a Nesterov-momentum variant (the
/// default) and a plain-momentum fallback for debugging. A zero gradient
/// never moves the parameters.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double beta1, double beta2, double epsilon);

  void step(Mlp& net, const MlpGradients& grads, double lr);

 private:
  OptimizerKind kind_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_weights_, v_weights_;
  std::vector<std::vector<double>> m_bias_, v_bias_;

  void ensure_state(const Mlp& net);
  void update(std::span<double> params, std::span<const double> grads, std::span<double> m,
              std::span<double> v, double lr) const;
};

struct TrainConfig {
  LrSchedule schedule = LrSchedule::constant(1e-3, 50);
  std::size_t epochs = 50;
  std::size_t batch_size = 64;
  double ce_weight = 0.0;
  double ood_batch_ratio = 1.0;
  OptimizerKind optimizer = OptimizerKind::kNadam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_opt = 1e-8;
  std::uint64_t seed = 0;
};

/// Mean per-epoch losses. total = in_kl + ce_weight * ce + ood_kl for the
/// DPN objective; the DNN objective has only the ce component.
struct EpochLosses {
  double total = 0.0;
  double in_kl = 0.0;
  double ce = 0.0;
  double ood_kl = 0.0;
};

struct TrainResult {
  Mlp net;
  std::vector<EpochLosses> history;
};

/// Multi-task DPN training: per in-domain batch, KL to the smoothed class
/// target plus the weighted cross-entropy, plus KL to the flat Dirichlet
/// over one OOD batch (size = batch_size * ood_batch_ratio, rounded).
/// Single-threaded and bit-deterministic for a fixed seed. Throws
/// NumericError when the loss leaves the finite range.
TrainResult train_dpn(Mlp net, const LabeledDataset& in_data, const UnlabeledDataset& ood_data,
                      const TargetSpec& spec, const TrainConfig& config);

/// Cross-entropy baseline training on the same machinery (no OOD stream).
TrainResult train_dnn(Mlp net, const LabeledDataset& in_data, const TrainConfig& config);

}  // namespace priornet
