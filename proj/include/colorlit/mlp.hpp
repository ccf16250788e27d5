#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colorlit/rng.hpp"

namespace colorlit {

/// Single hidden layer regressor: sigmoid hidden units, sigmoid output.
class Mlp {
 public:
  Mlp() = default;
  /// All weights and biases zero.
  Mlp(std::size_t input_dim, std::size_t hidden_dim);

  /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static Mlp random_init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }

  double forward(std::span<const double> x) const;

  /// Squared error (y - target)^2 for one example; adds its gradient with
  /// respect to every parameter into `grad` (same shape as *this).
  double accumulate_gradient(std::span<const double> x, double target, Mlp& grad) const;

  /// Flat view over all parameters: hidden weights (row-major,
  /// hidden x input), hidden biases, output weights, output bias.
  std::size_t parameter_count() const;
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  std::vector<double>& hidden_weights() { return w1_; }
  const std::vector<double>& hidden_weights() const { return w1_; }
  std::vector<double>& hidden_bias() { return b1_; }
  const std::vector<double>& hidden_bias() const { return b1_; }
  std::vector<double>& output_weights() { return w2_; }
  const std::vector<double>& output_weights() const { return w2_; }
  double& output_bias() { return b2_; }
  double output_bias() const { return b2_; }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_dim_ = 0;
  std::vector<double> w1_;
  std::vector<double> b1_;
  std::vector<double> w2_;
  double b2_ = 0.0;
};

double sigmoid(double z);

struct Example {
  std::vector<double> input;
  double target = 0.0;
};

struct TrainConfig {
  std::size_t hidden_dim = 64;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  int max_epochs = 500;
  int patience = 25;
};

struct EpochRecord {
  int epoch = 0;  // 0 = initial weights
  double train_loss = 0.0;
  double dev_loss = 0.0;
  std::optional<double> dev_r;
  bool checkpoint = false;
};

struct TrainOutcome {
  Mlp net;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

/// Mini-batch gradient descent on mean squared error. After each epoch
/// the dev set is scored; the kept checkpoint is the epoch with the best
/// dev Pearson r (dev MSE when r is undefined, e.g. constant targets).
/// Training stops after `patience` epochs without a new checkpoint.
TrainOutcome train_mlp(std::span<const Example> train, std::span<const Example> dev,
                       const TrainConfig& config, std::uint64_t seed);

}  // namespace colorlit
