#include "colorlit/mlp.hpp"

#include <cmath>
#include <numeric>

#include "colorlit/error.hpp"
#include "colorlit/stats.hpp"

namespace colorlit {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Mlp::Mlp(std::size_t input_dim, std::size_t hidden_dim)
    : input_dim_(input_dim),
      hidden_dim_(hidden_dim),
      w1_(input_dim * hidden_dim, 0.0),
      b1_(hidden_dim, 0.0),
      w2_(hidden_dim, 0.0) {}

Mlp Mlp::random_init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  Mlp m(input_dim, hidden_dim);
  const double a1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& w : m.w1_) w = rng.uniform(-a1, a1);
  for (double& b : m.b1_) b = rng.uniform(-a1, a1);
  for (double& w : m.w2_) w = rng.uniform(-a2, a2);
  m.b2_ = rng.uniform(-a2, a2);
  return m;
}

double Mlp::forward(std::span<const double> x) const {
  if (x.size() != input_dim_) throw DataError("mlp: input width mismatch");
  double z2 = b2_;
  for (std::size_t h = 0; h < hidden_dim_; ++h) {
    const double* w = w1_.data() + h * input_dim_;
    double z = b1_[h];
    for (std::size_t i = 0; i < input_dim_; ++i) z += w[i] * x[i];
    z2 += w2_[h] * sigmoid(z);
  }
  return sigmoid(z2);
}

double Mlp::accumulate_gradient(std::span<const double> x, double target, Mlp& grad) const {
  if (x.size() != input_dim_) throw DataError("mlp: input width mismatch");
  std::vector<double> hidden(hidden_dim_);
  double z2 = b2_;
  for (std::size_t h = 0; h < hidden_dim_; ++h) {
    const double* w = w1_.data() + h * input_dim_;
    double z = b1_[h];
    for (std::size_t i = 0; i < input_dim_; ++i) z += w[i] * x[i];
    hidden[h] = sigmoid(z);
    z2 += w2_[h] * hidden[h];
  }
  const double y = sigmoid(z2);
  const double err = y - target;
  const double dz2 = 2.0 * err * y * (1.0 - y);
  grad.b2_ += dz2;
  for (std::size_t h = 0; h < hidden_dim_; ++h) {
    grad.w2_[h] += dz2 * hidden[h];
    const double dz1 = dz2 * w2_[h] * hidden[h] * (1.0 - hidden[h]);
    grad.b1_[h] += dz1;
    double* g = grad.w1_.data() + h * input_dim_;
    for (std::size_t i = 0; i < input_dim_; ++i) g[i] += dz1 * x[i];
  }
  return err * err;
}

std::size_t Mlp::parameter_count() const { return w1_.size() + b1_.size() + w2_.size() + 1; }

double& Mlp::parameter(std::size_t i) {
  if (i < w1_.size()) return w1_[i];
  i -= w1_.size();
  if (i < b1_.size()) return b1_[i];
  i -= b1_.size();
  if (i < w2_.size()) return w2_[i];
  i -= w2_.size();
  if (i == 0) return b2_;
  throw DataError("mlp: parameter index out of range");
}

double Mlp::parameter(std::size_t i) const { return const_cast<Mlp*>(this)->parameter(i); }

namespace {

struct DevScore {
  double loss = 0.0;
  std::optional<double> r;
};

DevScore score(const Mlp& net, std::span<const Example> data) {
  DevScore s;
  if (data.empty()) return s;
  std::vector<double> pred, target;
  for (const auto& ex : data) {
    const double y = net.forward(ex.input);
    s.loss += (y - ex.target) * (y - ex.target);
    pred.push_back(y);
    target.push_back(ex.target);
  }
  s.loss /= static_cast<double>(data.size());
  try {
    s.r = stats::pearson(pred, target);
  } catch (const InsufficientDataError&) {
  }
  return s;
}

bool improves(const DevScore& cand, const DevScore& best) {
  if (cand.r && best.r) return *cand.r > *best.r;
  if (cand.r) return true;
  if (best.r) return false;
  return cand.loss < best.loss;
}

}  // namespace

TrainOutcome train_mlp(std::span<const Example> train, std::span<const Example> dev,
                       const TrainConfig& config, std::uint64_t seed) {
  if (train.empty()) throw DataError("training set is empty");
  if (config.batch_size == 0 || config.hidden_dim == 0) {
    throw DataError("batch size and hidden width must be positive");
  }
  const std::size_t input_dim = train.front().input.size();
  Rng rng(seed);
  Mlp net = Mlp::random_init(input_dim, config.hidden_dim, rng);

  TrainOutcome out;
  out.net = net;
  DevScore best = score(net, dev);
  out.history.push_back({0, score(net, train).loss, best.loss, best.r, true});

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Mlp grad(input_dim, config.hidden_dim);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      grad = Mlp(input_dim, config.hidden_dim);
      for (std::size_t i = start; i < end; ++i) {
        const auto& ex = train[order[i]];
        epoch_loss += net.accumulate_gradient(ex.input, ex.target, grad);
      }
      const double step = config.learning_rate / static_cast<double>(end - start);
      for (std::size_t p = 0; p < net.parameter_count(); ++p) net.parameter(p) -= step * grad.parameter(p);
    }
    const DevScore s = score(net, dev);
    EpochRecord rec{epoch, epoch_loss / static_cast<double>(train.size()), s.loss, s.r, false};
    if (improves(s, best)) {
      best = s;
      out.net = net;
      out.best_epoch = epoch;
      rec.checkpoint = true;
    }
    out.history.push_back(rec);
    if (epoch - out.best_epoch >= config.patience) break;
  }
  return out;
}

}  // namespace colorlit
