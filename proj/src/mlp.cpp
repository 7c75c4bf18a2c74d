#include "vsn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vsn {

namespace {
Eigen::VectorXd augmented(const Eigen::VectorXd& a) {
  Eigen::VectorXd aug(a.size() + 1);
  aug.head(a.size()) = a;
  aug(a.size()) = 1.0;
  return aug;
}
}  // namespace

Perceptron Perceptron::seeded(int hidden_width, Rng& rng) {
  if (hidden_width < 1) {
    throw std::invalid_argument("Perceptron: hidden width must be >= 1");
  }
  Perceptron p;
  p.hidden_width_ = hidden_width;
  auto draw = [&rng](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = rng.uniform(-0.5, 0.5);
      }
    }
    return m;
  };
  p.weights_.push_back(draw(hidden_width, kMlpInputs + 1));
  for (int j = 1; j < kMlpHiddenLayers; ++j) {
    p.weights_.push_back(draw(hidden_width, hidden_width + 1));
  }
  p.weights_.push_back(draw(1, hidden_width + 1));
  return p;
}

Perceptron::Trace Perceptron::forward_trace(const Eigen::Vector3d& x) const {
  Trace t;
  Eigen::VectorXd a = x;
  for (const auto& w : weights_) {
    Eigen::VectorXd z = w * augmented(a);
    a = z.unaryExpr([](double v) { return activation(v); });
    t.z.push_back(std::move(z));
    t.a.push_back(a);
  }
  return t;
}

double Perceptron::forward(const Eigen::Vector3d& x) const {
  if (weights_.empty()) throw std::logic_error("Perceptron: not initialized");
  Eigen::VectorXd a = x;
  for (const auto& w : weights_) {
    a = (w * augmented(a)).unaryExpr([](double v) { return activation(v); });
  }
  return a(0);
}

double Perceptron::cost(const std::vector<TrainingSample>& batch) const {
  if (batch.empty()) throw std::invalid_argument("cost: empty batch");
  double sum = 0.0;
  for (const auto& s : batch) {
    const double h = forward(s.x);
    sum += s.y * std::sin(h) + (1.0 - s.y) * std::sin(1.0 - h);
  }
  return -sum / static_cast<double>(batch.size());
}

std::vector<Eigen::MatrixXd> Perceptron::gradients(
    const std::vector<TrainingSample>& batch) const {
  if (batch.empty()) throw std::invalid_argument("gradients: empty batch");
  std::vector<Eigen::MatrixXd> grads;
  grads.reserve(weights_.size());
  for (const auto& w : weights_) grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));

  const double inv_m = 1.0 / static_cast<double>(batch.size());
  const int layers = static_cast<int>(weights_.size());

  for (const auto& s : batch) {
    const Trace t = forward_trace(s.x);
    const double h = t.a.back()(0);
    // dJ/dh of the sine cost for this sample.
    const double dj_dh =
        -inv_m * (s.y * std::cos(h) - (1.0 - s.y) * std::cos(1.0 - h));

    Eigen::VectorXd delta(1);
    delta(0) = dj_dh * activation_deriv(t.z.back()(0));

    for (int j = layers - 1; j >= 0; --j) {
      const Eigen::VectorXd input =
          j == 0 ? Eigen::VectorXd(s.x) : t.a[static_cast<std::size_t>(j - 1)];
      grads[static_cast<std::size_t>(j)] += delta * augmented(input).transpose();
      if (j > 0) {
        const auto& w = weights_[static_cast<std::size_t>(j)];
        const Eigen::VectorXd da = w.leftCols(w.cols() - 1).transpose() * delta;
        const auto& z_prev = t.z[static_cast<std::size_t>(j - 1)];
        delta = da.cwiseProduct(
            z_prev.unaryExpr([](double v) { return activation_deriv(v); }));
      }
    }
  }
  return grads;
}

std::vector<double> Perceptron::train(const std::vector<TrainingSample>& data,
                                      double lr, int batch_size, int epochs,
                                      Rng& rng) {
  if (data.empty()) throw std::invalid_argument("train: empty data");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");

  // Adam state, one slot per weight matrix.
  const double b1 = 0.9;
  const double b2 = 0.999;
  const double adam_eps = 1e-8;
  std::vector<Eigen::MatrixXd> m1, m2;
  for (const auto& w : weights_) {
    m1.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    m2.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  long step = 0;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(epochs));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(batch_size));
      std::vector<TrainingSample> batch;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) batch.push_back(data[order[i]]);

      const auto grads = gradients(batch);
      ++step;
      const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step));
      for (std::size_t j = 0; j < weights_.size(); ++j) {
        m1[j] = b1 * m1[j] + (1.0 - b1) * grads[j];
        m2[j] = b2 * m2[j] + (1.0 - b2) * grads[j].cwiseProduct(grads[j]);
        const Eigen::MatrixXd mhat = m1[j] / corr1;
        const Eigen::MatrixXd vhat = m2[j] / corr2;
        weights_[j] -= lr * (mhat.array() / (vhat.array().sqrt() + adam_eps)).matrix();
      }
    }
    const double epoch_cost = cost(data);
    if (!std::isfinite(epoch_cost)) {
      throw std::runtime_error("train: cost diverged to a non-finite value");
    }
    trace.push_back(epoch_cost);
  }
  return trace;
}

std::vector<int> Perceptron::score_order(
    const std::vector<Eigen::Vector3d>& candidates) const {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = forward(candidates[i]);
  }
  std::vector<int> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&scores](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  return idx;
}

void Perceptron::save(std::ostream& os) const {
  os << "perceptron " << hidden_width_ << ' ' << weights_.size() << '\n';
  os << std::setprecision(17);
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const auto& w = weights_[j];
    os << "layer " << j << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        os << w(r, c) << (c + 1 < w.cols() ? ' ' : '\n');
      }
    }
  }
}

Perceptron Perceptron::load(std::istream& is) {
  std::string tag;
  int width = 0;
  std::size_t layers = 0;
  is >> tag >> width >> layers;
  if (!is || tag != "perceptron" || width < 1 ||
      layers != kMlpHiddenLayers + 1) {
    throw std::runtime_error("perceptron load: bad header");
  }
  Perceptron p;
  p.hidden_width_ = width;
  Eigen::Index expect_in = kMlpInputs;
  for (std::size_t j = 0; j < layers; ++j) {
    std::size_t idx = 0;
    Eigen::Index rows = 0, cols = 0;
    is >> tag >> idx >> rows >> cols;
    const Eigen::Index expect_out = j + 1 == layers ? 1 : width;
    if (!is || tag != "layer" || idx != j || rows != expect_out ||
        cols != expect_in + 1) {
      throw std::runtime_error("perceptron load: bad layer header");
    }
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(is >> w(r, c))) {
          throw std::runtime_error("perceptron load: truncated weights");
        }
      }
    }
    p.weights_.push_back(std::move(w));
    expect_in = expect_out;
  }
  return p;
}

}  // namespace vsn
