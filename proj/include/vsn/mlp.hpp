#pragma once
// Candidate-scoring perceptron with the sine-sigmoid activation
// g(x) = 1 / (1 + exp(-sin x)).  Fixed topology: 3 inputs, four hidden
// layers of equal width, one output unit.  Every layer carries a trailing
// bias column; weights are dense Eigen matrices of shape (out, in + 1).
//
// The output of g is confined to [1/(1+e), e/(1+e)], so every score this
// network can produce lies strictly inside (0.26, 0.74); downstream code
// ranks scores and never treats them as probabilities.

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "vsn/rng.hpp"

namespace vsn {

inline constexpr int kMlpInputs = 3;
inline constexpr int kMlpHiddenLayers = 4;

// Sine-sigmoid activation and its exact range.
inline double activation(double x) { return 1.0 / (1.0 + std::exp(-std::sin(x))); }
inline double activation_lo() { return 1.0 / (1.0 + std::exp(1.0)); }
inline double activation_hi() { return std::exp(1.0) / (1.0 + std::exp(1.0)); }
// d/dx g(x) = g(x) * (1 - g(x)) * cos(x).
inline double activation_deriv(double x) {
  const double g = activation(x);
  return g * (1.0 - g) * std::cos(x);
}

struct TrainingSample {
  Eigen::Vector3d x;  // [reward, rate_norm, energy_norm], each in [0, 1]
  double y = 0.0;     // 1 = transmission met the deadline and was not attacked
};

class Perceptron {
 public:
  Perceptron() = default;

  // Weights drawn uniformly from [-0.5, 0.5].
  static Perceptron seeded(int hidden_width, Rng& rng);

  // Score one feature vector through all layers.
  double forward(const Eigen::Vector3d& x) const;

  // Mean sine cost over a batch:
  //   J = -(1/m) * sum_i [ y_i sin(h_i) + (1 - y_i) sin(1 - h_i) ].
  double cost(const std::vector<TrainingSample>& batch) const;

  // Exact batch gradient of the cost with respect to every weight matrix,
  // same shapes as weights().
  std::vector<Eigen::MatrixXd> gradients(
      const std::vector<TrainingSample>& batch) const;

  // Mini-batch Adam.  Returns the epoch-end cost trace (epochs entries).
  // Shuffling is driven by `rng`, so a fixed seed fixes the trajectory.
  // Throws std::runtime_error if the cost turns non-finite.
  std::vector<double> train(const std::vector<TrainingSample>& data, double lr,
                            int batch_size, int epochs, Rng& rng);

  // Indices of the candidates ordered by descending score; equal scores keep
  // their original relative order.
  std::vector<int> score_order(const std::vector<Eigen::Vector3d>& candidates) const;

  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  std::vector<Eigen::MatrixXd>& mutable_weights() { return weights_; }
  int hidden_width() const { return hidden_width_; }

  // Flat text round-trip: a header line then one line per weight row.
  void save(std::ostream& os) const;
  static Perceptron load(std::istream& is);

 private:
  // Pre-activations and activations of every layer for one input.
  struct Trace {
    std::vector<Eigen::VectorXd> z;  // per layer
    std::vector<Eigen::VectorXd> a;  // per layer (a.back() has size 1)
  };
  Trace forward_trace(const Eigen::Vector3d& x) const;

  int hidden_width_ = 0;
  std::vector<Eigen::MatrixXd> weights_;  // kMlpHiddenLayers + 1 matrices
};

}  // namespace vsn
