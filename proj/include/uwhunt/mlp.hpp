#pragma once

// Small fully connected ReLU network with a linear output layer, evaluated
// on column batches, plus the Adam optimizer used to train it.

#include <Eigen/Dense>
#include <vector>

#include "uwhunt/rng.hpp"

namespace uwh {

class Mlp {
 public:
  Mlp() = default;
  /// Layer sizes input -> hidden... -> output. Weights are drawn uniformly
  /// in +-sqrt(6 / fan_in), biases start at zero.
  Mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng);

  [[nodiscard]] int input_dim() const { return sizes_.front(); }
  [[nodiscard]] int output_dim() const { return sizes_.back(); }
  [[nodiscard]] const std::vector<int>& layer_sizes() const { return sizes_; }
  [[nodiscard]] Eigen::Index num_parameters() const;

  /// One column per sample.
  [[nodiscard]] Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// Mean over the batch of (Q(x_b)[a_b] - y_b)^2. When `grad` is non-null
  /// it receives the gradient with respect to `parameters()`.
  double selected_loss(const Eigen::MatrixXd& x, const std::vector<int>& actions,
                       const Eigen::VectorXd& targets, Eigen::VectorXd* grad) const;

  /// Flat parameter vector: for each layer, W (column-major) then b.
  [[nodiscard]] Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index num_parameters, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  [[nodiscard]] double learning_rate() const { return lr_; }
  [[nodiscard]] long steps() const { return t_; }
  [[nodiscard]] const Eigen::VectorXd& first_moment() const { return m_; }
  [[nodiscard]] const Eigen::VectorXd& second_moment() const { return v_; }
  void restore(long steps, const Eigen::VectorXd& m, const Eigen::VectorXd& v);

 private:
  double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

}  // namespace uwh
