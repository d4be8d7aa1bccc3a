#include "uwhunt/mlp.hpp"

#include <cmath>

#include "uwhunt/errors.hpp"

namespace uwh {

Mlp::Mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng) {
  sizes_.push_back(input_dim);
  sizes_.insert(sizes_.end(), hidden.begin(), hidden.end());
  sizes_.push_back(output_dim);
  for (int s : sizes_)
    if (s < 1) throw DomainError("Mlp: layer sizes must be >= 1");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double bound = std::sqrt(6.0 / in);
    Eigen::MatrixXd w(out, in);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::Index Mlp::num_parameters() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim()) throw DomainError("Mlp::forward: input dimension mismatch");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    a = (l + 1 < weights_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  return forward(Eigen::MatrixXd(x)).col(0);
}

double Mlp::selected_loss(const Eigen::MatrixXd& x, const std::vector<int>& actions,
                          const Eigen::VectorXd& targets, Eigen::VectorXd* grad) const {
  const Eigen::Index batch = x.cols();
  if (batch == 0 || static_cast<Eigen::Index>(actions.size()) != batch || targets.size() != batch)
    throw DomainError("Mlp::selected_loss: batch sizes differ");
  if (x.rows() != input_dim()) throw DomainError("Mlp::selected_loss: input dimension mismatch");

  const std::size_t layers = weights_.size();
  std::vector<Eigen::MatrixXd> act(layers + 1);
  act[0] = x;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = weights_[l] * act[l];
    z.colwise() += biases_[l];
    act[l + 1] = (l + 1 < layers) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(output_dim(), batch);
  double loss = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const int a = actions[static_cast<std::size_t>(b)];
    if (a < 0 || a >= output_dim()) throw DomainError("Mlp::selected_loss: action out of range");
    const double err = act[layers](a, b) - targets(b);
    loss += err * err;
    delta(a, b) = 2.0 * err / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);
  if (grad == nullptr) return loss;

  grad->resize(num_parameters());
  std::vector<Eigen::Index> offset(layers);
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offset[l] = pos;
    pos += weights_[l].size() + biases_[l].size();
  }
  for (std::size_t l = layers; l-- > 0;) {
    const Eigen::MatrixXd gw = delta * act[l].transpose();
    const Eigen::VectorXd gb = delta.rowwise().sum();
    grad->segment(offset[l], gw.size()) = Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
    grad->segment(offset[l] + gw.size(), gb.size()) = gb;
    if (l > 0) {
      delta = (weights_[l].transpose() * delta).eval();
      delta = delta.cwiseProduct((act[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(num_parameters());
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(pos, weights_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
    pos += weights_[l].size();
    flat.segment(pos, biases_[l].size()) = biases_[l];
    pos += biases_[l].size();
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != num_parameters())
    throw DomainError("Mlp::set_parameters: expected " + std::to_string(num_parameters()) +
                      " values, got " + std::to_string(flat.size()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) =
        flat.segment(pos, weights_[l].size());
    pos += weights_[l].size();
    biases_[l] = flat.segment(pos, biases_[l].size());
    pos += biases_[l].size();
  }
}

bool operator==(const Mlp& a, const Mlp& b) {
  return a.sizes_ == b.sizes_ && a.parameters() == b.parameters();
}

Adam::Adam(Eigen::Index num_parameters, double learning_rate, double beta1, double beta2,
           double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(num_parameters)), v_(Eigen::VectorXd::Zero(num_parameters)) {
  if (!(learning_rate > 0.0)) throw DomainError("Adam: learning rate must be > 0");
}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (grad.size() != params.size() || grad.size() != m_.size())
    throw DomainError("Adam::step: size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

void Adam::restore(long steps, const Eigen::VectorXd& m, const Eigen::VectorXd& v) {
  if (m.size() != m_.size() || v.size() != v_.size()) throw DomainError("Adam::restore: size mismatch");
  t_ = steps;
  m_ = m;
  v_ = v;
}

}  // namespace uwh
