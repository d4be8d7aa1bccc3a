#include <gtest/gtest.h>

#include <cmath>

#include "uwhunt/mlp.hpp"

using namespace uwh;

TEST(Mlp, ShapesAndParameterCount) {
  Rng rng(1);
  const Mlp net(7, {64, 64}, 21, rng);
  EXPECT_EQ(net.input_dim(), 7);
  EXPECT_EQ(net.output_dim(), 21);
  EXPECT_EQ(net.num_parameters(), 7 * 64 + 64 + 64 * 64 + 64 + 64 * 21 + 21);
  EXPECT_EQ(net.forward(Eigen::VectorXd(Eigen::VectorXd::Zero(7))).size(), 21);
  EXPECT_EQ(net.forward(Eigen::MatrixXd(Eigen::MatrixXd::Zero(7, 5))).cols(), 5);
}

TEST(Mlp, BatchMatchesPerSample) {
  Rng rng(2);
  const Mlp net(4, {8, 8}, 3, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 6);
  const Eigen::MatrixXd y = net.forward(x);
  for (int b = 0; b < 6; ++b)
    EXPECT_LT((y.col(b) - net.forward(Eigen::VectorXd(x.col(b)))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Mlp, ParameterRoundTrip) {
  Rng rng(3);
  Mlp a(4, {5, 6}, 2, rng);
  Mlp b(4, {5, 6}, 2, rng);
  EXPECT_FALSE(a == b);
  b.set_parameters(a.parameters());
  EXPECT_TRUE(a == b);
  EXPECT_THROW(b.set_parameters(Eigen::VectorXd::Zero(3)), std::exception);
}

TEST(Mlp, ZeroParametersGiveZeroOutput) {
  Rng rng(4);
  Mlp net(3, {4, 4}, 2, rng);
  net.set_parameters(Eigen::VectorXd::Zero(net.num_parameters()));
  EXPECT_EQ(net.forward(Eigen::VectorXd(Eigen::VectorXd::Ones(3))), Eigen::VectorXd::Zero(2));
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  Mlp net(7, {16, 16}, 5, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 4);
  const std::vector<int> actions{0, 3, 4, 1};
  Eigen::VectorXd y(4);
  y << 0.3, -1.2, 2.0, 0.7;
  Eigen::VectorXd grad;
  net.selected_loss(x, actions, y, &grad);
  const Eigen::VectorXd theta = net.parameters();
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    Eigen::VectorXd tp = theta, tm = theta;
    tp(k) += h;
    tm(k) -= h;
    Mlp p = net, m = net;
    p.set_parameters(tp);
    m.set_parameters(tm);
    const double fd = (p.selected_loss(x, actions, y, nullptr) -
                       m.selected_loss(x, actions, y, nullptr)) / (2 * h);
    worst = std::max(worst, std::abs(fd - grad(k)) / std::max(1e-3, std::abs(fd) + std::abs(grad(k))));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Adam opt(3, 0.01);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd g(3);
  g << 1.0, -2.0, 0.0;
  opt.step(p, g);
  EXPECT_NEAR(p(0), -0.01, 1e-9);
  EXPECT_NEAR(p(1), 0.01, 1e-9);
  EXPECT_EQ(p(2), 0.0);
  EXPECT_EQ(opt.steps(), 1);
}

TEST(Adam, MinimizesQuadratic) {
  Adam opt(2, 0.05);
  Eigen::VectorXd p(2);
  p << 3.0, -4.0;
  for (int k = 0; k < 2000; ++k) opt.step(p, 2.0 * p);
  EXPECT_LT(p.norm(), 1e-3);
}

TEST(Adam, RestoreReproducesTrajectory) {
  Adam a(2, 0.1);
  Eigen::VectorXd p(2);
  p << 1.0, 2.0;
  for (int k = 0; k < 5; ++k) a.step(p, p);
  Adam b(2, 0.1);
  b.restore(a.steps(), a.first_moment(), a.second_moment());
  Eigen::VectorXd pa = p, pb = p;
  a.step(pa, pa);
  b.step(pb, pb);
  EXPECT_EQ(pa, pb);
}
