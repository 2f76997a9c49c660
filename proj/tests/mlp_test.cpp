#include "oaf/mlp.hpp"

#include <gtest/gtest.h>

#include "oaf/rng.hpp"

namespace oaf {
namespace {

// Builds a tiny synthetic regression set: smooth targets of a 1-D latent.
TrainingSet synthetic_set(int n, int state_dim, uint64_t seed) {
  Rng rng(seed);
  TrainingSet ts;
  ts.n = n;
  ts.state_dim = state_dim;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / std::max(1, n - 1);
    for (int j = 0; j < state_dim; ++j) ts.states.push_back(std::sin(3.0 * u + j) + 0.01 * rng.normal());
    for (int j = 0; j < kChunkFlat; ++j)
      ts.targets.push_back(0.5 * std::cos(2.0 * u + 0.01 * j));
  }
  Normalization::fit(ts.states, n, state_dim, ts.norm.state_mid, ts.norm.state_half);
  Normalization::fit(ts.targets, n, kChunkFlat, ts.norm.target_mid, ts.norm.target_half);
  return ts;
}

TEST(MlpForward, ZeroNetOutputsZero) {
  MlpNet net = MlpNet::init({4, 8, 5}, 0);
  for (auto& m : net.w) std::fill(m.d.begin(), m.d.end(), 0.0);
  const auto y = mlp_forward(net, std::vector<double>{1, 2, 3, 4});
  for (double v : y) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(MlpForward, SingleLinearLayerIdentity) {
  MlpNet net = MlpNet::init({3, 3}, 0);
  std::fill(net.w[0].d.begin(), net.w[0].d.end(), 0.0);
  for (int i = 0; i < 3; ++i) net.w[0].at(i, i) = 1.0;
  const std::vector<double> x{0.3, -1.2, 2.5};
  const auto y = mlp_forward(net, x);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(y[i], x[i]);
}

TEST(MlpForward, ShapeMismatchThrows) {
  MlpNet net = MlpNet::init({4, 8, 5}, 0);
  EXPECT_THROW(mlp_forward(net, std::vector<double>{1, 2}), ShapeMismatch);
}

TEST(MlpBackward, FiniteDifferenceOracle) {
  // Analytic gradients of a random linear functional of the output vs
  // central differences with h = 1e-5, checked on every parameter.
  Rng rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    MlpNet net = MlpNet::init({5, 8, 7, 6}, 100 + trial);
    std::vector<double> x(5), c(6);
    for (double& v : x) v = rng.uniform(-1, 1);
    for (double& v : c) v = rng.uniform(-1, 1);

    const MlpGradients g = mlp_backward(net, x, c);

    const auto loss = [&](const MlpNet& n) {
      const auto y = mlp_forward(n, x);
      double s = 0.0;
      for (size_t i = 0; i < y.size(); ++i) s += c[i] * y[i];
      return s;
    };
    const double h = 1e-5;
    double max_rel = 0.0;
    for (size_t l = 0; l < net.w.size(); ++l) {
      for (size_t i = 0; i < net.w[l].d.size(); ++i) {
        MlpNet plus = net, minus = net;
        plus.w[l].d[i] += h;
        minus.w[l].d[i] -= h;
        const double fd = (loss(plus) - loss(minus)) / (2 * h);
        const double ga = g.w[l].d[i];
        max_rel = std::max(max_rel, std::abs(ga - fd) / (std::abs(ga) + std::abs(fd) + 1e-10));
      }
      for (size_t i = 0; i < net.b[l].size(); ++i) {
        MlpNet plus = net, minus = net;
        plus.b[l][i] += h;
        minus.b[l][i] -= h;
        const double fd = (loss(plus) - loss(minus)) / (2 * h);
        const double ga = g.b[l][i];
        max_rel = std::max(max_rel, std::abs(ga - fd) / (std::abs(ga) + std::abs(fd) + 1e-10));
      }
    }
    EXPECT_LT(max_rel, 1e-5);
  }
}

TEST(MlpBackward, BatchEqualsSumOfSingles) {
  Rng rng(42);
  MlpNet net = MlpNet::init({6, 10, 4}, 7);
  const int batch = 5;
  Mat x(batch, 6), gout(batch, 4);
  for (double& v : x.d) v = rng.uniform(-1, 1);
  for (double& v : gout.d) v = rng.uniform(-1, 1);

  std::vector<Mat> acts;
  mlp_forward_batch(net, x, acts);
  const MlpGradients batched = mlp_backward_batch(net, acts, gout);

  MlpGradients summed = MlpGradients::zeros_like(net);
  for (int i = 0; i < batch; ++i) {
    const MlpGradients gi =
        mlp_backward(net, {x.row(i), 6}, {gout.row(i), 4});
    for (size_t l = 0; l < summed.w.size(); ++l) {
      for (size_t j = 0; j < summed.w[l].d.size(); ++j) summed.w[l].d[j] += gi.w[l].d[j];
      for (size_t j = 0; j < summed.b[l].size(); ++j) summed.b[l][j] += gi.b[l][j];
    }
  }
  for (size_t l = 0; l < summed.w.size(); ++l) {
    for (size_t j = 0; j < summed.w[l].d.size(); ++j)
      EXPECT_NEAR(batched.w[l].d[j], summed.w[l].d[j], 1e-12);
    for (size_t j = 0; j < summed.b[l].size(); ++j)
      EXPECT_NEAR(batched.b[l][j], summed.b[l][j], 1e-12);
  }
}

TEST(TrainBc, SinglePairMemorization) {
  const TrainingSet ts = synthetic_set(1, kStateDim, 5);
  TrainConfig cfg;  // default epochs and widths
  cfg.seed = 3;
  const TrainResult r = train_bc(ts, cfg);
  EXPECT_LT(r.final_loss, 1e-4);
}

TEST(TrainBc, DuplicatedDatasetIsMeanInvariant) {
  TrainingSet one = synthetic_set(1, kStateDim, 6);
  TrainingSet two = one;
  two.n = 2;
  two.states.insert(two.states.end(), one.states.begin(), one.states.end());
  two.targets.insert(two.targets.end(), one.targets.begin(), one.targets.end());
  Normalization::fit(two.states, 2, two.state_dim, two.norm.state_mid, two.norm.state_half);
  Normalization::fit(two.targets, 2, kChunkFlat, two.norm.target_mid, two.norm.target_half);

  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.hidden = {32, 32};
  cfg.seed = 9;
  const TrainResult a = train_bc(one, cfg);
  const TrainResult b = train_bc(two, cfg);
  for (size_t l = 0; l < a.net.w.size(); ++l)
    for (size_t j = 0; j < a.net.w[l].d.size(); ++j)
      EXPECT_NEAR(a.net.w[l].d[j], b.net.w[l].d[j], 1e-12);
}

TEST(TrainBc, DeterministicFromSeed) {
  const TrainingSet ts = synthetic_set(40, kStateDim, 7);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.hidden = {32, 32};
  cfg.seed = 11;
  const TrainResult a = train_bc(ts, cfg);
  const TrainResult b = train_bc(ts, cfg);
  for (size_t l = 0; l < a.net.w.size(); ++l)
    for (size_t j = 0; j < a.net.w[l].d.size(); ++j)
      EXPECT_EQ(a.net.w[l].d[j], b.net.w[l].d[j]);
}

TEST(TrainBc, LossCurveNonIncreasingWindows) {
  // Mean loss over consecutive 50-epoch windows never rises by more than
  // 10% (SGD noise allowance).
  const TrainingSet ts = synthetic_set(120, kStateDim, 8);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.hidden = {64, 64};
  cfg.seed = 13;
  const TrainResult r = train_bc(ts, cfg);
  ASSERT_EQ(r.loss_curve.size(), 400u);
  const int window = 50;
  for (size_t start = 0; start + 2 * window <= r.loss_curve.size(); start += window) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < window; ++i) {
      a += r.loss_curve[start + i];
      b += r.loss_curve[start + window + i];
    }
    EXPECT_LT(b, a * 1.10);
  }
}

TEST(TrainBc, EmptySetThrows) {
  TrainingSet ts;
  ts.state_dim = kStateDim;
  EXPECT_THROW(train_bc(ts, TrainConfig{}), Error);
}

}  // namespace
}  // namespace oaf
