#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "oaf/dataset.hpp"
#include "oaf/errors.hpp"
#include "oaf/linalg.hpp"
#include "oaf/rng.hpp"

namespace oaf {

// Fully connected net with tanh hidden layers and a linear output layer.
struct MlpNet {
  std::vector<int> widths;      // [input, hidden..., output]
  std::vector<Mat> w;           // per layer: out x in
  std::vector<std::vector<double>> b;

  int input_dim() const { return widths.empty() ? 0 : widths.front(); }
  int output_dim() const { return widths.empty() ? 0 : widths.back(); }
  size_t layer_count() const { return w.size(); }

  size_t parameter_count() const {
    size_t n = 0;
    for (size_t l = 0; l < w.size(); ++l) n += w[l].d.size() + b[l].size();
    return n;
  }

  // Glorot-uniform initialisation, deterministic in the seed.
  static MlpNet init(const std::vector<int>& widths, uint64_t seed) {
    if (widths.size() < 2) throw ShapeMismatch("MlpNet: need input and output widths");
    MlpNet net;
    net.widths = widths;
    Rng rng(Rng::mix(seed, 0x313a9eULL));
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
      const int in = widths[l], out = widths[l + 1];
      Mat m(out, in);
      const double s = std::sqrt(6.0 / (in + out));
      for (double& v : m.d) v = rng.uniform(-s, s);
      net.w.push_back(std::move(m));
      net.b.emplace_back(out, 0.0);
    }
    return net;
  }
};

struct MlpGradients {
  std::vector<Mat> w;
  std::vector<std::vector<double>> b;

  static MlpGradients zeros_like(const MlpNet& net) {
    MlpGradients g;
    for (size_t l = 0; l < net.w.size(); ++l) {
      g.w.emplace_back(net.w[l].rows, net.w[l].cols);
      g.b.emplace_back(net.b[l].size(), 0.0);
    }
    return g;
  }
};

namespace detail {

inline void affine_forward(const MlpNet& net, size_t layer, const Mat& x, Mat& z) {
  linalg::gemm_nt(x, net.w[layer], z);
  const auto& bias = net.b[layer];
  for (int i = 0; i < z.rows; ++i) {
    double* zi = z.row(i);
    for (int j = 0; j < z.cols; ++j) zi[j] += bias[j];
  }
}

}  // namespace detail

// Batched forward pass; returns all post-activation values (acts[0] is the
// input, acts.back() the linear output).
inline void mlp_forward_batch(const MlpNet& net, const Mat& x, std::vector<Mat>& acts) {
  if (x.cols != net.input_dim()) throw ShapeMismatch("mlp_forward: input width mismatch");
  acts.assign(1, x);
  for (size_t l = 0; l < net.layer_count(); ++l) {
    Mat z;
    detail::affine_forward(net, l, acts.back(), z);
    if (l + 1 < net.layer_count())
      for (double& v : z.d) v = std::tanh(v);
    acts.push_back(std::move(z));
  }
}

inline std::vector<double> mlp_forward(const MlpNet& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw ShapeMismatch("mlp_forward: expected input of width " +
                        std::to_string(net.input_dim()));
  Mat in(1, net.input_dim());
  std::copy(x.begin(), x.end(), in.d.begin());
  std::vector<Mat> acts;
  mlp_forward_batch(net, in, acts);
  return acts.back().d;
}

// Exact analytic gradients of the batched forward map. grad_out is dL/dy for
// the linear output; acts must come from mlp_forward_batch on the same input.
inline MlpGradients mlp_backward_batch(const MlpNet& net, const std::vector<Mat>& acts,
                                       const Mat& grad_out) {
  MlpGradients g = MlpGradients::zeros_like(net);
  Mat delta = grad_out;  // dL/dz for the current layer
  for (int l = static_cast<int>(net.layer_count()) - 1; l >= 0; --l) {
    // dW = delta^T * a_prev; db = column sums of delta.
    linalg::gemm_tn(delta, acts[l], g.w[l]);
    for (int i = 0; i < delta.rows; ++i) {
      const double* di = delta.row(i);
      for (int j = 0; j < delta.cols; ++j) g.b[l][j] += di[j];
    }
    if (l == 0) break;
    Mat prev;
    linalg::gemm_nn(delta, net.w[l], prev);  // dL/da_{l-1}
    // Through tanh: dz = da * (1 - a^2).
    const Mat& a = acts[l];
    for (size_t i = 0; i < prev.d.size(); ++i) prev.d[i] *= 1.0 - a.d[i] * a.d[i];
    delta = std::move(prev);
  }
  return g;
}

// Single-sample convenience used by the gradient-check oracle.
inline MlpGradients mlp_backward(const MlpNet& net, std::span<const double> x,
                                 std::span<const double> grad_out) {
  Mat in(1, net.input_dim());
  std::copy(x.begin(), x.end(), in.d.begin());
  std::vector<Mat> acts;
  mlp_forward_batch(net, in, acts);
  if (static_cast<int>(grad_out.size()) != net.output_dim())
    throw ShapeMismatch("mlp_backward: grad width mismatch");
  Mat gout(1, net.output_dim());
  std::copy(grad_out.begin(), grad_out.end(), gout.d.begin());
  return mlp_backward_batch(net, acts, gout);
}

// Adam optimizer state (beta 0.9/0.999, eps 1e-8).
class Adam {
 public:
  explicit Adam(const MlpNet& net, double lr) : lr_(lr), m_(MlpGradients::zeros_like(net)),
                                                v_(MlpGradients::zeros_like(net)) {}

  void apply(MlpNet& net, const MlpGradients& g) {
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, t_);
    const double bc2 = 1.0 - std::pow(kBeta2, t_);
    for (size_t l = 0; l < net.w.size(); ++l) {
      update(net.w[l].d, g.w[l].d, m_.w[l].d, v_.w[l].d, bc1, bc2);
      update(net.b[l], g.b[l], m_.b[l], v_.b[l], bc1, bc2);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
              std::vector<double>& v, double bc1, double bc2) const {
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      p[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
    }
  }

  double lr_;
  int t_ = 0;
  MlpGradients m_, v_;
};

struct TrainConfig {
  int epochs = 500;
  double learning_rate = 1e-4;
  int batch_size = 64;
  uint64_t seed = 0;
  std::vector<int> hidden{256, 256, 256};
};

struct TrainResult {
  MlpNet net;
  double final_loss = 0.0;          // per-dimension mean squared error, last epoch
  std::vector<double> loss_curve;   // per-epoch mean loss
};

// Behaviour cloning: minimizes the per-dimension MSE between predicted and
// target chunks on the normalized training set.
inline TrainResult train_bc(const TrainingSet& ts, const TrainConfig& cfg) {
  if (ts.n == 0) throw Error("train_bc: empty training set");
  std::vector<int> widths;
  widths.push_back(ts.state_dim);
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(kChunkFlat);
  MlpNet net = MlpNet::init(widths, cfg.seed);
  Adam opt(net, cfg.learning_rate);
  Rng rng(Rng::mix(cfg.seed, 0x7a19ULL));

  // Normalize once.
  Mat xs(ts.n, ts.state_dim), ys(ts.n, kChunkFlat);
  for (int i = 0; i < ts.n; ++i) {
    const auto s = ts.norm.normalize_state(ts.state_row(i));
    std::copy(s.begin(), s.end(), xs.row(i));
    const auto y = ts.norm.normalize_target(ts.target_row(i));
    std::copy(y.begin(), y.end(), ys.row(i));
  }

  std::vector<int> order(ts.n);
  std::iota(order.begin(), order.end(), 0);
  const int bs = std::min(cfg.batch_size, ts.n);
  TrainResult result;
  double epoch_loss = 0.0;
  std::vector<Mat> acts;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates shuffle on the deterministic stream.
    for (int i = ts.n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
    epoch_loss = 0.0;
    int batches = 0;
    for (int start = 0; start < ts.n; start += bs) {
      const int count = std::min(bs, ts.n - start);
      Mat x(count, ts.state_dim), y(count, kChunkFlat);
      for (int i = 0; i < count; ++i) {
        std::copy(xs.row(order[start + i]), xs.row(order[start + i]) + ts.state_dim, x.row(i));
        std::copy(ys.row(order[start + i]), ys.row(order[start + i]) + kChunkFlat, y.row(i));
      }
      mlp_forward_batch(net, x, acts);
      Mat& pred = acts.back();
      double loss = 0.0;
      Mat grad(count, kChunkFlat);
      const double scale = 2.0 / (static_cast<double>(count) * kChunkFlat);
      for (size_t i = 0; i < pred.d.size(); ++i) {
        const double e = pred.d[i] - y.d[i];
        loss += e * e;
        grad.d[i] = scale * e;
      }
      loss /= static_cast<double>(count) * kChunkFlat;
      epoch_loss += loss;
      ++batches;
      opt.apply(net, mlp_backward_batch(net, acts, grad));
    }
    epoch_loss /= batches;
    result.loss_curve.push_back(epoch_loss);
  }
  result.net = std::move(net);
  result.final_loss = epoch_loss;
  return result;
}

}  // namespace oaf
