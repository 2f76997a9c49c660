#pragma once

#include <cmath>
#include <vector>

#include "oaf/mlp.hpp"

namespace oaf {

inline constexpr int kTimeEmbedDim = 32;

// Per-step coefficients of the denoising chain, all derived from one beta
// sequence. step_scale and noise_coef are the alpha/gamma pair of the update
//   A_{k-1} = step_scale_k * (A_k - noise_coef_k * eps_theta(...)) + N(0, sigma_k^2 I)
// with sigma_k^2 = beta_k and sigma_1 = 0 so the final step is noiseless.
struct DdpmSchedule {
  int steps = 50;
  std::vector<double> beta;        // index k-1 holds beta_k
  std::vector<double> alpha_bar;   // cumulative product of (1 - beta)
  std::vector<double> step_scale;  // 1 / sqrt(1 - beta_k)
  std::vector<double> noise_coef;  // beta_k / sqrt(1 - alpha_bar_k)
  std::vector<double> sigma;       // sqrt(beta_k), zero at the final step

  static DdpmSchedule from_beta(std::vector<double> beta) {
    DdpmSchedule s;
    s.steps = static_cast<int>(beta.size());
    s.beta = std::move(beta);
    s.alpha_bar.resize(s.steps);
    s.step_scale.resize(s.steps);
    s.noise_coef.resize(s.steps);
    s.sigma.resize(s.steps);
    double prod = 1.0;
    for (int k = 1; k <= s.steps; ++k) {
      const double b = s.beta[k - 1];
      const double alpha = 1.0 - b;
      prod *= alpha;
      s.alpha_bar[k - 1] = prod;
      s.step_scale[k - 1] = 1.0 / std::sqrt(alpha);
      s.noise_coef[k - 1] = b / std::sqrt(1.0 - prod);
      s.sigma[k - 1] = k == 1 ? 0.0 : std::sqrt(b);
    }
    return s;
  }

  // Linear beta schedule. The endpoints are the canonical 1000-step values
  // rescaled by 1000/steps, which keeps alpha_bar at the last step near zero
  // for short chains; without the rescaling the reverse process would start
  // from a prior far from the forward marginal and sampling would be biased.
  static DdpmSchedule linear(int steps = 50) {
    const double scale = 1000.0 / steps;
    const double beta_lo = 1e-4 * scale, beta_hi = 0.02 * scale;
    std::vector<double> beta(steps);
    for (int k = 1; k <= steps; ++k)
      beta[k - 1] = steps == 1 ? beta_lo
                               : beta_lo + (beta_hi - beta_lo) * (k - 1) / (steps - 1);
    return from_beta(std::move(beta));
  }
};

// Sinusoidal embedding of the diffusion step index.
inline std::vector<double> time_embedding(int k) {
  std::vector<double> e(kTimeEmbedDim);
  const int half = kTimeEmbedDim / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::pow(10000.0, -static_cast<double>(i) / half);
    e[2 * i] = std::sin(k * freq);
    e[2 * i + 1] = std::cos(k * freq);
  }
  return e;
}

inline int ddpm_input_dim(int state_dim) { return state_dim + kTimeEmbedDim + kChunkFlat; }

namespace detail {

inline void assemble_ddpm_input(std::span<const double> state, int k,
                                std::span<const double> chunk, double* out) {
  std::copy(state.begin(), state.end(), out);
  const auto emb = time_embedding(k);
  std::copy(emb.begin(), emb.end(), out + state.size());
  std::copy(chunk.begin(), chunk.end(), out + state.size() + emb.size());
}

}  // namespace detail

struct DdpmStepResult {
  double loss = 0.0;  // squared L2 between true and predicted noise
  MlpGradients grads;
  int k = 0;
};

// Deterministic core of the training step: corrupts the target chunk at step
// k with the given noise and scores the net's noise prediction. Exposed so
// tests can inject degenerate noise.
inline DdpmStepResult ddpm_train_step_with_noise(const MlpNet& net, const DdpmSchedule& sched,
                                                 std::span<const double> state_norm,
                                                 std::span<const double> target_norm, int k,
                                                 std::span<const double> noise) {
  const double ab = sched.alpha_bar[k - 1];
  std::vector<double> corrupted(kChunkFlat);
  for (int i = 0; i < kChunkFlat; ++i)
    corrupted[i] = std::sqrt(ab) * target_norm[i] + std::sqrt(1.0 - ab) * noise[i];

  Mat x(1, ddpm_input_dim(static_cast<int>(state_norm.size())));
  detail::assemble_ddpm_input(state_norm, k, corrupted, x.row(0));
  std::vector<Mat> acts;
  mlp_forward_batch(net, x, acts);
  const Mat& pred = acts.back();

  DdpmStepResult r;
  r.k = k;
  Mat grad(1, kChunkFlat);
  for (int i = 0; i < kChunkFlat; ++i) {
    const double e = pred.d[i] - noise[i];
    r.loss += e * e;
    grad.d[i] = 2.0 * e;
  }
  r.grads = mlp_backward_batch(net, acts, grad);
  return r;
}

// Samples the diffusion step uniformly and the corruption noise from the
// schedule's forward process.
inline DdpmStepResult ddpm_train_step(const MlpNet& net, const DdpmSchedule& sched,
                                      std::span<const double> state_norm,
                                      std::span<const double> target_norm, Rng& rng) {
  const int k = rng.uniform_int(1, sched.steps);
  std::vector<double> noise(kChunkFlat);
  for (double& v : noise) v = rng.normal();
  return ddpm_train_step_with_noise(net, sched, state_norm, target_norm, k, noise);
}

// Ancestral sampling from pure noise down to k = 1; returns the normalized
// chunk vector.
inline std::vector<double> ddpm_sample(const MlpNet& net, const DdpmSchedule& sched,
                                       std::span<const double> state_norm, Rng& rng) {
  std::vector<double> a(kChunkFlat);
  for (double& v : a) v = rng.normal();
  std::vector<Mat> acts;
  for (int k = sched.steps; k >= 1; --k) {
    Mat x(1, ddpm_input_dim(static_cast<int>(state_norm.size())));
    detail::assemble_ddpm_input(state_norm, k, a, x.row(0));
    mlp_forward_batch(net, x, acts);
    const Mat& pred = acts.back();
    const double scale = sched.step_scale[k - 1];
    const double coef = sched.noise_coef[k - 1];
    for (int i = 0; i < kChunkFlat; ++i) a[i] = scale * (a[i] - coef * pred.d[i]);
    if (k > 1) {
      const double s = sched.sigma[k - 1];
      if (s > 0.0)
        for (double& v : a) v += s * rng.normal();
    }
  }
  return a;
}

// Noise-prediction training over the normalized training set. Gradients are
// averaged per dimension across the batch; the reported loss follows the
// per-sample squared-L2 convention of ddpm_train_step.
inline TrainResult train_ddpm(const TrainingSet& ts, const TrainConfig& cfg,
                              const DdpmSchedule& sched) {
  if (ts.n == 0) throw Error("train_ddpm: empty training set");
  std::vector<int> widths;
  widths.push_back(ddpm_input_dim(ts.state_dim));
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(kChunkFlat);
  MlpNet net = MlpNet::init(widths, cfg.seed);
  Adam opt(net, cfg.learning_rate);
  Rng rng(Rng::mix(cfg.seed, 0xdd91ULL));

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
  const int in_dim = ddpm_input_dim(ts.state_dim);
  TrainResult result;
  double epoch_loss = 0.0;
  std::vector<Mat> acts;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int i = ts.n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
    epoch_loss = 0.0;
    int batches = 0;
    for (int start = 0; start < ts.n; start += bs) {
      const int count = std::min(bs, ts.n - start);
      Mat x(count, in_dim);
      Mat eps(count, kChunkFlat);
      for (int i = 0; i < count; ++i) {
        const int row = order[start + i];
        const int k = rng.uniform_int(1, sched.steps);
        const double ab = sched.alpha_bar[k - 1];
        double* ei = eps.row(i);
        std::vector<double> corrupted(kChunkFlat);
        for (int j = 0; j < kChunkFlat; ++j) {
          ei[j] = rng.normal();
          corrupted[j] = std::sqrt(ab) * ys.at(row, j) + std::sqrt(1.0 - ab) * ei[j];
        }
        detail::assemble_ddpm_input({xs.row(row), static_cast<size_t>(ts.state_dim)}, k,
                                    corrupted, x.row(i));
      }
      mlp_forward_batch(net, x, acts);
      Mat& pred = acts.back();
      double loss = 0.0;
      Mat grad(count, kChunkFlat);
      const double scale = 2.0 / (static_cast<double>(count) * kChunkFlat);
      for (size_t i = 0; i < pred.d.size(); ++i) {
        const double e = pred.d[i] - eps.d[i];
        loss += e * e;
        grad.d[i] = scale * e;
      }
      epoch_loss += loss / count;
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
