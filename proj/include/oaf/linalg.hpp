#pragma once

#include <cstddef>
#include <vector>

namespace oaf {

// Dense row-major matrix buffer for the learner stack.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * c, 0.0) {}

  double* row(int r) { return d.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return d.data() + static_cast<size_t>(r) * cols; }
  double& at(int r, int c) { return d[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return d[static_cast<size_t>(r) * cols + c]; }
};

namespace linalg {

// C = A * B^T.   A: m x k, B: n x k, C: m x n.
inline void gemm_nt(const Mat& a, const Mat& b, Mat& c) {
  c = Mat(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += ai[k] * bj[k];
      ci[j] = acc;
    }
  }
}

// C = A * B.   A: m x k, B: k x n, C: m x n.
inline void gemm_nn(const Mat& a, const Mat& b, Mat& c) {
  c = Mat(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double v = ai[k];
      const double* bk = b.row(k);
      for (int j = 0; j < b.cols; ++j) ci[j] += v * bk[j];
    }
  }
}

// C = A^T * B.   A: k x m, B: k x n, C: m x n.
inline void gemm_tn(const Mat& a, const Mat& b, Mat& c) {
  c = Mat(a.cols, b.cols);
  for (int k = 0; k < a.rows; ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (int i = 0; i < a.cols; ++i) {
      const double v = ak[i];
      double* ci = c.row(i);
      for (int j = 0; j < b.cols; ++j) ci[j] += v * bk[j];
    }
  }
}

}  // namespace linalg
}  // namespace oaf
