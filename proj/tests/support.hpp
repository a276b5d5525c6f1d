#pragma once

// Test-side helpers and independent oracles shared by the suites. The kernel
// oracles here deliberately avoid the library's evaluation paths: the
// strict-tuple recursion below works on explicit per-level increment-product
// matrices, which is a different route from both the feature pipelines and
// the exact piecewise-linear kernel.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sigcurate/gram.hpp"
#include "sigcurate/rng.hpp"
#include "sigcurate/trajectory.hpp"

namespace test_support {

inline sigcurate::Trajectory random_path(sigcurate::Rng& rng, int length,
                                         int dim, double variation = 0.0) {
  sigcurate::Trajectory t;
  t.id = "r";
  t.points.resize(length, dim);
  for (int r = 0; r < length; ++r) {
    for (int c = 0; c < dim; ++c) t.points(r, c) = rng.normal();
  }
  if (variation > 0.0) t.points *= variation / t.one_variation();
  return t;
}

// sum over levels m of sum_{i_1<...<i_m, j_1<...<j_m} prod_p M_p(i_p, j_p)
inline double strict_tuple_kernel(const std::vector<Eigen::MatrixXd>& m_levels) {
  const int level = static_cast<int>(m_levels.size());
  Eigen::ArrayXXd r = m_levels[0].array();
  double total = 1.0 + r.sum();
  for (int m = 2; m <= level; ++m) {
    Eigen::ArrayXXd rows = Eigen::ArrayXXd::Zero(r.rows(), r.cols());
    for (Eigen::Index i = 1; i < r.rows(); ++i) {
      rows.row(i) = rows.row(i - 1) + r.row(i - 1);
    }
    Eigen::ArrayXXd both = Eigen::ArrayXXd::Zero(r.rows(), r.cols());
    for (Eigen::Index j = 1; j < r.cols(); ++j) {
      both.col(j) = both.col(j - 1) + rows.col(j - 1);
    }
    r = m_levels[m - 1].array() * both;
    total += r.sum();
  }
  return total;
}

// The expectation of every random Fourier signature estimator: the truncated
// signature kernel over sequences with increments lifted through the RBF
// base kernel, evaluated by cross-differencing k_rbf on the point grid.
inline double lifted_truncated_kernel(const sigcurate::Trajectory& x,
                                      const sigcurate::Trajectory& y, int level,
                                      double bandwidth) {
  const int p = x.length() - 1;
  const int q = y.length() - 1;
  auto k_rbf = [&](int i, int j) {
    return std::exp(-(x.points.row(i) - y.points.row(j)).squaredNorm() /
                    (2.0 * bandwidth * bandwidth));
  };
  Eigen::MatrixXd m(p, q);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < q; ++j) {
      m(i, j) = k_rbf(i + 1, j + 1) + k_rbf(i, j) - k_rbf(i + 1, j) - k_rbf(i, j + 1);
    }
  }
  return strict_tuple_kernel(std::vector<Eigen::MatrixXd>(level, m));
}

// Exact value of <rfsf_features(x), rfsf_features(y)> for given weights,
// computed without materializing the (2 rff_dim)^m tensors: per-level
// increment inner products of the scaled RFF maps feed the strict-tuple
// recursion.
inline double rfsf_kernel_reference(const sigcurate::Trajectory& x,
                                    const sigcurate::Trajectory& y,
                                    const std::vector<Eigen::MatrixXd>& weights) {
  auto increments = [](const sigcurate::Trajectory& t,
                       const Eigen::MatrixXd& w) {
    const int steps = t.length() - 1;
    Eigen::MatrixXd out(steps, 2 * w.rows());
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.rows()));
    Eigen::VectorXd prev(2 * w.rows());
    Eigen::VectorXd proj = w * t.points.row(0).transpose();
    prev << proj.array().cos().matrix(), proj.array().sin().matrix();
    for (int i = 0; i < steps; ++i) {
      proj = w * t.points.row(i + 1).transpose();
      Eigen::VectorXd cur(2 * w.rows());
      cur << proj.array().cos().matrix(), proj.array().sin().matrix();
      out.row(i) = scale * (cur - prev).transpose();
      prev = cur;
    }
    return out;
  };
  std::vector<Eigen::MatrixXd> m_levels;
  m_levels.reserve(weights.size());
  for (const auto& w : weights) {
    m_levels.push_back(increments(x, w) * increments(y, w).transpose());
  }
  return strict_tuple_kernel(m_levels);
}

// random normalized PSD gram: K = F F^T scaled to unit diagonal
inline sigcurate::GramMatrix random_normalized_gram(sigcurate::Rng& rng, int n,
                                                    int rank = 0) {
  if (rank <= 0) rank = n;
  Eigen::MatrixXd f(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) f(i, j) = rng.normal();
  }
  Eigen::MatrixXd k = f * f.transpose();
  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(k(i, i) + 1e-12);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) *= inv_sqrt(i) * inv_sqrt(j);
  }
  sigcurate::GramMatrix g;
  g.entries = 0.5 * (k + k.transpose());
  for (int i = 0; i < n; ++i) g.entries(i, i) = 1.0;
  for (int i = 0; i < n; ++i) g.ids.push_back("g" + std::to_string(i));
  g.normalized = true;
  return g;
}

}  // namespace test_support
