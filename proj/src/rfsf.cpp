#include "sigcurate/rfsf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sigcurate/rng.hpp"

namespace sigcurate {

namespace {

// [cos(W u); sin(W u)] with optional 1/sqrt(d~) scaling
Eigen::VectorXd rff_map(const Eigen::MatrixXd& weights, const Eigen::VectorXd& u,
                        bool scaled) {
  const Eigen::Index n = weights.rows();
  const Eigen::VectorXd proj = weights * u;
  Eigen::VectorXd out(2 * n);
  out.head(n) = proj.array().cos();
  out.tail(n) = proj.array().sin();
  if (scaled) out /= std::sqrt(static_cast<double>(n));
  return out;
}

// row i of the result is phi_m(x_{i+1}) - phi_m(x_i)
Eigen::MatrixXd feature_increments(const Eigen::MatrixXd& weights,
                                   const Trajectory& x, bool scaled) {
  const int steps = x.length() - 1;
  Eigen::MatrixXd out(steps, 2 * weights.rows());
  Eigen::VectorXd prev = rff_map(weights, x.points.row(0).transpose(), scaled);
  for (int i = 0; i < steps; ++i) {
    Eigen::VectorXd cur = rff_map(weights, x.points.row(i + 1).transpose(), scaled);
    out.row(i) = (cur - prev).transpose();
    prev.swap(cur);
  }
  return out;
}

void check_weights(const Trajectory& x,
                   const std::vector<Eigen::MatrixXd>& weights) {
  x.validate();
  if (weights.empty()) throw std::invalid_argument("no weight matrices given");
  for (const auto& w : weights) {
    if (w.cols() != x.dim()) {
      throw std::invalid_argument("weight matrix has " + std::to_string(w.cols()) +
                                  " columns, trajectory '" + x.id + "' has d=" +
                                  std::to_string(x.dim()));
    }
  }
}

}  // namespace

std::vector<Eigen::MatrixXd> make_rfsf_weights(int dim, int level, int rff_dim,
                                               double bandwidth,
                                               std::uint64_t seed) {
  if (dim < 1 || level < 1 || rff_dim < 1 || !(bandwidth > 0.0)) {
    throw std::invalid_argument("invalid random feature configuration");
  }
  std::vector<Eigen::MatrixXd> weights;
  weights.reserve(level);
  for (int m = 1; m <= level; ++m) {
    Rng rng = Rng::substream(seed, stream::kRfsfWeights,
                             static_cast<std::uint64_t>(m));
    Eigen::MatrixXd w(rff_dim, dim);
    for (int r = 0; r < rff_dim; ++r) {
      for (int c = 0; c < dim; ++c) w(r, c) = rng.normal() / bandwidth;
    }
    weights.push_back(std::move(w));
  }
  return weights;
}

std::vector<Eigen::MatrixXd> make_trp_projections(int level, int rff_dim,
                                                  std::uint64_t seed) {
  if (level < 1 || rff_dim < 1) {
    throw std::invalid_argument("invalid projection configuration");
  }
  std::vector<Eigen::MatrixXd> projections;
  projections.reserve(level);
  for (int m = 1; m <= level; ++m) {
    Rng rng = Rng::substream(seed, stream::kTrpProjections,
                             static_cast<std::uint64_t>(m));
    Eigen::MatrixXd p(2 * rff_dim, rff_dim);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      for (Eigen::Index r = 0; r < p.rows(); ++r) p(r, c) = rng.normal();
    }
    projections.push_back(std::move(p));
  }
  return projections;
}

Eigen::VectorXd rfsf_features(const Trajectory& x,
                              const std::vector<Eigen::MatrixXd>& weights,
                              std::size_t element_budget) {
  check_weights(x, weights);
  const int level = static_cast<int>(weights.size());
  const std::size_t width = 2 * static_cast<std::size_t>(weights.front().rows());
  std::size_t total = 1, level_size = 1;
  for (int m = 1; m <= level; ++m) {
    if (level_size > element_budget / width) {
      throw std::runtime_error(
          "full random Fourier signature features blow up as (2*rff_dim)^level; " +
          std::to_string(width / 2) + " frequencies at level " +
          std::to_string(level) + " exceed the element budget of " +
          std::to_string(element_budget) + " -- use the dp or trp variant");
    }
    level_size *= width;
    total += level_size;
  }

  // levels[m] after step t: sum over index tuples i_1 < ... < i_m <= t of
  // dphi_1(x_{i_1}) (x) ... (x) dphi_m(x_{i_m})
  std::vector<Eigen::VectorXd> levels(level + 1);
  levels[0] = Eigen::VectorXd::Ones(1);
  level_size = 1;
  for (int m = 1; m <= level; ++m) {
    level_size *= width;
    levels[m] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(level_size));
  }
  std::vector<Eigen::MatrixXd> deltas;
  deltas.reserve(level);
  for (int m = 0; m < level; ++m) {
    deltas.push_back(feature_increments(weights[m], x, /*scaled=*/true));
  }
  const int steps = x.length() - 1;
  const Eigen::Index zw = static_cast<Eigen::Index>(width);
  for (int t = 0; t < steps; ++t) {
    for (int m = level; m >= 1; --m) {  // descending: reads levels[m-1] pre-update
      const Eigen::VectorXd z = deltas[m - 1].row(t).transpose();
      const Eigen::VectorXd& lower = levels[m - 1];
      Eigen::VectorXd& target = levels[m];
      for (Eigen::Index u = 0; u < lower.size(); ++u) {
        if (lower(u) != 0.0) target.segment(u * zw, zw) += lower(u) * z;
      }
    }
  }

  Eigen::VectorXd out(static_cast<Eigen::Index>(total));
  Eigen::Index offset = 0;
  for (int m = 0; m <= level; ++m) {
    out.segment(offset, levels[m].size()) = levels[m];
    offset += levels[m].size();
  }
  return out;
}

Eigen::VectorXd rfsf_dp_features(const Trajectory& x,
                                 const std::vector<Eigen::MatrixXd>& weights) {
  check_weights(x, weights);
  const int level = static_cast<int>(weights.size());
  const int rff_dim = static_cast<int>(weights.front().rows());
  const double scale = 1.0 / std::sqrt(static_cast<double>(rff_dim));
  const int steps = x.length() - 1;

  std::vector<Eigen::MatrixXd> deltas;  // unscaled 2-dim maps per frequency
  deltas.reserve(level);
  for (int m = 0; m < level; ++m) {
    deltas.push_back(feature_increments(weights[m], x, /*scaled=*/false));
  }

  // layout: level-0 block of rff_dim entries, then per level m >= 1 the
  // per-frequency 2^m blocks in frequency order
  std::vector<Eigen::Index> level_offset(level + 1);
  level_offset[0] = 0;
  Eigen::Index out_dim = rff_dim;
  for (int m = 1; m <= level; ++m) {
    level_offset[m] = out_dim;
    out_dim += static_cast<Eigen::Index>(rff_dim) * (Eigen::Index(1) << m);
  }
  Eigen::VectorXd out(out_dim);
  out.head(rff_dim).setConstant(scale);

  std::vector<Eigen::VectorXd> levels(level + 1);
  for (int q = 0; q < rff_dim; ++q) {
    levels[0] = Eigen::VectorXd::Ones(1);
    for (int m = 1; m <= level; ++m) {
      levels[m] = Eigen::VectorXd::Zero(Eigen::Index(1) << m);
    }
    for (int t = 0; t < steps; ++t) {
      for (int m = level; m >= 1; --m) {
        const double zc = deltas[m - 1](t, q);
        const double zs = deltas[m - 1](t, rff_dim + q);
        const Eigen::VectorXd& lower = levels[m - 1];
        Eigen::VectorXd& target = levels[m];
        for (Eigen::Index u = 0; u < lower.size(); ++u) {
          target(2 * u) += lower(u) * zc;
          target(2 * u + 1) += lower(u) * zs;
        }
      }
    }
    for (int m = 1; m <= level; ++m) {
      out.segment(level_offset[m] + q * (Eigen::Index(1) << m),
                  Eigen::Index(1) << m) = scale * levels[m];
    }
  }
  return out;
}

Eigen::VectorXd rfsf_trp_features(
    const Trajectory& x, const std::vector<Eigen::MatrixXd>& weights,
    const std::vector<Eigen::MatrixXd>& projections) {
  check_weights(x, weights);
  if (projections.size() != weights.size()) {
    throw std::invalid_argument("projection count must match weight count");
  }
  const int level = static_cast<int>(weights.size());
  const int rff_dim = static_cast<int>(weights.front().rows());
  for (const auto& p : projections) {
    if (p.rows() != 2 * rff_dim || p.cols() != rff_dim) {
      throw std::invalid_argument("projection matrix must be 2*rff_dim x rff_dim");
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(rff_dim));
  const int steps = x.length() - 1;

  // levels[m](t) = levels[m](t-1) + (P_m^T dphi_m(t)) o levels[m-1](t-1)
  std::vector<Eigen::VectorXd> levels(level + 1);
  levels[0] = Eigen::VectorXd::Ones(rff_dim);
  for (int m = 1; m <= level; ++m) {
    levels[m] = Eigen::VectorXd::Zero(rff_dim);
  }
  std::vector<Eigen::MatrixXd> projected(level);  // steps x rff_dim
  for (int m = 0; m < level; ++m) {
    projected[m] =
        feature_increments(weights[m], x, /*scaled=*/true) * projections[m];
  }
  for (int t = 0; t < steps; ++t) {
    for (int m = level; m >= 1; --m) {
      levels[m].array() +=
          projected[m - 1].row(t).transpose().array() * levels[m - 1].array();
    }
  }

  Eigen::VectorXd out(static_cast<Eigen::Index>(level + 1) * rff_dim);
  for (int m = 0; m <= level; ++m) {
    out.segment(static_cast<Eigen::Index>(m) * rff_dim, rff_dim) =
        scale * levels[m];
  }
  return out;
}

Eigen::VectorXd rfsf_features(const Trajectory& x, const KernelConfig& cfg) {
  cfg.validate();
  return rfsf_features(x,
                       make_rfsf_weights(x.dim(), cfg.level, cfg.rff_dim,
                                         cfg.bandwidth, cfg.seed),
                       cfg.element_budget);
}

Eigen::VectorXd rfsf_dp_features(const Trajectory& x, const KernelConfig& cfg) {
  cfg.validate();
  return rfsf_dp_features(x, make_rfsf_weights(x.dim(), cfg.level, cfg.rff_dim,
                                               cfg.bandwidth, cfg.seed));
}

Eigen::VectorXd rfsf_trp_features(const Trajectory& x, const KernelConfig& cfg) {
  cfg.validate();
  return rfsf_trp_features(
      x,
      make_rfsf_weights(x.dim(), cfg.level, cfg.rff_dim, cfg.bandwidth,
                        cfg.seed),
      make_trp_projections(cfg.level, cfg.rff_dim, cfg.seed));
}

}  // namespace sigcurate
