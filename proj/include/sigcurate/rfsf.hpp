#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sigcurate/kernels.hpp"
#include "sigcurate/trajectory.hpp"

namespace sigcurate {

/// Per-level random Fourier frequency matrices W^(1..L), each rff_dim x d,
/// entries drawn i.i.d. N(0, 1/h^2) — the spectral measure of the RBF kernel
/// with bandwidth h. Levels use independent substreams of the root seed, so
/// the same seed yields the same weights for every trajectory and backend.
std::vector<Eigen::MatrixXd> make_rfsf_weights(int dim, int level, int rff_dim,
                                               double bandwidth,
                                               std::uint64_t seed);

/// Per-level Gaussian projection matrices P^(1..L), each 2*rff_dim x rff_dim,
/// entries i.i.d. N(0, 1).
std::vector<Eigen::MatrixXd> make_trp_projections(int level, int rff_dim,
                                                  std::uint64_t seed);

// Explicit-weight entry points; the config overloads below derive weights
// from cfg.seed. Tests use these to vary one randomness source at a time.
Eigen::VectorXd rfsf_features(const Trajectory& x,
                              const std::vector<Eigen::MatrixXd>& weights,
                              std::size_t element_budget);
Eigen::VectorXd rfsf_dp_features(const Trajectory& x,
                                 const std::vector<Eigen::MatrixXd>& weights);
Eigen::VectorXd rfsf_trp_features(
    const Trajectory& x, const std::vector<Eigen::MatrixXd>& weights,
    const std::vector<Eigen::MatrixXd>& projections);

/// Full tensor-product random Fourier signature features, dimension
/// sum_{m<=L} (2 d~)^m. Guarded by cfg.element_budget; the practical variants
/// are the DP and TRP projections below.
Eigen::VectorXd rfsf_features(const Trajectory& x, const KernelConfig& cfg);

/// Diagonal projection: keeps only matching frequency indices across levels.
/// Dimension rff_dim * (2^(L+1) - 1).
Eigen::VectorXd rfsf_dp_features(const Trajectory& x, const KernelConfig& cfg);

/// Tensor random projection: rank-1 Gaussian compression of each level to
/// rff_dim entries via Hadamard products; total dimension (L+1) * rff_dim.
Eigen::VectorXd rfsf_trp_features(const Trajectory& x,
                                  const KernelConfig& cfg);

}  // namespace sigcurate
