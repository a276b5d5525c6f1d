#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sigcurate/kernels.hpp"
#include "sigcurate/trajectory.hpp"

namespace sigcurate {

/// Symmetric pairwise-kernel matrix over a dataset. After normalization the
/// diagonal is exactly 1 and off-diagonal entries lie in [-1, 1] up to
/// floating-point slack.
struct GramMatrix {
  Eigen::MatrixXd entries;
  std::vector<std::string> ids;
  bool normalized = false;

  int size() const { return static_cast<int>(entries.rows()); }

  /// Checks symmetry (1e-12), unit diagonal / entry bounds when normalized,
  /// and positive semidefiniteness down to -1e-8. Throws on violation.
  void validate() const;
};

struct GramDiagnostics {
  double raw_self_min = 0.0;  // self-kernel range before normalization
  double raw_self_max = 0.0;
  double max_one_variation = 0.0;
};

/// Assembles the pairwise kernel matrix with the configured backend. Only the
/// upper triangle is evaluated; pairs may run on several threads (capped by
/// the SIGCURATE_THREADS environment variable) with results written by index,
/// so the output is identical for any schedule.
GramMatrix gram(const std::vector<Trajectory>& dataset,
                const KernelConfig& cfg, GramDiagnostics* diag = nullptr);

/// Entrywise convex combination of Gram matrices over the same ids. Weights
/// must be nonnegative and sum to 1 within 1e-9.
GramMatrix mix_gram(const std::vector<GramMatrix>& grams,
                    const std::vector<double>& weights);

// Gram cache file: a text header
//   sigcurate-gram v1, n=<n>, backend=<name>, normalized=<bool>, seed=<u64>
// followed by n id lines, then the upper triangle (diagonal included) as
// little-endian 64-bit floats in row-major order.
void save_gram(const GramMatrix& g, const std::string& path,
               const std::string& backend, std::uint64_t seed);

GramMatrix load_gram(const std::string& path, std::string* backend_out = nullptr,
                     std::uint64_t* seed_out = nullptr);

}  // namespace sigcurate
