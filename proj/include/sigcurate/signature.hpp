#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "sigcurate/trajectory.hpp"

namespace sigcurate {

constexpr std::size_t kDefaultElementBudget = 100'000'000;

/// Dense truncated signature: one flat order-k tensor per level k = 0..L,
/// level k holding d^k entries in row-major index order. Level 0 is the
/// scalar 1.
class TruncatedSignature {
 public:
  // unit signature (1, 0, 0, ...)
  TruncatedSignature(int dim, int level);

  // signature of a single linear segment: level k = increment^(x)k / k!
  static TruncatedSignature of_segment(const Eigen::VectorXd& increment,
                                       int level);

  int dim() const { return dim_; }
  int level() const { return level_; }

  const Eigen::VectorXd& level_tensor(int k) const { return levels_[k]; }
  Eigen::VectorXd& level_tensor(int k) { return levels_[k]; }

  double level_norm(int k) const { return levels_[k].norm(); }

 private:
  int dim_;
  int level_;
  std::vector<Eigen::VectorXd> levels_;
};

/// Exact truncated signature of the piecewise-linear interpolation of x,
/// built from segment exponentials chained with tensor_concat_product.
/// Throws if the dense representation would exceed element_budget entries.
TruncatedSignature truncated_signature(
    const Trajectory& x, int level,
    std::size_t element_budget = kDefaultElementBudget);

/// Concatenation product: level k of the result is sum_{i+j=k} a_i (x) b_j.
/// This is the signature of the concatenated path when a and b are signatures
/// of consecutive segments.
TruncatedSignature tensor_concat_product(const TruncatedSignature& a,
                                         const TruncatedSignature& b);

/// Sum over levels of Frobenius inner products. The dense counterpart of the
/// dynamic-programming kernel; kept as an independent evaluation route.
double signature_inner(const TruncatedSignature& a,
                       const TruncatedSignature& b);

}  // namespace sigcurate
