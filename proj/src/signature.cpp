#include "sigcurate/signature.hpp"

#include <stdexcept>
#include <string>

namespace sigcurate {

namespace {

// total dense entries across levels 0..L for dimension d
std::size_t dense_entry_count(int dim, int level) {
  std::size_t total = 0;
  std::size_t level_size = 1;
  for (int k = 0; k <= level; ++k) {
    total += level_size;
    if (k < level) {
      if (level_size > std::size_t(-1) / static_cast<std::size_t>(dim)) {
        return std::size_t(-1);  // saturate on overflow
      }
      level_size *= static_cast<std::size_t>(dim);
    }
  }
  return total;
}

}  // namespace

TruncatedSignature::TruncatedSignature(int dim, int level)
    : dim_(dim), level_(level) {
  if (dim < 1) throw std::invalid_argument("signature dimension must be >= 1");
  if (level < 1) throw std::invalid_argument("signature level must be >= 1");
  levels_.reserve(level + 1);
  std::size_t size = 1;
  for (int k = 0; k <= level; ++k) {
    levels_.emplace_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size)));
    size *= static_cast<std::size_t>(dim);
  }
  levels_[0](0) = 1.0;
}

TruncatedSignature TruncatedSignature::of_segment(
    const Eigen::VectorXd& increment, int level) {
  TruncatedSignature sig(static_cast<int>(increment.size()), level);
  const int d = sig.dim();
  for (int k = 1; k <= level; ++k) {
    const Eigen::VectorXd& prev = sig.levels_[k - 1];
    Eigen::VectorXd& cur = sig.levels_[k];
    // level k = (level k-1) (x) increment / k
    for (Eigen::Index i = 0; i < prev.size(); ++i) {
      cur.segment(i * d, d) = prev(i) / static_cast<double>(k) * increment;
    }
  }
  return sig;
}

TruncatedSignature truncated_signature(const Trajectory& x, int level,
                                       std::size_t element_budget) {
  x.validate();
  if (level < 1) throw std::invalid_argument("signature level must be >= 1");
  const int d = x.dim();
  const std::size_t entries = dense_entry_count(d, level);
  if (entries > element_budget) {
    throw std::runtime_error(
        "dense signature of dimension " + std::to_string(d) + " at level " +
        std::to_string(level) + " needs " + std::to_string(entries) +
        " entries, over the budget of " + std::to_string(element_budget));
  }
  TruncatedSignature acc = TruncatedSignature::of_segment(
      (x.points.row(1) - x.points.row(0)).transpose(), level);
  for (int t = 1; t + 1 < x.length(); ++t) {
    acc = tensor_concat_product(
        acc, TruncatedSignature::of_segment(
                 (x.points.row(t + 1) - x.points.row(t)).transpose(), level));
  }
  return acc;
}

TruncatedSignature tensor_concat_product(const TruncatedSignature& a,
                                         const TruncatedSignature& b) {
  if (a.dim() != b.dim() || a.level() != b.level()) {
    throw std::invalid_argument(
        "tensor_concat_product: dimension/level mismatch (" +
        std::to_string(a.dim()) + "^" + std::to_string(a.level()) + " vs " +
        std::to_string(b.dim()) + "^" + std::to_string(b.level()) + ")");
  }
  TruncatedSignature out(a.dim(), a.level());
  for (int k = 0; k <= a.level(); ++k) {
    Eigen::VectorXd& dst = out.level_tensor(k);
    dst.setZero();
    for (int i = 0; i <= k; ++i) {
      const Eigen::VectorXd& ai = a.level_tensor(i);
      const Eigen::VectorXd& bj = b.level_tensor(k - i);
      // dst[u * |bj| + v] += ai[u] * bj[v]
      for (Eigen::Index u = 0; u < ai.size(); ++u) {
        if (ai(u) != 0.0) dst.segment(u * bj.size(), bj.size()) += ai(u) * bj;
      }
    }
  }
  return out;
}

double signature_inner(const TruncatedSignature& a,
                       const TruncatedSignature& b) {
  if (a.dim() != b.dim() || a.level() != b.level()) {
    throw std::invalid_argument("signature_inner: dimension/level mismatch");
  }
  double total = 0.0;
  for (int k = 0; k <= a.level(); ++k) {
    total += a.level_tensor(k).dot(b.level_tensor(k));
  }
  return total;
}

}  // namespace sigcurate
