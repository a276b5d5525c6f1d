#pragma once

#include <Eigen/Dense>
#include <string>

#include "sigcurate/gram.hpp"

namespace sigcurate {

/// Diversity metrics derived from the spectrum of a normalized Gram matrix.
struct SpectrumReport {
  Eigen::VectorXd eigenvalues;  // of K/n, nonincreasing, clamped at 0
  double shannon_entropy = 0.0;
  double von_neumann_entropy = 0.0;
  double vendi_score = 1.0;
  double log_det_regularized = 0.0;
  double mu = 0.0;
  double effective_rank = 1.0;  // = vendi_score

  /// Flat JSON object; eigenvalues included only when verbose.
  std::string to_json(bool verbose) const;
};

/// -sum lambda ln lambda over the eigenvalues of K/n, with 0 ln 0 = 0.
/// Eigenvalues in [-1e-8, 0) are clamped to 0; below -1e-6 is an error.
double shannon_entropy(const GramMatrix& gram);

/// -Tr((K/n) ln(K/n)) evaluated through the matrix logarithm
/// U diag(ln lambda) U^T and an explicit matrix-product trace. Kept as a
/// separate code path from shannon_entropy; the two agree within 1e-8.
double von_neumann_entropy(const GramMatrix& gram);

/// exp(shannon_entropy): the effective number of distinct samples, in [1, n].
double vendi_score(const GramMatrix& gram);

/// det(K) — the squared volume spanned by the sample embeddings. 0 for
/// duplicates, 1 for mutually orthogonal samples.
double det_volume(const GramMatrix& gram);

/// log det(K + mu I) via a symmetric factorization; finite for any mu > 0.
double logdet_regularized(const GramMatrix& gram, double mu);

SpectrumReport compute_spectrum(const GramMatrix& gram, double mu);

}  // namespace sigcurate
