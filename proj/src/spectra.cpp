#include "sigcurate/spectra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace sigcurate {

namespace {

constexpr double kEigErrorTolerance = 1e-6;  // below this the gram is invalid

void require_normalized(const GramMatrix& gram, const char* op) {
  if (!gram.normalized) {
    throw std::invalid_argument(std::string(op) +
                                ": gram matrix must be normalized");
  }
}

// eigenvalues of K/n with tiny negatives clamped to zero; hard error on
// genuinely negative spectra
Eigen::VectorXd trace_normalized_eigenvalues(const Eigen::MatrixXd& k) {
  const double n = static_cast<double>(k.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k / n,
                                                        Eigen::EigenvaluesOnly);
  Eigen::VectorXd lambda = solver.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -kEigErrorTolerance) {
      throw std::invalid_argument("gram matrix has eigenvalue " +
                                  std::to_string(lambda(i)) +
                                  " below tolerance; not a valid kernel matrix");
    }
    if (lambda(i) < 0.0) lambda(i) = 0.0;
  }
  return lambda;
}

double entropy_of(const Eigen::VectorXd& lambda) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0.0) h -= lambda(i) * std::log(lambda(i));
  }
  return h;
}

}  // namespace

double shannon_entropy(const GramMatrix& gram) {
  require_normalized(gram, "shannon_entropy");
  return entropy_of(trace_normalized_eigenvalues(gram.entries));
}

double von_neumann_entropy(const GramMatrix& gram) {
  require_normalized(gram, "von_neumann_entropy");
  const double n = static_cast<double>(gram.size());
  const Eigen::MatrixXd m = gram.entries / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  Eigen::VectorXd log_lambda(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -kEigErrorTolerance) {
      throw std::invalid_argument("gram matrix has eigenvalue " +
                                  std::to_string(lambda(i)) +
                                  " below tolerance; not a valid kernel matrix");
    }
    // ln on the clamped spectrum; zero modes contribute 0 * ln 0 = 0
    log_lambda(i) = lambda(i) > 0.0 ? std::log(lambda(i)) : 0.0;
  }
  const Eigen::MatrixXd log_m = solver.eigenvectors() *
                                log_lambda.asDiagonal() *
                                solver.eigenvectors().transpose();
  return -(m * log_m).trace();
}

double vendi_score(const GramMatrix& gram) {
  return std::exp(shannon_entropy(gram));
}

double det_volume(const GramMatrix& gram) {
  require_normalized(gram, "det_volume");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram.entries,
                                                        Eigen::EigenvaluesOnly);
  double det = 1.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    det *= solver.eigenvalues()(i);
  }
  if (det < 0.0 && det > -1e-10) det = 0.0;  // reporting floor
  return det;
}

double logdet_regularized(const GramMatrix& gram, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("logdet regularizer must be > 0");
  const int n = gram.size();
  Eigen::MatrixXd shifted = gram.entries;
  shifted.diagonal().array() += mu;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("logdet factorization failed; gram not PSD within mu");
  }
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
  return 2.0 * logdet;
}

SpectrumReport compute_spectrum(const GramMatrix& gram, double mu) {
  require_normalized(gram, "compute_spectrum");
  SpectrumReport report;
  Eigen::VectorXd lambda = trace_normalized_eigenvalues(gram.entries);
  report.eigenvalues = lambda.reverse();  // nonincreasing
  report.shannon_entropy = entropy_of(lambda);
  report.von_neumann_entropy = von_neumann_entropy(gram);
  report.vendi_score = std::exp(report.shannon_entropy);
  report.effective_rank = report.vendi_score;
  report.mu = mu;
  report.log_det_regularized = logdet_regularized(gram, mu);
  return report;
}

std::string SpectrumReport::to_json(bool verbose) const {
  nlohmann::ordered_json j;
  j["shannon_entropy"] = shannon_entropy;
  j["von_neumann_entropy"] = von_neumann_entropy;
  j["vendi_score"] = vendi_score;
  j["effective_rank"] = effective_rank;
  j["log_det_regularized"] = log_det_regularized;
  j["mu"] = mu;
  if (verbose) {
    j["eigenvalues"] = std::vector<double>(
        eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  }
  return j.dump(2);
}

}  // namespace sigcurate
