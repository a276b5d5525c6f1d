#include "sigcurate/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sigcurate {

Backend parse_backend(const std::string& name) {
  if (name == "pde") return Backend::pde;
  if (name == "truncated_dp") return Backend::truncated_dp;
  if (name == "rfsf_dp") return Backend::rfsf_dp;
  if (name == "rfsf_trp") return Backend::rfsf_trp;
  throw std::invalid_argument(
      "unknown backend '" + name +
      "' (expected pde, truncated_dp, rfsf_dp or rfsf_trp)");
}

std::string backend_name(Backend backend) {
  switch (backend) {
    case Backend::pde: return "pde";
    case Backend::truncated_dp: return "truncated_dp";
    case Backend::rfsf_dp: return "rfsf_dp";
    case Backend::rfsf_trp: return "rfsf_trp";
  }
  throw std::logic_error("unreachable backend");
}

void KernelConfig::validate() const {
  if (level < 1) throw std::invalid_argument("kernel level must be >= 1");
  if (pde_refinement < 0) throw std::invalid_argument("pde_refinement must be >= 0");
  if (rff_dim < 1) throw std::invalid_argument("rff_dim must be >= 1");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
}

namespace {

void check_same_dim(const Trajectory& x, const Trajectory& y) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument("kernel dimension mismatch: '" + x.id + "' has d=" +
                                std::to_string(x.dim()) + ", '" + y.id +
                                "' has d=" + std::to_string(y.dim()));
  }
}

Eigen::MatrixXd increments(const Trajectory& x) {
  const int p = x.length() - 1;
  Eigen::MatrixXd dx(p, x.dim());
  for (int i = 0; i < p; ++i) {
    dx.row(i) = x.points.row(i + 1) - x.points.row(i);
  }
  return dx;
}

// exclusive prefix sums: out(i, j) = sum_{i' < i} in(i', j)
Eigen::ArrayXXd excl_cumsum_rows(const Eigen::ArrayXXd& in) {
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(in.rows(), in.cols());
  for (Eigen::Index i = 1; i < in.rows(); ++i) {
    out.row(i) = out.row(i - 1) + in.row(i - 1);
  }
  return out;
}

Eigen::ArrayXXd excl_cumsum_cols(const Eigen::ArrayXXd& in) {
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(in.rows(), in.cols());
  for (Eigen::Index j = 1; j < in.cols(); ++j) {
    out.col(j) = out.col(j - 1) + in.col(j - 1);
  }
  return out;
}

}  // namespace

// Walk formulation: expanding both signatures over segment exponentials turns
// <phi^L(x), phi^L(y)> into a sum over jointly nondecreasing index walks on
// the segment grid, where a repeated index accumulates a 1/count factorial
// weight. R[a][b](i, j) holds the mass of length-m walks currently at cell
// (i, j) whose tail has repeated i exactly a+1 times and j exactly b+1 times.
double sig_kernel_truncated(const Trajectory& x, const Trajectory& y,
                            int level) {
  check_same_dim(x, y);
  x.validate();
  y.validate();
  if (level < 1) throw std::invalid_argument("kernel level must be >= 1");

  const Eigen::MatrixXd dx = increments(x);
  const Eigen::MatrixXd dy = increments(y);
  const Eigen::ArrayXXd m_grid = (dx * dy.transpose()).array();

  std::vector<std::vector<Eigen::ArrayXXd>> reps(1);
  reps[0].push_back(m_grid);  // level 1
  double total = 1.0 + m_grid.sum();

  for (int m = 2; m <= level; ++m) {
    const int prev = static_cast<int>(reps.size());
    std::vector<std::vector<Eigen::ArrayXXd>> next(
        prev + 1, std::vector<Eigen::ArrayXXd>(
                      prev + 1, Eigen::ArrayXXd::Zero(m_grid.rows(), m_grid.cols())));

    Eigen::ArrayXXd sum_all = Eigen::ArrayXXd::Zero(m_grid.rows(), m_grid.cols());
    for (int a = 0; a < prev; ++a) {
      for (int b = 0; b < prev; ++b) sum_all += reps[a][b];
    }
    next[0][0] = m_grid * excl_cumsum_rows(excl_cumsum_cols(sum_all));

    for (int a = 0; a < prev; ++a) {
      Eigen::ArrayXXd row_sum = Eigen::ArrayXXd::Zero(m_grid.rows(), m_grid.cols());
      for (int b = 0; b < prev; ++b) row_sum += reps[a][b];
      next[a + 1][0] = m_grid / static_cast<double>(a + 2) * excl_cumsum_cols(row_sum);
    }
    for (int b = 0; b < prev; ++b) {
      Eigen::ArrayXXd col_sum = Eigen::ArrayXXd::Zero(m_grid.rows(), m_grid.cols());
      for (int a = 0; a < prev; ++a) col_sum += reps[a][b];
      next[0][b + 1] = m_grid / static_cast<double>(b + 2) * excl_cumsum_rows(col_sum);
    }
    for (int a = 0; a < prev; ++a) {
      for (int b = 0; b < prev; ++b) {
        next[a + 1][b + 1] +=
            m_grid / static_cast<double>((a + 2) * (b + 2)) * reps[a][b];
      }
    }

    for (const auto& row : next) {
      for (const auto& arr : row) total += arr.sum();
    }
    reps = std::move(next);
  }
  return total;
}

double sig_kernel_pde(const Trajectory& x, const Trajectory& y, int refinement) {
  check_same_dim(x, y);
  x.validate();
  y.validate();
  if (refinement < 0) throw std::invalid_argument("refinement must be >= 0");

  const Eigen::MatrixXd dx = increments(x);
  const Eigen::MatrixXd dy = increments(y);
  const int p = static_cast<int>(dx.rows());
  const int q = static_cast<int>(dy.rows());
  const int sub = 1 << refinement;
  // increment inner products per subdivided cell
  const Eigen::MatrixXd cell =
      (dx * dy.transpose()) / static_cast<double>(sub) / static_cast<double>(sub);

  const Eigen::Index cols = static_cast<Eigen::Index>(q) * sub + 1;
  Eigen::VectorXd prev_row = Eigen::VectorXd::Ones(cols);
  Eigen::VectorXd cur_row(cols);
  for (int gi = 0; gi < p * sub; ++gi) {
    cur_row(0) = 1.0;
    const int i = gi / sub;
    for (int gj = 0; gj < q * sub; ++gj) {
      const double c = cell(i, gj / sub);
      // explicit second-order update for d2k/dsdt = c * k
      cur_row(gj + 1) =
          (cur_row(gj) + prev_row(gj + 1)) * (1.0 + 0.5 * c + c * c / 12.0) -
          prev_row(gj) * (1.0 - c * c / 12.0);
    }
    if (!cur_row.allFinite()) {
      throw std::runtime_error(
          "signature PDE solve diverged for pair ('" + x.id + "', '" + y.id +
          "'): path scale too large, consider a smaller prescale");
    }
    prev_row.swap(cur_row);
  }
  return prev_row(cols - 1);
}

double rbf_kernel(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                  double bandwidth) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("rbf_kernel: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  return std::exp(-(u - v).squaredNorm() / (2.0 * bandwidth * bandwidth));
}

}  // namespace sigcurate
