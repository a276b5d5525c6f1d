#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "sigcurate/signature.hpp"
#include "sigcurate/trajectory.hpp"

namespace sigcurate {

enum class Backend { pde, truncated_dp, rfsf_dp, rfsf_trp };

Backend parse_backend(const std::string& name);
std::string backend_name(Backend backend);

struct KernelConfig {
  Backend backend = Backend::truncated_dp;
  int level = 5;           // truncation level L (truncated / feature backends)
  int pde_refinement = 3;  // dyadic subdivisions per increment pair: 2^refinement
  int rff_dim = 512;       // random feature count per level
  double bandwidth = 1.0;  // RBF base-kernel scale h
  std::uint64_t seed = 0;
  bool normalize = true;
  std::size_t element_budget = kDefaultElementBudget;

  void validate() const;
};

/// Truncated signature kernel <phi^L(x), phi^L(y)> of the piecewise-linear
/// interpolations, evaluated by dynamic programming over increment inner
/// products <dx_i, dy_j>; no order-k tensor is ever materialized.
double sig_kernel_truncated(const Trajectory& x, const Trajectory& y,
                            int level);

/// Untruncated signature kernel via the Goursat PDE
///   d^2 k / ds dt = <x'(s), y'(t)> k,  k(0,.) = k(.,0) = 1,
/// solved with an explicit second-order finite-difference scheme on a grid
/// with 2^refinement subdivisions per increment pair. Returns the corner
/// value. Throws if intermediates overflow (path scale too large; prescale).
double sig_kernel_pde(const Trajectory& x, const Trajectory& y,
                      int refinement);

/// exp(-|u - v|^2 / (2 h^2))
double rbf_kernel(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                  double bandwidth);

}  // namespace sigcurate
