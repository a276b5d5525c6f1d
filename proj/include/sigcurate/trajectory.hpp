#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace sigcurate {

/// A variable-length sequence of fixed-dimension points; the unit of kernel
/// evaluation. Rows are timesteps, columns are feature coordinates.
struct Trajectory {
  std::string id;
  Eigen::MatrixXd points;  // T x d, T >= 2, d >= 1

  int length() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  // total 1-variation: sum of increment norms
  double one_variation() const;

  void validate() const;  // throws std::invalid_argument on violation
};

/// A bundle of per-timestep modality channels (state, action, observation,
/// reward, ...) sharing a common length.
struct Demonstration {
  std::string id;
  std::map<std::string, Eigen::MatrixXd> channels;  // name -> T x d_channel

  int length() const;  // common T across channels

  void validate() const;
};

/// Knobs for turning demonstrations into kernel-ready trajectories.
struct PathConfig {
  std::vector<std::string> channel_selection;  // empty = all channels, name order
  int subsample_stride = 1;
  bool augment_time = false;
  bool standardize = true;
  double prescale = 1.0;

  void validate() const;
};

}  // namespace sigcurate
