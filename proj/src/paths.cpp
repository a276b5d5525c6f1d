#include "sigcurate/paths.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcurate {

Trajectory flatten_stack(const Demonstration& demo, const PathConfig& cfg) {
  demo.validate();
  std::vector<std::string> selection = cfg.channel_selection;
  if (selection.empty()) {
    for (const auto& [name, data] : demo.channels) selection.push_back(name);
  }
  int total_dim = 0;
  for (const auto& name : selection) {
    auto it = demo.channels.find(name);
    if (it == demo.channels.end()) {
      throw std::invalid_argument("demonstration '" + demo.id +
                                  "': requested channel '" + name +
                                  "' is not present");
    }
    total_dim += static_cast<int>(it->second.cols());
  }
  const int t = demo.length();
  Trajectory traj;
  traj.id = demo.id;
  traj.points.resize(t, total_dim);
  int offset = 0;
  for (const auto& name : selection) {
    const Eigen::MatrixXd& data = demo.channels.at(name);
    traj.points.middleCols(offset, data.cols()) = data;
    offset += static_cast<int>(data.cols());
  }
  traj.validate();
  return traj;
}

Trajectory augment_time(const Trajectory& traj) {
  traj.validate();
  const int t = traj.length();
  Trajectory out;
  out.id = traj.id;
  out.points.resize(t, traj.dim() + 1);
  for (int i = 0; i < t; ++i) {
    out.points(i, 0) = static_cast<double>(i) / static_cast<double>(t - 1);
  }
  out.points.rightCols(traj.dim()) = traj.points;
  return out;
}

Trajectory subsample(const Trajectory& traj, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  traj.validate();
  if (stride == 1) return traj;
  const int t = traj.length();
  std::vector<int> keep;
  for (int i = 0; i < t; i += stride) keep.push_back(i);
  if (keep.back() != t - 1) keep.push_back(t - 1);  // endpoint always kept
  Trajectory out;
  out.id = traj.id;
  out.points.resize(static_cast<int>(keep.size()), traj.dim());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    out.points.row(static_cast<Eigen::Index>(r)) = traj.points.row(keep[r]);
  }
  out.validate();
  return out;
}

std::vector<Trajectory> standardize(const std::vector<Trajectory>& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("standardize: empty dataset");
  }
  const int d = dataset.front().dim();
  for (const auto& traj : dataset) {
    traj.validate();
    if (traj.dim() != d) {
      throw std::invalid_argument("standardize: trajectory '" + traj.id +
                                  "' has dimension " + std::to_string(traj.dim()) +
                                  ", expected " + std::to_string(d));
    }
  }
  // pooled per-dimension moments over all points of all trajectories
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(d);
  double count = 0.0;
  for (const auto& traj : dataset) {
    sum += traj.points.colwise().sum().transpose();
    sum_sq += traj.points.array().square().colwise().sum().matrix().transpose();
    count += static_cast<double>(traj.length());
  }
  const Eigen::VectorXd mean = sum / count;
  Eigen::VectorXd scale(d);
  for (int c = 0; c < d; ++c) {
    const double var = std::max(0.0, sum_sq(c) / count - mean(c) * mean(c));
    const double sd = std::sqrt(var);
    scale(c) = sd < 1e-12 ? 1.0 : 1.0 / sd;  // zero-variance dims stay unscaled
  }
  std::vector<Trajectory> out;
  out.reserve(dataset.size());
  for (const auto& traj : dataset) {
    Trajectory s;
    s.id = traj.id;
    s.points = (traj.points.rowwise() - mean.transpose()).array().rowwise() *
               scale.transpose().array();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Trajectory> build_trajectories(
    const std::vector<Demonstration>& demos, const PathConfig& cfg) {
  cfg.validate();
  if (demos.empty()) throw std::invalid_argument("empty dataset");
  std::vector<Trajectory> trajs;
  trajs.reserve(demos.size());
  for (const auto& demo : demos) {
    Trajectory traj = flatten_stack(demo, cfg);
    if (cfg.subsample_stride > 1) traj = subsample(traj, cfg.subsample_stride);
    trajs.push_back(std::move(traj));
  }
  if (cfg.standardize) trajs = standardize(trajs);
  if (cfg.augment_time) {
    for (auto& traj : trajs) traj = augment_time(traj);
  }
  if (cfg.prescale != 1.0) {
    for (auto& traj : trajs) traj.points *= cfg.prescale;
  }
  return trajs;
}

}  // namespace sigcurate
