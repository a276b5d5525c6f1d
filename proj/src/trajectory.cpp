#include "sigcurate/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcurate {

double Trajectory::one_variation() const {
  double total = 0.0;
  for (int t = 0; t + 1 < points.rows(); ++t) {
    total += (points.row(t + 1) - points.row(t)).norm();
  }
  return total;
}

void Trajectory::validate() const {
  if (points.rows() < 2) {
    throw std::invalid_argument("trajectory '" + id +
                                "': needs at least 2 points, got " +
                                std::to_string(points.rows()));
  }
  if (points.cols() < 1) {
    throw std::invalid_argument("trajectory '" + id + "': dimension must be >= 1");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("trajectory '" + id +
                                "': contains NaN or infinite coordinates");
  }
}

int Demonstration::length() const {
  if (channels.empty()) return 0;
  return static_cast<int>(channels.begin()->second.rows());
}

void Demonstration::validate() const {
  if (channels.empty()) {
    throw std::invalid_argument("demonstration '" + id + "': no channels present");
  }
  const int t = length();
  for (const auto& [name, data] : channels) {
    if (static_cast<int>(data.rows()) != t) {
      throw std::invalid_argument(
          "demonstration '" + id + "': inconsistent channel lengths (channel '" +
          name + "' has " + std::to_string(data.rows()) + " steps, expected " +
          std::to_string(t) + ")");
    }
    if (data.cols() < 1) {
      throw std::invalid_argument("demonstration '" + id + "': channel '" + name +
                                  "' has no coordinates");
    }
    if (!data.allFinite()) {
      throw std::invalid_argument("demonstration '" + id + "': channel '" + name +
                                  "' contains NaN or infinite values");
    }
  }
}

void PathConfig::validate() const {
  if (subsample_stride < 1) {
    throw std::invalid_argument("subsample_stride must be >= 1");
  }
  if (!(prescale > 0.0) || !std::isfinite(prescale)) {
    throw std::invalid_argument("prescale must be a positive finite number");
  }
}

}  // namespace sigcurate
