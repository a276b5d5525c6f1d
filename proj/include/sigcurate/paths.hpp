#pragma once

#include <string>
#include <vector>

#include "sigcurate/trajectory.hpp"

namespace sigcurate {

enum class DatasetFormat { jsonl, csv_dir };

DatasetFormat parse_dataset_format(const std::string& name);

/// Loads demonstrations from disk. jsonl: one JSON object per line with
/// {"id": ..., "channels": {name: [[...],...]}}. csv_dir: one subdirectory per
/// demonstration, one headerless CSV per channel.
/// Errors carry the offending file/line and field.
std::vector<Demonstration> load_dataset(const std::string& location,
                                        DatasetFormat format);

/// Concatenates the selected channels per timestep, in selection order.
/// An empty selection takes every channel in name order.
Trajectory flatten_stack(const Demonstration& demo, const PathConfig& cfg);

/// Prepends a monotone time coordinate t/(T-1) in [0, 1] as coordinate 0.
Trajectory augment_time(const Trajectory& traj);

/// Keeps indices 0, stride, 2*stride, ... and always the final index.
Trajectory subsample(const Trajectory& traj, int stride);

/// Centers and scales each coordinate to pooled mean 0 / standard deviation 1
/// over all points of all trajectories. Dimensions with pooled standard
/// deviation below 1e-12 are centered but left unscaled.
std::vector<Trajectory> standardize(const std::vector<Trajectory>& dataset);

/// Full ingestion pipeline: flatten, subsample, standardize (dataset-pooled),
/// append time, prescale — in that order, each step gated by cfg.
std::vector<Trajectory> build_trajectories(
    const std::vector<Demonstration>& demos, const PathConfig& cfg);

}  // namespace sigcurate
