#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sigcurate/paths.hpp"

namespace fs = std::filesystem;

namespace sigcurate {

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "jsonl") return DatasetFormat::jsonl;
  if (name == "csv_dir") return DatasetFormat::csv_dir;
  throw std::invalid_argument("unknown dataset format '" + name +
                              "' (expected jsonl or csv_dir)");
}

namespace {

Eigen::MatrixXd channel_from_json(const nlohmann::json& rows,
                                  const std::string& where,
                                  const std::string& channel) {
  if (!rows.is_array() || rows.empty()) {
    throw std::runtime_error(where + ": channel '" + channel +
                             "' must be a nonempty array of rows");
  }
  const std::size_t t = rows.size();
  std::size_t d = 0;
  Eigen::MatrixXd out;
  for (std::size_t r = 0; r < t; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.empty()) {
      throw std::runtime_error(where + ": channel '" + channel + "' row " +
                               std::to_string(r) + " must be a nonempty array");
    }
    if (r == 0) {
      d = row.size();
      out.resize(t, d);
    } else if (row.size() != d) {
      throw std::runtime_error(where + ": channel '" + channel + "' row " +
                               std::to_string(r) + " has " +
                               std::to_string(row.size()) +
                               " values, expected " + std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) {
      if (!row[c].is_number()) {
        throw std::runtime_error(where + ": channel '" + channel + "' row " +
                                 std::to_string(r) + " column " +
                                 std::to_string(c) + " is not a number");
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          row[c].get<double>();
    }
  }
  return out;
}

std::vector<Demonstration> load_jsonl(const std::string& location) {
  std::ifstream in(location);
  if (!in) {
    throw std::runtime_error("cannot open dataset file '" + location + "'");
  }
  std::vector<Demonstration> demos;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = location + ":" + std::to_string(lineno);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(where + ": malformed JSON record: " + e.what());
    }
    if (!record.is_object()) {
      throw std::runtime_error(where + ": record must be a JSON object");
    }
    Demonstration demo;
    if (!record.contains("id") || !record["id"].is_string()) {
      throw std::runtime_error(where + ": missing or non-string field 'id'");
    }
    demo.id = record["id"].get<std::string>();
    if (!record.contains("channels") || !record["channels"].is_object()) {
      throw std::runtime_error(where + ": missing or non-object field 'channels'");
    }
    for (const auto& [name, rows] : record["channels"].items()) {
      demo.channels.emplace(name, channel_from_json(rows, where, name));
    }
    try {
      demo.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    demos.push_back(std::move(demo));
  }
  if (demos.empty()) {
    throw std::runtime_error("empty dataset: no demonstrations in '" + location +
                             "'");
  }
  return demos;
}

Eigen::MatrixXd read_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open channel file '" + file.string() + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                 ": cannot parse value '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                               ": expected " +
                               std::to_string(rows.front().size()) +
                               " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error(file.string() + ": empty channel file");
  }
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return out;
}

std::vector<Demonstration> load_csv_dir(const std::string& location) {
  if (!fs::is_directory(location)) {
    throw std::runtime_error("dataset directory '" + location +
                             "' does not exist");
  }
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(location)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<Demonstration> demos;
  for (const auto& dir : subdirs) {
    Demonstration demo;
    demo.id = dir.filename().string();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      demo.channels.emplace(file.stem().string(), read_csv(file));
    }
    try {
      demo.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error(dir.string() + ": " + e.what());
    }
    demos.push_back(std::move(demo));
  }
  if (demos.empty()) {
    throw std::runtime_error("empty dataset: no demonstration directories in '" +
                             location + "'");
  }
  return demos;
}

}  // namespace

std::vector<Demonstration> load_dataset(const std::string& location,
                                        DatasetFormat format) {
  switch (format) {
    case DatasetFormat::jsonl:
      return load_jsonl(location);
    case DatasetFormat::csv_dir:
      return load_csv_dir(location);
  }
  throw std::logic_error("unreachable dataset format");
}

}  // namespace sigcurate
