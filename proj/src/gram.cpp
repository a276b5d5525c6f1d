#include "sigcurate/gram.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "sigcurate/rfsf.hpp"

static_assert(std::endian::native == std::endian::little,
              "gram cache assumes a little-endian host");

namespace sigcurate {

namespace {

int thread_budget(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SIGCURATE_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(parsed));
  }
  return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(0..jobs) across threads. Any exception is rethrown on the calling
// thread, lowest job index first so failures are schedule-independent.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
  const int workers = thread_budget(jobs);
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) fn(k);
    return;
  }
  std::vector<std::pair<std::size_t, std::string>> failures(
      workers, {std::size_t(-1), {}});
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t k = static_cast<std::size_t>(w); k < jobs;
           k += static_cast<std::size_t>(workers)) {
        try {
          fn(k);
        } catch (const std::exception& e) {
          failures[w] = {k, e.what()};
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::size_t first = std::size_t(-1);
  const std::string* message = nullptr;
  for (const auto& [idx, msg] : failures) {
    if (idx < first) {
      first = idx;
      message = &msg;
    }
  }
  if (message != nullptr) throw std::runtime_error(*message);
}

constexpr double kVariationWarnThreshold = 20.0;

}  // namespace

void GramMatrix::validate() const {
  const int n = size();
  if (n < 1 || entries.cols() != n) {
    throw std::invalid_argument("gram matrix must be square and nonempty");
  }
  if (static_cast<int>(ids.size()) != n) {
    throw std::invalid_argument("gram matrix id count does not match size");
  }
  if (!entries.allFinite()) {
    throw std::invalid_argument("gram matrix contains non-finite entries");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(entries(i, j) - entries(j, i)) > 1e-12) {
        throw std::invalid_argument("gram matrix is not symmetric at (" +
                                    std::to_string(i) + ", " + std::to_string(j) +
                                    ")");
      }
    }
  }
  if (normalized) {
    for (int i = 0; i < n; ++i) {
      if (entries(i, i) != 1.0) {
        throw std::invalid_argument("normalized gram diagonal must be exactly 1");
      }
      for (int j = 0; j < n; ++j) {
        if (std::abs(entries(i, j)) > 1.0 + 1e-9) {
          throw std::invalid_argument(
              "normalized gram entry out of [-1, 1] bounds at (" +
              std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries,
                                                        Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    throw std::invalid_argument(
        "gram matrix is not positive semidefinite (min eigenvalue " +
        std::to_string(solver.eigenvalues().minCoeff()) + ")");
  }
}

GramMatrix gram(const std::vector<Trajectory>& dataset, const KernelConfig& cfg,
                GramDiagnostics* diag) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("gram: empty dataset");
  const int n = static_cast<int>(dataset.size());
  const int dim = dataset.front().dim();
  double max_variation = 0.0;
  for (const auto& traj : dataset) {
    traj.validate();
    if (traj.dim() != dim) {
      throw std::invalid_argument("gram: trajectory '" + traj.id +
                                  "' has dimension " + std::to_string(traj.dim()) +
                                  ", expected " + std::to_string(dim));
    }
    max_variation = std::max(max_variation, traj.one_variation());
  }
  if ((cfg.backend == Backend::pde || cfg.backend == Backend::truncated_dp) &&
      max_variation > kVariationWarnThreshold) {
    std::cerr << "warning: max path 1-variation " << max_variation
              << " exceeds " << kVariationWarnThreshold
              << "; kernel values grow exponentially, consider prescale\n";
  }

  GramMatrix g;
  g.ids.reserve(dataset.size());
  for (const auto& traj : dataset) g.ids.push_back(traj.id);
  g.entries.resize(n, n);

  if (cfg.backend == Backend::rfsf_dp || cfg.backend == Backend::rfsf_trp) {
    const auto weights = make_rfsf_weights(dim, cfg.level, cfg.rff_dim,
                                           cfg.bandwidth, cfg.seed);
    const auto projections =
        cfg.backend == Backend::rfsf_trp
            ? make_trp_projections(cfg.level, cfg.rff_dim, cfg.seed)
            : std::vector<Eigen::MatrixXd>{};
    std::vector<Eigen::VectorXd> features(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      features[i] = cfg.backend == Backend::rfsf_dp
                        ? rfsf_dp_features(dataset[i], weights)
                        : rfsf_trp_features(dataset[i], weights, projections);
    });
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        g.entries(i, j) = features[i].dot(features[j]);
        g.entries(j, i) = g.entries(i, j);
      }
    }
  } else {
    // upper-triangle pair list, evaluated concurrently, written by index
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      const auto [i, j] = pairs[k];
      try {
        values[k] = cfg.backend == Backend::pde
                        ? sig_kernel_pde(dataset[i], dataset[j], cfg.pde_refinement)
                        : sig_kernel_truncated(dataset[i], dataset[j], cfg.level);
      } catch (const std::exception& e) {
        throw std::runtime_error("kernel evaluation failed for pair ('" +
                                 dataset[i].id + "', '" + dataset[j].id +
                                 "'): " + e.what());
      }
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      g.entries(i, j) = values[k];
      g.entries(j, i) = values[k];
    }
  }

  double self_min = g.entries(0, 0), self_max = g.entries(0, 0);
  for (int i = 0; i < n; ++i) {
    const double self = g.entries(i, i);
    self_min = std::min(self_min, self);
    self_max = std::max(self_max, self);
    if (!(self > 0.0)) {
      throw std::runtime_error("self-kernel of '" + g.ids[i] +
                               "' is not positive (" + std::to_string(self) +
                               "); numerical failure in backend");
    }
  }
  if (diag != nullptr) {
    diag->raw_self_min = self_min;
    diag->raw_self_max = self_max;
    diag->max_one_variation = max_variation;
  }

  if (cfg.normalize) {
    Eigen::VectorXd inv_sqrt(n);
    for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(g.entries(i, i));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g.entries(i, j) *= inv_sqrt(i) * inv_sqrt(j);
      }
    }
    for (int i = 0; i < n; ++i) g.entries(i, i) = 1.0;
    g.normalized = true;
  }
  return g;
}

GramMatrix mix_gram(const std::vector<GramMatrix>& grams,
                    const std::vector<double>& weights) {
  if (grams.empty() || grams.size() != weights.size()) {
    throw std::invalid_argument("mix_gram: need matching gram and weight counts");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mix_gram: weights must be nonnegative");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("mix_gram: weights must sum to 1, got " +
                                std::to_string(weight_sum));
  }
  const GramMatrix& first = grams.front();
  for (const auto& g : grams) {
    if (g.size() != first.size() || g.ids != first.ids) {
      throw std::invalid_argument("mix_gram: shape or id ordering mismatch");
    }
  }
  GramMatrix out;
  out.ids = first.ids;
  out.entries = Eigen::MatrixXd::Zero(first.size(), first.size());
  out.normalized = true;
  for (std::size_t k = 0; k < grams.size(); ++k) {
    out.entries += weights[k] * grams[k].entries;
    out.normalized = out.normalized && grams[k].normalized;
  }
  if (out.normalized) {
    for (int i = 0; i < out.size(); ++i) out.entries(i, i) = 1.0;
  }
  return out;
}

void save_gram(const GramMatrix& g, const std::string& path,
               const std::string& backend, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write gram cache '" + path + "'");
  out << "sigcurate-gram v1, n=" << g.size() << ", backend=" << backend
      << ", normalized=" << (g.normalized ? "true" : "false")
      << ", seed=" << seed << "\n";
  for (const auto& id : g.ids) out << id << "\n";
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = g.entries(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
  }
  if (!out) throw std::runtime_error("failed writing gram cache '" + path + "'");
}

GramMatrix load_gram(const std::string& path, std::string* backend_out,
                     std::uint64_t* seed_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open gram cache '" + path + "'");
  std::string header;
  std::getline(in, header);
  int n = 0;
  char backend_buf[64] = {0};
  char normalized_buf[16] = {0};
  unsigned long long seed = 0;
  if (std::sscanf(header.c_str(),
                  "sigcurate-gram v1, n=%d, backend=%63[^,], normalized=%15[^,], "
                  "seed=%llu",
                  &n, backend_buf, normalized_buf, &seed) != 4 ||
      n < 1) {
    throw std::runtime_error("gram cache '" + path + "' has an invalid header");
  }
  GramMatrix g;
  g.ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::string id;
    if (!std::getline(in, id)) {
      throw std::runtime_error("gram cache '" + path + "' truncated in id block");
    }
    g.ids.push_back(id);
  }
  const std::string normalized(normalized_buf);
  if (normalized != "true" && normalized != "false") {
    throw std::runtime_error("gram cache '" + path +
                             "' has an invalid normalized flag");
  }
  g.normalized = normalized == "true";
  g.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      if (!in.read(reinterpret_cast<char*>(&v), sizeof(double))) {
        throw std::runtime_error("gram cache '" + path +
                                 "' truncated in value block");
      }
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  g.validate();
  if (backend_out != nullptr) *backend_out = backend_buf;
  if (seed_out != nullptr) *seed_out = static_cast<std::uint64_t>(seed);
  return g;
}

}  // namespace sigcurate
