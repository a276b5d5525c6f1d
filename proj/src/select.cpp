#include "sigcurate/select.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sigcurate/rng.hpp"
#include "sigcurate/spectra.hpp"

namespace sigcurate {

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "entropy") return ObjectiveKind::entropy;
  if (name == "logdet") return ObjectiveKind::logdet;
  throw std::invalid_argument("unknown objective '" + name +
                              "' (expected entropy or logdet)");
}

std::string objective_name(ObjectiveKind kind) {
  return kind == ObjectiveKind::entropy ? "entropy" : "logdet";
}

SelectionAlgorithm parse_algorithm(const std::string& name) {
  if (name == "greedy_local") return SelectionAlgorithm::greedy_local;
  if (name == "stochastic_greedy") return SelectionAlgorithm::stochastic_greedy;
  if (name == "kdpp") return SelectionAlgorithm::kdpp;
  throw std::invalid_argument(
      "unknown algorithm '" + name +
      "' (expected greedy_local, stochastic_greedy or kdpp)");
}

std::string algorithm_name(SelectionAlgorithm algorithm) {
  switch (algorithm) {
    case SelectionAlgorithm::greedy_local: return "greedy_local";
    case SelectionAlgorithm::stochastic_greedy: return "stochastic_greedy";
    case SelectionAlgorithm::kdpp: return "kdpp";
  }
  throw std::logic_error("unreachable algorithm");
}

void Objective::validate() const {
  if (kind == ObjectiveKind::logdet && !(mu > 0.0)) {
    throw std::invalid_argument("logdet objective needs mu > 0");
  }
}

void SelectionConfig::validate(int n) const {
  if (m < 1 || m > n) {
    throw std::invalid_argument("selection budget m must be in [1, " +
                                std::to_string(n) + "], got " +
                                std::to_string(m));
  }
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("proportion p must be in [0, 1]");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1)");
  }
  if (swap_cap < 0) throw std::invalid_argument("swap_cap must be >= 0");
}

namespace {

void check_subset(const GramMatrix& gram, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  std::vector<bool> seen(gram.size(), false);
  for (int idx : subset) {
    if (idx < 0 || idx >= gram.size()) {
      throw std::invalid_argument("subset index " + std::to_string(idx) +
                                  " out of range [0, " +
                                  std::to_string(gram.size()) + ")");
    }
    if (seen[idx]) {
      throw std::invalid_argument("subset index " + std::to_string(idx) +
                                  " repeated");
    }
    seen[idx] = true;
  }
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& k,
                                    const std::vector<int>& subset) {
  const int s = static_cast<int>(subset.size());
  Eigen::MatrixXd sub(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) sub(a, b) = k(subset[a], subset[b]);
  }
  return sub;
}

double subset_entropy(const Eigen::MatrixXd& sub) {
  const double s = static_cast<double>(sub.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub / s,
                                                        Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 0.0) h -= lambda * std::log(lambda);
  }
  return h;
}

double subset_logdet(const Eigen::MatrixXd& sub, double mu) {
  Eigen::MatrixXd shifted = sub;
  shifted.diagonal().array() += mu;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("logdet factorization failed on subset");
  }
  double logdet = 0.0;
  for (int i = 0; i < sub.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
  return 2.0 * logdet;
}

// Incremental Cholesky of K_X + mu*I. The gain of a candidate is
// ln(K_ee + mu - |L^-1 c|^2) where c = K_{X,e}; appending a chosen element
// extends the factor by one row in O(|X|^2).
class LogdetState {
 public:
  LogdetState(const Eigen::MatrixXd& k, double mu, int capacity)
      : k_(k), mu_(mu), factor_(capacity, capacity) {}

  double gain(int candidate) const {
    return std::log(schur(candidate));
  }

  void add(int candidate) {
    const int s = static_cast<int>(chosen_.size());
    const Eigen::VectorXd solved = solve_against(candidate);
    factor_(s, s) = std::sqrt(std::max(schur_from(solved, candidate), 1e-300));
    factor_.row(s).head(s) = solved.transpose();
    chosen_.push_back(candidate);
    value_ += 2.0 * std::log(factor_(s, s));
  }

  double value() const { return value_; }
  const std::vector<int>& chosen() const { return chosen_; }

 private:
  Eigen::VectorXd solve_against(int candidate) const {
    const int s = static_cast<int>(chosen_.size());
    Eigen::VectorXd c(s);
    for (int a = 0; a < s; ++a) c(a) = k_(chosen_[a], candidate);
    // forward substitution L z = c
    Eigen::VectorXd z(s);
    for (int a = 0; a < s; ++a) {
      double acc = c(a);
      for (int b = 0; b < a; ++b) acc -= factor_(a, b) * z(b);
      z(a) = acc / factor_(a, a);
    }
    return z;
  }

  double schur_from(const Eigen::VectorXd& solved, int candidate) const {
    return k_(candidate, candidate) + mu_ - solved.squaredNorm();
  }

  double schur(int candidate) const {
    return std::max(schur_from(solve_against(candidate), candidate), 1e-300);
  }

  const Eigen::MatrixXd& k_;
  double mu_;
  Eigen::MatrixXd factor_;
  std::vector<int> chosen_;
  double value_ = 0.0;
};

// marginal gain of adding `candidate` to `chosen`, generic route
double marginal_gain(const GramMatrix& gram, const Objective& obj,
                     const std::vector<int>& chosen, double current_value,
                     int candidate) {
  std::vector<int> extended = chosen;
  extended.push_back(candidate);
  return objective_value(gram, extended, obj) - current_value;
}

struct GreedyStep {
  int index = -1;
  double gain = 0.0;
};

// best candidate by gain, lowest index winning ties
template <typename GainFn>
GreedyStep best_candidate(const std::vector<int>& candidates, GainFn&& gain_of) {
  GreedyStep best;
  for (int e : candidates) {
    const double g = gain_of(e);
    if (best.index < 0 || g > best.gain) {
      best.index = e;
      best.gain = g;
    }
  }
  return best;
}

std::vector<int> remainder_of(int n, const std::vector<int>& chosen) {
  std::vector<bool> used(n, false);
  for (int idx : chosen) used[idx] = true;
  std::vector<int> rest;
  rest.reserve(n - chosen.size());
  for (int i = 0; i < n; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  return rest;
}

// Greedy phase shared by the pure and union-seeded (combined-strategy) runs:
// picks `budget` elements from `pool` maximizing obj on fixed ∪ picked.
std::vector<int> greedy_extend(const GramMatrix& gram, const Objective& obj,
                               const std::vector<int>& fixed,
                               std::vector<int> pool, int budget,
                               bool pad_to_budget,
                               std::vector<double>* trace) {
  std::vector<int> picked;
  if (obj.kind == ObjectiveKind::logdet) {
    LogdetState state(gram.entries, obj.mu, static_cast<int>(fixed.size()) + budget);
    for (int idx : fixed) state.add(idx);
    for (int step = 0; step < budget; ++step) {
      const GreedyStep best =
          best_candidate(pool, [&](int e) { return state.gain(e); });
      if (best.gain <= 0.0 && !pad_to_budget) break;
      state.add(best.index);
      picked.push_back(best.index);
      pool.erase(std::find(pool.begin(), pool.end(), best.index));
      if (trace != nullptr) trace->push_back(state.value());
    }
  } else {
    std::vector<int> current = fixed;
    double value = current.empty() ? 0.0 : objective_value(gram, current, obj);
    for (int step = 0; step < budget; ++step) {
      const GreedyStep best = best_candidate(pool, [&](int e) {
        return marginal_gain(gram, obj, current, value, e);
      });
      if (best.gain <= 0.0 && !pad_to_budget) break;
      current.push_back(best.index);
      picked.push_back(best.index);
      value += best.gain;
      pool.erase(std::find(pool.begin(), pool.end(), best.index));
      if (trace != nullptr) trace->push_back(value);
    }
  }
  return picked;
}

// 1-swap local search over `movable` (fixed elements never leave the set).
// First improving swap in index order; stops when none exists or after
// swap_cap accepted swaps.
void local_search_swaps(const GramMatrix& gram, const Objective& obj,
                        const std::vector<int>& fixed,
                        std::vector<int>& movable, int swap_cap,
                        std::vector<double>* trace) {
  auto value_of = [&](const std::vector<int>& mov) {
    std::vector<int> all = fixed;
    all.insert(all.end(), mov.begin(), mov.end());
    return objective_value(gram, all, obj);
  };
  if (movable.empty()) return;
  double value = value_of(movable);
  int swaps = 0;
  bool improved = true;
  while (improved && swaps < swap_cap) {
    improved = false;
    std::vector<int> in_sorted = movable;
    std::sort(in_sorted.begin(), in_sorted.end());
    std::vector<int> chosen_all = fixed;
    chosen_all.insert(chosen_all.end(), movable.begin(), movable.end());
    const std::vector<int> outside = remainder_of(gram.size(), chosen_all);
    for (int e : in_sorted) {
      for (int candidate : outside) {
        std::vector<int> trial = movable;
        *std::find(trial.begin(), trial.end(), e) = candidate;
        const double trial_value = value_of(trial);
        if (trial_value > value + 1e-12) {
          movable = std::move(trial);
          value = trial_value;
          ++swaps;
          improved = true;
          if (trace != nullptr) trace->push_back(value);
          break;
        }
      }
      if (improved) break;
    }
  }
}

}  // namespace

double objective_value(const GramMatrix& gram, const std::vector<int>& subset,
                       const Objective& obj) {
  obj.validate();
  check_subset(gram, subset);
  const Eigen::MatrixXd sub = principal_submatrix(gram.entries, subset);
  if (obj.kind == ObjectiveKind::entropy) {
    if (!gram.normalized) {
      throw std::invalid_argument("entropy objective needs a normalized gram");
    }
    return subset_entropy(sub);
  }
  return subset_logdet(sub, obj.mu);
}

Selection greedy_local_search(const GramMatrix& gram, int m,
                              const Objective& obj,
                              const SelectionConfig& cfg) {
  obj.validate();
  SelectionConfig effective = cfg;
  effective.m = m;
  effective.validate(gram.size());

  Selection sel;
  sel.objective = obj.kind;
  sel.config = effective;
  std::vector<int> pool(gram.size());
  std::iota(pool.begin(), pool.end(), 0);
  sel.indices = greedy_extend(gram, obj, {}, std::move(pool), m,
                              effective.pad_to_budget, &sel.objective_trace);
  if (effective.local_search) {
    const int cap = effective.swap_cap > 0 ? effective.swap_cap : 10 * m;
    local_search_swaps(gram, obj, {}, sel.indices, cap, &sel.objective_trace);
  }
  return sel;
}

Selection stochastic_greedy(const GramMatrix& gram, int m,
                            const Objective& obj, double epsilon,
                            std::uint64_t seed) {
  obj.validate();
  const int n = gram.size();
  if (m < 1 || m > n) {
    throw std::invalid_argument("selection budget m must be in [1, n]");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1)");
  }
  const int sample_size = static_cast<int>(std::ceil(
      static_cast<double>(n) / m * std::log(1.0 / epsilon)));

  Selection sel;
  sel.objective = obj.kind;
  sel.config.m = m;
  sel.config.algorithm = SelectionAlgorithm::stochastic_greedy;
  sel.config.epsilon = epsilon;
  sel.config.seed = seed;
  Rng rng = Rng::substream(seed, stream::kStochasticGreedy);

  double value = 0.0;
  for (int step = 0; step < m; ++step) {
    std::vector<int> rest = remainder_of(n, sel.indices);
    const int r = std::min<int>(sample_size, static_cast<int>(rest.size()));
    // partial Fisher-Yates, then index order for deterministic tie-breaks
    for (int k = 0; k < r; ++k) {
      const std::size_t j = k + rng.uniform_index(rest.size() - k);
      std::swap(rest[k], rest[j]);
    }
    std::vector<int> sampled(rest.begin(), rest.begin() + r);
    std::sort(sampled.begin(), sampled.end());

    GreedyStep best;
    if (obj.kind == ObjectiveKind::logdet) {
      LogdetState state(gram.entries, obj.mu, m);
      for (int idx : sel.indices) state.add(idx);
      best = best_candidate(sampled, [&](int e) { return state.gain(e); });
    } else {
      best = best_candidate(sampled, [&](int e) {
        return marginal_gain(gram, obj, sel.indices, value, e);
      });
    }
    sel.indices.push_back(best.index);
    value += best.gain;
    sel.objective_trace.push_back(value);
  }
  return sel;
}

Selection sample_kdpp(const GramMatrix& gram, int m, double mu,
                      std::uint64_t seed) {
  const int n = gram.size();
  if (m < 1 || m > n) {
    throw std::invalid_argument("selection budget m must be in [1, n]");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");

  Eigen::MatrixXd ensemble = gram.entries;
  ensemble.diagonal().array() += mu;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ensemble);
  Eigen::VectorXd lambda = solver.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = std::max(lambda(i), 0.0);
  }

  // e(l, k): elementary symmetric polynomial of degree l over lambda_1..k
  Eigen::MatrixXd esp = Eigen::MatrixXd::Zero(m + 1, n + 1);
  esp.row(0).setOnes();
  for (int l = 1; l <= m; ++l) {
    for (int k = 1; k <= n; ++k) {
      esp(l, k) = esp(l, k - 1) + lambda(k - 1) * esp(l - 1, k - 1);
    }
  }
  if (!(esp(m, n) > 0.0)) {
    throw std::runtime_error("kdpp: degenerate spectrum, e_n^m vanished");
  }

  for (int attempt = 0; attempt < 2; ++attempt) {
    Rng rng = Rng::substream(seed, stream::kKdpp,
                             static_cast<std::uint64_t>(attempt));

    // Phase 1: choose m eigenvector indices
    std::vector<int> picked_eigen;
    int remaining = m;
    for (int k = n; k >= 1 && remaining > 0; --k) {
      const double ratio =
          lambda(k - 1) * esp(remaining - 1, k - 1) / esp(remaining, k);
      if (rng.uniform01() <= ratio) {
        picked_eigen.push_back(k - 1);
        --remaining;
      }
    }
    if (remaining != 0) continue;  // numerically possible only in degenerate cases

    Eigen::MatrixXd basis(n, m);
    for (int c = 0; c < m; ++c) basis.col(c) = solver.eigenvectors().col(picked_eigen[c]);

    // Phase 2: sample items, shrinking the basis orthogonally to each pick
    std::vector<int> items;
    bool degenerate = false;
    while (basis.cols() > 0) {
      const Eigen::VectorXd weight = basis.array().square().rowwise().sum();
      const double total = weight.sum();
      if (!(total > 1e-12)) {
        degenerate = true;
        break;
      }
      double u = rng.uniform01() * total;
      int item = n - 1;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += weight(i);
        if (u <= acc) {
          item = i;
          break;
        }
      }
      items.push_back(item);

      if (basis.cols() == 1) break;
      // eliminate coordinate `item`: pivot on the column with the largest
      // component there, subtract it from the rest, then re-orthonormalize
      int pivot = 0;
      for (int c = 1; c < basis.cols(); ++c) {
        if (std::abs(basis(item, c)) > std::abs(basis(item, pivot))) pivot = c;
      }
      if (std::abs(basis(item, pivot)) < 1e-12) {
        degenerate = true;
        break;
      }
      const Eigen::VectorXd pivot_col = basis.col(pivot);
      basis.col(pivot) = basis.col(basis.cols() - 1);
      basis.conservativeResize(Eigen::NoChange, basis.cols() - 1);
      for (int c = 0; c < basis.cols(); ++c) {
        basis.col(c) -= pivot_col * (basis(item, c) / pivot_col(item));
      }
      // modified Gram-Schmidt
      for (int c = 0; c < basis.cols(); ++c) {
        for (int prev = 0; prev < c; ++prev) {
          basis.col(c) -= basis.col(prev).dot(basis.col(c)) * basis.col(prev);
        }
        const double norm = basis.col(c).norm();
        if (norm < 1e-12) {
          degenerate = true;
          break;
        }
        basis.col(c) /= norm;
      }
      if (degenerate) break;
    }
    if (degenerate || static_cast<int>(items.size()) != m) continue;

    Selection sel;
    sel.objective = ObjectiveKind::logdet;
    sel.config.m = m;
    sel.config.algorithm = SelectionAlgorithm::kdpp;
    sel.config.seed = seed;
    sel.indices = items;
    const Objective obj{ObjectiveKind::logdet, mu};
    for (std::size_t s = 1; s <= items.size(); ++s) {
      sel.objective_trace.push_back(objective_value(
          gram, std::vector<int>(items.begin(), items.begin() + s), obj));
    }
    return sel;
  }
  throw std::runtime_error(
      "kdpp: orthogonalization degenerated twice; gram spectrum too singular");
}

Selection faktual_curate(const GramMatrix& gram, int m, double p,
                         const SelectionConfig& cfg, double mu) {
  SelectionConfig effective = cfg;
  effective.m = m;
  effective.p = p;
  effective.validate(gram.size());
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");

  const int entropy_budget =
      std::min(m, static_cast<int>(std::floor(p * m + 0.5)));  // round half-up
  const int det_budget = m - entropy_budget;

  Selection sel;
  sel.config = effective;
  sel.objective =
      entropy_budget == m ? ObjectiveKind::entropy : ObjectiveKind::logdet;

  const Objective entropy_obj{ObjectiveKind::entropy, mu};
  const Objective logdet_obj{ObjectiveKind::logdet, mu};

  std::vector<int> entropy_block;
  if (entropy_budget > 0) {
    Selection head;
    switch (effective.algorithm) {
      case SelectionAlgorithm::greedy_local:
        head = greedy_local_search(gram, entropy_budget, entropy_obj, effective);
        break;
      case SelectionAlgorithm::stochastic_greedy:
        head = stochastic_greedy(gram, entropy_budget, entropy_obj,
                                 effective.epsilon, effective.seed);
        break;
      case SelectionAlgorithm::kdpp:
        head = sample_kdpp(gram, entropy_budget, mu, effective.seed);
        break;
    }
    entropy_block = head.indices;
    sel.objective_trace = head.objective_trace;
  }

  std::vector<int> det_block;
  if (det_budget > 0) {
    std::vector<int> pool = remainder_of(gram.size(), entropy_block);
    switch (effective.algorithm) {
      case SelectionAlgorithm::greedy_local: {
        // candidates scored on the union with the entropy block
        det_block = greedy_extend(gram, logdet_obj, entropy_block, pool,
                                  det_budget, effective.pad_to_budget,
                                  &sel.objective_trace);
        if (effective.local_search) {
          const int cap =
              effective.swap_cap > 0 ? effective.swap_cap : 10 * det_budget;
          local_search_swaps(gram, logdet_obj, entropy_block, det_block, cap,
                             &sel.objective_trace);
        }
        break;
      }
      case SelectionAlgorithm::stochastic_greedy: {
        Rng rng = Rng::substream(effective.seed, stream::kStochasticGreedy, 1);
        const int n_rest = static_cast<int>(pool.size());
        const int sample_size = static_cast<int>(
            std::ceil(static_cast<double>(n_rest) / det_budget *
                      std::log(1.0 / effective.epsilon)));
        std::vector<int> chosen = entropy_block;
        for (int step = 0; step < det_budget; ++step) {
          std::vector<int> rest = pool;
          for (int already : det_block) {
            rest.erase(std::find(rest.begin(), rest.end(), already));
          }
          const int r = std::min<int>(sample_size, static_cast<int>(rest.size()));
          for (int k = 0; k < r; ++k) {
            const std::size_t j = k + rng.uniform_index(rest.size() - k);
            std::swap(rest[k], rest[j]);
          }
          std::vector<int> sampled(rest.begin(), rest.begin() + r);
          std::sort(sampled.begin(), sampled.end());
          const double value = chosen.empty()
                                   ? 0.0
                                   : objective_value(gram, chosen, logdet_obj);
          const GreedyStep best = best_candidate(sampled, [&](int e) {
            return marginal_gain(gram, logdet_obj, chosen, value, e);
          });
          chosen.push_back(best.index);
          det_block.push_back(best.index);
          sel.objective_trace.push_back(value + best.gain);
        }
        break;
      }
      case SelectionAlgorithm::kdpp: {
        // conditioning on the entropy block is approximated by sampling the
        // remainder's principal submatrix
        GramMatrix rest_gram;
        rest_gram.normalized = gram.normalized;
        rest_gram.entries = principal_submatrix(gram.entries, pool);
        for (int idx : pool) rest_gram.ids.push_back(gram.ids[idx]);
        Selection tail =
            sample_kdpp(rest_gram, det_budget, mu, effective.seed + 1);
        for (int local : tail.indices) det_block.push_back(pool[local]);
        for (double v : tail.objective_trace) sel.objective_trace.push_back(v);
        break;
      }
    }
  }

  sel.indices = entropy_block;
  sel.indices.insert(sel.indices.end(), det_block.begin(), det_block.end());
  return sel;
}

std::vector<std::pair<int, double>> entropy_curve(
    const GramMatrix& gram, const std::vector<int>& budgets,
    CurveStrategy strategy, std::uint64_t seed, const SelectionConfig& cfg,
    double mu) {
  const int n = gram.size();
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 1 || budgets[i] > n) {
      throw std::invalid_argument("curve budget " + std::to_string(budgets[i]) +
                                  " out of [1, " + std::to_string(n) + "]");
    }
    if (i > 0 && budgets[i] <= budgets[i - 1]) {
      throw std::invalid_argument("curve budgets must be strictly increasing");
    }
  }
  const Objective entropy_obj{ObjectiveKind::entropy, mu};
  std::vector<std::pair<int, double>> curve;
  curve.reserve(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const int budget = budgets[i];
    std::vector<int> subset;
    if (strategy == CurveStrategy::faktual) {
      subset = faktual_curate(gram, budget, cfg.p, cfg, mu).indices;
    } else {
      Rng rng = Rng::substream(seed, stream::kCurveRandom,
                               static_cast<std::uint64_t>(i));
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      for (int k = 0; k < budget; ++k) {
        const std::size_t j = k + rng.uniform_index(all.size() - k);
        std::swap(all[k], all[j]);
      }
      subset.assign(all.begin(), all.begin() + budget);
    }
    curve.emplace_back(budget, objective_value(gram, subset, entropy_obj));
  }
  return curve;
}

std::pair<std::vector<int>, double> brute_force_best_subset(
    const GramMatrix& gram, int m, const Objective& obj) {
  obj.validate();
  const int n = gram.size();
  if (m < 1 || m > n) {
    throw std::invalid_argument("selection budget m must be in [1, n]");
  }
  double count = 1.0;
  for (int i = 0; i < m; ++i) count *= static_cast<double>(n - i) / (i + 1);
  if (count > 1e6) {
    throw std::invalid_argument("brute force refused: C(" + std::to_string(n) +
                                ", " + std::to_string(m) + ") subsets exceed 1e6");
  }

  std::vector<int> subset(m);
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<int> best_subset;
  double best_value = 0.0;
  bool first = true;
  while (true) {
    const double value = objective_value(gram, subset, obj);
    if (first || value > best_value) {  // lexicographic enumeration keeps ties
      best_value = value;
      best_subset = subset;
      first = false;
    }
    // next combination in lexicographic order
    int pos = m - 1;
    while (pos >= 0 && subset[pos] == n - m + pos) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (int i = pos + 1; i < m; ++i) subset[i] = subset[i - 1] + 1;
  }
  return {best_subset, best_value};
}

}  // namespace sigcurate
