#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sigcurate/gram.hpp"

namespace sigcurate {

enum class ObjectiveKind { entropy, logdet };

ObjectiveKind parse_objective(const std::string& name);
std::string objective_name(ObjectiveKind kind);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::logdet;
  double mu = 1e-6;  // regularizer for the logdet objective

  void validate() const;
};

enum class SelectionAlgorithm { greedy_local, stochastic_greedy, kdpp };

SelectionAlgorithm parse_algorithm(const std::string& name);
std::string algorithm_name(SelectionAlgorithm algorithm);

struct SelectionConfig {
  int m = 1;                // budget
  double p = 0.0;           // entropy proportion for the combined strategy
  SelectionAlgorithm algorithm = SelectionAlgorithm::greedy_local;
  double epsilon = 0.1;     // stochastic greedy sample-size parameter
  std::uint64_t seed = 0;
  bool local_search = true;
  int swap_cap = 0;         // 0 -> 10 * m improving swaps
  bool pad_to_budget = true;  // keep adding past nonpositive gains until |X| = m

  void validate(int n) const;
};

struct Selection {
  std::vector<int> indices;            // distinct, in selection order
  std::vector<double> objective_trace; // objective value after each step
  ObjectiveKind objective = ObjectiveKind::logdet;
  SelectionConfig config;
};

/// Objective value of a subset: spectral entropy of K_sub/|S| or
/// log det(K_sub + mu I) of the principal submatrix.
double objective_value(const GramMatrix& gram, const std::vector<int>& subset,
                       const Objective& obj);

/// Greedy forward selection by marginal gain (lowest-index tie-break),
/// breaking on nonpositive gain unless cfg.pad_to_budget, then optional
/// 1-swap local search (first improving swap in index order, capped at
/// cfg.swap_cap). Logdet gains use incremental Cholesky updates; entropy
/// gains re-eigendecompose the candidate submatrix.
Selection greedy_local_search(const GramMatrix& gram, int m,
                              const Objective& obj,
                              const SelectionConfig& cfg);

/// Per step, samples ceil((n/m) ln(1/epsilon)) candidates uniformly without
/// replacement from the remainder and adds the best gain. Deterministic
/// given seed.
Selection stochastic_greedy(const GramMatrix& gram, int m,
                            const Objective& obj, double epsilon,
                            std::uint64_t seed);

/// Samples an exact m-DPP with ensemble kernel L = K + mu I: eigenvector
/// selection via the elementary-symmetric-polynomial recursion, then item
/// sampling with basis re-orthogonalization.
Selection sample_kdpp(const GramMatrix& gram, int m, double mu,
                      std::uint64_t seed);

/// Combined curation: round(p*m) elements under the entropy objective, then
/// the remainder under log det scored on the union with the entropy block.
Selection faktual_curate(const GramMatrix& gram, int m, double p,
                         const SelectionConfig& cfg, double mu = 1e-6);

enum class CurveStrategy { faktual, random };

/// Subset entropy as a function of budget. The random strategy draws one
/// uniform subset per budget from the given seed.
std::vector<std::pair<int, double>> entropy_curve(
    const GramMatrix& gram, const std::vector<int>& budgets,
    CurveStrategy strategy, std::uint64_t seed, const SelectionConfig& cfg,
    double mu = 1e-6);

/// Exact maximizer by enumeration; lexicographic tie-break. Refuses instances
/// with more than 10^6 candidate subsets.
std::pair<std::vector<int>, double> brute_force_best_subset(
    const GramMatrix& gram, int m, const Objective& obj);

}  // namespace sigcurate
