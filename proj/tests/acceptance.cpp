// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sigcurate/gram.hpp"
#include "sigcurate/kernels.hpp"
#include "sigcurate/rfsf.hpp"
#include "sigcurate/rng.hpp"
#include "sigcurate/select.hpp"
#include "sigcurate/paths.hpp"
#include "sigcurate/signature.hpp"
#include "sigcurate/spectra.hpp"
#include "support.hpp"

using namespace sigcurate;
using test_support::lifted_truncated_kernel;
using test_support::random_normalized_gram;
using test_support::random_path;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Trajectory unit_linear_1d() {
  Trajectory t;
  t.id = "unit";
  t.points = Eigen::MatrixXd{{0.0}, {1.0}};
  return t;
}

double series_partial_sum(double product, int terms) {
  double total = 0.0, factorial = 1.0;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) factorial *= k;
    total += std::pow(product, k) / (factorial * factorial);
  }
  return total;
}

// ---------------------------------------------------------------------------

void criterion_1_analytic_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const Trajectory a = unit_linear_1d();
  const double exact = series_partial_sum(1.0, 40);
  const double pde_err = std::abs(sig_kernel_pde(a, a, 6) - exact);
  const double dp_err =
      std::abs(sig_kernel_truncated(a, a, 12) - series_partial_sum(1.0, 13));
  const double elapsed = seconds_since(start);
  report(1, pde_err < 1e-4 && dp_err < 1e-8 && elapsed < 1.0,
         "analytic kernel oracle on unit linear paths",
         "pde err " + fmt(pde_err) + " < 1e-4, dp err " + fmt(dp_err) +
             " < 1e-8, " + fmt(elapsed) + "s < 1s");
}

void criterion_2_backend_agreement() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform_index(3));
    const int tx = 2 + static_cast<int>(rng.uniform_index(4));
    const int ty = 2 + static_cast<int>(rng.uniform_index(4));
    const Trajectory x = random_path(rng, tx, dim, 0.5 + 0.5 * rng.uniform01());
    const Trajectory y = random_path(rng, ty, dim, 0.5 + 0.5 * rng.uniform01());
    worst = std::max(worst,
                     std::abs(sig_kernel_pde(x, y, 6) -
                              sig_kernel_truncated(x, y, 12)));
  }
  const double elapsed = seconds_since(start);
  report(2, worst <= 1e-5 && elapsed < 30.0,
         "pde vs dp backend agreement on 50 unit-scale pairs",
         "worst " + fmt(worst) + " <= 1e-5, " + fmt(elapsed) + "s < 30s");
}

void criterion_3_algebraic_identities() {
  Rng rng(1003);
  double worst_chen = 0.0, worst_reversal = 0.0, worst_reparam = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform_index(3));
    const int length = 3 + static_cast<int>(rng.uniform_index(4));
    const int level = 1 + static_cast<int>(rng.uniform_index(4));
    const Trajectory path = random_path(rng, length, dim);

    // Chen: signature of the whole equals the product over a split
    const int split = 1 + static_cast<int>(rng.uniform_index(length - 2));
    Trajectory head, tail;
    head.id = tail.id = "part";
    head.points = path.points.topRows(split + 1);
    tail.points = path.points.bottomRows(length - split);
    const auto whole = truncated_signature(path, level);
    const auto glued = tensor_concat_product(truncated_signature(head, level),
                                             truncated_signature(tail, level));
    // time reversal: product with the reversed path is the unit
    Trajectory reversed = path;
    reversed.points = path.points.colwise().reverse();
    const auto inverse = tensor_concat_product(
        whole, truncated_signature(reversed, level));
    const TruncatedSignature unit(dim, level);
    // reparameterization: collinear midpoint insertion
    const int seg = static_cast<int>(rng.uniform_index(length - 1));
    Trajectory refined;
    refined.id = "refined";
    refined.points.resize(length + 1, dim);
    refined.points.topRows(seg + 1) = path.points.topRows(seg + 1);
    refined.points.row(seg + 1) =
        0.5 * (path.points.row(seg) + path.points.row(seg + 1));
    refined.points.bottomRows(length - seg - 1) =
        path.points.bottomRows(length - seg - 1);
    const auto resig = truncated_signature(refined, level);

    for (int k = 0; k <= level; ++k) {
      worst_chen = std::max(
          worst_chen,
          (whole.level_tensor(k) - glued.level_tensor(k)).cwiseAbs().maxCoeff());
      worst_reversal = std::max(
          worst_reversal,
          (inverse.level_tensor(k) - unit.level_tensor(k)).cwiseAbs().maxCoeff());
      worst_reparam = std::max(
          worst_reparam,
          (whole.level_tensor(k) - resig.level_tensor(k)).cwiseAbs().maxCoeff());
    }
  }
  report(3,
         worst_chen < 1e-10 && worst_reversal < 1e-10 && worst_reparam < 1e-10,
         "Chen, time-reversal and reparameterization identities",
         "chen " + fmt(worst_chen) + ", reversal " + fmt(worst_reversal) +
             ", reparam " + fmt(worst_reparam) + ", all < 1e-10");
}

void criterion_4_entropy_equality() {
  Rng rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(19));
    const int rank = 1 + static_cast<int>(rng.uniform_index(n));
    const GramMatrix g = random_normalized_gram(rng, n, rank);
    worst = std::max(worst,
                     std::abs(shannon_entropy(g) - von_neumann_entropy(g)));
  }
  report(4, worst < 1e-8,
         "shannon and von neumann entropies agree on independent code paths",
         "worst gap " + fmt(worst) + " < 1e-8");
}

void criterion_5_metric_fixtures() {
  auto gram_of = [](const Eigen::MatrixXd& k) {
    GramMatrix g;
    g.entries = k;
    g.normalized = true;
    for (int i = 0; i < k.rows(); ++i) g.ids.push_back("f" + std::to_string(i));
    return g;
  };
  bool pass = true;
  std::string detail;
  for (int n : {2, 4, 7}) {
    const GramMatrix identity = gram_of(Eigen::MatrixXd::Identity(n, n));
    pass = pass && std::abs(shannon_entropy(identity) - std::log(n)) < 1e-9;
    pass = pass && std::abs(det_volume(identity) - 1.0) < 1e-9;
    const GramMatrix ones = gram_of(Eigen::MatrixXd::Ones(n, n));
    pass = pass && std::abs(shannon_entropy(ones)) < 1e-9;
    pass = pass && std::abs(det_volume(ones)) < 1e-9;
  }
  Eigen::MatrixXd block(3, 3);
  block << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  const double expected = std::log(3.0) - (2.0 / 3.0) * std::log(2.0);
  const double got = shannon_entropy(gram_of(block));
  pass = pass && std::abs(got - expected) < 1e-9;
  report(5, pass, "metric fixtures (identity, all-ones, 3x3 block)",
         "block entropy gap " + fmt(std::abs(got - expected)) + " < 1e-9");
}

void criterion_6_greedy_guarantee() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1006);
  const Objective obj{ObjectiveKind::logdet, 1.0};  // monotone regime
  const double bound = 1.0 - std::exp(-1.0);
  bool pass = true;
  double worst_ratio = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_index(7));
    const int m = 1 + static_cast<int>(rng.uniform_index(std::min(n, 4)));
    const GramMatrix g = random_normalized_gram(rng, n);
    SelectionConfig plain;
    plain.local_search = false;
    const Selection greedy = greedy_local_search(g, m, obj, plain);
    const double greedy_value = objective_value(g, greedy.indices, obj);
    const auto [best, optimum] = brute_force_best_subset(g, m, obj);
    if (optimum > 1e-12) worst_ratio = std::min(worst_ratio, greedy_value / optimum);
    pass = pass && greedy_value >= bound * optimum - 1e-12;

    SelectionConfig swaps;
    swaps.local_search = true;
    const Selection refined = greedy_local_search(g, m, obj, swaps);
    pass = pass &&
           objective_value(g, refined.indices, obj) >= greedy_value - 1e-12;
  }
  const double elapsed = seconds_since(start);
  report(6, pass && elapsed < 60.0,
         "greedy achieves (1-1/e) of the brute-force optimum on every instance",
         "worst ratio " + fmt(worst_ratio) + " >= " + fmt(bound) + ", " +
             fmt(elapsed) + "s < 60s");
}

void criterion_7_stochastic_greedy() {
  Rng rng(1007);
  const Objective obj{ObjectiveKind::logdet, 1.0};
  const double epsilon = 0.1;
  const GramMatrix g = random_normalized_gram(rng, 12);
  const auto [best, optimum] = brute_force_best_subset(g, 3, obj);
  double mean = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    mean += objective_value(
        g, stochastic_greedy(g, 3, obj, epsilon, 5000 + s).indices, obj);
  }
  mean /= seeds;
  const double bound = (1.0 - std::exp(-1.0) - epsilon) * optimum;
  report(7, mean >= bound,
         "stochastic greedy mean clears (1-1/e-eps) of the optimum",
         "mean " + fmt(mean) + " >= " + fmt(bound));
}

void criterion_8_kdpp_law() {
  const auto start = std::chrono::steady_clock::now();
  auto subset_key = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };

  // diagonal fixture: L = diag(1, 2, 3)
  GramMatrix diag;
  diag.entries = Eigen::MatrixXd::Zero(3, 3);
  diag.entries(1, 1) = 1.0;
  diag.entries(2, 2) = 2.0;
  diag.ids = {"a", "b", "c"};
  diag.normalized = false;
  const int draws = 100000;
  std::map<std::vector<int>, int> counts;
  for (int s = 0; s < draws; ++s) {
    counts[subset_key(sample_kdpp(diag, 2, 1.0, s).indices)]++;
  }
  double l1_diag = 0.0;
  const std::map<std::vector<int>, double> law{
      {{0, 1}, 2.0 / 11.0}, {{0, 2}, 3.0 / 11.0}, {{1, 2}, 6.0 / 11.0}};
  for (const auto& [subset, prob] : law) {
    l1_diag += std::abs(static_cast<double>(counts[subset]) / draws - prob);
  }

  // general fixture: random n=5 normalized gram, exact law by enumeration
  Rng rng(1008);
  const GramMatrix g = random_normalized_gram(rng, 5);
  const double mu = 0.5;
  Eigen::MatrixXd ensemble = g.entries;
  ensemble.diagonal().array() += mu;
  std::map<std::vector<int>, double> exact;
  double total = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      Eigen::Matrix2d sub;
      sub << ensemble(i, i), ensemble(i, j), ensemble(j, i), ensemble(j, j);
      const double det = sub.determinant();
      exact[{i, j}] = det;
      total += det;
    }
  }
  for (auto& [subset, mass] : exact) mass /= total;
  std::map<std::vector<int>, int> general_counts;
  for (int s = 0; s < draws; ++s) {
    general_counts[subset_key(sample_kdpp(g, 2, mu, 700000 + s).indices)]++;
  }
  double l1_general = 0.0;
  for (const auto& [subset, prob] : exact) {
    l1_general +=
        std::abs(static_cast<double>(general_counts[subset]) / draws - prob);
  }
  const double elapsed = seconds_since(start);
  report(8, l1_diag <= 0.02 && l1_general <= 0.03 && elapsed < 60.0,
         "m-DPP samples match the exact subset law",
         "diag L1 " + fmt(l1_diag) + " <= 0.02, general L1 " + fmt(l1_general) +
             " <= 0.03, " + fmt(elapsed) + "s < 60s");
}

void criterion_9_rfsf_consistency() {
  // Reference: the truncated signature kernel with RBF-lifted increments, the
  // estimator's exact expectation, computed by an independent strict-tuple
  // dynamic program (see the decisions ledger for why the Euclidean kernel is
  // not a valid 3-sigma reference).
  Rng rng(1009);
  const int level = 3;
  const double bandwidth = 1.0;
  const int seeds = 200;
  bool within_three_se = true;
  double worst_z = 0.0;
  double rms_small = 0.0, rms_large = 0.0;
  for (int pair = 0; pair < 10; ++pair) {
    Trajectory x = random_path(rng, 8, 2, 1.0);
    Trajectory y = random_path(rng, 8, 2, 0.0);
    y.points = x.points + 0.1 * y.points;  // nearby pair
    y.points *= 1.0 / y.one_variation();   // unit scale
    const double reference = lifted_truncated_kernel(x, y, level, bandwidth);

    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto weights = make_rfsf_weights(
          2, level, 2048, bandwidth, 90000 + pair * 1000 + s);
      const double est =
          rfsf_dp_features(x, weights).dot(rfsf_dp_features(y, weights));
      const double delta = est - mean;
      mean += delta / (s + 1);
      m2 += delta * (est - mean);
      rms_large += (est - reference) * (est - reference);

      const auto small_weights = make_rfsf_weights(
          2, level, 32, bandwidth, 90000 + pair * 1000 + s);
      const double small_est = rfsf_dp_features(x, small_weights)
                                   .dot(rfsf_dp_features(y, small_weights));
      rms_small += (small_est - reference) * (small_est - reference);
    }
    const double se = std::sqrt(m2 / (seeds - 1) / seeds);
    const double z = std::abs(mean - reference) / se;
    worst_z = std::max(worst_z, z);
    within_three_se = within_three_se && z < 3.0;
  }
  rms_large = std::sqrt(rms_large / (10 * seeds));
  rms_small = std::sqrt(rms_small / (10 * seeds));
  report(9, within_three_se && rms_large < rms_small,
         "RFSF-DP mean unbiased for the lifted truncated kernel; error decays",
         "worst |z| " + fmt(worst_z) + " < 3, rms@2048 " + fmt(rms_large) +
             " < rms@32 " + fmt(rms_small));
}

// --- end-to-end criteria via the CLI ---------------------------------------

const std::string kBin = SIGCURATE_BIN;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = kBin + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 5 planted clusters of 10 near-duplicate trajectories, disjoint active
// dimensions per cluster
void write_clustered_dataset(const fs::path& path) {
  Rng rng(424242);
  std::ofstream out(path);
  const int clusters = 5, per_cluster = 10, length = 20, dims = 10;
  for (int c = 0; c < clusters; ++c) {
    for (int i = 0; i < per_cluster; ++i) {
      out << "{\"id\":\"c" << c << "_demo" << i
          << "\",\"channels\":{\"state\":[";
      for (int t = 0; t < length; ++t) {
        out << (t ? "," : "") << "[";
        for (int d = 0; d < dims; ++d) {
          double v = 0.0;
          if (d == 2 * c) {
            v = std::sin(0.5 * t) + 0.01 * rng.normal();
          } else if (d == 2 * c + 1) {
            v = 0.3 * t / length + 0.01 * rng.normal();
          }
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.6f", v);
          out << (d ? "," : "") << buf;
        }
        out << "]";
      }
      out << "]}}\n";
    }
  }
}

void criterion_10_curation_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir =
      fs::temp_directory_path() /
      ("sigcurate_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  write_clustered_dataset(dir / "clusters.jsonl");
  const std::string base = "--dataset " + (dir / "clusters.jsonl").string() +
                           " --out " + (dir / "out").string();

  bool pass = run_cli("gram " + base, dir / "log") == 0;
  pass = pass && run_cli("curate " + base + " --cache read --m 5",
                         dir / "log") == 0;
  std::set<char> selected_clusters;
  int selected_count = 0;
  {
    std::stringstream ids(slurp(dir / "out" / "selected_ids.txt"));
    std::string id;
    while (std::getline(ids, id)) {
      if (id.size() > 1 && id[0] == 'c') selected_clusters.insert(id[1]);
      ++selected_count;
    }
  }
  const bool one_per_cluster =
      selected_count == 5 && selected_clusters.size() == 5;

  pass = pass &&
         run_cli("curve " + base +
                     " --cache read --budgets 1,2,3,4,5,6,7,8,9,10 "
                     "--random-draws 20",
                 dir / "log") == 0;
  bool curve_dominates = true;
  {
    std::stringstream csv(slurp(dir / "out" / "curve.csv"));
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
      std::stringstream row(line);
      std::string cell;
      std::vector<double> cells;
      while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
      if (cells.size() >= 3 && cells[1] < cells[2] - 1e-9) {
        curve_dominates = false;
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(10, pass && one_per_cluster && curve_dominates && elapsed < 60.0,
         "planted-cluster curation picks one per cluster and dominates random",
         std::to_string(selected_clusters.size()) +
             "/5 clusters covered, curve dominates: " +
             (curve_dominates ? "yes" : "no") + ", " + fmt(elapsed) + "s < 60s");
}

void criterion_11_determinism_and_cache() {
  const fs::path dir =
      fs::temp_directory_path() /
      ("sigcurate_accept11_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  write_clustered_dataset(dir / "clusters.jsonl");

  bool pass = true;
  for (const std::string out : {"a", "b"}) {
    const std::string base = "--dataset " + (dir / "clusters.jsonl").string() +
                             " --seed 7 --out " + (dir / out).string();
    pass = pass && run_cli("gram " + base, dir / "log") == 0;
    pass = pass && run_cli("entropy " + base + " --cache read", dir / "log") == 0;
    pass = pass && run_cli("curate " + base +
                               " --cache read --m 6 --algorithm kdpp",
                           dir / "log") == 0;
    pass = pass && run_cli("curve " + base + " --cache read --budgets 2,5,9",
                           dir / "log") == 0;
  }
  bool identical = true;
  for (const std::string name :
       {"gram.bin", "spectrum.json", "selection.json", "selected_ids.txt",
        "curve.csv"}) {
    if (slurp(dir / "a" / name) != slurp(dir / "b" / name)) identical = false;
  }
  // cache integrity: written file loads back entrywise-identically
  const GramMatrix loaded = load_gram((dir / "a" / "gram.bin").string());
  GramMatrix direct;
  {
    const auto demos =
        load_dataset((dir / "clusters.jsonl").string(), DatasetFormat::jsonl);
    PathConfig paths;
    KernelConfig kernel;
    kernel.seed = 7;
    direct = gram(build_trajectories(demos, paths), kernel);
  }
  const bool round_trip = loaded.entries == direct.entries &&
                          loaded.ids == direct.ids &&
                          loaded.normalized == direct.normalized;
  report(11, pass && identical && round_trip,
         "identical configs give byte-identical outputs; cache round-trips",
         std::string("artifacts identical: ") + (identical ? "yes" : "no") +
             ", cache exact: " + (round_trip ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion_1_analytic_oracle();
  criterion_2_backend_agreement();
  criterion_3_algebraic_identities();
  criterion_4_entropy_equality();
  criterion_5_metric_fixtures();
  criterion_6_greedy_guarantee();
  criterion_7_stochastic_greedy();
  criterion_8_kdpp_law();
  criterion_9_rfsf_consistency();
  criterion_10_curation_end_to_end();
  criterion_11_determinism_and_cache();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
