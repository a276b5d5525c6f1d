#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sigcurate/kernels.hpp"
#include "sigcurate/rfsf.hpp"
#include "sigcurate/rng.hpp"
#include "support.hpp"

using namespace sigcurate;
using test_support::lifted_truncated_kernel;
using test_support::random_path;
using test_support::rfsf_kernel_reference;

namespace {

KernelConfig small_config(int level, int rff_dim, std::uint64_t seed) {
  KernelConfig cfg;
  cfg.level = level;
  cfg.rff_dim = rff_dim;
  cfg.bandwidth = 1.0;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("constant paths produce only the level-0 coordinate") {
  Trajectory c;
  c.id = "c";
  c.points = Eigen::MatrixXd{{0.4, -0.1}, {0.4, -0.1}, {0.4, -0.1}};
  const KernelConfig cfg = small_config(3, 8, 42);

  const Eigen::VectorXd full = rfsf_features(c, cfg);
  CHECK(full(0) == 1.0);
  CHECK(full.tail(full.size() - 1).norm() == 0.0);

  const Eigen::VectorXd dp = rfsf_dp_features(c, cfg);
  CHECK(dp.dot(dp) == doctest::Approx(1.0).epsilon(1e-12));  // level-0 block
  CHECK(dp.tail(dp.size() - cfg.rff_dim).norm() == 0.0);

  const Eigen::VectorXd trp = rfsf_trp_features(c, cfg);
  CHECK(trp.dot(trp) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trp.tail(trp.size() - cfg.rff_dim).norm() == 0.0);
}

TEST_CASE("level-1 features telescope to the endpoint difference") {
  Rng rng(1);
  const Trajectory x = random_path(rng, 6, 2);
  const KernelConfig cfg = small_config(1, 16, 7);
  const auto weights =
      make_rfsf_weights(2, 1, cfg.rff_dim, cfg.bandwidth, cfg.seed);

  const Eigen::VectorXd features = rfsf_features(x, cfg);
  // phi(x_T) - phi(x_0), scaled like the feature map
  const Eigen::VectorXd first = weights[0] * x.points.row(0).transpose();
  const Eigen::VectorXd last =
      weights[0] * x.points.row(x.length() - 1).transpose();
  Eigen::VectorXd expected(2 * cfg.rff_dim);
  expected << (last.array().cos() - first.array().cos()).matrix(),
      (last.array().sin() - first.array().sin()).matrix();
  expected /= std::sqrt(static_cast<double>(cfg.rff_dim));
  CHECK((features.tail(2 * cfg.rff_dim) - expected).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("feature inner products match the strict-tuple reference") {
  Rng rng(2);
  const Trajectory x = random_path(rng, 4, 2, 1.0);
  const Trajectory y = random_path(rng, 5, 2, 1.0);
  const KernelConfig cfg = small_config(3, 6, 11);
  const auto weights =
      make_rfsf_weights(2, cfg.level, cfg.rff_dim, cfg.bandwidth, cfg.seed);
  const double via_features =
      rfsf_features(x, cfg).dot(rfsf_features(y, cfg));
  const double via_reference = rfsf_kernel_reference(x, y, weights);
  CHECK(via_features == doctest::Approx(via_reference).epsilon(1e-10));
}

TEST_CASE("rff_dim 1 makes the diagonal projection exact") {
  Rng rng(3);
  const Trajectory x = random_path(rng, 4, 2, 1.0);
  const Trajectory y = random_path(rng, 4, 2, 1.0);
  for (std::uint64_t seed : {0ULL, 5ULL, 9ULL}) {
    const KernelConfig cfg = small_config(3, 1, seed);
    const double full = rfsf_features(x, cfg).dot(rfsf_features(y, cfg));
    const double dp = rfsf_dp_features(x, cfg).dot(rfsf_dp_features(y, cfg));
    CHECK(dp == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("rfsf estimates are unbiased for the lifted truncated kernel") {
  // mean over 200 weight draws at small rff_dim vs a d~=4096 single-draw
  // reference (evaluated through the strict-tuple route)
  Rng rng(4);
  const Trajectory x = random_path(rng, 4, 2, 1.0);
  const Trajectory y = random_path(rng, 4, 2, 1.0);
  const int level = 2;

  const auto ref_weights = make_rfsf_weights(2, level, 4096, 1.0, 999);
  const double reference = rfsf_kernel_reference(x, y, ref_weights);

  const int n_seeds = 200;
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    const KernelConfig cfg = small_config(level, 8, 1000 + s);
    const double est = rfsf_features(x, cfg).dot(rfsf_features(y, cfg));
    const double delta = est - mean;
    mean += delta / (s + 1);
    m2 += delta * (est - mean);
  }
  const double se = std::sqrt(m2 / (n_seeds - 1) / n_seeds);
  CHECK(std::abs(mean - reference) < 3.0 * se);

  // and the analytic expectation agrees with the high-dim reference
  const double analytic = lifted_truncated_kernel(x, y, level, 1.0);
  CHECK(std::abs(reference - analytic) < 0.05);
}

TEST_CASE("diagonal projection error shrinks with rff_dim") {
  // per trial, 8-seed RMS error at rff_dim 2048 vs 32, against the lifted
  // kernel; larger feature counts should win in >= 95% of 50 trials
  Rng rng(5);
  int wins = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    const Trajectory x = random_path(rng, 4, 2, 1.0);
    const Trajectory y = random_path(rng, 4, 2, 1.0);
    const double target = lifted_truncated_kernel(x, y, 2, 1.0);
    double rms_small = 0.0, rms_large = 0.0;
    for (int s = 0; s < 8; ++s) {
      const std::uint64_t seed = 10000 + trial * 100 + s;
      const KernelConfig small = small_config(2, 32, seed);
      const KernelConfig large = small_config(2, 2048, seed);
      rms_small += std::pow(
          rfsf_dp_features(x, small).dot(rfsf_dp_features(y, small)) - target, 2);
      rms_large += std::pow(
          rfsf_dp_features(x, large).dot(rfsf_dp_features(y, large)) - target, 2);
    }
    if (rms_large < rms_small) ++wins;
  }
  CHECK(wins >= 48);  // 95% of 50
}

TEST_CASE("tensor random projections are unbiased for the full rfsf kernel") {
  // fixed weights, 500 projection draws
  Rng rng(6);
  const Trajectory x = random_path(rng, 4, 2, 1.0);
  const Trajectory y = random_path(rng, 4, 2, 1.0);
  const int level = 2, rff_dim = 4;
  const auto weights = make_rfsf_weights(2, level, rff_dim, 1.0, 77);
  const double target = rfsf_kernel_reference(x, y, weights);

  const int n_draws = 500;
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < n_draws; ++s) {
    const auto projections = make_trp_projections(level, rff_dim, 2000 + s);
    const double est = rfsf_trp_features(x, weights, projections)
                           .dot(rfsf_trp_features(y, weights, projections));
    const double delta = est - mean;
    mean += delta / (s + 1);
    m2 += delta * (est - mean);
  }
  const double se = std::sqrt(m2 / (n_draws - 1) / n_draws);
  CHECK(std::abs(mean - target) < 3.0 * se);
}

TEST_CASE("tensor projection variance decreases with rff_dim") {
  Rng rng(7);
  const Trajectory x = random_path(rng, 4, 2, 1.0);
  const Trajectory y = random_path(rng, 4, 2, 1.0);
  std::vector<double> variances;
  for (int rff_dim : {16, 64, 256}) {
    double mean = 0.0, m2 = 0.0;
    const int trials = 50;
    for (int s = 0; s < trials; ++s) {
      const KernelConfig cfg = small_config(2, rff_dim, 3000 + s);
      const double est =
          rfsf_trp_features(x, cfg).dot(rfsf_trp_features(y, cfg));
      const double delta = est - mean;
      mean += delta / (s + 1);
      m2 += delta * (est - mean);
    }
    variances.push_back(m2 / (trials - 1));
  }
  CHECK(variances[1] < variances[0]);
  CHECK(variances[2] < variances[1]);
}

TEST_CASE("full features respect the element budget") {
  Rng rng(8);
  const Trajectory x = random_path(rng, 3, 2);
  KernelConfig cfg = small_config(4, 64, 0);
  cfg.element_budget = 100000;  // (2*64)^4 far beyond this
  CHECK_THROWS_WITH_AS(rfsf_features(x, cfg), doctest::Contains("budget"),
                       std::runtime_error);
}

TEST_CASE("feature dimensions follow the documented layouts") {
  Rng rng(9);
  const Trajectory x = random_path(rng, 3, 2);
  const KernelConfig cfg = small_config(3, 5, 1);
  CHECK(rfsf_features(x, cfg).size() == 1 + 10 + 100 + 1000);
  CHECK(rfsf_dp_features(x, cfg).size() == 5 * ((1 << 4) - 1));
  CHECK(rfsf_trp_features(x, cfg).size() == 4 * 5);
}

TEST_CASE("the same seed yields the same features") {
  Rng rng(10);
  const Trajectory x = random_path(rng, 4, 3);
  const KernelConfig cfg = small_config(2, 16, 1234);
  CHECK(rfsf_dp_features(x, cfg) == rfsf_dp_features(x, cfg));
  CHECK(rfsf_trp_features(x, cfg) == rfsf_trp_features(x, cfg));
  KernelConfig other = cfg;
  other.seed = 4321;
  CHECK((rfsf_dp_features(x, cfg) - rfsf_dp_features(x, other)).norm() > 0.0);
}
