#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "funcox/errors.hpp"
#include "funcox/rng.hpp"
#include "funcox/simulate.hpp"

using namespace funcox;

namespace {

SimConfig small_config() {
  SimConfig config;
  config.n = 80;
  config.p_scalar = 4;
  config.k_functional = 6;
  config.grid_points = 41;
  config.poly_terms = 5;
  config.n_replicates = 2;
  return config;
}

bool datasets_equal(const SurvivalDataset& a, const SurvivalDataset& b) {
  if (a.y != b.y || a.delta != b.delta) return false;
  if (a.scalar_covariates != b.scalar_covariates) return false;
  if (a.functional.size() != b.functional.size()) return false;
  for (size_t k = 0; k < a.functional.size(); ++k)
    if (a.functional[k].values != b.functional[k].values) return false;
  return true;
}

}  // namespace

TEST_CASE("true effects match their closed forms") {
  SimConfig config;
  Eigen::VectorXd beta = true_scalar_betas(config);
  REQUIRE(beta.size() == 15);
  CHECK(beta[0] == 1.0);
  CHECK(beta[1] == 1.5);
  CHECK(beta[2] == 2.0);
  for (int j = 3; j < beta.size(); ++j) CHECK(beta[j] == 0.0);

  CHECK(true_coef_function(0, 0.0) == doctest::Approx(3.0));
  CHECK(true_coef_function(1, 0.5) == doctest::Approx(4.5));
  CHECK(true_coef_function(2, 0.25) == doctest::Approx(-5.5));
  CHECK(true_coef_function(3, 0.5) == doctest::Approx(-4.0));
  CHECK(true_coef_function(4, 0.25) == doctest::Approx(2.5));
  for (int k = 5; k < 20; ++k) CHECK(true_coef_function(k, 0.37) == 0.0);
}

TEST_CASE("shifted Legendre polynomials are orthonormal on the unit interval") {
  const int fine = 200001;
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(fine, 0.0, 1.0);
  const double h = 1.0 / (fine - 1);
  for (int q = 1; q <= 5; ++q) {
    for (int r = q; r <= 5; ++r) {
      double acc = 0.0;
      for (int i = 0; i < fine; ++i) {
        const double w = (i == 0 || i == fine - 1) ? 0.5 : 1.0;
        acc += w * shifted_legendre(q, s[i]) * shifted_legendre(r, s[i]);
      }
      acc *= h;
      CHECK(acc == doctest::Approx(q == r ? 1.0 : 0.0).epsilon(1e-8));
    }
  }
  CHECK(shifted_legendre(1, 0.3) == doctest::Approx(1.0));
  CHECK(shifted_legendre(2, 0.0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(shifted_legendre(0, 0.5), ConfigError);
}

TEST_CASE("generated datasets are deterministic in the seed") {
  SimConfig config = small_config();
  SurvivalDataset a = generate_dataset(config, 42);
  SurvivalDataset b = generate_dataset(config, 42);
  SurvivalDataset c = generate_dataset(config, 43);
  CHECK(datasets_equal(a, b));
  CHECK_FALSE(datasets_equal(a, c));
  CHECK_NOTHROW(a.validate());
  CHECK(a.n() == config.n);
  CHECK(a.p() == config.p_scalar);
  CHECK(a.k() == config.k_functional);
  CHECK(a.m() == config.grid_points);
  CHECK(a.scalar_names[0] == "Z1");
  CHECK(a.functional[0].name == "Zf1");
  CHECK(a.scalar_covariates.maxCoeff() <= 1.0);
  CHECK(a.scalar_covariates.minCoeff() >= -1.0);
}

TEST_CASE("the recorded linear predictor recomputes from the stored covariates") {
  SimConfig config = small_config();
  TruthRecord truth;
  SurvivalDataset data = generate_dataset(config, 7, &truth);
  const Eigen::VectorXd beta = true_scalar_betas(config);
  const int m = data.m();
  Eigen::VectorXd eta = data.scalar_covariates * beta;
  for (int k = 0; k < data.k(); ++k) {
    Eigen::VectorXd fn(m);
    for (int l = 0; l < m; ++l) fn[l] = true_coef_function(k, data.grid[l]);
    eta += (1.0 / m) * (data.functional[k].values * fn);
  }
  CHECK((eta - truth.eta).cwiseAbs().maxCoeff() < 1e-12);
  // observed time and status agree with the latent pair
  for (int i = 0; i < data.n(); ++i) {
    CHECK(data.y[i] ==
          doctest::Approx(std::min(truth.survival_times[i], truth.censoring_times[i])));
    CHECK(data.delta[i] == (truth.survival_times[i] <= truth.censoring_times[i] ? 1 : 0));
  }
}

TEST_CASE("survival and censoring draws follow the stated exponential laws") {
  SimConfig config = small_config();
  config.n = 10000;
  config.k_functional = 1;
  config.poly_terms = 2;
  TruthRecord truth;
  generate_dataset(config, 2718, &truth);
  // conditional on eta, rate * T is standard exponential: mean 1, P(>1) = 1/e
  double mean_scaled = 0.0, tail = 0.0;
  for (int i = 0; i < config.n; ++i) {
    const double scaled =
        truth.survival_times[i] * std::exp(config.baseline_log_hazard + truth.eta[i]);
    mean_scaled += scaled;
    tail += scaled > 1.0 ? 1.0 : 0.0;
  }
  mean_scaled /= config.n;
  tail /= config.n;
  CHECK(mean_scaled == doctest::Approx(1.0).epsilon(0.05));
  CHECK(tail == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
  CHECK(truth.censoring_times.mean() ==
        doctest::Approx(config.mean_censoring).epsilon(0.05));
}

TEST_CASE("functional covariate variance follows the score variance schedule") {
  SimConfig config = small_config();
  config.n = 4000;
  config.k_functional = 1;
  config.poly_terms = 2;
  // Var Z(s) = 4 * 1^e + 4 * 2^e * phi_2(s)^2; phi_2(0)^2 = 3
  for (double e : {-2.0, 0.0}) {
    config.score_variance_exponent = e;
    SurvivalDataset data = generate_dataset(config, 99);
    const Eigen::VectorXd col = data.functional[0].values.col(0);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / (col.size() - 1);
    const double expected = 4.0 + 4.0 * std::pow(2.0, e) * 3.0;
    CHECK(var == doctest::Approx(expected).epsilon(0.10));
  }
}

TEST_CASE("aggregation matches a hand-built confusion matrix and error oracle") {
  SimConfig config;
  config.p_scalar = 15;
  config.k_functional = 20;
  config.grid_points = 101;
  const int m = config.grid_points;

  ReplicateRecord r1;
  r1.ok = true;
  r1.selected_scalars = {0, 1, 2, 7};        // 3 true + 1 false of 12 nulls
  r1.selected_groups = {0, 1, 2, 3, 4};      // all 5 true groups
  r1.model_size = 9;
  r1.beta_hat = Eigen::VectorXd::Zero(15);
  r1.beta_hat[0] = 1.2;
  r1.beta_hat[1] = 1.5;
  r1.beta_hat[2] = 1.8;
  r1.coef_functions = Eigen::MatrixXd::Zero(20, m);
  for (int k = 0; k < 5; ++k)
    for (int l = 0; l < m; ++l)
      r1.coef_functions(k, l) = true_coef_function(k, static_cast<double>(l) / (m - 1));

  ReplicateRecord r2;
  r2.ok = true;
  r2.selected_scalars = {0, 1};              // misses one true scalar
  r2.selected_groups = {0, 1, 2, 3, 4, 10};  // one false group of 15 nulls
  r2.model_size = 8;
  r2.beta_hat = Eigen::VectorXd::Zero(15);
  r2.beta_hat[0] = 0.8;
  r2.beta_hat[1] = 1.5;
  r2.beta_hat[2] = 2.0;
  r2.coef_functions = Eigen::MatrixXd::Zero(20, m);  // zero estimate everywhere

  ReplicateRecord failed;
  failed.error = "diverged";

  McMetrics metrics = aggregate_metrics(config, {r1, r2, failed});
  CHECK(metrics.n_failed == 1);
  CHECK(metrics.n_replicates == 2);
  CHECK(metrics.tpr_scalar == doctest::Approx(0.5 * (1.0 + 2.0 / 3.0)));
  CHECK(metrics.fpr_scalar == doctest::Approx(0.5 * (1.0 / 12.0)));
  CHECK(metrics.tpr_functional == doctest::Approx(1.0));
  CHECK(metrics.fpr_functional == doctest::Approx(0.5 * (1.0 / 15.0)));
  CHECK(metrics.tpr_all == doctest::Approx(0.5 * (8.0 / 8.0 + 7.0 / 8.0)));
  CHECK(metrics.fpr_all == doctest::Approx(0.5 * (1.0 / 27.0 + 1.0 / 27.0)));
  CHECK(metrics.avg_model_size == doctest::Approx(8.5));

  CHECK(metrics.bias[0] == doctest::Approx(0.5 * (0.2 - 0.2)));
  CHECK(metrics.bias[2] == doctest::Approx(0.5 * (-0.2 + 0.0)));
  CHECK(metrics.mse[0] == doctest::Approx(0.5 * (0.04 + 0.04)));
  CHECK(metrics.mse[2] == doctest::Approx(0.5 * 0.04));
  for (int j = 0; j < 3; ++j)
    CHECK(metrics.mse[j] + 1e-12 >= metrics.bias[j] * metrics.bias[j]);

  // r1 is exact, so MISE is half the integrated squared truth (r2's zero fit)
  for (int k = 0; k < 5; ++k) {
    double ist = 0.0;
    for (int l = 0; l < m; ++l) {
      const double t = true_coef_function(k, static_cast<double>(l) / (m - 1));
      ist += t * t;
    }
    CHECK(metrics.mise[k] == doctest::Approx(0.5 * ist / m).epsilon(1e-12));
  }

  CHECK_THROWS_AS(aggregate_metrics(config, {failed}), NumericalError);
}

TEST_CASE("replicate seeds derived from the master seed are distinct") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}

TEST_CASE("a small Monte Carlo study runs end to end") {
  SimConfig config = small_config();
  config.n = 100;
  config.seed = 3;
  McOptions options;
  options.tuning.nlambda = 8;
  options.tuning.psi_grid = {1.0};
  options.spline_num_basis = 6;
  McMetrics metrics = run_mc_study(config, options);
  CHECK(metrics.n_replicates + metrics.n_failed == config.n_replicates);
  REQUIRE(metrics.replicates.size() == 2);
  CHECK(metrics.tpr_all >= 0.0);
  CHECK(metrics.tpr_all <= 1.0);
  CHECK(metrics.fpr_all >= 0.0);
  CHECK(metrics.fpr_all <= 1.0);
  CHECK(metrics.bias.size() == 3);
  CHECK(metrics.mise.size() == 5);
  for (const auto& rec : metrics.replicates) {
    if (!rec.ok) continue;
    CHECK(rec.beta_hat.size() == config.p_scalar);
    CHECK(rec.coef_functions.rows() == config.k_functional);
    CHECK(rec.coef_functions.cols() == config.grid_points);
    CHECK(rec.model_size ==
          static_cast<int>(rec.selected_scalars.size() + rec.selected_groups.size()));
  }

  // byte-for-byte repeatability of the whole study
  McMetrics again = run_mc_study(config, options);
  CHECK(metrics.tpr_all == again.tpr_all);
  CHECK(metrics.avg_model_size == again.avg_model_size);
  CHECK(metrics.mise == again.mise);
}

TEST_CASE("stability percentages are well formed and deterministic") {
  SimConfig config = small_config();
  config.n = 120;
  SurvivalDataset data = generate_dataset(config, 11);
  McOptions options;
  options.tuning.nlambda = 8;
  options.tuning.psi_grid = {1.0};
  options.spline_num_basis = 6;
  StabilityResult res = selection_stability(data, 2, 3, 5, options);
  REQUIRE(res.names.size() == static_cast<size_t>(data.p() + data.k() + 2));
  CHECK(res.names[data.p() + data.k()] == "pseudo_7");
  CHECK(res.names[data.p() + data.k() + 1] == "pseudo_8");
  for (double pct : res.selection_percent) {
    CHECK(pct >= 0.0);
    CHECK(pct <= 100.0);
  }
  StabilityResult again = selection_stability(data, 2, 3, 5, options);
  CHECK(res.selection_percent == again.selection_percent);
  CHECK_THROWS_AS(selection_stability(data, 2, 0, 5, options), ConfigError);
}

TEST_CASE("degenerate configurations are rejected") {
  SimConfig config = small_config();
  config.n = 1;
  CHECK_THROWS_AS(generate_dataset(config, 1), ConfigError);
  config = small_config();
  config.grid_points = 1;
  CHECK_THROWS_AS(generate_dataset(config, 1), ConfigError);
  config = small_config();
  config.mean_censoring = 0.0;
  CHECK_THROWS_AS(generate_dataset(config, 1), ConfigError);
}
