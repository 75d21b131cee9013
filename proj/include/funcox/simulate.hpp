#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "funcox/dataset.hpp"
#include "funcox/splines.hpp"
#include "funcox/tuning.hpp"

namespace funcox {

/// Monte Carlo study configuration: 15 scalar covariates with three nonzero
/// effects, 20 functional covariates with five nonzero coefficient functions.
struct SimConfig {
  int n = 400;
  int p_scalar = 15;
  int k_functional = 20;
  int grid_points = 101;  // {m/100 : m = 0..100}
  double baseline_log_hazard = 0.5;
  double mean_censoring = 10.0;
  int n_replicates = 200;
  std::uint64_t seed = 1;
  int poly_terms = 20;  // orthogonal polynomial terms per functional covariate
  // score variance sigma_q^2 = 4 * q^e for the q-th orthonormal polynomial;
  // the decaying default keeps the functional signal on the scale where the
  // published selection and estimation results are reproducible
  double score_variance_exponent = -2.0;
};

/// True nonzero scalar effects: (1, 1.5, 2), zero elsewhere.
Eigen::VectorXd true_scalar_betas(const SimConfig& config);

/// True coefficient functions beta_k(s); identically zero for k >= 5.
double true_coef_function(int k, double s);

/// Unit-norm shifted Legendre polynomial phi_q(s) on [0,1], q = 1, 2, ...
double shifted_legendre(int q, double s);

struct TruthRecord {
  Eigen::VectorXd beta;
  Eigen::VectorXd eta;
  Eigen::VectorXd survival_times;
  Eigen::VectorXd censoring_times;
};

SurvivalDataset generate_dataset(const SimConfig& config, std::uint64_t replicate_seed,
                                 TruthRecord* truth = nullptr);

struct ReplicateRecord {
  bool ok = false;
  std::string error;
  std::vector<int> selected_scalars;
  std::vector<int> selected_groups;
  Eigen::VectorXd beta_hat;        // original scale
  Eigen::MatrixXd coef_functions;  // K x m, back-transformed on the data grid
  double lambda_opt = 0.0;
  double psi_opt = 0.0;
  int model_size = 0;
};

struct McMetrics {
  double tpr_scalar = 0, fpr_scalar = 0;
  double tpr_functional = 0, fpr_functional = 0;
  double tpr_all = 0, fpr_all = 0;
  double avg_model_size = 0;
  Eigen::VectorXd bias;  // per true scalar coefficient
  Eigen::VectorXd mse;
  Eigen::VectorXd mise;  // per true functional coefficient
  int n_failed = 0;
  int n_replicates = 0;
  std::vector<ReplicateRecord> replicates;
};

struct McOptions {
  GridSearchOptions tuning;
  bool adaptive = false;
  int spline_degree = 3;
  int spline_num_basis = 10;
};

McMetrics run_mc_study(const SimConfig& config, const McOptions& options = {});

/// Aggregates per-replicate records into the study metrics (exposed for the
/// confusion-matrix oracle tests).
McMetrics aggregate_metrics(const SimConfig& config, std::vector<ReplicateRecord> records);

struct StabilityResult {
  std::vector<std::string> names;        // scalars, original groups, pseudo groups
  std::vector<double> selection_percent;
  int n_failed = 0;
};

/// Repeats pseudo-covariate augmentation + tuning + fitting B times with fresh
/// pseudo draws and reports the per-variable selection percentage.
StabilityResult selection_stability(const SurvivalDataset& dataset, int pseudo_count, int reps,
                                    std::uint64_t seed, const McOptions& options = {});

}  // namespace funcox
