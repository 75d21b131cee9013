#include "funcox/simulate.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "funcox/errors.hpp"
#include "funcox/lmoments.hpp"
#include "funcox/parallel.hpp"
#include "funcox/rng.hpp"

namespace funcox {

Eigen::VectorXd true_scalar_betas(const SimConfig& config) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(config.p_scalar);
  if (config.p_scalar > 0) beta[0] = 1.0;
  if (config.p_scalar > 1) beta[1] = 1.5;
  if (config.p_scalar > 2) beta[2] = 2.0;
  return beta;
}

double true_coef_function(int k, double s) {
  switch (k) {
    case 0: return 3.0 * std::cos(M_PI * s);
    case 1: return 4.5 * std::sin(M_PI * s);
    case 2: return 3.5 * std::cos(2 * M_PI * s) - 5.5 * std::sin(2 * M_PI * s);
    case 3: return 4.0 * std::cos(2 * M_PI * s);
    case 4: return 2.5 * std::sin(2 * M_PI * s);
    default: return 0.0;
  }
}

double shifted_legendre(int q, double s) {
  if (q < 1) throw ConfigError("shifted_legendre: q must be positive");
  const double x = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = x;
  if (q == 1) return 1.0;  // sqrt(2*1 - 1) * P_0
  for (int k = 2; k < q; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return std::sqrt(2.0 * q - 1.0) * p1;
}

SurvivalDataset generate_dataset(const SimConfig& config, std::uint64_t replicate_seed,
                                 TruthRecord* truth) {
  if (config.n < 2 || config.grid_points < 2 || config.p_scalar < 0 ||
      config.k_functional < 1 || config.poly_terms < 1 || !(config.mean_censoring > 0))
    throw ConfigError("generate_dataset: degenerate configuration");

  const int n = config.n, p = config.p_scalar, K = config.k_functional;
  const int m = config.grid_points;
  std::mt19937_64 rng(replicate_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> standard_normal(0.0, 1.0);

  SurvivalDataset data;
  data.grid.resize(m);
  for (int l = 0; l < m; ++l) data.grid[l] = static_cast<double>(l) / (m - 1);

  // phi_q and the true functions evaluated once on the grid
  Eigen::MatrixXd phi(m, config.poly_terms);
  for (int q = 1; q <= config.poly_terms; ++q)
    for (int l = 0; l < m; ++l) phi(l, q - 1) = shifted_legendre(q, data.grid[l]);
  Eigen::MatrixXd truth_fn(m, K);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < m; ++l) truth_fn(l, k) = true_coef_function(k, data.grid[l]);

  data.scalar_covariates.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      data.scalar_covariates(i, j) = 2.0 * uniform(rng) - 1.0;  // Uniform(-1, 1)
  for (int j = 0; j < p; ++j) data.scalar_names.push_back("Z" + std::to_string(j + 1));

  for (int k = 0; k < K; ++k)
    data.functional.push_back({"Zf" + std::to_string(k + 1), Eigen::MatrixXd(n, m)});
  Eigen::VectorXd scores(config.poly_terms);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      for (int q = 1; q <= config.poly_terms; ++q)
        scores[q - 1] = standard_normal(rng) * 2.0 *
                        std::sqrt(std::pow(static_cast<double>(q), config.score_variance_exponent));
      data.functional[k].values.row(i) = (phi * scores).transpose();
    }
  }

  const Eigen::VectorXd beta = true_scalar_betas(config);
  Eigen::VectorXd eta = data.scalar_covariates * beta;
  // same Riemann rule as the design assembly: (range/m) * sum over the grid
  for (int k = 0; k < K; ++k)
    eta.noalias() += (1.0 / m) * (data.functional[k].values * truth_fn.col(k));

  data.y.resize(n);
  data.delta.resize(n);
  Eigen::VectorXd t_times(n), c_times(n);
  for (int i = 0; i < n; ++i) {
    const double rate = std::exp(config.baseline_log_hazard + eta[i]);
    const double t = -std::log1p(-uniform(rng)) / rate;
    const double c = -std::log1p(-uniform(rng)) * config.mean_censoring;
    t_times[i] = t;
    c_times[i] = c;
    data.y[i] = std::min(t, c);
    data.delta[i] = (t <= c) ? 1 : 0;
    if (!(data.y[i] > 0)) data.y[i] = std::numeric_limits<double>::min();
  }
  for (int i = 0; i < n; ++i) data.subject_ids.push_back("S" + std::to_string(i + 1));

  if (truth) {
    truth->beta = beta;
    truth->eta = eta;
    truth->survival_times = t_times;
    truth->censoring_times = c_times;
  }
  return data;
}

namespace {

std::vector<BsplineBasis> bases_for(const SurvivalDataset& data, const McOptions& options) {
  const double a = data.grid.minCoeff(), b = data.grid.maxCoeff();
  std::vector<BsplineBasis> bases;
  for (int k = 0; k < data.k(); ++k)
    bases.push_back(build_basis(options.spline_degree, options.spline_num_basis, a, b));
  return bases;
}

ReplicateRecord fit_one(const SurvivalDataset& data, const McOptions& options) {
  ReplicateRecord rec;
  try {
    const std::vector<BsplineBasis> bases = bases_for(data, options);
    EbicSurface surface = options.adaptive
                              ? adaptive_grid_search(data, bases, options.tuning)
                              : grid_search(data, bases, options.tuning);
    const EbicCell& opt = surface.optimum();

    GridSearchOptions opt_options = options.tuning;
    opt_options.group_w = surface.group_w;  // weights in effect at the optimum
    opt_options.group_v = surface.group_v;
    opt_options.weights_on_lambda = surface.weights_on_lambda;
    PenalizedDesign design;
    std::vector<PenaltyMatrices> penalties;
    design_at_psi(data, bases, opt.psi, opt_options, design, penalties);
    BacktransformResult bt =
        backtransform(opt.fit.beta, opt.fit.gamma, design, bases, data.grid);

    rec.selected_scalars = opt.fit.selected_scalars;
    rec.selected_groups = opt.fit.selected_groups;
    rec.beta_hat = bt.beta;
    rec.coef_functions.resize(data.k(), data.m());
    for (int k = 0; k < data.k(); ++k) rec.coef_functions.row(k) = bt.coef_functions[k];
    rec.lambda_opt = opt.lambda;
    rec.psi_opt = opt.psi;
    rec.model_size =
        static_cast<int>(rec.selected_scalars.size() + rec.selected_groups.size());
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

McMetrics aggregate_metrics(const SimConfig& config, std::vector<ReplicateRecord> records) {
  const int p = config.p_scalar, K = config.k_functional;
  const int true_scalars = 3, true_groups = 5;
  const int null_scalars = p - true_scalars, null_groups = K - true_groups;
  const Eigen::VectorXd beta_true = true_scalar_betas(config);

  McMetrics metrics;
  metrics.bias = Eigen::VectorXd::Zero(true_scalars);
  metrics.mse = Eigen::VectorXd::Zero(true_scalars);
  metrics.mise = Eigen::VectorXd::Zero(true_groups);
  const int m = config.grid_points;
  Eigen::MatrixXd truth_fn(true_groups, m);
  for (int k = 0; k < true_groups; ++k)
    for (int l = 0; l < m; ++l)
      truth_fn(k, l) = true_coef_function(k, static_cast<double>(l) / (m - 1));

  int ok_count = 0;
  for (const auto& rec : records) {
    if (!rec.ok) {
      ++metrics.n_failed;
      continue;
    }
    ++ok_count;
    int tp_s = 0, fp_s = 0, tp_g = 0, fp_g = 0;
    for (int j : rec.selected_scalars) (j < true_scalars ? tp_s : fp_s) += 1;
    for (int g : rec.selected_groups) (g < true_groups ? tp_g : fp_g) += 1;
    metrics.tpr_scalar += static_cast<double>(tp_s) / true_scalars;
    metrics.fpr_scalar += null_scalars ? static_cast<double>(fp_s) / null_scalars : 0.0;
    metrics.tpr_functional += static_cast<double>(tp_g) / true_groups;
    metrics.fpr_functional += null_groups ? static_cast<double>(fp_g) / null_groups : 0.0;
    metrics.tpr_all += static_cast<double>(tp_s + tp_g) / (true_scalars + true_groups);
    metrics.fpr_all += (null_scalars + null_groups)
                           ? static_cast<double>(fp_s + fp_g) / (null_scalars + null_groups)
                           : 0.0;
    metrics.avg_model_size += rec.model_size;
    for (int j = 0; j < true_scalars; ++j) {
      const double err = rec.beta_hat[j] - beta_true[j];
      metrics.bias[j] += err;
      metrics.mse[j] += err * err;
    }
    for (int k = 0; k < true_groups; ++k) {
      double ise = 0.0;
      for (int l = 0; l < m; ++l) {
        const double err = rec.coef_functions(k, l) - truth_fn(k, l);
        ise += err * err;
      }
      metrics.mise[k] += ise / m;
    }
  }
  if (ok_count == 0) throw NumericalError("run_mc_study: every replicate failed");
  const double inv = 1.0 / ok_count;
  metrics.tpr_scalar *= inv;
  metrics.fpr_scalar *= inv;
  metrics.tpr_functional *= inv;
  metrics.fpr_functional *= inv;
  metrics.tpr_all *= inv;
  metrics.fpr_all *= inv;
  metrics.avg_model_size *= inv;
  metrics.bias *= inv;
  metrics.mse *= inv;
  metrics.mise *= inv;
  metrics.n_replicates = ok_count;
  metrics.replicates = std::move(records);
  return metrics;
}

McMetrics run_mc_study(const SimConfig& config, const McOptions& options) {
  std::vector<ReplicateRecord> records(config.n_replicates);
  parallel_for(config.n_replicates, [&](int d) {
    const SurvivalDataset data = generate_dataset(config, derive_seed(config.seed, d));
    records[d] = fit_one(data, options);
  });
  return aggregate_metrics(config, std::move(records));
}

StabilityResult selection_stability(const SurvivalDataset& dataset, int pseudo_count, int reps,
                                    std::uint64_t seed, const McOptions& options) {
  if (reps < 1) throw ConfigError("selection_stability: reps must be positive");
  dataset.validate();
  const int p = dataset.p(), k0 = dataset.k();

  StabilityResult result;
  for (const auto& name : dataset.scalar_names) result.names.push_back(name);
  for (const auto& block : dataset.functional) result.names.push_back(block.name);
  for (int c = 0; c < pseudo_count; ++c)
    result.names.push_back("pseudo_" + std::to_string(k0 + 1 + c));
  result.selection_percent.assign(result.names.size(), 0.0);

  std::vector<std::vector<char>> indicators(reps);
  parallel_for(reps, [&](int b) {
    std::vector<char> sel(result.names.size(), 0);
    try {
      SurvivalDataset augmented = dataset;
      if (pseudo_count > 0) {
        auto pseudo = pseudo_covariates(dataset.n(), pseudo_count, derive_seed(seed, b),
                                        dataset.grid, k0 + 1);
        for (auto& block : pseudo) augmented.functional.push_back(std::move(block));
      }
      const std::vector<BsplineBasis> bases = bases_for(augmented, options);
      EbicSurface surface = options.adaptive
                                ? adaptive_grid_search(augmented, bases, options.tuning)
                                : grid_search(augmented, bases, options.tuning);
      const EbicCell& opt = surface.optimum();
      for (int j : opt.fit.selected_scalars) sel[j] = 1;
      for (int g : opt.fit.selected_groups) sel[p + g] = 1;
      indicators[b] = std::move(sel);
    } catch (const std::exception&) {
      indicators[b].clear();
    }
  });

  int ok = 0;
  for (const auto& sel : indicators) {
    if (sel.empty()) {
      ++result.n_failed;
      continue;
    }
    ++ok;
    for (size_t v = 0; v < sel.size(); ++v) result.selection_percent[v] += sel[v];
  }
  if (ok == 0) throw NumericalError("selection_stability: every repetition failed");
  for (double& pct : result.selection_percent) pct = 100.0 * pct / ok;
  return result;
}

}  // namespace funcox
