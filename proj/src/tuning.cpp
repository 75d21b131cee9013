#include "funcox/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "funcox/errors.hpp"

namespace funcox {

namespace {

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw InputError("log_binomial: k out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double trapezoid_l2_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& grid) {
  if (values.size() != grid.size() || grid.size() < 2)
    throw InputError("trapezoid_l2_norm: grid/value mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
    const double a = values[i] * values[i], b = values[i + 1] * values[i + 1];
    acc += 0.5 * (a + b) * (grid[i + 1] - grid[i]);
  }
  return std::sqrt(acc);
}

}  // namespace

void model_dimensions(const FitResult& fit, const PenalizedDesign& design, int& df, int& nu) {
  nu = static_cast<int>(fit.selected_scalars.size() + fit.selected_groups.size());
  df = static_cast<int>(fit.selected_scalars.size());
  for (int g : fit.selected_groups) df += design.group_ranks[g];
}

double ebic(const FitResult& fit, const RiskStructure& rs, int p_total, int df, int nu,
            const EbicOptions& options) {
  if (nu > p_total) throw InputError("ebic: more selected variables than variables");
  const double log_n = std::log(static_cast<double>(options.use_total_n ? rs.n : rs.n_events));
  const double bic = -2.0 * fit.final_loglik + df * log_n;
  return bic + 2.0 * log_binomial(p_total, nu);
}

std::vector<double> default_psi_grid() {
  // 7 log-spaced values spanning 1e-3 .. 1e3
  std::vector<double> grid;
  for (int i = -3; i <= 3; ++i) grid.push_back(std::pow(10.0, i));
  return grid;
}

void design_at_psi(const SurvivalDataset& dataset, const std::vector<BsplineBasis>& bases,
                   double psi, const GridSearchOptions& options,
                   PenalizedDesign& design, std::vector<PenaltyMatrices>& penalties) {
  const bool weighted = !options.group_w.empty() && !options.weights_on_lambda;
  if (weighted && (options.group_w.size() != bases.size() ||
                   options.group_v.size() != bases.size()))
    throw ConfigError("design_at_psi: adaptive weight count mismatch");
  penalties.clear();
  penalties.reserve(bases.size());
  for (size_t k = 0; k < bases.size(); ++k) {
    PenaltyMatrices pm = penalty_matrices(bases[k], psi, options.factor_method);
    if (weighted)
      pm = weighted_penalty_matrices(pm, psi, options.group_w[k], options.group_v[k],
                                     options.factor_method);
    penalties.push_back(std::move(pm));
  }
  design = build_design(dataset, bases, penalties);
}

EbicSurface grid_search(const SurvivalDataset& dataset, const std::vector<BsplineBasis>& bases,
                        const GridSearchOptions& options) {
  dataset.validate();
  const RiskStructure rs = build_risk_structure(dataset.y, dataset.delta);
  const int p_total = dataset.p() + dataset.k();

  EbicSurface surface;
  surface.group_w = options.group_w;
  surface.group_v = options.group_v;
  surface.weights_on_lambda = options.weights_on_lambda;
  surface.psi_grid = options.psi_grid.empty() ? default_psi_grid() : options.psi_grid;
  if (surface.psi_grid.empty()) throw ConfigError("grid_search: empty psi grid");

  PenaltyConfig base_penalty;
  base_penalty.family = options.family;
  base_penalty.phi = options.phi;
  if (!options.group_w.empty() && options.weights_on_lambda) {
    base_penalty.group_weights =
        Eigen::Map<const Eigen::VectorXd>(options.group_w.data(), options.group_w.size());
  }

  // The lambda grid is shared across psi columns; lambda_max is computed from
  // the assembled designs (it is invariant to the reparameterization since the
  // orthonormalized blocks span the same column space for every psi).
  std::vector<PenalizedDesign> designs(surface.psi_grid.size());
  for (size_t s = 0; s < surface.psi_grid.size(); ++s) {
    std::vector<PenaltyMatrices> penalties;
    design_at_psi(dataset, bases, surface.psi_grid[s], options, designs[s], penalties);
  }

  if (options.lambda_grid.empty()) {
    if (options.nlambda < 1) throw ConfigError("grid_search: nlambda must be positive");
    double lam_max = 0.0;
    for (const auto& design : designs)
      lam_max = std::max(lam_max, path_lambda_max(design, rs, base_penalty));
    surface.lambda_max = lam_max;
    const double lam_min = options.lambda_min_ratio * lam_max;
    for (int i = 0; i < options.nlambda; ++i) {
      const double t = options.nlambda == 1
                           ? 0.0
                           : static_cast<double>(i) / (options.nlambda - 1);
      surface.lambda_grid.push_back(lam_max * std::pow(lam_min / lam_max, t));
    }
  } else {
    surface.lambda_grid = options.lambda_grid;
    std::sort(surface.lambda_grid.begin(), surface.lambda_grid.end(), std::greater<>());
  }

  surface.cells.resize(surface.psi_grid.size());
  for (size_t s = 0; s < surface.psi_grid.size(); ++s) {
    const PenalizedDesign& design = designs[s];
    surface.cells[s].resize(surface.lambda_grid.size());
    FitResult warm;
    bool have_warm = false;
    for (size_t l = 0; l < surface.lambda_grid.size(); ++l) {
      EbicCell& cell = surface.cells[s][l];
      cell.lambda = surface.lambda_grid[l];
      cell.psi = surface.psi_grid[s];
      PenaltyConfig penalty = base_penalty;
      penalty.lambda = cell.lambda;
      try {
        cell.fit = fit(design, rs, penalty, have_warm ? &warm : nullptr, options.fit_options);
        warm = cell.fit;
        have_warm = true;
        cell.loglik = cell.fit.final_loglik;
        model_dimensions(cell.fit, design, cell.df, cell.nu);
        const double log_n = std::log(
            static_cast<double>(options.ebic_options.use_total_n ? rs.n : rs.n_events));
        cell.bic = -2.0 * cell.loglik + cell.df * log_n;
        cell.ebic = cell.bic + 2.0 * log_binomial(p_total, cell.nu);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
        have_warm = false;  // restart the path after a failed cell
      }
    }
  }

  // minimum EBIC; ties broken toward larger lambda, then larger psi
  for (size_t s = 0; s < surface.psi_grid.size(); ++s) {
    for (size_t l = 0; l < surface.lambda_grid.size(); ++l) {
      const EbicCell& cell = surface.cells[s][l];
      if (!cell.ok) continue;
      if (surface.opt_psi < 0) {
        surface.opt_psi = static_cast<int>(s);
        surface.opt_lambda = static_cast<int>(l);
        continue;
      }
      const EbicCell& best = surface.optimum();
      bool better = cell.ebic < best.ebic;
      if (cell.ebic == best.ebic) {
        if (cell.lambda > best.lambda) better = true;
        else if (cell.lambda == best.lambda && cell.psi > best.psi) better = true;
      }
      if (better) {
        surface.opt_psi = static_cast<int>(s);
        surface.opt_lambda = static_cast<int>(l);
      }
    }
  }
  if (surface.opt_psi < 0) throw NumericalError("grid_search: every cell failed");
  return surface;
}

AdaptiveWeights adaptive_weights(const std::vector<Eigen::VectorXd>& functions,
                                 const std::vector<Eigen::VectorXd>& second_derivatives,
                                 const Eigen::VectorXd& grid) {
  if (functions.size() != second_derivatives.size() || functions.empty())
    throw InputError("adaptive_weights: need matching nonempty function sets");
  constexpr double kCap = 1e6;
  auto reciprocal_norms = [&](const std::vector<Eigen::VectorXd>& fns) {
    std::vector<double> weights;
    bool any_signal = false;
    for (const auto& f : fns) {
      const double norm = trapezoid_l2_norm(f, grid);
      if (norm > 0) any_signal = true;
      weights.push_back(norm > 1.0 / kCap ? 1.0 / norm : kCap);
    }
    if (!any_signal) throw NumericalError("adaptive_weights: all initial norms are zero");
    double min_finite = kCap;
    for (double w : weights)
      if (w < kCap) min_finite = std::min(min_finite, w);
    for (double& w : weights)
      if (w < kCap) w /= min_finite;
    return weights;
  };
  AdaptiveWeights out;
  out.w = reciprocal_norms(functions);
  out.v = reciprocal_norms(second_derivatives);
  return out;
}

EbicSurface adaptive_grid_search(const SurvivalDataset& dataset,
                                 const std::vector<BsplineBasis>& bases,
                                 const GridSearchOptions& options,
                                 EbicSurface* initial_surface) {
  EbicSurface initial = grid_search(dataset, bases, options);
  const EbicCell& opt = initial.optimum();
  if (opt.fit.selected_groups.empty()) {
    // nothing to reweight: the adaptive search coincides with the initial one
    if (initial_surface) *initial_surface = initial;
    return initial;
  }

  PenalizedDesign design;
  std::vector<PenaltyMatrices> penalties;
  design_at_psi(dataset, bases, opt.psi, options, design, penalties);

  const int dense = 201;
  Eigen::VectorXd grid(dense);
  const double a = bases.front().a, b = bases.front().b;
  for (int i = 0; i < dense; ++i) grid[i] = a + (b - a) * i / (dense - 1.0);

  BacktransformResult bt = backtransform(opt.fit.beta, opt.fit.gamma, design, bases, grid);
  std::vector<Eigen::VectorXd> second_derivs;
  for (size_t k = 0; k < bases.size(); ++k)
    second_derivs.push_back(evaluate_basis(bases[k], grid, 2) * bt.basis_coefs[k]);
  AdaptiveWeights weights = adaptive_weights(bt.coef_functions, second_derivs, grid);

  GridSearchOptions adaptive_options = options;
  adaptive_options.group_w = weights.w;
  adaptive_options.group_v = weights.v;
  if (initial_surface) *initial_surface = std::move(initial);
  return grid_search(dataset, bases, adaptive_options);
}

}  // namespace funcox
