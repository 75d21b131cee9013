// funcox: variable selection and smooth estimation for functional Cox models.
#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funcox/design.hpp"
#include "funcox/errors.hpp"
#include "funcox/io.hpp"
#include "funcox/lmoments.hpp"
#include "funcox/simulate.hpp"
#include "funcox/solver.hpp"
#include "funcox/splines.hpp"
#include "funcox/tuning.hpp"

namespace {

using namespace funcox;

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("malformed value '" + tok + "' in " + flag);
    }
  }
  if (out.empty()) throw ConfigError("empty list for " + flag);
  return out;
}

std::vector<BsplineBasis> make_bases(const SurvivalDataset& data, int degree, int num_basis) {
  const double a = data.grid[0], b = data.grid[data.m() - 1];
  std::vector<BsplineBasis> bases;
  for (int k = 0; k < data.k(); ++k) bases.push_back(build_basis(degree, num_basis, a, b));
  return bases;
}

PenaltyFamily parse_family(const std::string& name) {
  if (name == "mcp" || name == "vsfcox") return PenaltyFamily::MCP;
  if (name == "lasso" || name == "grplasso") return PenaltyFamily::LASSO;
  throw ConfigError("unknown penalty family '" + name + "'");
}

FitArtifact make_artifact(const SurvivalDataset& data, const std::vector<BsplineBasis>& bases,
                          const PenalizedDesign& design, const FitResult& fit_result,
                          double lambda, double psi, double phi, const std::string& family,
                          bool adaptive, std::uint64_t seed) {
  FitArtifact art;
  art.penalty_family = family;
  art.lambda = lambda;
  art.psi = psi;
  art.phi = phi;
  art.adaptive = adaptive;
  art.seed = seed;
  art.n = data.n();
  BacktransformResult bt =
      backtransform(fit_result.beta, fit_result.gamma, design, bases, data.grid);
  art.scalar_names = design.scalar_names;
  art.scalar_coefficients = bt.beta;
  for (int j : fit_result.selected_scalars) art.selected_scalars.push_back(design.scalar_names[j]);
  for (int g : fit_result.selected_groups) art.selected_groups.push_back(design.group_names[g]);
  for (int k = 0; k < design.k(); ++k) {
    FitArtifact::Group grp;
    grp.name = design.group_names[k];
    grp.selected = std::find(fit_result.selected_groups.begin(),
                             fit_result.selected_groups.end(),
                             k) != fit_result.selected_groups.end();
    grp.basis_degree = bases[k].degree;
    grp.basis_num_basis = bases[k].num_basis;
    grp.domain_lo = bases[k].a;
    grp.domain_hi = bases[k].b;
    grp.basis_coefficients = bt.basis_coefs[k];
    grp.grid = data.grid;
    grp.values = bt.coef_functions[k];
    art.groups.push_back(std::move(grp));
  }
  art.converged = fit_result.converged;
  art.n_iterations = fit_result.n_iterations;
  art.final_loglik = fit_result.final_loglik;
  art.objective = fit_result.objective;
  return art;
}

int cmd_fit(const std::string& manifest_path, double lambda, double psi,
            const std::string& family_name, double phi, bool adaptive, int degree,
            int num_basis, const std::string& out) {
  SurvivalDataset data = load_dataset(load_manifest(manifest_path));
  std::vector<BsplineBasis> bases = make_bases(data, degree, num_basis);
  GridSearchOptions options;
  options.lambda_grid = {lambda};
  options.psi_grid = {psi};
  options.family = parse_family(family_name);
  options.phi = phi;

  EbicSurface surface =
      adaptive ? adaptive_grid_search(data, bases, options) : grid_search(data, bases, options);
  const EbicCell& opt = surface.optimum();
  if (!opt.ok) throw NumericalError("fit failed: " + opt.error);

  GridSearchOptions design_options = options;
  design_options.group_w = surface.group_w;
  design_options.group_v = surface.group_v;
  design_options.weights_on_lambda = surface.weights_on_lambda;
  PenalizedDesign design;
  std::vector<PenaltyMatrices> penalties;
  design_at_psi(data, bases, psi, design_options, design, penalties);

  FitArtifact art = make_artifact(data, bases, design, opt.fit, lambda, psi, phi, family_name,
                                  adaptive, 0);
  save_artifact(art, out);
  return 0;
}

int cmd_tune(const std::string& manifest_path, const std::string& lambda_grid_text,
             const std::string& psi_grid_text, int nlambda, double lambda_min_ratio,
             const std::string& family_name, double phi, bool adaptive, int degree,
             int num_basis, const std::string& out, std::string surface_out) {
  SurvivalDataset data = load_dataset(load_manifest(manifest_path));
  std::vector<BsplineBasis> bases = make_bases(data, degree, num_basis);
  GridSearchOptions options;
  if (!lambda_grid_text.empty())
    options.lambda_grid = parse_double_list(lambda_grid_text, "--lambda-grid");
  if (!psi_grid_text.empty()) options.psi_grid = parse_double_list(psi_grid_text, "--psi-grid");
  options.nlambda = nlambda;
  options.lambda_min_ratio = lambda_min_ratio;
  options.family = parse_family(family_name);
  options.phi = phi;

  EbicSurface surface =
      adaptive ? adaptive_grid_search(data, bases, options) : grid_search(data, bases, options);
  const EbicCell& opt = surface.optimum();

  GridSearchOptions design_options = options;
  design_options.group_w = surface.group_w;
  design_options.group_v = surface.group_v;
  design_options.weights_on_lambda = surface.weights_on_lambda;
  PenalizedDesign design;
  std::vector<PenaltyMatrices> penalties;
  design_at_psi(data, bases, opt.psi, design_options, design, penalties);

  FitArtifact art = make_artifact(data, bases, design, opt.fit, opt.lambda, opt.psi, phi,
                                  family_name, adaptive, 0);
  FitArtifact::SurfaceSummary summary;
  summary.lambda_grid = surface.lambda_grid;
  summary.psi_grid = surface.psi_grid;
  summary.opt_lambda = opt.lambda;
  summary.opt_psi = opt.psi;
  summary.opt_ebic = opt.ebic;
  summary.opt_bic = opt.bic;
  summary.opt_df = opt.df;
  summary.opt_nu = opt.nu;
  art.surface = summary;
  save_artifact(art, out);
  if (surface_out.empty()) surface_out = out + ".surface.csv";
  save_surface_csv(surface, surface_out);
  return 0;
}

int cmd_simulate(int n, int replicates, std::uint64_t seed, const std::string& method,
                 bool adaptive, int degree, int num_basis, const std::string& out_dir) {
  SimConfig config;
  config.n = n;
  config.n_replicates = replicates;
  config.seed = seed;
  McOptions options;
  options.tuning.family = parse_family(method);
  options.adaptive = adaptive;
  options.spline_degree = degree;
  options.spline_num_basis = num_basis;
  McMetrics metrics = run_mc_study(config, options);
  save_mc_metrics(metrics, config, out_dir);
  std::cout << "completed " << metrics.n_replicates << " replicates (" << metrics.n_failed
            << " failed); TPR " << format_number(metrics.tpr_all) << ", FPR "
            << format_number(metrics.fpr_all) << ", avg model size "
            << format_number(metrics.avg_model_size) << "\n";
  return 0;
}

int cmd_lmoments(const std::string& activity_file, const std::string& orders_text, double zeta,
                 const std::string& window_text, bool log1p_flag, int min_days,
                 const std::string& out) {
  DiurnalOptions options;
  options.orders.clear();
  for (double o : parse_double_list(orders_text, "--orders")) {
    const int oi = static_cast<int>(o);
    if (oi != o || oi < 1 || oi > 4) throw ConfigError("--orders entries must be in 1..4");
    options.orders.push_back(oi);
  }
  options.zeta = zeta;
  const auto colon = window_text.find(':');
  if (colon == std::string::npos) throw ConfigError("--window must look like LO:HI");
  options.window_lo = std::stod(window_text.substr(0, colon));
  options.window_hi = std::stod(window_text.substr(colon + 1));
  options.log1p_transform = log1p_flag;
  options.min_days = min_days;

  DiurnalProfileSet set = diurnal_profiles(load_activity_csv(activity_file), options);
  save_profiles_csv(set, out);
  {
    std::ofstream grid_out(out + ".grid.csv", std::ios::binary);
    grid_out << "grid_index,s_value\n";
    for (Eigen::Index g = 0; g < set.grid.size(); ++g)
      grid_out << g << ',' << format_number(set.grid[g]) << "\n";
  }
  for (const auto& msg : set.rejected) std::cerr << "rejected: " << msg << "\n";
  return 0;
}

int cmd_pseudo_augment(const std::string& manifest_path, int count, std::uint64_t seed,
                       const std::string& out_manifest) {
  SurvivalDataset data = load_dataset(load_manifest(manifest_path));
  std::vector<FunctionalBlock> pseudo =
      pseudo_covariates(data.n(), count, seed, data.grid);
  for (auto& block : pseudo) data.functional.push_back(std::move(block));
  save_dataset(data, out_manifest);
  return 0;
}

int cmd_stability(const std::string& manifest_path, int pseudo_count, int reps,
                  std::uint64_t seed, const std::string& family_name, double phi, bool adaptive,
                  int degree, int num_basis, const std::string& out) {
  SurvivalDataset data = load_dataset(load_manifest(manifest_path));
  McOptions options;
  options.tuning.family = parse_family(family_name);
  options.tuning.phi = phi;
  options.adaptive = adaptive;
  options.spline_degree = degree;
  options.spline_num_basis = num_basis;
  StabilityResult result = selection_stability(data, pseudo_count, reps, seed, options);
  save_stability_csv(result, out);
  if (result.n_failed > 0)
    std::cerr << result.n_failed << " of " << reps << " runs failed\n";
  return 0;
}

int cmd_export_curves(const std::string& artifact_path, int grid_points,
                      const std::string& out) {
  FitArtifact art = load_artifact(artifact_path);
  std::ofstream fout(out, std::ios::binary);
  if (!fout) throw InputError("cannot open output file: " + out);
  fout << "covariate,s,value\n";
  for (const auto& grp : art.groups) {
    BsplineBasis basis =
        build_basis(grp.basis_degree, grp.basis_num_basis, grp.domain_lo, grp.domain_hi);
    Eigen::VectorXd grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
      grid[i] = grp.domain_lo +
                (grp.domain_hi - grp.domain_lo) * i / std::max(1, grid_points - 1);
    Eigen::VectorXd values = evaluate_basis(basis, grid, 0) * grp.basis_coefficients;
    for (int i = 0; i < grid_points; ++i)
      fout << grp.name << ',' << format_number(grid[i]) << ',' << format_number(values[i])
           << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable selection and smooth estimation in functional Cox models"};
  app.require_subcommand(1);

  std::string manifest, out, surface_out, family = "mcp", activity_file, artifact_path;
  std::string lambda_grid_text, psi_grid_text, orders_text = "1,2,3,4", window_text = "6:22";
  std::string method = "vsfcox";
  double lambda = 0.0, psi = 1.0, phi = 3.0, zeta = 5.0 / 60.0, lambda_min_ratio = 1e-3;
  bool adaptive = false, log1p_flag = false;
  int degree = 3, num_basis = 10, nlambda = 50;
  int n = 400, replicates = 200, pseudo_count = 10, reps = 100, grid_points = 200;
  int min_days = 4;
  std::uint64_t seed = 1;

  auto* fit_cmd = app.add_subcommand("fit", "Single penalized fit at fixed (lambda, psi)");
  fit_cmd->add_option("--manifest", manifest)->required();
  fit_cmd->add_option("--lambda", lambda)->required();
  fit_cmd->add_option("--psi", psi)->required();
  fit_cmd->add_option("--penalty", family)->check(CLI::IsMember({"mcp", "lasso"}));
  fit_cmd->add_option("--phi", phi);
  fit_cmd->add_flag("--adaptive", adaptive);
  fit_cmd->add_option("--degree", degree);
  fit_cmd->add_option("--num-basis", num_basis);
  fit_cmd->add_option("--out", out)->required();

  auto* tune_cmd = app.add_subcommand("tune", "EBIC grid search over (lambda, psi)");
  tune_cmd->add_option("--manifest", manifest)->required();
  tune_cmd->add_option("--lambda-grid", lambda_grid_text);
  tune_cmd->add_option("--psi-grid", psi_grid_text);
  tune_cmd->add_option("--nlambda", nlambda);
  tune_cmd->add_option("--lambda-min-ratio", lambda_min_ratio);
  tune_cmd->add_option("--penalty", family)->check(CLI::IsMember({"mcp", "lasso"}));
  tune_cmd->add_option("--phi", phi);
  tune_cmd->add_flag("--adaptive", adaptive);
  tune_cmd->add_option("--degree", degree);
  tune_cmd->add_option("--num-basis", num_basis);
  tune_cmd->add_option("--out", out)->required();
  tune_cmd->add_option("--surface-out", surface_out);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo selection/estimation study");
  sim_cmd->add_option("--n", n);
  sim_cmd->add_option("--replicates", replicates);
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--method", method)->check(CLI::IsMember({"vsfcox", "grplasso"}));
  sim_cmd->add_flag("--adaptive", adaptive);
  sim_cmd->add_option("--degree", degree);
  sim_cmd->add_option("--num-basis", num_basis);
  sim_cmd->add_option("--out", out)->required();

  auto* lm_cmd = app.add_subcommand("lmoments", "Diurnal L-moment profiles from activity data");
  lm_cmd->add_option("--activity-file", activity_file)->required();
  lm_cmd->add_option("--orders", orders_text);
  lm_cmd->add_option("--zeta", zeta);
  lm_cmd->add_option("--window", window_text);
  lm_cmd->add_flag("--log1p", log1p_flag);
  lm_cmd->add_option("--min-days", min_days);
  lm_cmd->add_option("--out", out)->required();

  auto* pa_cmd = app.add_subcommand("pseudo-augment", "Append random pseudo covariates");
  pa_cmd->add_option("--manifest", manifest)->required();
  pa_cmd->add_option("--count", pseudo_count);
  pa_cmd->add_option("--seed", seed);
  pa_cmd->add_option("--out", out)->required();

  auto* st_cmd = app.add_subcommand("stability", "Pseudo-covariate selection stability");
  st_cmd->add_option("--manifest", manifest)->required();
  st_cmd->add_option("--pseudo", pseudo_count);
  st_cmd->add_option("--reps", reps);
  st_cmd->add_option("--seed", seed);
  st_cmd->add_option("--penalty", family)->check(CLI::IsMember({"mcp", "lasso"}));
  st_cmd->add_option("--phi", phi);
  st_cmd->add_flag("--adaptive", adaptive);
  st_cmd->add_option("--degree", degree);
  st_cmd->add_option("--num-basis", num_basis);
  st_cmd->add_option("--out", out)->required();

  auto* ec_cmd = app.add_subcommand("export-curves", "Evaluate fitted coefficient functions");
  ec_cmd->add_option("--artifact", artifact_path)->required();
  ec_cmd->add_option("--grid-points", grid_points);
  ec_cmd->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit_cmd)
      return cmd_fit(manifest, lambda, psi, family, phi, adaptive, degree, num_basis, out);
    if (*tune_cmd)
      return cmd_tune(manifest, lambda_grid_text, psi_grid_text, nlambda, lambda_min_ratio,
                      family, phi, adaptive, degree, num_basis, out, surface_out);
    if (*sim_cmd)
      return cmd_simulate(n, replicates, seed, method, adaptive, degree, num_basis, out);
    if (*lm_cmd)
      return cmd_lmoments(activity_file, orders_text, zeta, window_text, log1p_flag, min_days,
                          out);
    if (*pa_cmd) return cmd_pseudo_augment(manifest, pseudo_count, seed, out);
    if (*st_cmd)
      return cmd_stability(manifest, pseudo_count, reps, seed, family, phi, adaptive, degree,
                           num_basis, out);
    if (*ec_cmd) return cmd_export_curves(artifact_path, grid_points, out);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
