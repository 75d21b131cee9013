#include "funcox/solver.hpp"

#include <cmath>
#include <string>

#include "funcox/errors.hpp"

namespace funcox {

double soft_threshold(double z, double lam) {
  if (z > lam) return z - lam;
  if (z < -lam) return z + lam;
  return 0.0;
}

double firm_threshold(double z, double lam, double phi) {
  if (!(phi > 1.0)) throw ConfigError("firm_threshold: phi must exceed 1");
  if (std::abs(z) > lam * phi) return z;
  return soft_threshold(z, lam) / (1.0 - 1.0 / phi);
}

double penalty_value(double t, double lam, double phi, PenaltyFamily family) {
  if (family == PenaltyFamily::LASSO) return lam * t;
  if (t > lam * phi) return 0.5 * lam * lam * phi;
  return lam * t - t * t / (2.0 * phi);
}

namespace {

double threshold(double z, double lam, const PenaltyConfig& penalty) {
  return penalty.family == PenaltyFamily::MCP ? firm_threshold(z, lam, penalty.phi)
                                              : soft_threshold(z, lam);
}

Eigen::VectorXd resolve_weights(const Eigen::VectorXd& weights, int size,
                                const char* what) {
  if (weights.size() == 0) return Eigen::VectorXd::Ones(size);
  if (weights.size() != size) throw ConfigError(std::string(what) + " weight length mismatch");
  for (int i = 0; i < size; ++i)
    if (!(weights[i] >= 0) || !std::isfinite(weights[i]))
      throw ConfigError(std::string(what) + " weights must be finite and nonnegative");
  return weights;
}

double penalty_total(const Eigen::VectorXd& beta, const std::vector<Eigen::VectorXd>& gamma,
                     const Eigen::VectorXd& sw, const Eigen::VectorXd& gw,
                     const PenaltyConfig& penalty) {
  double total = 0.0;
  for (int j = 0; j < beta.size(); ++j)
    total += penalty_value(std::abs(beta[j]), penalty.lambda * sw[j], penalty.phi,
                           penalty.family);
  for (size_t k = 0; k < gamma.size(); ++k)
    total += penalty_value(gamma[k].norm(), penalty.lambda * gw[k], penalty.phi,
                           penalty.family);
  return total;
}

}  // namespace

FitResult fit(const PenalizedDesign& design, const RiskStructure& rs,
              const PenaltyConfig& penalty, const FitResult* init,
              const FitOptions& options) {
  const int n = design.n();
  const int p = design.p();
  const int k = design.k();
  if (rs.n != n) throw InputError("fit: design/risk structure size mismatch");
  if (penalty.family == PenaltyFamily::MCP && !(penalty.phi > 1.0))
    throw ConfigError("fit: MCP requires phi > 1");
  if (!(penalty.lambda >= 0)) throw ConfigError("fit: lambda must be nonnegative");

  const Eigen::VectorXd sw = resolve_weights(penalty.scalar_weights, p, "scalar");
  const Eigen::VectorXd gw = resolve_weights(penalty.group_weights, k, "group");

  FitResult res;
  if (init) {
    if (init->beta.size() != p || static_cast<int>(init->gamma.size()) != k)
      throw InputError("fit: init dimensions do not match design");
    res.beta = init->beta;
    res.gamma = init->gamma;
  } else {
    res.beta = Eigen::VectorXd::Zero(p);
    for (int g = 0; g < k; ++g)
      res.gamma.push_back(Eigen::VectorXd::Zero(design.group_ranks[g]));
  }

  Eigen::VectorXd eta = design.scalar_block * res.beta;
  for (int g = 0; g < k; ++g)
    if (design.group_ranks[g] > 0) eta.noalias() += design.group_blocks[g] * res.gamma[g];

  Eigen::VectorXi delta = Eigen::VectorXi::Zero(n);
  for (int pos = 0; pos < n; ++pos) delta[rs.order[pos]] = rs.event_at[pos];

  const double inv_n = 1.0 / n;
  Eigen::VectorXd r(n), zk;
  for (int iter = 1; iter <= options.max_outer; ++iter) {
    if (eta.cwiseAbs().maxCoeff() > 500.0)
      throw NumericalError("fit: linear predictor diverged at lambda = " +
                           std::to_string(penalty.lambda));
    const double ll = log_partial_likelihood(eta, rs);
    res.objective_trace.push_back(-ll * inv_n +
                                  penalty_total(res.beta, res.gamma, sw, gw, penalty));
    r = working_residual(delta, expected_events(eta, rs));

    double max_change = 0.0;
    for (int j = 0; j < p; ++j) {
      const double z = inv_n * design.scalar_block.col(j).dot(r) + res.beta[j];
      const double bnew = threshold(z, penalty.lambda * sw[j], penalty);
      const double d = bnew - res.beta[j];
      if (d != 0.0) {
        r.noalias() -= design.scalar_block.col(j) * d;
        eta.noalias() += design.scalar_block.col(j) * d;
        res.beta[j] = bnew;
        max_change = std::max(max_change, std::abs(d));
      }
    }
    for (int g = 0; g < k; ++g) {
      if (design.group_ranks[g] == 0) continue;
      const Eigen::MatrixXd& block = design.group_blocks[g];
      zk.noalias() = inv_n * (block.transpose() * r);
      zk += res.gamma[g];
      const double znorm = zk.norm();
      const double scaled = znorm > 0.0
                                ? threshold(znorm, penalty.lambda * gw[g], penalty) / znorm
                                : 0.0;
      Eigen::VectorXd gnew = scaled * zk;
      Eigen::VectorXd d = gnew - res.gamma[g];
      const double dmax = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
      if (dmax > 0.0) {
        r.noalias() -= block * d;
        eta.noalias() += block * d;
        res.gamma[g] = std::move(gnew);
        max_change = std::max(max_change, dmax);
      }
    }
    res.n_iterations = iter;
    if (max_change < options.tol) {
      res.converged = true;
      break;
    }
  }

  res.final_loglik = log_partial_likelihood(eta, rs);
  res.objective =
      -res.final_loglik * inv_n + penalty_total(res.beta, res.gamma, sw, gw, penalty);
  for (int j = 0; j < p; ++j)
    if (res.beta[j] != 0.0) res.selected_scalars.push_back(j);
  for (int g = 0; g < k; ++g)
    if (res.gamma[g].size() > 0 && !res.gamma[g].isZero(0.0)) res.selected_groups.push_back(g);
  return res;
}

double path_lambda_max(const PenalizedDesign& design, const RiskStructure& rs,
                       const PenaltyConfig& penalty) {
  const int n = design.n();
  if (rs.n != n) throw InputError("path_lambda_max: design/risk structure size mismatch");
  const Eigen::VectorXd sw = resolve_weights(penalty.scalar_weights, design.p(), "scalar");
  const Eigen::VectorXd gw = resolve_weights(penalty.group_weights, design.k(), "group");

  Eigen::VectorXi delta = Eigen::VectorXi::Zero(n);
  for (int pos = 0; pos < n; ++pos) delta[rs.order[pos]] = rs.event_at[pos];
  const Eigen::VectorXd r0 =
      working_residual(delta, expected_events(Eigen::VectorXd::Zero(n), rs));

  double lam = 0.0;
  bool any = false;
  for (int j = 0; j < design.p(); ++j) {
    if (!(sw[j] > 0) || !std::isfinite(sw[j])) continue;  // never nulled by lambda
    lam = std::max(lam, std::abs(design.scalar_block.col(j).dot(r0)) / n / sw[j]);
    any = true;
  }
  for (int g = 0; g < design.k(); ++g) {
    if (design.group_ranks[g] == 0) continue;
    if (!(gw[g] > 0) || !std::isfinite(gw[g])) continue;
    lam = std::max(lam, (design.group_blocks[g].transpose() * r0).norm() / n / gw[g]);
    any = true;
  }
  if (!any) throw ConfigError("path_lambda_max: no finitely penalized coordinates");
  return lam * (1.0 + 1e-9);  // headroom so the fit at lambda_max is exactly null
}

}  // namespace funcox
