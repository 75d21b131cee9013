#include "funcox/lmoments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "funcox/errors.hpp"

namespace funcox {

Eigen::VectorXd sample_lmoments(const Eigen::VectorXd& x, int max_order) {
  if (max_order < 1 || max_order > 4)
    throw ConfigError("sample_lmoments: max_order must be in 1..4");
  const int n = static_cast<int>(x.size());
  if (n < max_order)
    throw InputError("sample_lmoments: need at least max_order observations");

  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end());

  // probability-weighted moments b_r = n^{-1} sum_i C(i-1,r)/C(n-1,r) x_(i)
  double b[4] = {0, 0, 0, 0};
  for (int i = 1; i <= n; ++i) {
    double coef = 1.0;
    b[0] += sorted[i - 1];
    for (int r = 1; r < max_order; ++r) {
      coef *= static_cast<double>(i - r) / (n - r);
      b[r] += coef * sorted[i - 1];
    }
  }
  for (int r = 0; r < max_order; ++r) b[r] /= n;

  Eigen::VectorXd l(max_order);
  l[0] = b[0];
  if (max_order > 1) l[1] = 2 * b[1] - b[0];
  if (max_order > 2) l[2] = 6 * b[2] - 6 * b[1] + b[0];
  if (max_order > 3) l[3] = 20 * b[3] - 30 * b[2] + 12 * b[1] - b[0];
  return l;
}

DiurnalProfileSet diurnal_profiles(const std::vector<ActivityRecord>& records,
                                   const DiurnalOptions& options) {
  if (options.orders.empty()) throw ConfigError("diurnal_profiles: no orders requested");
  int max_order = 0;
  for (int r : options.orders) {
    if (r < 1 || r > 4) throw ConfigError("diurnal_profiles: orders must be in 1..4");
    max_order = std::max(max_order, r);
  }
  if (!(options.zeta > 0)) throw ConfigError("diurnal_profiles: zeta must be positive");

  const int minutes_per_day = 1440;
  std::vector<int> grid_minutes;
  for (int mm = 0; mm < minutes_per_day; ++mm) {
    const double s = mm / 60.0;
    if (s >= options.window_lo && s <= options.window_hi) grid_minutes.push_back(mm);
  }
  if (grid_minutes.empty()) throw ConfigError("diurnal_profiles: empty output window");

  DiurnalProfileSet set;
  set.orders = options.orders;
  set.grid.resize(grid_minutes.size());
  for (size_t g = 0; g < grid_minutes.size(); ++g) set.grid[g] = grid_minutes[g] / 60.0;

  std::vector<std::vector<Eigen::VectorXd>> rows(options.orders.size());

  for (const auto& record : records) {
    const int n_days = static_cast<int>(record.days.rows());
    if (record.days.cols() != minutes_per_day) {
      set.rejected.push_back(record.subject_id + ": expected 1440 minute columns");
      continue;
    }
    if (n_days < options.min_days) {
      set.rejected.push_back(record.subject_id + ": fewer than " +
                             std::to_string(options.min_days) + " valid days");
      continue;
    }

    std::vector<Eigen::VectorXd> subject(options.orders.size(),
                                         Eigen::VectorXd(grid_minutes.size()));
    std::vector<double> pooled;
    bool ok = true;
    for (size_t g = 0; g < grid_minutes.size() && ok; ++g) {
      const double s = grid_minutes[g] / 60.0;
      pooled.clear();
      for (int mm = 0; mm < minutes_per_day; ++mm) {
        const double t = mm / 60.0;
        if (std::abs(t - s) >= options.zeta) continue;  // open window
        for (int d = 0; d < n_days; ++d) {
          const double v = record.days(d, mm);
          pooled.push_back(options.log1p_transform ? std::log1p(v) : v);
        }
      }
      if (static_cast<int>(pooled.size()) < max_order) {
        set.rejected.push_back(record.subject_id + ": window at s=" + std::to_string(s) +
                               " has too few observations");
        ok = false;
        break;
      }
      Eigen::VectorXd l = sample_lmoments(
          Eigen::Map<const Eigen::VectorXd>(pooled.data(), pooled.size()), max_order);
      for (size_t o = 0; o < options.orders.size(); ++o)
        subject[o][g] = l[options.orders[o] - 1];
    }
    if (!ok) continue;
    set.subject_ids.push_back(record.subject_id);
    for (size_t o = 0; o < options.orders.size(); ++o)
      rows[o].push_back(std::move(subject[o]));
  }

  for (size_t o = 0; o < options.orders.size(); ++o) {
    Eigen::MatrixXd mat(rows[o].size(), grid_minutes.size());
    for (size_t i = 0; i < rows[o].size(); ++i) mat.row(i) = rows[o][i];
    set.profiles.push_back(std::move(mat));
  }
  return set;
}

std::vector<FunctionalBlock> to_functional_blocks(const DiurnalProfileSet& set,
                                                  const std::string& prefix) {
  std::vector<FunctionalBlock> blocks;
  for (size_t o = 0; o < set.orders.size(); ++o)
    blocks.push_back({prefix + std::to_string(set.orders[o]), set.profiles[o]});
  return blocks;
}

std::vector<FunctionalBlock> interaction_profiles(const std::vector<FunctionalBlock>& blocks,
                                                  const Eigen::VectorXd& scalar,
                                                  const std::string& suffix) {
  std::vector<FunctionalBlock> out;
  for (const auto& block : blocks) {
    if (block.values.rows() != scalar.size())
      throw InputError("interaction_profiles: scalar length mismatch");
    out.push_back({block.name + ":" + suffix,
                   scalar.asDiagonal() * block.values});
  }
  return out;
}

std::vector<FunctionalBlock> pseudo_covariates(int n, int count, std::uint64_t seed,
                                               const Eigen::VectorXd& grid, int j_start) {
  if (count < 1) throw ConfigError("pseudo_covariates: count must be at least 1");
  if (n < 1) throw ConfigError("pseudo_covariates: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);

  std::vector<FunctionalBlock> out;
  const double sqrt2 = std::sqrt(2.0);
  for (int c = 0; c < count; ++c) {
    const int j = j_start + c;
    FunctionalBlock block;
    block.name = "pseudo_" + std::to_string(j);
    block.values.resize(n, grid.size());
    for (int i = 0; i < n; ++i) {
      const double a = normal(rng);
      const double b = normal(rng);
      for (Eigen::Index g = 0; g < grid.size(); ++g) {
        const double arg = M_PI * j * grid[g] / 24.0;
        block.values(i, g) = a * sqrt2 * std::sin(arg) + b * sqrt2 * std::cos(arg);
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace funcox
