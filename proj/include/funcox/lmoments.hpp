#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "funcox/dataset.hpp"

namespace funcox {

/// Unbiased sample L-moments l_1..l_max_order via probability-weighted moments.
Eigen::VectorXd sample_lmoments(const Eigen::VectorXd& x, int max_order);

/// Minute-level activity for one subject; rows are valid days, columns the
/// 1440 minutes of the day.
struct ActivityRecord {
  std::string subject_id;
  Eigen::MatrixXd days;
};

struct DiurnalOptions {
  std::vector<int> orders = {1, 2, 3, 4};
  double zeta = 5.0 / 60.0;  // window half-width, hours
  double window_lo = 6.0;
  double window_hi = 22.0;
  bool log1p_transform = true;
  int min_days = 4;
};

/// Windowed diurnal L-moment profiles on the minute grid restricted to
/// [window_lo, window_hi].
struct DiurnalProfileSet {
  Eigen::VectorXd grid;  // decimal hours
  std::vector<int> orders;
  std::vector<std::string> subject_ids;
  std::vector<Eigen::MatrixXd> profiles;  // one n x |grid| matrix per order
  std::vector<std::string> rejected;      // diagnostics for rejected subjects
};

/// For each grid time s, pools all (day, minute) values with minute time in
/// the open window (s - zeta, s + zeta) across the subject's valid days and
/// computes sample L-moments of the pooled values.
DiurnalProfileSet diurnal_profiles(const std::vector<ActivityRecord>& records,
                                   const DiurnalOptions& options = {});

std::vector<FunctionalBlock> to_functional_blocks(const DiurnalProfileSet& set,
                                                  const std::string& prefix = "L");

/// Pointwise products Z_ik(s) * c_i, one block per input block.
std::vector<FunctionalBlock> interaction_profiles(const std::vector<FunctionalBlock>& blocks,
                                                  const Eigen::VectorXd& scalar,
                                                  const std::string& suffix);

/// Random low-frequency noise curves Z_j(h) = a sqrt(2) sin(pi j h/24)
/// + b sqrt(2) cos(pi j h/24), a, b ~ N(0, 4) per subject, j = j_start, ...
std::vector<FunctionalBlock> pseudo_covariates(int n, int count, std::uint64_t seed,
                                               const Eigen::VectorXd& grid,
                                               int j_start = 13);

}  // namespace funcox
