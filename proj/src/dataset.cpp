#include "funcox/dataset.hpp"

#include <cmath>

#include "funcox/errors.hpp"

namespace funcox {

void SurvivalDataset::validate() const {
  const int nn = n();
  if (nn == 0) throw InputError("dataset: empty");
  if (delta.size() != nn) throw InputError("dataset: y/delta length mismatch");
  if (scalar_covariates.rows() != nn && scalar_covariates.size() != 0)
    throw InputError("dataset: scalar covariate row count mismatch");
  for (int i = 0; i < nn; ++i) {
    if (!(y[i] > 0) || !std::isfinite(y[i]))
      throw InputError("dataset: observed times must be strictly positive and finite");
    if (delta[i] != 0 && delta[i] != 1)
      throw InputError("dataset: event indicators must be 0 or 1");
  }
  if (!scalar_covariates.allFinite())
    throw InputError("dataset: missing or non-finite scalar covariate values");
  for (Eigen::Index l = 1; l < grid.size(); ++l)
    if (!(grid[l] > grid[l - 1])) throw InputError("dataset: grid must be strictly increasing");
  for (const auto& block : functional) {
    if (block.values.rows() != nn)
      throw InputError("dataset: functional block '" + block.name + "' row count mismatch");
    if (block.values.cols() != grid.size())
      throw InputError("dataset: functional block '" + block.name +
                       "' does not match the shared grid length");
    if (!block.values.allFinite())
      throw InputError("dataset: missing or non-finite values in block '" + block.name + "'");
  }
  if (!subject_ids.empty() && static_cast<int>(subject_ids.size()) != nn)
    throw InputError("dataset: subject id count mismatch");
}

}  // namespace funcox
