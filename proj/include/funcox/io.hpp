#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "funcox/dataset.hpp"
#include "funcox/design.hpp"
#include "funcox/lmoments.hpp"
#include "funcox/simulate.hpp"
#include "funcox/solver.hpp"
#include "funcox/splines.hpp"
#include "funcox/tuning.hpp"

namespace funcox {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Fixed-format numeric text: 12 significant digits, locale independent.
std::string format_number(double value);

/// Paths and options describing a dataset on disk.
struct DatasetManifest {
  std::string schema_version = kSchemaVersion;
  std::string survival_file;    // CSV: subject_id,time,event
  std::string scalar_file;      // CSV: subject_id,<one column per covariate>
  std::string functional_file;  // long CSV: subject_id,covariate,grid_index,value
  std::string grid_file;        // CSV: grid_index,s_value
  bool log1p_transform = false;
};

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

/// Loads and validates the dataset; subjects ordered by subject_id.
SurvivalDataset load_dataset(const DatasetManifest& manifest);

/// Writes the dataset as the four CSV files plus a manifest. File names are
/// derived from the manifest path's stem.
void save_dataset(const SurvivalDataset& dataset, const std::string& manifest_path);

/// Everything needed to reproduce and inspect a fit.
struct FitArtifact {
  std::string schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string penalty_family = "mcp";
  double lambda = 0.0;
  double psi = 0.0;
  double phi = 3.0;
  bool adaptive = false;
  std::uint64_t seed = 0;
  int n = 0;

  std::vector<std::string> scalar_names;
  Eigen::VectorXd scalar_coefficients;  // original scale
  std::vector<std::string> selected_scalars;
  std::vector<std::string> selected_groups;

  struct Group {
    std::string name;
    bool selected = false;
    int basis_degree = 3;
    int basis_num_basis = 10;
    double domain_lo = 0.0, domain_hi = 1.0;
    Eigen::VectorXd basis_coefficients;     // b_k
    Eigen::VectorXd grid;                   // training grid
    Eigen::VectorXd values;                 // beta_k on the training grid
  };
  std::vector<Group> groups;

  bool converged = false;
  int n_iterations = 0;
  double final_loglik = 0.0;
  double objective = 0.0;

  struct SurfaceSummary {
    std::vector<double> lambda_grid, psi_grid;
    double opt_lambda = 0.0, opt_psi = 0.0;
    double opt_ebic = 0.0, opt_bic = 0.0;
    int opt_df = 0, opt_nu = 0;
  };
  std::optional<SurfaceSummary> surface;
};

void save_artifact(const FitArtifact& artifact, const std::string& path);
FitArtifact load_artifact(const std::string& path);

/// EBIC surface as a flat CSV: psi,lambda,ok,loglik,df,nu,bic,ebic,model_size.
void save_surface_csv(const EbicSurface& surface, const std::string& path);

/// Monte Carlo study outputs: selection.csv, estimation.csv, mise.csv,
/// metrics.json under the given directory.
void save_mc_metrics(const McMetrics& metrics, const SimConfig& config,
                     const std::string& directory);

void save_stability_csv(const StabilityResult& result, const std::string& path);

/// Functional long CSV (subject_id,covariate,grid_index,value) plus grid CSV
/// content for the diurnal profile set.
void save_profiles_csv(const DiurnalProfileSet& set, const std::string& path);

/// Minute-level activity long CSV: subject_id,day,minute,count. Days are
/// precomputed valid days; minute in 0..1439.
std::vector<ActivityRecord> load_activity_csv(const std::string& path);

}  // namespace funcox
