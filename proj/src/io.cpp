#include "funcox/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "funcox/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace funcox {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows, 1-based row numbers = index + 2
};

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  CsvFile csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      csv.header = split_csv_line(line);
      first = false;
    } else {
      csv.rows.push_back(split_csv_line(line));
    }
  }
  if (first) throw InputError("empty CSV file: " + path);
  return csv;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("malformed number '" + s + "' in " + context);
  }
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("malformed integer '" + s + "' in " + context);
  }
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

std::ofstream open_out(const std::string& path) {
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);  // LF line endings on every platform
  if (!out) throw InputError("cannot open output file: " + path);
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd json_to_vector(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("malformed manifest JSON: " + std::string(e.what()));
  }
  DatasetManifest m;
  m.schema_version = j.value("schema_version", std::string(kSchemaVersion));
  const std::string dir = fs::path(path).parent_path().string();
  m.survival_file = resolve(dir, j.at("survival_file").get<std::string>());
  m.scalar_file = resolve(dir, j.at("scalar_file").get<std::string>());
  m.functional_file = resolve(dir, j.at("functional_file").get<std::string>());
  m.grid_file = resolve(dir, j.at("grid_file").get<std::string>());
  if (j.contains("options")) m.log1p_transform = j["options"].value("log1p_transform", false);
  return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  json j;
  j["schema_version"] = manifest.schema_version;
  const fs::path dir = fs::path(path).parent_path();
  auto relativize = [&](const std::string& file) {
    fs::path p(file);
    if (!dir.empty() && p.has_parent_path() && p.parent_path() == dir)
      return p.filename().string();
    return file;
  };
  j["survival_file"] = relativize(manifest.survival_file);
  j["scalar_file"] = relativize(manifest.scalar_file);
  j["functional_file"] = relativize(manifest.functional_file);
  j["grid_file"] = relativize(manifest.grid_file);
  j["options"] = {{"log1p_transform", manifest.log1p_transform}};
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

SurvivalDataset load_dataset(const DatasetManifest& manifest) {
  // grid
  CsvFile grid_csv = read_csv(manifest.grid_file);
  if (grid_csv.header.size() < 2 || grid_csv.header[0] != "grid_index")
    throw InputError("grid file must have header grid_index,s_value");
  const int m = static_cast<int>(grid_csv.rows.size());
  Eigen::VectorXd grid(m);
  std::vector<bool> grid_seen(m, false);
  for (size_t r = 0; r < grid_csv.rows.size(); ++r) {
    const long idx = parse_long(grid_csv.rows[r][0], manifest.grid_file);
    if (idx < 0 || idx >= m)
      throw InputError("grid_index " + std::to_string(idx) + " outside dense range 0.." +
                       std::to_string(m - 1));
    if (grid_seen[idx]) throw InputError("duplicate grid_index " + std::to_string(idx));
    grid_seen[idx] = true;
    grid[idx] = parse_double(grid_csv.rows[r][1], manifest.grid_file);
  }

  // survival
  CsvFile surv = read_csv(manifest.survival_file);
  if (surv.header.size() < 3 || surv.header[0] != "subject_id")
    throw InputError("survival file must have header subject_id,time,event");
  std::map<std::string, std::pair<double, int>> survival;
  for (size_t r = 0; r < surv.rows.size(); ++r) {
    const auto& row = surv.rows[r];
    if (row.size() < 3) throw InputError("survival row " + std::to_string(r + 2) + " too short");
    if (!survival.emplace(row[0], std::make_pair(parse_double(row[1], "survival file"),
                                                 static_cast<int>(parse_long(row[2], "survival file"))))
             .second)
      throw InputError("duplicate subject_id '" + row[0] + "' at survival row " +
                       std::to_string(r + 2));
  }

  // deterministic subject order: sorted subject_id (the std::map order)
  std::vector<std::string> ids;
  for (const auto& [id, _] : survival) ids.push_back(id);
  std::map<std::string, int> id_index;
  for (size_t i = 0; i < ids.size(); ++i) id_index[ids[i]] = static_cast<int>(i);
  const int n = static_cast<int>(ids.size());

  SurvivalDataset data;
  data.grid = grid;
  data.subject_ids = ids;
  data.y.resize(n);
  data.delta.resize(n);
  for (int i = 0; i < n; ++i) {
    data.y[i] = survival[ids[i]].first;
    data.delta[i] = survival[ids[i]].second;
  }

  // scalars
  CsvFile scal = read_csv(manifest.scalar_file);
  if (scal.header.empty() || scal.header[0] != "subject_id")
    throw InputError("scalar file must have header subject_id,<covariates>");
  const int p = static_cast<int>(scal.header.size()) - 1;
  data.scalar_names.assign(scal.header.begin() + 1, scal.header.end());
  data.scalar_covariates.resize(n, p);
  std::vector<bool> scalar_seen(n, false);
  for (size_t r = 0; r < scal.rows.size(); ++r) {
    const auto& row = scal.rows[r];
    if (static_cast<int>(row.size()) != p + 1)
      throw InputError("scalar row " + std::to_string(r + 2) + " has wrong field count");
    auto it = id_index.find(row[0]);
    if (it == id_index.end())
      throw InputError("scalar file subject '" + row[0] + "' absent from survival file");
    if (scalar_seen[it->second])
      throw InputError("duplicate subject_id '" + row[0] + "' at scalar row " +
                       std::to_string(r + 2));
    scalar_seen[it->second] = true;
    for (int j = 0; j < p; ++j)
      data.scalar_covariates(it->second, j) = parse_double(row[j + 1], "scalar file");
  }
  for (int i = 0; i < n; ++i)
    if (!scalar_seen[i])
      throw InputError("subject '" + ids[i] + "' missing from scalar file");

  // functional, long format
  CsvFile fun = read_csv(manifest.functional_file);
  if (fun.header.size() < 4 || fun.header[0] != "subject_id")
    throw InputError("functional file must have header subject_id,covariate,grid_index,value");
  std::vector<std::string> cov_order;
  std::map<std::string, int> cov_index;
  std::vector<Eigen::MatrixXd> values;
  std::vector<std::vector<bool>> filled;
  for (size_t r = 0; r < fun.rows.size(); ++r) {
    const auto& row = fun.rows[r];
    if (row.size() < 4)
      throw InputError("functional row " + std::to_string(r + 2) + " too short");
    auto sit = id_index.find(row[0]);
    if (sit == id_index.end())
      throw InputError("functional file subject '" + row[0] + "' absent from survival file");
    auto cit = cov_index.find(row[1]);
    if (cit == cov_index.end()) {
      cit = cov_index.emplace(row[1], static_cast<int>(cov_order.size())).first;
      cov_order.push_back(row[1]);
      values.emplace_back(Eigen::MatrixXd::Zero(n, m));
      filled.emplace_back(static_cast<size_t>(n) * m, false);
    }
    const long g = parse_long(row[2], "functional file");
    if (g < 0 || g >= m)
      throw InputError("functional row " + std::to_string(r + 2) + " references grid_index " +
                       std::to_string(g) + " outside 0.." + std::to_string(m - 1));
    const size_t slot = static_cast<size_t>(sit->second) * m + g;
    if (filled[cit->second][slot])
      throw InputError("duplicate (subject,covariate,grid_index) at functional row " +
                       std::to_string(r + 2));
    filled[cit->second][slot] = true;
    values[cit->second](sit->second, g) = parse_double(row[3], "functional file");
  }
  for (size_t c = 0; c < cov_order.size(); ++c) {
    std::string missing;
    for (int i = 0; i < n && missing.size() < 200; ++i)
      for (int g = 0; g < m; ++g)
        if (!filled[c][static_cast<size_t>(i) * m + g]) {
          missing += (missing.empty() ? "" : ", ") + ids[i];
          break;
        }
    if (!missing.empty())
      throw InputError("covariate '" + cov_order[c] + "' has missing cells for subjects: " +
                       missing);
  }
  for (size_t c = 0; c < cov_order.size(); ++c) {
    Eigen::MatrixXd block = values[c];
    if (manifest.log1p_transform) block = block.unaryExpr([](double v) { return std::log1p(v); });
    data.functional.push_back({cov_order[c], std::move(block)});
  }

  data.validate();
  return data;
}

void save_dataset(const SurvivalDataset& dataset, const std::string& manifest_path) {
  dataset.validate();
  const fs::path dir = fs::path(manifest_path).parent_path();
  const std::string stem = fs::path(manifest_path).stem().string();
  if (!dir.empty()) fs::create_directories(dir);
  auto path_for = [&](const std::string& what) {
    return (dir / (stem + "_" + what + ".csv")).string();
  };

  std::vector<std::string> ids = dataset.subject_ids;
  if (ids.empty())
    for (int i = 0; i < dataset.n(); ++i) ids.push_back("S" + std::to_string(i + 1));

  {
    auto out = open_out(path_for("survival"));
    out << "subject_id,time,event\n";
    for (int i = 0; i < dataset.n(); ++i)
      out << ids[i] << ',' << format_number(dataset.y[i]) << ',' << dataset.delta[i] << "\n";
  }
  {
    auto out = open_out(path_for("scalars"));
    out << "subject_id";
    for (int j = 0; j < dataset.p(); ++j)
      out << ',' << (j < static_cast<int>(dataset.scalar_names.size())
                         ? dataset.scalar_names[j]
                         : "Z" + std::to_string(j + 1));
    out << "\n";
    for (int i = 0; i < dataset.n(); ++i) {
      out << ids[i];
      for (int j = 0; j < dataset.p(); ++j)
        out << ',' << format_number(dataset.scalar_covariates(i, j));
      out << "\n";
    }
  }
  {
    auto out = open_out(path_for("functional"));
    out << "subject_id,covariate,grid_index,value\n";
    for (const auto& block : dataset.functional)
      for (int i = 0; i < dataset.n(); ++i)
        for (int g = 0; g < dataset.m(); ++g)
          out << ids[i] << ',' << block.name << ',' << g << ','
              << format_number(block.values(i, g)) << "\n";
  }
  {
    auto out = open_out(path_for("grid"));
    out << "grid_index,s_value\n";
    for (int g = 0; g < dataset.m(); ++g)
      out << g << ',' << format_number(dataset.grid[g]) << "\n";
  }

  DatasetManifest manifest;
  manifest.survival_file = path_for("survival");
  manifest.scalar_file = path_for("scalars");
  manifest.functional_file = path_for("functional");
  manifest.grid_file = path_for("grid");
  save_manifest(manifest, manifest_path);
}

void save_artifact(const FitArtifact& artifact, const std::string& path) {
  json j;
  j["schema_version"] = artifact.schema_version;
  j["tool_version"] = artifact.tool_version;
  j["config"] = {{"penalty_family", artifact.penalty_family}, {"lambda", artifact.lambda},
                 {"psi", artifact.psi},         {"phi", artifact.phi},
                 {"adaptive", artifact.adaptive}, {"seed", artifact.seed},
                 {"n", artifact.n}};
  json scalars = json::array();
  for (size_t i = 0; i < artifact.scalar_names.size(); ++i)
    scalars.push_back({{"name", artifact.scalar_names[i]},
                       {"coefficient", artifact.scalar_coefficients[i]}});
  j["scalar_coefficients"] = scalars;
  j["selected_scalars"] = artifact.selected_scalars;
  j["selected_groups"] = artifact.selected_groups;
  json groups = json::array();
  for (const auto& g : artifact.groups) {
    groups.push_back({{"name", g.name},
                      {"selected", g.selected},
                      {"basis", {{"degree", g.basis_degree},
                                 {"num_basis", g.basis_num_basis},
                                 {"domain", {g.domain_lo, g.domain_hi}}}},
                      {"basis_coefficients", vector_to_json(g.basis_coefficients)},
                      {"grid", vector_to_json(g.grid)},
                      {"values", vector_to_json(g.values)}});
  }
  j["groups"] = groups;
  j["diagnostics"] = {{"converged", artifact.converged},
                      {"n_iterations", artifact.n_iterations},
                      {"final_loglik", artifact.final_loglik},
                      {"objective", artifact.objective}};
  if (artifact.surface) {
    const auto& s = *artifact.surface;
    j["ebic_surface"] = {{"lambda_grid", s.lambda_grid},
                         {"psi_grid", s.psi_grid},
                         {"optimum", {{"lambda", s.opt_lambda},
                                      {"psi", s.opt_psi},
                                      {"ebic", s.opt_ebic},
                                      {"bic", s.opt_bic},
                                      {"df", s.opt_df},
                                      {"nu", s.opt_nu}}}};
  }
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

FitArtifact load_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open artifact: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("malformed artifact JSON: " + std::string(e.what()));
  }
  FitArtifact a;
  a.schema_version = j.value("schema_version", std::string(kSchemaVersion));
  a.tool_version = j.value("tool_version", std::string(kToolVersion));
  const json& cfg = j.at("config");
  a.penalty_family = cfg.value("penalty_family", "mcp");
  a.lambda = cfg.value("lambda", 0.0);
  a.psi = cfg.value("psi", 0.0);
  a.phi = cfg.value("phi", 3.0);
  a.adaptive = cfg.value("adaptive", false);
  a.seed = cfg.value("seed", std::uint64_t{0});
  a.n = cfg.value("n", 0);
  Eigen::VectorXd coefs(j.at("scalar_coefficients").size());
  for (size_t i = 0; i < j.at("scalar_coefficients").size(); ++i) {
    a.scalar_names.push_back(j["scalar_coefficients"][i].at("name").get<std::string>());
    coefs[i] = j["scalar_coefficients"][i].at("coefficient").get<double>();
  }
  a.scalar_coefficients = coefs;
  a.selected_scalars = j.at("selected_scalars").get<std::vector<std::string>>();
  a.selected_groups = j.at("selected_groups").get<std::vector<std::string>>();
  for (const auto& gj : j.at("groups")) {
    FitArtifact::Group g;
    g.name = gj.at("name").get<std::string>();
    g.selected = gj.at("selected").get<bool>();
    g.basis_degree = gj.at("basis").at("degree").get<int>();
    g.basis_num_basis = gj.at("basis").at("num_basis").get<int>();
    g.domain_lo = gj.at("basis").at("domain")[0].get<double>();
    g.domain_hi = gj.at("basis").at("domain")[1].get<double>();
    g.basis_coefficients = json_to_vector(gj.at("basis_coefficients"));
    g.grid = json_to_vector(gj.at("grid"));
    g.values = json_to_vector(gj.at("values"));
    a.groups.push_back(std::move(g));
  }
  const json& d = j.at("diagnostics");
  a.converged = d.at("converged").get<bool>();
  a.n_iterations = d.at("n_iterations").get<int>();
  a.final_loglik = d.at("final_loglik").get<double>();
  a.objective = d.at("objective").get<double>();
  if (j.contains("ebic_surface")) {
    FitArtifact::SurfaceSummary s;
    s.lambda_grid = j["ebic_surface"].at("lambda_grid").get<std::vector<double>>();
    s.psi_grid = j["ebic_surface"].at("psi_grid").get<std::vector<double>>();
    const json& o = j["ebic_surface"].at("optimum");
    s.opt_lambda = o.at("lambda").get<double>();
    s.opt_psi = o.at("psi").get<double>();
    s.opt_ebic = o.at("ebic").get<double>();
    s.opt_bic = o.at("bic").get<double>();
    s.opt_df = o.at("df").get<int>();
    s.opt_nu = o.at("nu").get<int>();
    a.surface = s;
  }
  return a;
}

void save_surface_csv(const EbicSurface& surface, const std::string& path) {
  auto out = open_out(path);
  out << "psi,lambda,ok,loglik,df,nu,bic,ebic,model_size,error\n";
  for (size_t s = 0; s < surface.psi_grid.size(); ++s) {
    for (size_t l = 0; l < surface.lambda_grid.size(); ++l) {
      const EbicCell& cell = surface.cells[s][l];
      out << format_number(cell.psi) << ',' << format_number(cell.lambda) << ','
          << (cell.ok ? 1 : 0) << ',';
      if (cell.ok) {
        out << format_number(cell.loglik) << ',' << cell.df << ',' << cell.nu << ','
            << format_number(cell.bic) << ',' << format_number(cell.ebic) << ','
            << cell.fit.selected_scalars.size() + cell.fit.selected_groups.size() << ',';
      } else {
        out << ",,,,,";
      }
      out << cell.error << "\n";
    }
  }
}

void save_mc_metrics(const McMetrics& metrics, const SimConfig& config,
                     const std::string& directory) {
  fs::create_directories(directory);
  const fs::path dir(directory);
  {
    auto out = open_out((dir / "selection.csv").string());
    out << "variables,tpr,fpr,avg_model_size\n";
    out << "scalar," << format_number(metrics.tpr_scalar) << ','
        << format_number(metrics.fpr_scalar) << ',' << format_number(metrics.avg_model_size)
        << "\n";
    out << "functional," << format_number(metrics.tpr_functional) << ','
        << format_number(metrics.fpr_functional) << ','
        << format_number(metrics.avg_model_size) << "\n";
    out << "all," << format_number(metrics.tpr_all) << ',' << format_number(metrics.fpr_all)
        << ',' << format_number(metrics.avg_model_size) << "\n";
  }
  {
    auto out = open_out((dir / "estimation.csv").string());
    out << "coefficient,bias,mse\n";
    for (int j = 0; j < metrics.bias.size(); ++j)
      out << "beta" << (j + 1) << ',' << format_number(metrics.bias[j]) << ','
          << format_number(metrics.mse[j]) << "\n";
  }
  {
    auto out = open_out((dir / "mise.csv").string());
    out << "function,mise\n";
    for (int k = 0; k < metrics.mise.size(); ++k)
      out << "beta" << (k + 1) << "(s)," << format_number(metrics.mise[k]) << "\n";
  }
  {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = {{"n", config.n},
                   {"p_scalar", config.p_scalar},
                   {"k_functional", config.k_functional},
                   {"n_replicates", config.n_replicates},
                   {"seed", config.seed}};
    j["selection"] = {{"tpr_scalar", metrics.tpr_scalar},
                      {"fpr_scalar", metrics.fpr_scalar},
                      {"tpr_functional", metrics.tpr_functional},
                      {"fpr_functional", metrics.fpr_functional},
                      {"tpr_all", metrics.tpr_all},
                      {"fpr_all", metrics.fpr_all},
                      {"avg_model_size", metrics.avg_model_size}};
    j["bias"] = std::vector<double>(metrics.bias.data(), metrics.bias.data() + metrics.bias.size());
    j["mse"] = std::vector<double>(metrics.mse.data(), metrics.mse.data() + metrics.mse.size());
    j["mise"] =
        std::vector<double>(metrics.mise.data(), metrics.mise.data() + metrics.mise.size());
    j["n_failed"] = metrics.n_failed;
    j["n_completed"] = metrics.n_replicates;
    json reps = json::array();
    for (const auto& rec : metrics.replicates) {
      json rj;
      rj["ok"] = rec.ok;
      if (rec.ok) {
        rj["selected_scalars"] = rec.selected_scalars;
        rj["selected_groups"] = rec.selected_groups;
        rj["lambda"] = rec.lambda_opt;
        rj["psi"] = rec.psi_opt;
        rj["model_size"] = rec.model_size;
      } else {
        rj["error"] = rec.error;
      }
      reps.push_back(std::move(rj));
    }
    j["replicates"] = reps;
    auto out = open_out((dir / "metrics.json").string());
    out << j.dump(2) << "\n";
  }
}

void save_stability_csv(const StabilityResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "variable,selection_percent\n";
  for (size_t v = 0; v < result.names.size(); ++v)
    out << result.names[v] << ',' << format_number(result.selection_percent[v]) << "\n";
}

void save_profiles_csv(const DiurnalProfileSet& set, const std::string& path) {
  auto out = open_out(path);
  out << "subject_id,covariate,grid_index,value\n";
  for (size_t o = 0; o < set.orders.size(); ++o) {
    const std::string name = "L" + std::to_string(set.orders[o]);
    for (size_t i = 0; i < set.subject_ids.size(); ++i)
      for (Eigen::Index g = 0; g < set.grid.size(); ++g)
        out << set.subject_ids[i] << ',' << name << ',' << g << ','
            << format_number(set.profiles[o](i, g)) << "\n";
  }
}

std::vector<ActivityRecord> load_activity_csv(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header.size() < 4 || csv.header[0] != "subject_id")
    throw InputError("activity file must have header subject_id,day,minute,count");
  // subject -> day -> minute values
  std::map<std::string, std::map<long, std::map<long, double>>> subjects;
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    if (row.size() < 4)
      throw InputError("activity row " + std::to_string(r + 2) + " too short");
    const long day = parse_long(row[1], "activity file");
    const long minute = parse_long(row[2], "activity file");
    if (minute < 0 || minute >= 1440)
      throw InputError("activity row " + std::to_string(r + 2) + ": minute out of range");
    auto& cell = subjects[row[0]][day];
    if (!cell.emplace(minute, parse_double(row[3], "activity file")).second)
      throw InputError("duplicate (subject,day,minute) at activity row " +
                       std::to_string(r + 2));
  }
  std::vector<ActivityRecord> records;
  for (const auto& [id, days] : subjects) {
    ActivityRecord rec;
    rec.subject_id = id;
    rec.days.resize(days.size(), 1440);
    int d = 0;
    for (const auto& [day, minutes] : days) {
      if (static_cast<int>(minutes.size()) != 1440)
        throw InputError("subject '" + id + "' day " + std::to_string(day) +
                         " does not cover all 1440 minutes");
      for (const auto& [minute, value] : minutes) rec.days(d, minute) = value;
      ++d;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace funcox
