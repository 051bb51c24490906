// Copyright 2026 The MSDRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library through the C API only.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "msdro/msdro.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;

// Failure carrying a process exit code.
struct CliError {
  int exit_code;
  std::string message;
};

int ExitCodeFor(int status) {
  switch (status) {
    case MSDRO_OK:
      return kExitOk;
    case MSDRO_ERR_INFEASIBLE:
      return kExitInfeasible;
    case MSDRO_ERR_UNBOUNDED:
    case MSDRO_ERR_SOLVER:
    case MSDRO_ERR_EXTRACTION:
    case MSDRO_ERR_INTERNAL:
      return kExitSolver;
    default:
      return kExitInput;
  }
}

void Check(int status, const std::string& what) {
  if (status == MSDRO_OK) return;
  throw CliError{ExitCodeFor(status), what + ": " + msdro_status_name(status) + " error: " +
                                          msdro_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Network = Handle<msdro_network, msdro_network_free>;
using Dataset = Handle<msdro_dataset, msdro_dataset_free>;
using Solution = Handle<msdro_solution, msdro_solution_free>;
using Sweep = Handle<msdro_sweep, msdro_sweep_free>;

struct Options {
  std::string config;
  std::string network = MSDRO_DEFAULT_NETWORK;
  std::string data;
  std::string quality;
  std::vector<double> eps;
  double gamma = 0.05;
  std::uint64_t seed = 1;
  std::string out = "msdro_out";
  int jobs = 1;
  bool no_tighten = false;
  std::string error_mean = "zero";
  std::vector<double> grid = {1.0, 0.1, 0.005, 0.001};
  int samples = 20;
  int oos_samples = 1000;
  std::string solver;
  // quality
  std::string noise;
  std::string noise_samples;
  double p = 1.0;
  std::string norm = "l1";
  int dim = 1;
  int features = 1;
  std::string original;
  std::string published;
  std::string laplace;
};

int ErrorMeanCode(const std::string& name) {
  if (name == "zero") return MSDRO_ERROR_MEAN_ZERO;
  if (name == "forecast-shift") return MSDRO_ERROR_MEAN_FORECAST_SHIFT;
  throw CliError{kExitInput, "--error-mean must be zero or forecast-shift"};
}

const char* Backend(const Options& o) { return o.solver.empty() ? nullptr : o.solver.c_str(); }

std::filesystem::path OutDir(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw CliError{kExitInput, "cannot create " + o.out + ": " + ec.message()};
  return o.out;
}

void WriteManifest(const Options& o, const std::string& command, json extra) {
  json m = {{"command", command},
            {"version", msdro_version()},
            {"network", std::filesystem::absolute(o.network).string()},
            {"gamma", o.gamma},
            {"seed", o.seed},
            {"out", o.out},
            {"solver", o.solver.empty() ? "auto" : o.solver}};
  m.update(extra);
  std::ofstream f(OutDir(o) / "manifest.json");
  f << std::setw(2) << m << '\n';
  if (!f) throw CliError{kExitInput, "cannot write manifest.json"};
}

// Applies a manifest written by an earlier run; explicit flags win.
void ApplyConfig(CLI::App& sub, Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw CliError{kExitInput, "cannot open " + o.config};
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw CliError{kExitInput, "bad config " + o.config + ": " + e.what()};
  }
  auto set = [&](const char* key, const char* flag, auto& target) {
    if (!m.contains(key) || m[key].is_null()) return;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    try {
      m.at(key).get_to(target);
    } catch (const json::exception& e) {
      throw CliError{kExitInput, std::string("bad config value for ") + key + ": " + e.what()};
    }
  };
  set("network", "--network", o.network);
  set("data", "--data", o.data);
  set("quality", "--quality", o.quality);
  set("eps", "--eps", o.eps);
  set("gamma", "--gamma", o.gamma);
  set("seed", "--seed", o.seed);
  set("jobs", "--jobs", o.jobs);
  set("error_mean", "--error-mean", o.error_mean);
  set("grid", "--grid", o.grid);
  set("samples", "--samples", o.samples);
  set("oos_samples", "--oos-samples", o.oos_samples);
  if (m.contains("tighten") && sub.get_option_no_throw("--no-tighten") &&
      sub.get_option("--no-tighten")->count() == 0) {
    o.no_tighten = !m["tighten"].get<bool>();
  }
  if (m.contains("solver") && sub.get_option("--solver")->count() == 0) {
    o.solver = m["solver"].get<std::string>();
    if (o.solver == "auto") o.solver.clear();
  }
}

void LoadNetwork(const Options& o, Network& net) {
  Check(msdro_network_load(o.network.c_str(), &net.p), "loading " + o.network);
}

int Resources(const Network& net) {
  int d = 0;
  Check(msdro_network_shape(net.p, nullptr, nullptr, nullptr, &d), "network");
  return d;
}

// Training data from --data or generated from --seed, with radii attached.
json PrepareData(const Options& o, const Network& net, Dataset& data) {
  json info;
  const int d_count = Resources(net);
  if (!o.data.empty()) {
    Check(msdro_dataset_load(o.data.c_str(), &data.p), "loading " + o.data);
    info["data"] = std::filesystem::absolute(o.data).string();
  } else {
    Check(msdro_dataset_generate(net.p, o.samples, o.seed, ErrorMeanCode(o.error_mean), &data.p),
          "generating training data");
    std::vector<std::uint64_t> seeds;
    for (int j = 0; j < d_count; ++j) {
      const double key = j;
      seeds.push_back(msdro_derive_seed(o.seed, "train", &key, 1));
    }
    info["data"] = nullptr;
    info["samples"] = o.samples;
    info["error_mean"] = o.error_mean;
    info["derived_seeds"] = {{"train", seeds}};
  }
  int features = 0;
  Check(msdro_dataset_shape(data.p, &features, nullptr), "dataset");
  if (features != d_count) {
    throw CliError{kExitInput, "dataset has " + std::to_string(features) +
                                   " features but the network has " +
                                   std::to_string(d_count) + " resources"};
  }
  if (!o.quality.empty() && !o.eps.empty())
    throw CliError{kExitInput, "give either --quality or --eps, not both"};
  if (!o.quality.empty()) {
    Check(msdro_dataset_load_quality(data.p, o.quality.c_str()), "loading " + o.quality);
    info["quality"] = std::filesystem::absolute(o.quality).string();
  } else if (!o.eps.empty()) {
    Check(msdro_dataset_set_epsilon(data.p, o.eps.data(), o.eps.size()), "--eps");
  } else {
    throw CliError{kExitInput, "radii missing: give --eps or --quality"};
  }
  return info;
}

void Solve(const Options& o, const Network& net, const Dataset& data, Solution& sol) {
  msdro_solve_options opts;
  msdro_solve_options_init(&opts);
  opts.gamma = o.gamma;
  opts.tighten = o.no_tighten ? 0 : 1;
  opts.backend = Backend(o);
  const int status = msdro_solve(net.p, data.p, &opts, &sol.p);
  if (status == MSDRO_ERR_INFEASIBLE && sol.p) {
    std::ostringstream msg;
    msg << "model is infeasible; conflicting constraints:";
    for (std::size_t i = 0; i < msdro_solution_conflict_count(sol.p); ++i)
      msg << "\n  " << msdro_solution_conflict(sol.p, i);
    throw CliError{kExitInfeasible, msg.str()};
  }
  Check(status, "solve");
}

std::string Join(const std::vector<double>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
  return s.str();
}

int CmdSolve(const Options& o) {
  Network net;
  LoadNetwork(o, net);
  Dataset data;
  json info = PrepareData(o, net, data);
  info["eps"] = o.eps.empty() ? json(nullptr) : json(o.eps);
  info["tighten"] = !o.no_tighten;
  WriteManifest(o, "solve", info);
  Solution sol;
  Solve(o, net, data, sol);
  const int d_count = Resources(net);
  double base = 0, fin = 0, energy = 0, reserve = 0, activation = 0, phi = 0;
  std::vector<double> co(d_count), cc(d_count), value(d_count);
  Check(msdro_solution_objective(sol.p, &base, &fin), "objective");
  Check(msdro_solution_costs(sol.p, &energy, &reserve, &activation), "costs");
  Check(msdro_solution_multipliers(sol.p, co.data(), cc.data(), d_count, &phi), "multipliers");
  Check(msdro_solution_marginal_value(sol.p, value.data(), d_count), "marginal value");
  const std::filesystem::path dir = OutDir(o);
  Check(msdro_solution_write(sol.p, dir.string().c_str()), "writing results");
  if (o.data.empty()) {
    Check(msdro_dataset_write(data.p, (dir / "training.csv").string().c_str()), "training data");
  }
  for (int j = 0; j < d_count; ++j) cc[j] += 0.0, co[j] += 0.0;
  std::cout << std::setprecision(10) << "objective " << base << '\n';
  if (!o.no_tighten) std::cout << "objective after re-run " << fin << '\n';
  std::cout << "energy " << energy << "  reserve " << reserve << "  activation " << activation
            << "  (backend " << msdro_solution_backend(sol.p) << ")\n";
  for (int j = 0; j < d_count; ++j) {
    std::cout << "feature " << j + 1 << ": lambda_co " << co[j] << "  lambda_cc " << cc[j]
              << "  d cost/d eps " << value[j] << '\n';
  }
  std::cout << "phi " << phi << "\nresults in " << dir.string() << '\n';
  return kExitOk;
}

int CmdOos(const Options& o) {
  Network net;
  LoadNetwork(o, net);
  Dataset data;
  json info = PrepareData(o, net, data);
  if (o.eps.empty()) throw CliError{kExitInput, "oos needs --eps for the test distribution"};
  const std::uint64_t seed = msdro_derive_seed(o.seed, "oos", o.eps.data(), o.eps.size());
  info["eps"] = o.eps;
  info["tighten"] = !o.no_tighten;
  info["oos_samples"] = o.oos_samples;
  info["derived_seeds"]["oos"] = seed;
  WriteManifest(o, "oos", info);
  Solution sol;
  Solve(o, net, data, sol);
  int violations = 0;
  double probability = 0;
  Check(msdro_solution_oos(sol.p, o.eps.data(), o.eps.size(), o.oos_samples, seed, &violations,
                           &probability),
        "out-of-sample check");
  const std::filesystem::path dir = OutDir(o);
  std::ofstream f(dir / "oos.csv");
  f << std::setprecision(12);
  for (std::size_t j = 0; j < o.eps.size(); ++j) f << "eps_" << j + 1 << ',';
  f << "samples,violations,probability\n";
  for (double e : o.eps) f << e << ',';
  f << o.oos_samples << ',' << violations << ',' << probability << '\n';
  if (!f) throw CliError{kExitInput, "cannot write oos.csv"};
  std::cout << "empirical violation " << probability * 100 << "% (" << violations << " of "
            << o.oos_samples << ")\n";
  return kExitOk;
}

int CmdSweep(const Options& o) {
  Network net;
  LoadNetwork(o, net);
  const int d_count = Resources(net);
  msdro_sweep_config config;
  msdro_sweep_config_init(&config);
  config.grid = o.grid.data();
  config.grid_size = o.grid.size();
  config.samples = o.samples;
  config.seed = o.seed;
  config.gamma = o.gamma;
  config.oos_samples = o.oos_samples;
  config.tighten = o.no_tighten ? 0 : 1;
  config.error_mean = ErrorMeanCode(o.error_mean);
  config.jobs = o.jobs;
  config.backend = Backend(o);
  // Seeds are derived, so the manifest can be written before solving.
  std::vector<std::uint64_t> train;
  for (int j = 0; j < d_count; ++j) {
    const double key = j;
    train.push_back(msdro_derive_seed(o.seed, "train", &key, 1));
  }
  json oos_seeds = json::array();
  std::size_t cell_count = 1;
  for (int j = 0; j < d_count; ++j) cell_count *= o.grid.size();
  for (std::size_t c = 0; c < cell_count && !o.grid.empty(); ++c) {
    std::vector<double> eps(d_count);
    std::size_t rest = c;
    for (int j = d_count - 1; j >= 0; --j) {
      eps[j] = o.grid[rest % o.grid.size()];
      rest /= o.grid.size();
    }
    oos_seeds.push_back(
        {{"eps", eps}, {"seed", msdro_derive_seed(o.seed, "oos", eps.data(), eps.size())}});
  }
  WriteManifest(o, "sweep",
                {{"grid", o.grid},
                 {"samples", o.samples},
                 {"oos_samples", o.oos_samples},
                 {"tighten", !o.no_tighten},
                 {"error_mean", o.error_mean},
                 {"jobs", o.jobs},
                 {"data", nullptr},
                 {"derived_seeds", {{"train", train}, {"oos", oos_seeds}}}});

  Sweep sweep;
  Check(msdro_sweep_run(net.p, &config, &sweep.p), "sweep");
  const std::filesystem::path dir = OutDir(o);
  Check(msdro_sweep_write(sweep.p, dir.string().c_str()), "writing results");
  int cells = 0, failed = 0;
  Check(msdro_sweep_counts(sweep.p, &cells, &failed), "sweep");
  for (int j = 0; j < d_count; ++j) {
    std::uint64_t s = 0;
    Check(msdro_sweep_training_seed(sweep.p, j, &s), "seeds");
    if (s != train[j]) throw CliError{kExitSolver, "training seed mismatch"};
  }
  std::cout << std::setprecision(8);
  bool all_infeasible = true;
  for (int c = 0; c < cells; ++c) {
    std::vector<double> eps(d_count);
    double base = 0, fin = 0, prob = 0;
    const int status = msdro_sweep_cell(sweep.p, c, eps.data(), eps.size(), &base, &fin, &prob);
    const std::string cell_status = msdro_sweep_cell_status(sweep.p, c);
    all_infeasible = all_infeasible && cell_status == "infeasible";
    if (oos_seeds.at(c)["eps"].get<std::vector<double>>() != eps)
      throw CliError{kExitSolver, "cell order mismatch"};
    std::cout << "eps (" << Join(eps) << "): ";
    if (status == MSDRO_OK) {
      std::cout << "objective " << base << "  re-run " << fin << "  violation " << prob * 100
                << "%\n";
    } else {
      std::cout << cell_status << '\n';
    }
  }
  std::cout << cells - failed << " of " << cells << " cells solved; results in " << dir.string()
            << '\n';
  if (cells > 0 && failed == cells) {
    std::cerr << "msdro: every cell failed\n";
    return all_infeasible ? kExitInfeasible : kExitSolver;
  }
  return kExitOk;
}

// Column `column` of a dataset CSV, validated by the library first.
std::vector<double> ReadColumn(const std::string& path, int column) {
  Dataset d;
  Check(msdro_dataset_load(path.c_str(), &d.p), "loading " + path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j <= column && std::getline(ss, cell, ','); ++j) {
      if (j == column && cell.find_first_not_of(" \t\r") != std::string::npos)
        out.push_back(std::stod(cell));
    }
  }
  return out;
}

int Features(const std::string& path) {
  Dataset d;
  Check(msdro_dataset_load(path.c_str(), &d.p), "loading " + path);
  int features = 0;
  Check(msdro_dataset_shape(d.p, &features, nullptr), path);
  return features;
}

int CmdQuality(const Options& o) {
  const int modes = !o.noise.empty() + !o.noise_samples.empty() + !o.original.empty() +
                    !o.laplace.empty();
  if (modes != 1) {
    throw CliError{kExitInput,
                   "choose exactly one of --noise, --noise-samples, --original/--published, "
                   "--laplace"};
  }
  if (o.norm != "l1" && o.norm != "l2") throw CliError{kExitInput, "--norm must be l1 or l2"};
  const int norm = o.norm == "l1" ? MSDRO_NORM_L1 : MSDRO_NORM_L2;
  std::vector<double> eps;
  json info = {{"p", o.p}, {"norm", o.norm}};
  const std::filesystem::path dir = OutDir(o);

  if (!o.noise.empty()) {
    const auto colon = o.noise.find(':');
    if (colon == std::string::npos)
      throw CliError{kExitInput, "--noise expects laplace:SCALE or gaussian:STDDEV"};
    const std::string kind = o.noise.substr(0, colon);
    double scale = 0;
    try {
      scale = std::stod(o.noise.substr(colon + 1));
    } catch (const std::exception&) {
      throw CliError{kExitInput, "bad noise scale in --noise " + o.noise};
    }
    int code = -1;
    if (kind == "laplace") code = MSDRO_NOISE_LAPLACE;
    if (kind == "gaussian") code = MSDRO_NOISE_GAUSSIAN;
    if (code < 0) throw CliError{kExitInput, "unknown noise kind '" + kind + "'"};
    double e = 0;
    Check(msdro_quality_noise_bound(code, scale, o.dim, o.p, norm, &e), "noise bound");
    eps.assign(o.features, e);
    info["noise"] = o.noise;
    info["dim"] = o.dim;
    info["features"] = o.features;
  } else if (!o.noise_samples.empty()) {
    const int d = Features(o.noise_samples);
    std::vector<std::vector<double>> cols;
    for (int j = 0; j < d; ++j) cols.push_back(ReadColumn(o.noise_samples, j));
    std::vector<double> flat;
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      for (int j = 0; j < d; ++j) {
        if (cols[j].size() != cols[0].size())
          throw CliError{kExitInput, "noise sample columns must have equal length"};
        flat.push_back(cols[j][i]);
      }
    }
    double e = 0;
    Check(msdro_quality_sample_bound(flat.data(), cols[0].size(), d, o.p, norm, &e),
          "sample bound");
    eps.assign(o.features, e);
    info["noise_samples"] = std::filesystem::absolute(o.noise_samples).string();
  } else if (!o.original.empty()) {
    if (o.published.empty()) throw CliError{kExitInput, "--original needs --published"};
    const int d = Features(o.original);
    if (Features(o.published) != d)
      throw CliError{kExitInput, "original and published files have different features"};
    for (int j = 0; j < d; ++j) {
      const std::vector<double> a = ReadColumn(o.original, j), b = ReadColumn(o.published, j);
      double w = 0;
      Check(msdro_quality_wasserstein(a.data(), a.size(), b.data(), b.size(), o.p, &w),
            "feature " + std::to_string(j + 1));
      eps.push_back(w);
    }
    info["original"] = std::filesystem::absolute(o.original).string();
    info["published"] = std::filesystem::absolute(o.published).string();
  } else {
    if (o.data.empty()) throw CliError{kExitInput, "--laplace needs --data"};
    const auto colon = o.laplace.find(':');
    double sensitivity = 0, theta = 0;
    try {
      if (colon == std::string::npos) throw std::invalid_argument("no colon");
      sensitivity = std::stod(o.laplace.substr(0, colon));
      theta = std::stod(o.laplace.substr(colon + 1));
    } catch (const std::exception&) {
      throw CliError{kExitInput, "--laplace expects SENSITIVITY:THETA"};
    }
    const int d = Features(o.data);
    std::ofstream pub(dir / "published.csv");
    pub << std::setprecision(17);
    std::vector<std::vector<double>> cols;
    for (int j = 0; j < d; ++j) {
      std::vector<double> x = ReadColumn(o.data, j), y(x.size());
      const double key = j;
      double e = 0;
      Check(msdro_quality_laplace(x.data(), x.size(), sensitivity, theta,
                                  msdro_derive_seed(o.seed, "laplace", &key, 1), y.data(), &e),
            "feature " + std::to_string(j + 1));
      eps.push_back(e);
      cols.push_back(y);
    }
    std::size_t rows = 0;
    for (int j = 0; j < d; ++j) {
      pub << (j ? "," : "") << "xi_" << j + 1;
      rows = std::max(rows, cols[j].size());
    }
    pub << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
      for (int j = 0; j < d; ++j) {
        if (j) pub << ',';
        if (i < cols[j].size()) pub << cols[j][i];
      }
      pub << '\n';
    }
    info["data"] = std::filesystem::absolute(o.data).string();
    info["laplace"] = o.laplace;
  }
  Check(msdro_quality_write((dir / "quality.csv").string().c_str(), eps.data(), eps.size()),
        "writing quality.csv");
  for (std::size_t j = 0; j < eps.size(); ++j)
    std::cout << "feature " << j + 1 << ": epsilon = " << std::setprecision(10) << eps[j] << '\n';
  WriteManifest(o, "quality", info);
  return kExitOk;
}

void AddCommon(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Manifest of an earlier run; flags override it");
  sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void AddModel(CLI::App* sub, Options& o) {
  sub->add_option("--network", o.network, "Network JSON file")->capture_default_str();
  sub->add_option("--gamma", o.gamma, "CVaR risk level in [0, 1)")->capture_default_str();
  sub->add_flag("--no-tighten", o.no_tighten, "Skip the tightening re-run");
  sub->add_option("--error-mean", o.error_mean, "zero or forecast-shift")
      ->capture_default_str()
      ->check(CLI::IsMember({"zero", "forecast-shift"}));
  sub->add_option("--samples", o.samples, "Generated training samples per feature")
      ->capture_default_str();
  sub->add_option("--solver", o.solver, "LP backend: auto, simplex or highs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-source distributionally robust OPF with data-quality valuation"};
  app.set_version_flag("--version", std::string(msdro_version()));
  app.require_subcommand(1);
  Options o;

  CLI::App* quality = app.add_subcommand("quality", "Quality signal (epsilon) of a dataset");
  AddCommon(quality, o);
  quality->add_option("--noise", o.noise, "laplace:SCALE or gaussian:STDDEV");
  quality->add_option("--noise-samples", o.noise_samples, "CSV of noise draws (custom noise)");
  quality->add_option("--p", o.p, "Order of the Wasserstein distance")->capture_default_str();
  quality->add_option("--norm", o.norm, "l1 or l2")->capture_default_str();
  quality->add_option("--dim", o.dim, "Noise dimension")->capture_default_str();
  quality->add_option("--features", o.features, "Features sharing a noise model")
      ->capture_default_str();
  quality->add_option("--original", o.original, "Original dataset CSV");
  quality->add_option("--published", o.published, "Published dataset CSV");
  quality->add_option("--data", o.data, "Dataset to obfuscate with --laplace");
  quality->add_option("--laplace", o.laplace, "SENSITIVITY:THETA Laplace mechanism");

  CLI::App* solve = app.add_subcommand("solve", "Solve one model and value the data");
  AddCommon(solve, o);
  AddModel(solve, o);
  solve->add_option("--data", o.data, "Training dataset CSV (generated when omitted)");
  solve->add_option("--quality", o.quality, "Quality CSV (feature,epsilon)");
  solve->add_option("--eps", o.eps, "Radius per feature");

  CLI::App* sweep = app.add_subcommand("sweep", "Solve every combination of radii");
  AddCommon(sweep, o);
  AddModel(sweep, o);
  sweep->add_option("--grid", o.grid, "Radii used for every feature")->capture_default_str();
  sweep->add_option("--oos-samples", o.oos_samples, "Out-of-sample draws per cell")
      ->capture_default_str();
  sweep->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

  CLI::App* oos = app.add_subcommand("oos", "Out-of-sample violation of one solution");
  AddCommon(oos, o);
  AddModel(oos, o);
  oos->add_option("--data", o.data, "Training dataset CSV (generated when omitted)");
  oos->add_option("--eps", o.eps, "Radius per feature")->required();
  oos->add_option("--oos-samples", o.oos_samples, "Out-of-sample draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    ApplyConfig(*chosen, o);
    if (chosen == quality) return CmdQuality(o);
    if (chosen == solve) return CmdSolve(o);
    if (chosen == sweep) return CmdSweep(o);
    return CmdOos(o);
  } catch (const CliError& e) {
    std::cerr << "msdro: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "msdro: " << e.what() << '\n';
    return kExitInput;
  }
}
