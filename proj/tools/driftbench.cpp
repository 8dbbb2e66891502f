#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "driftbench/experiments.hpp"
#include "driftbench/regions.hpp"
#include "driftbench/rng.hpp"

namespace {

using driftbench::catalog;
using driftbench::catalog_ids;
using driftbench::ExperimentSpec;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string drift_summary(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "translation=(";
  for (int i = 0; i < spec.drift.translation.size(); ++i) {
    os << (i ? "," : "") << spec.drift.translation(i);
  }
  os << ") scale=(";
  for (int i = 0; i < spec.drift.scale_factors.size(); ++i) {
    os << (i ? "," : "") << spec.drift.scale_factors(i);
  }
  os << ")";
  if (spec.drift.rotation_deg) {
    os << " rotation=" << *spec.drift.rotation_deg << "deg";
  }
  return os.str();
}

int cmd_list() {
  for (const auto& id : catalog_ids()) {
    const ExperimentSpec spec = catalog(id);
    std::cout << spec.id << "\td=" << spec.dim << "\tposterior="
              << driftbench::posterior_name(spec.posterior) << "\t"
              << drift_summary(spec) << "\n";
  }
  return kExitOk;
}

int cmd_surface(const std::string& id) {
  const ExperimentSpec spec = catalog(id);
  if (spec.dim != 2) {
    std::cerr << "surface: " << id << " is not two-dimensional\n";
    return kExitUsage;
  }
  const driftbench::Surface2D s =
      driftbench::surface_coefficients(spec.test_density());
  std::cout << id << ": " << s.equation_text() << "\n"
            << "taxonomy: " << driftbench::surface_shape_name(s.taxonomy)
            << "\n";
  return kExitOk;
}

// Built-in analytic self-checks: the six published intersection-surface
// equations and the ratio/region oracle equivalence.
int cmd_verify() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  struct Expected {
    const char* id;
    // x^2, y^2, xy, x, y, constant  (lhs of "... = 0")
    double c[6];
    driftbench::SurfaceShape shape;
  };
  const double l2 = std::log(2.0), l6 = std::log(6.0), l12 = std::log(12.0);
  const std::vector<Expected> expected = {
      {"Exp1.1", {0, 0, 0, 1, 0, -1.5},
       driftbench::SurfaceShape::axis_parallel_plane},
      {"Exp1.3", {0, 0, 0, -3, -1, 5}, driftbench::SurfaceShape::vertical_plane},
      {"Exp1.5", {-3.0 / 8, 0, 0, 0, 0, l2},
       driftbench::SurfaceShape::parallel_planes},
      {"Exp1.7", {-1.0 / 3, -0.25, 0, 0, 0, l6 / 2},
       driftbench::SurfaceShape::elliptic_cylinder},
      {"Exp1.9", {-1.0 / 3, -0.25, 0, -1, -0.5, l6 / 2 + 1.75},
       driftbench::SurfaceShape::shifted_cylinder},
      {"Exp1.11",
       {-17.0 / 48, -17.0 / 48, -1.0 / 24, -29.0 / 24, 11.0 / 24,
        l12 / 2 + 127.0 / 48},
       driftbench::SurfaceShape::general},
  };

  for (const auto& e : expected) {
    const auto test_d = catalog(e.id).test_density();
    const auto s = driftbench::surface_coefficients(test_d);
    double mine[6] = {s.coeff_x2, s.coeff_y2, s.coeff_xy,
                      s.coeff_x,  s.coeff_y,  -s.rhs};
    // Compare up to overall scale: normalize both to unit norm with the
    // first significant coefficient positive.
    auto normalize = [](double (&v)[6]) {
      double norm = 0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      double sign = 1;
      for (double x : v) {
        if (std::abs(x) > 1e-14) {
          sign = x > 0 ? 1 : -1;
          break;
        }
      }
      for (double& x : v) x /= sign * norm;
    };
    double want[6];
    std::copy(std::begin(e.c), std::end(e.c), std::begin(want));
    normalize(mine);
    normalize(want);
    double err = 0;
    for (int i = 0; i < 6; ++i) err = std::max(err, std::abs(mine[i] - want[i]));
    check(std::string("surface ") + e.id + " coefficients", err < 1e-10);
    check(std::string("surface ") + e.id + " taxonomy",
          s.taxonomy == e.shape);
  }

  // Oracle equivalence: the hypersurface region rule agrees with the
  // direct density-ratio comparison on random points.
  {
    bool ok = true;
    driftbench::Rng rng(20240817);
    for (const auto& id : catalog_ids()) {
      const ExperimentSpec spec = catalog(id);
      const auto train_d = spec.train_density();
      const auto test_d = spec.test_density();
      Eigen::MatrixXd pts(256, spec.dim);
      for (int i = 0; i < pts.rows(); ++i) {
        for (int j = 0; j < spec.dim; ++j) pts(i, j) = 4.0 * rng.normal();
      }
      const auto part = driftbench::assign_regions(train_d, test_d, pts);
      for (int i = 0; i < pts.rows(); ++i) {
        const double r =
            driftbench::density_ratio(train_d, test_d, pts.row(i).transpose());
        ok = ok && std::abs(part.ratios[i] - r) <= 1e-9 * (1.0 + r);
        ok = ok && ((part.regions[i] == driftbench::Region::r1) == (r <= 1.0));
      }
    }
    check("region/ratio oracle equivalence", ok);
  }

  return failures == 0 ? kExitOk : kExitRuntime;
}

struct CliRun {
  std::vector<std::string> exps;
  std::vector<std::string> models;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int reps = 1;
  int n_train = 0, n_test = 0, n_region = 0;
  std::string out;
  std::string format = "json";
  int threads = 0;
  std::string config_file;
};

int cmd_run(const CliRun& cli) {
  driftbench::RunOptions options;

  if (!cli.config_file.empty()) {
    std::ifstream in(cli.config_file);
    if (!in) {
      std::cerr << "run: cannot open config file " << cli.config_file << "\n";
      return kExitUsage;
    }
    nlohmann::json cfg = nlohmann::json::parse(in);
    if (cfg.contains("experiments")) {
      options.experiment_ids =
          cfg["experiments"].get<std::vector<std::string>>();
    }
    if (cfg.contains("models")) {
      for (const auto& m : cfg["models"]) {
        const auto kind = driftbench::parse_classifier_kind(m.get<std::string>());
        if (!kind) {
          std::cerr << "run: unknown model in config: " << m << "\n";
          return kExitUsage;
        }
        options.model_kinds.push_back(*kind);
      }
    }
    if (cfg.contains("seed")) options.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("reps")) options.reps = cfg["reps"].get<int>();
    if (cfg.contains("n_train")) options.n_train = cfg["n_train"].get<int>();
    if (cfg.contains("n_test")) options.n_test = cfg["n_test"].get<int>();
    if (cfg.contains("n_region")) options.n_region = cfg["n_region"].get<int>();
    if (cfg.contains("threads")) options.threads = cfg["threads"].get<int>();
  }

  // Flags override the config file; DRIFTBENCH_SEED is the fallback when
  // neither supplies a seed.
  if (!cli.exps.empty()) options.experiment_ids = cli.exps;
  if (!cli.models.empty()) {
    options.model_kinds.clear();
    for (const auto& name : cli.models) {
      if (name == "all") {
        options.model_kinds.clear();
        break;
      }
      const auto kind = driftbench::parse_classifier_kind(name);
      if (!kind) {
        std::cerr << "run: unknown model '" << name
                  << "' (valid: svm lr rf gnb knn all)\n";
        return kExitUsage;
      }
      options.model_kinds.push_back(*kind);
    }
  }
  if (cli.seed_given) {
    options.seed = cli.seed;
  } else if (const char* env = std::getenv("DRIFTBENCH_SEED");
             env != nullptr && *env != '\0' && cli.config_file.empty()) {
    options.seed = std::strtoull(env, nullptr, 10);
  }
  if (cli.reps > 0) options.reps = cli.reps;
  if (cli.n_train > 0) options.n_train = cli.n_train;
  if (cli.n_test > 0) options.n_test = cli.n_test;
  if (cli.n_region > 0) options.n_region = cli.n_region;
  if (cli.threads > 0) options.threads = cli.threads;

  if (cli.format != "json" && cli.format != "csv" && cli.format != "both") {
    std::cerr << "run: --format must be json, csv or both\n";
    return kExitUsage;
  }

  try {
    options.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "run: " << e.what() << "\n";
    if (std::string(e.what()).find("unknown experiment") != std::string::npos) {
      std::cerr << "valid ids:";
      for (const auto& id : catalog_ids()) std::cerr << " " << id;
      std::cerr << "\n";
    }
    return kExitUsage;
  }

  std::cerr << "running " << options.resolve_specs().size()
            << " experiment(s), " << options.resolve_models().size()
            << " model(s), reps=" << options.reps
            << ", seed=" << options.seed << "\n";

  const std::vector<driftbench::EvalReport> reports =
      driftbench::run_suite(options);
  std::vector<nlohmann::json> docs;
  docs.reserve(reports.size());
  for (const auto& r : reports) docs.push_back(driftbench::report_to_json(r));
  const nlohmann::json merged = driftbench::aggregate_reports(docs);

  auto emit = [&](const std::string& text, const std::string& suffix) {
    if (cli.out.empty()) {
      std::cout << text;
      return true;
    }
    std::string path = cli.out;
    if (!suffix.empty()) {
      const auto dot = path.rfind('.');
      path = (dot == std::string::npos ? path : path.substr(0, dot)) + suffix;
    }
    std::ofstream f(path);
    if (!f) {
      std::cerr << "run: cannot write " << path << "\n";
      return false;
    }
    f << text;
    std::cerr << "wrote " << path << "\n";
    return true;
  };

  bool ok = true;
  if (cli.format == "json" || cli.format == "both") {
    ok = emit(merged.dump(2) + "\n", cli.format == "both" ? ".json" : "");
  }
  if (ok && (cli.format == "csv" || cli.format == "both")) {
    ok = emit(driftbench::report_to_csv(merged),
              cli.format == "both" ? ".csv" : "");
  }
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftbench: covariate-shift robustness benchmark"};
  app.require_subcommand(1);

  app.add_subcommand("list", "Print the 18-entry experiment catalog");

  auto* surface = app.add_subcommand(
      "surface", "Print the density intersection surface of a 2D experiment");
  std::string surface_id;
  surface->add_option("--exp", surface_id, "Experiment id, e.g. Exp1.1")
      ->required();

  app.add_subcommand("verify", "Run the built-in analytic checks");

  auto* run = app.add_subcommand("run", "Execute experiments and write reports");
  CliRun cli;
  run->add_option("--exp", cli.exps,
                  "Experiment id (repeatable; default: all 18)");
  run->add_option("--models", cli.models,
                  "Model kinds: svm lr rf gnb knn all (default: all)")
      ->delimiter(',');
  auto* seed_opt =
      run->add_option("--seed", cli.seed,
                      "Master seed (default: DRIFTBENCH_SEED env or 0)");
  run->add_option("--reps", cli.reps, "Independent repetitions (default 1)")
      ->check(CLI::PositiveNumber);
  run->add_option("--n-train", cli.n_train, "Training set size (default 20000)");
  run->add_option("--n-test", cli.n_test, "Test set sizes (default 20000)");
  run->add_option("--n-region", cli.n_region,
                  "Points per density-ratio region (default 10000)");
  run->add_option("--out", cli.out, "Report path (default: stdout)");
  run->add_option("--format", cli.format, "json, csv or both (default json)");
  run->add_option("--threads", cli.threads,
                  "Worker threads (default: hardware concurrency; 1 = serial)");
  run->add_option("--config", cli.config_file,
                  "JSON config file; flags override its values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("surface")) {
      try {
        return cmd_surface(surface_id);
      } catch (const std::invalid_argument& e) {
        std::cerr << "surface: " << e.what() << "\nvalid ids:";
        for (const auto& id : catalog_ids()) std::cerr << " " << id;
        std::cerr << "\n";
        return kExitUsage;
      }
    }
    if (app.got_subcommand("verify")) return cmd_verify();
    if (app.got_subcommand("run")) {
      cli.seed_given = seed_opt->count() > 0;
      return cmd_run(cli);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
