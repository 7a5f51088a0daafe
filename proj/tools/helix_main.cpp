// Experiment runner. `helix run <experiment> [--flags] --out DIR`
// executes one named experiment and writes CSVs plus manifest.json;
// `helix validate` runs the invariant suite. Exit status: 0 success,
// 1 assertion failure, 2 configuration error.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expcli/experiments.hpp"
#include "helix/version.hpp"

namespace {

int report(const helix::expcli::RunManifest& m) {
  for (const auto& a : m.assertions) {
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name;
    if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
    std::cout << "\n";
  }
  if (!m.all_pass()) {
    std::cerr << "assertion failure; see manifest.json\n";
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  using helix::expcli::RunConfig;

  CLI::App app{"XXZ chain helix-state experiments"};
  app.set_version_flag("--version", helix::kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::string experiment_arg;
  std::string config_file;
  std::vector<double> lambda_list;

  CLI::App* run = app.add_subcommand("run", "execute a named experiment");
  run->add_option("experiment", experiment_arg,
                  "fig1_helix | fig2_fidelity_sweep | fig3_band_dos | "
                  "fig4_driven_fidelity | fig5_driven_helix | validate")
      ->required();
  run->add_option("--config", config_file, "key = value config file");
  run->add_option("--out", config.out_dir, "output directory");
  run->add_option("--jobs", config.jobs, "sweep concurrency")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", config.seed, "reserved (runs are deterministic)");
  run->add_flag("--emit-plot-script", config.emit_plot_script,
                "also write plot.py rendering the CSVs");

  int n_sites = 0, q_num = 0, p_num = 0, drive_site = 0;
  double theta = 0, lambda = 0, kappa = 0, delta = 0, t_max = 0, dt = 0;
  auto* o_n = run->add_option("--n-sites", n_sites, "chain length N");
  auto* o_q = run->add_option("--q-num", q_num, "q = 2*pi*q_num/N");
  auto* o_p = run->add_option("--p-num", p_num, "p = 2*pi*p_num/N");
  auto* o_l = run->add_option("--drive-site", drive_site, "local drive site");
  auto* o_th = run->add_option("--theta", theta, "helix tilt angle");
  auto* o_la = run->add_option("--lambda", lambda, "DMI strength");
  auto* o_k = run->add_option("--kappa", kappa, "drive strength");
  auto* o_d = run->add_option("--delta", delta, "compensation strength");
  auto* o_t = run->add_option("--t-max", t_max, "evolution time");
  auto* o_dt = run->add_option("--dt", dt, "sample spacing");
  auto* o_ll = run->add_option("--lambda-list", lambda_list,
                               "sweep values (comma separated)")
                   ->delimiter(',');

  CLI::App* validate =
      app.add_subcommand("validate", "run the invariant suite");
  std::vector<int> sizes;
  validate->add_option("--n-sites", sizes,
                       "chain sizes to check (default 4 6 10)");
  validate->add_option("--out", config.out_dir, "output directory");
  validate->add_option("--seed", config.seed, "random-vector seed offset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      if (!config_file.empty())
        helix::expcli::apply_config_file(config, config_file);
      auto exp = helix::expcli::parse_experiment(experiment_arg);
      if (!exp) {
        std::cerr << "unknown experiment: " << experiment_arg << "\n";
        return 2;
      }
      config.experiment = *exp;
      if (*o_n) config.overrides.n_sites = n_sites;
      if (*o_q) config.overrides.q_num = q_num;
      if (*o_p) config.overrides.p_num = p_num;
      if (*o_l) config.overrides.drive_site = drive_site;
      if (*o_th) config.overrides.theta = theta;
      if (*o_la) config.overrides.lambda = lambda;
      if (*o_k) config.overrides.kappa = kappa;
      if (*o_d) config.overrides.delta = delta;
      if (*o_t) config.overrides.t_max = t_max;
      if (*o_dt) config.overrides.dt = dt;
      if (*o_ll) config.overrides.lambda_list = lambda_list;
    } else {
      config.experiment = helix::expcli::Experiment::validate;
      if (!sizes.empty()) config.validate_sizes = sizes;
    }
    return report(helix::expcli::run(config));
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
