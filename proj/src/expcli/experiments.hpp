#pragma once

#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace helix::expcli {

enum class Experiment {
  fig1_helix,
  fig2_fidelity_sweep,
  fig3_band_dos,
  fig4_driven_fidelity,
  fig5_driven_helix,
  validate,
};

std::optional<Experiment> parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

/// User-supplied overrides; unset fields take the experiment's defaults
/// (the reference figure captions). q and p are given as integer
/// numerators n of 2*pi*n/N so momenta land exactly on the grid.
struct Overrides {
  std::optional<int> n_sites, q_num, p_num, drive_site;
  std::optional<double> theta, lambda, kappa, delta, t_max, dt;
  std::optional<std::vector<double>> lambda_list;
};

struct RunConfig {
  Experiment experiment = Experiment::validate;
  Overrides overrides;
  std::vector<int> validate_sizes = {4, 6, 10};
  std::string out_dir = ".";
  long seed = 0; // reserved; all current experiments are deterministic
  int jobs = 1;
  bool emit_plot_script = false;
};

/// Loads `key = value` lines into a config ('#' comments allowed).
/// Throws std::invalid_argument on unknown keys or malformed values.
void apply_config_file(RunConfig& config, const std::string& path);

/// Executes the experiment, writes data files plus manifest.json under
/// config.out_dir, and returns the manifest (assertions included).
RunManifest run(const RunConfig& config);

} // namespace helix::expcli
