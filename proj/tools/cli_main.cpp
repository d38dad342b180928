#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using biphoton::cli::RunConfig;

// Plain locals bound to CLI11, mapped to the optional-valued RunConfig after
// parsing so that absent flags leave config-file values untouched.
struct SubArgs {
  std::string config_path, crystal, sellmeier, out;
  double A = 0, B = 0, L = 0, lambda0 = 0, tau = 0, eta = 0, s_exp = 0, extent_mult = 0;
  double eta_min = 0, eta_max = 0, tau_min = 0, tau_max = 0;
  std::uint64_t grid = 0, jobs = 0, steps = 0, ladder_count = 0;
  bool numeric = false, heatmap = false;
  std::vector<std::uint64_t> modes;
  std::vector<std::string> formats;

  CLI::Option *o_crystal = nullptr, *o_sellmeier = nullptr, *o_A = nullptr, *o_B = nullptr,
              *o_L = nullptr, *o_lambda0 = nullptr, *o_tau = nullptr, *o_eta = nullptr,
              *o_s = nullptr, *o_grid = nullptr, *o_extent = nullptr, *o_out = nullptr,
              *o_jobs = nullptr, *o_format = nullptr, *o_numeric = nullptr,
              *o_modes = nullptr, *o_eta_min = nullptr, *o_eta_max = nullptr,
              *o_tau_min = nullptr, *o_tau_max = nullptr, *o_steps = nullptr,
              *o_ladder = nullptr, *o_heatmap = nullptr;

  void add_common(CLI::App* s) {
    s->add_option("--config", config_path, "JSON config file; flags override its fields");
    o_crystal = s->add_option("--crystal", crystal,
                              "crystal name or preset (LiIO3, LiIO3-0.5cm-400nm)");
    o_sellmeier = s->add_option("--sellmeier", sellmeier, "Sellmeier coefficient JSON file");
    o_A = s->add_option("--A", A, "group-velocity mismatch constant, dimensionless");
    o_B = s->add_option("--B", B, "group-velocity dispersion constant, dimensionless");
    o_L = s->add_option("--L", L, "crystal length in meters");
    o_lambda0 = s->add_option("--lambda0", lambda0, "pump wavelength in meters");
    o_s = s->add_option("--s-exp", s_exp, "interpolation sharpness exponent (default 2.21)");
    o_out = s->add_option("--out", out, "output directory (default .)");
    o_format = s->add_option("--format", formats, "output formats: csv,json,svg")
                   ->delimiter(',');
    o_jobs = s->add_option("--jobs", jobs, "worker threads (default 1)");
  }
  void add_pulse(CLI::App* s) {
    o_tau = s->add_option("--tau", tau, "pump pulse duration in seconds");
    o_eta = s->add_option("--eta", eta, "dimensionless pulse-duration parameter (overrides tau)");
  }
  void add_numeric(CLI::App* s) {
    o_numeric = s->add_flag("--numeric", numeric, "cross-check against the numeric decomposition");
    o_grid = s->add_option("--grid", grid, "grid points per axis for the numeric check");
    o_extent = s->add_option("--extent-mult", extent_mult, "multiplier on the automatic grid extent");
  }

  RunConfig flags() const {
    RunConfig f;
    if (o_crystal && o_crystal->count()) f.crystal = crystal;
    if (o_sellmeier && o_sellmeier->count()) f.sellmeier = sellmeier;
    if (o_A && o_A->count()) f.A = A;
    if (o_B && o_B->count()) f.B = B;
    if (o_L && o_L->count()) f.L = L;
    if (o_lambda0 && o_lambda0->count()) f.lambda0 = lambda0;
    if (o_tau && o_tau->count()) f.tau = tau;
    if (o_eta && o_eta->count()) f.eta = eta;
    if (o_s && o_s->count()) f.s_exp = s_exp;
    if (o_grid && o_grid->count()) f.grid = grid;
    if (o_extent && o_extent->count()) f.extent_mult = extent_mult;
    if (o_numeric && o_numeric->count()) f.numeric = numeric;
    if (o_modes && o_modes->count()) {
      f.modes = std::vector<std::size_t>(modes.begin(), modes.end());
    }
    if (o_format && o_format->count()) f.formats = formats;
    if (o_out && o_out->count()) f.out = out;
    if (o_jobs && o_jobs->count()) f.jobs = jobs;
    if (o_ladder && o_ladder->count()) f.ladder_count = ladder_count;
    if (o_eta_min && o_eta_min->count()) f.eta_min = eta_min;
    if (o_eta_max && o_eta_max->count()) f.eta_max = eta_max;
    if (o_tau_min && o_tau_min->count()) f.tau_min = tau_min;
    if (o_tau_max && o_tau_max->count()) f.tau_max = tau_max;
    if (o_steps && o_steps->count()) f.steps = steps;
    if (o_heatmap && o_heatmap->count()) f.heatmap = heatmap;
    return f;
  }

  RunConfig merged() const {
    RunConfig base;
    if (!config_path.empty()) base = biphoton::cli::load_config_file(config_path);
    return biphoton::cli::merge(base, flags());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral biphoton state of collinear degenerate type-I downconversion"};
  app.require_subcommand(1);

  SubArgs a_analyze, a_sweep, a_modes, a_map;
  int rc = 0;

  CLI::App* analyze =
      app.add_subcommand("analyze", "two-Gaussian model, Schmidt ladder, widths at one pulse duration");
  a_analyze.add_common(analyze);
  a_analyze.add_pulse(analyze);
  a_analyze.add_numeric(analyze);
  a_analyze.o_ladder = analyze->add_option("--ladder-count", a_analyze.ladder_count,
                                           "eigenvalue ladder entries to emit (default 16)");
  analyze->callback([&] { rc = biphoton::cli::cmd_analyze(a_analyze.merged()); });

  CLI::App* sweep =
      app.add_subcommand("sweep", "Schmidt number and widths over a pulse-duration range");
  a_sweep.add_common(sweep);
  a_sweep.add_numeric(sweep);
  a_sweep.o_eta_min = sweep->add_option("--eta-min", a_sweep.eta_min, "range start in eta");
  a_sweep.o_eta_max = sweep->add_option("--eta-max", a_sweep.eta_max, "range end in eta");
  a_sweep.o_tau_min = sweep->add_option("--tau-min", a_sweep.tau_min, "range start in seconds");
  a_sweep.o_tau_max = sweep->add_option("--tau-max", a_sweep.tau_max, "range end in seconds");
  a_sweep.o_steps = sweep->add_option("--steps", a_sweep.steps, "log-spaced points (default 17)");
  sweep->callback([&] { rc = biphoton::cli::cmd_sweep(a_sweep.merged()); });

  CLI::App* modes = app.add_subcommand("modes", "sampled Schmidt modes and eigenvalue ladder");
  a_modes.add_common(modes);
  a_modes.add_pulse(modes);
  a_modes.o_modes = modes->add_option("--modes", a_modes.modes, "mode indices, comma separated")
                        ->delimiter(',');
  modes->callback([&] { rc = biphoton::cli::cmd_modes(a_modes.merged()); });

  CLI::App* map =
      app.add_subcommand("map", "spectral localization curves of the two-photon amplitude");
  a_map.add_common(map);
  a_map.add_pulse(map);
  a_map.o_heatmap = map->add_flag("--heatmap", a_map.heatmap, "emit |Psi|^2 heat maps");
  map->callback([&] { rc = biphoton::cli::cmd_map(a_map.merged()); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return rc;
}
