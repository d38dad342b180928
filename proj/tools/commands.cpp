#include "commands.hpp"

#include "emit.hpp"

#include <biphoton/constants.hpp>
#include <biphoton/numerics.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace biphoton::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Resolved {
  CrystalOptics crystal;
  std::string crystal_name;
  std::string dispersion_source;
  PumpPulse pulse{0.0};
  double eta = 0.0;
  double s_exp = 2.21;
  std::size_t grid_n = 0;  // 0 = automatic policy
  double extent_mult = 1.0;
  bool numeric = false;
  std::vector<std::size_t> modes{0, 1, 2, 3, 4, 5};
  std::set<std::string> formats;
  fs::path out = ".";
  std::size_t jobs = 1;
  std::size_t ladder_count = 16;
  bool sweep_by_eta = false;
  double range_lo = 0.0, range_hi = 0.0;
  std::size_t steps = 17;
  bool heatmap = false;
};

[[noreturn]] void usage_error(const std::string& msg) {
  throw std::invalid_argument(msg);
}

Resolved resolve(const RunConfig& cfg, bool need_pulse, bool is_sweep,
                 const char* default_format) {
  Resolved r;

  const bool direct = cfg.A.has_value() || cfg.B.has_value();
  const bool named = cfg.crystal.has_value();
  const bool from_file = cfg.sellmeier.has_value();
  if (direct && (named || from_file)) {
    usage_error("crystal: give either direct A/B constants or a crystal name/file, not both");
  }
  if (named && from_file) {
    usage_error("crystal: --crystal and --sellmeier are mutually exclusive");
  }
  if (direct) {
    if (!cfg.A || !cfg.B || !cfg.L || !cfg.lambda0) {
      usage_error("crystal: direct mode needs all of A, B, L, lambda0");
    }
    r.crystal = make_crystal_optics(*cfg.L, *cfg.A, *cfg.B, *cfg.lambda0);
    r.crystal_name = "direct";
    r.dispersion_source = "direct";
  } else if (from_file) {
    const SellmeierSet set = load_sellmeier_json(*cfg.sellmeier);
    if (!cfg.L || !cfg.lambda0) {
      usage_error("crystal: a Sellmeier file needs L and lambda0");
    }
    r.crystal = crystal_from_sellmeier(set, *cfg.L, *cfg.lambda0);
    r.crystal_name = set.crystal;
    r.dispersion_source = "sellmeier-file:" + *cfg.sellmeier;
  } else if (named) {
    if (*cfg.crystal == "LiIO3-0.5cm-400nm") {
      const double L = cfg.L.value_or(0.005);
      const double lam = cfg.lambda0.value_or(400e-9);
      r.crystal = crystal_from_sellmeier(liio3_sellmeier(), L, lam);
      r.crystal_name = "LiIO3";
      r.dispersion_source = "embedded-sellmeier (preset LiIO3-0.5cm-400nm)";
    } else if (*cfg.crystal == "LiIO3") {
      if (!cfg.L || !cfg.lambda0) {
        usage_error("crystal: named crystal needs L and lambda0 (or use the preset)");
      }
      r.crystal = crystal_from_sellmeier(liio3_sellmeier(), *cfg.L, *cfg.lambda0);
      r.crystal_name = "LiIO3";
      r.dispersion_source = "embedded-sellmeier";
    } else {
      usage_error("crystal: unknown name '" + *cfg.crystal +
                  "' (known: LiIO3, LiIO3-0.5cm-400nm; or --sellmeier FILE)");
    }
  } else {
    usage_error("crystal: not specified; give --crystal NAME, --sellmeier FILE, "
                "or all of --A --B --L --lambda0");
  }

  if (cfg.s_exp) {
    if (!(*cfg.s_exp > 0.0)) usage_error("s_exp: must be positive");
    r.s_exp = *cfg.s_exp;
  }

  if (cfg.tau && cfg.eta) usage_error("pump: give either tau or eta, not both");
  if (need_pulse) {
    if (cfg.tau) {
      r.pulse = PumpPulse{*cfg.tau};
      r.eta = control_eta(r.crystal, r.pulse);
    } else if (cfg.eta) {
      r.pulse = pulse_from_eta(r.crystal, *cfg.eta);
      r.eta = *cfg.eta;
    } else {
      usage_error("pump: give --tau or --eta");
    }
  }

  if (is_sweep) {
    const bool by_eta = cfg.eta_min.has_value() || cfg.eta_max.has_value();
    const bool by_tau = cfg.tau_min.has_value() || cfg.tau_max.has_value();
    if (by_eta == by_tau) {
      usage_error("sweep: give exactly one range, --eta-min/--eta-max or --tau-min/--tau-max");
    }
    if (by_eta) {
      if (!cfg.eta_min || !cfg.eta_max) usage_error("sweep: eta range needs both ends");
      r.sweep_by_eta = true;
      r.range_lo = *cfg.eta_min;
      r.range_hi = *cfg.eta_max;
    } else {
      if (!cfg.tau_min || !cfg.tau_max) usage_error("sweep: tau range needs both ends");
      r.range_lo = *cfg.tau_min;
      r.range_hi = *cfg.tau_max;
    }
    if (!(r.range_lo > 0.0) || !(r.range_hi > r.range_lo)) {
      usage_error("sweep: range must satisfy 0 < min < max");
    }
    r.steps = cfg.steps.value_or(17);
    if (r.steps < 2) usage_error("sweep: needs at least 2 steps");
  }

  if (cfg.grid) r.grid_n = *cfg.grid;
  if (cfg.extent_mult) {
    if (!(*cfg.extent_mult > 0.0)) usage_error("extent_mult: must be positive");
    r.extent_mult = *cfg.extent_mult;
  }
  if (cfg.numeric) r.numeric = *cfg.numeric;
  if (cfg.modes) {
    if (cfg.modes->empty()) usage_error("modes: list must not be empty");
    r.modes = *cfg.modes;
  }
  if (cfg.formats && !cfg.formats->empty()) {
    r.formats.clear();
    for (const auto& f : *cfg.formats) {
      if (f != "csv" && f != "json" && f != "svg") {
        usage_error("format: '" + f + "' is not one of csv|json|svg");
      }
      r.formats.insert(f);
    }
  } else {
    r.formats.insert(default_format);
  }
  if (cfg.out) r.out = *cfg.out;
  if (cfg.jobs) {
    if (*cfg.jobs == 0) usage_error("jobs: must be at least 1");
    r.jobs = *cfg.jobs;
  }
  if (cfg.ladder_count) {
    if (*cfg.ladder_count == 0) usage_error("ladder_count: must be at least 1");
    r.ladder_count = *cfg.ladder_count;
  }
  if (cfg.heatmap) r.heatmap = *cfg.heatmap;
  return r;
}

ordered_json crystal_json(const Resolved& r) {
  ordered_json j;
  j["name"] = r.crystal_name;
  j["dispersion_source"] = r.dispersion_source;
  j["A"] = r.crystal.A;
  j["B"] = r.crystal.B;
  j["L_m"] = r.crystal.L;
  j["lambda0_m"] = r.crystal.lambda0;
  j["omega0_rad_s"] = r.crystal.omega0;
  return j;
}

// Grid for the numeric cross-check, honoring --grid/--extent-mult overrides.
SpectralGrid numeric_grid(const Resolved& r) {
  const SpectralGrid policy = exact_wf_grid(r.crystal, r.pulse, r.s_exp);
  const double extent = policy.extent * r.extent_mult;
  const std::size_t n = (r.grid_n > 0) ? r.grid_n : policy.n();
  return build_grid(extent, n);
}

KernelEvaluator exact_kernel(const Resolved& r) {
  const CrystalOptics c = r.crystal;
  const PumpPulse p = r.pulse;
  return [c, p](double x, double y) { return exact_wavefunction(c, p, x, y); };
}

void report_written(const fs::path& p) { std::cout << "wrote: " << p.string() << "\n"; }

}  // namespace

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    usage_error("config: parse failure in '" + path + "': " + e.what());
  }
  if (!j.is_object()) usage_error("config: top level must be an object");

  RunConfig cfg;
  const auto num = [&](const char* key) -> double {
    if (!j.at(key).is_number()) usage_error(std::string("config: field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  const auto idx = [&](const char* key) -> std::size_t {
    if (!j.at(key).is_number_unsigned()) {
      usage_error(std::string("config: field '") + key + "' must be a non-negative integer");
    }
    return j.at(key).get<std::size_t>();
  };
  for (const auto& [key, val] : j.items()) {
    if (key == "crystal") {
      if (!val.is_string()) usage_error("config: field 'crystal' must be a string");
      cfg.crystal = val.get<std::string>();
    } else if (key == "sellmeier") {
      if (!val.is_string()) usage_error("config: field 'sellmeier' must be a string");
      cfg.sellmeier = val.get<std::string>();
    } else if (key == "A") cfg.A = num("A");
    else if (key == "B") cfg.B = num("B");
    else if (key == "L") cfg.L = num("L");
    else if (key == "lambda0") cfg.lambda0 = num("lambda0");
    else if (key == "tau") cfg.tau = num("tau");
    else if (key == "eta") cfg.eta = num("eta");
    else if (key == "s_exp") cfg.s_exp = num("s_exp");
    else if (key == "grid") cfg.grid = idx("grid");
    else if (key == "extent_mult") cfg.extent_mult = num("extent_mult");
    else if (key == "numeric") {
      if (!val.is_boolean()) usage_error("config: field 'numeric' must be a boolean");
      cfg.numeric = val.get<bool>();
    } else if (key == "modes") {
      if (!val.is_array()) usage_error("config: field 'modes' must be an array of indices");
      std::vector<std::size_t> ms;
      for (const auto& v : val) {
        if (!v.is_number_unsigned()) usage_error("config: field 'modes' entries must be non-negative integers");
        ms.push_back(v.get<std::size_t>());
      }
      cfg.modes = ms;
    } else if (key == "format") {
      std::vector<std::string> fmts;
      if (val.is_string()) fmts.push_back(val.get<std::string>());
      else if (val.is_array()) {
        for (const auto& v : val) {
          if (!v.is_string()) usage_error("config: field 'format' entries must be strings");
          fmts.push_back(v.get<std::string>());
        }
      } else usage_error("config: field 'format' must be a string or array of strings");
      cfg.formats = fmts;
    } else if (key == "out") {
      if (!val.is_string()) usage_error("config: field 'out' must be a string");
      cfg.out = val.get<std::string>();
    } else if (key == "jobs") cfg.jobs = idx("jobs");
    else if (key == "ladder_count") cfg.ladder_count = idx("ladder_count");
    else if (key == "eta_min") cfg.eta_min = num("eta_min");
    else if (key == "eta_max") cfg.eta_max = num("eta_max");
    else if (key == "tau_min") cfg.tau_min = num("tau_min");
    else if (key == "tau_max") cfg.tau_max = num("tau_max");
    else if (key == "steps") cfg.steps = idx("steps");
    else if (key == "heatmap") {
      if (!val.is_boolean()) usage_error("config: field 'heatmap' must be a boolean");
      cfg.heatmap = val.get<bool>();
    } else {
      usage_error("config: unknown field '" + key + "'");
    }
  }
  return cfg;
}

RunConfig merge(const RunConfig& base, const RunConfig& over) {
  RunConfig m = base;
  // A pulse given on the command line replaces any pulse from the config,
  // whichever of the two spellings each side used. Same for sweep ranges.
  if (over.tau || over.eta) m.tau = m.eta = std::nullopt;
  if (over.eta_min || over.eta_max || over.tau_min || over.tau_max) {
    m.eta_min = m.eta_max = m.tau_min = m.tau_max = std::nullopt;
  }
  const auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(m.crystal, over.crystal);
  take(m.sellmeier, over.sellmeier);
  take(m.A, over.A);
  take(m.B, over.B);
  take(m.L, over.L);
  take(m.lambda0, over.lambda0);
  take(m.tau, over.tau);
  take(m.eta, over.eta);
  take(m.s_exp, over.s_exp);
  take(m.grid, over.grid);
  take(m.extent_mult, over.extent_mult);
  take(m.numeric, over.numeric);
  take(m.modes, over.modes);
  take(m.formats, over.formats);
  take(m.out, over.out);
  take(m.jobs, over.jobs);
  take(m.ladder_count, over.ladder_count);
  take(m.eta_min, over.eta_min);
  take(m.eta_max, over.eta_max);
  take(m.tau_min, over.tau_min);
  take(m.tau_max, over.tau_max);
  take(m.steps, over.steps);
  take(m.heatmap, over.heatmap);
  return m;
}

int cmd_analyze(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true, false, "json");
  const RegimeParams rp = interpolated_model(r.crystal, r.pulse, r.s_exp);
  const GaussianPair pair = rp.pair;
  const SchmidtParams sp = wf_to_schmidt(pair);
  const ReducedGaussianParams rdm = rdm_params_from_wf(pair);
  const ModeScaling ms = generalized_modes(r.crystal, r.pulse, r.s_exp);
  const SpectralWidths widths = short_pulse_widths(r.crystal, r.pulse);
  const double K = schmidt_number_of_tau(r.crystal, r.pulse, r.s_exp);
  const SchmidtDecomposition ladder = eigenvalue_ladder(sp, r.ladder_count);

  ordered_json j;
  j["schema"] = "biphoton-analyze/1";
  j["crystal"] = crystal_json(r);
  j["pump"]["tau_s"] = r.pulse.tau;
  j["pump"]["eta"] = r.eta;
  j["pump"]["regime"] = regime_name(rp.regime);
  j["s_exp"] = r.s_exp;

  ordered_json jm;
  jm["a_rad_s"] = pair.a;
  jm["b_rad_s"] = pair.b;
  jm["a_over_omega0"] = pair.a / r.crystal.omega0;
  jm["b_over_omega0"] = pair.b / r.crystal.omega0;
  jm["a_tilde_rad_s"] = rdm.at;
  jm["b_tilde_rad_s"] = rdm.bt;
  jm["mu"] = sp.mu;
  jm["alpha_s_rad"] = sp.alpha;
  jm["omega0_alpha"] = ms.omega0_alpha;
  jm["omega0_alpha_closed"] = ms.omega0_alpha_closed;
  jm["K"] = K;
  jm["K_closed_form"] = schmidt_number_closed_form(r.crystal, r.pulse, r.s_exp);
  j["model"] = jm;

  j["widths"]["coincidence_rad_s"] = widths.coincidence;
  j["widths"]["single_rad_s"] = widths.single;
  j["widths"]["coincidence_over_omega0"] = widths.coincidence / r.crystal.omega0;
  j["widths"]["single_over_omega0"] = widths.single / r.crystal.omega0;

  ordered_json jl = ordered_json::array();
  for (std::size_t n = 0; n < ladder.lambdas.size(); ++n) {
    ordered_json e;
    e["n"] = n;
    e["lambda"] = ladder.lambdas[n];
    e["sqrt_lambda"] = std::sqrt(ladder.lambdas[n]);
    e["signed_amplitude"] = ladder.signed_amplitude(n);
    const double dn = std::sqrt(static_cast<double>(n)) / ms.alpha;
    e["delta_nu_rad_s"] = dn;
    e["delta_nu_over_omega0"] = dn / r.crystal.omega0;
    jl.push_back(e);
  }
  j["ladder"] = jl;

  if (r.numeric) {
    const SpectralGrid grid = numeric_grid(r);
    const KernelEvaluator kern = exact_kernel(r);
    const KernelMatrix km = discretize(kern, grid);
    const NumericalDecomposition dec = schmidt_svd(km, 12);
    const std::size_t nfid = std::min<std::size_t>(6, static_cast<std::size_t>(dec.modes.cols()));
    const std::vector<double> fid = mode_overlap(dec, grid, ms.alpha, nfid);
    ordered_json jn;
    jn["grid_points"] = grid.n();
    jn["extent_rad_s"] = grid.extent;
    jn["K_num"] = dec.K_num;
    jn["K_purity"] = purity_schmidt_number(km);
    jn["R_num"] = r_parameter(kern, grid);
    ordered_json sig = ordered_json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(10, dec.singular_values.size()); ++k) {
      sig.push_back(dec.singular_values[k]);
    }
    jn["sigma"] = sig;
    jn["model_mode_fidelity"] = fid;
    j["numeric"] = jn;
  }

  const fs::path out = r.out / "analyze.json";
  emit::write_text(out, j.dump(2) + "\n");
  report_written(out);

  if (r.formats.count("csv")) {
    emit::Csv csv({"n", "lambda", "sqrt_lambda", "signed_amplitude", "delta_nu_rad_s",
                   "delta_nu_over_omega0"});
    for (std::size_t n = 0; n < ladder.lambdas.size(); ++n) {
      csv.cell(n);
      csv.cell(ladder.lambdas[n]);
      csv.cell(std::sqrt(ladder.lambdas[n]));
      csv.cell(ladder.signed_amplitude(n));
      const double dn = std::sqrt(static_cast<double>(n)) / ms.alpha;
      csv.cell(dn);
      csv.cell(dn / r.crystal.omega0);
      csv.end_row();
    }
    const fs::path p = r.out / "analyze_ladder.csv";
    csv.write(p);
    report_written(p);
  }
  if (r.formats.count("svg")) {
    emit::Series s{"sqrt_lambda_n", {}};
    for (std::size_t n = 0; n < ladder.lambdas.size(); ++n) {
      s.pts.emplace_back(static_cast<double>(n), std::sqrt(ladder.lambdas[n]));
    }
    const fs::path p = r.out / "analyze_ladder.svg";
    emit::write_text(p, emit::line_svg("eigenvalue ladder", "n", "sqrt(lambda_n)", {s}));
    report_written(p);
  }

  std::cout << "eta = " << emit::sig12(r.eta) << " (" << regime_name(rp.regime)
            << "), K = " << emit::sig12(K) << ", omega0*alpha = " << emit::sig12(ms.omega0_alpha)
            << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false, true, "csv");

  struct Row {
    double tau = 0, eta = 0, a = 0, b = 0, K = 0, w0a = 0;
    std::size_t grid_n = 0;
    double K_num = 0, R_num = 0;
  };
  std::vector<Row> rows(r.steps);

  const double lg = std::log(r.range_hi / r.range_lo);
  const auto compute = [&](std::size_t i) {
    const double f = lg * static_cast<double>(i) / static_cast<double>(r.steps - 1);
    const double v = r.range_lo * std::exp(f);
    Row& row = rows[i];
    PumpPulse p{};
    if (r.sweep_by_eta) {
      p = pulse_from_eta(r.crystal, v);
    } else {
      p = PumpPulse{v};
    }
    row.tau = p.tau;
    row.eta = control_eta(r.crystal, p);
    const RegimeParams rp = interpolated_model(r.crystal, p, r.s_exp);
    row.a = rp.pair.a;
    row.b = rp.pair.b;
    row.K = row.b / (2.0 * row.a);
    row.w0a = generalized_modes(r.crystal, p, r.s_exp).omega0_alpha;
    if (r.numeric) {
      SpectralGrid g = exact_wf_grid(r.crystal, p, r.s_exp);
      if (r.grid_n > 0 || r.extent_mult != 1.0) {
        g = build_grid(g.extent * r.extent_mult, r.grid_n > 0 ? r.grid_n : g.n());
      }
      const CrystalOptics c = r.crystal;
      const KernelEvaluator kern = [c, p](double x, double y) {
        return exact_wavefunction(c, p, x, y);
      };
      row.grid_n = g.n();
      row.K_num = purity_schmidt_number(discretize(kern, g));
      row.R_num = r_parameter(kern, g);
    }
  };

  if (r.jobs <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    const std::size_t nthreads = std::min<std::size_t>(r.jobs, rows.size());
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          try {
            compute(i);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  std::vector<std::string> header = {"tau_s",        "eta",
                                     "a_rad_s",      "b_rad_s",
                                     "a_over_omega0", "b_over_omega0",
                                     "K_analytic",   "omega0_alpha"};
  if (r.numeric) {
    header.insert(header.end(), {"grid_points", "K_numeric", "R_numeric"});
  }
  emit::Csv csv(header);
  for (const Row& row : rows) {
    csv.cell(row.tau);
    csv.cell(row.eta);
    csv.cell(row.a);
    csv.cell(row.b);
    csv.cell(row.a / r.crystal.omega0);
    csv.cell(row.b / r.crystal.omega0);
    csv.cell(row.K);
    csv.cell(row.w0a);
    if (r.numeric) {
      csv.cell(row.grid_n);
      csv.cell(row.K_num);
      csv.cell(row.R_num);
    }
    csv.end_row();
  }
  const fs::path out = r.out / "sweep.csv";
  csv.write(out);
  report_written(out);

  if (r.formats.count("json")) {
    ordered_json j;
    j["schema"] = "biphoton-sweep/1";
    j["crystal"] = crystal_json(r);
    j["s_exp"] = r.s_exp;
    ordered_json jr = ordered_json::array();
    for (const Row& row : rows) {
      ordered_json e;
      e["tau_s"] = row.tau;
      e["eta"] = row.eta;
      e["a_rad_s"] = row.a;
      e["b_rad_s"] = row.b;
      e["K_analytic"] = row.K;
      e["omega0_alpha"] = row.w0a;
      if (r.numeric) {
        e["grid_points"] = row.grid_n;
        e["K_numeric"] = row.K_num;
        e["R_numeric"] = row.R_num;
      }
      jr.push_back(e);
    }
    j["rows"] = jr;
    const fs::path p = r.out / "sweep.json";
    emit::write_text(p, j.dump(2) + "\n");
    report_written(p);
  }
  if (r.formats.count("svg")) {
    std::vector<emit::Series> series(1);
    series[0].label = "K_analytic";
    for (const Row& row : rows) {
      series[0].pts.emplace_back(std::log10(row.eta), row.K);
    }
    if (r.numeric) {
      emit::Series sn{"K_numeric", {}};
      for (const Row& row : rows) sn.pts.emplace_back(std::log10(row.eta), row.K_num);
      series.push_back(sn);
    }
    const fs::path p = r.out / "sweep.svg";
    emit::write_text(p, emit::line_svg("Schmidt number vs pulse duration", "log10(eta)",
                                       "K", series));
    report_written(p);
  }

  const auto min_it = std::min_element(rows.begin(), rows.end(),
                                       [](const Row& x, const Row& y) { return x.K < y.K; });
  std::cout << "rows = " << rows.size() << ", analytic K minimum = " << emit::sig12(min_it->K)
            << " at eta = " << emit::sig12(min_it->eta) << "\n";
  return 0;
}

int cmd_modes(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true, false, "csv");
  const RegimeParams rp = interpolated_model(r.crystal, r.pulse, r.s_exp);
  const SchmidtParams sp = wf_to_schmidt(rp.pair);
  const ModeScaling ms = generalized_modes(r.crystal, r.pulse, r.s_exp);
  const double K = schmidt_number_of_tau(r.crystal, r.pulse, r.s_exp);

  std::size_t nmax = 1;
  for (std::size_t n : r.modes) nmax = std::max(nmax, n);
  const double width_max = std::sqrt(static_cast<double>(nmax)) / ms.alpha;
  const std::size_t samples = 501;
  const SpectralGrid grid = build_grid(5.0 * width_max, samples);

  std::vector<std::string> header = {"nu_rad_s", "nu_over_omega0", "x"};
  for (std::size_t n : r.modes) header.push_back("psi_" + std::to_string(n));
  emit::Csv csv(header);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double nu = grid.nu[i];
    csv.cell(nu);
    csv.cell(nu / r.crystal.omega0);
    csv.cell(ms.alpha * nu);
    for (std::size_t n : r.modes) csv.cell(ms.evaluate(n, nu));
    csv.end_row();
  }
  const fs::path out = r.out / "modes.csv";
  csv.write(out);
  report_written(out);

  const auto n_ladder = std::min<std::size_t>(
      static_cast<std::size_t>(std::ceil(4.0 * K)) + 1, 20000);
  const SchmidtDecomposition ladder = eigenvalue_ladder(sp, n_ladder);
  emit::Csv lcsv({"n", "lambda", "sqrt_lambda", "signed_amplitude"});
  for (std::size_t n = 0; n < ladder.lambdas.size(); ++n) {
    lcsv.cell(n);
    lcsv.cell(ladder.lambdas[n]);
    lcsv.cell(std::sqrt(ladder.lambdas[n]));
    lcsv.cell(ladder.signed_amplitude(n));
    lcsv.end_row();
  }
  const fs::path lout = r.out / "modes_ladder.csv";
  lcsv.write(lout);
  report_written(lout);

  if (r.formats.count("svg")) {
    std::vector<emit::Series> series;
    for (std::size_t n : r.modes) {
      emit::Series s{"psi_" + std::to_string(n), {}};
      for (std::size_t i = 0; i < grid.n(); ++i) {
        // Dimensionless profile psi_n / sqrt(alpha) over x = alpha nu.
        s.pts.emplace_back(ms.alpha * grid.nu[i],
                           ms.evaluate(n, grid.nu[i]) / std::sqrt(ms.alpha));
      }
      series.push_back(std::move(s));
    }
    const fs::path p = r.out / "modes.svg";
    emit::write_text(p, emit::line_svg("Schmidt modes", "x = alpha nu",
                                       "psi_n / sqrt(alpha)", series));
    report_written(p);
  }
  if (r.formats.count("json")) {
    ordered_json j;
    j["schema"] = "biphoton-modes/1";
    j["crystal"] = crystal_json(r);
    j["pump"]["tau_s"] = r.pulse.tau;
    j["pump"]["eta"] = r.eta;
    j["K"] = K;
    j["alpha_s_rad"] = ms.alpha;
    j["omega0_alpha"] = ms.omega0_alpha;
    ordered_json jw = ordered_json::array();
    for (std::size_t n : r.modes) {
      ordered_json e;
      e["n"] = n;
      e["delta_nu_rad_s"] = std::sqrt(static_cast<double>(n)) / ms.alpha;
      jw.push_back(e);
    }
    j["mode_widths"] = jw;
    const fs::path p = r.out / "modes.json";
    emit::write_text(p, j.dump(2) + "\n");
    report_written(p);
  }

  std::cout << "modes = " << r.modes.size() << ", K = " << emit::sig12(K)
            << ", alpha = " << emit::sig12(ms.alpha) << " s/rad\n";
  return 0;
}

int cmd_map(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true, false, "csv");
  if (r.eta > 0.3) {
    std::cerr << "note: localization map curves assume the short-pulse regime; eta = "
              << emit::sig12(r.eta) << " exceeds 0.3\n";
  }
  const SpectralWidths widths = short_pulse_widths(r.crystal, r.pulse);
  const double strip = widths.coincidence;
  // Range where the quadratic ridge curvature stays inside one strip width.
  const double nu2_star =
      std::sqrt(strip * r.crystal.A * r.crystal.omega0 / (4.0 * r.crystal.B));
  const double reach = 0.94 * nu2_star;
  const double floor = localization_branch_floor(r.crystal);
  const double lo = std::max(-reach, floor);
  const std::size_t n_rows = 201;

  emit::Csv csv({"nu2_rad_s", "nu2_over_omega0", "cm_exact_rad_s", "cm_gauss_rad_s",
                 "dashed_exact_rad_s", "dashed_gauss_plus_rad_s",
                 "dashed_gauss_minus_rad_s", "strip_half_width_rad_s", "exact_branch"});
  double cmin = 0.0, cmax = 0.0;
  bool have_curves = false;
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double nu2 =
        lo + (reach - lo) * static_cast<double>(i) / static_cast<double>(n_rows - 1);
    csv.cell(nu2);
    csv.cell(nu2 / r.crystal.omega0);
    bool branch_ok = true;
    double cm_exact = 0.0;
    LocalizationPoint pt{};
    try {
      pt = localization_curves(r.crystal, r.pulse, nu2);
      cm_exact = pt.cm_exact;
    } catch (const std::domain_error&) {
      // Row outside the exact branch: keep the model curves, mark the row.
      branch_ok = false;
      pt.cm_gauss = -nu2;
      pt.dashed_exact = -nu2 + 2.0 * ln2 / r.pulse.tau;
      const double span = std::pow(ln2, 0.25) *
                          std::sqrt(r.crystal.A * r.crystal.omega0 /
                                    (0.208 * r.crystal.B * r.pulse.tau));
      pt.dashed_gauss_plus = nu2 + span;
      pt.dashed_gauss_minus = nu2 - span;
      pt.strip_half_width = strip;
    }
    if (branch_ok) csv.cell(cm_exact);
    else csv.cell_empty();
    csv.cell(pt.cm_gauss);
    csv.cell(pt.dashed_exact);
    csv.cell(pt.dashed_gauss_plus);
    csv.cell(pt.dashed_gauss_minus);
    csv.cell(pt.strip_half_width);
    csv.cell(std::size_t{branch_ok ? 1u : 0u});
    csv.end_row();
    for (const double v : {branch_ok ? cm_exact : pt.cm_gauss, pt.cm_gauss, pt.dashed_exact}) {
      if (!have_curves) {
        cmin = cmax = v;
        have_curves = true;
      }
      cmin = std::min(cmin, v);
      cmax = std::max(cmax, v);
    }
  }
  const fs::path out = r.out / "map.csv";
  csv.write(out);
  report_written(out);

  if (r.formats.count("svg")) {
    const char* names[] = {"cm_exact", "cm_gauss", "dashed_exact", "dashed_gauss_plus",
                           "dashed_gauss_minus"};
    std::vector<emit::Series> series(5);
    for (std::size_t k = 0; k < 5; ++k) series[k].label = names[k];
    for (std::size_t i = 0; i < n_rows; ++i) {
      const double nu2 =
          lo + (reach - lo) * static_cast<double>(i) / static_cast<double>(n_rows - 1);
      try {
        const LocalizationPoint pt = localization_curves(r.crystal, r.pulse, nu2);
        const double x = nu2 / r.crystal.omega0;
        series[0].pts.emplace_back(x, pt.cm_exact / r.crystal.omega0);
        series[1].pts.emplace_back(x, pt.cm_gauss / r.crystal.omega0);
        series[2].pts.emplace_back(x, pt.dashed_exact / r.crystal.omega0);
        series[3].pts.emplace_back(x, pt.dashed_gauss_plus / r.crystal.omega0);
        series[4].pts.emplace_back(x, pt.dashed_gauss_minus / r.crystal.omega0);
      } catch (const std::domain_error&) {
      }
    }
    const fs::path p = r.out / "map.svg";
    emit::write_text(p, emit::line_svg("localization map", "nu2 / omega0",
                                       "nu1 / omega0", series));
    report_written(p);
  }

  if (r.heatmap) {
    const GaussianPair gp = short_pulse_model(r.crystal, r.pulse);
    const double y0 = cmin - 2.0 * strip, y1 = cmax + 2.0 * strip;
    const std::size_t n_heat = 161;
    emit::Csv hcsv({"nu1_rad_s", "nu2_rad_s", "psi2_exact", "psi2_gauss"});
    std::vector<std::vector<double>> z_exact(n_heat, std::vector<double>(n_heat));
    std::vector<std::vector<double>> z_gauss(n_heat, std::vector<double>(n_heat));
    for (std::size_t jx = 0; jx < n_heat; ++jx) {
      const double nu2 =
          lo + (reach - lo) * static_cast<double>(jx) / static_cast<double>(n_heat - 1);
      for (std::size_t iy = 0; iy < n_heat; ++iy) {
        const double nu1 =
            y0 + (y1 - y0) * static_cast<double>(iy) / static_cast<double>(n_heat - 1);
        double pe = 0.0;
        try {
          const double v = exact_wavefunction(r.crystal, r.pulse, nu1, nu2);
          pe = v * v;
        } catch (const std::domain_error&) {
        }
        const double g = dg_wavefunction(gp, nu1, nu2);
        hcsv.cell(nu1);
        hcsv.cell(nu2);
        hcsv.cell(pe);
        hcsv.cell(g * g);
        hcsv.end_row();
        z_exact[iy][jx] = pe;
        z_gauss[iy][jx] = g * g;
      }
    }
    const fs::path hp = r.out / "map_heat.csv";
    hcsv.write(hp);
    report_written(hp);
    if (r.formats.count("svg")) {
      const fs::path pe = r.out / "map_heat_exact.svg";
      emit::write_text(pe, emit::heatmap_svg("|Psi_exact|^2", z_exact, lo / r.crystal.omega0,
                                             reach / r.crystal.omega0, y0 / r.crystal.omega0,
                                             y1 / r.crystal.omega0));
      report_written(pe);
      const fs::path pg = r.out / "map_heat_gauss.svg";
      emit::write_text(pg, emit::heatmap_svg("|Psi_model|^2", z_gauss, lo / r.crystal.omega0,
                                             reach / r.crystal.omega0, y0 / r.crystal.omega0,
                                             y1 / r.crystal.omega0));
      report_written(pg);
    }
  }

  std::cout << "map rows = " << n_rows << ", strip half-width = " << emit::sig12(strip)
            << " rad/s, nu2 range = [" << emit::sig12(lo) << ", " << emit::sig12(reach)
            << "]\n";
  return 0;
}

}  // namespace biphoton::cli
