#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = BIPHOTON_CLI_PATH;
const std::string kPreset = "--crystal LiIO3-0.5cm-400nm";

fs::path workdir() {
  static const fs::path w = [] {
    fs::path p = fs::temp_directory_path() /
                 ("biphoton_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return w;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunResult {
  int code = -1;
  std::string out, err;
};

RunResult run(const std::string& args) {
  static int seq = 0;
  const fs::path o = workdir() / ("stdout_" + std::to_string(seq) + ".txt");
  const fs::path e = workdir() / ("stderr_" + std::to_string(seq) + ".txt");
  ++seq;
  const std::string cmd = kCli + " " + args + " >" + o.string() + " 2>" + e.string();
  const int st = std::system(cmd.c_str());
  RunResult r;
  if (st != -1 && WIFEXITED(st)) r.code = WEXITSTATUS(st);
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> ls;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      ls.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) ls.push_back(cur);
  return ls;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = workdir() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("usage surface: help and missing subcommand") {
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run("analyze --help").code == 0);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("analyze: report fields, physics numbers, determinism") {
  const fs::path d = fresh_dir("analyze1");
  const RunResult r = run("analyze " + kPreset + " --eta 1 --out " + d.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("wrote:") != std::string::npos);

  const json j = json::parse(slurp(d / "analyze.json"));
  CHECK(j.at("schema") == "biphoton-analyze/1");
  CHECK(j.at("crystal").at("name") == "LiIO3");
  CHECK(j.at("crystal").at("A").get<double>() == doctest::Approx(0.168943820).epsilon(1e-5));
  CHECK(j.at("crystal").at("lambda0_m").get<double>() == doctest::Approx(400e-9));
  CHECK(j.at("pump").at("eta").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("pump").at("regime") == "intermediate");
  CHECK(j.at("model").at("K").get<double>() == doctest::Approx(86.25).epsilon(2e-3));
  CHECK(j.at("model").at("omega0_alpha").get<double>() == doctest::Approx(585.5).epsilon(2e-3));
  CHECK(j.at("ladder").size() == 16);
  const double l0 = j.at("ladder").at(0).at("lambda").get<double>();
  const double g0 = j.at("ladder").at(0).at("signed_amplitude").get<double>();
  CHECK(g0 * g0 == doctest::Approx(l0).epsilon(1e-10));
  CHECK(j.contains("widths"));
  CHECK_FALSE(j.contains("numeric"));

  // byte-identical on repetition
  const fs::path d2 = fresh_dir("analyze2");
  REQUIRE(run("analyze " + kPreset + " --eta 1 --out " + d2.string()).code == 0);
  CHECK(slurp(d / "analyze.json") == slurp(d2 / "analyze.json"));
}

TEST_CASE("analyze: numeric block appears on request") {
  const fs::path d = fresh_dir("analyze_num");
  // coarse grid keeps this test quick; the policy default is exercised in the
  // acceptance battery
  const RunResult r = run("analyze " + kPreset +
                          " --eta 0.05 --numeric --grid 256 --out " + d.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(d / "analyze.json"));
  REQUIRE(j.contains("numeric"));
  CHECK(j.at("numeric").at("grid_points").get<int>() == 256);
  CHECK(j.at("numeric").at("K_num").get<double>() > 1.0);
  CHECK(j.at("numeric").at("sigma").size() == 10);
  CHECK(j.at("numeric").at("model_mode_fidelity").size() == 6);
}

TEST_CASE("usage and domain errors map to distinct exit codes") {
  const std::string d = fresh_dir("err").string();
  CHECK(run("analyze " + kPreset + " --tau 5e-14 --eta 1 --out " + d).code == 2);
  CHECK(run("analyze " + kPreset + " --out " + d).code == 2);          // no pulse
  CHECK(run("analyze --eta 1 --out " + d).code == 2);                  // no crystal
  CHECK(run("analyze --crystal Unobtainium --eta 1 --out " + d).code == 2);
  CHECK(run("analyze --crystal LiIO3 --eta 1 --out " + d).code == 2);  // L, lambda0 missing
  CHECK(run("analyze " + kPreset + " --A 0.1 --eta 1 --out " + d).code == 2);
  CHECK(run("analyze " + kPreset + " --eta 1 --format yaml --out " + d).code == 2);
  CHECK(run("analyze " + kPreset + " --eta -3 --out " + d).code == 3);
  CHECK(run("analyze " + kPreset + " --tau -1e-13 --out " + d).code == 3);
  CHECK(run("analyze " + kPreset + " --eta 1 --numeric --grid 8 --out " + d).code == 2);

  const RunResult bad = run("analyze " + kPreset + " --eta 1 --format yaml --out " + d);
  CHECK(bad.err.find("format") != std::string::npos);
}

TEST_CASE("config file: strict fields, flag precedence, pulse replacement") {
  const fs::path d = fresh_dir("cfg");
  const fs::path cfg = d / "run.json";
  {
    std::ofstream o(cfg);
    o << R"({"crystal": "LiIO3-0.5cm-400nm", "eta": 1.0})";
  }
  const RunResult r1 = run("analyze --config " + cfg.string() + " --out " + d.string());
  REQUIRE(r1.code == 0);
  const json j1 = json::parse(slurp(d / "analyze.json"));
  CHECK(j1.at("pump").at("eta").get<double>() == doctest::Approx(1.0));

  // a command-line pulse replaces the config pulse even across spellings
  const RunResult r2 =
      run("analyze --config " + cfg.string() + " --tau 5e-14 --out " + d.string());
  REQUIRE(r2.code == 0);
  const json j2 = json::parse(slurp(d / "analyze.json"));
  CHECK(j2.at("pump").at("tau_s").get<double>() == doctest::Approx(5e-14));
  CHECK(j2.at("pump").at("eta").get<double>() != doctest::Approx(1.0));

  const fs::path bad = d / "bad.json";
  {
    std::ofstream o(bad);
    o << R"({"crystal": "LiIO3-0.5cm-400nm", "etaa": 1.0})";
  }
  const RunResult r3 = run("analyze --config " + bad.string() + " --out " + d.string());
  CHECK(r3.code == 2);
  CHECK(r3.err.find("etaa") != std::string::npos);

  const fs::path both = d / "both.json";
  {
    std::ofstream o(both);
    o << R"({"crystal": "LiIO3-0.5cm-400nm", "tau": 5e-14, "eta": 1.0})";
  }
  CHECK(run("analyze --config " + both.string() + " --out " + d.string()).code == 2);
}

TEST_CASE("sellmeier file input reproduces the embedded crystal") {
  const fs::path d = fresh_dir("sell");
  const std::string data = std::string(BIPHOTON_DATA_DIR) + "/liio3.json";
  const RunResult r = run("analyze --sellmeier " + data +
                          " --L 0.005 --lambda0 400e-9 --eta 1 --out " + d.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(slurp(d / "analyze.json"));
  CHECK(j.at("crystal").at("A").get<double>() == doctest::Approx(0.168943820).epsilon(1e-5));
  CHECK(j.at("crystal").at("dispersion_source").get<std::string>().find("sellmeier-file") !=
        std::string::npos);
}

TEST_CASE("sweep: csv shape, ordering, jobs-invariant bytes") {
  const fs::path d1 = fresh_dir("sweep1");
  const std::string args = "sweep " + kPreset + " --eta-min 0.5 --eta-max 2 --steps 5";
  REQUIRE(run(args + " --out " + d1.string()).code == 0);
  const std::string text = slurp(d1 / "sweep.csv");
  CHECK(text.find('\r') == std::string::npos);
  const auto ls = lines_of(text);
  REQUIRE(ls.size() == 6);
  CHECK(ls[0] ==
        "tau_s,eta,a_rad_s,b_rad_s,a_over_omega0,b_over_omega0,K_analytic,omega0_alpha");
  double prev_tau = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto cells = split_csv(ls[i]);
    REQUIRE(cells.size() == 8);
    const double tau = std::stod(cells[0]);
    CHECK(tau > prev_tau);  // ordered by pulse duration
    prev_tau = tau;
  }
  // endpoint control values are exact
  CHECK(std::stod(split_csv(ls[1])[1]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(split_csv(ls[5])[1]) == doctest::Approx(2.0).epsilon(1e-12));

  const fs::path d2 = fresh_dir("sweep2");
  REQUIRE(run(args + " --jobs 3 --out " + d2.string()).code == 0);
  CHECK(slurp(d1 / "sweep.csv") == slurp(d2 / "sweep.csv"));

  // range validation
  const std::string dd = fresh_dir("sweeperr").string();
  CHECK(run("sweep " + kPreset + " --eta-min 0.5 --out " + dd).code == 2);
  CHECK(run("sweep " + kPreset + " --eta-min 0.5 --eta-max 2 --tau-min 1e-14 --tau-max 1e-13 --out " + dd).code == 2);
  CHECK(run("sweep " + kPreset + " --eta-min 0.5 --eta-max 2 --steps 1 --out " + dd).code == 2);
  CHECK(run("sweep " + kPreset + " --eta-min 2 --eta-max 0.5 --out " + dd).code == 2);
}

TEST_CASE("modes: sampled profiles and the amplitude ladder") {
  const fs::path d = fresh_dir("modes");
  const RunResult r = run("modes " + kPreset +
                          " --eta 1 --modes 0,1,2 --format csv,svg --out " + d.string());
  REQUIRE(r.code == 0);
  const auto ls = lines_of(slurp(d / "modes.csv"));
  REQUIRE(ls.size() == 502);
  CHECK(ls[0] == "nu_rad_s,nu_over_omega0,x,psi_0,psi_1,psi_2");
  const auto mid = split_csv(ls[251]);  // nu = 0 row
  CHECK(std::stod(mid[0]) == doctest::Approx(0.0));
  CHECK(std::stod(mid[3]) > 0.0);                     // even mode peaks at 0
  CHECK(std::stod(mid[4]) == doctest::Approx(0.0));   // odd mode vanishes at 0

  const auto lad = lines_of(slurp(d / "modes_ladder.csv"));
  CHECK(lad[0] == "n,lambda,sqrt_lambda,signed_amplitude");
  CHECK(lad.size() >= 100);  // about 4K entries at K ~ 86
  double sum = 0.0;
  for (std::size_t i = 1; i < lad.size(); ++i) sum += std::stod(split_csv(lad[i])[1]);
  CHECK(sum > 0.999);  // the 4K-entry ladder carries nearly all the mass
  CHECK(sum <= 1.0 + 1e-12);

  const std::string svg = slurp(d / "modes.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("psi_2") != std::string::npos);
}

TEST_CASE("map: localization table, symmetric window, short-pulse note") {
  const fs::path d = fresh_dir("map");
  const RunResult r = run("map " + kPreset + " --tau 5e-14 --out " + d.string());
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());  // short-pulse config, no note
  const auto ls = lines_of(slurp(d / "map.csv"));
  REQUIRE(ls.size() == 202);
  CHECK(split_csv(ls[0]).size() == 9);
  const auto mid = split_csv(ls[101]);  // nu2 = 0 row
  const double strip = std::stod(mid[7]);
  CHECK(std::stod(mid[0]) == doctest::Approx(0.0));
  // both center lines pass through the origin (up to rounding of the branch
  // square root, far below the strip scale)
  CHECK(std::abs(std::stod(mid[2])) < 1e-9 * strip);
  CHECK(std::abs(std::stod(mid[3])) < 1e-9 * strip);
  CHECK(mid[8] == "1");
  // strip half-width column is constant and positive
  CHECK(strip > 0.0);
  CHECK(std::stod(split_csv(ls[1])[7]) == doctest::Approx(strip).epsilon(1e-12));

  const RunResult warn = run("map " + kPreset + " --eta 1 --out " + d.string());
  REQUIRE(warn.code == 0);
  CHECK(warn.err.find("short-pulse") != std::string::npos);
}

TEST_CASE("map: optional heat-map artifacts") {
  const fs::path d = fresh_dir("mapheat");
  const RunResult r = run("map " + kPreset +
                          " --tau 5e-14 --heatmap --format csv,svg --out " + d.string());
  REQUIRE(r.code == 0);
  const auto ls = lines_of(slurp(d / "map_heat.csv"));
  REQUIRE(ls.size() == 161 * 161 + 1);
  CHECK(ls[0] == "nu1_rad_s,nu2_rad_s,psi2_exact,psi2_gauss");
  CHECK(slurp(d / "map_heat_exact.svg").find("<svg") != std::string::npos);
  CHECK(slurp(d / "map_heat_gauss.svg").find("<svg") != std::string::npos);
}
