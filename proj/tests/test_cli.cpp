#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = LAGVAC_CLI_PATH;
const std::string kCfg = LAGVAC_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd =
      kCli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json slurp_json(const fs::path& path) {
  return nlohmann::json::parse(slurp(path));
}

// CSV rows as string cells, header skipped.
std::vector<std::vector<std::string>> csv_rows(const fs::path& path,
                                               const std::string& header) {
  std::istringstream in(slurp(path));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == header);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

double num(const std::string& s) { return std::stod(s); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string cfg(const std::string& name) {
  return " --config " + (fs::path(kCfg) / name).string();
}

}  // namespace

TEST_CASE("riemann: symmetric collision gives two shocks and a resting "
          "middle state") {
  const fs::path out = fresh_dir("riemann_sym");
  REQUIRE(run("riemann" + cfg("riemann_symmetric.cfg") + " --out-dir " +
              out.string()) == 0);

  const auto fan = slurp_json(out / "fan.json");
  REQUIRE(fan["waves"].size() == 2);
  CHECK(fan["waves"][0]["kind"] == "shock");
  CHECK(fan["waves"][1]["kind"] == "shock");
  CHECK_FALSE(fan["has_vacuum"].get<bool>());
  REQUIRE(fan["states"].size() == 3);
  CHECK(std::abs(fan["states"][1]["u"].get<double>()) < 1e-12);

  const auto rows = csv_rows(out / "profile.csv", "t,x,h,u,p,v,region_id");
  CHECK(rows.size() == 4 * 101);
  // Odd velocity / even h about x = 0 for the symmetric data.
  std::map<std::pair<double, double>, std::pair<double, double>> at;
  for (const auto& r : rows) at[{num(r[0]), num(r[1])}] = {num(r[2]), num(r[3])};
  for (const auto& [key, hu] : at) {
    const auto mirror = at.find({key.first, -key.second});
    if (mirror == at.end()) continue;
    CHECK(hu.first == doctest::Approx(mirror->second.first).epsilon(1e-10));
    CHECK(hu.second ==
          doctest::Approx(-mirror->second.second).epsilon(1e-10));
  }
}

TEST_CASE("riemann: equal states give the empty fan and constant profile") {
  const fs::path out = fresh_dir("riemann_eq");
  REQUIRE(run("riemann" + cfg("riemann_equal.cfg") + " --out-dir " +
              out.string()) == 0);
  const auto fan = slurp_json(out / "fan.json");
  CHECK(fan["waves"].empty());
  REQUIRE(fan["states"].size() == 1);

  const auto rows = csv_rows(out / "profile.csv", "t,x,h,u,p,v,region_id");
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    CHECK(num(r[2]) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(num(r[3]) == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("riemann: receding states open a vacuum wave with the residual "
          "velocity jump as its rate") {
  const fs::path out = fresh_dir("riemann_vac");
  REQUIRE(run("riemann" + cfg("riemann_vacuum.cfg") + " --out-dir " +
              out.string()) == 0);
  const auto fan = slurp_json(out / "fan.json");
  CHECK(fan["has_vacuum"].get<bool>());
  bool found = false;
  for (const auto& w : fan["waves"]) {
    if (w["kind"] != "vacuum") continue;
    found = true;
    // du - (h_l + h_r) = 2 - 1 = 1.
    CHECK(w["atom_rate"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(found);
}

TEST_CASE("collapse golden run: norms CSV matches the closed form") {
  const fs::path out = fresh_dir("collapse");
  REQUIRE(run("collapse" + cfg("collapse_symmetric.cfg") + " --out-dir " +
              out.string()) == 0);

  const auto norms =
      csv_rows(out / "norms.csv", "t,closed_form,quadrature,abs_err");
  REQUIRE(norms.size() == 6);
  for (const auto& r : norms) {
    CHECK(num(r[3]) <= 1e-7);
    CHECK(num(r[3]) ==
          doctest::Approx(std::abs(num(r[1]) - num(r[2]))).epsilon(1e-12));
  }

  // Pre-collapse atom w = -2t; post-collapse no atoms.
  const auto atoms = csv_rows(out / "atoms.csv", "t,x_atom,w");
  REQUIRE(atoms.size() == 3);
  for (const auto& r : atoms) {
    CHECK(num(r[0]) < 0.0);
    CHECK(num(r[2]) == doctest::Approx(-2.0 * num(r[0])).epsilon(1e-13));
  }

  // Entropy: the vacuum is massless pre-collapse, shocks dissipate after.
  const auto ent = csv_rows(out / "entropy.csv", "t,x_disc,kind,mass");
  REQUIRE(!ent.empty());
  for (const auto& r : ent) {
    if (r[2] == "vacuum") CHECK(std::abs(num(r[3])) <= 1e-12);
    if (r[2] == "shock") CHECK(num(r[3]) < 0.0);
  }
}

TEST_CASE("vrp golden run: the atom weight hits zero at T = 0.5") {
  const fs::path out = fresh_dir("vrp");
  REQUIRE(run("vrp" + cfg("vrp.cfg") + " --out-dir " + out.string()) == 0);

  const auto atoms = csv_rows(out / "atoms.csv", "t,x_atom,w");
  REQUIRE(atoms.size() == 5);
  bool saw_T = false;
  for (const auto& r : atoms) {
    CHECK(num(r[2]) ==
          doctest::Approx(1.0 - 2.0 * num(r[0])).epsilon(1e-12));
    if (num(r[0]) == 0.5) {
      saw_T = true;
      CHECK(num(r[2]) == 0.0);
    }
  }
  CHECK(saw_T);

  const auto norms =
      csv_rows(out / "norms.csv", "t,closed_form,quadrature,abs_err");
  for (const auto& r : norms) CHECK(num(r[3]) <= 1e-7);
}

TEST_CASE("offcenter golden run: shock-curve CSV with monotone speed") {
  const fs::path out = fresh_dir("offcenter");
  REQUIRE(run("offcenter" + cfg("offcenter.cfg") + " --out-dir " +
              out.string()) == 0);

  const auto curve = csv_rows(out / "shock_curve.csv", "z,h,t,x,sigma");
  REQUIRE(curve.size() > 100);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(num(curve[i][0]) > num(curve[i - 1][0]));      // z ascending
    CHECK(num(curve[i][4]) < num(curve[i - 1][4]));      // sigma decreasing
    CHECK(num(curve[i][2]) < num(curve[i - 1][2]));      // t decreasing
  }
  // The curve emerges from the collapse point as z -> inf: t -> 3.
  CHECK(num(curve.back()[2]) == doctest::Approx(3.0).epsilon(1e-3));

  // Norms have no closed form here: the column is empty, quadrature not.
  const auto norms =
      csv_rows(out / "norms.csv", "t,closed_form,quadrature,abs_err");
  REQUIRE(!norms.empty());
  for (const auto& r : norms) {
    CHECK(r[1].empty());
    CHECK(num(r[2]) > 0.0);
  }
}

TEST_CASE("verify: vrp scenario passes") {
  const fs::path out = fresh_dir("verify_vrp");
  REQUIRE(run("verify vrp" + cfg("verify_vrp.cfg") + " --out-dir " +
              out.string()) == 0);
  const std::string summary = slurp(out / "summary.txt");
  CHECK(summary.find("overall: PASS") != std::string::npos);
  const auto report = slurp_json(out / "report.json");
  CHECK(report["equation_pass"].get<bool>());
  CHECK(report["consistent"].get<bool>());
  CHECK(report["max_residual"].get<double>() <= 1e-6);
}

TEST_CASE("verify: bundled nonphysical example passes the equations but "
          "fails consistency") {
  const fs::path out = fresh_dir("verify_nonphys");
  const std::string target = (fs::path(kCfg) / "nonphysical.json").string();
  CHECK(run("verify " + target + " --out-dir " + out.string()) == 2);
  const std::string summary = slurp(out / "summary.txt");
  CHECK(summary.find("equation: PASS") != std::string::npos);
  CHECK(summary.find("consistency: FAIL") != std::string::npos);
}

TEST_CASE("verify: corrupted fixture fails the jump conditions with a "
          "located curve and time") {
  const fs::path out = fresh_dir("verify_corrupt");
  CHECK(run("verify riemann" + cfg("verify_corrupted.cfg") + " --out-dir " +
            out.string()) == 2);
  const std::string summary = slurp(out / "summary.txt");
  CHECK(summary.find("RH: FAIL") != std::string::npos);
  CHECK(summary.find("at shock curve") != std::string::npos);
  CHECK(summary.find("t = ") != std::string::npos);
}

TEST_CASE("elastic: saturating family report") {
  const fs::path out = fresh_dir("elastic_power");
  REQUIRE(run("elastic" + cfg("elastic_power.cfg") + " --out-dir " +
              out.string()) == 0);
  const auto j = slurp_json(out / "crack_report.json");
  CHECK(j["theta"].get<double>() < 0.0);
  CHECK(j["crack_mass"].get<double>() > 0.0);
  CHECK(j["energy_gap"].get<double>() > 0.0);
  CHECK(j["admissibility"]["admissible"].get<bool>());
  CHECK(j["sigma"].get<double>() == doctest::Approx(0.6236).epsilon(1e-4));
  CHECK(j["rh_max_residual"].get<double>() <= 1e-10);
}

TEST_CASE("elastic: linear stress table is inadmissible with its limit "
          "reported") {
  const fs::path out = fresh_dir("elastic_linear");
  REQUIRE(run("elastic" + cfg("elastic_linear.cfg") + " --out-dir " +
              out.string()) == 0);
  const auto j = slurp_json(out / "crack_report.json");
  CHECK_FALSE(j["admissibility"]["admissible"].get<bool>());
  CHECK(j["admissibility"]["L_tau"].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("error exits: bad configuration returns 1") {
  const fs::path out = fresh_dir("errors");
  // alpha >= lambda is a configuration error.
  {
    std::ofstream bad(out / "bad_crack.cfg");
    bad << "stress = power\ntau_inf = 1.0\nm = 2.0\n"
        << "lambda = 1.5\nalpha = 2.0\nt = 1.0\n";
  }
  CHECK(run("elastic --config " + (out / "bad_crack.cfg").string() +
            " --out-dir " + out.string()) == 1);
  CHECK(run("riemann --config no_such_file.cfg --out-dir " + out.string()) ==
        1);
  // riemann requires the four state keys.
  {
    std::ofstream empty(out / "empty.cfg");
    empty << "law = gamma\ngamma = 3.0\n";
  }
  CHECK(run("riemann --config " + (out / "empty.cfg").string() +
            " --out-dir " + out.string()) == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("determinism: golden runs are byte-identical") {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"riemann", "riemann_symmetric.cfg"},
      {"collapse", "collapse_symmetric.cfg"},
      {"vrp", "vrp.cfg"},
      {"offcenter", "offcenter.cfg"},
      {"elastic", "elastic_power.cfg"},
  };
  for (const auto& [sub, config] : runs) {
    const fs::path d1 = fresh_dir("det_" + sub + "_1");
    const fs::path d2 = fresh_dir("det_" + sub + "_2");
    REQUIRE(run(sub + cfg(config) + " --out-dir " + d1.string()) == 0);
    REQUIRE(run(sub + cfg(config) + " --out-dir " + d2.string()) == 0);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
      const fs::path other = d2 / entry.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(entry.path()) == slurp(other));
      ++compared;
    }
    CHECK(compared > 0);
  }
}
