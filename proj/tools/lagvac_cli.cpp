// Command-line frontend: builds scenarios from plain-text configs, samples
// them to CSV, runs the verification suite, and solves crack problems.
//
// Exit codes: 0 = success / verification PASS, 2 = verification FAIL,
// 1 = configuration or runtime error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lagvac/elasticity.hpp"
#include "lagvac/measure.hpp"
#include "lagvac/scenarios.hpp"
#include "lagvac/solution.hpp"
#include "lagvac/verify.hpp"
#include "lagvac/waves.hpp"

namespace fs = std::filesystem;
using namespace lagvac;

namespace {

// ---------------------------------------------------------------- logging

int log_level() {
  const char* env = std::getenv("LAGVAC_LOG");
  if (!env) return 0;
  const std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

// ----------------------------------------------------------------- config

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain-text key=value file.  '[section]' headers group keys visually;
// keys are global and must be unique across sections.  '#' starts a
// comment.
struct Config {
  std::map<std::string, std::string> kv;

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    Config cfg;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']') continue;  // section
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("malformed config line: " + line);
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key in config line: " + line);
      if (!cfg.kv.emplace(key, val).second) {
        throw ConfigError("duplicate config key: " + key);
      }
    }
    return cfg;
  }

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string str(const std::string& k, const std::string& def = "") const {
    const auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
  }
  double num(const std::string& k, double def) const {
    const auto it = kv.find(k);
    if (it == kv.end()) return def;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(k);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + k + "' is not a number: " +
                        it->second);
    }
  }
  double require(const std::string& k) const {
    if (!has(k)) throw ConfigError("missing required config key: " + k);
    return num(k, 0.0);
  }
};

// "--times 0.1,0.2,0.5" or "--times start:step:end" (inclusive end).
std::vector<double> parse_times(const std::string& spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  if (spec.find(':') != std::string::npos) {
    double start = 0, step = 0, end = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> step >> c2 >> end) || c1 != ':' || c2 != ':' ||
        !(step > 0.0)) {
      throw ConfigError("bad time range (want start:step:end): " + spec);
    }
    for (double t = start; t <= end + 1e-12 * std::abs(step); t += step) {
      out.push_back(t);
    }
    return out;
  }
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad time list entry: " + tok);
    }
  }
  return out;
}

// ------------------------------------------------------------ CSV output

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

// ------------------------------------------------------------- law block

std::shared_ptr<const GasLaw> gas_law_from_config(const Config& cfg) {
  const std::string kind = cfg.str("law", "gamma");
  if (kind == "gamma") {
    return std::make_shared<GasLaw>(GasLaw::gamma_law(
        cfg.num("gamma", 3.0), cfg.num("A", 1.0),
        cfg.num("rescaled", 1.0) != 0.0));
  }
  if (kind == "table") {
    const std::string path = cfg.str("table_path");
    if (path.empty()) throw ConfigError("law = table needs table_path");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open law table: " + path);
    std::vector<double> v, P;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b)) {
        throw ConfigError("malformed law table row: " + line);
      }
      try {
        v.push_back(std::stod(a));
        P.push_back(std::stod(b));
      } catch (const std::exception&) {
        if (first) {
          first = false;
          continue;
        }
        throw ConfigError("malformed law table row: " + line);
      }
      first = false;
    }
    return std::make_shared<GasLaw>(
        GasLaw::tabulated(std::move(v), std::move(P)));
  }
  throw ConfigError("unknown law kind: " + kind);
}

// --------------------------------------------------------- shared output

std::string curve_kind_name(CurveKind k) {
  switch (k) {
    case CurveKind::Shock: return "shock";
    case CurveKind::Vacuum: return "vacuum";
    case CurveKind::Contact: return "contact";
  }
  return "unknown";
}

// Atom rows at t; at an event time the weights are taken as the limit
// from the ending phase (where the collapse w(T) = 0 is still visible).
std::vector<Atom> atoms_at(const PiecewiseSolution& sol, double t) {
  if (sol.near_event(t)) {
    for (const auto& ph : sol.phases) {
      if (std::abs(ph.t1 - t) <= 1e-9) {
        std::vector<Atom> atoms;
        for (const auto& c : ph.curves) {
          if (c.w) atoms.push_back({c.X(t), c.w(t)});
        }
        return atoms;
      }
    }
  }
  return sol.volume_measure(t).atoms;
}

void write_profile(const PiecewiseSolution& sol, const fs::path& path,
                   const std::vector<double>& times, int grid) {
  Csv csv(path, "t,x,h,u,p,v,region_id");
  for (double t : times) {
    if (sol.near_event(t)) {
      log_info("profile: skipping event time t = " + fmt(t));
      continue;
    }
    for (int i = 0; i < grid; ++i) {
      const double x =
          sol.domain_a + (sol.domain_b - sol.domain_a) * i / (grid - 1);
      const EvalResult r = sol.eval(t, x);
      csv.row({fmt(t), fmt(x), fmt(r.right.h), fmt(r.right.u),
               fmt(r.right.p), fmt(r.right.v),
               std::to_string(r.region_right)});
    }
  }
}

void write_atoms(const PiecewiseSolution& sol, const fs::path& path,
                 const std::vector<double>& times) {
  Csv csv(path, "t,x_atom,w");
  for (double t : times) {
    for (const Atom& a : atoms_at(sol, t)) {
      csv.row({fmt(t), fmt(a.x), fmt(a.w)});
    }
  }
}

void write_norms(const PiecewiseSolution& sol, const fs::path& path,
                 const std::vector<double>& times, double tol) {
  Csv csv(path, "t,closed_form,quadrature,abs_err");
  for (double t : times) {
    if (sol.near_event(t)) {
      log_info("norms: skipping event time t = " + fmt(t));
      continue;
    }
    std::optional<double> closed;
    try {
      closed = norm_closed_form(sol, t);
    } catch (const UnsupportedConfiguration&) {
      // No closed form for this scenario: report quadrature only.
    }
    const MeasureNormReport rep =
        total_variation(sol.volume_measure(t), tol);
    csv.row({fmt(t), closed ? fmt(*closed) : "", fmt(rep.quadrature),
             closed ? fmt(std::abs(*closed - rep.quadrature)) : ""});
  }
}

void write_entropy(const PiecewiseSolution& sol, const fs::path& path,
                   const std::vector<double>& times) {
  Csv csv(path, "t,x_disc,kind,mass");
  for (double t : times) {
    if (sol.near_event(t)) {
      log_info("entropy: skipping event time t = " + fmt(t));
      continue;
    }
    for (const EntropyAtom& a : entropy_production(sol, t)) {
      csv.row({fmt(t), fmt(a.location), curve_kind_name(a.kind),
               fmt(a.mass)});
    }
  }
}

std::vector<double> clip_times(const PiecewiseSolution& sol,
                               std::vector<double> times) {
  std::vector<double> kept;
  for (double t : times) {
    if (t >= sol.t_min && t <= sol.t_max) {
      kept.push_back(t);
    } else {
      log_info("dropping time outside validity: t = " + fmt(t));
    }
  }
  return kept;
}

// --------------------------------------------------------- scenario glue

PiecewiseSolution build_scenario(const std::string& id, const Config& cfg) {
  auto law = gas_law_from_config(cfg);
  const double a = cfg.num("a", -10.0);
  const double b = cfg.num("b", 10.0);
  if (id == "riemann") {
    WaveFan fan = riemann_solve(law,
                                {cfg.num("h_l", 1.0), cfg.num("u_l", 1.0)},
                                {cfg.num("h_r", 1.0), cfg.num("u_r", -1.0)});
    // Controlled corruption: scaling the shock speeds moves the waves off
    // the jump conditions, which the verifier must flag.
    const double corrupt = cfg.num("corrupt", 0.0);
    if (corrupt != 0.0) {
      for (Wave& w : fan.waves) {
        if (w.kind != WaveKind::Shock) continue;
        w.s_lo *= 1.0 + corrupt;
        w.s_hi *= 1.0 + corrupt;
      }
    }
    return fan_solution(law, fan, 0.0, 0.0, a, b);
  }
  if (id == "collapse") {
    return collapse_solution(law, cfg.num("h_l", 1.0), cfg.num("h_r", 1.0),
                             cfg.num("u_minus", 1.0), cfg.num("u_plus", -1.0),
                             a, b);
  }
  if (id == "vrp") {
    return vacuum_riemann_solve(law,
                                {cfg.num("h_l", 0.7), cfg.num("u_l", 1.0)},
                                {cfg.num("h_r", 0.2), cfg.num("u_r", 1.4)},
                                cfg.num("w0", 1.0), a, b);
  }
  if (id == "offcenter") {
    OffcenterParams prm;
    prm.h_l = cfg.num("h_l", 1.0);
    prm.h_r = cfg.num("h_r", 0.8);
    prm.u_minus = cfg.num("u_minus", 0.5);
    prm.u_plus = cfg.num("u_plus", -1.0);
    prm.focus_t = cfg.num("focus_t", 3.0);
    prm.collapse_t = cfg.num("collapse_t", prm.focus_t);
    prm.a = a;
    prm.b = b;
    prm.z_max = cfg.num("z_max", 1e6);
    prm.n_samples = static_cast<int>(cfg.num("n_samples", 800));
    return offcenter_solution(law, prm);
  }
  if (id == "nonphysical") {
    return nonphysical_example(law, cfg.num("h0", 1.0), cfg.num("u_l", -0.5),
                               cfg.num("u_r", 0.5), cfg.num("w0", 1.0), a, b,
                               cfg.num("t_max", 2.0));
  }
  throw ConfigError("unknown scenario id: " + id);
}

// ------------------------------------------------------------- commands

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  double tol = 1e-8;
  std::string times_spec;
  int grid = 101;

  Config config() const {
    if (config_path.empty()) return Config{};
    Config cfg = Config::load(config_path);
    // File-valued keys are resolved relative to the config's directory.
    for (const char* key : {"table_path", "stress_table"}) {
      const auto it = cfg.kv.find(key);
      if (it != cfg.kv.end() && fs::path(it->second).is_relative()) {
        it->second = (fs::path(config_path).parent_path() / it->second)
                         .string();
      }
    }
    return cfg;
  }
  fs::path out(const std::string& name) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  }
  std::vector<double> times(const Config& cfg,
                            const std::string& fallback) const {
    const std::string spec =
        !times_spec.empty() ? times_spec : cfg.str("times", fallback);
    return parse_times(spec);
  }
  int grid_n(const Config& cfg) const {
    const int n = grid != 101 ? grid : static_cast<int>(cfg.num("grid", 101));
    if (n < 2) throw ConfigError("grid must have at least 2 points");
    return n;
  }
  double tolerance(const Config& cfg) const {
    const double t = tol != 1e-8 ? tol : cfg.num("tol", 1e-8);
    if (!(t > 0.0)) throw ConfigError("tol must be positive");
    return t;
  }
};

int cmd_riemann(const GlobalArgs& g) {
  const Config cfg = g.config();
  auto law = gas_law_from_config(cfg);
  const SymState left = {cfg.require("h_l"), cfg.require("u_l")};
  const SymState right = {cfg.require("h_r"), cfg.require("u_r")};
  const WaveFan fan = riemann_solve(law, left, right);
  write_json(g.out("fan.json"), fan_to_json(fan));

  const double a = cfg.num("a", -10.0);
  const double b = cfg.num("b", 10.0);
  PiecewiseSolution sol = fan_solution(law, fan, 0.0, 0.0, a, b);
  const auto times = clip_times(sol, g.times(cfg, "0.25:0.25:1.0"));
  write_profile(sol, g.out("profile.csv"), times, g.grid_n(cfg));
  log_info("riemann: " + std::to_string(fan.waves.size()) + " waves");
  return 0;
}

int cmd_scenario(const std::string& id, const GlobalArgs& g,
                 const std::string& default_times) {
  const Config cfg = g.config();
  PiecewiseSolution sol = build_scenario(id, cfg);
  const auto times = clip_times(sol, g.times(cfg, default_times));
  const double tol = g.tolerance(cfg);
  write_profile(sol, g.out("profile.csv"), times, g.grid_n(cfg));
  write_atoms(sol, g.out("atoms.csv"), times);
  write_norms(sol, g.out("norms.csv"), times, tol);
  write_entropy(sol, g.out("entropy.csv"), times);
  if (sol.shock_curve) {
    Csv csv(g.out("shock_curve.csv"), "z,h,t,x,sigma");
    for (const ShockCurveSample& s : sol.shock_curve->samples) {
      csv.row({fmt(s.z), fmt(s.h), fmt(s.t), fmt(s.x), fmt(s.sigma)});
    }
  }
  return 0;
}

int cmd_verify(const std::string& target, const GlobalArgs& g) {
  Config cfg = g.config();
  std::string id = target;
  if (target.size() > 5 && target.substr(target.size() - 5) == ".json") {
    // Solution descriptor: {"scenario": id, "params": {key: value}}.
    std::ifstream in(target);
    if (!in) throw ConfigError("cannot open solution JSON: " + target);
    nlohmann::json j;
    in >> j;
    if (!j.contains("scenario")) {
      throw ConfigError("solution JSON lacks a scenario id");
    }
    id = j["scenario"].get<std::string>();
    if (j.contains("params")) {
      for (const auto& [key, value] : j["params"].items()) {
        cfg.kv[key] = value.is_string() ? value.get<std::string>()
                                        : fmt(value.get<double>());
      }
    }
  }
  PiecewiseSolution sol = build_scenario(id, cfg);
  const TestFunctionFamily family = default_family(sol);
  const VerificationReport report =
      weakstar_residual(sol, family, g.tolerance(cfg));
  write_json(g.out("report.json"), report.to_json());

  const double rh_threshold = report.threshold;
  const bool rh_pass = report.max_rh_residual <= rh_threshold;
  const bool entropy_pass = report.entropy_violations.empty();
  const bool all_pass = report.equation_pass && rh_pass && entropy_pass &&
                        report.consistent;

  std::ostringstream os;
  os << "scenario: " << id << "\n";
  os << "equation: " << (report.equation_pass ? "PASS" : "FAIL")
     << " (max weak* residual " << fmt(report.max_residual) << ", threshold "
     << fmt(report.threshold) << ", refinement slope "
     << fmt(report.refinement_slope) << ")\n";
  os << "RH: " << (rh_pass ? "PASS" : "FAIL");
  if (!report.rh_residuals.empty()) {
    const auto worst = std::max_element(
        report.rh_residuals.begin(), report.rh_residuals.end(),
        [](const RhResidual& x, const RhResidual& y) {
          return std::max({x.r_speed, x.r_mass, x.r_wx}) <
                 std::max({y.r_speed, y.r_mass, y.r_wx});
        });
    os << " (max residual "
       << fmt(std::max({worst->r_speed, worst->r_mass, worst->r_wx}))
       << " at " << curve_kind_name(worst->kind) << " curve "
       << worst->curve << ", t = " << fmt(worst->t) << ")";
  }
  os << "\n";
  os << "entropy: " << (entropy_pass ? "PASS" : "FAIL") << " ("
     << report.entropy_violations.size() << " violations)\n";
  os << "consistency: " << (report.consistent ? "PASS" : "FAIL") << "\n";
  os << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
  write_text(g.out("summary.txt"), os.str());
  std::cout << os.str();
  return all_pass ? 0 : 2;
}

int cmd_elastic(const GlobalArgs& g) {
  const Config cfg = g.config();
  const std::string family = cfg.str("stress", "power");
  StressLaw law = [&] {
    if (family == "power") {
      return StressLaw::power_saturating(cfg.num("tau_inf", 1.0),
                                         cfg.num("m", 2.0));
    }
    if (family == "table") {
      const std::string path = cfg.str("stress_table");
      if (path.empty()) throw ConfigError("stress = table needs stress_table");
      return StressLaw::from_csv(path);
    }
    throw ConfigError("unknown stress family: " + family);
  }();
  const double lambda = cfg.num("lambda", 2.0);
  const double alpha = cfg.num("alpha", 1.5);
  const double t = cfg.num("t", 1.0);
  const SlicFields fields =
      slic_example_fields(law, lambda, alpha, t, cfg.num("a", -10.0),
                          cfg.num("b", 10.0));
  write_json(g.out("crack_report.json"), crack_report(law, fields));
  log_info("elastic: sigma = " + fmt(fields.crack.sigma));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Measure-valued vacuum solutions of 1-D Lagrangian gas dynamics "
      "and elastodynamics with fracture"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path,
                 "Plain-text key=value run configuration");
  app.add_option("--out-dir", g.out_dir, "Output directory (default .)");
  app.add_option("--tol", g.tol, "Quadrature / verification tolerance");
  app.add_option("--times", g.times_spec,
                 "Time samples: comma list or start:step:end");
  app.add_option("--grid", g.grid, "Spatial sample count per time");

  auto* riemann = app.add_subcommand(
      "riemann", "Riemann problem: profile CSV + wave-fan JSON");
  auto* collapse = app.add_subcommand(
      "collapse", "Compressive vacuum collapse: profile/atoms/norms/entropy");
  auto* offcenter = app.add_subcommand(
      "offcenter", "Off-center collapse with shock-through-rarefaction");
  auto* vrp = app.add_subcommand(
      "vrp", "Riemann problem with an initial vacuum atom");
  auto* verify = app.add_subcommand(
      "verify", "Verification report for a scenario or solution JSON");
  std::string verify_target;
  verify->add_option("target", verify_target,
                     "Scenario id (riemann|vrp|collapse|offcenter|"
                     "nonphysical) or path to a solution descriptor JSON")
      ->required();
  auto* elastic = app.add_subcommand(
      "elastic", "Crack solution report for a stress law");

  // Global flags are accepted after the subcommand name as well.
  for (CLI::App* sub : {riemann, collapse, offcenter, vrp, verify, elastic}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (riemann->parsed()) return cmd_riemann(g);
    if (collapse->parsed())
      return cmd_scenario("collapse", g, "-1.5,-1.0,-0.5,0.5,1.0,1.5");
    if (offcenter->parsed())
      return cmd_scenario("offcenter", g, "1.5,2.0,2.5,3.1");
    if (vrp->parsed())
      return cmd_scenario("vrp", g, "0.1,0.2,0.3,0.4,0.5,0.75");
    if (verify->parsed()) return cmd_verify(verify_target, g);
    if (elastic->parsed()) return cmd_elastic(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
