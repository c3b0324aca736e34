#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagvac/solution.hpp"

namespace lagvac {

// C^3 compactly supported test profiles: (1 - s^2)^4 on |s| < 1.
struct BumpFn {
  double center = 0.0, width = 1.0;
  double operator()(double x) const;
  double deriv(double x) const;
};

struct WindowFn {
  double t1 = 0.0, t2 = 1.0;
  double operator()(double t) const;
  double deriv(double t) const;
};

struct TestFunctionFamily {
  std::vector<BumpFn> bumps;
  std::vector<WindowFn> windows;
};

// 12 spatial bumps (3 widths x 4 centers straddling the discontinuities)
// and 3 overlapping temporal windows inside the validity interval.
TestFunctionFamily default_family(const PiecewiseSolution& sol);

struct WeakstarEntry {
  int bump, window;
  double r1, r2;  // mass and momentum equation residuals
};

struct RhResidual {
  double t;
  std::size_t curve;
  CurveKind kind;
  double r_speed;  // |X'[u] - [p]|
  double r_mass;   // |[u] - w' + X'[v]|  (X'[v] := 0 at a vacuum)
  double r_wx;     // |w X'|
};

struct EntropyViolation {
  double t;
  EntropyAtom atom;
};

struct EntropyAuditResult {
  std::vector<EntropyViolation> violations;
  double max_interior_residual = 0.0;  // classical equality in smooth parts
};

struct VerificationReport {
  std::vector<WeakstarEntry> residuals;
  double max_residual = 0.0;
  std::vector<double> refinement_tols;
  std::vector<double> refinement_max;
  double refinement_slope = 0.0;  // log-log fit of max residual vs tol
  std::vector<RhResidual> rh_residuals;
  double max_rh_residual = 0.0;
  std::vector<EntropyViolation> entropy_violations;
  bool consistent = true;
  bool equation_pass = false;
  double threshold = 1e-6;
  std::string config_hash;

  nlohmann::json to_json() const;
  std::string summary() const;
};

// Integration-by-parts residuals of both equations over the family, with
// the quadrature tolerance refined (x0.1 per step) to report decay.
VerificationReport weakstar_residual(const PiecewiseSolution& sol,
                                     const TestFunctionFamily& family,
                                     double quad_tol = 1e-8,
                                     int refinements = 3);

// Per curve per time: the three generalized jump conditions, with X', w'
// taken from the solution when exact and by 4th-order differences else.
std::vector<RhResidual> check_generalized_rh(const PiecewiseSolution& sol,
                                             const std::vector<double>& times);

EntropyAuditResult entropy_audit(const PiecewiseSolution& sol,
                                 const std::vector<double>& times);

// Piecewise-constant velocity around a growing interface atom over a
// uniform background: satisfies the equations in the weak* sense but
// fails consistency of the medium (the density does not blow up).
PiecewiseSolution nonphysical_example(std::shared_ptr<const GasLaw> law,
                                      double h0, double u_l, double u_r,
                                      double w0, double a = -10.0,
                                      double b = 10.0, double t_max = 2.0);

// --- 3x3 Euler -------------------------------------------------------

struct PolytropicEos {
  double A = 1.0, gamma = 1.4, c_v = 1.0;
  double pressure(double v, double s) const;
  double energy(double v, double s) const;
};

struct EulerSide {
  double v, u, s;
};

enum class EulerJumpLabel { Shock, Contact, Vacuum };

struct EulerJump {
  std::function<double(double)> X, w;        // w empty: no atom carried
  std::function<double(double)> Xdot, wdot;  // optional exact derivatives
  EulerSide left, right;
};

struct EulerRhRow {
  double t;
  std::size_t jump;
  EulerJumpLabel label;
  double r_mass;      // |[u] - w' + X'[v]|  (vacuum convention as above)
  double r_momentum;  // |X'[u] - [p]|
  double r_energy;    // |X'[u^2/2 + eps] - [u p]|
  double r_wx;        // |w X'|
  double s_production;  // -X'[s]: >= 0 when a crossing particle gains entropy
};

std::vector<EulerRhRow> check_euler_rh(const PolytropicEos& eos,
                                       const std::vector<EulerJump>& jumps,
                                       const std::vector<double>& times);

}  // namespace lagvac
