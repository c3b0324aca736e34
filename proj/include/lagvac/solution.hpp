#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lagvac/gas_law.hpp"
#include "lagvac/measure.hpp"

namespace lagvac {

enum class CurveKind { Shock, Vacuum, Contact };

class ShockCurve;  // scenarios.hpp

struct SideState {
  double h, u, p, v;
};

struct EvalResult {
  SideState left;
  SideState right;
  bool on_curve = false;
  int region_left = -1;
  int region_right = -1;
};

struct EventTimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time-parametrized exact solution: ordered regions with (h,u) evaluators
// separated by discontinuity curves, grouped into phases between
// interaction events.  Immutable after construction; evaluation is pure.
class PiecewiseSolution {
 public:
  struct Region {
    std::function<double(double)> xl, xr;  // boundaries as functions of t
    std::function<SymState(double, double)> state;
    // Density piece for V(t) restricted to [x0,x1].
    std::function<Piece(double t, double x0, double x1)> make_piece;

    static Region constant(std::shared_ptr<const GasLaw> law, SymState s,
                           std::function<double(double)> xl,
                           std::function<double(double)> xr);
    // Centered simple wave: h = c^-1(|x - xc| / |t - tc|),
    // u = u_ref + u_sign * (h - h_ref).
    static Region centered_fan(std::shared_ptr<const GasLaw> law, double tc,
                               double xc, double u_ref, double h_ref,
                               double u_sign,
                               std::function<double(double)> xl,
                               std::function<double(double)> xr);
  };

  struct Curve {
    CurveKind kind = CurveKind::Shock;
    std::function<double(double)> X;
    std::function<double(double)> w;
    // Exact derivatives when the construction knows them; empty otherwise.
    std::function<double(double)> Xdot;
    std::function<double(double)> wdot;
  };

  struct Phase {
    double t0, t1;
    std::vector<Region> regions;  // ordered left to right, partitioning
    std::vector<Curve> curves;
  };

  std::shared_ptr<const GasLaw> law;
  std::vector<Phase> phases;
  std::vector<double> events;  // interaction times interior to valid_time
  double t_min = 0.0, t_max = 0.0;
  double domain_a = 0.0, domain_b = 0.0;
  std::string scenario;  // "riemann" | "vrp" | "collapse" | "offcenter" | ...
  std::map<std::string, double> params;
  std::shared_ptr<const ShockCurve> shock_curve;  // offcenter only

  const Phase& phase_at(double t) const;

  // Both one-sided limits at (t,x); on_curve is set when x sits on a
  // discontinuity curve of the active phase.
  EvalResult eval(double t, double x) const;

  // V(t) as a Radon measure on [domain_a, domain_b].
  RadonMeasure volume_measure(double t) const;

  bool near_event(double t, double tol = 1e-9) const;
};

// Entropy production entries, one per discontinuity curve.
struct EntropyAtom {
  double location;
  CurveKind kind;
  double mass;  // -X'([u^2/2]+[eps]) + [u p]; <= 0 for admissible curves
};

std::vector<EntropyAtom> entropy_production(const PiecewiseSolution& sol,
                                            double t);

}  // namespace lagvac
