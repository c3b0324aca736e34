#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lagvac/gas_law.hpp"
#include "lagvac/solution.hpp"
#include "json.hpp"

namespace lagvac {

enum class WaveFamily { Backward, Forward, Stationary };
enum class WaveKind { Shock, Rarefaction, Compression, Vacuum };

struct InvalidWave : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Wave {
  WaveFamily family;
  WaveKind kind;
  SymState left, right;  // states immediately left/right in x
  double s_lo, s_hi;     // speed interval (equal for shocks and vacuum)
  double center_t = 0.0, center_x = 0.0;
  double atom_rate = 0.0;  // dw/dt for vacuum waves, else 0
  // Defined inside (s_lo, s_hi) for simple waves; empty otherwise.
  std::function<SymState(double t, double x)> profile;
};

struct WaveFan {
  // Constant states from left to right, one more than waves (except the
  // trivial fan, which has a single state and no waves).
  std::vector<SymState> states;
  std::vector<Wave> waves;
  bool has_vacuum = false;
};

// Shock speed and velocity jump from the two h values via the jump
// conditions; works for any law.  Requires h_behind > h_ahead > 0.
struct ShockJump {
  double sigma;    // positive speed magnitude
  double du;       // u_behind - u_ahead (negative)
};
ShockJump shock_jump(const GasLaw& law, double h_ahead, double h_behind);

// z-parametrized shock for gamma laws (z = h_behind/h_ahead > 1).
// Ahead state is left of a backward shock, right of a forward one.
Wave shock_from_ratio(std::shared_ptr<const GasLaw> law, double h_ahead,
                      double z, WaveFamily family, double u_ahead = 0.0);

Wave rarefaction_wave(std::shared_ptr<const GasLaw> law, double h_ahead,
                      double h_behind, WaveFamily family, double u_ahead,
                      double center_t = 0.0, double center_x = 0.0);

// Self-similar solution of the Riemann problem, waves centered at (0,0).
// Produces the vacuum fan when u_r - u_l >= h_l + h_r.
WaveFan riemann_solve(std::shared_ptr<const GasLaw> law, SymState left,
                      SymState right);

// Riemann problem with an initial vacuum atom of weight w0 >= 0 at x=0.
// For w0 > 0 the first phase expands both constant states into the vacuum;
// when the atom collapses in finite time the post-collapse fan is the
// classical Riemann fan issued from the collapse point.
PiecewiseSolution vacuum_riemann_solve(std::shared_ptr<const GasLaw> law,
                                       SymState left, SymState right,
                                       double w0, double domain_a = -10.0,
                                       double domain_b = 10.0,
                                       WaveFan* fan_out = nullptr);

// Solution built from a fan centered at (tc, xc); single phase on
// (tc, t_max].
PiecewiseSolution fan_solution(std::shared_ptr<const GasLaw> law,
                               const WaveFan& fan, double tc, double xc,
                               double domain_a, double domain_b,
                               double w0 = 0.0);

nlohmann::json fan_to_json(const WaveFan& fan);

// gamma-law shock kinematics helpers (z > 1, beta > 1)
double q_exponent(double n, double z);          // (1 - z^-n)/n
double shock_r(double beta, double z);          // sqrt(q_{b+1} q_{b-1})
double shock_s(double beta, double z);          // sqrt(q_{b+1}/q_{b-1})

}  // namespace lagvac
