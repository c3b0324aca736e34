#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lagvac/gas_law.hpp"
#include "lagvac/measure.hpp"

#include "json.hpp"

namespace lagvac {

struct InvalidStressLaw : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Crack configuration with alpha >= lambda (no jump to resolve).
struct InvalidCrackConfiguration : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// tau(lambda) <= tau(alpha): the jump carries no real shock speed.
struct NonHyperbolicJump : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Constitutive stress law tau(u) for 1-D elastodynamics in Lagrangian
// coordinates, u > 0 the strain.  Hyperbolic (tau' > 0) and softening
// (tau'' <= 0) on its domain.  The stored energy W is normalized so that
// W(u0) = 0 at the zero-stress strain u0, and W diverges as u -> 0+.
//
// The linear-growth limits
//   L_tau = lim tau(u)/u,  L_W = lim W(u)/u   (u -> infinity)
// control the atomic extensions of stress and energy: a strain atom
// w delta_x carries stress L_tau * w and energy L_W * w.  Softening makes
// both limits finite (L_W possibly +infinity only for super-linear W).
//
// Immutable after construction; all member functions are pure.
class StressLaw {
 public:
  enum class Kind { PowerSaturating, Tabulated };

  // tau(u) = tau_inf * (1 - u^-m), m > 1.  Closed forms:
  //   u0 = 1, W(u) = tau_inf * [(u - 1) + (u^(1-m) - 1)/(m - 1)],
  //   L_tau = 0, L_W = tau_inf.
  static StressLaw power_saturating(double tau_inf, double m);

  // Sampled rows (u, tau(u)) with u strictly ascending and positive.
  // Requires tau strictly increasing (hyperbolicity) and sampled slopes
  // non-increasing (softening).  L_tau, L_W, and tau_inf are estimated
  // from the three largest samples by linear-tail extrapolation; if the
  // sampled ratios are not monotone the limits are flagged indeterminate.
  static StressLaw tabulated(std::vector<double> u, std::vector<double> tau);

  // CSV rows "u,tau", ascending in u; a non-numeric first line is
  // treated as a header.
  static StressLaw from_csv(const std::string& path);

  Kind kind() const { return kind_; }

  double tau(double u) const;
  double tau_prime(double u) const;
  // Stored energy W(u) = int_{u0}^{u} tau(s) ds, W(u0) = 0.
  double energy(double u) const;

  double u0() const { return u0_; }
  double tau_inf() const { return tau_inf_; }
  double L_tau() const { return L_tau_; }
  double L_W() const { return L_W_; }
  // True iff L_W = +infinity (super-linear stored energy).
  bool energy_limit_infinite() const { return L_W_infinite_; }
  // True iff the tabulated tail trend was not monotone and the limit
  // estimates are unreliable.
  bool limits_indeterminate() const { return indeterminate_; }

  // Sampled domain for tabulated laws; (0, +inf) for the built-in family.
  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }

 private:
  StressLaw() = default;

  Kind kind_ = Kind::PowerSaturating;
  double tau_inf_ = 0.0;
  double m_ = 0.0;
  double u0_ = 1.0;
  double L_tau_ = 0.0;
  double L_W_ = 0.0;
  bool L_W_infinite_ = false;
  bool indeterminate_ = false;
  double u_min_ = 0.0;
  double u_max_ = 0.0;

  PchipInterpolant table_;          // tau(u)
  std::vector<double> grid_u_;      // table nodes
  std::vector<double> cum_energy_;  // W at table nodes
};

// Purely atomic measure produced by a constitutive extension.  The
// infinite flag marks the L_W = +infinity case, where strain atoms carry
// unbounded energy and no finite measure exists.
struct AtomicExtension {
  std::vector<Atom> atoms;
  bool infinite = false;
};

// tau-hat on the atomic part: each weight is scaled by L_tau.  L_tau = 0
// (every saturating stress) yields the empty list.  Weights must be > 0.
AtomicExtension extend_stress_atomic(const StressLaw& law,
                                     const std::vector<Atom>& atoms);

// W-hat on the atomic part: weights scaled by L_W, or the infinite flag
// when L_W = +infinity.  Weights must be > 0.
AtomicExtension extend_energy_atomic(const StressLaw& law,
                                     const std::vector<Atom>& atoms);

// Self-similar shearing crack: outer strain lambda, crack-face strain
// alpha < lambda, shock speed sigma and face velocity Y0 fixed by the
// Rankine-Hugoniot conditions
//   Y0 = sigma (lambda - alpha),  sigma^2 (lambda - alpha) = [tau].
// theta is the entropy-production mass of each of the +-sigma shocks;
// the crack atom at the origin produces 2 Y0 (tau_inf - tau(alpha)) >= 0,
// so growing cracks are never entropic.  energy_gap is the per-unit-time
// excess of the crack solution's energy over the crack-free motion.
struct CrackSolution {
  double lambda = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double Y0 = 0.0;
  double theta = 0.0;            // quadrature of the integral form
  double theta_algebraic = 0.0;  // sigma(Y0^2/2 + W(a) - W(l)) + tau(a) Y0
  double crack_mass = 0.0;       // 2 Y0 (tau_inf - tau(alpha))
  double energy_gap = 0.0;       // 2 (theta + Y0 (tau_inf - tau(alpha)))
};

CrackSolution crack_solve(const StressLaw& law, double lambda, double alpha);

// A law supports weak* crack solutions iff its stress saturates,
// |L_tau| <= 1e-10.  For tabulated laws the verdict inherits the
// indeterminate flag of the tail estimate.
struct AdmissibilityVerdict {
  bool admissible = false;
  double L_tau = 0.0;
  bool indeterminate = false;
};

AdmissibilityVerdict crack_weakstar_admissible(const StressLaw& law);

// Residuals of the generalized jump conditions
//   w'(t) - X'(t) [u] = [v],   -X'(t) [v] = [tau(u)]
// at one discontinuity curve of the crack solution.
struct CurveResidual {
  double x = 0.0;          // curve position at the snapshot time
  std::string kind;        // "shock" or "crack"
  double r_kinematic = 0.0;
  double r_momentum = 0.0;
};

// Snapshot of the self-similar crack motion at time t on [a, b]:
//   U(t) = 2 t Y0 delta_0 + lambda / alpha / lambda density,
//   v(t) = 0 / -Y0 / +Y0 / 0 across {-sigma t, 0, sigma t},
// plus the stress extension tau-hat(U), the entropy-production atoms,
// and the jump-condition residuals at all three curves.
struct SlicFields {
  double t = 0.0;
  CrackSolution crack;
  RadonMeasure U;
  RadonMeasure tau_hat;
  std::vector<double> v_breaks;  // {-sigma t, 0, sigma t}
  std::vector<double> v_values;  // {0, -Y0, Y0, 0}
  std::vector<Atom> entropy_atoms;  // {(-st, theta), (0, mass), (st, theta)}
  std::vector<CurveResidual> rh_residuals;
  double rh_max_residual = 0.0;

  double velocity(double x) const;
};

SlicFields slic_example_fields(const StressLaw& law, double lambda,
                               double alpha, double t, double a = -10.0,
                               double b = 10.0);

// Total energy eta-hat([lo, hi]) of the crack motion, valid for
// [lo, hi] containing (-sigma t, sigma t); +infinity when L_W is.
double slic_energy(const StressLaw& law, const SlicFields& f, double lo,
                   double hi);
// Energy of the crack-free motion y = lambda x on the same interval.
double slic_energy_crack_free(const StressLaw& law, const SlicFields& f,
                              double lo, double hi);

// Weak* residual of the crack motion on a bump x window test family:
//   R1 = | int eta' <U, phi> - int eta <v, phi'> |,
//   R2 = | int eta' <v, phi> - int eta <tau-hat(U), phi'> |,
// where <tau-hat(U), phi'> includes the atomic term L_tau w(t) phi'(0).
// Returns the max over an internally built family of bumps straddling
// the crack and the shocks.  Vanishes with quadrature tolerance iff
// L_tau = 0; otherwise carries a non-decaying O(L_tau w) term.
double elastic_weakstar_residual(const StressLaw& law, double lambda,
                                 double alpha, double t1, double t2,
                                 double a = -10.0, double b = 10.0,
                                 double quad_tol = 1e-9);

// Crack report: all CrackSolution fields, the admissibility verdict,
// and the jump-condition residual table.
nlohmann::json crack_report(const StressLaw& law, const SlicFields& fields);

}  // namespace lagvac
