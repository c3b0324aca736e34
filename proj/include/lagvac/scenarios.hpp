#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "lagvac/waves.hpp"

namespace lagvac {

struct NotACollapse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedConfiguration : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Two centered compressions focusing on a point vacuum at (0,0); for t > 0
// the outgoing classical Riemann fan.  Pre-collapse edge velocities:
// u_l = u_minus + h_l, u_r = u_plus - h_r; atom weight w(t) = du*t, t < 0.
PiecewiseSolution collapse_solution(std::shared_ptr<const GasLaw> law,
                                    double h_l, double h_r, double u_minus,
                                    double u_plus, double a = -10.0,
                                    double b = 10.0);

// Exact ||V(t)|| for collapse and vacuum-Riemann solutions; throws
// UnsupportedConfiguration for any other scenario kind.
double collapse_norm_closed_form(const PiecewiseSolution& sol, double t);
double norm_closed_form(const PiecewiseSolution& sol, double t);

// |v(h)c(h) - int_0^{c(h)} v(c^-1(y)) dy + h|: integration-by-parts
// identity behind the norm closed forms; ~0 for every valid law.
double vint_identity(const GasLaw& law, double h);

struct ShockCurveSample {
  double z, h, t, x, sigma;
};

// A shock climbing through a centered rarefaction (gamma law): states are
// parametrized by the ahead-to-behind ratio z = h_b/h, with
// h * g(z) = A constant, g(z) = 1 + z + z^{(beta+1)/2} r(z).
// Time decreases in z; z -> inf is the emergence (collapse) point.
class ShockCurve {
 public:
  std::shared_ptr<const GasLaw> law;
  double beta = 0.0;
  double A = 0.0;
  double z_hash = 0.0, t_hash = 0.0, h_hash = 0.0;
  double z_max = 0.0;
  double t_end = 0.0, x_end = 0.0;  // limit point as z -> inf
  std::vector<ShockCurveSample> samples;  // ascending in z from z_hash

  double g(double z) const;
  double h_of_z(double z) const { return A / g(z); }
  double h_behind(double z) const { return z * h_of_z(z); }
  double sigma_of_z(double z) const;
  double t_of_z(double z) const;
  double z_of_t(double t) const;
  double x_of_z(double z) const { return law->c(h_of_z(z)) * t_of_z(z); }

  // Multiply every time (and x, which is linear in t) by the factor.
  void rescale_time(double factor);

 private:
  friend ShockCurve shock_through_rarefaction(std::shared_ptr<const GasLaw>,
                                              double, double, double, double,
                                              int);
  PchipInterpolant I_of_logz_;  // log t(z)/t_hash, exact at sample nodes
};

ShockCurve shock_through_rarefaction(std::shared_ptr<const GasLaw> law,
                                     double h_hash, double z_hash,
                                     double t_hash, double z_max = 1e6,
                                     int n_samples = 800);

struct OffcenterParams {
  double h_l = 1.0, h_r = 1.0;
  double u_minus = 1.0, u_plus = -1.0;
  double focus_t = 1.0;     // compression focus time
  double collapse_t = 1.0;  // must coincide with focus_t
  double a = -10.0, b = 10.0;
  double z_max = 1e6;
  int n_samples = 800;
};

// Off-center variant: a focusing forward compression on the left, a
// centered forward rarefaction on the right, vacuum atom between them.
// After the collapse the shock climbs the rarefaction (ShockCurve) with a
// backward rarefaction and a transmitted backward compression behind it.
PiecewiseSolution offcenter_solution(std::shared_ptr<const GasLaw> law,
                                     const OffcenterParams& prm);

// The shock curve the offcenter solution was built around.
const ShockCurve& offcenter_shock_curve(const PiecewiseSolution& sol);

}  // namespace lagvac
