#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagvac {

struct InvalidConstitutiveLaw : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thermodynamic/kinematic state in symmetric variables.  h = 0 is the
// vacuum; the Riemann invariants are u +- h.
struct SymState {
  double h = 0.0;
  double u = 0.0;
};

struct SymFields {
  double c;    // Lagrangian sound speed
  double v;    // specific volume (+inf at h = 0)
  double p;    // pressure
  double eps;  // specific internal energy
};

// beta = (gamma+1)/(gamma-1); rejects gamma <= 1.
double beta_of_gamma(double gamma);

// Monotone cubic (Fritsch-Carlson) interpolant, used for tabulated laws.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  PchipInterpolant(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
  int find_interval(double x) const;
};

// Constitutive law for the p-system.  Immutable after construction; all
// member functions are pure.
//
// The gamma-law uses the rescaled symmetric closed forms
//   c = h^beta, v = h^(1-beta)/(beta-1),
//   p = h^(1+beta)/(beta+1), eps = h^2/(2(beta+1)),
// by default; raw mode keeps the pressure scale A explicit.
class GasLaw {
 public:
  enum class Kind { GammaLaw, Tabulated };

  static GasLaw gamma_law(double gamma, double A = 1.0, bool rescaled = true);
  // Rows (v, P(v)) with v strictly ascending and P strictly decreasing.
  // The tail P ~ A v^-g is fitted to the last decade of samples unless an
  // explicit tail exponent is supplied.
  static GasLaw tabulated(std::vector<double> v, std::vector<double> P,
                          double tail_exponent = 0.0);

  Kind kind() const { return kind_; }
  bool is_gamma_law() const { return kind_ == Kind::GammaLaw; }
  // Largest h the law can evaluate (+inf for gamma laws).
  double h_max() const;
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }

  // All four symmetric fields at once; v is +inf at h = 0.
  SymFields fields(double h) const;
  double c(double h) const;
  double v(double h) const;
  double p(double h) const;
  double eps(double h) const;

  // h = H(v) = int_v^inf sqrt(-P'(vbar)) dvbar.
  double h_of_v(double v) const;
  // Inverse of the sound speed, c(c_inverse(s)) = s; c_inverse(0) = 0.
  double c_inverse(double speed) const;

  // Physical-variable constitutive data.
  double pressure_of_v(double v) const;
  double sound_speed_of_v(double v) const;  // C(v) = sqrt(-P'(v))
  double energy_of_v(double v) const;       // E(v) = int_v^inf P

 private:
  GasLaw() = default;

  Kind kind_ = Kind::GammaLaw;
  double gamma_ = 0.0;
  double beta_ = 0.0;
  double A_ = 1.0;
  bool rescaled_ = true;
  // Raw-mode scale k of H(v) = k v^-(gamma-1)/2; see h_of_v.
  double hscale_ = 1.0;

  // Tabulated representation.
  PchipInterpolant table_;
  double tail_A_ = 0.0;
  double tail_gamma_ = 0.0;
  double h_at_vmax_ = 0.0;   // H(v_max), below which the tail formula applies
  double eps_at_vmax_ = 0.0; // E(v_max) from the tail
  std::vector<double> hgrid_, vgrid_;  // cached H samples for bracketing
};

}  // namespace lagvac
