#include "lagvac/gas_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lagvac/quad.hpp"

namespace lagvac {

double beta_of_gamma(double gamma) {
  if (!(gamma > 1.0)) {
    throw InvalidConstitutiveLaw("gamma-law requires gamma > 1");
  }
  return (gamma + 1.0) / (gamma - 1.0);
}

// ---------------------------------------------------------------------------
// PchipInterpolant

PchipInterpolant::PchipInterpolant(std::vector<double> x,
                                   std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw InvalidConstitutiveLaw("tabulated law needs at least two samples");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw InvalidConstitutiveLaw("table abscissae must be strictly ascending");
    }
  }
  // Fritsch-Carlson slopes: monotone wherever the data are.
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  d_[0] = delta[0];
  d_[n - 1] = delta[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
}

int PchipInterpolant::find_interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  int i = static_cast<int>(it - x_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  return i;
}

double PchipInterpolant::operator()(double x) const {
  const int i = find_interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double PchipInterpolant::derivative(double x) const {
  const int i = find_interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

// ---------------------------------------------------------------------------
// GasLaw

GasLaw GasLaw::gamma_law(double gamma, double A, bool rescaled) {
  if (!(A > 0.0)) throw InvalidConstitutiveLaw("pressure scale A must be > 0");
  GasLaw law;
  law.kind_ = Kind::GammaLaw;
  law.gamma_ = gamma;
  law.beta_ = beta_of_gamma(gamma);
  law.rescaled_ = rescaled;
  if (rescaled) {
    // P(v) = A_eff v^-gamma reproduces the normalized h-forms exactly.
    law.A_ = std::pow(law.beta_ - 1.0, -gamma) / (law.beta_ + 1.0);
  } else {
    law.A_ = A;
  }
  law.hscale_ = 2.0 * std::sqrt(law.A_ * gamma) / (gamma - 1.0);
  return law;
}

GasLaw GasLaw::tabulated(std::vector<double> v, std::vector<double> P,
                         double tail_exponent) {
  const size_t n = v.size();
  if (n < 4 || P.size() != n) {
    throw InvalidConstitutiveLaw("tabulated law needs at least four (v,P) rows");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0) || !(P[i] > 0.0)) {
      throw InvalidConstitutiveLaw("tabulated v and P must be positive");
    }
    if (i > 0 && !(P[i] < P[i - 1])) {
      throw InvalidConstitutiveLaw("P must be strictly decreasing in v");
    }
  }

  GasLaw law;
  law.kind_ = Kind::Tabulated;
  law.table_ = PchipInterpolant(v, P);

  // Fit P ~ A v^-g over the last decade of samples (log-log least squares).
  double g = tail_exponent;
  double tail_A = 0.0;
  {
    const double vcut = v.back() / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < n; ++i) {
      if (v[i] < vcut && i + 2 < n) continue;
      const double lx = std::log(v[i]);
      const double ly = std::log(P[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (g <= 0.0) g = -slope;
    tail_A = P.back() * std::pow(v.back(), g);
  }
  if (!(g > 1.0)) {
    throw InvalidConstitutiveLaw(
        "tabulated tail decays too slowly: H(v) integral diverges");
  }
  law.tail_gamma_ = g;
  law.tail_A_ = tail_A;

  const double vmax = v.back();
  law.h_at_vmax_ =
      std::sqrt(tail_A * g) * (2.0 / (g - 1.0)) * std::pow(vmax, -(g - 1.0) / 2.0);
  law.eps_at_vmax_ = tail_A * std::pow(vmax, 1.0 - g) / (g - 1.0);

  // Cache cumulative H on the sample grid for fast bracketing later.
  law.vgrid_ = v;
  law.hgrid_.assign(n, 0.0);
  law.hgrid_[n - 1] = law.h_at_vmax_;
  for (size_t i = n - 1; i > 0; --i) {
    auto C = [&law](double vv) { return law.sound_speed_of_v(vv); };
    law.hgrid_[i - 1] =
        law.hgrid_[i] + integrate_or_throw(C, v[i - 1], v[i], 1e-13);
  }
  return law;
}

double GasLaw::h_max() const {
  if (kind_ == Kind::GammaLaw) return std::numeric_limits<double>::infinity();
  return hgrid_.front();
}

double GasLaw::pressure_of_v(double v) const {
  if (!(v > 0.0)) throw std::domain_error("pressure_of_v: v must be > 0");
  if (kind_ == Kind::GammaLaw) return A_ * std::pow(v, -gamma_);
  if (v >= table_.x_max()) return tail_A_ * std::pow(v, -tail_gamma_);
  if (v < table_.x_min()) {
    throw std::domain_error("pressure_of_v: v below tabulated range");
  }
  return table_(v);
}

double GasLaw::sound_speed_of_v(double v) const {
  if (!(v > 0.0)) throw std::domain_error("sound_speed_of_v: v must be > 0");
  if (kind_ == Kind::GammaLaw) {
    return std::sqrt(A_ * gamma_) * std::pow(v, -(gamma_ + 1.0) / 2.0);
  }
  if (v >= table_.x_max()) {
    return std::sqrt(tail_A_ * tail_gamma_) *
           std::pow(v, -(tail_gamma_ + 1.0) / 2.0);
  }
  if (v < table_.x_min()) {
    throw std::domain_error("sound_speed_of_v: v below tabulated range");
  }
  const double dP = table_.derivative(v);
  if (!(dP < 0.0)) {
    throw InvalidConstitutiveLaw("P'(v) >= 0 inside table: not hyperbolic");
  }
  return std::sqrt(-dP);
}

double GasLaw::energy_of_v(double v) const {
  if (!(v > 0.0)) throw std::domain_error("energy_of_v: v must be > 0");
  if (kind_ == Kind::GammaLaw) {
    return A_ * std::pow(v, 1.0 - gamma_) / (gamma_ - 1.0);
  }
  if (v >= table_.x_max()) {
    return tail_A_ * std::pow(v, 1.0 - tail_gamma_) / (tail_gamma_ - 1.0);
  }
  auto P = [this](double vv) { return pressure_of_v(vv); };
  return eps_at_vmax_ + integrate_or_throw(P, v, table_.x_max(), 1e-12);
}

double GasLaw::h_of_v(double v) const {
  if (!(v > 0.0)) throw std::domain_error("h_of_v: v must be > 0");
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return std::pow((beta_ - 1.0) * v, -1.0 / (beta_ - 1.0));
    return hscale_ * std::pow(v, -(gamma_ - 1.0) / 2.0);
  }
  if (v >= table_.x_max()) {
    return std::sqrt(tail_A_ * tail_gamma_) * (2.0 / (tail_gamma_ - 1.0)) *
           std::pow(v, -(tail_gamma_ - 1.0) / 2.0);
  }
  if (v < table_.x_min()) {
    throw std::domain_error("h_of_v: v below tabulated range");
  }
  // H(v) = H(grid node above v) + int_v^node C.
  auto it = std::upper_bound(vgrid_.begin(), vgrid_.end(), v);
  const size_t j = static_cast<size_t>(it - vgrid_.begin());
  auto C = [this](double vv) { return sound_speed_of_v(vv); };
  return hgrid_[j] + integrate_or_throw(C, v, vgrid_[j], 1e-13);
}

namespace {
// Bracketed bisection for a strictly monotone function; unconditionally
// safe near the h = 0 singularity.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double fhi, double rtol = 1e-14) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= rtol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

double GasLaw::v(double h) const {
  if (h < 0.0) throw std::domain_error("v(h): h must be >= 0");
  if (h == 0.0) return std::numeric_limits<double>::infinity();
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return std::pow(h, 1.0 - beta_) / (beta_ - 1.0);
    return std::pow(hscale_, beta_ - 1.0) * std::pow(h, 1.0 - beta_);
  }
  if (h <= h_at_vmax_) {
    // Invert the asymptotic tail of H exactly.
    const double g = tail_gamma_;
    const double k = std::sqrt(tail_A_ * g) * 2.0 / (g - 1.0);
    return std::pow(h / k, -2.0 / (g - 1.0));
  }
  if (h > hgrid_.front()) {
    throw std::domain_error("v(h): h above tabulated range");
  }
  auto f = [this, h](double vv) { return h_of_v(vv) - h; };
  auto it = std::upper_bound(hgrid_.rbegin(), hgrid_.rend(), h);
  size_t jr = hgrid_.size() - 1 - static_cast<size_t>(it - hgrid_.rbegin());
  const double lo = vgrid_[jr];
  const double hi = vgrid_[jr + 1];
  return bisect(f, lo, hi, f(lo), f(hi));
}

double GasLaw::c(double h) const {
  if (h < 0.0) throw std::domain_error("c(h): h must be >= 0");
  if (h == 0.0) return 0.0;
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return std::pow(h, beta_);
    return std::sqrt(A_ * gamma_) * std::pow(hscale_, -beta_) *
           std::pow(h, beta_);
  }
  return sound_speed_of_v(v(h));
}

double GasLaw::p(double h) const {
  if (h < 0.0) throw std::domain_error("p(h): h must be >= 0");
  if (h == 0.0) return 0.0;
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return std::pow(h, 1.0 + beta_) / (beta_ + 1.0);
    return A_ * std::pow(hscale_, -(beta_ + 1.0)) * std::pow(h, beta_ + 1.0);
  }
  return pressure_of_v(v(h));
}

double GasLaw::eps(double h) const {
  if (h < 0.0) throw std::domain_error("eps(h): h must be >= 0");
  if (h == 0.0) return 0.0;
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return h * h / (2.0 * (beta_ + 1.0));
    const double vv = v(h);
    return p(h) * vv / (gamma_ - 1.0);
  }
  return energy_of_v(v(h));
}

SymFields GasLaw::fields(double h) const {
  return SymFields{c(h), v(h), p(h), eps(h)};
}

double GasLaw::c_inverse(double speed) const {
  if (speed < 0.0) throw std::domain_error("c_inverse: speed must be >= 0");
  if (speed == 0.0) return 0.0;
  if (kind_ == Kind::GammaLaw) {
    if (rescaled_) return std::pow(speed, 1.0 / beta_);
    return hscale_ * std::pow(speed / std::sqrt(A_ * gamma_), 1.0 / beta_);
  }
  // C(v) is strictly decreasing; bisect on v then map through H.
  const double c_at_vmax = sound_speed_of_v(table_.x_max());
  if (speed <= c_at_vmax) {
    const double g = tail_gamma_;
    const double vv =
        std::pow(tail_A_ * g / (speed * speed), 1.0 / (g + 1.0));
    return h_of_v(vv);
  }
  auto f = [this, speed](double vv) { return sound_speed_of_v(vv) - speed; };
  const double lo = table_.x_min();
  const double hi = table_.x_max();
  const double flo = f(lo);
  if (flo < 0.0) throw std::domain_error("c_inverse: speed above table range");
  return h_of_v(bisect(f, lo, hi, flo, f(hi)));
}

}  // namespace lagvac
