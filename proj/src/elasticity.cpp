#include "lagvac/elasticity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lagvac/quad.hpp"

namespace lagvac {

namespace {

constexpr double kAdmissibilityTol = 1e-10;

// Linear-tail extrapolation of f(u)/u from the two largest samples.
// With f(u) ~ L u + c the ratio is L + c/u, and eliminating c gives the
// secant slope (f(u2) - f(u1)) / (u2 - u1).
double tail_slope(double u1, double f1, double u2, double f2) {
  return (f2 - f1) / (u2 - u1);
}

bool monotone_trend(double r1, double r2, double r3) {
  return (r1 >= r2 && r2 >= r3) || (r1 <= r2 && r2 <= r3);
}

}  // namespace

StressLaw StressLaw::power_saturating(double tau_inf, double m) {
  if (!(tau_inf > 0.0)) {
    throw InvalidStressLaw("power-saturating stress requires tau_inf > 0");
  }
  if (!(m > 1.0)) {
    throw InvalidStressLaw("power-saturating stress requires m > 1");
  }
  StressLaw law;
  law.kind_ = Kind::PowerSaturating;
  law.tau_inf_ = tau_inf;
  law.m_ = m;
  law.u0_ = 1.0;
  law.L_tau_ = 0.0;
  law.L_W_ = tau_inf;
  law.u_min_ = 0.0;
  law.u_max_ = std::numeric_limits<double>::infinity();
  return law;
}

StressLaw StressLaw::tabulated(std::vector<double> u, std::vector<double> tau) {
  if (u.size() != tau.size() || u.size() < 4) {
    throw InvalidStressLaw("tabulated stress needs >= 4 (u, tau) rows");
  }
  const std::size_t n = u.size();
  if (!(u.front() > 0.0)) {
    throw InvalidStressLaw("strain samples must be positive");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(u[i] > u[i - 1])) {
      throw InvalidStressLaw("strain samples must be strictly ascending");
    }
    if (!(tau[i] > tau[i - 1])) {
      throw InvalidStressLaw("stress samples must be strictly increasing");
    }
  }
  // Softening: sampled secant slopes must not increase.
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) {
    const double slope = (tau[i] - tau[i - 1]) / (u[i] - u[i - 1]);
    if (slope > prev_slope * (1.0 + 1e-12) + 1e-14) {
      throw InvalidStressLaw("stress samples are not softening");
    }
    prev_slope = slope;
  }

  StressLaw law;
  law.kind_ = Kind::Tabulated;
  law.u_min_ = u.front();
  law.u_max_ = u.back();
  law.grid_u_ = u;
  law.table_ = PchipInterpolant(u, tau);

  // Zero-stress strain: bracket a sign change in the samples if present,
  // otherwise anchor the energy normalization at the smallest sample.
  if (tau.front() < 0.0 && tau.back() > 0.0) {
    double lo = u.front(), hi = u.back();
    for (std::size_t i = 1; i < n; ++i) {
      if (tau[i] >= 0.0) {
        lo = u[i - 1];
        hi = u[i];
        break;
      }
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (law.table_(mid) < 0.0 ? lo : hi) = mid;
    }
    law.u0_ = 0.5 * (lo + hi);
  } else {
    law.u0_ = u.front();
  }

  // Cumulative stored energy at the nodes, W(u0) = 0.
  law.cum_energy_.assign(n, 0.0);
  const PchipInterpolant& tab = law.table_;
  auto integrand = [&tab](double s) { return tab(s); };
  auto seg_tol = [&](double lo, double hi) {
    const double scale = std::max(std::abs(tab(lo)), std::abs(tab(hi)));
    return 1e-13 * std::max(1.0, scale * (hi - lo));
  };
  double acc = -integrate_or_throw(integrand, u.front(), law.u0_,
                                   seg_tol(u.front(), law.u0_));
  law.cum_energy_[0] = acc;
  for (std::size_t i = 1; i < n; ++i) {
    acc += integrate_or_throw(integrand, u[i - 1], u[i],
                              seg_tol(u[i - 1], u[i]));
    law.cum_energy_[i] = acc;
  }

  // Tail limits from the three largest samples.
  const double u1 = u[n - 3], u2 = u[n - 2], u3 = u[n - 1];
  const double t1 = tau[n - 3], t2 = tau[n - 2], t3 = tau[n - 1];
  law.L_tau_ = tail_slope(u2, t2, u3, t3);
  if (!monotone_trend(t1 / u1, t2 / u2, t3 / u3)) {
    law.indeterminate_ = true;
  }
  if (std::abs(law.L_tau_) > kAdmissibilityTol) {
    // tau grows linearly, so W grows quadratically: L_W = +infinity.
    law.L_W_infinite_ = true;
    law.L_W_ = std::numeric_limits<double>::infinity();
    law.tau_inf_ = std::numeric_limits<double>::infinity();
  } else {
    // Saturating tail: tau(u) ~ T - c/u on the last two rows, and
    // L_W = lim W(u)/u = lim tau(u) = tau_inf.
    const double c = (t3 - t2) / (1.0 / u2 - 1.0 / u3);
    law.tau_inf_ = t3 + c / u3;
    law.L_W_ = law.tau_inf_;
  }
  return law;
}

StressLaw StressLaw::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidStressLaw("cannot open stress CSV: " + path);
  }
  std::vector<double> u, tau;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw InvalidStressLaw("malformed stress CSV row: " + line);
    }
    try {
      u.push_back(std::stod(a));
      tau.push_back(std::stod(b));
    } catch (const std::exception&) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw InvalidStressLaw("malformed stress CSV row: " + line);
    }
    first = false;
  }
  return tabulated(std::move(u), std::move(tau));
}

double StressLaw::tau(double u) const {
  if (kind_ == Kind::PowerSaturating) {
    if (!(u > 0.0)) {
      throw std::domain_error("stress law: strain must be positive");
    }
    return tau_inf_ * (1.0 - std::pow(u, -m_));
  }
  if (u < u_min_ || u > u_max_) {
    throw std::domain_error("stress law: strain outside the sampled domain");
  }
  return table_(u);
}

double StressLaw::tau_prime(double u) const {
  if (kind_ == Kind::PowerSaturating) {
    if (!(u > 0.0)) {
      throw std::domain_error("stress law: strain must be positive");
    }
    return tau_inf_ * m_ * std::pow(u, -m_ - 1.0);
  }
  if (u < u_min_ || u > u_max_) {
    throw std::domain_error("stress law: strain outside the sampled domain");
  }
  return table_.derivative(u);
}

double StressLaw::energy(double u) const {
  if (kind_ == Kind::PowerSaturating) {
    if (!(u > 0.0)) {
      throw std::domain_error("stress law: strain must be positive");
    }
    return tau_inf_ *
           ((u - 1.0) + (std::pow(u, 1.0 - m_) - 1.0) / (m_ - 1.0));
  }
  if (u < u_min_ || u > u_max_) {
    throw std::domain_error("stress law: strain outside the sampled domain");
  }
  const auto it =
      std::upper_bound(grid_u_.begin(), grid_u_.end(), u) - grid_u_.begin();
  const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
      0, it - 1));
  const PchipInterpolant& tab = table_;
  const double tol =
      1e-13 * std::max(1.0, std::abs(tab(u)) * (u - grid_u_[i]));
  return cum_energy_[i] +
         integrate_or_throw([&tab](double s) { return tab(s); }, grid_u_[i],
                            u, tol);
}

AtomicExtension extend_stress_atomic(const StressLaw& law,
                                     const std::vector<Atom>& atoms) {
  AtomicExtension out;
  for (const Atom& a : atoms) {
    if (!(a.w > 0.0)) {
      throw std::invalid_argument("strain atom weights must be positive");
    }
    if (law.L_tau() != 0.0) {
      out.atoms.push_back({a.x, law.L_tau() * a.w});
    }
  }
  return out;
}

AtomicExtension extend_energy_atomic(const StressLaw& law,
                                     const std::vector<Atom>& atoms) {
  AtomicExtension out;
  for (const Atom& a : atoms) {
    if (!(a.w > 0.0)) {
      throw std::invalid_argument("strain atom weights must be positive");
    }
  }
  if (law.energy_limit_infinite()) {
    out.infinite = !atoms.empty();
    return out;
  }
  for (const Atom& a : atoms) {
    if (law.L_W() != 0.0) {
      out.atoms.push_back({a.x, law.L_W() * a.w});
    }
  }
  return out;
}

CrackSolution crack_solve(const StressLaw& law, double lambda, double alpha) {
  if (!(alpha > 0.0) || !(alpha < lambda)) {
    throw InvalidCrackConfiguration(
        "crack configuration requires 0 < alpha < lambda");
  }
  const double tl = law.tau(lambda);
  const double ta = law.tau(alpha);
  if (!(tl > ta)) {
    throw NonHyperbolicJump("jump requires tau(lambda) > tau(alpha)");
  }

  CrackSolution cs;
  cs.lambda = lambda;
  cs.alpha = alpha;
  cs.sigma = std::sqrt((tl - ta) / (lambda - alpha));
  cs.Y0 = cs.sigma * (lambda - alpha);

  const double mean = 0.5 * (tl + ta);
  const double sigma = cs.sigma;
  const double theta_tol =
      1e-12 * std::max(1.0, (tl - ta) * (lambda - alpha));
  cs.theta = sigma * integrate_or_throw(
                         [&law, mean](double s) { return mean - law.tau(s); },
                         alpha, lambda, theta_tol);
  cs.theta_algebraic =
      sigma * (0.5 * cs.Y0 * cs.Y0 + law.energy(alpha) - law.energy(lambda)) +
      ta * cs.Y0;
  const double scale = std::max(1.0, std::abs(cs.theta));
  if (std::abs(cs.theta - cs.theta_algebraic) > 1e-10 * scale) {
    throw std::runtime_error(
        "entropy-production forms disagree beyond tolerance");
  }
  cs.crack_mass = 2.0 * cs.Y0 * (law.tau_inf() - ta);
  cs.energy_gap = 2.0 * (cs.theta + cs.Y0 * (law.tau_inf() - ta));
  return cs;
}

AdmissibilityVerdict crack_weakstar_admissible(const StressLaw& law) {
  AdmissibilityVerdict v;
  v.L_tau = law.L_tau();
  v.indeterminate = law.limits_indeterminate();
  v.admissible = std::abs(v.L_tau) <= kAdmissibilityTol;
  return v;
}

double SlicFields::velocity(double x) const {
  std::size_t j = 0;
  while (j < v_breaks.size() && x >= v_breaks[j]) ++j;
  return v_values[j];
}

SlicFields slic_example_fields(const StressLaw& law, double lambda,
                               double alpha, double t, double a, double b) {
  if (!(t > 0.0)) {
    throw std::domain_error("crack snapshot requires t > 0");
  }
  SlicFields f;
  f.t = t;
  f.crack = crack_solve(law, lambda, alpha);
  const double st = f.crack.sigma * t;
  const double Y0 = f.crack.Y0;
  if (!(a < -st) || !(b > st)) {
    throw std::invalid_argument("domain must contain (-sigma t, sigma t)");
  }

  std::vector<Piece> dens = {Piece::constant(a, -st, lambda),
                             Piece::constant(-st, st, alpha),
                             Piece::constant(st, b, lambda)};
  f.U = with_atoms(iota(a, b, dens), {{0.0, 2.0 * t * Y0}});

  const double tl = law.tau(lambda);
  const double ta = law.tau(alpha);
  std::vector<Piece> stress = {Piece::constant(a, -st, tl),
                               Piece::constant(-st, st, ta),
                               Piece::constant(st, b, tl)};
  f.tau_hat = iota(a, b, stress);
  f.tau_hat.atoms = extend_stress_atomic(law, f.U.atoms).atoms;
  f.tau_hat.validate();

  f.v_breaks = {-st, 0.0, st};
  f.v_values = {0.0, -Y0, Y0, 0.0};

  f.entropy_atoms = {{-st, f.crack.theta},
                     {0.0, f.crack.crack_mass},
                     {st, f.crack.theta}};

  // Generalized jump conditions w' - X'[u] = [v], -X'[v] = [tau(u)] at the
  // three curves; [g] = g(right) - g(left).
  const double sigma = f.crack.sigma;
  auto residual = [](double wdot, double Xdot, double ju, double jv,
                     double jtau, double x, const char* kind) {
    CurveResidual r;
    r.x = x;
    r.kind = kind;
    r.r_kinematic = std::abs(wdot - Xdot * ju - jv);
    r.r_momentum = std::abs(-Xdot * jv - jtau);
    return r;
  };
  f.rh_residuals = {
      residual(0.0, -sigma, alpha - lambda, -Y0 - 0.0, ta - tl, -st, "shock"),
      residual(2.0 * Y0, 0.0, 0.0, Y0 - (-Y0), 0.0, 0.0, "crack"),
      residual(0.0, sigma, lambda - alpha, 0.0 - Y0, tl - ta, st, "shock")};
  f.rh_max_residual = 0.0;
  for (const CurveResidual& r : f.rh_residuals) {
    f.rh_max_residual =
        std::max({f.rh_max_residual, r.r_kinematic, r.r_momentum});
  }
  return f;
}

double slic_energy(const StressLaw& law, const SlicFields& f, double lo,
                   double hi) {
  const double st = f.crack.sigma * f.t;
  if (!(lo <= -st) || !(hi >= st)) {
    throw std::invalid_argument("interval must contain (-sigma t, sigma t)");
  }
  if (law.energy_limit_infinite()) {
    return std::numeric_limits<double>::infinity();
  }
  const double Wl = law.energy(f.crack.lambda);
  const double Wa = law.energy(f.crack.alpha);
  return Wl * ((-st - lo) + (hi - st)) +
         (0.5 * f.crack.Y0 * f.crack.Y0 + Wa) * 2.0 * st +
         law.L_W() * 2.0 * f.t * f.crack.Y0;
}

double slic_energy_crack_free(const StressLaw& law, const SlicFields& f,
                              double lo, double hi) {
  return law.energy(f.crack.lambda) * (hi - lo);
}

namespace {

// Smooth compactly supported profile (1 - s^2)^4 on |s| < 1.
double bump8(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return q * q * q * q;
}

double bump8_prime(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return -8.0 * s * q * q * q;
}

struct BumpE {
  double center = 0.0;
  double width = 1.0;
  double operator()(double x) const { return bump8((x - center) / width); }
  double deriv(double x) const {
    return bump8_prime((x - center) / width) / width;
  }
};

// Integral of a function against phi over [x0, x1] clipped to the bump's
// support, with an optional list of interior split points.
double against(const std::function<double(double)>& f, const BumpE& phi,
               double x0, double x1, const std::vector<double>& splits,
               double tol) {
  double lo = std::max(x0, phi.center - phi.width);
  double hi = std::min(x1, phi.center + phi.width);
  if (!(hi > lo)) return 0.0;
  std::vector<double> pts = {lo, hi};
  for (double s : splits) {
    if (s > lo && s < hi) pts.push_back(s);
  }
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += integrate(f, pts[i - 1], pts[i], tol).value;
  }
  return total;
}

}  // namespace

double elastic_weakstar_residual(const StressLaw& law, double lambda,
                                 double alpha, double t1, double t2, double a,
                                 double b, double quad_tol) {
  if (!(0.0 < t1 && t1 < t2)) {
    throw std::invalid_argument("window requires 0 < t1 < t2");
  }
  const CrackSolution cs = crack_solve(law, lambda, alpha);
  if (!(a < -cs.sigma * t2) || !(b > cs.sigma * t2)) {
    throw std::invalid_argument("domain must contain the shocks on [t1, t2]");
  }
  const double tl = law.tau(lambda);
  const double ta = law.tau(alpha);
  const double Ltau = law.L_tau();

  // Bump supports must stay inside (a, b): truncating the constant outer
  // state at a boundary where phi != 0 would fabricate a spurious flux.
  const double span = std::min(-a, b);
  std::vector<BumpE> bumps;
  for (double wfrac : {0.2, 0.45, 0.8}) {
    const double width = wfrac * span;
    const double room = span - width;
    for (double cfrac : {0.0, 0.3, -0.35}) {
      bumps.push_back({cfrac * room, width});
    }
  }

  const double tol_inner = quad_tol / 10.0;
  const double mid = 0.5 * (t1 + t2);
  const double half = 0.5 * (t2 - t1);
  auto eta = [&](double t) { return bump8((t - mid) / half); };
  auto eta_prime = [&](double t) {
    return bump8_prime((t - mid) / half) / half;
  };

  double worst = 0.0;
  for (const BumpE& phi : bumps) {
    // <U(t), phi>, <v(t), phi>, <v(t), phi'> and <tau-hat(U(t)), phi'>.
    auto pair_U = [&](double t) {
      const double st = cs.sigma * t;
      auto f = [&phi](double x) { return phi(x); };
      return lambda * against(f, phi, a, -st, {}, tol_inner) +
             alpha * against(f, phi, -st, st, {0.0}, tol_inner) +
             lambda * against(f, phi, st, b, {}, tol_inner) +
             2.0 * t * cs.Y0 * phi(0.0);
    };
    auto pair_v = [&](double t) {
      const double st = cs.sigma * t;
      auto f = [&phi](double x) { return phi(x); };
      return -cs.Y0 * against(f, phi, -st, 0.0, {}, tol_inner) +
             cs.Y0 * against(f, phi, 0.0, st, {}, tol_inner);
    };
    auto pair_v_dx = [&](double t) {
      // v is piecewise constant, so the pairing against phi' telescopes.
      const double st = cs.sigma * t;
      return -cs.Y0 * (phi(0.0) - phi(-st)) + cs.Y0 * (phi(st) - phi(0.0));
    };
    auto pair_tau_dx = [&](double t) {
      const double st = cs.sigma * t;
      return tl * (phi(-st) - phi(a)) + ta * (phi(st) - phi(-st)) +
             tl * (phi(b) - phi(st)) + Ltau * 2.0 * t * cs.Y0 * phi.deriv(0.0);
    };

    auto outer = [&](const std::function<double(double)>& g) {
      return integrate(g, t1, t2, quad_tol).value;
    };
    const double r1 =
        std::abs(outer([&](double t) { return eta_prime(t) * pair_U(t); }) -
                 outer([&](double t) { return eta(t) * pair_v_dx(t); }));
    const double r2 =
        std::abs(outer([&](double t) { return eta_prime(t) * pair_v(t); }) -
                 outer([&](double t) { return eta(t) * pair_tau_dx(t); }));
    worst = std::max({worst, r1, r2});
  }
  return worst;
}

nlohmann::json crack_report(const StressLaw& law, const SlicFields& fields) {
  const CrackSolution& cs = fields.crack;
  const AdmissibilityVerdict verdict = crack_weakstar_admissible(law);
  nlohmann::json residuals = nlohmann::json::array();
  for (const CurveResidual& r : fields.rh_residuals) {
    residuals.push_back({{"x", r.x},
                         {"kind", r.kind},
                         {"kinematic", r.r_kinematic},
                         {"momentum", r.r_momentum}});
  }
  return {{"lambda", cs.lambda},
          {"alpha", cs.alpha},
          {"sigma", cs.sigma},
          {"Y0", cs.Y0},
          {"theta", cs.theta},
          {"theta_algebraic", cs.theta_algebraic},
          {"crack_mass", cs.crack_mass},
          {"energy_gap", cs.energy_gap},
          {"t", fields.t},
          {"admissibility",
           {{"admissible", verdict.admissible},
            {"L_tau", verdict.L_tau},
            {"indeterminate", verdict.indeterminate}}},
          {"rh_max_residual", fields.rh_max_residual},
          {"residuals", residuals}};
}

}  // namespace lagvac
