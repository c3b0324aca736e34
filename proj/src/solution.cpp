#include "lagvac/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagvac {

PiecewiseSolution::Region PiecewiseSolution::Region::constant(
    std::shared_ptr<const GasLaw> law, SymState s,
    std::function<double(double)> xl, std::function<double(double)> xr) {
  Region r;
  r.xl = std::move(xl);
  r.xr = std::move(xr);
  r.state = [s](double, double) { return s; };
  double h = s.h;
  r.make_piece = [law, h](double, double x0, double x1) {
    return Piece::constant(x0, x1, law->v(h));
  };
  return r;
}

PiecewiseSolution::Region PiecewiseSolution::Region::centered_fan(
    std::shared_ptr<const GasLaw> law, double tc, double xc, double u_ref,
    double h_ref, double u_sign, std::function<double(double)> xl,
    std::function<double(double)> xr) {
  Region r;
  r.xl = std::move(xl);
  r.xr = std::move(xr);
  r.state = [law, tc, xc, u_ref, h_ref, u_sign](double t, double x) {
    double speed = std::abs(x - xc) / std::abs(t - tc);
    double h = law->c_inverse(speed);
    return SymState{h, u_ref + u_sign * (h - h_ref)};
  };
  r.make_piece = [law, tc, xc](double t, double x0, double x1) {
    return Piece::simple_wave(x0, x1, law, xc, std::abs(t - tc));
  };
  return r;
}

const PiecewiseSolution::Phase& PiecewiseSolution::phase_at(double t) const {
  if (phases.empty()) throw std::logic_error("solution has no phases");
  if (t < t_min || t > t_max)
    throw std::domain_error("time outside the solution's validity interval");
  for (const auto& ph : phases) {
    if (t >= ph.t0 && t < ph.t1) return ph;
  }
  // t == t_max falls through; hand back the last phase.
  return phases.back();
}

EvalResult PiecewiseSolution::eval(double t, double x) const {
  const Phase& ph = phase_at(t);
  double span = std::max(std::abs(domain_b - domain_a), 1.0);
  double tol = 1e-12 * span;

  auto side = [&](const Region& r, int idx, double xq) {
    SymState s = r.state(t, xq);
    SideState out;
    out.h = s.h;
    out.u = s.u;
    out.p = law->p(s.h);
    out.v = law->v(s.h);
    return std::pair<SideState, int>(out, idx);
  };

  EvalResult res;
  for (const auto& c : ph.curves) {
    if (std::abs(x - c.X(t)) <= tol) {
      res.on_curve = true;
      break;
    }
  }

  int n = static_cast<int>(ph.regions.size());
  int iL = -1, iR = -1;
  for (int i = 0; i < n; ++i) {
    double a = ph.regions[i].xl(t), b = ph.regions[i].xr(t);
    if (x > a + tol && x < b - tol) {
      iL = iR = i;
      break;
    }
    if (std::abs(x - b) <= tol) {
      iL = i;
      iR = (i + 1 < n) ? i + 1 : i;
      break;
    }
    if (std::abs(x - a) <= tol) {
      iL = (i > 0) ? i - 1 : i;
      iR = i;
      break;
    }
  }
  if (iL < 0) throw std::domain_error("point outside the solution domain");

  // One-sided limits: each region's state formula extends continuously to
  // its closure, so evaluate at the region's own boundary ordinate (exact
  // even where c^-1 has infinite slope at a vacuum edge).
  auto [sl, il] =
      side(ph.regions[iL], iL, (iL == iR) ? x : ph.regions[iL].xr(t));
  auto [sr, ir] =
      side(ph.regions[iR], iR, (iL == iR) ? x : ph.regions[iR].xl(t));
  res.left = sl;
  res.right = sr;
  res.region_left = il;
  res.region_right = ir;
  return res;
}

RadonMeasure PiecewiseSolution::volume_measure(double t) const {
  const Phase& ph = phase_at(t);
  RadonMeasure mu;
  mu.a = domain_a;
  mu.b = domain_b;
  for (const auto& r : ph.regions) {
    double x0 = std::max(r.xl(t), domain_a);
    double x1 = std::min(r.xr(t), domain_b);
    if (!(x1 > x0)) continue;
    mu.pieces.push_back(r.make_piece(t, x0, x1));
  }
  std::vector<Atom> atoms;
  for (const auto& c : ph.curves) {
    double xa = c.X(t);
    if (!c.w || xa < domain_a || xa > domain_b) continue;
    atoms.push_back({xa, c.w(t)});
  }
  mu = with_atoms(mu, atoms);
  mu.validate();
  return mu;
}

bool PiecewiseSolution::near_event(double t, double tol) const {
  double scale = std::max(1.0, std::max(std::abs(t_min), std::abs(t_max)));
  for (double e : events)
    if (std::abs(t - e) <= tol * scale) return true;
  return false;
}

std::vector<EntropyAtom> entropy_production(const PiecewiseSolution& sol,
                                            double t) {
  if (sol.near_event(t))
    throw EventTimeError(
        "entropy production is undefined at an interaction time");
  const auto& ph = sol.phase_at(t);
  std::vector<EntropyAtom> out;
  for (const auto& c : ph.curves) {
    double X = c.X(t);
    EvalResult e = sol.eval(t, X);
    double xdot;
    if (c.Xdot) {
      xdot = c.Xdot(t);
    } else {
      double dt = 1e-6 * std::max(1.0, std::abs(t));
      xdot = (c.X(t + dt) - c.X(t - dt)) / (2 * dt);
    }
    const auto& L = e.left;
    const auto& R = e.right;
    double epsL = sol.law->eps(L.h), epsR = sol.law->eps(R.h);
    double jump_energy = (0.5 * R.u * R.u + epsR) - (0.5 * L.u * L.u + epsL);
    double jump_up = R.u * R.p - L.u * L.p;
    out.push_back({X, c.kind, -xdot * jump_energy + jump_up});
  }
  return out;
}

}  // namespace lagvac
