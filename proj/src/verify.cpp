#include "lagvac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lagvac/measure.hpp"
#include "lagvac/quad.hpp"

namespace lagvac {

namespace {
constexpr double kHuge = 1e300;

double fd4(const std::function<double(double)>& f, double t, double h) {
  return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) /
         (12 * h);
}
}  // namespace

double BumpFn::operator()(double x) const {
  double s = (x - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return q * q * q * q;
}

double BumpFn::deriv(double x) const {
  double s = (x - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return -8.0 * s * q * q * q / width;
}

double WindowFn::operator()(double t) const {
  double s = (2.0 * t - t1 - t2) / (t2 - t1);
  if (std::abs(s) >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return q * q * q * q;
}

double WindowFn::deriv(double t) const {
  double s = (2.0 * t - t1 - t2) / (t2 - t1);
  if (std::abs(s) >= 1.0) return 0.0;
  double q = 1.0 - s * s;
  return -16.0 * s * q * q * q / (t2 - t1);
}

TestFunctionFamily default_family(const PiecewiseSolution& sol) {
  TestFunctionFamily fam;
  // stay inside the first phase: scenario continuations past an event may
  // replace whole wave patterns (documented for the VRP), so the weak*
  // pairing is only meaningful between events
  double T0 = sol.t_min, T1 = sol.t_max;
  for (double e : sol.events)
    if (e > T0 + 1e-12 && e < T1) T1 = std::min(T1, e);
  double L = T1 - T0;
  fam.windows = {{T0 + 0.05 * L, T0 + 0.45 * L},
                 {T0 + 0.30 * L, T0 + 0.70 * L},
                 {T0 + 0.55 * L, T0 + 0.95 * L}};

  // anchor the bumps on the discontinuities at mid-time
  double tm = T0 + 0.5 * L;
  double x0 = 0.5 * (sol.domain_a + sol.domain_b);
  const auto& ph = sol.phase_at(tm);
  if (!ph.curves.empty()) {
    x0 = 0.0;
    for (const auto& c : ph.curves) x0 += c.X(tm);
    x0 /= ph.curves.size();
  }
  double W = 0.5 * std::min(x0 - sol.domain_a, sol.domain_b - x0);
  for (double width : {0.2 * W, 0.4 * W, 0.8 * W})
    for (double off : {-0.4 * W, -0.1 * W, 0.1 * W, 0.4 * W})
      fam.bumps.push_back({x0 + off, width});
  return fam;
}

namespace {

enum class FieldSel { Volume, Velocity, Pressure };

// <field(t), weight> with the spatial integral split at region boundaries;
// atoms contribute w(t)*weight(X(t)) to the volume field only.
double inner_product(const PiecewiseSolution& sol, double t, FieldSel sel,
                     const std::function<double(double)>& weight, double lo,
                     double hi, double tol) {
  const auto& ph = sol.phase_at(t);
  const GasLaw& law = *sol.law;
  double total = 0.0;
  for (const auto& r : ph.regions) {
    double a = std::max({lo, r.xl(t), sol.domain_a});
    double b = std::min({hi, r.xr(t), sol.domain_b});
    if (b <= a) continue;
    auto f = [&](double x) {
      SymState s = r.state(t, x);
      double val = 0.0;
      switch (sel) {
        case FieldSel::Volume: val = law.v(s.h); break;
        case FieldSel::Velocity: val = s.u; break;
        case FieldSel::Pressure: val = law.p(s.h); break;
      }
      return val * weight(x);
    };
    total += integrate_or_throw(f, a, b, tol);
  }
  if (sel == FieldSel::Volume) {
    for (const auto& c : ph.curves) {
      if (!c.w) continue;
      double X = c.X(t);
      if (X >= lo && X <= hi) total += c.w(t) * weight(X);
    }
  }
  return total;
}

struct PairResiduals {
  double r1, r2;
};

PairResiduals weakstar_pair(const PiecewiseSolution& sol, const BumpFn& phi,
                            const WindowFn& eta, double tol) {
  double lo = phi.center - phi.width, hi = phi.center + phi.width;
  auto phi_f = [&phi](double x) { return phi(x); };
  auto dphi_f = [&phi](double x) { return phi.deriv(x); };
  // mass:      int eta' <V,phi> - int eta <u,phi'>
  // momentum:  int eta' <u,phi> + int eta <p,phi'>
  auto g1 = [&](double t) {
    return eta.deriv(t) *
               inner_product(sol, t, FieldSel::Volume, phi_f, lo, hi, tol) -
           eta(t) *
               inner_product(sol, t, FieldSel::Velocity, dphi_f, lo, hi, tol);
  };
  auto g2 = [&](double t) {
    return eta.deriv(t) *
               inner_product(sol, t, FieldSel::Velocity, phi_f, lo, hi, tol) +
           eta(t) *
               inner_product(sol, t, FieldSel::Pressure, dphi_f, lo, hi, tol);
  };
  double r1 = std::abs(integrate_or_throw(g1, eta.t1, eta.t2, tol));
  double r2 = std::abs(integrate_or_throw(g2, eta.t1, eta.t2, tol));
  return {r1, r2};
}

}  // namespace

VerificationReport weakstar_residual(const PiecewiseSolution& sol,
                                     const TestFunctionFamily& family,
                                     double quad_tol, int refinements) {
  for (const auto& b : family.bumps)
    if (b.center - b.width < sol.domain_a || b.center + b.width > sol.domain_b)
      throw std::invalid_argument("bump support leaves the domain");
  for (const auto& w : family.windows)
    if (w.t1 < sol.t_min || w.t2 > sol.t_max || w.t1 >= w.t2)
      throw std::invalid_argument("window outside the validity interval");

  VerificationReport rep;
  double tol = quad_tol * std::pow(10.0, refinements - 1);
  for (int ref = 0; ref < refinements; ++ref, tol /= 10.0) {
    double worst = 0.0;
    std::vector<WeakstarEntry> entries;
    for (size_t bi = 0; bi < family.bumps.size(); ++bi)
      for (size_t wi = 0; wi < family.windows.size(); ++wi) {
        auto pr = weakstar_pair(sol, family.bumps[bi], family.windows[wi],
                                tol);
        entries.push_back({(int)bi, (int)wi, pr.r1, pr.r2});
        worst = std::max({worst, pr.r1, pr.r2});
      }
    rep.refinement_tols.push_back(tol);
    rep.refinement_max.push_back(worst);
    if (ref == refinements - 1) {
      rep.residuals = std::move(entries);
      rep.max_residual = worst;
    }
  }

  if (refinements >= 2) {
    // slope of log(max residual) against log(tolerance)
    double n = refinements, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < refinements; ++i) {
      double x = std::log10(rep.refinement_tols[i]);
      double y = std::log10(std::max(rep.refinement_max[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.refinement_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  // RH, entropy and consistency snapshots at the window midpoints
  std::vector<double> mids;
  for (const auto& w : family.windows) {
    double tm = 0.5 * (w.t1 + w.t2);
    if (!sol.near_event(tm, 1e-6)) mids.push_back(tm);
  }
  rep.rh_residuals = check_generalized_rh(sol, mids);
  for (const auto& r : rep.rh_residuals)
    rep.max_rh_residual =
        std::max({rep.max_rh_residual, r.r_speed, r.r_mass, r.r_wx});
  rep.entropy_violations = entropy_audit(sol, mids).violations;
  // the 1/sqrt(r) divergence schedule is scale-dependent (near a centered
  // wave the density prefactor grows with the wave's age), so accept if any
  // sampled time clears it; a genuinely inconsistent atom fails at all times
  bool any_ok = false;
  for (double tm : mids)
    if (consistency_check(sol.volume_measure(tm)).consistent) any_ok = true;
  rep.consistent = any_ok;

  rep.equation_pass = rep.max_residual <= rep.threshold;
  std::ostringstream cfg;
  cfg << sol.scenario << '|' << family.bumps.size() << 'x'
      << family.windows.size() << '|' << quad_tol << '|' << refinements;
  rep.config_hash = std::to_string(std::hash<std::string>{}(cfg.str()));
  return rep;
}

std::vector<RhResidual> check_generalized_rh(const PiecewiseSolution& sol,
                                             const std::vector<double>& times) {
  std::vector<RhResidual> rows;
  const double hstep = 1e-6;
  for (double t : times) {
    const auto& ph = sol.phase_at(t);
    for (size_t ci = 0; ci < ph.curves.size(); ++ci) {
      const auto& c = ph.curves[ci];
      double X = c.X(t);
      double Xd = c.Xdot ? c.Xdot(t) : fd4(c.X, t, hstep);
      double w = c.w ? c.w(t) : 0.0;
      double wd = 0.0;
      if (c.w) wd = c.wdot ? c.wdot(t) : fd4(c.w, t, hstep);
      auto e = sol.eval(t, X);
      double ju = e.right.u - e.left.u;
      double jp = e.right.p - e.left.p;
      double jv = e.right.v - e.left.v;
      RhResidual r;
      r.t = t;
      r.curve = ci;
      r.kind = c.kind;
      r.r_speed = std::abs(Xd * ju - jp);
      // at a vacuum the adjacent volumes blow up and X' = 0: X'[v] := 0
      double xv = (c.kind == CurveKind::Vacuum) ? 0.0 : Xd * jv;
      r.r_mass = std::abs(ju - wd + xv);
      r.r_wx = std::abs(w * Xd);
      rows.push_back(r);
    }
  }
  return rows;
}

EntropyAuditResult entropy_audit(const PiecewiseSolution& sol,
                                 const std::vector<double>& times) {
  EntropyAuditResult res;
  const GasLaw& law = *sol.law;
  const double ht = 1e-6;
  const double margin = 1e-3;
  for (double t : times) {
    for (const auto& a : entropy_production(sol, t))
      if (a.mass > 1e-12) res.violations.push_back({t, a});

    // classical equality (u^2/2 + eps)_t + (u p)_x = 0 in region interiors
    const auto& ph = sol.phase_at(t);
    if (t - 2 * ht <= ph.t0 || t + 2 * ht >= ph.t1) continue;
    for (const auto& r : ph.regions) {
      double a = std::max(r.xl(t), sol.domain_a);
      double b = std::min(r.xr(t), sol.domain_b);
      if (b - a < 10 * margin) continue;
      for (double frac : {0.3, 0.5, 0.7}) {
        double x = a + frac * (b - a);
        if (x - a < margin || b - x < margin) continue;
        if (law.v(r.state(t, x).h) > 1e3) continue;  // near-vacuum edge
        double hx = margin / 10.0;
        auto G = [&](double tt, double xx) {
          SymState s = r.state(tt, xx);
          return 0.5 * s.u * s.u + law.eps(s.h);
        };
        auto F = [&](double tt, double xx) {
          SymState s = r.state(tt, xx);
          return s.u * law.p(s.h);
        };
        double dG = fd4([&](double tt) { return G(tt, x); }, t, ht);
        double dF = fd4([&](double xx) { return F(t, xx); }, x, hx);
        res.max_interior_residual =
            std::max(res.max_interior_residual, std::abs(dG + dF));
      }
    }
  }
  return res;
}

PiecewiseSolution nonphysical_example(std::shared_ptr<const GasLaw> law,
                                      double h0, double u_l, double u_r,
                                      double w0, double a, double b,
                                      double t_max) {
  if (!(h0 > 0.0) || !(w0 >= 0.0))
    throw std::invalid_argument("need h0 > 0 and w0 >= 0");
  double du = u_r - u_l;
  PiecewiseSolution sol;
  sol.law = law;
  sol.domain_a = a;
  sol.domain_b = b;
  sol.scenario = "nonphysical";
  sol.t_min = 0.0;
  sol.t_max = (du < 0.0) ? std::min(t_max, -w0 / du) : t_max;
  sol.params = {{"h0", h0}, {"u_l", u_l}, {"u_r", u_r}, {"w0", w0}};

  PiecewiseSolution::Phase ph;
  ph.t0 = sol.t_min;
  ph.t1 = sol.t_max;
  auto fixed = [](double x) {
    return std::function<double(double)>([x](double) { return x; });
  };
  ph.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h0, u_l}, fixed(-kHuge), fixed(0.0)));
  ph.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h0, u_r}, fixed(0.0), fixed(kHuge)));
  PiecewiseSolution::Curve atom;
  atom.kind = CurveKind::Vacuum;
  atom.X = fixed(0.0);
  atom.w = [w0, du](double t) { return w0 + du * t; };
  atom.wdot = [du](double) { return du; };
  atom.Xdot = [](double) { return 0.0; };
  ph.curves.push_back(atom);
  sol.phases.push_back(std::move(ph));
  return sol;
}

double PolytropicEos::pressure(double v, double s) const {
  return A * std::pow(v, -gamma) * std::exp(s / c_v);
}

double PolytropicEos::energy(double v, double s) const {
  // direct form stays finite (0) on a vacuum side where v = inf
  return A / (gamma - 1.0) * std::pow(v, 1.0 - gamma) * std::exp(s / c_v);
}

std::vector<EulerRhRow> check_euler_rh(const PolytropicEos& eos,
                                       const std::vector<EulerJump>& jumps,
                                       const std::vector<double>& times) {
  std::vector<EulerRhRow> rows;
  const double hstep = 1e-6;
  const double tiny = 1e-12;
  for (double t : times) {
    for (size_t ji = 0; ji < jumps.size(); ++ji) {
      const auto& j = jumps[ji];
      double Xd = j.Xdot ? j.Xdot(t) : fd4(j.X, t, hstep);
      double w = j.w ? j.w(t) : 0.0;
      double wd = 0.0;
      if (j.w) wd = j.wdot ? j.wdot(t) : fd4(j.w, t, hstep);
      const EulerSide &L = j.left, &R = j.right;
      double pL = eos.pressure(L.v, L.s), pR = eos.pressure(R.v, R.s);
      double eL = eos.energy(L.v, L.s), eR = eos.energy(R.v, R.s);

      EulerRhRow r;
      r.t = t;
      r.jump = ji;
      double ju = R.u - L.u;
      bool has_atom = j.w && w > tiny;
      if (has_atom) {
        r.label = EulerJumpLabel::Vacuum;
        r.r_mass = std::abs(ju - wd);  // X'[v] := 0 across a vacuum
      } else if (std::abs(ju) <= tiny) {
        r.label = EulerJumpLabel::Contact;
        r.r_mass = std::abs(ju - wd + Xd * (R.v - L.v));
      } else {
        r.label = EulerJumpLabel::Shock;
        r.r_mass = std::abs(ju - wd + Xd * (R.v - L.v));
      }
      r.r_momentum = std::abs(Xd * ju - (pR - pL));
      r.r_energy = std::abs(Xd * (0.5 * R.u * R.u + eR -
                                  (0.5 * L.u * L.u + eL)) -
                            (R.u * pR - L.u * pL));
      r.r_wx = std::abs(w * Xd);
      r.s_production = -Xd * (R.s - L.s);
      rows.push_back(r);
    }
  }
  return rows;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["max_residual"] = max_residual;
  j["threshold"] = threshold;
  j["equation_pass"] = equation_pass;
  j["consistent"] = consistent;
  j["refinement"] = nlohmann::json::array();
  for (size_t i = 0; i < refinement_tols.size(); ++i)
    j["refinement"].push_back(
        {{"tol", refinement_tols[i]}, {"max_residual", refinement_max[i]}});
  j["refinement_slope"] = refinement_slope;
  j["residuals"] = nlohmann::json::array();
  for (const auto& e : residuals)
    j["residuals"].push_back(
        {{"bump", e.bump}, {"window", e.window}, {"r1", e.r1}, {"r2", e.r2}});
  j["rh_residuals"] = nlohmann::json::array();
  for (const auto& r : rh_residuals) {
    const char* kind = r.kind == CurveKind::Vacuum
                           ? "vacuum"
                           : (r.kind == CurveKind::Shock ? "shock" : "contact");
    j["rh_residuals"].push_back({{"t", r.t},
                                 {"curve", r.curve},
                                 {"kind", kind},
                                 {"r_speed", r.r_speed},
                                 {"r_mass", r.r_mass},
                                 {"r_wx", r.r_wx}});
  }
  j["max_rh_residual"] = max_rh_residual;
  j["entropy_violations"] = nlohmann::json::array();
  for (const auto& v : entropy_violations)
    j["entropy_violations"].push_back(
        {{"t", v.t}, {"x", v.atom.location}, {"mass", v.atom.mass}});
  return j;
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  os << "weak* residual: max " << max_residual << " (threshold " << threshold
     << ") -> " << (equation_pass ? "PASS" : "FAIL") << "\n";
  os << "refinement slope: " << refinement_slope << "\n";
  os << "generalized RH: max residual " << max_rh_residual << "\n";
  os << "entropy violations: " << entropy_violations.size() << "\n";
  os << "consistency of the medium: " << (consistent ? "PASS" : "FAIL")
     << "\n";
  return os.str();
}

}  // namespace lagvac
