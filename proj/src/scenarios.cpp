#include "lagvac/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lagvac/quad.hpp"

namespace lagvac {

namespace {
constexpr double kHuge = 1e300;

double bisect_mono(const std::function<double(double)>& f, double lo,
                   double hi, double rtol = 1e-14) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
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

std::function<double(double)> fixed(double x) {
  return [x](double) { return x; };
}
}  // namespace

// ---------------------------------------------------------------------------
// collapse

PiecewiseSolution collapse_solution(std::shared_ptr<const GasLaw> law,
                                    double h_l, double h_r, double u_minus,
                                    double u_plus, double a, double b) {
  const double du = u_plus - u_minus;
  if (!(du < 0.0))
    throw NotACollapse("vacuum collapse requires u_plus < u_minus");
  if (!(h_l > 0.0) || !(h_r >= h_l))
    throw std::invalid_argument("collapse data requires h_r >= h_l > 0");
  if (!(a < 0.0) || !(b > 0.0))
    throw std::invalid_argument("domain must contain the collapse point");

  const double u_l = u_minus + h_l;
  const double u_r = u_plus - h_r;
  const double cl = law->c(h_l), cr = law->c(h_r);

  PiecewiseSolution sol;
  sol.law = law;
  sol.domain_a = a;
  sol.domain_b = b;
  sol.scenario = "collapse";
  sol.t_min = std::max(a / cl, -b / cr);

  PiecewiseSolution::Phase pre;
  pre.t0 = sol.t_min;
  pre.t1 = 0.0;
  pre.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_l, u_l}, fixed(-kHuge), [cl](double t) { return cl * t; }));
  pre.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, u_l, h_l, +1.0, [cl](double t) { return cl * t; },
      fixed(0.0)));
  pre.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, u_r, h_r, -1.0, fixed(0.0),
      [cr](double t) { return -cr * t; }));
  pre.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_r, u_r}, [cr](double t) { return -cr * t; }, fixed(kHuge)));
  PiecewiseSolution::Curve vac;
  vac.kind = CurveKind::Vacuum;
  vac.X = fixed(0.0);
  vac.w = [du](double t) { return du * t; };
  vac.wdot = [du](double) { return du; };
  vac.Xdot = [](double) { return 0.0; };
  pre.curves.push_back(vac);
  sol.phases.push_back(std::move(pre));

  WaveFan fan = riemann_solve(law, {h_l, u_l}, {h_r, u_r});
  PiecewiseSolution post = fan_solution(law, fan, 0.0, 0.0, a, b);
  sol.phases.push_back(post.phases.front());
  sol.t_max = post.t_max;
  sol.events.push_back(0.0);

  sol.params = {{"h_l", h_l},     {"h_r", h_r}, {"u_minus", u_minus},
                {"u_plus", u_plus}, {"du", du},   {"u_l", u_l},
                {"u_r", u_r},     {"norm_slope_post", post.params["norm_slope"]}};
  if (!fan.waves.empty()) {
    const SymState mid = fan.waves.front().right;
    sol.params["h_m"] = mid.h;
    sol.params["u_m"] = mid.u;
    for (const auto& w : fan.waves) {
      bool is_shock = (w.kind == WaveKind::Shock);
      if (w.family == WaveFamily::Backward) {
        sol.params["left_is_shock"] = is_shock ? 1.0 : 0.0;
        if (is_shock) sol.params["sigma_l"] = -w.s_lo;
      } else if (w.family == WaveFamily::Forward) {
        sol.params["right_is_shock"] = is_shock ? 1.0 : 0.0;
        if (is_shock) sol.params["sigma_r"] = w.s_lo;
      }
    }
  }
  return sol;
}

double norm_closed_form(const PiecewiseSolution& sol, double t) {
  if (t < sol.t_min || t > sol.t_max)
    throw std::domain_error("time outside the solution's validity interval");
  const GasLaw& law = *sol.law;
  const double alen = -sol.domain_a;  // domain is [-a, b] with a > 0
  const double blen = sol.domain_b;
  auto P = [&](const char* k) { return sol.params.at(k); };

  if (sol.scenario == "collapse") {
    const double base = blen * law.v(P("h_r")) + alen * law.v(P("h_l"));
    if (t < 0.0) return base + t * (P("du") - P("h_l") - P("h_r"));
    double slope = 0.0;
    // per-family slope: sigma*(v(h_m)-v(h_ahead)) for shocks,
    // h_ahead - h_m for rarefactions
    const double vm = law.v(P("h_m"));
    if (sol.params.count("left_is_shock"))
      slope += (P("left_is_shock") != 0.0)
                   ? P("sigma_l") * (vm - law.v(P("h_l")))
                   : (P("h_l") - P("h_m"));
    if (sol.params.count("right_is_shock"))
      slope += (P("right_is_shock") != 0.0)
                   ? P("sigma_r") * (vm - law.v(P("h_r")))
                   : (P("h_r") - P("h_m"));
    return base + t * slope;
  }

  if (sol.scenario == "vrp") {
    if (P("w0") == 0.0)
      return blen * law.v(P("h_right")) + alen * law.v(P("h_left")) +
             t * P("norm_slope");
    const double base = blen * law.v(P("h_r")) + alen * law.v(P("h_l"));
    const double T =
        sol.params.count("T") ? P("T") : std::numeric_limits<double>::infinity();
    if (t < T) return base + P("w0") + t * (P("du") + P("h_l") + P("h_r"));
    return base + (t - T) * P("norm_slope_post");
  }

  throw UnsupportedConfiguration(
      "closed-form norms exist for collapse and vrp scenarios only");
}

double collapse_norm_closed_form(const PiecewiseSolution& sol, double t) {
  if (sol.scenario != "collapse")
    throw UnsupportedConfiguration("not a collapse solution");
  return norm_closed_form(sol, t);
}

double vint_identity(const GasLaw& law, double h) {
  if (h < 0.0) throw std::domain_error("vint_identity: h must be >= 0");
  if (h == 0.0) return 0.0;
  const double ch = law.c(h);
  const double integral = integrate_or_throw(
      [&law](double y) { return law.v(law.c_inverse(y)); }, 0.0, ch, 1e-10);
  return std::abs(law.v(h) * ch - integral + h);
}

// ---------------------------------------------------------------------------
// shock through rarefaction

double ShockCurve::g(double z) const {
  return 1.0 + z + std::pow(z, (beta + 1.0) / 2.0) * shock_r(beta, z);
}

double ShockCurve::sigma_of_z(double z) const {
  return law->c(h_of_z(z)) * std::pow(z, (beta + 1.0) / 2.0) *
         shock_s(beta, z);
}

double ShockCurve::t_of_z(double z) const {
  z = std::clamp(z, z_hash, z_max);
  return t_hash * std::exp(I_of_logz_(std::log(z - 1.0)));
}

double ShockCurve::z_of_t(double t) const {
  // t(z) strictly decreasing; clamp outside the sampled range.
  if (t >= samples.front().t) return z_hash;
  if (t <= samples.back().t) return z_max;
  const double target = std::log(t / t_hash);
  double wlo = std::log(z_hash - 1.0), whi = std::log(z_max - 1.0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (wlo + whi);
    if (I_of_logz_(mid) > target)
      wlo = mid;
    else
      whi = mid;
    if (whi - wlo < 1e-15 * std::max(std::abs(wlo), std::abs(whi)) + 1e-300)
      break;
  }
  return 1.0 + std::exp(0.5 * (wlo + whi));
}

void ShockCurve::rescale_time(double factor) {
  t_hash *= factor;
  t_end *= factor;
  x_end *= factor;
  for (auto& s : samples) {
    s.t *= factor;
    s.x *= factor;
  }
}

namespace {
// dI/dz for the shock-through-rarefaction time integral.
double curve_integrand(double beta, double z) {
  const double p = (beta + 1.0) / 2.0;
  const double q1 = q_exponent(beta + 1.0, z);
  const double q2 = q_exponent(beta - 1.0, z);
  const double F = std::pow(z, p) * std::sqrt(q1 * q2);
  const double Fp =
      F * (p / z +
           0.5 * (std::pow(z, -beta - 2.0) / q1 + std::pow(z, -beta) / q2));
  const double g = 1.0 + z + F;
  const double gp = 1.0 + Fp;
  // z^p s(z) - 1 > 0, evaluated as expm1 to survive the sonic limit z -> 1
  const double lax = std::expm1(p * std::log(z) + 0.5 * (std::log(q1) - std::log(q2)));
  return -beta * gp / (g * lax);
}
}  // namespace

ShockCurve shock_through_rarefaction(std::shared_ptr<const GasLaw> law,
                                     double h_hash, double z_hash,
                                     double t_hash, double z_max,
                                     int n_samples) {
  if (!law->is_gamma_law())
    throw UnsupportedConfiguration(
        "the z-parametrized shock curve requires a gamma law");
  if (!(h_hash > 0.0) || !(z_hash > 1.0) || !(t_hash > 0.0) ||
      !(z_max > z_hash) || n_samples < 8)
    throw std::invalid_argument("invalid shock curve parameters");

  ShockCurve c;
  c.law = law;
  c.beta = law->beta();
  c.z_hash = z_hash;
  c.t_hash = t_hash;
  c.h_hash = h_hash;
  c.z_max = z_max;
  c.A = h_hash * c.g(z_hash);

  const double beta = c.beta;
  auto f = [beta](double z) { return curve_integrand(beta, z); };

  // Nodes uniform in log(z-1): resolves both the near-sonic end and the
  // large-z decay.
  std::vector<double> zs(n_samples), ws(n_samples), Is(n_samples);
  const double w0 = std::log(z_hash - 1.0), w1 = std::log(z_max - 1.0);
  for (int i = 0; i < n_samples; ++i) {
    ws[i] = w0 + (w1 - w0) * i / double(n_samples - 1);
    zs[i] = 1.0 + std::exp(ws[i]);
  }
  zs.front() = z_hash;
  zs.back() = z_max;
  Is[0] = 0.0;
  for (int i = 1; i < n_samples; ++i)
    Is[i] = Is[i - 1] + integrate_or_throw(f, zs[i - 1], zs[i], 1e-13);
  c.I_of_logz_ = PchipInterpolant(ws, Is);

  // Tail z in (z_max, inf) via zeta = 1/z; the integrand is continuous at
  // zeta = 0 for beta > 1.
  const double tail = integrate_or_throw(
      [&f](double zeta) {
        if (zeta == 0.0) return 0.0;
        return f(1.0 / zeta) / (zeta * zeta);
      },
      1.0 / z_max, 0.0, 1e-13);
  // integral from z_max to inf equals minus the zeta-form above
  const double I_inf = Is.back() - tail;
  c.t_end = t_hash * std::exp(I_inf);
  c.x_end = 0.0;  // c(h) -> 0 faster than t stays bounded

  c.samples.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    double z = zs[i];
    double h = c.h_of_z(z);
    double t = t_hash * std::exp(Is[i]);
    c.samples[i] = {z, h, t, law->c(h) * t, c.sigma_of_z(z)};
  }
  return c;
}

// ---------------------------------------------------------------------------
// offcenter

const ShockCurve& offcenter_shock_curve(const PiecewiseSolution& sol) {
  if (!sol.shock_curve)
    throw UnsupportedConfiguration("solution carries no shock curve");
  return *sol.shock_curve;
}

namespace {
// z of the transmitted-wave characteristic through (t, x), 0 < x < X(t).
double transmitted_z(const ShockCurve& c, double t, double x) {
  const GasLaw& law = *c.law;
  auto char_x = [&](double z) {
    double ts = c.t_of_z(z);
    double h = c.h_of_z(z);
    return law.c(h) * ts - law.c(z * h) * (t - ts);
  };
  double zlo = c.z_of_t(t);  // at the shock
  double zhi = c.z_max;
  if (x >= char_x(zlo)) return zlo;
  if (x <= char_x(zhi)) return zhi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (zlo + zhi);
    if (char_x(mid) > x)
      zlo = mid;
    else
      zhi = mid;
    if (zhi - zlo <= 1e-14 * zhi) break;
  }
  return 0.5 * (zlo + zhi);
}
}  // namespace

PiecewiseSolution offcenter_solution(std::shared_ptr<const GasLaw> law,
                                     const OffcenterParams& prm) {
  const double du = prm.u_plus - prm.u_minus;
  if (!(du < 0.0))
    throw NotACollapse("vacuum collapse requires u_plus < u_minus");
  if (prm.focus_t != prm.collapse_t)
    throw UnsupportedConfiguration(
        "compression focus and vacuum collapse must coincide");
  if (!(prm.focus_t > 0.0) || !(prm.h_l > 0.0) || !(prm.h_r > 0.0))
    throw std::invalid_argument("offcenter data requires t_c, h_l, h_r > 0");
  if (!law->is_gamma_law())
    throw UnsupportedConfiguration("offcenter construction needs a gamma law");

  const double t_c = prm.focus_t;
  const double h_l = prm.h_l, h_r = prm.h_r;
  const double u_l = prm.u_minus + h_l;
  const double u_r = prm.u_plus + h_r;
  const double A = u_l + h_l - prm.u_plus;  // = 2 h_l - du
  const double cl = law->c(h_l), cr = law->c(h_r);

  // Entry ratio: where (if at all) the shock meets h = h_r and leaves the
  // rarefaction; otherwise truncate near the sonic limit z -> 1.
  ShockCurve probe;
  probe.law = law;
  probe.beta = law->beta();
  double z_hash;
  bool exits = A > 2.0 * h_r * (1.0 + 1e-12);
  if (exits) {
    double hi = 2.0;
    while (probe.g(hi) < A / h_r) hi *= 2.0;
    z_hash = bisect_mono(
        [&](double z) { return probe.g(z) - A / h_r; }, 1.0 + 1e-14, hi);
  } else {
    z_hash = 1.0 + 1e-4;
  }

  auto curve = std::make_shared<ShockCurve>(shock_through_rarefaction(
      law, A / probe.g(z_hash), z_hash, 1.0, prm.z_max, prm.n_samples));
  curve->rescale_time(t_c / curve->t_end);

  // Validity: earliest of rarefaction exit, transmitted-compression focus
  // estimate (envelope of backward characteristics with non-negligible
  // amplitude), and domain exit.
  double t_exit = exits ? curve->t_of_z(z_hash) : kHuge;
  double t_focus = kHuge;
  {
    // Backward characteristics x = xt - cb*t; adjacent ones cross at
    // tcr = d(xt)/d(cb).  A crossing only counts while both characteristics
    // are still inside the transmitted region, i.e. before they reach x=0
    // at t_hit = xt/cb; the weak ones near the emergence point exit first.
    double prev_c = -1.0, prev_xt = 0.0, prev_hit = 0.0;
    for (const auto& s : curve->samples) {
      double cb = law->c(s.z * s.h);
      double xt = s.x + cb * s.t;
      double hit = xt / cb;
      if (prev_c > 0.0 && cb != prev_c) {
        double tcr = (xt - prev_xt) / (cb - prev_c);
        if (tcr > t_c && tcr <= std::min(hit, prev_hit))
          t_focus = std::min(t_focus, tcr);
      }
      prev_c = cb;
      prev_xt = xt;
      prev_hit = hit;
    }
  }
  double t_domain = std::min(prm.b / cr, t_c - prm.a / cl);
  double t_valid = std::min({t_exit, t_focus, t_domain});

  PiecewiseSolution sol;
  sol.law = law;
  sol.domain_a = prm.a;
  sol.domain_b = prm.b;
  sol.scenario = "offcenter";
  sol.shock_curve = curve;
  sol.t_min = std::max(0.0, t_c + prm.a / cl);
  sol.t_max = t_valid;
  sol.events.push_back(t_c);

  // Phase 1: focusing compression | vacuum atom | centered rarefaction.
  PiecewiseSolution::Phase pre;
  pre.t0 = sol.t_min;
  pre.t1 = t_c;
  pre.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_l, u_l}, fixed(-kHuge),
      [cl, t_c](double t) { return cl * (t - t_c); }));
  pre.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, t_c, 0.0, u_l, h_l, +1.0,
      [cl, t_c](double t) { return cl * (t - t_c); }, fixed(0.0)));
  pre.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, u_r, h_r, +1.0, fixed(0.0),
      [cr](double t) { return cr * t; }));
  pre.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_r, u_r}, [cr](double t) { return cr * t; }, fixed(kHuge)));
  PiecewiseSolution::Curve vac;
  vac.kind = CurveKind::Vacuum;
  vac.X = fixed(0.0);
  vac.w = [du, t_c](double t) { return du * (t - t_c); };
  vac.wdot = [du](double) { return du; };
  vac.Xdot = [](double) { return 0.0; };
  pre.curves.push_back(vac);
  sol.phases.push_back(std::move(pre));

  // Phase 2: backward rarefaction from the collapse point, transmitted
  // backward compression behind the shock, shock inside the remaining
  // forward rarefaction.
  PiecewiseSolution::Phase post;
  post.t0 = t_c;
  post.t1 = t_valid;
  auto shock_x = [curve](double t) { return curve->x_of_z(curve->z_of_t(t)); };

  post.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_l, u_l}, fixed(-kHuge),
      [cl, t_c](double t) { return -cl * (t - t_c); }));
  post.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, t_c, 0.0, u_l, h_l, -1.0,
      [cl, t_c](double t) { return -cl * (t - t_c); }, fixed(0.0)));
  {
    PiecewiseSolution::Region r;
    r.xl = fixed(0.0);
    r.xr = shock_x;
    const double uplus = u_l + h_l;  // u + h behind the shock
    r.state = [law, curve, uplus](double t, double x) {
      double z = transmitted_z(*curve, t, x);
      double hb = z * curve->h_of_z(z);
      return SymState{hb, uplus - hb};
    };
    r.make_piece = [law, curve](double t, double x0, double x1) {
      auto f = [law, curve, t](double x) {
        double z = transmitted_z(*curve, t, x);
        return law->v(z * curve->h_of_z(z));
      };
      Piece p = Piece::from_callback(x0, x1, f, "offcenter-transmitted");
      p.singular_at_x0 = true;
      return p;
    };
    post.regions.push_back(r);
  }
  post.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, u_r, h_r, +1.0, shock_x,
      [cr](double t) { return cr * t; }));
  post.regions.push_back(PiecewiseSolution::Region::constant(
      law, {h_r, u_r}, [cr](double t) { return cr * t; }, fixed(kHuge)));
  PiecewiseSolution::Curve sk;
  sk.kind = CurveKind::Shock;
  sk.X = shock_x;
  sk.Xdot = [curve](double t) { return curve->sigma_of_z(curve->z_of_t(t)); };
  post.curves.push_back(sk);
  sol.phases.push_back(std::move(post));

  sol.params = {{"h_l", h_l},       {"h_r", h_r},     {"u_minus", prm.u_minus},
                {"u_plus", prm.u_plus}, {"du", du},   {"t_c", t_c},
                {"A", A},           {"u_l", u_l},     {"u_r", u_r},
                {"z_hash", z_hash}, {"t_exit", t_exit}, {"t_focus", t_focus}};
  return sol;
}

}  // namespace lagvac
