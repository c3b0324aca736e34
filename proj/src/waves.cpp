#include "lagvac/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagvac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHuge = 1e300;

bool states_equal(const SymState& a, const SymState& b) {
  return a.h == b.h && a.u == b.u;
}
}  // namespace

double q_exponent(double n, double z) {
  // (1 - z^-n)/n without cancellation near z = 1
  return -std::expm1(-n * std::log(z)) / n;
}

double shock_r(double beta, double z) {
  return std::sqrt(q_exponent(beta + 1.0, z) * q_exponent(beta - 1.0, z));
}

double shock_s(double beta, double z) {
  return std::sqrt(q_exponent(beta + 1.0, z) / q_exponent(beta - 1.0, z));
}

ShockJump shock_jump(const GasLaw& law, double h_ahead, double h_behind) {
  if (!(h_behind > h_ahead) || !(h_ahead > 0.0))
    throw InvalidWave("shock requires h_behind > h_ahead > 0");
  if (law.is_gamma_law()) {
    double beta = law.beta();
    double z = h_behind / h_ahead;
    double zp = std::pow(z, (beta + 1.0) / 2.0);
    return {law.c(h_ahead) * zp * shock_s(beta, z),
            -h_ahead * zp * shock_r(beta, z)};
  }
  double jp = law.p(h_behind) - law.p(h_ahead);
  double jmv = law.v(h_ahead) - law.v(h_behind);
  return {std::sqrt(jp / jmv), -std::sqrt(jp * jmv)};
}

namespace {
Wave make_shock(std::shared_ptr<const GasLaw> law, double h_ahead,
                double h_behind, WaveFamily family, double u_ahead);
}

Wave shock_from_ratio(std::shared_ptr<const GasLaw> law, double h_ahead,
                      double z, WaveFamily family, double u_ahead) {
  if (!law->is_gamma_law())
    throw InvalidWave("z-parametrized shocks require a gamma law");
  if (!(z > 1.0)) throw InvalidWave("shock ratio must exceed 1");
  if (!(h_ahead > 0.0)) throw InvalidWave("shock ahead state must have h > 0");
  if (family == WaveFamily::Stationary)
    throw InvalidWave("shocks belong to a characteristic family");
  return make_shock(law, h_ahead, z * h_ahead, family, u_ahead);
}

Wave rarefaction_wave(std::shared_ptr<const GasLaw> law, double h_ahead,
                      double h_behind, WaveFamily family, double u_ahead,
                      double center_t, double center_x) {
  if (!(h_ahead >= 0.0) || !(h_behind >= 0.0))
    throw InvalidWave("simple wave states require h >= 0");
  Wave w;
  w.family = family;
  w.kind = (h_behind <= h_ahead) ? WaveKind::Rarefaction : WaveKind::Compression;
  w.center_t = center_t;
  w.center_x = center_x;
  double ca = law->c(h_ahead), cb = law->c(h_behind);
  if (family == WaveFamily::Backward) {
    // ahead state sits spatially left; u + h constant across
    double uref = u_ahead + h_ahead;
    w.left = {h_ahead, u_ahead};
    w.right = {h_behind, uref - h_behind};
    w.s_lo = std::min(-ca, -cb);
    w.s_hi = std::max(-ca, -cb);
    auto lw = law;
    w.profile = [lw, uref, center_t, center_x](double t, double x) {
      double h = lw->c_inverse(std::abs(x - center_x) / std::abs(t - center_t));
      return SymState{h, uref - h};
    };
  } else if (family == WaveFamily::Forward) {
    // ahead state sits spatially right; u - h constant across
    double uref = u_ahead - h_ahead;
    w.left = {h_behind, uref + h_behind};
    w.right = {h_ahead, u_ahead};
    w.s_lo = std::min(ca, cb);
    w.s_hi = std::max(ca, cb);
    auto lw = law;
    w.profile = [lw, uref, center_t, center_x](double t, double x) {
      double h = lw->c_inverse(std::abs(x - center_x) / std::abs(t - center_t));
      return SymState{h, uref + h};
    };
  } else {
    throw InvalidWave("simple waves belong to a characteristic family");
  }
  return w;
}

namespace {

// Shock wave between two h values for any law (z-form picked for gamma
// laws inside shock_jump).
Wave make_shock(std::shared_ptr<const GasLaw> law, double h_ahead,
                double h_behind, WaveFamily family, double u_ahead) {
  ShockJump j = shock_jump(*law, h_ahead, h_behind);
  Wave w;
  w.family = family;
  w.kind = WaveKind::Shock;
  if (family == WaveFamily::Backward) {
    w.left = {h_ahead, u_ahead};
    w.right = {h_behind, u_ahead + j.du};
    w.s_lo = w.s_hi = -j.sigma;
  } else {
    w.left = {h_behind, u_ahead - j.du};
    w.right = {h_ahead, u_ahead};
    w.s_lo = w.s_hi = j.sigma;
  }
  return w;
}

// Velocity reachable from the left state along the backward wave curve.
double u_from_left(const GasLaw& law, SymState l, double h) {
  if (h <= l.h) return l.u + (l.h - h);
  return l.u + shock_jump(law, l.h, h).du;
}

// Velocity reachable from the right state along the forward wave curve.
double u_from_right(const GasLaw& law, SymState r, double h) {
  if (h <= r.h) return r.u - (r.h - h);
  return r.u - shock_jump(law, r.h, h).du;
}

}  // namespace

WaveFan riemann_solve(std::shared_ptr<const GasLaw> law, SymState left,
                      SymState right) {
  if (left.h < 0.0 || right.h < 0.0)
    throw InvalidWave("riemann data requires h >= 0");

  WaveFan fan;
  if (states_equal(left, right)) {
    fan.states = {left};
    return fan;
  }

  double ul0 = left.u + left.h;    // trace of the left curve at h = 0
  double ur0 = right.u - right.h;  // trace of the right curve at h = 0
  if (ur0 >= ul0) {
    // States separate; a vacuum opens between two full rarefactions.
    fan.has_vacuum = true;
    fan.states.push_back(left);
    if (left.h > 0.0) {
      fan.waves.push_back(
          rarefaction_wave(law, left.h, 0.0, WaveFamily::Backward, left.u));
      fan.states.push_back({0.0, ul0});
    }
    Wave vac;
    vac.family = WaveFamily::Stationary;
    vac.kind = WaveKind::Vacuum;
    vac.left = {0.0, ul0};
    vac.right = {0.0, ur0};
    vac.s_lo = vac.s_hi = 0.0;
    vac.atom_rate = ur0 - ul0;
    fan.waves.push_back(vac);
    fan.states.push_back({0.0, ur0});
    if (right.h > 0.0) {
      fan.waves.push_back(
          rarefaction_wave(law, right.h, 0.0, WaveFamily::Forward, right.u));
      fan.states.push_back(right);
    }
    return fan;
  }

  if (left.h == 0.0 || right.h == 0.0)
    throw InvalidWave(
        "compressive data adjacent to vacuum has no self-similar fan");

  auto phi = [&](double h) {
    return u_from_left(*law, left, h) - u_from_right(*law, right, h);
  };
  double lo = 0.0;
  double hi = std::max(left.h, right.h);
  double cap = law->h_max();
  int guard = 0;
  while (phi(hi) > 0.0) {
    if (hi >= cap || ++guard > 200)
      throw InvalidWave("middle state exceeds the law's valid range");
    hi = std::min(2.0 * hi, cap);
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  double h_m = 0.5 * (lo + hi);
  double u_m =
      0.5 * (u_from_left(*law, left, h_m) + u_from_right(*law, right, h_m));
  SymState mid{h_m, u_m};

  double tol_h = 1e-13 * std::max({left.h, right.h, h_m, 1e-300});
  bool left_wave =
      std::abs(h_m - left.h) > tol_h || std::abs(u_m - left.u) > tol_h;
  bool right_wave =
      std::abs(h_m - right.h) > tol_h || std::abs(u_m - right.u) > tol_h;

  fan.states.push_back(left);
  if (left_wave) {
    Wave w = (h_m > left.h)
                 ? make_shock(law, left.h, h_m, WaveFamily::Backward, left.u)
                 : rarefaction_wave(law, left.h, h_m, WaveFamily::Backward,
                                    left.u);
    // Pin the middle state exactly so neighbor states match bitwise.
    w.right = right_wave ? mid : right;
    fan.waves.push_back(w);
    if (right_wave) fan.states.push_back(mid);
  }
  if (right_wave) {
    Wave w = (h_m > right.h)
                 ? make_shock(law, right.h, h_m, WaveFamily::Forward, right.u)
                 : rarefaction_wave(law, right.h, h_m, WaveFamily::Forward,
                                    right.u);
    w.left = left_wave ? mid : left;
    fan.waves.push_back(w);
  }
  fan.states.push_back(right);
  return fan;
}

PiecewiseSolution fan_solution(std::shared_ptr<const GasLaw> law,
                               const WaveFan& fan, double tc, double xc,
                               double domain_a, double domain_b, double w0) {
  PiecewiseSolution sol;
  sol.law = law;
  sol.domain_a = domain_a;
  sol.domain_b = domain_b;
  sol.scenario = "riemann";

  double t_exit = kHuge;
  for (const auto& w : fan.waves) {
    if (w.s_lo < 0.0) t_exit = std::min(t_exit, (domain_a - xc) / w.s_lo);
    if (w.s_hi > 0.0) t_exit = std::min(t_exit, (domain_b - xc) / w.s_hi);
  }

  PiecewiseSolution::Phase ph;
  ph.t0 = tc;
  ph.t1 = tc + t_exit;

  auto line = [tc, xc](double s) -> std::function<double(double)> {
    return [tc, xc, s](double t) { return xc + s * (t - tc); };
  };
  auto fixed = [](double x) -> std::function<double(double)> {
    return [x](double) { return x; };
  };

  double norm_slope = 0.0;
  double prev = -kHuge;
  size_t si = 0;
  for (size_t i = 0; i < fan.waves.size(); ++i) {
    const Wave& w = fan.waves[i];
    if (fan.states[si].h > 0.0 || prev < w.s_lo) {
      ph.regions.push_back(PiecewiseSolution::Region::constant(
          law, fan.states[si], prev == -kHuge ? fixed(-kHuge) : line(prev),
          line(w.s_lo)));
    }
    switch (w.kind) {
      case WaveKind::Shock: {
        PiecewiseSolution::Curve c;
        c.kind = CurveKind::Shock;
        c.X = line(w.s_lo);
        double s = w.s_lo;
        c.Xdot = [s](double) { return s; };
        ph.curves.push_back(c);
        norm_slope += s * (law->v(w.left.h) - law->v(w.right.h));
        break;
      }
      case WaveKind::Rarefaction:
      case WaveKind::Compression: {
        PiecewiseSolution::Region r;
        r.xl = line(w.s_lo);
        r.xr = line(w.s_hi);
        r.state = w.profile;
        r.make_piece = [law, tc, xc](double t, double x0, double x1) {
          return Piece::simple_wave(x0, x1, law, xc, std::abs(t - tc));
        };
        ph.regions.push_back(r);
        norm_slope += (w.family == WaveFamily::Backward)
                          ? (w.left.h - w.right.h)
                          : (w.right.h - w.left.h);
        break;
      }
      case WaveKind::Vacuum: {
        PiecewiseSolution::Curve c;
        c.kind = CurveKind::Vacuum;
        c.X = fixed(xc);
        double rate = w.atom_rate;
        c.w = [w0, rate, tc](double t) { return w0 + rate * (t - tc); };
        c.wdot = [rate](double) { return rate; };
        c.Xdot = [](double) { return 0.0; };
        ph.curves.push_back(c);
        norm_slope += rate;
        break;
      }
    }
    prev = w.s_hi;
    ++si;
  }
  ph.regions.push_back(PiecewiseSolution::Region::constant(
      law, fan.states.back(), prev == -kHuge ? fixed(-kHuge) : line(prev),
      fixed(kHuge)));

  sol.phases.push_back(std::move(ph));
  sol.t_min = tc;
  sol.t_max = tc + t_exit;
  sol.params["norm_slope"] = norm_slope;
  sol.params["h_left"] = fan.states.front().h;
  sol.params["h_right"] = fan.states.back().h;
  return sol;
}

PiecewiseSolution vacuum_riemann_solve(std::shared_ptr<const GasLaw> law,
                                       SymState left, SymState right,
                                       double w0, double domain_a,
                                       double domain_b, WaveFan* fan_out) {
  if (w0 < 0.0) throw std::invalid_argument("atom weight must be >= 0");
  if (w0 == 0.0) {
    WaveFan fan = riemann_solve(law, left, right);
    if (fan_out) *fan_out = fan;
    PiecewiseSolution sol =
        fan_solution(law, fan, 0.0, 0.0, domain_a, domain_b);
    sol.scenario = "vrp";
    sol.params["w0"] = 0.0;
    return sol;
  }
  if (!(left.h > 0.0) || !(right.h > 0.0))
    throw std::invalid_argument(
        "a persistent vacuum atom needs h > 0 on both sides");

  double ul0 = left.u + left.h;
  double ur0 = right.u - right.h;
  double du = ur0 - ul0;  // dw/dt while the atom lives

  PiecewiseSolution sol;
  sol.law = law;
  sol.domain_a = domain_a;
  sol.domain_b = domain_b;
  sol.scenario = "vrp";
  sol.params = {{"h_l", left.h},   {"h_r", right.h}, {"u_l", left.u},
                {"u_r", right.u},  {"w0", w0},       {"du", du}};

  double cl = law->c(left.h), cr = law->c(right.h);
  double t_exit = std::min(-domain_a / cl, domain_b / cr);
  double T = (du < 0.0) ? -w0 / du : kInf;

  PiecewiseSolution::Phase ph;
  ph.t0 = 0.0;
  ph.t1 = std::min(T, t_exit);
  auto fixed = [](double x) {
    return [x](double) { return x; };
  };
  ph.regions.push_back(PiecewiseSolution::Region::constant(
      law, left, fixed(-kHuge), [cl](double t) { return -cl * t; }));
  ph.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, left.u, left.h, -1.0,
      [cl](double t) { return -cl * t; }, fixed(0.0)));
  ph.regions.push_back(PiecewiseSolution::Region::centered_fan(
      law, 0.0, 0.0, right.u, right.h, +1.0, fixed(0.0),
      [cr](double t) { return cr * t; }));
  ph.regions.push_back(PiecewiseSolution::Region::constant(
      law, right, [cr](double t) { return cr * t; }, fixed(kHuge)));
  PiecewiseSolution::Curve vac;
  vac.kind = CurveKind::Vacuum;
  vac.X = fixed(0.0);
  vac.w = [w0, du](double t) { return w0 + du * t; };
  vac.wdot = [du](double) { return du; };
  vac.Xdot = [](double) { return 0.0; };
  ph.curves.push_back(vac);
  sol.phases.push_back(ph);
  sol.t_min = 0.0;

  if (T < t_exit) {
    WaveFan fan = riemann_solve(law, left, right);
    if (fan_out) *fan_out = fan;
    PiecewiseSolution post =
        fan_solution(law, fan, T, 0.0, domain_a, domain_b);
    sol.phases.push_back(post.phases.front());
    sol.events.push_back(T);
    sol.t_max = post.t_max;
    sol.params["T"] = T;
    sol.params["norm_slope_post"] = post.params["norm_slope"];
  } else {
    sol.t_max = t_exit;
    if (fan_out) *fan_out = WaveFan{};
  }
  return sol;
}

nlohmann::json fan_to_json(const WaveFan& fan) {
  nlohmann::json j;
  j["has_vacuum"] = fan.has_vacuum;
  j["states"] = nlohmann::json::array();
  for (const auto& s : fan.states) j["states"].push_back({{"h", s.h}, {"u", s.u}});
  j["waves"] = nlohmann::json::array();
  for (const auto& w : fan.waves) {
    nlohmann::json wj;
    switch (w.family) {
      case WaveFamily::Backward: wj["family"] = "backward"; break;
      case WaveFamily::Forward: wj["family"] = "forward"; break;
      case WaveFamily::Stationary: wj["family"] = "stationary"; break;
    }
    switch (w.kind) {
      case WaveKind::Shock: wj["kind"] = "shock"; break;
      case WaveKind::Rarefaction: wj["kind"] = "rarefaction"; break;
      case WaveKind::Compression: wj["kind"] = "compression"; break;
      case WaveKind::Vacuum: wj["kind"] = "vacuum"; break;
    }
    wj["left"] = {{"h", w.left.h}, {"u", w.left.u}};
    wj["right"] = {{"h", w.right.h}, {"u", w.right.u}};
    wj["speed"] = {w.s_lo, w.s_hi};
    if (w.atom_rate != 0.0) wj["atom_rate"] = w.atom_rate;
    j["waves"].push_back(wj);
  }
  return j;
}

}  // namespace lagvac
