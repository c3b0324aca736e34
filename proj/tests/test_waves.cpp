#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>

#include "doctest.h"
#include "lagvac/waves.hpp"

using namespace lagvac;

static std::shared_ptr<const GasLaw> beta2() {
  return std::make_shared<GasLaw>(GasLaw::gamma_law(3.0));
}

static void check_rh(const GasLaw& law, const Wave& w) {
  // Rankine-Hugoniot: s[v] = -[u], s[u] = [p], jumps right minus left.
  double s = w.s_lo;
  double jv = law.v(w.right.h) - law.v(w.left.h);
  double ju = w.right.u - w.left.u;
  double jp = law.p(w.right.h) - law.p(w.left.h);
  CHECK(s * jv == doctest::Approx(-ju).epsilon(1e-11));
  CHECK(s * ju == doctest::Approx(jp).epsilon(1e-11));
}

TEST_CASE("z-parametrized shocks satisfy the jump conditions exactly") {
  auto law = beta2();
  for (double z : {1.1, 2.0, 10.0, 1e4}) {
    for (auto fam : {WaveFamily::Backward, WaveFamily::Forward}) {
      Wave w = shock_from_ratio(law, 0.7, z, fam, 0.3);
      CHECK(w.kind == WaveKind::Shock);
      check_rh(*law, w);
      // Lax: supersonic relative to the ahead state, subsonic behind.
      double ha = (fam == WaveFamily::Backward) ? w.left.h : w.right.h;
      double hb = (fam == WaveFamily::Backward) ? w.right.h : w.left.h;
      CHECK(std::abs(w.s_lo) > law->c(ha));
      CHECK(std::abs(w.s_lo) < law->c(hb));
      CHECK(hb == doctest::Approx(z * ha).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(shock_from_ratio(law, 1.0, 0.9, WaveFamily::Backward),
                  InvalidWave);
}

TEST_CASE("z-form agrees with the direct jump formula") {
  auto law = beta2();
  auto raw = GasLaw::gamma_law(1.4, 0.6, false);
  for (double z : {1.5, 4.0}) {
    ShockJump a = shock_jump(*law, 0.9, z * 0.9);
    double jp = law->p(z * 0.9) - law->p(0.9);
    double jmv = law->v(0.9) - law->v(z * 0.9);
    CHECK(a.sigma == doctest::Approx(std::sqrt(jp / jmv)).epsilon(1e-13));
    CHECK(a.du == doctest::Approx(-std::sqrt(jp * jmv)).epsilon(1e-13));

    ShockJump b = shock_jump(raw, 0.9, z * 0.9);
    double jp2 = raw.p(z * 0.9) - raw.p(0.9);
    double jmv2 = raw.v(0.9) - raw.v(z * 0.9);
    CHECK(b.sigma == doctest::Approx(std::sqrt(jp2 / jmv2)).epsilon(1e-13));
    CHECK(b.du == doctest::Approx(-std::sqrt(jp2 * jmv2)).epsilon(1e-13));
  }
}

TEST_CASE("rarefaction waves carry the right invariant") {
  auto law = beta2();
  Wave w = rarefaction_wave(law, 1.0, 0.4, WaveFamily::Forward, 0.2);
  CHECK(w.kind == WaveKind::Rarefaction);
  // u - h constant across a forward wave
  CHECK(w.left.u - w.left.h == doctest::Approx(w.right.u - w.right.h));
  // profile matches the edge states at the edge speeds
  double t = 2.0;
  SymState sl = w.profile(t, w.s_lo * t);
  CHECK(sl.h == doctest::Approx(0.4).epsilon(1e-12));
  SymState sr = w.profile(t, w.s_hi * t);
  CHECK(sr.h == doctest::Approx(1.0).epsilon(1e-12));

  Wave b = rarefaction_wave(law, 1.0, 0.4, WaveFamily::Backward, 0.2);
  CHECK(b.left.u + b.left.h == doctest::Approx(b.right.u + b.right.h));
  CHECK(b.s_lo < b.s_hi);
  CHECK(b.s_hi <= 0.0);
}

TEST_CASE("riemann solver: middle state closes both wave curves") {
  auto law = beta2();
  struct Datum {
    SymState l, r;
  };
  for (auto d : {Datum{{1.0, 0.0}, {0.5, -0.8}}, Datum{{0.3, 0.2}, {0.9, 0.1}},
                 Datum{{1.0, -0.2}, {1.0, 0.6}}, Datum{{2.0, 1.0}, {0.1, 0.9}}}) {
    WaveFan fan = riemann_solve(law, d.l, d.r);
    REQUIRE(!fan.has_vacuum);
    REQUIRE(fan.states.size() == fan.waves.size() + 1);
    CHECK(fan.states.front().h == d.l.h);
    CHECK(fan.states.back().u == d.r.u);
    for (const auto& w : fan.waves) {
      if (w.kind == WaveKind::Shock) check_rh(*law, w);
      if (w.kind == WaveKind::Rarefaction) {
        double il = (w.family == WaveFamily::Forward) ? w.left.u - w.left.h
                                                      : w.left.u + w.left.h;
        double ir = (w.family == WaveFamily::Forward) ? w.right.u - w.right.h
                                                      : w.right.u + w.right.h;
        CHECK(il == doctest::Approx(ir).epsilon(1e-11));
      }
    }
    // wave speeds ordered left to right
    for (size_t i = 1; i < fan.waves.size(); ++i)
      CHECK(fan.waves[i - 1].s_hi <= fan.waves[i].s_lo + 1e-13);
  }
}

TEST_CASE("riemann solver on a tabulated law tracks the gamma law") {
  const double gamma = 1.4;
  std::vector<double> v(400), P(400);
  for (int i = 0; i < 400; ++i) {
    v[i] = 0.02 * std::pow(60.0 / 0.02, i / 399.0);
    P[i] = std::pow(v[i], -gamma);
  }
  auto tab = std::make_shared<GasLaw>(GasLaw::tabulated(v, P));
  auto ref = std::make_shared<GasLaw>(GasLaw::gamma_law(gamma, 1.0, false));
  SymState l{ref->h_of_v(1.0), 0.4}, r{ref->h_of_v(2.0), -0.3};
  SymState lt{tab->h_of_v(1.0), 0.4}, rt{tab->h_of_v(2.0), -0.3};
  WaveFan a = riemann_solve(ref, l, r);
  WaveFan b = riemann_solve(tab, lt, rt);
  REQUIRE(a.waves.size() == b.waves.size());
  // compare middle state in physical variables
  double vm_a = ref->v(a.waves[0].right.h);
  double vm_b = tab->v(b.waves[0].right.h);
  CHECK(vm_a == doctest::Approx(vm_b).epsilon(5e-3));
  CHECK(std::abs(a.waves[0].right.u - b.waves[0].right.u) < 5e-3);
}

TEST_CASE("vacuum threshold and near-vacuum continuity") {
  auto law = beta2();
  SymState l{0.5, 0.0};
  // exactly at threshold and beyond: vacuum fan
  for (double gap : {0.0, 0.3}) {
    SymState r{0.7, l.u + l.h + 0.7 + gap};
    WaveFan fan = riemann_solve(law, l, r);
    CHECK(fan.has_vacuum);
    const Wave* vac = nullptr;
    for (const auto& w : fan.waves)
      if (w.kind == WaveKind::Vacuum) vac = &w;
    REQUIRE(vac != nullptr);
    CHECK(std::abs(vac->atom_rate - gap) < 1e-14);
  }
  // just below threshold: classical fan with a tiny middle state
  SymState r{0.7, l.u + l.h + 0.7 - 1e-6};
  WaveFan fan = riemann_solve(law, l, r);
  CHECK_FALSE(fan.has_vacuum);
  REQUIRE(fan.waves.size() == 2);
  double h_m = fan.waves[0].right.h;
  CHECK(h_m > 0.0);
  CHECK(h_m < 1e-4);
  CHECK(h_m == doctest::Approx(5e-7).epsilon(1e-3));
}

TEST_CASE("vacuum riemann problem: atom decays linearly and collapses") {
  auto law = beta2();
  SymState l{1.0, 0.6}, r{1.0, -0.6};  // du = -3.2 => T = w0/3.2
  double w0 = 0.8;
  WaveFan post;
  auto sol = vacuum_riemann_solve(law, l, r, w0, -10, 10, &post);
  double du = (r.u - r.h) - (l.u + l.h);
  double T = -w0 / du;
  REQUIRE(sol.events.size() == 1);
  CHECK(sol.events[0] == doctest::Approx(T).epsilon(1e-14));

  // pre-collapse: atom weight linear, density fans on both sides
  double t = 0.5 * T;
  auto mu = sol.volume_measure(t);
  REQUIRE(mu.atoms.size() == 1);
  CHECK(mu.atoms[0].x == 0.0);
  CHECK(mu.atoms[0].w == doctest::Approx(w0 + du * t).epsilon(1e-13));
  auto e = sol.eval(t, 0.0);
  CHECK(e.on_curve);
  CHECK(e.left.h < 1e-4);
  CHECK(e.left.u == doctest::Approx(l.u + l.h).epsilon(1e-4));
  CHECK(e.right.u == doctest::Approx(r.u - r.h).epsilon(1e-4));

  // post-collapse: no atom, fan equals the plain riemann fan
  double t2 = 1.5 * T;
  auto mu2 = sol.volume_measure(t2);
  CHECK(mu2.atoms.empty());
  WaveFan direct = riemann_solve(law, l, r);
  REQUIRE(post.waves.size() == direct.waves.size());
  auto ja = fan_to_json(post).dump();
  auto jb = fan_to_json(direct).dump();
  CHECK(ja == jb);  // bitwise identical wave lists

  // entropy: shocks dissipate, vacuum produces nothing
  for (const auto& ea : entropy_production(sol, t)) {
    if (ea.kind == CurveKind::Vacuum) CHECK(std::abs(ea.mass) < 1e-12);
  }
  for (const auto& ea : entropy_production(sol, t2)) {
    if (ea.kind == CurveKind::Shock) CHECK(ea.mass < 0.0);
  }
  CHECK_THROWS_AS(entropy_production(sol, T), EventTimeError);
}

TEST_CASE("w0 = 0 reduces to the plain riemann solution") {
  auto law = beta2();
  SymState l{1.0, 0.0}, r{0.6, -0.5};
  WaveFan fan;
  auto sol = vacuum_riemann_solve(law, l, r, 0.0, -10, 10, &fan);
  WaveFan direct = riemann_solve(law, l, r);
  CHECK(fan_to_json(fan).dump() == fan_to_json(direct).dump());
  CHECK(sol.volume_measure(1.0).atoms.empty());
}
