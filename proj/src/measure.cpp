#include "lagvac/measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace lagvac {

// ---------------------------------------------------------------------------
// Piece

Piece Piece::constant(double x0, double x1, double value) {
  Piece p;
  p.x0 = x0;
  p.x1 = x1;
  p.kind = Kind::Constant;
  p.value = value;
  return p;
}

Piece Piece::simple_wave(double x0, double x1,
                         std::shared_ptr<const GasLaw> law, double center,
                         double scale, Field field) {
  Piece p;
  p.x0 = x0;
  p.x1 = x1;
  p.kind = Kind::SimpleWave;
  p.law = std::move(law);
  p.center = center;
  p.scale = scale;
  p.field = field;
  if (field == Field::SpecificVolume) {
    p.singular_at_x0 = (x0 == center);
    p.singular_at_x1 = (x1 == center);
  }
  return p;
}

Piece Piece::from_callback(double x0, double x1,
                           std::function<double(double)> f, std::string id) {
  Piece p;
  p.x0 = x0;
  p.x1 = x1;
  p.kind = Kind::Callback;
  p.callback = std::move(f);
  p.callback_id = std::move(id);
  return p;
}

double Piece::eval(double x) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::SimpleWave: {
      const double h = law->c_inverse(std::abs((x - center) / scale));
      switch (field) {
        case Field::SpecificVolume:
          return law->v(h);
        case Field::Pressure:
          return law->p(h);
        case Field::InternalEnergy:
          return law->eps(h);
      }
      return 0.0;
    }
    case Kind::Callback:
      return callback(x);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// RadonMeasure

void RadonMeasure::validate() const {
  if (!(a < b)) throw std::invalid_argument("measure domain must have a < b");
  if (pieces.empty()) throw std::invalid_argument("measure needs >= 1 piece");
  double x = a;
  for (const Piece& p : pieces) {
    if (std::abs(p.x0 - x) > 1e-12 * (std::abs(b - a)) || !(p.x1 > p.x0)) {
      throw std::invalid_argument("pieces must cover [a,b] in order");
    }
    x = p.x1;
  }
  if (std::abs(x - b) > 1e-12 * std::abs(b - a)) {
    throw std::invalid_argument("pieces must end at b");
  }
  double last = a;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].w > 0.0)) throw std::invalid_argument("atom weight <= 0");
    if (!(atoms[i].x >= a && atoms[i].x <= b)) {
      throw std::invalid_argument("atom outside domain");
    }
    if (i > 0 && !(atoms[i].x > last)) {
      throw std::invalid_argument("atom locations must be strictly increasing");
    }
    last = atoms[i].x;
  }
}

double RadonMeasure::density_at(double x) const {
  for (const Piece& p : pieces) {
    if (x >= p.x0 && x <= p.x1) return p.eval(x);
  }
  throw std::domain_error("density_at: x outside domain");
}

RadonMeasure iota(double a, double b, std::vector<Piece> pieces) {
  RadonMeasure mu;
  mu.a = a;
  mu.b = b;
  mu.pieces = std::move(pieces);
  mu.validate();
  return mu;
}

RadonMeasure project_pi(const RadonMeasure& mu) {
  RadonMeasure out = mu;
  out.atoms.clear();
  return out;
}

RadonMeasure with_atoms(RadonMeasure mu, std::vector<Atom> atoms) {
  std::vector<Atom> kept;
  for (const Atom& at : atoms) {
    if (at.w > kAtomPruneThreshold) kept.push_back(at);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });
  mu.atoms = std::move(kept);
  mu.validate();
  return mu;
}

MeasureNormReport total_variation(const RadonMeasure& mu, double abs_tol) {
  MeasureNormReport report;
  QuadResult total;
  for (const Piece& p : mu.pieces) {
    auto f = [&p](double x) { return std::abs(p.eval(x)); };
    QuadResult r = integrate(f, p.x0, p.x1, abs_tol);
    if (!r.converged) {
      QuadResult partial = total;
      partial.value += r.value;
      throw QuadratureFailure("total_variation: quadrature stalled", partial);
    }
    total.value += r.value;
    total.error_estimate += r.error_estimate;
  }
  for (const Atom& at : mu.atoms) total.value += at.w;
  report.quadrature = total.value;
  report.error_estimate = total.error_estimate;
  return report;
}

namespace {

RadonMeasure extend_field(const GasLaw& law, const RadonMeasure& V,
                          Piece::Field field) {
  RadonMeasure out;
  out.a = V.a;
  out.b = V.b;
  for (const Piece& p : V.pieces) {
    switch (p.kind) {
      case Piece::Kind::Constant: {
        double y = 0.0;
        if (std::isfinite(p.value)) {
          y = (field == Piece::Field::Pressure)
                  ? law.pressure_of_v(p.value)
                  : law.energy_of_v(p.value);
        }
        out.pieces.push_back(Piece::constant(p.x0, p.x1, y));
        break;
      }
      case Piece::Kind::SimpleWave:
        out.pieces.push_back(
            Piece::simple_wave(p.x0, p.x1, p.law, p.center, p.scale, field));
        break;
      case Piece::Kind::Callback: {
        auto v_of_x = p.callback;
        auto g = [&law, v_of_x, field](double x) {
          const double v = v_of_x(x);
          if (!std::isfinite(v)) return 0.0;
          return field == Piece::Field::Pressure ? law.pressure_of_v(v)
                                                 : law.energy_of_v(v);
        };
        out.pieces.push_back(
            Piece::from_callback(p.x0, p.x1, g, p.callback_id));
        break;
      }
    }
  }
  return out;
}

}  // namespace

RadonMeasure extend_pressure(const GasLaw& law, const RadonMeasure& V) {
  return extend_field(law, V, Piece::Field::Pressure);
}

RadonMeasure extend_energy(const GasLaw& law, const RadonMeasure& V) {
  return extend_field(law, V, Piece::Field::InternalEnergy);
}

std::vector<double> default_probe_radii() {
  std::vector<double> radii;
  for (int k = 3; k <= 20; ++k) radii.push_back(std::pow(2.0, -k));
  return radii;
}

ConsistencyResult consistency_check(const RadonMeasure& V,
                                    const std::vector<double>& probe_radii) {
  ConsistencyResult res;
  for (size_t ai = 0; ai < V.atoms.size(); ++ai) {
    const double xi = V.atoms[ai].x;
    // Lower bound of the density on the punctured ball, per radius.
    std::vector<double> bounds;
    for (double r : probe_radii) {
      double lo = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= 16; ++j) {
        const double dx = r * j / 16.0;
        for (double s : {-1.0, 1.0}) {
          const double x = xi + s * dx;
          if (x <= V.a || x >= V.b) continue;
          lo = std::min(lo, V.density_at(x));
        }
      }
      bounds.push_back(lo);
    }
    // Divergence schedule: bound_k > 1/sqrt(r_k) for all k >= some k0,
    // with k0 before the last three probes.
    bool consistent_atom = false;
    for (size_t k0 = 0; k0 + 3 <= probe_radii.size(); ++k0) {
      bool ok = true;
      for (size_t k = k0; k < probe_radii.size(); ++k) {
        if (!(bounds[k] > 1.0 / std::sqrt(probe_radii[k]))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        consistent_atom = true;
        break;
      }
    }
    if (!consistent_atom) {
      res.consistent = false;
      res.violating_atom = static_cast<int>(ai);
      res.liminf_estimate = bounds.back();
      return res;
    }
  }
  return res;
}

double measure_distance(const RadonMeasure& mu1, const RadonMeasure& mu2,
                        double abs_tol) {
  if (mu1.a != mu2.a || mu1.b != mu2.b) {
    throw std::domain_error("measure_distance: mismatched domains");
  }
  std::vector<double> cuts{mu1.a};
  for (const Piece& p : mu1.pieces) cuts.push_back(p.x1);
  for (const Piece& p : mu2.pieces) cuts.push_back(p.x1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto f = [&](double x) {
      return std::abs(mu1.density_at(x) - mu2.density_at(x));
    };
    total += integrate(f, cuts[i], cuts[i + 1], abs_tol).value;
  }

  // Atomic part: ||alpha dx - beta dy|| = (|a|+|b|) 1{x!=y} + |a-b| 1{x=y}.
  size_t i = 0, j = 0;
  while (i < mu1.atoms.size() || j < mu2.atoms.size()) {
    if (i < mu1.atoms.size() && j < mu2.atoms.size() &&
        mu1.atoms[i].x == mu2.atoms[j].x) {
      total += std::abs(mu1.atoms[i].w - mu2.atoms[j].w);
      ++i;
      ++j;
    } else if (j >= mu2.atoms.size() ||
               (i < mu1.atoms.size() && mu1.atoms[i].x < mu2.atoms[j].x)) {
      total += std::abs(mu1.atoms[i].w);
      ++i;
    } else {
      total += std::abs(mu2.atoms[j].w);
      ++j;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const RadonMeasure& mu) {
  nlohmann::json j;
  j["domain"] = {mu.a, mu.b};
  j["pieces"] = nlohmann::json::array();
  for (const Piece& p : mu.pieces) {
    nlohmann::json jp;
    jp["x0"] = p.x0;
    jp["x1"] = p.x1;
    switch (p.kind) {
      case Piece::Kind::Constant:
        jp["kind"] = "constant";
        jp["params"] = {{"value", p.value}};
        break;
      case Piece::Kind::SimpleWave: {
        jp["kind"] = "simple-wave";
        const char* field = p.field == Piece::Field::SpecificVolume
                                ? "v"
                                : (p.field == Piece::Field::Pressure ? "p"
                                                                     : "eps");
        jp["params"] = {{"center", p.center},
                        {"scale", p.scale},
                        {"field", field}};
        break;
      }
      case Piece::Kind::Callback:
        jp["kind"] = "tabulated";
        jp["params"] = {{"id", p.callback_id}};
        break;
    }
    j["pieces"].push_back(jp);
  }
  j["atoms"] = nlohmann::json::array();
  for (const Atom& at : mu.atoms) {
    j["atoms"].push_back({{"x", at.x}, {"w", at.w}});
  }
  return j;
}

RadonMeasure measure_from_json(const nlohmann::json& j,
                               std::shared_ptr<const GasLaw> law) {
  RadonMeasure mu;
  mu.a = j.at("domain").at(0).get<double>();
  mu.b = j.at("domain").at(1).get<double>();
  for (const auto& jp : j.at("pieces")) {
    const std::string kind = jp.at("kind").get<std::string>();
    const double x0 = jp.at("x0").get<double>();
    const double x1 = jp.at("x1").get<double>();
    if (kind == "constant") {
      mu.pieces.push_back(
          Piece::constant(x0, x1, jp.at("params").at("value").get<double>()));
    } else if (kind == "simple-wave") {
      if (!law) {
        throw std::invalid_argument(
            "simple-wave piece requires a constitutive law");
      }
      const auto& params = jp.at("params");
      const std::string field = params.value("field", "v");
      Piece::Field f = field == "p" ? Piece::Field::Pressure
                       : field == "eps" ? Piece::Field::InternalEnergy
                                        : Piece::Field::SpecificVolume;
      mu.pieces.push_back(Piece::simple_wave(
          x0, x1, law, params.at("center").get<double>(),
          params.at("scale").get<double>(), f));
    } else {
      throw std::invalid_argument("cannot deserialize callback piece '" +
                                  kind + "'");
    }
  }
  std::vector<Atom> atoms;
  for (const auto& ja : j.at("atoms")) {
    atoms.push_back({ja.at("x").get<double>(), ja.at("w").get<double>()});
  }
  return with_atoms(std::move(mu), std::move(atoms));
}

}  // namespace lagvac
