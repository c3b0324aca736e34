#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagvac/gas_law.hpp"
#include "lagvac/quad.hpp"

#include "json.hpp"

namespace lagvac {

// Weights below this are pruned: collapse scenarios drive w(t) -> 0
// continuously and pruning defines the moment of representational collapse.
inline constexpr double kAtomPruneThreshold = 1e-14;

struct Atom {
  double x;
  double w;
};

// One density piece of a measure-valued specific volume.  Pieces are
// symbolic so quadrature can place nodes adaptively near vacuum edges,
// where the density behaves like |x|^((1-beta)/beta).
struct Piece {
  enum class Kind { Constant, SimpleWave, Callback };
  enum class Field { SpecificVolume, Pressure, InternalEnergy };

  double x0 = 0.0;
  double x1 = 0.0;
  Kind kind = Kind::Constant;

  double value = 0.0;  // Constant

  // SimpleWave: field(c_inverse(|x - center| / scale)); the density blows
  // up at x = center (the vacuum edge).
  Field field = Field::SpecificVolume;
  double center = 0.0;
  double scale = 1.0;
  std::shared_ptr<const GasLaw> law;

  std::function<double(double)> callback;  // Callback
  std::string callback_id;

  bool singular_at_x0 = false;
  bool singular_at_x1 = false;

  static Piece constant(double x0, double x1, double value);
  static Piece simple_wave(double x0, double x1,
                           std::shared_ptr<const GasLaw> law, double center,
                           double scale, Field field = Field::SpecificVolume);
  static Piece from_callback(double x0, double x1,
                             std::function<double(double)> f,
                             std::string id = "");

  double eval(double x) const;
};

// Interval Radon measure: piecewise-analytic density plus finite atoms.
// Immutable by convention; all operations below are pure.
struct RadonMeasure {
  double a = 0.0;
  double b = 0.0;
  std::vector<Piece> pieces;
  std::vector<Atom> atoms;

  void validate() const;
  double density_at(double x) const;
};

struct MeasureNormReport {
  std::optional<double> closed_form;
  double quadrature = 0.0;
  double abs_err = 0.0;        // |closed_form - quadrature| when both present
  double error_estimate = 0.0; // quadrature's own reported estimate
};

struct ConsistencyResult {
  bool consistent = true;
  int violating_atom = -1;
  double liminf_estimate = 0.0;
};

// Embedding iota: a density descriptor as a measure (no atoms).
RadonMeasure iota(double a, double b, std::vector<Piece> pieces);

// Lebesgue projection Pi: drops the atomic part, keeping the density.
RadonMeasure project_pi(const RadonMeasure& mu);

RadonMeasure with_atoms(RadonMeasure mu, std::vector<Atom> atoms);

// Total variation |mu|([a,b]) = int |density| + sum of atom weights.
MeasureNormReport total_variation(const RadonMeasure& mu,
                                  double abs_tol = 1e-10);

// Constitutive extensions: P o Pi and E o Pi.  Atoms never contribute;
// the outputs are atom-free by construction.
RadonMeasure extend_pressure(const GasLaw& law, const RadonMeasure& V);
RadonMeasure extend_energy(const GasLaw& law, const RadonMeasure& V);

// Default probe radii r_k = 2^-k, k = 3..20.
std::vector<double> default_probe_radii();

// Consistency of the medium: the density must blow up approaching every
// atom.  Divergence is declared when the sampled lower bound exceeds
// 1/sqrt(r_k) for all k beyond some k0.
ConsistencyResult consistency_check(
    const RadonMeasure& V,
    const std::vector<double>& probe_radii = default_probe_radii());

// ||mu1 - mu2||: L1 distance of densities plus the atomic-part formula
// (|alpha|+|beta|) for distinct locations, |alpha-beta| for coincident.
double measure_distance(const RadonMeasure& mu1, const RadonMeasure& mu2,
                        double abs_tol = 1e-10);

nlohmann::json to_json(const RadonMeasure& mu);
RadonMeasure measure_from_json(const nlohmann::json& j,
                               std::shared_ptr<const GasLaw> law = nullptr);

}  // namespace lagvac
