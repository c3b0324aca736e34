#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace lagvac {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int leaf_count = 0;
};

struct QuadratureFailure : std::runtime_error {
  QuadResult partial;
  QuadratureFailure(const std::string& what, QuadResult p)
      : std::runtime_error(what), partial(p) {}
};

// Adaptive Gauss-Kronrod (G7-K15) with recursive bisection.  Nodes are
// interior, so integrable endpoint singularities are never evaluated.
// Refinement is depth-first on the subinterval with the larger local
// error, which concentrates nodes toward singular endpoints.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol = 1e-10, int max_depth = 60);

// Throwing variant: raises QuadratureFailure if the tolerance was not met.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          int max_depth = 60);

}  // namespace lagvac
