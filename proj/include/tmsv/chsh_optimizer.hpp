#pragma once

// Maximization of the CHSH combination over measurement-angle quads:
// coarse grid over [0, pi)^4 followed by derivative-free coordinate descent
// with a geometrically shrinking step.

#include <functional>

#include "tmsv/bell_polarization.hpp"

namespace tmsv {

// E(delta, delta'); must be pi-periodic in each argument.
using ESource = std::function<double(double, double)>;

struct OptimizerConfig {
  double coarse_step = kPi / 48.0;  // must divide pi
  double refine_tolerance = 1e-10;  // in S
  int max_refine_iters = 200;
  double grid_offset = 0.0;         // common shift applied to the coarse grid

  void validate() const;
};

struct Optimum {
  ChshResult best;
  long evaluations = 0;  // E_source evaluations (table entries + refinement)
  bool converged = false;
};

Optimum optimize(const ESource& e_source, const OptimizerConfig& cfg = {});

// S at exactly the given angles, no search.
double verify_angle_set(const AngleQuad& q, const ESource& e_source);

// The exact correlation law of the product-TMSV state.
inline double analytic_e_law(double delta, double delta_prime) {
  return std::cos(2.0 * (delta - delta_prime));
}

}  // namespace tmsv
