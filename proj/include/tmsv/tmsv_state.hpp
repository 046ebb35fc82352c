#pragma once

// Construction of the product-of-two-TMSV state on the truncated four-mode
// space: analytic Schmidt form (production path) and exponential map
// (validation path), with cutoff selection from the geometric tail mass.

#include <Eigen/Dense>

#include "tmsv/fock_core.hpp"

namespace tmsv {

struct SqueezingParameter {
  double zeta = 0.0;
  SqueezingParameter() = default;
  explicit SqueezingParameter(double z) : zeta(z) {
    if (!(z >= 0.0)) throw std::invalid_argument("SqueezingParameter: zeta must be >= 0");
  }
};

// lambda_n = tanh^n(zeta) / cosh(zeta), n = 0 .. d-1; the per-TMSV Schmidt
// coefficients. tail_mass = tanh^(2d)(zeta) is the discarded probability of
// one TMSV factor.
struct SchmidtProfile {
  Eigen::VectorXd lambdas;
  double tail_mass = 0.0;
};

SchmidtProfile schmidt_profile(SqueezingParameter zeta,
                               const TruncationSpec& trunc);

// Smallest d >= 2 with tanh^(2d)(zeta) <= eps; d = 2 for zeta = 0.
TruncationSpec choose_cutoff(SqueezingParameter zeta, double eps);

// Amplitude lambda_n lambda_m on |n, m, n, m> (ordering a+, a-, b+, b-),
// renormalized; truncation_error = 1 - (sum lambda_n^2)^2.
FourModeState build_state_schmidt(SqueezingParameter zeta,
                                  const TruncationSpec& trunc);

// exp(zeta K_x)|0> by sub-stepped Taylor application; explicit-matrix
// backend, cutoff <= 12.
FourModeState build_state_exponential(SqueezingParameter zeta,
                                      const TruncationSpec& trunc);

// |<a|b>| for states on the same truncated space.
double fidelity(const FourModeState& a, const FourModeState& b);

}  // namespace tmsv
