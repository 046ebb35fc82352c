#pragma once

// Phase-space view of one polarization sector: the analytic two-mode gaussian
// Wigner function, its quadrature normalization, and a displaced-parity
// evaluation on the truncated state as an independent cross-check.

#include <complex>

#include "tmsv/fock_core.hpp"

namespace tmsv {

struct PhasePoint {
  cd alpha_a{0.0, 0.0};
  cd alpha_b{0.0, 0.0};
};

struct QuadratureGrid {
  double half_width = 4.0;
  int points_per_axis = 64;

  QuadratureGrid() = default;
  QuadratureGrid(double l, int m) : half_width(l), points_per_axis(m) {
    if (!(l > 0.0)) throw std::invalid_argument("QuadratureGrid: half_width must be > 0");
    if (m < 8) throw std::invalid_argument("QuadratureGrid: need at least 8 points per axis");
  }
};

// Half-width 4 max(1, e^zeta) keeps the boundary mass of the widest
// quadrature direction below 1e-8.
QuadratureGrid default_grid(double zeta);

// (4/pi^2) exp[-2 cosh(2z)(|aA|^2+|aB|^2) + 2 sinh(2z)(aA aB + c.c.)],
// one polarization sector; strictly positive (may underflow to 0 far out).
double wigner_analytic(double zeta, const PhasePoint& pt);

struct NormalizationResult {
  double integral = 0.0;
  bool narrow_grid_warning = false;  // boundary values above 1e-8 of the peak
};

// Uniform 4-d trapezoid over [-L, L]^4 in (q_A, p_A, q_B, p_B).
NormalizationResult wigner_normalization(double zeta,
                                         const QuadratureGrid& grid);

// Displaced-parity Wigner value of the + sector of a truncated state:
// (2/pi)^2 tr[rho_+ D(aA) D(aB) Pi D^† D^†] with rho_+ the reduced state of
// (a+, b+). Rejects displacements whose support would crowd the cutoff.
double wigner_from_state(const FourModeState& state, const PhasePoint& pt);

}  // namespace tmsv
