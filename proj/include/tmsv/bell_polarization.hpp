#pragma once

// Polarization correlations of the four-mode state: the four rotated-basis
// components C^{ab}, their combination, the reference normalizer, the
// normalized correlation E, the CHSH combination, mean polarization, the
// single-mode parity expectation, and rotation-symmetry fidelities.

#include <cmath>
#include <stdexcept>

#include "tmsv/fock_core.hpp"

namespace tmsv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTsirelson = 2.8284271247461903;  // 2 sqrt(2)

// Reduce an angle into [0, pi); the polarization observables have period pi.
inline double reduce_angle(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0.0) r += kPi;
  return r;
}

struct AngleQuad {
  double delta_a = 0.0;
  double delta_a_prime = 0.0;
  double delta_b = 0.0;
  double delta_b_prime = 0.0;

  AngleQuad() = default;
  AngleQuad(double da, double dap, double db, double dbp)
      : delta_a(reduce_angle(da)), delta_a_prime(reduce_angle(dap)),
        delta_b(reduce_angle(db)), delta_b_prime(reduce_angle(dbp)) {}
};

// The standard maximizing choice (0, pi/4, pi/8, -pi/8).
inline AngleQuad canonical_angles() {
  return AngleQuad(0.0, kPi / 4.0, kPi / 8.0, -kPi / 8.0);
}

struct CorrelationReport {
  double c_pp = 0.0, c_mm = 0.0, c_pm = 0.0, c_mp = 0.0;
  double c_combined = 0.0;     // c_pp + c_mm - c_pm - c_mp
  double normalizer = 0.0;     // sqrt of the product of same-angle combinations
  double e_value = 0.0;        // c_combined / normalizer (NaN when degenerate)
  double trunc_bound = 0.0;    // truncation bound for these quartic moments
  bool degenerate = false;     // vacuum-like state, normalizer <= 0
};

struct ChshResult {
  double s_value = 0.0;
  AngleQuad angles;
  bool violates = false;       // s_value > 2
  bool maximal = false;        // |s_value - 2 sqrt(2)| <= 1e-6
};

class DegenerateNormalizer : public std::runtime_error {
 public:
  DegenerateNormalizer()
      : std::runtime_error("normalized correlation undefined: same-angle "
                           "correlation is not positive (vacuum state)") {}
};

// Rotated-basis photon-number difference
// a_delta^† a_delta - a_deltabar^† a_deltabar with deltabar = delta + pi/2.
MonomialOp polarization_operator(Channel ch, double delta);

// Caches the sixteen base correlators <a_i^† a_j b_k^† b_l> of a state so
// that any angle combination is an O(1) trigonometric contraction.
class Correlator {
 public:
  explicit Correlator(const FourModeState& state);

  CorrelationReport components(double delta_a, double delta_b) const;

  // e_value with the degenerate case promoted to an exception.
  double normalized_E(double delta, double delta_prime) const;

  ChshResult chsh(const AngleQuad& q) const;

  double trunc_bound() const { return trunc_bound_; }

 private:
  double combined(double delta_a, double delta_b) const;
  double base_[2][2][2][2];
  double trunc_bound_;
};

double mean_polarization(const FourModeState& state, Channel ch);

// <sum_n (-1)^n |n><n|> on a single mode (default a+).
double parity_expectation(const FourModeState& state,
                          ModeIndex mode = {Channel::A, Polarization::Plus});

inline double parity_closed_form(double zeta) {
  const double t2 = std::tanh(zeta) * std::tanh(zeta);
  return (1.0 - t2) / (1.0 + t2);
}

// |<psi| exp(-i delta K0) |psi>| on the explicit-matrix backend.
double symmetry_fidelity(const FourModeState& state, double delta);
// Same with the single-channel generator K0^ch (symmetry breaking).
double channel_symmetry_fidelity(const FourModeState& state, Channel ch,
                                 double delta);

}  // namespace tmsv
