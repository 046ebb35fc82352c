#include <doctest.h>

#include <cmath>

#include "tmsv/bell_polarization.hpp"
#include "tmsv/tmsv_state.hpp"

using namespace tmsv;

namespace {

FourModeState make_state(double zeta, double eps = 1e-10) {
  return build_state_schmidt(SqueezingParameter(zeta),
                             choose_cutoff(SqueezingParameter(zeta), eps));
}

double max_entry_diff(const SparseCd& a, const SparseCd& b) {
  const SparseCd diff = SparseCd(a - b);
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

TEST_CASE("polarization operator at reference angles") {
  const TruncationSpec t5(5);
  MonomialOp stokes = number_op({Channel::A, Polarization::Plus});
  MonomialOp minus = number_op({Channel::A, Polarization::Minus});
  minus *= cd{-1.0, 0.0};
  stokes += minus;

  const SparseCd p0 = materialize(polarization_operator(Channel::A, 0.0), t5);
  CHECK(max_entry_diff(p0, materialize(stokes, t5)) <= 1e-13);

  const SparseCd p90 = materialize(polarization_operator(Channel::A, kPi / 2.0), t5);
  CHECK(max_entry_diff(p90, SparseCd(-1.0 * p0)) <= 1e-13);

  CHECK(hermiticity_defect(materialize(polarization_operator(Channel::B, 0.43), t5)) <= 1e-12);
}

TEST_CASE("mean polarization vanishes for every zeta") {
  CHECK(mean_polarization(make_state(0.0), Channel::A) == 0.0);
  const FourModeState psi = make_state(1.0);
  CHECK(std::abs(mean_polarization(psi, Channel::A)) <= 1e-9);
  CHECK(std::abs(mean_polarization(psi, Channel::B)) <= 1e-9);
  CHECK(std::abs(expectation(polarization_operator(Channel::A, 0.0), psi)) <= 1e-9);
}

TEST_CASE("correlation components at zeta = 1") {
  const FourModeState psi = make_state(1.0);
  const Correlator corr(psi);
  const CorrelationReport r = corr.components(0.0, 0.0);
  const double closed = 2.0 * std::pow(std::cosh(1.0) * std::sinh(1.0), 2);
  CHECK(closed == doctest::Approx(6.5770582090).epsilon(1e-9));
  // Quartic moments weight the Schmidt tail by ~n^2, so the truncation error
  // is governed by the moment-weighted bound, not the raw tail mass.
  CHECK(std::abs(r.c_combined - closed) <= 10.0 * r.trunc_bound);
  CHECK(std::abs(r.normalizer - closed) <= 10.0 * r.trunc_bound);
  CHECK(r.e_value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.c_combined == r.c_pp + r.c_mm - r.c_pm - r.c_mp);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("E follows cos 2(delta - delta')") {
  const FourModeState psi = make_state(0.5);
  const Correlator corr(psi);
  CHECK(corr.normalized_E(0.3, 0.3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(corr.normalized_E(0.0, kPi / 4.0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(corr.normalized_E(0.0, kPi / 8.0) ==
        doctest::Approx(0.70710678).epsilon(1e-7));
  // Invariance under a common rotation of both channels.
  CHECK(std::abs(corr.normalized_E(0.4 + 0.3, 0.9 + 0.3) -
                 corr.normalized_E(0.4, 0.9)) <= 1e-8);
}

TEST_CASE("vacuum correlations are degenerate") {
  const FourModeState vac = make_state(0.0);
  const Correlator corr(vac);
  const CorrelationReport r = corr.components(0.0, 0.0);
  CHECK(r.degenerate);
  CHECK(r.c_combined == 0.0);
  CHECK(std::isnan(r.e_value));
  CHECK_THROWS_AS(corr.normalized_E(0.0, 0.1), DegenerateNormalizer);
}

TEST_CASE("CHSH at the canonical angles is 2 sqrt(2) for any zeta") {
  for (double z : {0.2, 1.0, 2.0}) {
    const Correlator corr(make_state(z));
    const ChshResult res = corr.chsh(canonical_angles());
    CHECK(std::abs(res.s_value - 2.8284271247) <= 1e-6);
    CHECK(res.violates);
    CHECK(res.maximal);
  }
}

TEST_CASE("CHSH boundary angle sets") {
  const Correlator corr(make_state(0.7));
  const ChshResult equal = corr.chsh(AngleQuad(0.4, 0.4, 0.4, 0.4));
  CHECK(equal.s_value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(equal.violates);

  const ChshResult zero = corr.chsh(AngleQuad(0.0, kPi / 2.0, kPi / 4.0, kPi / 4.0));
  CHECK(zero.s_value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("angle quads are reduced modulo pi") {
  const AngleQuad q(-kPi / 8.0, kPi + 0.2, 2.0 * kPi, 0.5);
  CHECK(q.delta_a == doctest::Approx(kPi - kPi / 8.0));
  CHECK(q.delta_a_prime == doctest::Approx(0.2));
  CHECK(q.delta_b == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.delta_b_prime == doctest::Approx(0.5));
}

TEST_CASE("parity expectation matches the closed form") {
  CHECK(parity_expectation(make_state(0.0)) == 1.0);
  CHECK(parity_closed_form(1.0) == doctest::Approx(0.2658022).epsilon(1e-6));
  CHECK(parity_expectation(make_state(1.0)) ==
        doctest::Approx(parity_closed_form(1.0)).epsilon(1e-9));
  // Large squeezing: parity trends to zero.
  const double p3 = parity_expectation(make_state(3.0, 1e-5));
  CHECK(parity_closed_form(3.0) == doctest::Approx(0.0049574739).epsilon(1e-6));
  CHECK(p3 == doctest::Approx(parity_closed_form(3.0)).epsilon(1e-2));
  CHECK(p3 < parity_expectation(make_state(1.0)));
  // Works on any mode; the minus sector has the same reduced state.
  CHECK(parity_expectation(make_state(1.0), {Channel::B, Polarization::Minus}) ==
        doctest::Approx(parity_closed_form(1.0)).epsilon(1e-9));
}

TEST_CASE("K0 symmetry holds, channel rotation breaks it") {
  const TruncationSpec t10(10);
  const FourModeState psi = build_state_schmidt(SqueezingParameter(0.3), t10);
  CHECK(symmetry_fidelity(psi, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(symmetry_fidelity(psi, 0.7) >= 1.0 - 1e-8);
  CHECK(channel_symmetry_fidelity(psi, Channel::A, 0.7) < 1.0 - 1e-3);
}
