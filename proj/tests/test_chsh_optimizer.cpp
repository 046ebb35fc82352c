#include <doctest.h>

#include <cmath>
#include <random>

#include "tmsv/chsh_optimizer.hpp"
#include "tmsv/tmsv_state.hpp"

using namespace tmsv;

namespace {

// A maximizing quad has E1 = E2 = E3 = -E4 = +-sqrt(2)/2; the difference
// pattern with three angles at +-pi/8 and one at -+3pi/8 (the canonical set
// among them) is one representative of this family.
bool has_maximal_difference_pattern(const AngleQuad& q) {
  const double e1 = analytic_e_law(q.delta_a, q.delta_b);
  const double e2 = analytic_e_law(q.delta_a, q.delta_b_prime);
  const double e3 = analytic_e_law(q.delta_a_prime, q.delta_b);
  const double e4 = analytic_e_law(q.delta_a_prime, q.delta_b_prime);
  const double half_rt2 = std::sqrt(2.0) / 2.0;
  return std::abs(std::abs(e1) - half_rt2) < 1e-6 &&
         std::abs(e2 - e1) < 1e-6 && std::abs(e3 - e1) < 1e-6 &&
         std::abs(e4 + e1) < 1e-6;
}

}  // namespace

TEST_CASE("optimizer attains 2 sqrt(2) on the analytic law") {
  const Optimum opt = optimize(analytic_e_law);
  CHECK(opt.best.s_value == doctest::Approx(kTsirelson).epsilon(1e-9 / kTsirelson));
  CHECK(opt.best.s_value <= kTsirelson + 1e-12);
  CHECK(opt.converged);
  CHECK(has_maximal_difference_pattern(opt.best.angles));
  CHECK(opt.evaluations > 0);
}

TEST_CASE("optimum is step-size independent") {
  for (double step : {kPi / 24.0, kPi / 48.0, kPi / 96.0}) {
    OptimizerConfig cfg;
    cfg.coarse_step = step;
    const Optimum opt = optimize(analytic_e_law, cfg);
    CHECK(opt.best.s_value >= kTsirelson - 1e-9);
    CHECK(opt.best.s_value <= kTsirelson + 1e-12);
  }
}

TEST_CASE("optimum is invariant under a grid offset") {
  OptimizerConfig cfg;
  cfg.grid_offset = 0.4;
  const Optimum base = optimize(analytic_e_law);
  const Optimum shifted = optimize(analytic_e_law, cfg);
  CHECK(std::abs(base.best.s_value - shifted.best.s_value) <= 1e-9);
}

TEST_CASE("constant correlation caps S at 2") {
  const Optimum opt = optimize([](double, double) { return 1.0; });
  CHECK(opt.best.s_value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("optimizer on the numerically computed E at zeta = 1") {
  const TruncationSpec trunc = choose_cutoff(SqueezingParameter(1.0), 1e-10);
  const FourModeState psi = build_state_schmidt(SqueezingParameter(1.0), trunc);
  const Correlator corr(psi);
  const double tail = schmidt_profile(SqueezingParameter(1.0), trunc).tail_mass;
  const Optimum opt = optimize(
      [&corr](double d, double dp) { return corr.normalized_E(d, dp); });
  CHECK(std::abs(opt.best.s_value - kTsirelson) <=
        std::max(1e-6, 100.0 * tail));
}

TEST_CASE("verify_angle_set evaluates fixed quads") {
  CHECK(verify_angle_set(canonical_angles(), analytic_e_law) ==
        doctest::Approx(2.8284271247461903).epsilon(1e-12));
  // Common rotation leaves the analytic S unchanged.
  const double phi = 0.4;
  const AngleQuad shifted(0.0 + phi, kPi / 4.0 + phi, kPi / 8.0 + phi,
                          -kPi / 8.0 + phi);
  CHECK(std::abs(verify_angle_set(shifted, analytic_e_law) - kTsirelson) <= 1e-12);
  // (0, pi/2, pi/8, -pi/8): the four E-values are (1,1,-1,-1)*sqrt(2)/2,
  // so S = sqrt(2) by direct cosine arithmetic.
  CHECK(verify_angle_set(AngleQuad(0.0, kPi / 2.0, kPi / 8.0, -kPi / 8.0),
                         analytic_e_law) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("random quads never beat the Tsirelson ceiling") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, kPi);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const AngleQuad q(uni(rng), uni(rng), uni(rng), uni(rng));
    worst = std::max(worst, verify_angle_set(q, analytic_e_law));
  }
  CHECK(worst <= kTsirelson + 1e-9);
}

TEST_CASE("config validation") {
  OptimizerConfig bad;
  bad.coarse_step = 1.0;  // does not divide pi
  CHECK_THROWS_AS(optimize(analytic_e_law, bad), std::invalid_argument);
  bad = OptimizerConfig{};
  bad.refine_tolerance = 0.0;
  CHECK_THROWS_AS(optimize(analytic_e_law, bad), std::invalid_argument);
}
