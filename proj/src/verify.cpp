#include "tmsv/verify.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "tmsv/bell_polarization.hpp"
#include "tmsv/chsh_optimizer.hpp"
#include "tmsv/fock_core.hpp"
#include "tmsv/tmsv_state.hpp"
#include "tmsv/wigner_phase_space.hpp"

namespace tmsv {

namespace {

const double kZetaSet[] = {0.2, 0.5, 1.0, 2.0};

MonomialOp maybe_flipped_kx(bool flip) {
  MonomialOp kx = build_kx();
  if (flip) kx.terms[0].coeff = -kx.terms[0].coeff;
  return kx;
}

double sparse_max_abs(const SparseCd& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

// The channel rotation conserves n_plus + n_minus per channel; sectors with
// total above d-1 are clipped by the per-mode cutoff, so the conjugation is
// only the exact rotation on states whose channel total fits in a full sector.
double sparse_sector_max_abs(const SparseCd& m, int d, Channel ch) {
  const int lo = ch == Channel::A ? 0 : 2;
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it) {
      const auto nr = unflatten(it.row(), d);
      const auto nc = unflatten(it.col(), d);
      if (nr[lo] + nr[lo + 1] > d - 1 || nc[lo] + nc[lo + 1] > d - 1) continue;
      worst = std::max(worst, std::abs(it.value()));
    }
  return worst;
}

double sparse_interior_max_abs(const SparseCd& m, int d) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it) {
      if (!is_interior(unflatten(it.row(), d), d)) continue;
      if (!is_interior(unflatten(it.col(), d), d)) continue;
      worst = std::max(worst, std::abs(it.value()));
    }
  return worst;
}

struct Suite {
  std::vector<CheckResult> results;
  void add(const std::string& name, double measured, double tolerance) {
    results.push_back({name, measured, tolerance, measured <= tolerance});
  }
  void add_at_least(const std::string& name, double measured, double floor) {
    // For checks that must exceed a floor (symmetry breaking etc.).
    results.push_back({name, measured, floor, measured > floor});
  }
};

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  Suite suite;
  const MonomialOp kx_op = maybe_flipped_kx(opts.inject_kx_sign_flip);

  // --- fock_core ---
  {
    const TruncationSpec t6(6);
    const SparseCd kx = materialize(kx_op, t6);
    const SparseCd k0 = materialize(build_k0(), t6);
    suite.add("fock/k0-kx-commutator-interior",
              commutator_interior_norm(k0, kx, t6), 1e-12);
    suite.add("fock/kx-antihermitian-interior",
              sparse_interior_max_abs(SparseCd(kx + SparseCd(kx.adjoint())), 6),
              1e-12);
    const SparseCd k0a = materialize(build_k0_channel(Channel::A), t6);
    const SparseCd k0b = materialize(build_k0_channel(Channel::B), t6);
    suite.add("fock/k0-additivity-entrywise",
              sparse_max_abs(SparseCd(k0 - k0a - k0b)), 0.0);
    suite.add("fock/k0-hermitian", hermiticity_defect(k0), 1e-12);

    const Eigen::VectorXcd vac = FourModeState::vacuum(t6).to_vector();
    suite.add("fock/k0-annihilates-vacuum", (k0 * vac).norm(), 0.0);

    // Closed-form mode rotation vs conjugation by exp(i delta K0^A).
    const double delta = kPi / 8.0;
    const SparseCd u = channel_rotation_unitary(Channel::A, delta, t6);
    double worst = 0.0;
    for (Polarization pol : {Polarization::Plus, Polarization::Minus}) {
      const SparseCd closed =
          materialize(rotated_annihilator_op(Channel::A, pol, delta), t6);
      const SparseCd bare =
          annihilator_matrix({Channel::A, pol}, t6);
      const SparseCd conj = (u * bare * SparseCd(u.adjoint())).eval();
      worst = std::max(
          worst, sparse_sector_max_abs(SparseCd(conj - closed), 6, Channel::A));
    }
    suite.add("fock/rotation-closed-form-vs-conjugation", worst, 1e-10);
  }
  {
    // Unitarity of exp(zeta K_x) on the truncated space.
    const TruncationSpec t8(8);
    const SparseCd kx = materialize(build_kx(), t8);
    const Eigen::VectorXcd vac = FourModeState::vacuum(t8).to_vector();
    const Eigen::VectorXcd w = expm_apply(kx, cd{0.3, 0.0}, vac);
    suite.add("fock/exp-antihermitian-unitarity", std::abs(w.norm() - 1.0),
              1e-10);
  }
  {
    // Backend equivalence: structured vs explicit-matrix expectations.
    double worst = 0.0;
    for (int d = 2; d <= 8; ++d) {
      const TruncationSpec trunc(d);
      for (double z : {0.0, 0.3, 0.7}) {
        const FourModeState psi =
            build_state_schmidt(SqueezingParameter(z), trunc);
        const std::vector<MonomialOp> observables = {
            build_kx(), build_k0(), build_k0_channel(Channel::A),
            number_op({Channel::A, Polarization::Plus}),
            polarization_operator(Channel::A, 0.3),
            product(rotated_number_op(Channel::A, Polarization::Plus, 0.2),
                    rotated_number_op(Channel::B, Polarization::Minus, 0.5),
                    true)};
        for (const auto& op : observables) {
          const cd s = expectation(op, psi);
          const cd m = expectation_matrix(materialize(op, trunc), psi);
          worst = std::max(worst, std::abs(s - m));
        }
      }
    }
    suite.add("fock/backend-equivalence", worst, 1e-9);
  }

  // --- tmsv_state ---
  {
    double tail_defect = 0.0, norm_defect = 0.0, photon_defect = 0.0;
    bool monotonic = true;
    double photon_tol = 0.0;
    for (double z : kZetaSet) {
      const TruncationSpec trunc =
          choose_cutoff(SqueezingParameter(z), opts.tail_tolerance);
      const SchmidtProfile p = schmidt_profile(SqueezingParameter(z), trunc);
      double sum2 = 0.0;
      for (int n = 0; n < trunc.cutoff; ++n) {
        sum2 += p.lambdas[n] * p.lambdas[n];
        if (n > 0 && !(p.lambdas[n] < p.lambdas[n - 1])) monotonic = false;
      }
      tail_defect = std::max(tail_defect, std::abs(sum2 + p.tail_mass - 1.0));
      const FourModeState psi = build_state_schmidt(SqueezingParameter(z), trunc);
      norm_defect = std::max(norm_defect, std::abs(psi.norm() - 1.0));
      const double n_mean =
          expectation(number_op({Channel::A, Polarization::Plus}), psi).real();
      photon_defect = std::max(photon_defect,
                               std::abs(n_mean - std::sinh(z) * std::sinh(z)));
      photon_tol = std::max(photon_tol, 10.0 * trunc.cutoff * p.tail_mass);
    }
    suite.add("tmsv/profile-tail-identity", tail_defect, 1e-12);
    suite.add("tmsv/profile-monotonic", monotonic ? 0.0 : 1.0, 0.5);
    suite.add("tmsv/state-norm", norm_defect, 1e-10);
    suite.add("tmsv/mean-photon-number", photon_defect,
              std::max(photon_tol, 1e-12));
  }
  {
    double worst = 0.0;
    // Tolerances follow the Schmidt tail at the fixed cutoff:
    // tanh(0.3)^20 ~ 4e-11, tanh(0.7)^24 ~ 5.6e-6.
    const struct { double z; int d; double tol; } cases[] = {
        {0.3, 10, 1e-8}, {0.7, 12, 1e-5}};
    for (const auto& c : cases) {
      const TruncationSpec trunc(c.d);
      const FourModeState schmidt =
          build_state_schmidt(SqueezingParameter(c.z), trunc);
      const TruncationSpec trunc_flip(c.d);
      // Build via the (possibly corrupted) exponential map.
      const SparseCd kx = materialize(kx_op, trunc_flip);
      const FourModeState expo =
          expm_apply(kx, cd{c.z, 0.0}, FourModeState::vacuum(trunc_flip));
      worst = std::max(worst, (1.0 - fidelity(schmidt, expo)) / c.tol);
    }
    suite.add("tmsv/cross-construction-fidelity", worst, 1.0);
  }

  // --- bell_polarization ---
  {
    double e_defect = 0.0, e_tol = 0.0;
    double norm_defect = 0.0, norm_tol = 0.0;
    double parity_defect = 0.0, parity_tol = 0.0;
    double mean_defect = 0.0;
    double s_min = 1e9, s_max = -1e9;
    for (double z : kZetaSet) {
      const TruncationSpec trunc =
          choose_cutoff(SqueezingParameter(z), opts.tail_tolerance);
      const SchmidtProfile p = schmidt_profile(SqueezingParameter(z), trunc);
      const FourModeState psi = build_state_schmidt(SqueezingParameter(z), trunc);
      const Correlator corr(psi);
      // Quartic moments weight the Schmidt tail by ~n^2; build the E-law
      // state at a 100x tighter tail so its truncation error stays below
      // the 1e-8 floor.
      const TruncationSpec trunc_e =
          choose_cutoff(SqueezingParameter(z), opts.tail_tolerance * 1e-2);
      const Correlator corr_e(build_state_schmidt(SqueezingParameter(z), trunc_e));
      for (int k = 0; k < 50; ++k) {
        const double da = kPi * k / 50.0;
        const double db = kPi * ((k * 7) % 50) / 50.0 + 0.1;
        e_defect = std::max(e_defect, std::abs(corr_e.normalized_E(da, db) -
                                               std::cos(2.0 * (da - db))));
      }
      e_tol = std::max(e_tol, std::max(1e-8, 100.0 * p.tail_mass));
      const CorrelationReport rep = corr.components(0.0, 0.0);
      const double closed = 2.0 * std::pow(std::cosh(z) * std::sinh(z), 2);
      norm_defect = std::max(norm_defect, std::abs(rep.normalizer - closed));
      norm_tol = std::max(norm_tol, 10.0 * rep.trunc_bound);
      const double s = corr.chsh(canonical_angles()).s_value;
      s_min = std::min(s_min, s);
      s_max = std::max(s_max, s);
      parity_defect = std::max(
          parity_defect, std::abs(parity_expectation(psi) - parity_closed_form(z)));
      parity_tol = std::max(parity_tol, 10.0 * p.tail_mass);
      mean_defect = std::max(mean_defect,
                             std::max(std::abs(mean_polarization(psi, Channel::A)),
                                      std::abs(mean_polarization(psi, Channel::B))));
    }
    suite.add("bell/e-law-cosine", e_defect, e_tol);
    suite.add("bell/normalizer-closed-form", norm_defect, norm_tol);
    suite.add("bell/chsh-zeta-independence", s_max - s_min, 1e-8);
    suite.add("bell/chsh-canonical-maximal", std::abs(s_max - kTsirelson), 1e-6);
    suite.add("bell/parity-closed-form", parity_defect, parity_tol);
    suite.add("bell/mean-polarization-vanishes", mean_defect, 1e-9);
  }
  {
    // E-law on the exponential-map state; sensitive to a corrupted K_x.
    // A corrupted generator can leave the same-angle correlation degenerate,
    // which surfaces as an exception; record that as a failure, not a crash.
    double defect = std::numeric_limits<double>::infinity();
    try {
      const TruncationSpec trunc(8);
      const SparseCd kx = materialize(kx_op, trunc);
      const FourModeState psi =
          expm_apply(kx, cd{0.3, 0.0}, FourModeState::vacuum(trunc));
      const Correlator corr(psi);
      defect = 0.0;
      for (double da : {0.0, 0.4, 1.1})
        for (double db : {0.2, 0.9})
          defect = std::max(defect, std::abs(corr.normalized_E(da, db) -
                                             std::cos(2.0 * (da - db))));
    } catch (const std::exception&) {
    }
    suite.add("bell/e-law-exponential-state", defect, 1e-6);
  }
  {
    // Tsirelson ceiling over random quads with the numerical E at zeta = 1.
    const TruncationSpec trunc =
        choose_cutoff(SqueezingParameter(1.0), opts.tail_tolerance);
    const FourModeState psi =
        build_state_schmidt(SqueezingParameter(1.0), trunc);
    const Correlator corr(psi);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, kPi);
    double s_worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const AngleQuad q(uni(rng), uni(rng), uni(rng), uni(rng));
      s_worst = std::max(s_worst, corr.chsh(q).s_value);
    }
    suite.add("bell/tsirelson-ceiling", s_worst, kTsirelson + 1e-6);

    // Common rotation leaves the report invariant; a single-channel
    // rotation must move at least one component.
    const double phi = 0.3;
    const CorrelationReport r0 = corr.components(0.2, 0.5);
    const CorrelationReport r1 = corr.components(0.2 + phi, 0.5 + phi);
    double shift = std::max({std::abs(r0.c_pp - r1.c_pp),
                             std::abs(r0.c_mm - r1.c_mm),
                             std::abs(r0.c_pm - r1.c_pm),
                             std::abs(r0.c_mp - r1.c_mp),
                             std::abs(r0.c_combined - r1.c_combined),
                             std::abs(r0.e_value - r1.e_value)});
    // Loose tail tolerances leave visible boundary amplitudes, so scale the
    // invariance tolerance with the moment-weighted truncation bound.
    suite.add("bell/common-rotation-invariance", shift,
              std::max(1e-9, r0.trunc_bound));
    const CorrelationReport r2 = corr.components(0.2 + phi, 0.5);
    double single = std::max({std::abs(r0.c_pp - r2.c_pp),
                              std::abs(r0.c_mm - r2.c_mm),
                              std::abs(r0.c_pm - r2.c_pm),
                              std::abs(r0.c_mp - r2.c_mp)});
    suite.add_at_least("bell/single-channel-rotation-shifts", single, 1e-3);
  }
  {
    const TruncationSpec t10(10);
    const FourModeState psi =
        build_state_schmidt(SqueezingParameter(0.3), t10);
    suite.add("bell/k0-symmetry-fidelity",
              1.0 - symmetry_fidelity(psi, 0.7), 1e-8);
    suite.add_at_least("bell/channel-rotation-breaks-symmetry",
                       1.0 - channel_symmetry_fidelity(psi, Channel::A, 0.7),
                       1e-3);
  }

  // --- wigner_phase_space ---
  {
    std::mt19937_64 rng(opts.seed + 1);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    double min_w = 1e300;
    for (double z : {0.0, 0.5, 1.0})
      for (int k = 0; k < 100; ++k) {
        const PhasePoint pt{cd{uni(rng), uni(rng)}, cd{uni(rng), uni(rng)}};
        min_w = std::min(min_w, wigner_analytic(z, pt));
      }
    suite.add("wigner/positivity", min_w >= 0.0 ? 0.0 : 1.0, 0.5);

    double norm_defect = 0.0;
    for (double z : {0.0, 0.3, 1.0}) {
      const NormalizationResult nr = wigner_normalization(z, default_grid(z));
      norm_defect = std::max(norm_defect, std::abs(nr.integral - 1.0));
    }
    suite.add("wigner/normalization", norm_defect, 1e-4);

    const TruncationSpec t12(12);
    const FourModeState psi =
        build_state_schmidt(SqueezingParameter(0.3), t12);
    std::uniform_real_distribution<double> small(-0.7, 0.7);
    double dp_defect = 0.0;
    for (int k = 0; k < 20; ++k) {
      const PhasePoint pt{cd{small(rng), small(rng)}, cd{small(rng), small(rng)}};
      dp_defect = std::max(dp_defect, std::abs(wigner_from_state(psi, pt) -
                                               wigner_analytic(0.3, pt)));
    }
    suite.add("wigner/displaced-parity-consistency", dp_defect, 1e-6);
  }

  // --- chsh_optimizer ---
  {
    double worst = 0.0;
    for (double step : {kPi / 24.0, kPi / 48.0, kPi / 96.0}) {
      OptimizerConfig cfg;
      cfg.coarse_step = step;
      const Optimum opt = optimize(analytic_e_law, cfg);
      worst = std::max(worst, std::abs(opt.best.s_value - kTsirelson));
    }
    suite.add("optimizer/analytic-maximum", worst, 1e-9);

    OptimizerConfig offset_cfg;
    offset_cfg.grid_offset = 0.3;
    const Optimum base = optimize(analytic_e_law);
    const Optimum shifted = optimize(analytic_e_law, offset_cfg);
    suite.add("optimizer/grid-offset-invariance",
              std::abs(base.best.s_value - shifted.best.s_value), 1e-9);

    std::mt19937_64 rng(opts.seed + 2);
    std::uniform_real_distribution<double> uni(0.0, kPi);
    double ceiling = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const AngleQuad q(uni(rng), uni(rng), uni(rng), uni(rng));
      ceiling = std::max(ceiling, verify_angle_set(q, analytic_e_law));
    }
    suite.add("optimizer/random-quad-ceiling", ceiling, kTsirelson + 1e-9);
  }

  return suite.results;
}

}  // namespace tmsv
