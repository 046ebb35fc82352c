#include "tmsv/tmsv_state.hpp"

#include <cmath>

namespace tmsv {

SchmidtProfile schmidt_profile(SqueezingParameter zeta,
                               const TruncationSpec& trunc) {
  const int d = trunc.cutoff;
  const double t = std::tanh(zeta.zeta);
  const double inv_cosh = 1.0 / std::cosh(zeta.zeta);
  SchmidtProfile p;
  p.lambdas.resize(d);
  double tn = 1.0;
  for (int n = 0; n < d; ++n) {
    p.lambdas[n] = tn * inv_cosh;
    tn *= t;
  }
  p.tail_mass = std::pow(t, 2.0 * d);
  return p;
}

TruncationSpec choose_cutoff(SqueezingParameter zeta, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("choose_cutoff: eps must lie in (0,1)");
  if (zeta.zeta == 0.0) return TruncationSpec(2, eps);
  const double t2 = std::tanh(zeta.zeta) * std::tanh(zeta.zeta);
  int d = std::max(2, static_cast<int>(std::ceil(std::log(eps) / std::log(t2))));
  while (d > 2 && std::pow(t2, d - 1) <= eps) --d;
  while (std::pow(t2, d) > eps) ++d;
  return TruncationSpec(d, eps);
}

FourModeState build_state_schmidt(SqueezingParameter zeta,
                                  const TruncationSpec& trunc) {
  const int d = trunc.cutoff;
  const SchmidtProfile p = schmidt_profile(zeta, trunc);
  const double captured = 1.0 - p.tail_mass;  // sum of lambda_n^2 per sector
  const double trunc_err = 1.0 - captured * captured;
  FourModeState::AmplitudeMap amps;
  amps.reserve(static_cast<std::size_t>(d) * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const double a = p.lambdas[n] * p.lambdas[m];
      if (a != 0.0)
        amps.emplace(FourModeState::pack({n, m, n, m}), cd{a, 0.0});
    }
  return FourModeState(d, std::move(amps), trunc_err);
}

FourModeState build_state_exponential(SqueezingParameter zeta,
                                      const TruncationSpec& trunc) {
  if (trunc.cutoff > 12)
    throw std::invalid_argument(
        "build_state_exponential: explicit-matrix backend limited to cutoff <= 12");
  const SparseCd kx = materialize(build_kx(), trunc);
  const FourModeState vac = FourModeState::vacuum(trunc);
  FourModeState out = expm_apply(kx, cd{zeta.zeta, 0.0}, vac);
  // The truncated generator is exactly anti-hermitian, so no norm is lost;
  // carry the analytic tail estimate instead.
  const SchmidtProfile p = schmidt_profile(zeta, trunc);
  const double captured = 1.0 - p.tail_mass;
  return FourModeState(out.cutoff(), out.amplitudes(),
                       1.0 - captured * captured);
}

double fidelity(const FourModeState& a, const FourModeState& b) {
  if (a.cutoff() != b.cutoff())
    throw std::invalid_argument("fidelity: cutoff mismatch");
  cd acc{0.0, 0.0};
  const auto& small =
      a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  const auto& large =
      a.amplitudes().size() <= b.amplitudes().size() ? b : a;
  for (const auto& [k, amp] : small.amplitudes()) {
    auto it = large.amplitudes().find(k);
    if (it == large.amplitudes().end()) continue;
    // <a|b> regardless of which map is iterated: conjugate the a-amplitude.
    if (&small == &a)
      acc += std::conj(amp) * it->second;
    else
      acc += std::conj(it->second) * amp;
  }
  return std::abs(acc);
}

}  // namespace tmsv
