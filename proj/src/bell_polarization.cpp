#include "tmsv/bell_polarization.hpp"

#include <cmath>
#include <limits>

namespace tmsv {

MonomialOp polarization_operator(Channel ch, double delta) {
  MonomialOp op = rotated_number_op(ch, Polarization::Plus, delta);
  MonomialOp minus = rotated_number_op(ch, Polarization::Minus, delta);
  minus *= cd{-1.0, 0.0};
  op += minus;
  op.hermitian = true;
  return op;
}

Correlator::Correlator(const FourModeState& state) {
  const int d = state.cutoff();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          MonomialOp a = product(
              creator_op({Channel::A, i ? Polarization::Minus : Polarization::Plus}),
              annihilator_op({Channel::A, j ? Polarization::Minus : Polarization::Plus}));
          MonomialOp b = product(
              creator_op({Channel::B, k ? Polarization::Minus : Polarization::Plus}),
              annihilator_op({Channel::B, l ? Polarization::Minus : Polarization::Plus}));
          const cd val = expectation(product(a, b), state);
          if (std::abs(val.imag()) > 1e-10)
            throw std::runtime_error(
                "Correlator: base correlator has a large imaginary part");
          base_[i][j][k][l] = val.real();
        }
  // Quartic moments weight the discarded tail by occupation numbers up to
  // (d-1)^2; scale the raw tail mass accordingly.
  trunc_bound_ = state.truncation_error() * 4.0 * static_cast<double>(d) * d
               + 1e-12;
}

double Correlator::combined(double delta_a, double delta_b) const {
  const ModeRotation ra = rotate_modes(delta_a);
  const ModeRotation rb = rotate_modes(delta_b);
  // n_alpha(dA) n_beta(dB) contracted against the cached base tensor;
  // the +/- difference in each channel turns the projector sum into
  // sum_alpha (-1)^alpha R[alpha][i] R[alpha][j].
  double wa[2][2], wb[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      wa[i][j] = ra.coeff[0][i] * ra.coeff[0][j] - ra.coeff[1][i] * ra.coeff[1][j];
      wb[i][j] = rb.coeff[0][i] * rb.coeff[0][j] - rb.coeff[1][i] * rb.coeff[1][j];
    }
  double acc = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          acc += wa[i][j] * wb[k][l] * base_[i][j][k][l];
  return acc;
}

CorrelationReport Correlator::components(double delta_a, double delta_b) const {
  const ModeRotation ra = rotate_modes(delta_a);
  const ModeRotation rb = rotate_modes(delta_b);
  double c[2][2];  // [alpha][beta]
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta) {
      double acc = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              acc += ra.coeff[alpha][i] * ra.coeff[alpha][j] *
                     rb.coeff[beta][k] * rb.coeff[beta][l] * base_[i][j][k][l];
      c[alpha][beta] = acc;
    }
  CorrelationReport r;
  r.c_pp = c[0][0];
  r.c_mm = c[1][1];
  r.c_pm = c[0][1];
  r.c_mp = c[1][0];
  r.c_combined = r.c_pp + r.c_mm - r.c_pm - r.c_mp;
  r.trunc_bound = trunc_bound_;
  const double same_a = combined(delta_a, delta_a);
  const double same_b = combined(delta_b, delta_b);
  if (same_a <= 0.0 || same_b <= 0.0) {
    r.degenerate = true;
    r.normalizer = 0.0;
    r.e_value = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.normalizer = std::sqrt(same_a * same_b);
    r.e_value = r.c_combined / r.normalizer;
  }
  return r;
}

double Correlator::normalized_E(double delta, double delta_prime) const {
  const CorrelationReport r = components(delta, delta_prime);
  if (r.degenerate) throw DegenerateNormalizer();
  return r.e_value;
}

ChshResult Correlator::chsh(const AngleQuad& q) const {
  ChshResult res;
  res.angles = q;
  const double s = normalized_E(q.delta_a, q.delta_b) +
                   normalized_E(q.delta_a, q.delta_b_prime) +
                   normalized_E(q.delta_a_prime, q.delta_b) -
                   normalized_E(q.delta_a_prime, q.delta_b_prime);
  res.s_value = std::abs(s);
  res.violates = res.s_value > 2.0;
  res.maximal = std::abs(res.s_value - kTsirelson) <= 1e-6;
  return res;
}

double mean_polarization(const FourModeState& state, Channel ch) {
  MonomialOp diff = number_op({ch, Polarization::Plus});
  MonomialOp minus = number_op({ch, Polarization::Minus});
  minus *= cd{-1.0, 0.0};
  diff += minus;
  diff.hermitian = true;
  return expectation(diff, state).real();
}

double parity_expectation(const FourModeState& state, ModeIndex mode) {
  const int slot = mode.slot();
  double acc = 0.0;
  for (const auto& [key, amp] : state.amplitudes()) {
    const auto n = FourModeState::unpack(key);
    acc += (n[slot] % 2 == 0 ? 1.0 : -1.0) * std::norm(amp);
  }
  return acc;
}

namespace {

double exp_fidelity(const FourModeState& state, const MonomialOp& generator,
                    double delta) {
  const TruncationSpec trunc(state.cutoff());
  const SparseCd g = materialize(generator, trunc);
  const Eigen::VectorXcd v = state.to_vector();
  const Eigen::VectorXcd w = expm_apply(g, cd{0.0, -delta}, v);
  return std::abs(v.dot(w)) / (v.norm() * w.norm());
}

}  // namespace

double symmetry_fidelity(const FourModeState& state, double delta) {
  return exp_fidelity(state, build_k0(), delta);
}

double channel_symmetry_fidelity(const FourModeState& state, Channel ch,
                                 double delta) {
  return exp_fidelity(state, build_k0_channel(ch), delta);
}

}  // namespace tmsv
