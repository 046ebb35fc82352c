#include "tmsv/fock_core.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace tmsv {

namespace {

Monomial make_monomial(cd coeff, std::initializer_list<LadderFactor> factors) {
  Monomial m;
  m.coeff = coeff;
  m.factors.assign(factors);
  return m;
}

}  // namespace

MonomialOp adjoint(const MonomialOp& op) {
  MonomialOp out;
  out.hermitian = op.hermitian;
  out.terms.reserve(op.terms.size());
  for (const auto& t : op.terms) {
    Monomial m;
    m.coeff = std::conj(t.coeff);
    m.factors.assign(t.factors.rbegin(), t.factors.rend());
    for (auto& f : m.factors) f.dagger = !f.dagger;
    out.terms.push_back(std::move(m));
  }
  return out;
}

MonomialOp annihilator_op(ModeIndex mode) {
  MonomialOp op;
  op.terms.push_back(make_monomial(1.0, {{mode.slot(), false}}));
  return op;
}

MonomialOp creator_op(ModeIndex mode) {
  MonomialOp op;
  op.terms.push_back(make_monomial(1.0, {{mode.slot(), true}}));
  return op;
}

MonomialOp number_op(ModeIndex mode) {
  MonomialOp op;
  op.terms.push_back(make_monomial(1.0, {{mode.slot(), true}, {mode.slot(), false}}));
  op.hermitian = true;
  return op;
}

MonomialOp identity_op() {
  MonomialOp op;
  op.terms.push_back(make_monomial(1.0, {}));
  op.hermitian = true;
  return op;
}

MonomialOp build_kx() {
  constexpr int ap = 0, am = 1, bp = 2, bm = 3;
  MonomialOp op;
  op.terms.push_back(make_monomial(+1.0, {{ap, true}, {bp, true}}));
  op.terms.push_back(make_monomial(+1.0, {{am, true}, {bm, true}}));
  op.terms.push_back(make_monomial(-1.0, {{ap, false}, {bp, false}}));
  op.terms.push_back(make_monomial(-1.0, {{am, false}, {bm, false}}));
  return op;
}

MonomialOp build_k0_channel(Channel ch) {
  const int plus = ModeIndex{ch, Polarization::Plus}.slot();
  const int minus = ModeIndex{ch, Polarization::Minus}.slot();
  const cd i{0.0, 1.0};
  MonomialOp op;
  op.terms.push_back(make_monomial(+i, {{plus, true}, {minus, false}}));
  op.terms.push_back(make_monomial(-i, {{minus, true}, {plus, false}}));
  op.hermitian = true;
  return op;
}

MonomialOp build_k0() {
  MonomialOp op = build_k0_channel(Channel::A);
  op += build_k0_channel(Channel::B);
  op.hermitian = true;
  return op;
}

ModeRotation rotate_modes(double delta) {
  const double c = std::cos(delta), s = std::sin(delta);
  return ModeRotation{{{c, s}, {-s, c}}};
}

MonomialOp rotated_annihilator_op(Channel ch, Polarization pol, double delta) {
  const ModeRotation r = rotate_modes(delta);
  const int row = pol == Polarization::Minus ? 1 : 0;
  MonomialOp op;
  for (int col = 0; col < 2; ++col) {
    if (r.coeff[row][col] == 0.0) continue;
    const int slot = ModeIndex{ch, col ? Polarization::Minus : Polarization::Plus}.slot();
    op.terms.push_back(make_monomial(r.coeff[row][col], {{slot, false}}));
  }
  return op;
}

MonomialOp rotated_number_op(Channel ch, Polarization pol, double delta) {
  const MonomialOp a = rotated_annihilator_op(ch, pol, delta);
  MonomialOp n = product(adjoint(a), a, /*hermitian=*/true);
  return n;
}

MonomialOp product(const MonomialOp& left, const MonomialOp& right,
                   bool hermitian) {
  MonomialOp out;
  out.hermitian = hermitian;
  out.terms.reserve(left.terms.size() * right.terms.size());
  for (const auto& l : left.terms)
    for (const auto& r : right.terms) {
      Monomial m;
      m.coeff = l.coeff * r.coeff;
      m.factors = l.factors;
      m.factors.insert(m.factors.end(), r.factors.begin(), r.factors.end());
      out.terms.push_back(std::move(m));
    }
  return out;
}

// ---------------------------------------------------------------------------
// FourModeState

FourModeState::FourModeState(int cutoff, AmplitudeMap amplitudes,
                             double truncation_error)
    : cutoff_(cutoff), amps_(std::move(amplitudes)),
      truncation_error_(truncation_error) {
  if (cutoff < 2) throw std::invalid_argument("FourModeState: cutoff must be >= 2");
  if (truncation_error < 0.0)
    throw std::invalid_argument("FourModeState: negative truncation error");
  double n2 = 0.0;
  for (auto it = amps_.begin(); it != amps_.end();) {
    const auto n = unpack(it->first);
    for (int k = 0; k < 4; ++k)
      if (n[k] < 0 || n[k] >= cutoff)
        throw std::invalid_argument("FourModeState: occupation out of range");
    if (it->second == cd{0.0, 0.0}) {
      it = amps_.erase(it);
    } else {
      n2 += std::norm(it->second);
      ++it;
    }
  }
  if (n2 <= 0.0)
    throw std::invalid_argument("FourModeState: zero state is not normalizable");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& [k, a] : amps_) a *= inv;
}

FourModeState FourModeState::vacuum(const TruncationSpec& trunc) {
  AmplitudeMap m;
  m.emplace(pack({0, 0, 0, 0}), cd{1.0, 0.0});
  return FourModeState(trunc.cutoff, std::move(m), 0.0);
}

FourModeState FourModeState::from_vector(const Eigen::VectorXcd& v, int cutoff,
                                         double truncation_error) {
  const Eigen::Index dim =
      static_cast<Eigen::Index>(cutoff) * cutoff * cutoff * cutoff;
  if (v.size() != dim)
    throw std::invalid_argument("FourModeState::from_vector: dimension mismatch");
  AmplitudeMap m;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (v[i] != cd{0.0, 0.0}) m.emplace(pack(unflatten(i, cutoff)), v[i]);
  return FourModeState(cutoff, std::move(m), truncation_error);
}

double FourModeState::norm() const {
  double n2 = 0.0;
  for (const auto& [k, a] : amps_) n2 += std::norm(a);
  return std::sqrt(n2);
}

Eigen::VectorXcd FourModeState::to_vector() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(cutoff_) * cutoff_ * cutoff_ * cutoff_);
  for (const auto& [k, a] : amps_) v[flatten(unpack(k), cutoff_)] = a;
  return v;
}

// ---------------------------------------------------------------------------
// Structured expectation

cd expectation(const MonomialOp& op, const FourModeState& psi) {
  const int d = psi.cutoff();
  cd acc{0.0, 0.0};
  for (const auto& [key, amp] : psi.amplitudes()) {
    for (const auto& term : op.terms) {
      auto n = FourModeState::unpack(key);
      double factor = 1.0;
      bool dead = false;
      // Rightmost factor acts first; creation past the cutoff and
      // annihilation of the ground level both terminate the branch,
      // matching the truncated matrix product exactly.
      for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        int& occ = n[it->mode];
        if (it->dagger) {
          if (occ >= d - 1) { dead = true; break; }
          factor *= std::sqrt(static_cast<double>(occ + 1));
          ++occ;
        } else {
          if (occ == 0) { dead = true; break; }
          factor *= std::sqrt(static_cast<double>(occ));
          --occ;
        }
      }
      if (dead) continue;
      const cd target = psi.amplitude(n);
      if (target == cd{0.0, 0.0}) continue;
      acc += std::conj(target) * term.coeff * factor * amp;
    }
  }
  if (op.hermitian && std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error(
        "expectation: imaginary part exceeds tolerance for hermitian operator");
  return acc;
}

// ---------------------------------------------------------------------------
// Explicit-matrix backend

SparseCd single_mode_annihilator(int d) {
  SparseCd a(d, d);
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(d - 1);
  for (int n = 1; n < d; ++n)
    trip.emplace_back(n - 1, n, cd{std::sqrt(static_cast<double>(n)), 0.0});
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SparseCd embed_single_mode(const SparseCd& m, int slot, int d) {
  if (slot < 0 || slot >= kNumModes)
    throw std::invalid_argument("embed_single_mode: bad slot");
  auto ident = [](Eigen::Index n) {
    SparseCd i(n, n);
    i.setIdentity();
    return i;
  };
  const Eigen::Index d1 = d;
  // Row-major flattening makes slot 0 the slowest index.
  Eigen::Index left = 1, right = 1;
  for (int s = 0; s < slot; ++s) left *= d1;
  for (int s = slot + 1; s < kNumModes; ++s) right *= d1;
  SparseCd out = Eigen::kroneckerProduct(ident(left), m).eval();
  out = Eigen::kroneckerProduct(out, ident(right)).eval();
  return out;
}

SparseCd annihilator_matrix(ModeIndex mode, const TruncationSpec& trunc) {
  return embed_single_mode(single_mode_annihilator(trunc.cutoff), mode.slot(),
                           trunc.cutoff);
}

SparseCd materialize(const MonomialOp& op, const TruncationSpec& trunc) {
  const int d = trunc.cutoff;
  const Eigen::Index dim = trunc.dim();
  const SparseCd a = single_mode_annihilator(d);
  const SparseCd adag = SparseCd(a.adjoint());
  std::array<SparseCd, kNumModes> ann, cre;
  for (int s = 0; s < kNumModes; ++s) {
    ann[s] = embed_single_mode(a, s, d);
    cre[s] = embed_single_mode(adag, s, d);
  }
  SparseCd ident(dim, dim);
  ident.setIdentity();
  SparseCd total(dim, dim);
  for (const auto& term : op.terms) {
    SparseCd m = ident;
    for (const auto& f : term.factors)
      m = (m * (f.dagger ? cre[f.mode] : ann[f.mode])).eval();
    total = (total + term.coeff * m).eval();
  }
  total.prune(cd{0.0, 0.0});
  return total;
}

double hermiticity_defect(const SparseCd& m) {
  SparseCd diff = m - SparseCd(m.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double commutator_interior_norm(const SparseCd& x, const SparseCd& y,
                                const TruncationSpec& trunc) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != trunc.dim())
    throw std::invalid_argument("commutator_interior_norm: dimension mismatch");
  const int d = trunc.cutoff;
  SparseCd comm = (x * y - y * x).eval();
  double worst = 0.0;
  for (int k = 0; k < comm.outerSize(); ++k)
    for (SparseCd::InnerIterator it(comm, k); it; ++it) {
      if (!is_interior(unflatten(it.row(), d), d)) continue;
      if (!is_interior(unflatten(it.col(), d), d)) continue;
      worst = std::max(worst, std::abs(it.value()));
    }
  return worst;
}

SparseCd channel_rotation_unitary(Channel ch, double delta,
                                  const TruncationSpec& trunc) {
  const int d = trunc.cutoff;
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  // Two-mode block of K0^ch on (plus, minus) occupation space.
  const SparseCd a = single_mode_annihilator(d);
  const SparseCd adag = SparseCd(a.adjoint());
  SparseCd id1(d, d);
  id1.setIdentity();
  SparseCd plus_dag_minus = Eigen::kroneckerProduct(adag, a).eval();
  SparseCd minus_dag_plus = Eigen::kroneckerProduct(a, adag).eval();
  Eigen::MatrixXcd block =
      cd{0.0, 1.0} * (Eigen::MatrixXcd(plus_dag_minus) -
                      Eigen::MatrixXcd(minus_dag_plus));
  Eigen::MatrixXcd u2 = (cd{0.0, 1.0} * delta * block).exp();
  SparseCd u2s = u2.sparseView(1.0, 1e-16);
  SparseCd id2(d2, d2);
  id2.setIdentity();
  if (ch == Channel::A) return Eigen::kroneckerProduct(u2s, id2).eval();
  return Eigen::kroneckerProduct(id2, u2s).eval();
}

Eigen::VectorXcd expm_apply(const SparseCd& g, cd scale,
                            const Eigen::VectorXcd& v) {
  if (g.rows() != v.size())
    throw std::invalid_argument("expm_apply: dimension mismatch");
  // 1-norm estimate for sub-step control.
  double norm1 = 0.0;
  for (int k = 0; k < g.outerSize(); ++k) {
    double col = 0.0;
    for (SparseCd::InnerIterator it(g, k); it; ++it) col += std::abs(it.value());
    norm1 = std::max(norm1, col);
  }
  const double theta = std::abs(scale) * norm1;
  const int steps = std::max(1, static_cast<int>(std::ceil(theta / 4.0)));
  const cd h = scale / static_cast<double>(steps);

  Eigen::VectorXcd w = v;
  constexpr int kMaxTerms = 400;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = w;
    Eigen::VectorXcd acc = w;
    bool converged = false;
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = (h / static_cast<double>(k)) * (g * term).eval();
      acc += term;
      if (term.norm() <= 1e-16 * acc.norm()) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("expm_apply: Taylor iteration did not converge");
    w = acc;
  }
  return w;
}

FourModeState expm_apply(const SparseCd& g, cd scale, const FourModeState& v) {
  const Eigen::VectorXcd in = v.to_vector();
  const Eigen::VectorXcd out = expm_apply(g, scale, in);
  const double ratio2 = out.squaredNorm() / in.squaredNorm();
  const double leakage = std::max(0.0, 1.0 - ratio2);
  return FourModeState::from_vector(out, v.cutoff(),
                                    v.truncation_error() + leakage);
}

cd expectation_matrix(const SparseCd& op, const FourModeState& psi) {
  const Eigen::VectorXcd v = psi.to_vector();
  if (op.rows() != v.size())
    throw std::invalid_argument("expectation_matrix: dimension mismatch");
  return v.dot(op * v);
}

}  // namespace tmsv
