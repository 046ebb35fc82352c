#pragma once

// Truncated Fock-space algebra for four bosonic modes (a+, a-, b+, b-).
//
// Two operator backends are provided:
//   * structured: a finite sum of ladder-operator monomials, applied
//     combinatorially to sparse state amplitudes (scales to large cutoffs);
//   * explicit-matrix: sparse d^4 x d^4 matrices assembled from embedded
//     single-mode ladder matrices (ground truth at small cutoff).
//
// Tensor-factor ordering is fixed everywhere as (a+, a-, b+, b-) with
// row-major flattening: flat = ((n_ap * d + n_am) * d + n_bp) * d + n_bm.

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tmsv {

using cd = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<cd>;

inline constexpr int kNumModes = 4;

enum class Channel { A, B };
enum class Polarization { Plus, Minus };

struct ModeIndex {
  Channel channel = Channel::A;
  Polarization polarization = Polarization::Plus;

  // Slot in the fixed factor ordering: a+ = 0, a- = 1, b+ = 2, b- = 3.
  int slot() const {
    return (channel == Channel::B ? 2 : 0) +
           (polarization == Polarization::Minus ? 1 : 0);
  }
};

inline ModeIndex mode_from_slot(int slot) {
  if (slot < 0 || slot >= kNumModes)
    throw std::invalid_argument("mode_from_slot: slot out of range");
  return {slot >= 2 ? Channel::B : Channel::A,
          (slot & 1) ? Polarization::Minus : Polarization::Plus};
}

struct TruncationSpec {
  int cutoff = 2;               // Fock levels 0 .. cutoff-1 per mode
  double tail_tolerance = 1e-10;

  TruncationSpec() = default;
  explicit TruncationSpec(int d, double eps = 1e-10)
      : cutoff(d), tail_tolerance(eps) {
    if (d < 2) throw std::invalid_argument("TruncationSpec: cutoff must be >= 2");
    if (!(eps >= 0.0 && eps < 1.0))
      throw std::invalid_argument("TruncationSpec: tail_tolerance must lie in [0,1)");
  }

  Eigen::Index dim() const {
    Eigen::Index d = cutoff;
    return d * d * d * d;
  }
};

inline Eigen::Index flatten(const std::array<int, 4>& n, int d) {
  return ((static_cast<Eigen::Index>(n[0]) * d + n[1]) * d + n[2]) * d + n[3];
}

inline std::array<int, 4> unflatten(Eigen::Index idx, int d) {
  std::array<int, 4> n{};
  n[3] = static_cast<int>(idx % d); idx /= d;
  n[2] = static_cast<int>(idx % d); idx /= d;
  n[1] = static_cast<int>(idx % d); idx /= d;
  n[0] = static_cast<int>(idx);
  return n;
}

// Interior = all occupations <= d-2; ladder matrix elements are exact there.
inline bool is_interior(const std::array<int, 4>& n, int d) {
  return n[0] <= d - 2 && n[1] <= d - 2 && n[2] <= d - 2 && n[3] <= d - 2;
}

// ---------------------------------------------------------------------------
// Structured operator representation

struct LadderFactor {
  int mode = 0;        // slot index
  bool dagger = false;
};

// coeff * f[0] * f[1] * ... * f[k-1], factors written left to right as in the
// operator expression (rightmost factor acts first on a ket).
struct Monomial {
  cd coeff{1.0, 0.0};
  std::vector<LadderFactor> factors;
};

struct MonomialOp {
  std::vector<Monomial> terms;
  bool hermitian = false;

  MonomialOp& operator+=(const MonomialOp& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    hermitian = hermitian && other.hermitian;
    return *this;
  }
  MonomialOp& operator*=(cd scale) {
    for (auto& t : terms) t.coeff *= scale;
    return *this;
  }
};

MonomialOp adjoint(const MonomialOp& op);

MonomialOp annihilator_op(ModeIndex mode);
MonomialOp creator_op(ModeIndex mode);
MonomialOp number_op(ModeIndex mode);
MonomialOp identity_op();

// K_x = a+^† b+^† + a-^† b-^† - a+ b+ - a- b-    (anti-hermitian)
MonomialOp build_kx();
// K0 = i(a+^† a- - a-^† a+ + b+^† b- - b-^† b+)  (hermitian)
MonomialOp build_k0();
MonomialOp build_k0_channel(Channel ch);

// Rotated-mode annihilator a_pol(delta) = sum_p R[pol][p] a_p within a channel,
// with R = [[cos d, sin d], [-sin d, cos d]].
MonomialOp rotated_annihilator_op(Channel ch, Polarization pol, double delta);
// Number operator of the rotated mode, a_pol(delta)^† a_pol(delta).
MonomialOp rotated_number_op(Channel ch, Polarization pol, double delta);
// Product of two structured operators (concatenated factor lists).
MonomialOp product(const MonomialOp& left, const MonomialOp& right,
                   bool hermitian = false);

// 2x2 rotation coefficients of the Heisenberg mode rotation generated by
// exp(i delta K0^ch): row = rotated mode (+,-), column = original mode.
struct ModeRotation {
  double coeff[2][2];
};
ModeRotation rotate_modes(double delta);

// ---------------------------------------------------------------------------
// States

class FourModeState {
 public:
  using Key = std::uint64_t;
  using AmplitudeMap = std::unordered_map<Key, cd>;

  static Key pack(const std::array<int, 4>& n) {
    return (static_cast<Key>(n[0]) << 48) | (static_cast<Key>(n[1]) << 32) |
           (static_cast<Key>(n[2]) << 16) | static_cast<Key>(n[3]);
  }
  static std::array<int, 4> unpack(Key k) {
    return {static_cast<int>(k >> 48), static_cast<int>((k >> 32) & 0xffff),
            static_cast<int>((k >> 16) & 0xffff), static_cast<int>(k & 0xffff)};
  }

  // Normalizes on construction; throws on an identically-zero amplitude set.
  FourModeState(int cutoff, AmplitudeMap amplitudes, double truncation_error);

  static FourModeState vacuum(const TruncationSpec& trunc);
  static FourModeState from_vector(const Eigen::VectorXcd& v, int cutoff,
                                   double truncation_error);

  int cutoff() const { return cutoff_; }
  double norm() const;
  double truncation_error() const { return truncation_error_; }
  const AmplitudeMap& amplitudes() const { return amps_; }

  cd amplitude(const std::array<int, 4>& n) const {
    auto it = amps_.find(pack(n));
    return it == amps_.end() ? cd{0.0, 0.0} : it->second;
  }

  Eigen::VectorXcd to_vector() const;

 private:
  int cutoff_;
  AmplitudeMap amps_;
  double truncation_error_;
};

// ---------------------------------------------------------------------------
// Structured-backend evaluation

// <psi| op |psi>, evaluated by combinatorial monomial application against the
// state's sparse amplitude support. If op.hermitian is set, an imaginary part
// above 1e-10 signals a backend bug and throws.
cd expectation(const MonomialOp& op, const FourModeState& psi);

// ---------------------------------------------------------------------------
// Explicit-matrix backend

SparseCd single_mode_annihilator(int d);
SparseCd embed_single_mode(const SparseCd& m, int slot, int d);

// Annihilation operator of one mode embedded in the four-mode space.
SparseCd annihilator_matrix(ModeIndex mode, const TruncationSpec& trunc);

// Materialize a structured operator as a sparse d^4 x d^4 matrix by
// multiplying embedded single-mode ladder matrices.
SparseCd materialize(const MonomialOp& op, const TruncationSpec& trunc);

double hermiticity_defect(const SparseCd& m);

// max |(XY - YX)_{rc}| over interior rows r and columns c.
double commutator_interior_norm(const SparseCd& x, const SparseCd& y,
                                const TruncationSpec& trunc);

// Unitary exp(i delta K0^ch) on the truncated space, built by dense
// exponentiation of the two-mode channel block and Kronecker embedding.
SparseCd channel_rotation_unitary(Channel ch, double delta,
                                  const TruncationSpec& trunc);

// exp(scale * G) v by sub-stepped Taylor iteration with sparse mat-vecs;
// accurate to ~1e-13 relative, throws on non-convergence.
Eigen::VectorXcd expm_apply(const SparseCd& g, cd scale,
                            const Eigen::VectorXcd& v);

// State-level wrapper: applies exp(scale * G), renormalizes, and folds any
// norm deficit into the truncation_error metadata.
FourModeState expm_apply(const SparseCd& g, cd scale, const FourModeState& v);

cd expectation_matrix(const SparseCd& op, const FourModeState& psi);

}  // namespace tmsv
