#include "tmsv/wigner_phase_space.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace tmsv {

namespace {
constexpr double kPiLocal = 3.14159265358979323846;
}

QuadratureGrid default_grid(double zeta) {
  return QuadratureGrid(4.0 * std::max(1.0, std::exp(zeta)), 64);
}

double wigner_analytic(double zeta, const PhasePoint& pt) {
  const double c2 = std::cosh(2.0 * zeta);
  const double s2 = std::sinh(2.0 * zeta);
  const double mag2 = std::norm(pt.alpha_a) + std::norm(pt.alpha_b);
  const double cross = 2.0 * (pt.alpha_a * pt.alpha_b).real();  // aA aB + c.c.
  const double expo = -2.0 * c2 * mag2 + 2.0 * s2 * cross;
  return 4.0 / (kPiLocal * kPiLocal) * std::exp(expo);
}

NormalizationResult wigner_normalization(double zeta,
                                         const QuadratureGrid& grid) {
  const int m = grid.points_per_axis;
  const double l = grid.half_width;
  const double h = 2.0 * l / (m - 1);
  std::vector<double> x(m), w(m);
  for (int i = 0; i < m; ++i) {
    x[i] = -l + i * h;
    w[i] = (i == 0 || i == m - 1) ? 0.5 : 1.0;
  }
  // The gaussian separates into a (q_A, q_B) block and a (p_A, p_B) block;
  // evaluate each 2-d trapezoid sum and multiply.
  const double c2 = std::cosh(2.0 * zeta);
  const double s2 = std::sinh(2.0 * zeta);
  double iq = 0.0, ip = 0.0, boundary_max = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double q = std::exp(-2.0 * c2 * (x[i] * x[i] + x[j] * x[j]) +
                                4.0 * s2 * x[i] * x[j]);
      const double p = std::exp(-2.0 * c2 * (x[i] * x[i] + x[j] * x[j]) -
                                4.0 * s2 * x[i] * x[j]);
      iq += w[i] * w[j] * q;
      ip += w[i] * w[j] * p;
      if (i == 0 || i == m - 1 || j == 0 || j == m - 1)
        boundary_max = std::max(boundary_max, std::max(q, p));
    }
  NormalizationResult res;
  res.integral = 4.0 / (kPiLocal * kPiLocal) * iq * ip * std::pow(h, 4);
  res.narrow_grid_warning = boundary_max > 1e-8;
  return res;
}

namespace {

Eigen::MatrixXcd displacement_matrix(cd alpha, int d) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) {
    const double r = std::sqrt(static_cast<double>(n));
    gen(n, n - 1) = alpha * r;             // alpha a^†
    gen(n - 1, n) = -std::conj(alpha) * r; // -alpha^* a
  }
  return gen.exp();
}

}  // namespace

double wigner_from_state(const FourModeState& state, const PhasePoint& pt) {
  const int d = state.cutoff();
  const double max_disp2 = 0.25 * (d - 1);
  if (std::norm(pt.alpha_a) > max_disp2 || std::norm(pt.alpha_b) > max_disp2)
    throw std::invalid_argument(
        "wigner_from_state: displacement too large for this cutoff");

  // Reduced density matrix of the + sector (modes a+, b+), traced over a-, b-.
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d2, d2);
  std::map<std::pair<int, int>, std::vector<std::pair<Eigen::Index, cd>>> groups;
  for (const auto& [key, amp] : state.amplitudes()) {
    const auto n = FourModeState::unpack(key);
    groups[{n[1], n[3]}].emplace_back(static_cast<Eigen::Index>(n[0]) * d + n[2],
                                      amp);
  }
  for (const auto& [env, entries] : groups)
    for (const auto& [i1, a1] : entries)
      for (const auto& [i2, a2] : entries)
        rho(i1, i2) += a1 * std::conj(a2);

  const Eigen::MatrixXcd da = displacement_matrix(pt.alpha_a, d);
  const Eigen::MatrixXcd db = displacement_matrix(pt.alpha_b, d);
  Eigen::VectorXcd parity(d);
  for (int n = 0; n < d; ++n) parity[n] = (n % 2 == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXcd ma = da * parity.asDiagonal() * da.adjoint();
  const Eigen::MatrixXcd mb = db * parity.asDiagonal() * db.adjoint();

  // tr[rho (Ma kron Mb)] without forming the Kronecker product.
  cd tr{0.0, 0.0};
  for (Eigen::Index r = 0; r < d2; ++r)
    for (Eigen::Index c = 0; c < d2; ++c) {
      const cd rv = rho(r, c);
      if (rv == cd{0.0, 0.0}) continue;
      tr += rv * ma(c / d, r / d) * mb(c % d, r % d);
    }
  return 4.0 / (kPiLocal * kPiLocal) * tr.real();
}

}  // namespace tmsv
