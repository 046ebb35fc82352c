#include "tmsv/chsh_optimizer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace tmsv {

void OptimizerConfig::validate() const {
  if (!(coarse_step > 0.0))
    throw std::invalid_argument("OptimizerConfig: coarse_step must be > 0");
  const double ratio = kPi / coarse_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw std::invalid_argument("OptimizerConfig: coarse_step must divide pi");
  if (!(refine_tolerance > 0.0))
    throw std::invalid_argument("OptimizerConfig: refine_tolerance must be > 0");
  if (max_refine_iters < 1)
    throw std::invalid_argument("OptimizerConfig: max_refine_iters must be >= 1");
}

double verify_angle_set(const AngleQuad& q, const ESource& e_source) {
  return std::abs(e_source(q.delta_a, q.delta_b) +
                  e_source(q.delta_a, q.delta_b_prime) +
                  e_source(q.delta_a_prime, q.delta_b) -
                  e_source(q.delta_a_prime, q.delta_b_prime));
}

namespace {

double s_of(const ESource& e, const std::array<double, 4>& a, long& evals) {
  evals += 4;
  return std::abs(e(a[0], a[2]) + e(a[0], a[3]) + e(a[1], a[2]) - e(a[1], a[3]));
}

}  // namespace

Optimum optimize(const ESource& e_source, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(std::round(kPi / cfg.coarse_step));
  long evals = 0;

  // Table of E over the n x n coarse grid; the 48^4 quad scan then costs
  // only lookups.
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i)
    angles[i] = reduce_angle(cfg.grid_offset + i * cfg.coarse_step);
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      table[static_cast<std::size_t>(i) * n + j] = e_source(angles[i], angles[j]);
      ++evals;
    }
  auto te = [&](int i, int j) { return table[static_cast<std::size_t>(i) * n + j]; };

  double best_s = -1.0;
  std::array<int, 4> best_idx{0, 0, 0, 0};
  for (int ia = 0; ia < n; ++ia)
    for (int iap = 0; iap < n; ++iap)
      for (int ib = 0; ib < n; ++ib)
        for (int ibp = 0; ibp < n; ++ibp) {
          const double s = std::abs(te(ia, ib) + te(ia, ibp) +
                                    te(iap, ib) - te(iap, ibp));
          // Lexicographic scan order + strict improvement = deterministic
          // smallest-tuple tie-breaking.
          if (s > best_s) {
            best_s = s;
            best_idx = {ia, iap, ib, ibp};
          }
        }

  std::array<double, 4> x{angles[best_idx[0]], angles[best_idx[1]],
                          angles[best_idx[2]], angles[best_idx[3]]};
  double current = s_of(e_source, x, evals);

  double step = cfg.coarse_step / 2.0;
  double last_change = 0.0;
  bool converged = false;
  for (int iter = 0; iter < cfg.max_refine_iters; ++iter) {
    bool improved = false;
    for (int c = 0; c < 4; ++c) {
      for (double sgn : {+1.0, -1.0}) {
        std::array<double, 4> trial = x;
        trial[c] = reduce_angle(trial[c] + sgn * step);
        const double s = s_of(e_source, trial, evals);
        if (s > current) {
          last_change = s - current;
          current = s;
          x = trial;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (last_change < cfg.refine_tolerance && step < cfg.coarse_step * 1e-8) {
        converged = true;
        break;
      }
      if (step < 1e-15) {
        converged = last_change < cfg.refine_tolerance;
        break;
      }
    }
  }

  Optimum out;
  out.best.angles = AngleQuad(x[0], x[1], x[2], x[3]);
  out.best.s_value = current;
  out.best.violates = current > 2.0;
  out.best.maximal = std::abs(current - kTsirelson) <= 1e-6;
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

}  // namespace tmsv
