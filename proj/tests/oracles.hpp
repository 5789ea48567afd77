#pragma once

// Reference computations shared by the unit tests and the acceptance binary.
// None of them calls into the code under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cayley/random.hpp"

namespace cayley::test {

/// Projection of y onto {0 <= z <= cap, sum z = total} by bisection on the
/// shift theta in z = clip(y - theta, 0, cap).
inline std::array<double, 8> project_capped_simplex(const std::array<double, 8>& y, const std::array<double, 8>& cap,
                                                    double total) {
  auto mass = [&](double th) {
    double s = 0.0;
    for (std::size_t j = 0; j < 8; ++j) s += std::clamp(y[j] - th, 0.0, cap[j]);
    return s;
  };
  double lo = -1.0, hi = 1.0;
  for (std::size_t j = 0; j < 8; ++j) {
    lo = std::min(lo, y[j] - cap[j] - 1.0);
    hi = std::max(hi, y[j] + 1.0);
  }
  for (int it = 0; it < 100 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > total ? lo : hi) = mid;
  }
  std::array<double, 8> z{};
  for (std::size_t j = 0; j < 8; ++j) z[j] = std::clamp(y[j] - 0.5 * (lo + hi), 0.0, cap[j]);
  return z;
}

/// sup of prod (1 - z_j/mu_j) over 0 <= z <= mu, sum z = beta * sum mu, by
/// projected gradient ascent on the log with backtracking, best over
/// `restarts` random starts. Factors with mu_j = 0 are 1.
inline double ebeta_oracle(const std::array<double, 8>& mus, double beta, int restarts, Rng& rng,
                           int iterations = 400) {
  double mu = 0.0;
  for (double m : mus) mu += m;
  const double total = beta * mu;
  auto objective = [&](const std::array<double, 8>& z) {
    double s = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
      if (mus[j] <= 0.0) continue;
      const double r = 1.0 - z[j] / mus[j];
      if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
      s += std::log(r);
    }
    return s;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::array<double, 8> y{};
    for (std::size_t j = 0; j < 8; ++j) y[j] = rng.uniform(0.0, mus[j]);
    // Averaging with the proportional point beta * mu keeps the start away
    // from the faces z_j = mu_j, where the objective is -inf.
    std::array<double, 8> z = project_capped_simplex(y, mus, total);
    for (std::size_t j = 0; j < 8; ++j) z[j] = 0.5 * (z[j] + beta * mus[j]);
    double fz = objective(z);
    double step = mu;
    for (int it = 0; it < iterations && step > 1e-18 * mu; ++it) {
      std::array<double, 8> g{};
      for (std::size_t j = 0; j < 8; ++j)
        g[j] = mus[j] > 0.0 && z[j] < mus[j] ? -1.0 / (mus[j] - z[j]) : 0.0;
      double gn = 0.0;
      for (double x : g) gn = std::max(gn, std::abs(x));
      if (gn == 0.0) break;
      bool moved = false;
      while (step > 1e-18 * mu) {
        std::array<double, 8> cand{};
        for (std::size_t j = 0; j < 8; ++j) cand[j] = z[j] + step * g[j] / gn;
        cand = project_capped_simplex(cand, mus, total);
        const double fc = objective(cand);
        if (fc > fz) {
          z = cand;
          fz = fc;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::max(best, fz);
  }
  return std::exp(best);
}

/// Descending vector of 8 nonnegative entries with a random number of zeros
/// and ties, rescaled to sum mu.
inline std::array<double, 8> random_mus(Rng& rng, double mu) {
  std::array<double, 8> m{};
  const int zeros = rng.uniform_int(0, 3) == 0 ? rng.uniform_int(0, 6) : 0;
  for (std::size_t j = 0; j < 8; ++j) m[j] = std::exp(rng.uniform(-4.0, 0.0));
  if (rng.uniform_int(0, 4) == 0) m[2] = m[3] = m[4];
  for (int k = 0; k < zeros; ++k) m[7 - k] = 0.0;
  std::sort(m.begin(), m.end(), std::greater<>());
  double s = 0.0;
  for (double x : m) s += x;
  for (double& x : m) x *= mu / s;
  return m;
}

}  // namespace cayley::test
