#pragma once

// Scalar-generic kernels behind the public projection and solver API. The
// solver runs them in quad precision: when the capacity binds, F carries a
// component lambda * 1 normal to the face sum(x) = C, and the Armijo
// inequality <F(z), r> >= sigma ||r||^2 is lost to round-off of order
// lambda * N * ulp(x) long before ||r|| reaches 1e-8 in double.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <span>
#include <vector>

#include "pevgame/errors.hpp"
#include "pevgame/vi.hpp"

namespace pevgame::detail {

using Quad = __float128;

template <typename Real>
constexpr Real kernel_eps() {
  if constexpr (std::is_same_v<Real, Quad>) {
    return static_cast<Real>(1.9259299443872359e-34);  // 2^-112
  } else {
    return std::numeric_limits<Real>::epsilon();
  }
}

template <typename Real>
constexpr Real eps_step() {
  return 1024 * kernel_eps<Real>();
}

template <typename Real>
Real abs_of(Real v) {
  return v < 0 ? -v : v;
}

template <typename Real>
Real dot(std::span<const Real> a, std::span<const Real> b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Projection onto {x >= 0, sum(x) <= capacity}. When the capacity binds, the
/// simplex multiplier tau is read off the sorted entries.
template <typename Real>
void project_feasible(std::span<const Real> y, Real capacity, std::span<Real> x) {
  Real sum = 0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    x[n] = std::max(y[n], Real(0));
    sum += x[n];
  }
  if (sum <= capacity) return;

  thread_local std::vector<Real> sorted;
  sorted.assign(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), [](Real a, Real b) { return a > b; });
  Real prefix = 0;
  Real tau = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const Real candidate = (prefix - capacity) / static_cast<Real>(static_cast<int>(k + 1));
    if (sorted[k] > candidate) tau = candidate;
    else break;
  }
  tau = std::max(tau, Real(0));
  for (std::size_t n = 0; n < y.size(); ++n) x[n] = std::max(y[n] - tau, Real(0));
}

/// Projection onto {x >= 0, sum(x) <= capacity, <normal, x - anchor> <= 0}.
/// The half-space multiplier nu is found on the dual: x(nu) = Proj_X(y - nu normal),
/// g(nu) = <normal, x(nu) - anchor> is nonincreasing and piecewise linear.
template <typename Real>
void project_capped_halfspace(std::span<const Real> y, Real capacity,
                              std::span<const Real> normal, std::span<const Real> anchor,
                              std::span<Real> out) {
  const std::size_t dim = y.size();
  const Real normal_sq = dot(normal, normal);
  if (!(normal_sq > 0)) throw InputError("project_capped_halfspace: zero normal");

  Real offset = dot(normal, anchor);
  Real scale = std::max(Real(1), abs_of(offset));
  for (std::size_t n = 0; n < dim; ++n) scale = std::max(scale, abs_of(normal[n] * y[n]));
  // min of <normal, x> over X sits at 0 or at C e_n for the most negative normal_n.
  const Real min_over_x = std::min(Real(0), capacity * *std::min_element(normal.begin(), normal.end()));
  if (min_over_x > offset + Real(1e-12) * scale) {
    throw GeometryError("feasible set does not meet the cutting half-space");
  }

  std::vector<Real> shifted(dim), trial(dim), best(dim);
  const auto primal = [&](Real nu, std::span<Real> x) {
    for (std::size_t n = 0; n < dim; ++n) shifted[n] = y[n] - nu * normal[n];
    project_feasible<Real>(shifted, capacity, x);
  };
  // Summed termwise on x - anchor; near a solution the cut passes very close to x.
  const auto slack = [&](std::span<const Real> x) {
    Real g = 0;
    for (std::size_t n = 0; n < dim; ++n) g += normal[n] * (x[n] - anchor[n]);
    return g;
  };

  // Exact derivative of g on the current linear piece: coordinates at zero are
  // frozen and a binding capacity removes the mean of the normal over the rest.
  const auto slope_at = [&](std::span<const Real> x) {
    Real sum_a = 0, sum_aa = 0, total = 0;
    int active = 0;
    for (std::size_t n = 0; n < dim; ++n) {
      total += std::max(shifted[n], Real(0));
      if (x[n] > 0) {
        sum_a += normal[n];
        sum_aa += normal[n] * normal[n];
        ++active;
      }
    }
    if (active == 0) return Real(0);
    return total > capacity ? -(sum_aa - sum_a * sum_a / active) : -sum_aa;
  };

  const Real eps = 64 * kernel_eps<Real>();
  primal(Real(0), out);
  Real g_lo = slack(out);
  if (g_lo <= 0) return;

  // Newton steps along the pieces until g changes sign; a flat piece doubles.
  Real lo = 0;
  Real hi = 0;
  Real g_hi = g_lo;
  Real fallback = g_lo / normal_sq;
  std::copy(out.begin(), out.end(), best.begin());
  for (int grow = 0; g_hi > 0; ++grow) {
    if (grow > 400) throw GeometryError("half-space multiplier is unbounded");
    const Real d = slope_at(best);
    lo = hi;
    g_lo = g_hi;
    Real step = d < 0 ? g_hi / -d : fallback;
    if (!(step > eps_step<Real>() * std::max(Real(1), abs_of(hi)))) step = fallback;
    fallback = std::max(fallback, step) * 2;
    hi = lo + step;
    primal(hi, best);
    g_hi = slack(best);
    if (abs_of(g_hi) <= eps * scale) {
      std::copy(best.begin(), best.end(), out.begin());
      return;
    }
  }

  // Illinois regula falsi, safeguarded by bisection. `best` always holds x(hi).
  int side = 0;
  Real f_lo = g_lo;
  Real f_hi = g_hi;
  for (int it = 0; it < 400 && g_hi < 0; ++it) {
    if (hi - lo <= eps * std::max(Real(1), hi)) break;
    Real nu = lo + f_lo * (hi - lo) / (f_lo - f_hi);
    if (!(nu > lo && nu < hi)) nu = (lo + hi) / 2;
    primal(nu, trial);
    const Real g = slack(trial);
    if (abs_of(g) <= eps * scale) {
      std::copy(trial.begin(), trial.end(), out.begin());
      return;
    }
    if (g > 0) {
      lo = nu;
      f_lo = g;
      if (side == -1) f_hi /= 2;
      side = -1;
    } else {
      hi = nu;
      f_hi = g;
      g_hi = g;
      std::swap(best, trial);
      if (side == 1) f_lo /= 2;
      side = 1;
    }
  }
  std::copy(best.begin(), best.end(), out.begin());
}

/// Backtracks eta = eta0 * gamma^m until <F(x - eta r), r> >= sigma ||r||^2 for
/// F(v) = slope .* v + offset. Leaves z and F(z) in the output spans.
template <typename Real>
Real armijo(std::span<const Real> slope, std::span<const Real> offset, std::span<const Real> x,
            std::span<const Real> r, const SolverConfig& cfg, std::span<Real> z,
            std::span<Real> fz) {
  const Real rr = dot(r, r);
  const Real sigma = cfg.sigma;
  const Real gamma = cfg.gamma;
  Real eta = cfg.eta0;
  for (int m = 0; m <= 60; ++m, eta *= gamma) {
    for (std::size_t n = 0; n < x.size(); ++n) {
      z[n] = x[n] - eta * r[n];
      fz[n] = slope[n] * z[n] + offset[n];
    }
    if (dot<Real>(fz, r) >= sigma * rr) return eta;
  }
  throw ConsistencyError("Armijo search failed after 60 backtracks; game map is not monotone");
}

}  // namespace pevgame::detail
