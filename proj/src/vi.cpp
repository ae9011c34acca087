#include "pevgame/vi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pevgame/errors.hpp"
#include "vi_kernels.hpp"

namespace pevgame {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}


void require_length(const Scenario& scenario, std::span<const double> x) {
  if (x.size() != scenario.size()) {
    throw InputError("vector length " + std::to_string(x.size()) + " does not match N = " +
                     std::to_string(scenario.size()));
  }
}

// Constant part of the game map: F = diag(s) x + (p - b).
std::vector<double> linear_term(const Scenario& scenario, double price) {
  std::vector<double> c;
  c.reserve(scenario.size());
  for (const auto& g : scenario.pevgs) c.push_back(price - g.b);
  return c;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InputError("solver tol must be > 0");
  if (max_iter < 1) throw InputError("solver max_iter must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InputError("armijo sigma must lie in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("armijo gamma must lie in (0,1)");
  if (!(eta0 > 0.0)) throw InputError("armijo eta0 must be > 0");
}

std::vector<double> game_map(const Scenario& scenario, std::span<const double> x, double price) {
  require_length(scenario, x);
  std::vector<double> f(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const auto& g = scenario.pevgs[n];
    f[n] = g.s * x[n] + price - g.b;
  }
  return f;
}

std::vector<double> jacobian_diag(const Scenario& scenario) {
  std::vector<double> d;
  d.reserve(scenario.size());
  for (const auto& g : scenario.pevgs) d.push_back(g.s);
  return d;
}

Allocation project_feasible(std::span<const double> y, double capacity) {
  Allocation x(y.size());
  detail::project_feasible<double>(y, capacity, x);
  return x;
}

std::vector<double> project_capped_halfspace(std::span<const double> y, double capacity,
                                             std::span<const double> normal,
                                             std::span<const double> anchor) {
  if (normal.size() != y.size() || anchor.size() != y.size()) {
    throw InputError("project_capped_halfspace: length mismatch");
  }
  std::vector<double> x(y.size());
  detail::project_capped_halfspace<double>(y, capacity, normal, anchor, x);
  return x;
}

std::vector<double> natural_residual(const Scenario& scenario, std::span<const double> x,
                                     double price) {
  const auto f = game_map(scenario, x, price);
  std::vector<double> step(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) step[n] = x[n] - f[n];
  const auto p = project_feasible(step, scenario.capacity());
  std::vector<double> r(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) r[n] = x[n] - p[n];
  return r;
}

ArmijoStep armijo_search(const Scenario& scenario, std::span<const double> x,
                         std::span<const double> r, double price, const SolverConfig& cfg) {
  require_length(scenario, x);
  const double rr = dot(r, r);
  if (!(rr > 0.0)) throw InputError("armijo_search needs a nonzero residual");
  ArmijoStep step;
  step.z.resize(x.size());
  std::vector<double> fz(x.size());
  step.eta = detail::armijo<double>(jacobian_diag(scenario), linear_term(scenario, price), x, r,
                                    cfg, step.z, fz);
  return step;
}

double recover_lambda(const Scenario& scenario, std::span<const double> x, double price) {
  require_length(scenario, x);
  // Complementarity: a slack capacity carries no multiplier.
  if (std::accumulate(x.begin(), x.end(), 0.0) < scenario.capacity() - kInteriorThreshold) {
    return 0.0;
  }
  double lambda = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (x[n] > kInteriorThreshold) {
      const auto& g = scenario.pevgs[n];
      lambda = std::max(lambda, g.b - g.s * x[n] - price);
    }
  }
  return lambda;
}

double lambda_spread(const Scenario& scenario, std::span<const double> x, double price) {
  require_length(scenario, x);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (x[n] > kInteriorThreshold) {
      const auto& g = scenario.pevgs[n];
      const double l = g.b - g.s * x[n] - price;
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  return hi >= lo ? hi - lo : 0.0;
}

VeSolution ss_solve(const Scenario& scenario, double price, std::span<const double> x0,
                    const SolverConfig& cfg,
                    const std::function<void(const SsIterate&)>& observer) {
  using detail::Quad;
  cfg.validate();
  require_length(scenario, x0);
  if (!feasible(scenario, x0)) throw InputError("ss_solve: starting point is infeasible");

  const std::size_t dim = x0.size();
  const auto slope_d = jacobian_diag(scenario);
  const auto offset_d = linear_term(scenario, price);
  std::vector<Quad> slope(slope_d.begin(), slope_d.end());
  std::vector<Quad> offset(offset_d.begin(), offset_d.end());
  const Quad capacity = scenario.capacity();

  std::vector<Quad> x(dim), y(dim), p(dim), r(dim), z(dim), fz(dim), next(dim);
  for (std::size_t n = 0; n < dim; ++n) x[n] = std::max(x0[n], 0.0);
  const auto to_double = [](const std::vector<Quad>& v) {
    return std::vector<double>(v.begin(), v.end());
  };

  int k = 0;
  double res = 0.0;
  for (;; ++k) {
    // r(x) = x - Proj_X(x - F(x))
    for (std::size_t n = 0; n < dim; ++n) y[n] = x[n] - (slope[n] * x[n] + offset[n]);
    detail::project_feasible<Quad>(y, capacity, p);
    for (std::size_t n = 0; n < dim; ++n) r[n] = x[n] - p[n];
    res = std::sqrt(static_cast<double>(detail::dot<Quad>(r, r)));
    if (res <= cfg.tol) break;
    if (k >= cfg.max_iter) {
      throw NonConvergence("ss_solve: no convergence after " + std::to_string(k) +
                               " iterations (residual " + std::to_string(res) + ")",
                           to_double(x), res, k);
    }
    const Quad eta = detail::armijo<Quad>(slope, offset, x, r, cfg, z, fz);
    if (std::all_of(fz.begin(), fz.end(), [](Quad v) { return v == 0; })) {
      // z lies in X (convex combination of x and a projection) and zeroes F.
      x = z;
    } else {
      detail::project_capped_halfspace<Quad>(x, capacity, fz, z, next);
      std::swap(x, next);
    }
    if (observer) observer(SsIterate{to_double(x), to_double(z), static_cast<double>(eta), res});
  }

  VeSolution sol;
  sol.x_star = to_double(x);
  sol.iterations = k;
  sol.residual = res;
  sol.lambda = recover_lambda(scenario, sol.x_star, price);
  sol.kkt_residual = kkt_residual(scenario, sol.x_star, sol.lambda, price);
  return sol;
}

double kkt_residual(const Scenario& scenario, std::span<const double> x, double lambda,
                    double price) {
  const auto f = game_map(scenario, x, price);
  double worst = 0.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    worst = std::max(worst, std::abs(std::min(x[n], f[n] + lambda)));
    sum += x[n];
  }
  worst = std::max(worst, std::abs(lambda * (sum - scenario.capacity())));
  worst = std::max(worst, std::max(0.0, sum - scenario.capacity()));
  return worst;
}

}  // namespace pevgame
