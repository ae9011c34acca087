#pragma once

// Reference computations used only by the tests. None of these call into the
// solver code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Ve {
  std::vector<double> x;
  double lambda = 0.0;
};

// Followers' equilibrium at a fixed price by bisection on the shared multiplier:
// x_n(lambda) = max(0, (b_n - p - lambda)/s_n) and sum x_n(lambda) <= C with
// complementary slackness.
inline Ve water_fill(const std::vector<double>& b, const std::vector<double>& s, double capacity,
                     double price) {
  const auto demand = [&](double lambda) {
    double total = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n) total += std::max(0.0, (b[n] - price - lambda) / s[n]);
    return total;
  };
  Ve ve;
  if (demand(0.0) > capacity) {
    double lo = 0.0;
    double hi = *std::max_element(b.begin(), b.end());
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (demand(mid) > capacity ? lo : hi) = mid;
    }
    ve.lambda = 0.5 * (lo + hi);
  }
  for (std::size_t n = 0; n < b.size(); ++n) {
    ve.x.push_back(std::max(0.0, (b[n] - price - ve.lambda) / s[n]));
  }
  return ve;
}

// Two-player equilibrium at price p by enumerating the active sets of the KKT system.
inline Ve kkt_2d(double b1, double b2, double s1, double s2, double capacity, double p) {
  Ve ve;
  const double u1 = std::max(0.0, (b1 - p) / s1);
  const double u2 = std::max(0.0, (b2 - p) / s2);
  if (u1 + u2 <= capacity) {
    ve.x = {u1, u2};
    return ve;
  }
  // Both interior on the face x1 + x2 = C.
  const double lambda = (b1 / s1 + b2 / s2 - p * (1 / s1 + 1 / s2) - capacity) / (1 / s1 + 1 / s2);
  const double x1 = (b1 - p - lambda) / s1;
  const double x2 = (b2 - p - lambda) / s2;
  if (x1 >= 0 && x2 >= 0) {
    ve.x = {x1, x2};
    ve.lambda = lambda;
    return ve;
  }
  // One player takes everything.
  if (x1 < 0) {
    ve.x = {0.0, capacity};
    ve.lambda = b2 - p - s2 * capacity;
  } else {
    ve.x = {capacity, 0.0};
    ve.lambda = b1 - p - s1 * capacity;
  }
  return ve;
}

struct PriceScan {
  double price = 0.0;
  double revenue = -std::numeric_limits<double>::infinity();
};

// Leader's revenue maximized over a price grid against kkt_2d followers.
inline PriceScan scan_price_2d(double b1, double b2, double s1, double s2, double capacity,
                               double p_max, double step) {
  PriceScan best;
  const long steps = static_cast<long>(std::floor(p_max / step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double p = i * step;
    const Ve ve = kkt_2d(b1, b2, s1, s2, capacity, p);
    const double revenue = p * (ve.x[0] + ve.x[1]);
    if (revenue > best.revenue) best = {p, revenue};
  }
  return best;
}

// Max of the joint utility over the 2-D feasible set on a grid.
struct GridMax {
  double value = -std::numeric_limits<double>::infinity();
  double x1 = 0.0, x2 = 0.0;
};

inline GridMax joint_utility_grid_2d(double b1, double b2, double s1, double s2, double capacity,
                                     double p, double step) {
  GridMax best;
  const long steps = static_cast<long>(std::floor(capacity / step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double x1 = i * step;
    for (long j = 0; i + j <= steps; ++j) {
      const double x2 = j * step;
      const double v = b1 * x1 - 0.5 * s1 * x1 * x1 + b2 * x2 - 0.5 * s2 * x2 * x2 - p * (x1 + x2);
      if (v > best.value) best = {v, x1, x2};
    }
  }
  return best;
}

// Central difference.
template <typename F>
double derivative(F&& f, double at, double h = 1e-5) {
  return (f(at + h) - f(at - h)) / (2 * h);
}

}  // namespace oracle
