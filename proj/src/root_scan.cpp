#include "root_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace conedual::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pole_margin(double pole) { return 1e-9 * (1.0 + std::abs(pole)); }

bool opposite_signs(double u, double v) { return (u < 0.0 && v > 0.0) || (u > 0.0 && v < 0.0); }

}  // namespace

double refine_root(const ScalarFn& g, const ScalarFn& slope, double a, double b,
                   double ga, double gb, int max_iter) {
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;

  double best = std::abs(ga) <= std::abs(gb) ? a : b;
  double best_abs = std::min(std::abs(ga), std::abs(gb));
  double x = 0.5 * (a + b);
  double prev_width = b - a;

  for (int it = 0; it < max_iter; ++it) {
    const double gx = g(x);
    if (!std::isfinite(gx)) break;
    if (std::abs(gx) < best_abs) {
      best = x;
      best_abs = std::abs(gx);
    }
    if (gx == 0.0) break;
    if (opposite_signs(ga, gx)) {
      b = x;
      gb = gx;
    } else {
      a = x;
      ga = gx;
    }
    const double width = b - a;
    if (width <= 4.0 * kEps * std::max(1.0, std::abs(x))) break;

    double next = 0.5 * (a + b);
    if (slope && width <= 0.5 * prev_width) {
      const double d = slope(x);
      if (std::isfinite(d) && d != 0.0) {
        const double newton = x - gx / d;
        if (newton > a && newton < b) {
          if (std::abs(newton - x) <= 2.0 * kEps * std::max(1.0, std::abs(x))) break;
          next = newton;
        }
      }
    }
    if (next == x) break;
    prev_width = width;
    x = next;
  }
  return best;
}

std::vector<double> scan_roots(const ScalarFn& g, const ScalarFn& slope, double a,
                               double b, int samples, int max_iter) {
  std::vector<double> roots;
  if (!(b > a) || samples < 2) return roots;

  std::vector<double> xs(samples);
  std::vector<double> gs(samples, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    xs[k] = a + (b - a) * 0.5 * (1.0 - std::cos(std::numbers::pi * t));
  }
  xs.front() = a;
  xs.back() = b;
  for (int k = 0; k < samples; ++k) {
    try {
      gs[k] = g(xs[k]);
    } catch (const std::domain_error&) {
    }
  }

  int prev = -1;
  for (int k = 0; k < samples; ++k) {
    if (!std::isfinite(gs[k])) continue;
    if (gs[k] == 0.0) {
      roots.push_back(xs[k]);
      prev = -1;
      continue;
    }
    if (prev >= 0 && opposite_signs(gs[prev], gs[k])) {
      roots.push_back(refine_root(g, slope, xs[prev], xs[k], gs[prev], gs[k], max_iter));
    }
    prev = k;
  }
  return roots;
}

std::vector<std::pair<double, double>> pole_intervals(const std::vector<double>& poles,
                                                      double sigma_max) {
  std::vector<std::pair<double, double>> intervals;
  double lo = 0.0;
  bool lo_is_pole = false;
  for (double pole : poles) {
    if (pole > sigma_max) break;
    const double a = lo_is_pole ? lo + pole_margin(lo) : lo;
    const double b = pole - pole_margin(pole);
    if (b > a) intervals.emplace_back(a, b);
    lo = pole;
    lo_is_pole = true;
  }
  const double a = lo_is_pole ? lo + pole_margin(lo) : lo;
  if (sigma_max > a) intervals.emplace_back(a, sigma_max);
  return intervals;
}

double enumeration_limit(const std::vector<double>& poles, double q_norm_inf) {
  const double largest = poles.empty() ? 0.0 : poles.back();
  return std::max(largest + 10.0 * (1.0 + largest), 10.0 * (1.0 + q_norm_inf));
}

}  // namespace conedual::detail
