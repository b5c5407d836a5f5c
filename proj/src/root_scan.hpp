#pragma once

// Bracketed one-dimensional root finding shared by the dense and secular
// enumeration paths. Both paths must sample and refine identically so that
// their root sets can be compared point for point.

#include <functional>
#include <utility>
#include <vector>

namespace conedual::detail {

using ScalarFn = std::function<double(double)>;

/// Safeguarded Newton/bisection on a sign-changing bracket [a, b].
/// `slope` may be empty, in which case plain bisection is used. Iterates until
/// the bracket collapses to a few ulps or max_iter is hit, and returns the
/// iterate with the smallest |g| seen.
double refine_root(const ScalarFn& g, const ScalarFn& slope, double a, double b,
                   double ga, double gb, int max_iter);

/// Samples g at `samples` Chebyshev-clustered points of [a, b] (endpoints
/// included) and refines every sign change. Samples where g throws or is not
/// finite are skipped.
std::vector<double> scan_roots(const ScalarFn& g, const ScalarFn& slope, double a,
                               double b, int samples, int max_iter);

/// Open sub-intervals of [0, sigma_max] between consecutive poles, each
/// shrunk by 1e-9 (1 + |pole|) at pole ends.
std::vector<std::pair<double, double>> pole_intervals(const std::vector<double>& poles,
                                                      double sigma_max);

/// Upper end of the enumeration range given the nonnegative poles.
double enumeration_limit(const std::vector<double>& poles, double q_norm_inf);

}  // namespace conedual::detail
