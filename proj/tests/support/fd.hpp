#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "khess/integrator.hpp"

namespace khess::testing {

/// Centered difference with step h, Richardson-extrapolated once.
inline double richardson_derivative(const std::function<double(double)>& f, double x, double h) {
  auto centered = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * centered(0.5 * h) - centered(h)) / 3.0;
}

/// sqrt(sum (a-b)^2 / sum b^2).
inline double relative_rms(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Midpoints of dense segments wide enough to hold a stencil of half-width
/// 1e-5 x, away from critical points and the support edge; at most `count`
/// points spread over the trajectory.
inline std::vector<double> probe_points(const ProfileSolution& prof, std::size_t count,
                                        double s_lo = 1e-3) {
  std::vector<double> pts;
  for (const DenseSegment& seg : prof.dense) {
    const double x = seg.x0 + 0.5 * seg.h;
    if (x < s_lo || seg.h < 4e-5 * x) continue;
    if (prof.support_edge && x > 0.9 * *prof.support_edge) continue;
    bool near_critical = false;
    for (double c : prof.critical_points) near_critical |= std::abs(x - c) < 0.05 * (1.0 + c);
    if (!near_critical) pts.push_back(x);
  }
  if (pts.size() <= count) return pts;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(pts[i * pts.size() / count]);
  return out;
}

}  // namespace khess::testing
