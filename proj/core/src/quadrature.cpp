#include "larmor/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "larmor/errors.hpp"

namespace larmor {
namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

Vec3 segment_point(double conode, double node, const Vec3& xa, const Vec3& xb) {
  // (1-sigma) xa + sigma xb, with the two products rounded separately so the
  // sum is invariant under (xa, sigma) <-> (xb, 1-sigma).
  const double ax = conode * xa.x, bx = node * xb.x;
  const double ay = conode * xa.y, by = node * xb.y;
  const double az = conode * xa.z, bz = node * xb.z;
  return {ax + bx, ay + by, az + bz};
}

}  // namespace

GaussRule gauss_rule(int points) {
  if (points < 1 || points > 16) {
    throw UnsupportedOrderError("gauss_rule: supported range is 1..16 points, got " +
                                std::to_string(points));
  }
  const int n = points;
  GaussRule rule;
  rule.order = n;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.conodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));

  // Newton iteration for the positive-half roots of P_n on [-1, 1]; the lower
  // half of [0, 1] is filled by exact mirroring so that symmetric nodes and
  // weights match bitwise.
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double step = p / dp;
      x -= step;
      if (std::fabs(step) < 1e-15) break;
    }
    legendre(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);

    const size_t hi = static_cast<size_t>(n - 1 - i);
    const size_t lo = static_cast<size_t>(i);
    const double node_hi = 0.5 * (1.0 + x);
    const double node_lo = 1.0 - node_hi;
    rule.nodes[hi] = node_hi;
    rule.conodes[hi] = node_lo;
    rule.nodes[lo] = node_lo;
    rule.conodes[lo] = node_hi;
    rule.weights[hi] = 0.5 * w;
    rule.weights[lo] = 0.5 * w;
  }
  if (n % 2 == 1) {
    const size_t mid = static_cast<size_t>(n / 2);
    double p, dp;
    legendre(n, 0.0, p, dp);
    rule.nodes[mid] = 0.5;
    rule.conodes[mid] = 0.5;
    rule.weights[mid] = 1.0 / (dp * dp);
  }
  return rule;
}

Vec3 averaged_force(const Potential& p, const GaussRule& rule, const Vec3& xa, const Vec3& xb) {
  const int n = rule.order;
  Vec3 sum{};
  for (int i = 0; i < n / 2; ++i) {
    const size_t lo = static_cast<size_t>(i);
    const size_t hi = static_cast<size_t>(n - 1 - i);
    const Vec3 f_lo = rule.weights[lo] * p.force(segment_point(rule.conodes[lo], rule.nodes[lo], xa, xb));
    const Vec3 f_hi = rule.weights[hi] * p.force(segment_point(rule.conodes[hi], rule.nodes[hi], xa, xb));
    sum += f_lo + f_hi;
  }
  if (n % 2 == 1) {
    const size_t mid = static_cast<size_t>(n / 2);
    sum += rule.weights[mid] * p.force(segment_point(rule.conodes[mid], rule.nodes[mid], xa, xb));
  }
  return sum;
}

}  // namespace larmor
