#pragma once

#include <vector>

#include "larmor/linalg3.hpp"
#include "larmor/potential.hpp"

namespace larmor {

/// Gauss-Legendre rule on [0, 1]. Nodes are stored together with their
/// complements 1 - node so that mirrored nodes pair up bit-exactly; weights
/// sum to 1 and are symmetric.
struct GaussRule {
  std::vector<double> nodes;     ///< strictly increasing, symmetric about 1/2
  std::vector<double> conodes;   ///< conodes[i] == 1 - nodes[i], with conodes[i] == nodes[n-1-i]
  std::vector<double> weights;   ///< positive, weights[i] == weights[n-1-i], sum 1
  int order = 0;                 ///< number of points; exact for degree <= 2*order-1
};

/// Standard Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, 1].
/// Supported range 1 <= points <= 16; throws UnsupportedOrderError outside.
GaussRule gauss_rule(int points);

/// Line-averaged force \int_0^1 F(xa + sigma (xb - xa)) dsigma approximated
/// by the rule. Summation pairs symmetric nodes so that swapping xa and xb
/// reproduces the result bit-exactly. Propagates SingularPointError.
Vec3 averaged_force(const Potential& p, const GaussRule& rule, const Vec3& xa, const Vec3& xb);

}  // namespace larmor
