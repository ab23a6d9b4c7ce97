#pragma once

#include <functional>
#include <vector>

namespace cvrsp {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n; cached per order.
const GaussLegendre& gauss_legendre(int order);

/// A node/weight list for integrating over a union of intervals.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Composite Gauss-Legendre over [lo, hi] split into panels no wider than
/// `max_panel`, `order` nodes per panel.
QuadratureRule composite_rule(double lo, double hi, int order = 21, double max_panel = 0.5);

double integrate(const std::function<double(double)>& f, double lo, double hi, int order = 21,
                 double max_panel = 0.5);

}  // namespace cvrsp
