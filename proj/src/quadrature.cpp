#include "cvrsp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cvrsp {

namespace {

GaussLegendre build_rule(int order) {
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

QuadratureRule composite_rule(double lo, double hi, int order, double max_panel) {
  QuadratureRule out;
  if (!(hi > lo)) return out;
  const GaussLegendre& gl = gauss_legendre(order);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel - 1e-12)));
  const double width = (hi - lo) / panels;
  out.points.reserve(static_cast<size_t>(panels) * order);
  out.weights.reserve(static_cast<size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double mid = a + 0.5 * width;
    for (int i = 0; i < order; ++i) {
      out.points.push_back(mid + 0.5 * width * gl.nodes[i]);
      out.weights.push_back(0.5 * width * gl.weights[i]);
    }
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int order,
                 double max_panel) {
  const QuadratureRule rule = composite_rule(lo, hi, order, max_panel);
  double acc = 0.0;
  for (size_t i = 0; i < rule.points.size(); ++i) acc += rule.weights[i] * f(rule.points[i]);
  return acc;
}

}  // namespace cvrsp
