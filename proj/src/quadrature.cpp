#include "optcap/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "optcap/error.hpp"

namespace optcap {

double Domain::area() const {
  return kind == DomainKind::Square ? size * size : std::numbers::pi * size * size;
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: order must be positive");
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    return std::pair{p1, dp};
  };
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n % 2 == 1 && i == n / 2) x = 0.0;
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureGrid build_grid(const Domain& domain, int order, int angular_order) {
  if (order < 4) {
    throw ConfigError("quadrature order must be at least 4, got " + std::to_string(order));
  }
  if (!(domain.size > 0.0) || !std::isfinite(domain.size)) {
    throw ConfigError("quadrature domain size must be positive and finite");
  }
  QuadratureGrid grid;
  grid.domain = domain;
  grid.order = order;
  const GaussLegendreRule rule = gauss_legendre(order);
  if (domain.kind == DomainKind::Square) {
    const double half = 0.5 * domain.size;
    grid.nodes.reserve(static_cast<std::size_t>(order) * order);
    grid.weights.reserve(static_cast<std::size_t>(order) * order);
    // x varies fastest.
    for (int iy = 0; iy < order; ++iy) {
      for (int ix = 0; ix < order; ++ix) {
        grid.nodes.push_back({half * rule.nodes[ix], half * rule.nodes[iy]});
        grid.weights.push_back(half * half * rule.weights[ix] * rule.weights[iy]);
      }
    }
    return grid;
  }

  const int n_angle = angular_order > 0 ? angular_order : 2 * order;
  if (n_angle < 4) throw ConfigError("disk angular order must be at least 4");
  grid.angular_order = n_angle;
  const double radius = domain.size;
  const double dphi = 2.0 * std::numbers::pi / n_angle;
  grid.nodes.reserve(static_cast<std::size_t>(order) * n_angle);
  grid.weights.reserve(static_cast<std::size_t>(order) * n_angle);
  for (int ir = 0; ir < order; ++ir) {
    const double r = 0.5 * radius * (rule.nodes[ir] + 1.0);
    const double wr = 0.5 * radius * rule.weights[ir] * r;
    for (int ia = 0; ia < n_angle; ++ia) {
      const double phi = (ia + 0.5) * dphi;
      grid.nodes.push_back({r * std::cos(phi), r * std::sin(phi)});
      grid.weights.push_back(wr * dphi);
    }
  }
  return grid;
}

}  // namespace optcap
