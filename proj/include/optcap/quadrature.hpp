#pragma once

#include <cstddef>
#include <vector>

namespace optcap {

/// Cartesian point on a transverse plane, in meters.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

enum class DomainKind { Square, Disk };

/// Integration domain centered on the optical axis: a square of side
/// `size` or a disk of radius `size`.
struct Domain {
  DomainKind kind = DomainKind::Square;
  double size = 0.0;

  static Domain square(double side) { return {DomainKind::Square, side}; }
  static Domain disk(double radius) { return {DomainKind::Disk, radius}; }
  double area() const;
  bool operator==(const Domain&) const = default;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending, on [-1, 1]
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Nodes and positive weights (m^2) covering a domain.
///
/// Squares use an order x order tensor Gauss-Legendre rule. Disks use
/// `order` Gauss-Legendre radii (Jacobian r folded into the weights) times
/// `angular_order` equispaced angles.
struct QuadratureGrid {
  Domain domain;
  int order = 0;
  int angular_order = 0;
  std::vector<PlanarPoint> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Throws ConfigError for order < 4. For disks an `angular_order` of zero
/// selects 2 * order angles.
QuadratureGrid build_grid(const Domain& domain, int order, int angular_order = 0);

}  // namespace optcap
