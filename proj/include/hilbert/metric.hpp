#pragma once

#include "hilbert/domain.hpp"
#include "hilbert/projective.hpp"

namespace hilbert {

// Point plus unit direction: an element (x,[xi]) of the homogeneous bundle.
struct FlowState {
  Vec x;
  Vec direction;
};

class MetricContext {
 public:
  explicit MetricContext(ConvexDomain domain);
  // Euclidean quantities measured in `chart`; points are chart coordinates.
  MetricContext(const ConvexDomain& domain, const AffineChart& chart);

  const ConvexDomain& domain() const { return domain_; }
  const AffineChart& chart() const { return chart_; }
  int dimension() const { return domain_.dimension(); }

 private:
  ConvexDomain domain_;
  AffineChart chart_;
};

double hilbert_distance(const MetricContext& ctx, const Vec& x, const Vec& y);
double finsler_norm(const MetricContext& ctx, const Vec& x, const Vec& xi);
double m_value(const MetricContext& ctx, const FlowState& w);
// m from chord distances.
inline double m_of(double a, double b) { return 2.0 * a * b / (a + b); }

// Busemann-Hausdorff density: omega_n / vol{xi : F(x,xi) <= 1}.
double volume_density(const MetricContext& ctx, const Vec& x);
// Same at a point kept relative to a boundary anchor.
double volume_density(const MetricContext& ctx, const AnchoredPoint& x);

// Exact density at a point of a convex polygon, from unit outward face normals and the
// (positive) slacks c_i - N_i.x of the point.
double polygon_volume_density(const std::vector<Vec>& normals, const std::vector<double>& slacks);

}  // namespace hilbert
