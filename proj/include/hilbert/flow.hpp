#pragma once

#include "hilbert/metric.hpp"

namespace hilbert {

// Tangent vector to HΩ in a D^X-parallel frame started at `origin`: coordinates
// B_i (stable), A_i (unstable) along transverse frame directions, and a flow part.
struct TangentVector {
  FlowState base;
  FlowState origin;
  double elapsed = 0;
  Mat frame;  // n x (n-1) transverse directions at origin.x, reference chart
  Vec stable_part;
  Vec unstable_part;
  double flow_part = 0;
};

// Distance from x toward x+ after time t, and the remaining gap to x+.
double flow_displacement(double a, double b, double t);
double flow_gap(double a, double b, double t);

FlowState flow_point(const MetricContext& ctx, const FlowState& w, double t);
FlowState flip(const FlowState& w);
// Flowed point kept relative to x+ (t >= 0).
AnchoredPoint flow_anchored(const MetricContext& ctx, const FlowState& w, double t);

// Derivatives of m along the euclidean field X^e, from chord distances.
inline double lie_m(double a, double b) { return 2.0 * (a - b) / (a + b); }
inline double lie2_m(double a, double b) { return -4.0 / (a + b); }

double curvature_scalar(const MetricContext& ctx, const FlowState& w);

// Unit tangent vector with frame transverse to w.
TangentVector make_tangent(const MetricContext& ctx, const FlowState& w, const Vec& stable, const Vec& unstable,
                           double flow_part);
TangentVector tangent_flow(const MetricContext& ctx, const TangentVector& z, double t);
double tangent_norm(const MetricContext& ctx, const TangentVector& z);

}  // namespace hilbert
