#include "hilbert/flow.hpp"

#include <cmath>

#include "hilbert/transport.hpp"

namespace hilbert {

double flow_displacement(double a, double b, double t) {
  if (t <= 20) return a * b * std::expm1(2 * t) / (a + b * std::exp(2 * t));
  return a - flow_gap(a, b, t);
}

double flow_gap(double a, double b, double t) {
  if (t <= 0) return a * (a + b) / (a + b * std::exp(2 * t));
  const double e = std::exp(-2 * t);
  return a * (a + b) * e / (a * e + b);
}

namespace {

void check_state(const MetricContext& ctx, const FlowState& w) {
  if (!ctx.domain().strictly_convex()) fail(ErrorCode::NotStrictlyConvex, "flow needs a strictly convex domain");
  if (!ctx.domain().contains(w.x)) fail(ErrorCode::NotInterior, "flow state base point is not interior");
  if (!(w.direction.norm() > 0)) fail(ErrorCode::DegenerateDirection, "zero direction");
}

}  // namespace

FlowState flip(const FlowState& w) { return {w.x, -w.direction}; }

FlowState flow_point(const MetricContext& ctx, const FlowState& w, double t) {
  check_state(ctx, w);
  if (t == 0) return w;
  if (t < 0) return flip(flow_point(ctx, flip(w), -t));
  const Vec u = w.direction.normalized();
  const auto c = ctx.domain().chord(w.x, u);
  const double s = flow_displacement(c.a, c.b, t);
  Vec x = w.x + s * u;
  if (!ctx.domain().contains(x)) fail(ErrorCode::PrecisionLimit, "flowed point is not representable inside the domain");
  return {x, w.direction};
}

AnchoredPoint flow_anchored(const MetricContext& ctx, const FlowState& w, double t) {
  check_state(ctx, w);
  const Vec u = w.direction.normalized();
  const auto c = ctx.domain().chord(w.x, u);
  return {c.xplus, -flow_gap(c.a, c.b, t) * u};
}

double curvature_scalar(const MetricContext& ctx, const FlowState& w) {
  check_state(ctx, w);
  const auto c = ctx.domain().chord(w.x, w.direction);
  const double m = m_of(c.a, c.b);
  // Along X~ = m X^e: L log m = L_e m and L^2 log m = m L_e^2 m.
  const double d1 = lie_m(c.a, c.b);
  const double d2 = m * lie2_m(c.a, c.b);
  return 0.5 * d2 - 0.25 * d1 * d1;
}

TangentVector make_tangent(const MetricContext& ctx, const FlowState& w, const Vec& stable, const Vec& unstable,
                           double flow_part) {
  check_state(ctx, w);
  const int n = ctx.dimension();
  if (stable.size() != n - 1 || unstable.size() != n - 1)
    fail(ErrorCode::InvalidParameter, "stable and unstable parts need n-1 coordinates");
  Mat A(1, n);
  A.row(0) = w.direction.normalized().transpose();
  TangentVector z;
  z.base = w;
  z.origin = w;
  z.frame = null_space(A);
  z.stable_part = stable;
  z.unstable_part = unstable;
  z.flow_part = flow_part;
  return z;
}

TangentVector tangent_flow(const MetricContext& ctx, const TangentVector& z, double t) {
  TangentVector out = z;
  out.base = flow_point(ctx, z.base, t);
  out.elapsed = z.elapsed + t;
  out.stable_part = z.stable_part * std::exp(-t);
  out.unstable_part = z.unstable_part * std::exp(t);
  return out;
}

double tangent_norm(const MetricContext& ctx, const TangentVector& z) {
  double sum = z.flow_part * z.flow_part;
  for (int i = 0; i < z.frame.cols(); ++i) {
    const double f = z.elapsed == 0 ? 1.0 : transport_factor(ctx, z.origin, z.frame.col(i), z.elapsed);
    const double c = z.stable_part(i) * z.stable_part(i) + z.unstable_part(i) * z.unstable_part(i);
    sum += c * f * f;
  }
  return std::sqrt(sum);
}

}  // namespace hilbert
