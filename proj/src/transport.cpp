#include "hilbert/transport.hpp"

#include <cmath>
#include <iomanip>

#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

// Log of the remaining gap x_t x+ in a chart where the chord has unit length and x
// sits at xi from x+.
double log_unit_gap(double xi, double t) { return std::log(xi) - 2 * t - std::log(xi * std::exp(-2 * t) + 1 - xi); }

// Finsler norm from the two boundary distances along a unit direction.
double finsler_from_hits(double len, double lp, double lm) { return 0.5 * len * (1 / lp + 1 / lm); }

class OrbitTransport {
 public:
  OrbitTransport(const MetricContext& ctx, const FlowState& w, const Vec& v0, const TransportOptions& opts)
      : ctx_(ctx), dom_(ctx.domain()), opts_(opts), chart_(AffineChart::standard(ctx.dimension())) {
    if (!dom_.strictly_convex()) fail(ErrorCode::NotStrictlyConvex, "transport needs a strictly convex domain");
    if (!dom_.contains(w.x)) fail(ErrorCode::NotInterior, "orbit base point is not interior");
    const int n = ctx.dimension();
    u_ = w.direction.normalized();
    chord_ = dom_.chord(w.x, u_);
    if (!(v0.norm() > 0) || std::abs(u_.dot(v0.normalized())) > 1 - 1e-12)
      fail(ErrorCode::DegenerateDirection, "v0 is parallel to the chord");

    const Vec Xp = lift(chord_.xplus), Xm = lift(chord_.xminus);
    try {
      if (opts_.period) {
        if (n != 2) fail(ErrorCode::UnsupportedDimension, "period evaluation is planar");
        chart_ = period_chart(*opts_.period, Xp, Xm);
      } else {
        chart_ = adapted_chart(dom_, ProjectivePoint(Xp), ProjectivePoint(Xm));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnsupportedDimension) throw;
      fail(ErrorCode::ChartFailure, e.what());
    }
    P_.emplace(chart_.to_standard());
    const Homography Pinv = P_->inverse();
    xi_ = chord_.a / (chord_.a + chord_.b);
    Vec V = Pinv.push_vector(w.x, v0);
    const double full = V.norm();
    V(0) = 0;
    if (V.norm() < 1e-9 * full) fail(ErrorCode::DegenerateDirection, "v0 has no transverse component");
    V_ = V;
    logF0_ = log_finsler_at(0.0);
    logm0_ = std::log(2 * xi_ * (1 - xi_));
    if (opts_.period) {
      const Vec gx = opts_.period->apply_affine(w.x);
      const double s = (gx - w.x).dot(u_);
      if ((gx - w.x - s * u_).norm() > 1e-8 * (1 + chord_.a + chord_.b) || !(s > 0))
        fail(ErrorCode::ChartFailure, "orbit is not the attracting axis of the period");
      period_len_ = 0.5 * (std::log1p(s / chord_.b) - std::log1p(-s / chord_.a));
    }
  }

  const AffineChart& chart() const { return chart_; }
  double period_length() const { return period_len_; }

  double log_norm(double t) const {
    const double gap = std::exp(log_unit_gap(xi_, t));
    const double logm = std::log(2.0) + log_unit_gap(xi_, t) + std::log1p(-gap);
    return 0.5 * (logm - logm0_) + log_finsler_at(t) - logF0_;
  }

  FlowState state(double t) const {
    const double gap = std::exp(log_unit_gap(xi_, t));
    return {chord_.xplus + gap * (chord_.xminus - chord_.xplus), u_};
  }

  // Transported horizontal vector at time t in the reference chart (unscaled by m).
  Vec vector_at(double t) const { return P_->push_vector(adapted_point(t), vector_ad()); }

 private:
  Vec adapted_point(double t) const {
    Vec c = Vec::Zero(ctx_.dimension());
    c(0) = std::exp(log_unit_gap(xi_, t));
    return c;
  }
  Vec vector_ad() const { return V_; }

  double log_finsler_at(double t) const {
    const Vec W = vector_at(t);
    if (opts_.period && t > 0 && period_len_ > 0) return log_finsler_pulled_back(t, W);
    const double gap = std::exp(log_unit_gap(xi_, t));
    if (!(gap > 0)) fail(ErrorCode::PrecisionLimit, "orbit gap underflows");
    const LocalFrame f = dom_.local_frame(chord_.xplus);
    const Vec c = f.E.transpose() * (gap * (chord_.xminus - chord_.xplus));
    const Vec d = f.E.transpose() * W.normalized();
    return std::log(finsler_from_hits(W.norm(), dom_.hit_local(f, c, d), dom_.hit_local(f, c, -d)));
  }

  // F(x_t, W) = F(x_s, Dg^{-k} W) with t = k l + s, using the forward pushforward of W_s.
  double log_finsler_pulled_back(double t, const Vec& Wt) const {
    const int k = static_cast<int>(std::floor(t / period_len_));
    const double s = t - k * period_len_;
    const FlowState ws = state(s);
    const Vec Ws = vector_at(s);
    const auto c = dom_.chord(ws.x, Ws);
    const double logFs = std::log(finsler_from_hits(Ws.norm(), c.a, c.b));
    Vec y = ws.x, W = Ws;
    double logacc = 0;
    for (int i = 0; i < k; ++i) {
      const Vec Wn = opts_.period->push_vector(y, W);
      y = opts_.period->apply_affine(y);
      logacc += std::log(Wn.norm());
      W = Wn.normalized();
    }
    if (k > 0 && std::abs(std::abs(W.dot(Wt.normalized())) - 1) > 1e-6)
      fail(ErrorCode::ChartFailure, "pushed vector is not transverse at x_t");
    const double logc = std::log(Wt.norm()) - logacc;
    return logFs + logc;
  }

  static AffineChart period_chart(const Homography& g, const Vec& Xp, const Vec& Xm) {
    Eigen::EigenSolver<Mat> es(g.matrix().transpose());
    std::optional<Vec> Hp, Hm;
    const double tol = 1e-8;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      if (std::abs(es.eigenvalues()(i).imag()) > 1e-12 * std::abs(es.eigenvalues()(i))) continue;
      Vec H = es.eigenvectors().col(i).real();
      H.normalize();
      const double hp = std::abs(H.dot(Xp)) / Xp.norm(), hm = std::abs(H.dot(Xm)) / Xm.norm();
      if (hp < tol && hm > tol) Hp = H;
      if (hm < tol && hp > tol) Hm = H;
    }
    if (!Hp || !Hm) fail(ErrorCode::ChartFailure, "period does not fix the chord endpoints");
    if (Hp->dot(Xm) < 0) *Hp = -*Hp;
    if (Hm->dot(Xp) < 0) *Hm = -*Hm;
    return adapted_chart_from_supports(*Hp, *Hm, Xp, Xm);
  }

  const MetricContext& ctx_;
  const ConvexDomain& dom_;
  TransportOptions opts_;
  AffineChart chart_;
  std::optional<Homography> P_;
  ChordEndpoints chord_;
  Vec u_, V_;
  double xi_ = 0.5, logF0_ = 0, logm0_ = 0, period_len_ = 0;
};

}  // namespace

Vec default_transverse(const FlowState& w) {
  const int n = static_cast<int>(w.direction.size());
  const Vec u = w.direction.normalized();
  if (n == 2) {
    Vec v(2);
    v << -u(1), u(0);
    return v;
  }
  Mat A(1, n);
  A.row(0) = u.transpose();
  return null_space(A).col(0);
}

OrbitRecord transport_norm_curve(const MetricContext& ctx, const FlowState& w, const Vec& v0, double horizon,
                                 int steps, const TransportOptions& opts) {
  if (!(horizon > 0) || steps < 1) fail(ErrorCode::InvalidParameter, "horizon and steps must be positive");
  const OrbitTransport orbit(ctx, w, v0, opts);
  OrbitRecord rec;
  rec.chart = orbit.chart();
  rec.period_length = orbit.period_length();
  for (int k = 0; k <= steps; ++k) {
    const double t = horizon * k / steps;
    OrbitSample s;
    s.t = t;
    s.state = orbit.state(t);
    const double ln = k == 0 ? 0.0 : orbit.log_norm(t);
    s.transport_norm = std::exp(ln);
    s.stable_norm = std::exp(ln - t);
    s.unstable_norm = std::exp(ln + t);
    rec.samples.push_back(s);
  }
  return rec;
}

double transport_factor(const MetricContext& ctx, const FlowState& w, const Vec& v0, double t,
                        const TransportOptions& opts) {
  if (t == 0) return 1.0;
  if (t < 0) return transport_factor(ctx, flip(w), v0, -t, opts);
  return std::exp(OrbitTransport(ctx, w, v0, opts).log_norm(t));
}

Vec transported_vector(const MetricContext& ctx, const FlowState& w, const Vec& v0, double t) {
  if (t < 0) fail(ErrorCode::InvalidParameter, "transported_vector needs t >= 0");
  return OrbitTransport(ctx, w, v0, {}).vector_at(t);
}

ExponentEstimate eta_estimate(const OrbitRecord& record, double transient_fraction) {
  const auto& s = record.samples;
  if (s.size() < 20) fail(ErrorCode::InsufficientSamples, "need at least 20 samples");
  const double t0 = s.front().t, t1 = s.back().t;
  if (t1 - t0 < 5) fail(ErrorCode::InsufficientSamples, "horizon must be at least 5");
  const double cut = t0 + transient_fraction * (t1 - t0);
  std::vector<double> x, y;
  for (const auto& p : s)
    if (p.t >= cut - 1e-12) {
      x.push_back(p.t);
      y.push_back(std::log(p.transport_norm));
    }
  const LineFit f = fit_line(x, y);
  ExponentEstimate e;
  e.eta = f.slope;
  e.chi_plus = 1 + e.eta;
  e.chi_minus = -1 + e.eta;
  e.stderr_ = f.slope_stderr;
  e.t_min = x.front();
  e.t_max = x.back();
  e.out_of_range = std::abs(e.eta) >= 1;
  return e;
}

AnosovRates anosov_rates(const MetricContext& ctx, const FlowState& w, double horizon, const std::optional<Vec>& v0,
                         const TransportOptions& opts) {
  const Vec v = v0.value_or(default_transverse(w));
  const int steps = std::max(40, static_cast<int>(horizon * 20));
  const auto fwd = eta_estimate(transport_norm_curve(ctx, w, v, horizon, steps, opts));
  TransportOptions back = opts;
  if (back.period) back.period = back.period->inverse();
  const auto bwd = eta_estimate(transport_norm_curve(ctx, flip(w), v, horizon, steps, back));
  return {1 - fwd.eta, 1 - bwd.eta};
}

void write_orbit_csv(std::ostream& os, const OrbitRecord& record) {
  const int n = record.samples.empty() ? 0 : static_cast<int>(record.samples.front().state.x.size());
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  os << ",transport_norm,stable_norm,unstable_norm\n";
  os << std::setprecision(12);
  for (const auto& s : record.samples) {
    os << s.t;
    for (int i = 0; i < n; ++i) os << ',' << s.state.x(i);
    os << ',' << s.transport_norm << ',' << s.stable_norm << ',' << s.unstable_norm << '\n';
  }
}

}  // namespace hilbert
