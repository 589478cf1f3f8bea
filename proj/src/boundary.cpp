#include "hilbert/boundary.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>

#include "hilbert/numerics.hpp"
#include "hilbert/projective.hpp"

namespace hilbert {

ShapeProfile shape_exponent(const ConvexDomain& domain, const Vec& xplus, const Vec& v, const ShapeOptions& opts) {
  const int n = domain.dimension();
  std::vector<double> scales = opts.scales;
  if (scales.empty())
    for (int k = 4; k <= 24; ++k) scales.push_back(std::ldexp(1.0, -k));
  for (double s : scales)
    if (!(s >= 1e-10)) fail(ErrorCode::ScaleUnderflow, "scale below 1e-10");
    else if (!(s < 1)) fail(ErrorCode::InvalidParameter, "scales must lie in (0, 1)");

  const Hyperplane tp = domain.boundary_tangent(xplus);
  const Vec normal = tp.normal.normalized();
  if (std::abs(normal.dot(v)) > 1e-8 * v.norm() || !(v.norm() > 0))
    fail(ErrorCode::DegenerateDirection, "v must be a nonzero tangent vector at x+");
  Vec xminus;
  if (opts.xminus) {
    xminus = *opts.xminus;
  } else {
    const Vec inside = xplus - 1e-9 * normal;
    xminus = domain.chord(inside, -normal).xplus;
  }
  const AffineChart chart = adapted_chart(domain, ProjectivePoint::from_affine(xplus), ProjectivePoint::from_affine(xminus));
  const Homography to_chart = chart.to_standard().inverse();
  const ConvexDomain local = domain.transformed(to_chart);
  // Directions in the chart: the tangent v at x+ and the chord.
  Vec vc = to_chart.push_vector(xplus, v);
  vc(0) = 0;
  vc.normalize();

  ShapeProfile out;
  out.scales = scales;
  std::vector<double> lx, lp, lm, lg;
  for (double s : scales) {
    Vec c = Vec::Zero(n);
    c(0) = s;
    const auto ch = local.chord(c, vc);
    out.y_plus.push_back(ch.a);
    out.y_minus.push_back(ch.b);
    if (s <= opts.fit_below) {
      lx.push_back(std::log(s));
      lp.push_back(std::log(ch.a));
      lm.push_back(std::log(ch.b));
      lg.push_back(0.5 * (std::log(ch.a) + std::log(ch.b)));
    }
  }
  const LineFit f = fit_line(lx, lg);
  out.exponent = f.slope;
  out.stderr_ = f.slope_stderr;
  out.exponent_plus = fit_line(lx, lp).slope;
  out.exponent_minus = fit_line(lx, lm).slope;
  out.eta = 2 * out.exponent - 1;
  return out;
}

BetaEstimate beta_convexity(const ConvexDomain& domain, int sample_pairs, std::uint64_t seed) {
  const int n = domain.dimension();
  if (sample_pairs < 20) fail(ErrorCode::InvalidParameter, "need at least 20 pairs");
  const Vec c = domain.base_point();
  // Each probe point contributes pairs at geometric separations on both sides.
  const int per_side = 5;
  const int probes = std::max(2, sample_pairs / (2 * per_side));
  std::mt19937_64 rng(seed);

  std::vector<Vec> dirs;
  if (n == 2) {
    for (int i = 0; i < probes; ++i) {
      const double th = 2 * std::numbers::pi * i / probes;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      dirs.push_back(u);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      dirs.push_back(Vec::Unit(n, i));
      dirs.push_back(-Vec::Unit(n, i));
    }
    while (static_cast<int>(dirs.size()) < probes) dirs.push_back(random_unit(n, rng));
  }

  BetaEstimate best;
  best.beta = 0;
  for (const auto& u : dirs) {
    const Vec p = domain.chord(c, u).xplus;
    Vec nrm;
    try {
      nrm = domain.boundary_tangent(p).normal.normalized();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TangentUnavailable || e.code() == ErrorCode::NonSmoothPoint) continue;
      throw;
    }
    // Rotate the ray inside the plane of u and a tangent direction at p.
    Vec tau;
    if (n == 2) {
      tau = Vec(2);
      tau << -nrm(1), nrm(0);
    } else {
      tau = random_unit(n, rng);
      tau -= tau.dot(nrm) * nrm;
      tau.normalize();
    }
    Vec w = tau - tau.dot(u) * u;
    w.normalize();
    const double rho = (p - c).norm();
    for (double side : {1.0, -1.0}) {
      std::vector<double> ls, ld;
      for (int k = 0; k < per_side; ++k) {
        // Angular steps giving separations from about 0.09 down to 1e-3.
        const double sep = 0.09 * std::pow(1e-3 / 0.09, static_cast<double>(k) / (per_side - 1));
        const double phi = side * sep / rho;
        const Vec up = std::cos(phi) * u + std::sin(phi) * w;
        const Vec q = domain.chord(c, up).xplus;
        const double dist = (q - p).norm();
        const double d = std::abs(nrm.dot(q - p));
        ++best.pairs;
        if (!(dist < 0.1) || !(d > 0)) continue;
        ls.push_back(std::log(dist));
        ld.push_back(std::log(d));
      }
      if (ls.size() < 3) continue;
      const double e = fit_line(ls, ld).slope;
      if (e > best.beta) {
        best.beta = e;
        best.worst_point = p;
      }
    }
  }
  if (best.beta == 0) fail(ErrorCode::TangentUnavailable, "no smooth boundary probes");
  best.alpha = best.beta > 1 ? best.beta / (best.beta - 1) : std::numeric_limits<double>::infinity();
  return best;
}

double entropy_lower_bound(double beta, int n) {
  if (!(beta >= 2)) fail(ErrorCode::InvalidBeta, "beta must be at least 2");
  if (n < 2) fail(ErrorCode::InvalidParameter, "n must be at least 2");
  return 2.0 / beta * (n - 1);
}

void write_shape_csv(std::ostream& os, const ShapeProfile& p) {
  os << "scale,y_plus,y_minus\n" << std::setprecision(12);
  for (std::size_t i = 0; i < p.scales.size(); ++i) os << p.scales[i] << ',' << p.y_plus[i] << ',' << p.y_minus[i] << '\n';
}

}  // namespace hilbert
