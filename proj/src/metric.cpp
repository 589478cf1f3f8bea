#include "hilbert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "hilbert/numerics.hpp"

namespace hilbert {

namespace {

constexpr double kPi = std::numbers::pi;

void require_interior(const MetricContext& ctx, const Vec& x) {
  if (!ctx.domain().contains(x)) fail(ErrorCode::NotInterior, "point is not interior");
}

}  // namespace

MetricContext::MetricContext(ConvexDomain domain)
    : domain_(std::move(domain)), chart_(AffineChart::standard(domain_.dimension())) {}

MetricContext::MetricContext(const ConvexDomain& domain, const AffineChart& chart)
    : domain_(domain.transformed(chart.to_standard().inverse())), chart_(chart) {}

double hilbert_distance(const MetricContext& ctx, const Vec& x, const Vec& y) {
  require_interior(ctx, x);
  require_interior(ctx, y);
  const Vec d = y - x;
  const double t = d.norm();
  if (t == 0) return 0.0;
  const auto c = ctx.domain().chord(x, d / t);
  if (!(t < c.a)) fail(ErrorCode::NotInterior, "second point beyond the chord");
  return 0.5 * (std::log1p(t / c.b) - std::log1p(-t / c.a));
}

double finsler_norm(const MetricContext& ctx, const Vec& x, const Vec& xi) {
  require_interior(ctx, x);
  const double len = xi.norm();
  if (len == 0) return 0.0;
  const auto c = ctx.domain().chord(x, xi / len);
  return 0.5 * len * (1.0 / c.a + 1.0 / c.b);
}

double m_value(const MetricContext& ctx, const FlowState& w) {
  require_interior(ctx, w.x);
  const auto c = ctx.domain().chord(w.x, w.direction);
  return m_of(c.a, c.b);
}

namespace {

using RadialFn = std::function<double(const Vec&)>;

// Unit directions u with weights for a symmetric integrand over the sphere.
struct HalfGrid {
  std::vector<Vec> dirs;
  std::vector<double> weights;
};

HalfGrid circle_grid(int count) {
  HalfGrid g;
  for (int k = 0; k < count; ++k) {
    const double th = kPi * k / count;
    Vec u(2);
    u << std::cos(th), std::sin(th);
    g.dirs.push_back(u);
    g.weights.push_back(2.0 * kPi / count);  // stands for the antipode too
  }
  return g;
}

HalfGrid sphere_grid(int nz, int nphi) {
  HalfGrid g;
  const auto rule = gauss_legendre(nz, 0.0, 1.0);
  for (int i = 0; i < nz; ++i) {
    const double z = rule.nodes[i], s = std::sqrt(1 - z * z);
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2 * kPi * (j + 0.5 * (i % 2)) / nphi;
      Vec u(3);
      u << s * std::cos(ph), s * std::sin(ph), z;
      g.dirs.push_back(u);
      g.weights.push_back(2.0 * rule.weights[i] * 2 * kPi / nphi);
    }
  }
  return g;
}

const HalfGrid& coarse_grid(int n) {
  static const HalfGrid c2 = circle_grid(128), c3 = sphere_grid(12, 24);
  return n == 2 ? c2 : c3;
}

const HalfGrid& fine_grid(int n) {
  static const HalfGrid f2 = circle_grid(2048), f3 = sphere_grid(48, 64);
  return n == 2 ? f2 : f3;
}

// Radial function of L K in direction u, with K the Finsler unit ball.
double mapped_radius(const RadialFn& rho, const Mat& Linv, const Vec& u) {
  const Vec w = Linv * u;
  const double len = w.norm();
  return rho(w / len) / len;
}

// Volume of K, given its radial function in a frame whose first axis is the boundary
// normal, after iteratively rounding it with second-moment normalization.
double unit_ball_volume(const RadialFn& rho_frame, int n) {
  // Stretch along the normal so the flat direction is comparable to the others.
  const double rn = rho_frame(Vec::Unit(n, 0));
  double rt = 1;
  for (int j = 1; j < n; ++j) rt *= rho_frame(Vec::Unit(n, j));
  rt = std::pow(rt, 1.0 / (n - 1));
  const RadialFn rho = [&](const Vec& u) { return rho_frame(u) / rt; };
  Mat L = Mat::Identity(n, n);
  L(0, 0) = rt / rn;

  for (int it = 0; it < 3; ++it) {
    const Mat Linv = L.inverse();
    const auto& g = coarse_grid(n);
    Mat M = Mat::Zero(n, n);
    for (size_t k = 0; k < g.dirs.size(); ++k) {
      const double r = mapped_radius(rho, Linv, g.dirs[k]);
      M += g.weights[k] * std::pow(r, n + 2) * g.dirs[k] * g.dirs[k].transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    const Vec ev = es.eigenvalues();
    if (ev.maxCoeff() < 1.02 * ev.minCoeff()) break;
    const Mat S = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    L = S * L;
    L /= std::pow(std::abs(L.determinant()), 1.0 / n);
  }

  const Mat Linv = L.inverse();
  const auto& g = fine_grid(n);
  double acc = 0;
  for (size_t k = 0; k < g.dirs.size(); ++k) acc += g.weights[k] * std::pow(mapped_radius(rho, Linv, g.dirs[k]), n);
  return acc / n / std::abs(L.determinant()) * std::pow(rt, n);
}

double unit_ball_measure(int n) { return n == 2 ? kPi : 4.0 * kPi / 3.0; }

}  // namespace

double volume_density(const MetricContext& ctx, const Vec& x) {
  const int n = ctx.dimension();
  if (n != 2 && n != 3) fail(ErrorCode::UnsupportedDimension, "volume density supports n = 2, 3");
  require_interior(ctx, x);
  const auto& dom = ctx.domain();
  RadialFn rho = [&](const Vec& u) {
    const auto c = dom.chord(x, u);
    return m_of(c.a, c.b);
  };
  // Nearest boundary direction from a coarse search refined by golden section in 2D.
  const auto& g = coarse_grid(n);
  Vec best = g.dirs[0];
  double best_a = std::numeric_limits<double>::infinity();
  for (const auto& u : g.dirs) {
    const auto c = dom.chord(x, u);
    if (c.a < best_a) {
      best_a = c.a;
      best = u;
    }
    if (c.b < best_a) {
      best_a = c.b;
      best = -u;
    }
  }
  if (n == 2) {
    const double th0 = std::atan2(best(1), best(0));
    auto hit = [&](double th) {
      Vec u(2);
      u << std::cos(th), std::sin(th);
      return dom.chord(x, u).a;
    };
    double lo = th0 - kPi / 128, hi = th0 + kPi / 128;
    const double phi = 0.5 * (std::sqrt(5.0) - 1);
    double c1 = hi - phi * (hi - lo), c2 = lo + phi * (hi - lo);
    double f1 = hit(c1), f2 = hit(c2);
    for (int it = 0; it < 40; ++it) {
      if (f1 < f2) {
        hi = c2;
        c2 = c1;
        f2 = f1;
        c1 = hi - phi * (hi - lo);
        f1 = hit(c1);
      } else {
        lo = c1;
        c1 = c2;
        f1 = f2;
        c2 = lo + phi * (hi - lo);
        f2 = hit(c2);
      }
    }
    const double th = 0.5 * (lo + hi);
    best << std::cos(th), std::sin(th);
  }
  const Vec p = x + dom.chord(x, best).a * best;
  const LocalFrame f = dom.local_frame(p);
  RadialFn rho_frame = [&](const Vec& u) { return rho(f.E * u); };
  return unit_ball_measure(n) / unit_ball_volume(rho_frame, n);
}

double volume_density(const MetricContext& ctx, const AnchoredPoint& x) {
  const int n = ctx.dimension();
  if (n != 2 && n != 3) fail(ErrorCode::UnsupportedDimension, "volume density supports n = 2, 3");
  const auto& dom = ctx.domain();
  const LocalFrame f = dom.local_frame(x.anchor);
  const Vec c = f.E.transpose() * x.offset;
  RadialFn rho = [&](const Vec& u) { return m_of(dom.hit_local(f, c, u), dom.hit_local(f, c, -u)); };
  return unit_ball_measure(n) / unit_ball_volume(rho, n);
}

double polygon_volume_density(const std::vector<Vec>& normals, const std::vector<double>& slacks) {
  const int k = static_cast<int>(normals.size());
  if (k < 3 || static_cast<int>(slacks.size()) != k) fail(ErrorCode::InvalidParameter, "polygon needs matching faces");
  auto det = [](const Vec& u, const Vec& v) { return u(0) * v(1) - u(1) * v(0); };
  for (double s : slacks)
    if (!(s > 0)) fail(ErrorCode::NotInterior, "point is not inside the polygon");
  // F is the support function of D = (P - P)/2, P = conv{N_i / s_i}; the unit ball is the polar
  // of D. Coordinates are rescaled by the two nearest independent faces.
  int i1 = 0;
  for (int i = 1; i < k; ++i)
    if (slacks[i] < slacks[i1]) i1 = i;
  int i2 = -1;
  for (int i = 0; i < k; ++i)
    if (std::abs(det(normals[i1], normals[i])) > 0.1 && (i2 < 0 || slacks[i] < slacks[i2])) i2 = i;
  if (i2 < 0) fail(ErrorCode::DegenerateConfiguration, "polygon faces are parallel");
  const double d12 = det(normals[i1], normals[i2]);
  std::vector<Vec> b(k, Vec(2));
  for (int i = 0; i < k; ++i)
    b[i] << slacks[i1] * det(normals[i], normals[i2]) / (slacks[i] * d12),
        slacks[i2] * det(normals[i1], normals[i]) / (slacks[i] * d12);
  std::vector<Vec> diff;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) diff.push_back(0.5 * (b[i] - b[j]));
  std::sort(diff.begin(), diff.end(), [](const Vec& u, const Vec& v) { return std::atan2(u(1), u(0)) < std::atan2(v(1), v(0)); });
  // Convex hull of a centrally symmetric star around 0, by angle sweep.
  std::vector<Vec> hull;
  for (const auto& p : diff) {
    while (hull.size() >= 2 && det(hull[hull.size() - 1] - hull[hull.size() - 2], p - hull[hull.size() - 2]) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  bool changed = true;
  while (changed && hull.size() >= 3) {
    changed = false;
    const std::size_t m = hull.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec& a = hull[(i + m - 1) % m];
      const Vec& c = hull[(i + 1) % m];
      if (det(hull[i] - a, c - a) <= 0) {
        hull.erase(hull.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  if (hull.size() < 3) fail(ErrorCode::DegenerateConfiguration, "degenerate unit ball");
  std::vector<Vec> polar;
  const std::size_t m = hull.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& v = hull[i];
    const Vec& w = hull[(i + 1) % m];
    const Vec e = w - v;
    Vec nrm(2);
    nrm << e(1), -e(0);
    const double h = det(v, w);  // = nrm . v
    polar.push_back(nrm / h);
  }
  double area = 0;
  for (std::size_t i = 0; i < m; ++i) area += det(polar[i], polar[(i + 1) % m]);
  area = 0.5 * std::abs(area) * slacks[i1] * slacks[i2] / std::abs(d12);
  return unit_ball_measure(2) / area;
}

}  // namespace hilbert
