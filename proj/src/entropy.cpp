#include "hilbert/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>

#include "hilbert/flow.hpp"
#include "hilbert/numerics.hpp"

namespace hilbert {

std::string method_name(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::volume_growth: return "volume_growth";
    case EntropyMethod::orbit_counting: return "orbit_counting";
    case EntropyMethod::ruelle_bound: return "ruelle_bound";
  }
  return "unknown";
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Stratified unit directions: k strata of the circle, or k x 2k cells of (z, phi) on the sphere.
std::vector<Vec> stratified_directions(int n, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<Vec> out;
  const double tau = 2 * std::numbers::pi;
  if (n == 2) {
    for (int i = 0; i < k; ++i) {
      const double th = tau * (i + U(rng)) / k;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      out.push_back(u);
    }
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < 2 * k; ++j) {
        const double z = -1 + 2 * (i + U(rng)) / k;
        const double ph = tau * (j + U(rng)) / (2 * k);
        const double rho = std::sqrt(std::max(0.0, 1 - z * z));
        Vec u(3);
        u << rho * std::cos(ph), rho * std::sin(ph), z;
        out.push_back(u);
      }
  }
  return out;
}

// d/dt of the euclidean displacement after Hilbert time t on a chord (a toward x+, b behind).
double displacement_rate(double a, double b, double t) {
  const double e = std::exp(-2 * t);
  const double den = a * e + b;
  return 2 * a * b * (a + b) * e / (den * den);
}

struct PolygonEdges {
  std::vector<Vec> p0, dir, normals;
  std::vector<double> offsets, length;
};

PolygonEdges polygon_edges(const ConvexDomain& dom) {
  auto V = dom.vertices();
  Vec c = Vec::Zero(2);
  for (const auto& v : V) c += v;
  c /= static_cast<double>(V.size());
  std::sort(V.begin(), V.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  PolygonEdges e;
  const std::size_t k = V.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec d = V[(i + 1) % k] - V[i];
    Vec n(2);
    n << d(1), -d(0);
    n.normalize();
    e.p0.push_back(V[i]);
    e.dir.push_back(d.normalized());
    e.normals.push_back(n);
    e.offsets.push_back(n.dot(V[i]));
    e.length.push_back(d.norm());
  }
  return e;
}

// Shell integral over one radial cell for a polygon: boundary point x+ at distance delta from
// an edge end, delta log-uniform on [0, L/2] shifted by eps; dtheta = (N.u / a) dl.
double polygon_shell(const ConvexDomain& dom, const PolygonEdges& E, const Vec& x0, double t_lo, double width,
                     int strata, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0, 1);
  const int k = static_cast<int>(E.p0.size());
  double total = 0;
  std::vector<double> slack(k);
  for (int f = 0; f < k; ++f)
    for (int end = 0; end < 2; ++end) {
      const double half = 0.5 * E.length[f];
      const Vec vertex = end == 0 ? E.p0[f] : Vec(E.p0[f] + E.length[f] * E.dir[f]);
      const Vec along = end == 0 ? E.dir[f] : Vec(-E.dir[f]);
      const int neighbor = end == 0 ? (f + k - 1) % k : (f + 1) % k;
      double sum = 0;
      const double eps = 1e-6 * std::exp(-2 * (t_lo + width));
      const double span = std::log1p(half / eps);
      // Defensive mixture of uniform and log-uniform placement, one of each per stratum.
      for (int j = 0; j < strata; ++j)
        for (int comp = 0; comp < 2; ++comp) {
          const double t = t_lo + U(rng) * width;
          const double w = (j + U(rng)) / strata;
          const double delta = comp == 0 ? half * w : eps * std::expm1(span * w);
          const double q = 0.5 / half + 0.5 / ((delta + eps) * span);
          const Vec xp = vertex + delta * along;
          const Vec r = xp - x0;
          const double a = r.norm();
          const Vec u = r / a;
          const double b = dom.chord(x0, u).b;
          const double gap = flow_gap(a, b, t);
          for (int i = 0; i < k; ++i) {
            double s0;
            if (i == f)
              s0 = 0;
            else if (i == neighbor)
              s0 = -delta * E.normals[i].dot(along);
            else
              s0 = E.offsets[i] - E.normals[i].dot(xp);
            slack[i] = s0 + gap * E.normals[i].dot(u);
          }
          const double disp = gap < 0.5 * a ? a - gap : flow_displacement(a, b, t);
          const double dens = polygon_volume_density(E.normals, slack);
          sum += dens * disp * displacement_rate(a, b, t) * E.normals[f].dot(u) / a / q;
        }
      total += sum / (2 * strata);
    }
  return width * total;
}

}  // namespace

EntropyEstimate volume_entropy(const MetricContext& ctx, const Vec& x0, double r_max, int samples,
                               const VolumeEntropyOptions& opts) {
  const int n = ctx.dimension();
  if (n != 2 && n != 3) fail(ErrorCode::UnsupportedDimension, "volume entropy supports n = 2, 3");
  if (!(r_max >= 4)) fail(ErrorCode::InvalidParameter, "r_max must be at least 4");
  if (opts.batches < 2 || !(opts.cell_width > 0)) fail(ErrorCode::InvalidParameter, "bad sampling options");
  const auto& dom = ctx.domain();
  if (!dom.contains(x0)) fail(ErrorCode::NotInterior, "base point is not interior");

  const int cells = static_cast<int>(std::ceil(r_max / opts.cell_width));
  const double width = r_max / cells;
  const int per_cell = std::max(1, samples / (cells * opts.batches));
  // Angular strata per cell: k on the circle, 2k^2 on the sphere.
  const int k = n == 2 ? per_cell : std::max(1, static_cast<int>(std::lround(std::sqrt(per_cell / 2.0))));
  const double sphere = n == 2 ? 2 * std::numbers::pi : 4 * std::numbers::pi;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<std::vector<double>> shell(opts.batches, std::vector<double>(cells, 0.0));
  int used = 0;
  const bool polygon = opts.polygon_route && n == 2 &&
                       (dom.kind() == DomainKind::polytope || dom.kind() == DomainKind::hull);
  if (polygon) {
    const auto E = polygon_edges(dom);
    const int strata = std::max(1, per_cell / (4 * static_cast<int>(E.p0.size())));
    for (int bt = 0; bt < opts.batches; ++bt)
      for (int c = 0; c < cells; ++c) {
        shell[bt][c] = polygon_shell(dom, E, x0, c * width, width, strata, rng);
        used += 4 * static_cast<int>(E.p0.size()) * strata;
      }
  }
  for (int bt = 0; bt < opts.batches && !polygon; ++bt)
    for (int c = 0; c < cells; ++c) {
      const auto dirs = stratified_directions(n, k, rng);
      double sum = 0;
      for (const auto& u : dirs) {
        const double t = (c + U(rng)) * width;
        const auto ch = dom.chord(x0, u);
        const double gap = flow_gap(ch.a, ch.b, t);
        const double disp = flow_displacement(ch.a, ch.b, t);
        const double dens = gap < 1e-2 * ch.a ? volume_density(ctx, AnchoredPoint{ch.xplus, -gap * u})
                                              : volume_density(ctx, Vec(x0 + disp * u));
        sum += dens * std::pow(disp, n - 1) * displacement_rate(ch.a, ch.b, t);
        ++used;
      }
      shell[bt][c] = sphere * width * sum / static_cast<double>(dirs.size());
    }

  EntropyEstimate e;
  e.method = EntropyMethod::volume_growth;
  e.count = used;
  e.convention = "Busemann-Hausdorff volume";
  std::vector<std::vector<double>> cum(opts.batches, std::vector<double>(cells));
  for (int bt = 0; bt < opts.batches; ++bt) {
    double acc = 0;
    for (int c = 0; c < cells; ++c) cum[bt][c] = acc += shell[bt][c];
  }
  for (int c = 0; c < cells; ++c) {
    std::vector<double> v(opts.batches);
    for (int bt = 0; bt < opts.batches; ++bt) v[bt] = cum[bt][c];
    const double m = mean(v);
    const double rel = sample_sd(v) / std::sqrt(static_cast<double>(opts.batches)) / m;
    if (!(rel <= 0.1)) fail(ErrorCode::MonteCarloVariance, "ball volume relative error above 10%");
    e.grid.push_back((c + 1) * width);
    e.curve.push_back(m);
  }
  auto slope = [&](const std::vector<double>& vol) {
    std::vector<double> x, y;
    for (int c = 0; c < cells; ++c)
      if (e.grid[c] >= 0.5 * r_max - 1e-12) {
        x.push_back(e.grid[c]);
        y.push_back(std::log(vol[c]));
      }
    return fit_line(x, y).slope;
  };
  e.value = slope(e.curve);
  std::vector<double> batch_slopes;
  for (const auto& c : cum) batch_slopes.push_back(slope(c));
  e.fit_stderr = sample_sd(batch_slopes) / std::sqrt(static_cast<double>(opts.batches));
  e.window_lo = 0.5 * r_max;
  e.window_hi = r_max;
  return e;
}

EntropyEstimate orbit_entropy_from_spectrum(std::vector<double> lengths, double complete_up_to) {
  std::sort(lengths.begin(), lengths.end());
  if (lengths.size() < 50) fail(ErrorCode::SpectrumTooSmall, "fewer than 50 closed orbits");
  const double lo = 0.5 * complete_up_to, hi = complete_up_to;
  std::vector<double> T, logP;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < lo || lengths[i] > hi) continue;
    if (i + 1 < lengths.size() && lengths[i + 1] == lengths[i]) continue;
    T.push_back(lengths[i]);
    logP.push_back(std::log(static_cast<double>(i + 1)));
  }
  if (T.size() < 10) fail(ErrorCode::SpectrumTooSmall, "too few lengths in the complete window");

  // log P = log Ei(hT) + c, with c profiled out.
  auto sse = [&](double h) {
    std::vector<double> r(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) r[i] = logP[i] - std::log(std::expint(h * T[i]));
    const double c = mean(r);
    double s = 0;
    for (double x : r) s += (x - c) * (x - c);
    return s;
  };
  double a = 0.02, b = 4.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = sse(x1), f2 = sse(x2);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = sse(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = sse(x2);
    }
  }
  const double h = 0.5 * (a + b);
  const double eps = 1e-4;
  const double curv = (sse(h + eps) - 2 * sse(h) + sse(h - eps)) / (eps * eps);
  const double s2 = sse(h) / static_cast<double>(T.size() - 2);

  EntropyEstimate e;
  e.method = EntropyMethod::orbit_counting;
  e.value = h;
  e.fit_stderr = curv > 0 ? std::sqrt(2 * s2 / curv) : std::numeric_limits<double>::infinity();
  e.window_lo = lo;
  e.window_hi = hi;
  e.count = static_cast<int>(lengths.size());
  e.convention = "oriented closed orbits (gamma and gamma^-1 counted separately)";
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] > hi) break;
    if (i + 1 < lengths.size() && lengths[i + 1] == lengths[i]) continue;
    e.grid.push_back(lengths[i]);
    e.curve.push_back(static_cast<double>(i + 1));
  }
  return e;
}

EntropyEstimate orbit_entropy(const std::vector<GroupElement>& generators, int max_len,
                              const std::optional<CoxeterPresentation>& presentation) {
  const auto classes = enumerate_conjugacy_classes(generators, max_len, presentation);
  std::vector<double> lengths;
  // Words at the two longest lengths bound the complete part of the spectrum.
  double complete = std::numeric_limits<double>::infinity();
  for (const auto& g : classes) {
    if (!is_biproximal(g)) continue;
    const double l = translation_length(g);
    lengths.push_back(l);
    if (static_cast<int>(g.word.size()) >= max_len - 1) complete = std::min(complete, l);
  }
  if (lengths.size() < 50) fail(ErrorCode::SpectrumTooSmall, "fewer than 50 closed orbits");
  return orbit_entropy_from_spectrum(lengths, complete);
}

double ruelle_bound(int n, const std::vector<double>& eta_samples) {
  if (n < 2) fail(ErrorCode::InvalidParameter, "n must be at least 2");
  return (n - 1) + (eta_samples.empty() ? 0.0 : mean(eta_samples));
}

void write_entropy_csv(std::ostream& os, const EntropyEstimate& e) {
  os << (e.method == EntropyMethod::volume_growth ? "r,volume\n" : "T,P_T\n");
  os << std::setprecision(12);
  for (std::size_t i = 0; i < e.grid.size(); ++i) os << e.grid[i] << ',' << e.curve[i] << '\n';
}

}  // namespace hilbert
