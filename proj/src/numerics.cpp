#include "hilbert/numerics.hpp"

#include <cmath>
#include <numbers>

#include "hilbert/errors.hpp"

namespace hilbert {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::InsufficientSamples, "line fit needs at least two points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) fail(ErrorCode::InsufficientSamples, "line fit abscissae coincide");
  LineFit f;
  f.count = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  f.slope_stderr = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

GaussRule gauss_legendre(int n, double lo, double hi) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z;
    r.weights[i] = (hi - lo) / ((1 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace hilbert
