#pragma once

#include <vector>

namespace hilbert {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double residual_rms = 0;
  int count = 0;
};

// Ordinary least squares y = intercept + slope x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [lo, hi].
GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace hilbert
