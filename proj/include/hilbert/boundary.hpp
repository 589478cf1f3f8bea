#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "hilbert/domain.hpp"

namespace hilbert {

struct ShapeOptions {
  std::vector<double> scales;  // empty: 2^-k for k = 4..24
  double fit_below = 0x1p-10;  // only scales at or below this enter the fit
  // Far end of the chord; defaults to the hit along the inward normal.
  std::optional<Vec> xminus;
};

struct ShapeProfile {
  double exponent = 0;  // slope of log sqrt(y+ y-) against log x
  double exponent_plus = 0;
  double exponent_minus = 0;
  double eta = 0;  // 2 * exponent - 1
  double stderr_ = 0;
  std::vector<double> scales, y_plus, y_minus;
};

// Widths of the section through x+ along +-v at distance x from x+, in a chart where the
// chord [x+, x-] is [0, 1] and the tangent hyperplanes at its ends are parallel.
ShapeProfile shape_exponent(const ConvexDomain& domain, const Vec& xplus, const Vec& v, const ShapeOptions& opts = {});

struct BetaEstimate {
  double beta = 2;
  double alpha = 2;
  Vec worst_point;  // boundary point attaining the largest local exponent
  int pairs = 0;
};

// Largest local exponent of d(p', T_p dOmega) against |pp'| over boundary pairs with |pp'| < 0.1.
BetaEstimate beta_convexity(const ConvexDomain& domain, int sample_pairs, std::uint64_t seed = 1);

double entropy_lower_bound(double beta, int n);

void write_shape_csv(std::ostream& os, const ShapeProfile& p);

}  // namespace hilbert
