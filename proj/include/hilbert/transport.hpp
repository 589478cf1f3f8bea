#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hilbert/flow.hpp"
#include "hilbert/metric.hpp"

namespace hilbert {

struct OrbitSample {
  double t = 0;
  FlowState state;
  double transport_norm = 1;
  double stable_norm = 1;
  double unstable_norm = 1;
};

struct OrbitRecord {
  std::vector<OrbitSample> samples;
  AffineChart chart = AffineChart::standard(2);
  double period_length = 0;  // translation length when evaluated through a period
};

struct ExponentEstimate {
  double eta = 0;
  double chi_plus = 1;
  double chi_minus = -1;
  double stderr_ = 0;
  double t_min = 0;
  double t_max = 0;
  bool out_of_range = false;  // |eta| >= 1
};

struct TransportOptions {
  // Homography (reference chart) with w on its axis and x+ attracting. Long orbits are
  // then evaluated by pulling x_t back into the first period; planar domains only.
  std::optional<Homography> period;
};

OrbitRecord transport_norm_curve(const MetricContext& ctx, const FlowState& w, const Vec& v0, double horizon,
                                 int steps, const TransportOptions& opts = {});

// Single value of the transport norm at time t (t < 0 uses the flipped orbit).
double transport_factor(const MetricContext& ctx, const FlowState& w, const Vec& v0, double t,
                        const TransportOptions& opts = {});

// Transported horizontal vector at x_t in the reference chart, up to a positive scale.
Vec transported_vector(const MetricContext& ctx, const FlowState& w, const Vec& v0, double t);

ExponentEstimate eta_estimate(const OrbitRecord& record, double transient_fraction = 0.2);

struct AnosovRates {
  double alpha = 0;
  double beta = 0;
};

AnosovRates anosov_rates(const MetricContext& ctx, const FlowState& w, double horizon,
                         const std::optional<Vec>& v0 = std::nullopt, const TransportOptions& opts = {});

// Euclidean direction transverse to w (rotated direction in 2D).
Vec default_transverse(const FlowState& w);

void write_orbit_csv(std::ostream& os, const OrbitRecord& record);

}  // namespace hilbert
