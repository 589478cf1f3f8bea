#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hilbert/transport.hpp"

using namespace hilbert;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Chart sending the region {|w| < u^a v^(1-a)} (v = 1 - u) onto diagonal coordinates.
Homography diagonal_period(double l1, double l2, double l3) {
  Mat M = Mat::Identity(3, 3);
  M(2, 0) = -1;
  Mat D = Mat::Zero(3, 3);
  D(0, 0) = l1;
  D(1, 1) = l2;
  D(2, 2) = l3;
  return Homography(M.inverse() * D * M);
}

}  // namespace

TEST_CASE("transport is trivial in the disk") {
  const MetricContext disk(ConvexDomain::ball(2));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const FlowState w{disk.domain().random_interior(rng), disk.domain().random_direction(rng)};
    const auto rec = transport_norm_curve(disk, w, default_transverse(w), 10, 100);
    CHECK(rec.samples.front().transport_norm == 1.0);
    for (const auto& s : rec.samples) CHECK(s.transport_norm == doctest::Approx(1).epsilon(1e-6));
    const auto e = eta_estimate(rec);
    CHECK(std::abs(e.eta) < 1e-3);
    CHECK(e.chi_plus == 1 + e.eta);
    CHECK(e.chi_minus == -1 + e.eta);
    const auto r = anosov_rates(disk, w, 10);
    CHECK(r.alpha == doctest::Approx(1).epsilon(2e-2));
    CHECK(r.beta == doctest::Approx(1).epsilon(2e-2));
  }
}

TEST_CASE("transport cocycle") {
  std::mt19937_64 rng(2);
  for (const auto& d : {ConvexDomain::p_ball(2, 4), ConvexDomain::p_ball(3, 3),
                        ConvexDomain::boundary_curve(v2(0, 0), {1.0, 1.2, 0.9, 1.1})}) {
    const MetricContext ctx(d);
    for (int i = 0; i < 10; ++i) {
      const FlowState w{d.random_interior(rng), d.random_direction(rng)};
      const Vec v = d.random_direction(rng);
      const double s = 0.8, t = 1.7;
      const FlowState ws = flow_point(ctx, w, s);
      const Vec Ws = transported_vector(ctx, w, v, s);
      const double lhs = transport_factor(ctx, w, v, s + t);
      const double rhs = transport_factor(ctx, w, v, s) * transport_factor(ctx, ws, Ws, t);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("periodic orbit exponent") {
  // Eigenvalue moduli (9, 3, 1/27) preserve the region with exponent 4/5.
  const Homography g = diagonal_period(9, 3, 1.0 / 27);
  const MetricContext ctx(ConvexDomain::power_region(0.8, 1.0));
  const FlowState w{v2(0.5, 0), v2(1, 0)};
  const double l = 0.5 * std::log(9.0 * 27.0);
  CHECK(hilbert_distance(ctx, w.x, g.apply_affine(w.x)) == doctest::Approx(l).epsilon(1e-10));
  TransportOptions opts;
  opts.period = g;
  const auto rec = transport_norm_curve(ctx, w, v2(0, 1), 12 * l, 600, opts);
  CHECK(rec.period_length == doctest::Approx(l).epsilon(1e-10));
  const auto e = eta_estimate(rec);
  CHECK(e.eta == doctest::Approx(-0.6).epsilon(1e-3).scale(1));
  // ||T^{nl}|| ~ (l1/l2)^n e^{-nl}: bounded ratio over periods
  std::vector<double> ratios;
  for (const auto& s : rec.samples) {
    const double n = std::round(s.t / l);
    if (n >= 1 && std::abs(s.t - n * l) < 1e-9) ratios.push_back(s.transport_norm / (std::pow(3.0, n) * std::exp(-n * l)));
  }
  REQUIRE(ratios.size() >= 10);
  for (double r : ratios) CHECK(r == doctest::Approx(ratios.front()).epsilon(1e-6));
  // direct evaluation agrees with the period route on the first few periods
  for (double t : {0.5, 3.0, 7.0}) {
    const double direct = transport_factor(ctx, w, v2(0, 1), t);
    const double period = transport_factor(ctx, w, v2(0, 1), t, opts);
    CHECK(direct == doctest::Approx(period).epsilon(1e-7));
  }
  // flipped orbit under the inverse period
  TransportOptions back;
  back.period = g.inverse();
  const auto rev = eta_estimate(transport_norm_curve(ctx, flip(w), v2(0, 1), 12 * l, 600, back));
  CHECK(rev.eta + e.eta == doctest::Approx(0).scale(1).epsilon(2e-3));
  const auto r = anosov_rates(ctx, w, 12 * l, v2(0, 1), opts);
  CHECK(r.alpha == doctest::Approx(1 - e.eta).epsilon(1e-2));
  CHECK(r.alpha > 0);
  CHECK(r.beta > 0);
}

TEST_CASE("transport errors and csv") {
  const MetricContext disk(ConvexDomain::ball(2));
  const FlowState w{v2(0, 0), v2(1, 0)};
  CHECK_THROWS_AS(transport_norm_curve(disk, w, v2(1, 0), 5, 50), Error);
  const MetricContext square(ConvexDomain::cube(2));
  CHECK_THROWS_AS(transport_norm_curve(square, w, v2(0, 1), 5, 50), Error);
  const auto rec = transport_norm_curve(disk, w, v2(0, 1), 1, 10);
  CHECK_THROWS_AS(eta_estimate(rec), Error);
  std::ostringstream os;
  write_orbit_csv(os, rec);
  CHECK(os.str().rfind("t,x1,x2,transport_norm,stable_norm,unstable_norm\n", 0) == 0);
}
