#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hilbert/boundary.hpp"
#include "hilbert/transport.hpp"

using namespace hilbert;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("shape exponent of the disk") {
  const auto d = ConvexDomain::ball(2);
  const auto s = shape_exponent(d, v2(1, 0), v2(0, 1));
  CHECK(s.exponent == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(s.eta) < 0.02);
  // In the disk chart the section is exactly sqrt(x (1 - x)) up to the chart scale.
  for (std::size_t i = 1; i < s.scales.size(); ++i) {
    const double r0 = s.y_plus[i - 1] / std::sqrt(s.scales[i - 1] * (1 - s.scales[i - 1]));
    const double r1 = s.y_plus[i] / std::sqrt(s.scales[i] * (1 - s.scales[i]));
    CHECK(r1 == doctest::Approx(r0).epsilon(1e-6));
  }
}

TEST_CASE("shape exponent of the 4-ball on the axis") {
  const auto d = ConvexDomain::p_ball(2, 4);
  const auto s = shape_exponent(d, v2(1, 0), v2(0, 1));
  CHECK(s.exponent == doctest::Approx(0.25).epsilon(0.01 / 0.25));
  CHECK(s.exponent_plus == doctest::Approx(s.exponent_minus).epsilon(1e-6));
  // The far end of the same chord sees the same boundary by symmetry.
  const auto r = shape_exponent(d, v2(-1, 0), v2(0, 1));
  CHECK(r.exponent == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("shape exponents along a periodic chord match transport") {
  const auto d = ConvexDomain::power_region(0.8, 1.0);
  ShapeOptions o;
  o.xminus = v2(0, 0);
  const auto at_one = shape_exponent(d, v2(1, 0), v2(0, 1), o);
  o.xminus = v2(1, 0);
  const auto at_zero = shape_exponent(d, v2(0, 0), v2(0, 1), o);
  CHECK(at_one.exponent == doctest::Approx(0.2).epsilon(0.05));
  CHECK(at_zero.exponent == doctest::Approx(0.8).epsilon(0.02));
  const double tol = 2 * std::hypot(at_one.stderr_, at_zero.stderr_) + 1e-3;
  CHECK(std::abs(at_one.eta + at_zero.eta) < tol + 0.02);
  CHECK(at_one.eta == doctest::Approx(-0.6).epsilon(0.05));
}

TEST_CASE("shape exponent errors") {
  const auto d = ConvexDomain::ball(2);
  ShapeOptions o;
  o.scales = {1e-3, 1e-12};
  CHECK_THROWS_AS(shape_exponent(d, v2(1, 0), v2(0, 1), o), Error);
  try {
    shape_exponent(d, v2(1, 0), v2(0, 1), o);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleUnderflow);
  }
  CHECK_THROWS_AS(shape_exponent(d, v2(1, 0), v2(1, 1)), Error);
}

TEST_CASE("beta convexity") {
  const auto disk = beta_convexity(ConvexDomain::ball(2), 1000);
  CHECK(disk.beta == doctest::Approx(2).epsilon(0.025));
  CHECK(disk.alpha == doctest::Approx(2).epsilon(0.025));
  CHECK(1 / disk.beta + 1 / disk.alpha == doctest::Approx(1));
  const auto p4 = beta_convexity(ConvexDomain::p_ball(2, 4), 1000);
  CHECK(p4.beta == doctest::Approx(4).epsilon(0.025));
  CHECK(std::abs(std::abs(p4.worst_point(0)) * std::abs(p4.worst_point(1))) < 1e-9);
  const auto b3 = beta_convexity(ConvexDomain::p_ball(3, 4), 1000);
  CHECK(b3.beta == doctest::Approx(4).epsilon(0.025));
  CHECK(disk.pairs >= 1000);
}

TEST_CASE("entropy lower bound") {
  CHECK(entropy_lower_bound(2, 2) == doctest::Approx(1));
  CHECK(entropy_lower_bound(4, 2) == doctest::Approx(0.5));
  CHECK(entropy_lower_bound(4, 3) == doctest::Approx(1));
  CHECK_THROWS_AS(entropy_lower_bound(1.5, 2), Error);
  try {
    entropy_lower_bound(1.5, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidBeta);
  }
}

TEST_CASE("shape csv") {
  std::ostringstream os;
  write_shape_csv(os, shape_exponent(ConvexDomain::ball(2), v2(1, 0), v2(0, 1)));
  CHECK(os.str().rfind("scale,y_plus,y_minus\n", 0) == 0);
}
