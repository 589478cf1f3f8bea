#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbert/domain.hpp"
#include "hilbert/projective.hpp"

using namespace hilbert;

namespace {

ProjectivePoint on_line(double t) {
  Vec v(3);
  v << t, 0.0, 1.0;
  return ProjectivePoint(v);
}

Homography random_homography(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m = Mat::Identity(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) += 0.3 * g(rng);
  return Homography(m);
}

// Normals of the tangent hyperplanes seen in chart coordinates.
Vec chart_normal(const AffineChart& chart, const Hyperplane& h) {
  Vec H(3);
  H << -h.normal(0), -h.normal(1), h.offset;
  return (chart.frame().transpose() * H).normalized();
}

}  // namespace

TEST_CASE("projective points compare up to scale") {
  Vec a(3), b(3);
  a << 1, 2, 3;
  b << -2, -4, -6;
  CHECK(same_point(ProjectivePoint(a), ProjectivePoint(b)));
  CHECK_THROWS_AS(ProjectivePoint(Vec::Zero(3)), Error);
}

TEST_CASE("cross ratio hand values") {
  CHECK(cross_ratio(on_line(0), on_line(1), on_line(0.25), on_line(0.75)) == doctest::Approx(1.0 / 9).epsilon(1e-14));
  CHECK(cross_ratio(on_line(0), on_line(1), on_line(0.4), on_line(0.4)) == doctest::Approx(1.0));
}

TEST_CASE("cross ratio errors") {
  Vec off(3);
  off << 0.5, 0.3, 1.0;
  CHECK_THROWS_AS(cross_ratio(on_line(0), on_line(1), on_line(0.5), ProjectivePoint(off)), Error);
  try {
    cross_ratio(on_line(0), on_line(1), on_line(0), on_line(0.5));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConfiguration);
  }
}

TEST_CASE("cross ratio is homography invariant and a cocycle") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double x = 0.05 + 0.3 * U(rng), y = 0.4 + 0.2 * U(rng), z = 0.65 + 0.3 * U(rng);
    const auto a = on_line(0), b = on_line(1), px = on_line(x), py = on_line(y), pz = on_line(z);
    const double c = cross_ratio(a, b, px, py);
    const Homography g = random_homography(rng);
    CHECK(std::abs(cross_ratio(g.apply(a), g.apply(b), g.apply(px), g.apply(py)) - c) < 1e-10);
    CHECK(std::abs(cross_ratio(a, b, px, pz) - c * cross_ratio(a, b, py, pz)) < 1e-10);
  }
}

TEST_CASE("homography application") {
  Vec d(3);
  d << 2, 1, 1;
  const Homography g(Mat(d.asDiagonal()));
  Vec p(3), q(3);
  p << 1, 0, 1;
  q << 2, 0, 1;
  CHECK(same_point(apply_homography(g, ProjectivePoint(p)), ProjectivePoint(q)));
  CHECK(std::abs(std::abs(g.matrix().determinant()) - 1) < 1e-12);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const Homography h = random_homography(rng), f = random_homography(rng);
    Vec v = Vec::Random(3);
    const ProjectivePoint r(v);
    CHECK(same_point(h.inverse().apply(h.apply(r)), r, 1e-12));
    CHECK(same_point((h * f).apply(r), h.apply(f.apply(r)), 1e-12));
    CHECK(same_point(Homography::identity(2).apply(r), r));
  }
}

TEST_CASE("singular matrices are rejected") {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1;
  CHECK_THROWS_AS(Homography{m}, Error);
}

TEST_CASE("offset push matches difference of images") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Homography g = random_homography(rng);
    const Vec x = 0.2 * Vec::Random(2), y = 1e-3 * Vec::Random(2);
    const Vec direct = g.apply_affine(x + y) - g.apply_affine(x);
    CHECK((g.push_offset(x, y) - direct).norm() < 1e-12);
    const Vec v = Vec::Random(2);
    const double h = 1e-6;
    const Vec fd = (g.apply_affine(x + h * v) - g.apply_affine(x - h * v)) / (2 * h);
    CHECK((g.push_vector(x, v) - fd).norm() < 1e-7);
  }
}

TEST_CASE("adapted chart of a disk diameter keeps the line at infinity") {
  const auto disk = ConvexDomain::ball(2);
  Vec p(2), q(2);
  p << 1, 0;
  q << -1, 0;
  const auto chart = adapted_chart(disk, ProjectivePoint::from_affine(p), ProjectivePoint::from_affine(q));
  const Vec h = chart.hyperplane_at_infinity();
  CHECK(std::abs(h(0)) < 1e-12);
  CHECK(std::abs(h(1)) < 1e-12);
  CHECK(chart.coordinates(ProjectivePoint::from_affine(p)).norm() < 1e-12);
  const Vec cm = chart.coordinates(ProjectivePoint::from_affine(q));
  CHECK(std::abs(cm(0) - 1) < 1e-12);
}

TEST_CASE("adapted charts make endpoint tangents parallel and orthogonal to the chord") {
  std::mt19937_64 rng(4);
  std::vector<ConvexDomain> domains = {ConvexDomain::ball(2), ConvexDomain::p_ball(2, 4)};
  Mat Q = Mat::Identity(2, 2);
  Q(0, 0) = 0.25;
  domains.push_back(ConvexDomain::ellipsoid(Vec::Zero(2), Q));
  for (const auto& d : domains) {
    for (int k = 0; k < 100; ++k) {
      const Vec x = d.random_interior(rng, 0.1);
      const auto c = d.chord(x, d.random_direction(rng));
      const auto chart = adapted_chart(d, ProjectivePoint::from_affine(c.xplus), ProjectivePoint::from_affine(c.xminus));
      const Vec np = chart_normal(chart, d.boundary_tangent(c.xplus));
      const Vec nm = chart_normal(chart, d.boundary_tangent(c.xminus));
      CHECK(std::abs(std::abs(np(0)) - 1) < 1e-8);
      CHECK(std::abs(std::abs(nm(0)) - 1) < 1e-8);
      const Vec e = chart.coordinates(ProjectivePoint::from_affine(c.xminus));
      CHECK(std::abs(e(0) - 1) < 1e-9);
      CHECK(std::abs(e(1)) < 1e-9);
    }
  }
}

TEST_CASE("adapted chart for the ellipse chord (2,0)-(0,1)") {
  Mat Q = Mat::Identity(2, 2);
  Q(0, 0) = 0.25;
  const auto d = ConvexDomain::ellipsoid(Vec::Zero(2), Q);
  Vec p(2), q(2);
  p << 2, 0;
  q << 0, 1;
  const auto chart = adapted_chart(d, ProjectivePoint::from_affine(p), ProjectivePoint::from_affine(q));
  const Vec np = chart_normal(chart, d.boundary_tangent(p));
  const Vec nm = chart_normal(chart, d.boundary_tangent(q));
  CHECK(std::abs(np(1)) < 1e-8);
  CHECK(std::abs(nm(1)) < 1e-8);
}

TEST_CASE("adapted chart fails at corners") {
  const auto sq = ConvexDomain::cube(2);
  Vec p(2), q(2);
  p << 1, 1;
  q << -1, -1;
  try {
    adapted_chart(sq, ProjectivePoint::from_affine(p), ProjectivePoint::from_affine(q));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TangentUnavailable);
  }
}
