#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbert/domain.hpp"

using namespace hilbert;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("containment examples") {
  const auto disk = make_domain({{"kind", "ellipsoid"}, {"n", 2}});
  CHECK(disk.contains(v2(0, 0)));
  CHECK_FALSE(disk.contains(v2(1, 0)));
  const auto pb = make_domain({{"kind", "p_ball"}, {"p", 4}});
  CHECK_FALSE(pb.contains(v2(0.9, 0.9)));
  CHECK(pb.contains(v2(0.9, 0.5)));
}

TEST_CASE("chord examples") {
  const auto disk = ConvexDomain::ball(2);
  auto c = disk.chord(v2(0, 0), v2(1, 0));
  CHECK(c.a == doctest::Approx(1).epsilon(1e-14));
  CHECK(c.b == doctest::Approx(1).epsilon(1e-14));
  c = disk.chord(v2(0.5, 0), v2(1, 0));
  CHECK(c.a == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.b == doctest::Approx(1.5).epsilon(1e-14));
  const auto sq = make_domain({{"kind", "polytope"}, {"vertices", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}}});
  c = sq.chord(v2(0, 0), v2(1, 1) / std::sqrt(2.0));
  CHECK(c.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c.b == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(code_of([&] { disk.chord(v2(2, 0), v2(1, 0)); }) == ErrorCode::NotInterior);
}

TEST_CASE("chord invariants on all kinds") {
  std::mt19937_64 rng(5);
  std::vector<ConvexDomain> ds = {ConvexDomain::ball(2),
                                  ConvexDomain::ball(3),
                                  ConvexDomain::p_ball(2, 4),
                                  ConvexDomain::p_ball(3, 3),
                                  ConvexDomain::cube(2),
                                  ConvexDomain::cube(3),
                                  ConvexDomain::boundary_curve(v2(0.1, 0), {1.0, 1.1, 1.2, 1.1, 1.0, 0.95, 0.9, 0.95}),
                                  ConvexDomain::power_region(0.8, 0.5)};
  for (const auto& d : ds) {
    CAPTURE(d.description());
    CHECK(d.contains(d.base_point()));
    for (int k = 0; k < 200; ++k) {
      const Vec x = d.random_interior(rng);
      const Vec v = d.random_direction(rng);
      const auto c = d.chord(x, v);
      CHECK(std::abs(c.a + c.b - (c.xplus - c.xminus).norm()) < 1e-10);
      if (d.kind() != DomainKind::power_region) {
        CHECK(std::abs(d.boundary_value(c.xplus)) < 1e-12);
        CHECK(std::abs(d.boundary_value(c.xminus)) < 1e-12);
      } else {
        // Cusped profile: check the hit brackets the sign change instead.
        const Vec u = v.normalized();
        CHECK(d.boundary_value(x + c.a * (1 - 1e-12) * u) <= 0);
        CHECK(d.boundary_value(x + c.a * (1 + 1e-12) * u) > 0);
      }
      const auto r = d.chord(x, -v);
      CHECK(r.a == c.b);
      CHECK(r.b == c.a);
      const Vec y = d.random_interior(rng);
      CHECK(d.contains(0.5 * (x + y)));
    }
  }
}

TEST_CASE("strictly convex kinds have injective endpoint maps") {
  const auto pb = ConvexDomain::p_ball(2, 4);
  Vec prev;
  for (int k = 0; k < 360; ++k) {
    const double th = 2 * M_PI * k / 360;
    const auto c = pb.chord(v2(0.1, 0.2), v2(std::cos(th), std::sin(th)));
    if (k > 0) CHECK((c.xplus - prev).norm() > 1e-6);
    prev = c.xplus;
  }
  CHECK(pb.strictly_convex());
  CHECK_FALSE(ConvexDomain::cube(2).strictly_convex());
}

TEST_CASE("chords transform with the domain") {
  std::mt19937_64 rng(6);
  Mat m = Mat::Identity(3, 3);
  m(2, 0) = 0.4;
  m(0, 1) = 0.3;
  m(1, 2) = 0.2;
  const Homography g(m);
  for (const auto& base : {ConvexDomain::ball(2), ConvexDomain::p_ball(2, 4), ConvexDomain::cube(2)}) {
    const auto img = base.transformed(g);
    for (int k = 0; k < 100; ++k) {
      const Vec x = base.random_interior(rng);
      const Vec v = base.random_direction(rng);
      const auto c = base.chord(x, v);
      const Vec gx = g.apply_affine(x);
      const auto ci = img.chord(gx, g.push_vector(x, v));
      CHECK((ci.xplus - g.apply_affine(c.xplus)).norm() < 1e-9);
      CHECK((ci.xminus - g.apply_affine(c.xminus)).norm() < 1e-9);
    }
  }
}

TEST_CASE("boundary tangents") {
  const auto disk = ConvexDomain::ball(2);
  auto h = disk.boundary_tangent(v2(1, 0));
  CHECK((h.normal - v2(1, 0)).norm() < 1e-12);
  CHECK(h.offset == doctest::Approx(1));
  Mat Q = Mat::Identity(2, 2);
  Q(0, 0) = 0.25;
  h = ConvexDomain::ellipsoid(Vec::Zero(2), Q).boundary_tangent(v2(2, 0));
  CHECK((h.normal - v2(1, 0)).norm() < 1e-12);
  CHECK(h.offset == doctest::Approx(2));
  h = ConvexDomain::p_ball(2, 4).boundary_tangent(v2(0, 1));
  CHECK((h.normal - v2(0, 1)).norm() < 1e-12);
  CHECK(h.offset == doctest::Approx(1));
  CHECK(code_of([&] { ConvexDomain::cube(2).boundary_tangent(v2(1, 1)); }) == ErrorCode::NonSmoothPoint);
  CHECK(code_of([&] { disk.boundary_tangent(v2(0.5, 0)); }) == ErrorCode::NotOnBoundary);
  h = ConvexDomain::cube(2).boundary_tangent(v2(1, 0.3));
  CHECK((h.normal - v2(1, 0)).norm() < 1e-12);
}

TEST_CASE("transformed tangents match a finite-difference oracle") {
  Mat m = Mat::Identity(3, 3);
  m(2, 0) = 0.3;
  m(0, 1) = 0.2;
  const auto img = ConvexDomain::p_ball(2, 3).transformed(Homography(m));
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const auto c = img.chord(img.random_interior(rng), img.random_direction(rng));
    const auto h = img.boundary_tangent(c.xplus);
    const Vec t(v2(-h.normal(1), h.normal(0)));
    // Points slightly along the tangent stay outside to second order.
    for (double s : {1e-3, -1e-3}) CHECK(img.boundary_value(c.xplus + s * t) > -1e-9);
  }
}

TEST_CASE("anchored hits keep relative precision") {
  const Vec p = v2(1, 0);
  for (const auto& d : {ConvexDomain::ball(2), ConvexDomain::p_ball(2, 4), ConvexDomain::cube(2)}) {
    CAPTURE(d.description());
    for (double gap : {1e-5, 1e-20, 1e-60}) {
      const AnchoredPoint x{p, v2(-gap, 0)};
      CHECK(d.hit(x, v2(1, 0)) == doctest::Approx(gap).epsilon(1e-12));
    }
  }
  // Disk transverse chord at depth g has half-length sqrt(2g - g^2).
  const AnchoredPoint x{p, v2(-1e-40, 0)};
  CHECK(ConvexDomain::ball(2).hit(x, v2(0, 1)) == doctest::Approx(std::sqrt(2e-40)).epsilon(1e-12));
  // Quartic: (1-g)^4 + y^4 = 1 gives y = (4g)^(1/4) to leading order.
  CHECK(ConvexDomain::p_ball(2, 4).hit(x, v2(0, 1)) == doctest::Approx(std::pow(4e-40, 0.25)).epsilon(1e-10));
}

TEST_CASE("make_domain validation") {
  CHECK(code_of([] { make_domain({{"kind", "p_ball"}, {"p", 0.5}}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_domain({{"kind", "banana"}}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_domain({{"kind", "polytope"}, {"vertices", {{0, 0}, {1, 0}, {0.2, 0.1}, {0, 1}}}}); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_domain({{"kind", "boundary_curve"}, {"radii", {1.0, 0.1, 1.0, 0.1, 1.0, 0.1}}}); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { make_domain({{"kind", "hull"}, {"points", {{0, 0}, {1, 0}}}}); }) == ErrorCode::InvalidSpec);
  const auto sq = make_domain({{"kind", "polytope"}, {"vertices", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}}});
  CHECK(sq.kind() == DomainKind::polytope);
  CHECK(sq.vertices().size() == 4);
  const auto hull = make_domain({{"kind", "hull"}, {"points", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}}}});
  CHECK(hull.kind() == DomainKind::hull);
  CHECK(hull.vertices().size() == 4);
  CHECK(hull.angular_resolution() == doctest::Approx(M_PI / 2));
}
