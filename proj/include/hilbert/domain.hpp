#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbert/errors.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/projective.hpp"

namespace hilbert {

enum class DomainKind { ellipsoid, polytope, p_ball, boundary_curve, hull, power_region, projective_image };

const char* kind_name(DomainKind kind);

struct ChordEndpoints {
  Vec xplus;
  Vec xminus;
  double a = 0;  // |x x+|
  double b = 0;  // |x x-|
};

// {y : normal.y = offset} with the domain on the side normal.y < offset.
struct Hyperplane {
  Vec normal;
  double offset = 0;
};

// anchor + offset with the anchor treated as an exact boundary point. Points within
// 1e-16 of the boundary keep their relative position this way.
struct AnchoredPoint {
  Vec anchor;
  Vec offset;
  Vec point() const { return anchor + offset; }
};

// Orthonormal frame at a boundary point; E.col(0) is the outward normal.
struct LocalFrame {
  Vec anchor;
  Mat E;
  double grad_norm = 1;
};

namespace detail {
class Body;
}

class ConvexDomain {
 public:
  // {(x-c)^T Q (x-c) < 1} with Q symmetric positive definite.
  static ConvexDomain ellipsoid(const Vec& center, const Mat& shape);
  static ConvexDomain ball(int n);
  // {sum |x_i|^p < 1}.
  static ConvexDomain p_ball(int n, double p);
  // {normals.row(i) . x < offsets(i)}.
  static ConvexDomain polytope(const Mat& normals, const Vec& offsets);
  // Planar polygon from vertices in convex position.
  static ConvexDomain polygon(const std::vector<Vec>& vertices);
  static ConvexDomain cube(int n);
  // Planar star body r < r(theta) around center, r trigonometrically interpolated
  // from equally spaced samples starting at theta = 0.
  static ConvexDomain boundary_curve(const Vec& center, const std::vector<double>& radii);
  // Planar convex hull of a point cloud.
  static ConvexDomain hull(const std::vector<Vec>& points);
  // {(u,w) : 0<u<1, |w| < width u^alpha (1-u)^(1-alpha)}.
  static ConvexDomain power_region(double alpha, double width);

  // Image g(domain) expressed in the target chart.
  ConvexDomain transformed(const Homography& g) const;

  DomainKind kind() const;
  int dimension() const;
  const Vec& base_point() const;
  bool strictly_convex() const;
  // Hull turning-angle resolution in radians, 0 for other kinds.
  double angular_resolution() const;
  std::vector<Vec> vertices() const;
  std::string description() const;

  bool contains(const Vec& x) const;
  double boundary_value(const Vec& x) const;
  ChordEndpoints chord(const Vec& x, const Vec& v) const;
  // Distance from p.point() to the boundary along unit v, to full relative precision.
  double hit(const AnchoredPoint& p, const Vec& v) const;
  Hyperplane boundary_tangent(const Vec& p) const;
  // Outward unit normal at or near a boundary point; never throws at kinks.
  Vec approximate_normal(const Vec& p) const;

  LocalFrame local_frame(const Vec& anchor) const;
  // Distance to the boundary from anchor + E c along frame direction d.
  double hit_local(const LocalFrame& f, const Vec& c, const Vec& d) const;

  Vec random_interior(std::mt19937_64& rng, double margin = 0.02) const;
  Vec random_direction(std::mt19937_64& rng) const;

 private:
  explicit ConvexDomain(std::shared_ptr<const detail::Body> body) : body_(std::move(body)) {}
  std::shared_ptr<const detail::Body> body_;
};

Vec random_unit(int n, std::mt19937_64& rng);

ConvexDomain make_domain(const nlohmann::json& spec);

}  // namespace hilbert
