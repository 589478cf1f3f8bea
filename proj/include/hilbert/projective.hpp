#pragma once

#include <optional>

#include "hilbert/errors.hpp"
#include "hilbert/linalg.hpp"

namespace hilbert {

class ConvexDomain;

// A point of RP^n stored as a unit vector whose first significant entry is positive.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(const Vec& coords);
  static ProjectivePoint from_affine(const Vec& x) { return ProjectivePoint(lift(x)); }

  const Vec& coords() const { return coords_; }
  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  // Dehomogenize against the last coordinate.
  Vec affine() const;

 private:
  Vec coords_;
};

bool same_point(const ProjectivePoint& p, const ProjectivePoint& q, double tol = 1e-12);

class Homography {
 public:
  explicit Homography(const Mat& m);
  static Homography identity(int n) { return Homography(Mat::Identity(n + 1, n + 1)); }

  const Mat& matrix() const { return m_; }
  int dimension() const { return static_cast<int>(m_.rows()) - 1; }
  double condition_number() const { return cond_; }

  Homography inverse() const;
  Homography operator*(const Homography& other) const;

  ProjectivePoint apply(const ProjectivePoint& p) const;
  Vec apply_affine(const Vec& x) const;
  // Differential at x applied to v, in affine coordinates.
  Vec push_vector(const Vec& x, const Vec& v) const;
  // Image of x + y minus image of x, without cancellation.
  Vec push_offset(const Vec& x, const Vec& y) const;

 private:
  Mat m_;
  double cond_ = 1.0;
};

ProjectivePoint apply_homography(const Homography& g, const ProjectivePoint& p);

// Signed [a,b,x,y] = (ax/bx)/(ay/by) along the common line.
double cross_ratio(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& x,
                   const ProjectivePoint& y);

// Affine chart given by its lift matrix L = [e_1 .. e_n | o]; chart coords c map to L (c, 1).
class AffineChart {
 public:
  explicit AffineChart(const Mat& lift_matrix);
  static AffineChart standard(int n) { return AffineChart(Mat::Identity(n + 1, n + 1)); }

  int dimension() const { return static_cast<int>(lift_.rows()) - 1; }
  const Mat& lift_matrix() const { return lift_; }
  Vec hyperplane_at_infinity() const { return inv_.row(lift_.rows() - 1).transpose(); }
  Mat frame() const { return lift_.leftCols(lift_.cols() - 1); }
  Vec origin() const { return lift_.col(lift_.cols() - 1); }

  Vec to_homogeneous(const Vec& c) const { return lift_ * hilbert::lift(c); }
  Vec from_homogeneous(const Vec& X) const;
  Vec coordinates(const ProjectivePoint& p) const { return from_homogeneous(p.coords()); }

  // Homography from this chart's coordinates to the standard chart.
  Homography to_standard() const { return Homography(lift_); }

 private:
  Mat lift_;
  Mat inv_;
};

// Chart with x+ at the origin and x- at e_1 whose hyperplane at infinity is h = H+ + H-.
// Covectors are supporting hyperplanes at x+ (H+) and x- (H-), lifts use the standard chart.
AffineChart adapted_chart_from_supports(const Vec& Hplus, const Vec& Hminus, const Vec& Xplus,
                                        const Vec& Xminus);

AffineChart adapted_chart(const ConvexDomain& domain, const ProjectivePoint& xplus,
                          const ProjectivePoint& xminus);

}  // namespace hilbert
