#include "hilbert/projective.hpp"

#include <cmath>

#include "hilbert/domain.hpp"

namespace hilbert {

Mat null_space(const Mat& A, double rel_tol) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

ProjectivePoint::ProjectivePoint(const Vec& coords) {
  const double norm = coords.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::ZeroVector, "homogeneous vector is zero");
  coords_ = coords / norm;
  for (int i = 0; i < coords_.size(); ++i) {
    if (std::abs(coords_(i)) > 1e-12) {
      if (coords_(i) < 0) coords_ = -coords_;
      break;
    }
  }
}

Vec ProjectivePoint::affine() const {
  const int n = dimension();
  const double w = coords_(n);
  if (std::abs(w) < 1e-14) fail(ErrorCode::AtInfinity, "point lies on the hyperplane at infinity");
  return coords_.head(n) / w;
}

bool same_point(const ProjectivePoint& p, const ProjectivePoint& q, double tol) {
  if (p.coords().size() != q.coords().size()) return false;
  return std::min((p.coords() - q.coords()).norm(), (p.coords() + q.coords()).norm()) <= tol;
}

Homography::Homography(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 2) fail(ErrorCode::SingularMatrix, "matrix must be square");
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-14 * s(0))) fail(ErrorCode::SingularMatrix, "matrix is numerically singular");
  cond_ = s(0) / s(s.size() - 1);
  const double det = m.determinant();
  m_ = m / std::pow(std::abs(det), 1.0 / static_cast<double>(m.rows()));
}

Homography Homography::inverse() const { return Homography(m_.inverse()); }

Homography Homography::operator*(const Homography& other) const { return Homography(m_ * other.m_); }

ProjectivePoint Homography::apply(const ProjectivePoint& p) const {
  Vec y = m_ * p.coords();
  if (y.norm() < 1e-14 * m_.norm()) fail(ErrorCode::ZeroImage, "image vector vanishes");
  return ProjectivePoint(y);
}

Vec Homography::apply_affine(const Vec& x) const {
  const int n = dimension();
  Vec Y = m_ * lift(x);
  if (std::abs(Y(n)) < 1e-300) fail(ErrorCode::AtInfinity, "image lies at infinity");
  return Y.head(n) / Y(n);
}

Vec Homography::push_vector(const Vec& x, const Vec& v) const {
  const int n = dimension();
  Vec A = m_ * lift(x);
  Vec B = m_ * lift_direction(v);
  const double alpha = A(n);
  return (B.head(n) * alpha - A.head(n) * B(n)) / (alpha * alpha);
}

Vec Homography::push_offset(const Vec& x, const Vec& y) const {
  const int n = dimension();
  Vec A = m_ * lift(x);
  Vec B = m_ * lift_direction(y);
  const double alpha = A(n), beta = B(n);
  return (B.head(n) * alpha - A.head(n) * beta) / (alpha * (alpha + beta));
}

ProjectivePoint apply_homography(const Homography& g, const ProjectivePoint& p) { return g.apply(p); }

double cross_ratio(const ProjectivePoint& a, const ProjectivePoint& b, const ProjectivePoint& x,
                   const ProjectivePoint& y) {
  const int dim = static_cast<int>(a.coords().size());
  Mat M(dim, 4);
  M << a.coords(), b.coords(), x.coords(), y.coords();
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() > 2 && s(2) > 1e-10 * s(0)) fail(ErrorCode::NotCollinear, "points do not span a line");

  // Orthonormal basis of the plane spanned by the lifts, starting from a.
  Vec u = a.coords();
  Vec w = b.coords() - b.coords().dot(u) * u;
  if (w.norm() < 1e-12) fail(ErrorCode::DegenerateConfiguration, "a and b coincide");
  w.normalize();
  auto det = [&](const Vec& P, const Vec& Q) { return P.dot(u) * Q.dot(w) - P.dot(w) * Q.dot(u); };

  const double ax = det(a.coords(), x.coords()), by = det(b.coords(), y.coords());
  const double bx = det(b.coords(), x.coords()), ay = det(a.coords(), y.coords());
  if (std::abs(bx) < 1e-14 || std::abs(ay) < 1e-14 || std::abs(ax) < 1e-14 || std::abs(by) < 1e-14)
    fail(ErrorCode::DegenerateConfiguration, "coincident points in cross-ratio");
  return (ax * by) / (bx * ay);
}

AffineChart::AffineChart(const Mat& lift_matrix) : lift_(lift_matrix) {
  if (lift_.rows() != lift_.cols()) fail(ErrorCode::SingularMatrix, "chart lift must be square");
  Eigen::FullPivLU<Mat> lu(lift_);
  if (!lu.isInvertible()) fail(ErrorCode::SingularMatrix, "chart frame is degenerate");
  inv_ = lu.inverse();
}

Vec AffineChart::from_homogeneous(const Vec& X) const {
  Vec Y = inv_ * X;
  const int n = dimension();
  if (std::abs(Y(n)) <= 1e-14 * Y.norm()) fail(ErrorCode::AtInfinity, "point at infinity of chart");
  return Y.head(n) / Y(n);
}

AffineChart adapted_chart_from_supports(const Vec& Hplus, const Vec& Hminus, const Vec& Xplus,
                                        const Vec& Xminus) {
  const double hpm = Hplus.dot(Xminus), hmp = Hminus.dot(Xplus);
  const double scale = Xplus.norm() * Xminus.norm();
  if (std::abs(hpm) < 1e-12 * Hplus.norm() * scale || std::abs(hmp) < 1e-12 * Hminus.norm() * scale)
    fail(ErrorCode::ChartFailure, "supporting hyperplane contains the opposite endpoint");
  const Vec Hp = Hplus / hpm, Hm = Hminus / hmp;
  if (std::abs(Hp.dot(Xplus)) > 1e-8 || std::abs(Hm.dot(Xminus)) > 1e-8)
    fail(ErrorCode::ChartFailure, "supporting hyperplane misses its endpoint");

  const int dim = static_cast<int>(Xplus.size());
  const int n = dim - 1;
  Mat K(2, dim);
  K.row(0) = Hp.transpose();
  K.row(1) = Hm.transpose();
  const Mat ker = null_space(K);
  if (ker.cols() != n - 1) fail(ErrorCode::ChartFailure, "tangent hyperplanes coincide");

  const Vec e1 = Xminus - Xplus;
  const double len = e1.head(n).norm() > 0 ? e1.head(n).norm() : e1.norm();
  Mat L(dim, dim);
  L.col(0) = e1;
  for (int j = 0; j < n - 1; ++j) L.col(j + 1) = ker.col(j) * len;
  L.col(n) = Xplus;
  return AffineChart(L);
}

AffineChart adapted_chart(const ConvexDomain& domain, const ProjectivePoint& xplus,
                          const ProjectivePoint& xminus) {
  const Vec p = xplus.affine(), q = xminus.affine();
  Hyperplane tp, tm;
  try {
    tp = domain.boundary_tangent(p);
    tm = domain.boundary_tangent(q);
  } catch (const Error& e) {
    fail(ErrorCode::TangentUnavailable, e.what());
  }
  // Covectors nonnegative on the domain: H(y,1) = offset - normal.y.
  auto covector = [](const Hyperplane& h) {
    Vec H(h.normal.size() + 1);
    H.head(h.normal.size()) = -h.normal;
    H(h.normal.size()) = h.offset;
    return H;
  };
  return adapted_chart_from_supports(covector(tp), covector(tm), lift(p), lift(q));
}

}  // namespace hilbert
