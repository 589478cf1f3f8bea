#include "hilbert/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "body.hpp"

namespace hilbert {

namespace detail {

double Body::hit(const Vec& base, const Vec& y, const Vec& v, bool anchored) const {
  auto f = [&](double lam) {
    const Vec z = y + lam * v;
    return anchored ? value_local(base, z) : value(base + z);
  };
  double hi = 2.0 * (radius_ + (base + y - center_).norm());
  if (!(f(hi) > 0)) fail(ErrorCode::NoConvergence, "ray does not leave the bounding ball");
  double lo = 0;
  for (int k = 0; k < 1100; ++k) {
    const double mid = 0.5 * hi;
    if (f(mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
      break;
    }
  }
  if (lo == 0) fail(ErrorCode::NoConvergence, "boundary hit not bracketed");
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double Body::local_hit(const Vec& p, const Mat& E, double gn, const Vec& c, const Vec& d) const {
  auto f = [&](double lam) { return local_value(p, E, gn, Vec(c + lam * d)); };
  double hi = 2.0 * (radius_ + (p - center_).norm());
  if (!(f(hi) > 0)) fail(ErrorCode::NoConvergence, "ray does not leave the bounding ball");
  double lo = 0;
  for (int k = 0; k < 1100; ++k) {
    const double mid = 0.5 * hi;
    if (f(mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
      break;
    }
  }
  if (lo == 0) fail(ErrorCode::NoConvergence, "boundary hit not bracketed");
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

Vec numeric_gradient(const Body& body, const Vec& p) {
  const int n = body.dimension();
  Vec g(n);
  const double h = 1e-7 * (1 + body.radius());
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    g(i) = (body.value(p + e) - body.value(p - e)) / (2 * h);
  }
  return g;
}

Vec Body::frame_normal(const Vec& p) const {
  if (auto t = tangent(p)) return t->normal;
  Vec g = gradient(p).value_or(numeric_gradient(*this, p));
  if (!(g.norm() > 0) || !g.allFinite()) g = numeric_gradient(*this, p);
  return g.normalized();
}

namespace {

constexpr double kPi = std::numbers::pi;

// (1+t)^p - 1 - p t, accurate for small t.
double binomial_remainder(double p, double t) {
  if (std::abs(t) > 1e-3) return std::expm1(p * std::log1p(t)) - p * t;
  double term = p * (p - 1) / 2 * t * t, sum = 0;
  for (int k = 2; k < 12 && term != 0; ++k) {
    sum += term;
    term *= (p - k) / (k + 1) * t;
  }
  return sum;
}

class Ellipsoid final : public Body {
 public:
  Ellipsoid(const Vec& c, const Mat& Q) : Q_(Q) {
    center_ = c;
    Eigen::SelfAdjointEigenSolver<Mat> es(Q);
    if (es.eigenvalues().minCoeff() <= 0) fail(ErrorCode::InvalidSpec, "ellipsoid shape must be positive definite");
    radius_ = 1.0 / std::sqrt(es.eigenvalues().minCoeff());
  }
  DomainKind kind() const override { return DomainKind::ellipsoid; }
  int dimension() const override { return static_cast<int>(center_.size()); }
  std::string description() const override {
    std::ostringstream os;
    os << "ellipsoid(n=" << dimension() << ")";
    return os.str();
  }
  double value(const Vec& x) const override {
    const Vec d = x - center_;
    return d.dot(Q_ * d) - 1.0;
  }
  double value_local(const Vec& p, const Vec& y) const override {
    return 2.0 * (p - center_).dot(Q_ * y) + y.dot(Q_ * y);
  }
  std::optional<Vec> gradient(const Vec& p) const override { return Vec(2.0 * Q_ * (p - center_)); }
  double hit(const Vec& base, const Vec& y, const Vec& v, bool anchored) const override {
    const Vec d = base - center_ + y;
    const Vec Qv = Q_ * v;
    const double A = v.dot(Qv), B = d.dot(Qv);
    const double C = anchored ? value_local(base, y) : value(base + y);
    const double s = std::sqrt(std::max(0.0, B * B - A * C));
    const double lam = B >= 0 ? -C / (B + s) : (-B + s) / A;
    return std::max(0.0, lam);
  }
  double local_value(const Vec&, const Mat& E, double gn, const Vec& c) const override {
    return gn * c(0) + c.dot(E.transpose() * Q_ * E * c);
  }
  double local_hit(const Vec& p, const Mat& E, double gn, const Vec& c, const Vec& d) const override {
    const Mat QE = E.transpose() * Q_ * E;
    const double A = d.dot(QE * d), B = 0.5 * gn * d(0) + c.dot(QE * d);
    const double C = local_value(p, E, gn, c);
    const double s = std::sqrt(std::max(0.0, B * B - A * C));
    const double lam = B >= 0 ? -C / (B + s) : (-B + s) / A;
    return std::max(0.0, lam);
  }

 private:
  Mat Q_;
};

class Polytope : public Body {
 public:
  Polytope(const Mat& normals, const Vec& offsets, std::vector<Vec> verts) : verts_(std::move(verts)) {
    N_ = normals;
    c_ = offsets;
    for (int i = 0; i < N_.rows(); ++i) {
      const double len = N_.row(i).norm();
      if (!(len > 0)) fail(ErrorCode::InvalidSpec, "zero face normal");
      N_.row(i) /= len;
      c_(i) /= len;
    }
    if (verts_.empty()) verts_ = enumerate_vertices();
    if (verts_.size() < static_cast<size_t>(N_.cols() + 1)) fail(ErrorCode::InvalidSpec, "polytope is empty or unbounded");
    center_ = Vec::Zero(N_.cols());
    for (const auto& v : verts_) center_ += v;
    center_ /= static_cast<double>(verts_.size());
    radius_ = 0;
    for (const auto& v : verts_) radius_ = std::max(radius_, (v - center_).norm());
    if (!((N_ * center_ - c_).maxCoeff() < 0)) fail(ErrorCode::InvalidSpec, "polytope has empty interior");
  }
  DomainKind kind() const override { return DomainKind::polytope; }
  int dimension() const override { return static_cast<int>(N_.cols()); }
  std::string description() const override {
    std::ostringstream os;
    os << "polytope(n=" << dimension() << ", faces=" << N_.rows() << ")";
    return os.str();
  }
  bool strictly_convex() const override { return false; }
  std::vector<Vec> vertices() const override { return verts_; }

  double value(const Vec& x) const override { return (N_ * x - c_).maxCoeff(); }
  double value_local(const Vec& p, const Vec& y) const override { return (anchored_slack(p) + N_ * y).maxCoeff(); }
  std::optional<Vec> gradient(const Vec& p) const override {
    Eigen::Index i;
    (N_ * p - c_).maxCoeff(&i);
    return Vec(N_.row(i).transpose());
  }
  void check_smooth(const Vec& p) const override {
    const Vec s = N_ * p - c_;
    const double top = s.maxCoeff();
    int active = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > top - 1e-9 * (1 + radius_)) ++active;
    if (active > 1) fail(ErrorCode::NonSmoothPoint, "point lies on a corner of the polytope");
  }
  std::optional<Hyperplane> tangent(const Vec& p) const override {
    Eigen::Index i;
    (N_ * p - c_).maxCoeff(&i);
    return Hyperplane{N_.row(i).transpose(), c_(i)};
  }
  double hit(const Vec& base, const Vec& y, const Vec& v, bool anchored) const override {
    const Vec s = (anchored ? anchored_slack(base) : Vec(N_ * base - c_)) + N_ * y;
    const Vec nv = N_ * v;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i)
      if (nv(i) > 0) best = std::min(best, -s(i) / nv(i));
    if (!std::isfinite(best)) fail(ErrorCode::NoConvergence, "ray does not leave the polytope");
    return std::max(0.0, best);
  }
  Vec frame_normal(const Vec& p) const override {
    Eigen::Index i;
    (N_ * p - c_).maxCoeff(&i);
    return N_.row(i).transpose();
  }
  double local_value(const Vec& p, const Mat& E, double, const Vec& c) const override {
    return (anchored_slack(p) + local_rows(p, E) * c).maxCoeff();
  }
  double local_hit(const Vec& p, const Mat& E, double, const Vec& c, const Vec& d) const override {
    const Mat R = local_rows(p, E);
    const Vec s = anchored_slack(p) + R * c;
    const Vec nd = R * d;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i)
      if (nd(i) > 0) best = std::min(best, -s(i) / nd(i));
    if (!std::isfinite(best)) fail(ErrorCode::NoConvergence, "ray does not leave the polytope");
    return std::max(0.0, best);
  }

 protected:
  // Face normals in frame coordinates; the face carrying the frame normal is exactly e_0.
  Mat local_rows(const Vec& p, const Mat& E) const {
    Mat R = N_ * E;
    const Vec s = anchored_slack(p);
    for (int i = 0; i < R.rows(); ++i)
      if (s(i) == 0 && (N_.row(i).transpose() - E.col(0)).norm() < 1e-12) {
        R.row(i).setZero();
        R(i, 0) = 1.0;
      }
    return R;
  }

  Vec anchored_slack(const Vec& p) const {
    Vec s = N_ * p - c_;
    s.array() -= s.maxCoeff();
    const double tol = 1e-13 * (1 + radius_);
    for (int i = 0; i < s.size(); ++i)
      if (std::abs(s(i)) < tol) s(i) = 0;
    return s;
  }

  std::vector<Vec> enumerate_vertices() const {
    const int n = static_cast<int>(N_.cols()), m = static_cast<int>(N_.rows());
    std::vector<Vec> out;
    std::vector<int> idx(n);
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + std::min(n, m), true);
    do {
      Mat A(n, n);
      Vec b(n);
      int k = 0;
      for (int i = 0; i < m; ++i)
        if (pick[i]) {
          A.row(k) = N_.row(i);
          b(k) = c_(i);
          ++k;
        }
      Eigen::FullPivLU<Mat> lu(A);
      if (!lu.isInvertible()) continue;
      const Vec x = lu.solve(b);
      if ((N_ * x - c_).maxCoeff() > 1e-9) continue;
      bool dup = false;
      for (const auto& o : out)
        if ((o - x).norm() < 1e-9) dup = true;
      if (!dup) out.push_back(x);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
  }

  Mat N_;
  Vec c_;
  std::vector<Vec> verts_;
};

class Hull final : public Polytope {
 public:
  Hull(const Mat& normals, const Vec& offsets, std::vector<Vec> verts, double resolution)
      : Polytope(normals, offsets, std::move(verts)), resolution_(resolution) {}
  DomainKind kind() const override { return DomainKind::hull; }
  std::string description() const override {
    std::ostringstream os;
    os << "hull(vertices=" << verts_.size() << ")";
    return os.str();
  }
  // Approximates a strictly convex set; corners are a sampling artifact.
  bool strictly_convex() const override { return true; }
  double angular_resolution() const override { return resolution_; }

 private:
  double resolution_;
};

class PBall final : public Body {
 public:
  PBall(int n, double p) : n_(n), p_(p) {
    center_ = Vec::Zero(n);
    radius_ = std::max(1.0, std::pow(static_cast<double>(n), 0.5 - 1.0 / p));
  }
  DomainKind kind() const override { return DomainKind::p_ball; }
  int dimension() const override { return n_; }
  std::string description() const override {
    std::ostringstream os;
    os << "p_ball(n=" << n_ << ", p=" << p_ << ")";
    return os.str();
  }
  double value(const Vec& x) const override {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += std::pow(std::abs(x(i)), p_);
    return s - 1.0;
  }
  double value_local(const Vec& p, const Vec& y) const override {
    double s = 0;
    for (int i = 0; i < n_; ++i) {
      const double pi = p(i), yi = y(i);
      if (pi != 0 && std::abs(yi) < 0.5 * std::abs(pi))
        s += std::pow(std::abs(pi), p_) * std::expm1(p_ * std::log1p(yi / pi));
      else
        s += std::pow(std::abs(pi + yi), p_) - std::pow(std::abs(pi), p_);
    }
    return s;
  }
  std::optional<Vec> gradient(const Vec& x) const override {
    Vec g(n_);
    for (int i = 0; i < n_; ++i) g(i) = p_ * std::copysign(std::pow(std::abs(x(i)), p_ - 1), x(i));
    return g;
  }
  double local_value(const Vec& p, const Mat& E, double gn, const Vec& c) const override {
    const Vec y = E * c;
    double rem = 0;
    for (int i = 0; i < n_; ++i) {
      const double pi = p(i), yi = y(i);
      if (pi == 0) rem += std::pow(std::abs(yi), p_);
      else if (std::abs(yi) < 0.5 * std::abs(pi)) rem += std::pow(std::abs(pi), p_) * binomial_remainder(p_, yi / pi);
      else
        rem += std::pow(std::abs(pi + yi), p_) - std::pow(std::abs(pi), p_) -
               p_ * std::copysign(std::pow(std::abs(pi), p_ - 1), pi) * yi;
    }
    return gn * c(0) + rem;
  }

 private:
  int n_;
  double p_;
};

class BoundaryCurve final : public Body {
 public:
  BoundaryCurve(const Vec& c, const std::vector<double>& radii) {
    const int K = static_cast<int>(radii.size());
    if (K < 3) fail(ErrorCode::InvalidSpec, "boundary_curve needs at least 3 radius samples");
    for (double r : radii)
      if (!(r > 0)) fail(ErrorCode::InvalidSpec, "boundary_curve radii must be positive");
    center_ = c;
    const int H = K / 2;
    a_.assign(H + 1, 0.0);
    b_.assign(H + 1, 0.0);
    for (int j = 0; j <= H; ++j) {
      double sa = 0, sb = 0;
      for (int k = 0; k < K; ++k) {
        const double th = 2 * kPi * k / K;
        sa += radii[k] * std::cos(j * th);
        sb += radii[k] * std::sin(j * th);
      }
      const double w = (j == 0 || (K % 2 == 0 && j == H)) ? 1.0 / K : 2.0 / K;
      a_[j] = w * sa;
      b_[j] = (K % 2 == 0 && j == H) ? 0.0 : w * sb;
    }
    radius_ = 0;
    strict_ = true;
    for (int k = 0; k < 4096; ++k) {
      const double th = 2 * kPi * k / 4096;
      const double r = eval(th, 0), r1 = eval(th, 1), r2 = eval(th, 2);
      if (!(r > 0)) fail(ErrorCode::InvalidSpec, "interpolated radius is not positive");
      const double curv = r * r + 2 * r1 * r1 - r * r2;
      if (curv < -1e-12 * r * r) fail(ErrorCode::InvalidSpec, "boundary_curve is not convex");
      if (curv <= 1e-9 * r * r) strict_ = false;
      radius_ = std::max(radius_, r);
    }
  }
  DomainKind kind() const override { return DomainKind::boundary_curve; }
  int dimension() const override { return 2; }
  std::string description() const override {
    std::ostringstream os;
    os << "boundary_curve(modes=" << a_.size() << ")";
    return os.str();
  }
  bool strictly_convex() const override { return strict_; }

  double value(const Vec& x) const override {
    const Vec d = x - center_;
    const double rho = d.norm();
    if (rho == 0) return -1.0;
    return rho / eval(std::atan2(d(1), d(0)), 0) - 1.0;
  }
  double value_local(const Vec& p, const Vec& y) const override {
    const Vec d = p - center_, e = d + y;
    const double rho = d.norm(), rho2 = e.norm();
    const double drho = (2 * d.dot(y) + y.squaredNorm()) / (rho + rho2);
    const double th = std::atan2(d(1), d(0));
    const double dth = std::atan2(d(0) * e(1) - d(1) * e(0), d.dot(e));
    double dr = 0;
    for (size_t j = 1; j < a_.size(); ++j) {
      const double mid = j * th + 0.5 * j * dth, half = std::sin(0.5 * j * dth);
      dr += -2 * a_[j] * std::sin(mid) * half + 2 * b_[j] * std::cos(mid) * half;
    }
    return (drho - dr) / eval(th + dth, 0);
  }
  std::optional<Vec> gradient(const Vec& x) const override {
    const Vec d = x - center_;
    const double th = std::atan2(d(1), d(0));
    const double r = eval(th, 0), r1 = eval(th, 1);
    Vec rh(2), th_hat(2);
    rh << std::cos(th), std::sin(th);
    th_hat << -std::sin(th), std::cos(th);
    return Vec(rh / r - (r1 / (r * r)) * th_hat);
  }

 private:
  double eval(double th, int deriv) const {
    double s = deriv == 0 ? a_[0] : 0.0;
    for (size_t j = 1; j < a_.size(); ++j) {
      const double c = std::cos(j * th), sn = std::sin(j * th), jj = static_cast<double>(j);
      if (deriv == 0) s += a_[j] * c + b_[j] * sn;
      else if (deriv == 1) s += jj * (-a_[j] * sn + b_[j] * c);
      else s += -jj * jj * (a_[j] * c + b_[j] * sn);
    }
    return s;
  }
  std::vector<double> a_, b_;
  bool strict_ = true;
};

class PowerRegion final : public Body {
 public:
  PowerRegion(double alpha, double width) : alpha_(alpha), width_(width) {
    if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::InvalidSpec, "power_region alpha must lie in (0,1)");
    if (!(width > 0)) fail(ErrorCode::InvalidSpec, "power_region width must be positive");
    center_ = Vec(2);
    center_ << 0.5, 0.0;
    radius_ = 0.5 + width;
  }
  DomainKind kind() const override { return DomainKind::power_region; }
  int dimension() const override { return 2; }
  std::string description() const override {
    std::ostringstream os;
    os << "power_region(alpha=" << alpha_ << ", width=" << width_ << ")";
    return os.str();
  }
  double value(const Vec& x) const override {
    const double u = x(0), w = std::abs(x(1));
    if (u <= 0) return -u + w;
    if (u >= 1) return u - 1 + w;
    return w - profile(u);
  }
  std::optional<Vec> gradient(const Vec& x) const override {
    const double u = std::clamp(x(0), 1e-300, 1 - 1e-16);
    Vec g(2);
    g << -profile(u) * (alpha_ / u - (1 - alpha_) / (1 - u)), x(1) >= 0 ? 1.0 : -1.0;
    return g;
  }
  std::optional<Hyperplane> tangent(const Vec& p) const override {
    Vec nrm(2);
    if (p(0) < 1e-9 && std::abs(p(1)) < 1e-6) {
      nrm << -1, 0;
      return Hyperplane{nrm, 0.0};
    }
    if (p(0) > 1 - 1e-9 && std::abs(p(1)) < 1e-6) {
      nrm << 1, 0;
      return Hyperplane{nrm, 1.0};
    }
    return std::nullopt;
  }

 private:
  double profile(double u) const { return width_ * std::pow(u, alpha_) * std::pow(1 - u, 1 - alpha_); }
  double alpha_, width_;
};

Hyperplane body_tangent(const Body& body, const Vec& p);

class Projected final : public Body {
 public:
  Projected(std::shared_ptr<const Body> base, const Homography& g) : base_(std::move(base)), g_(g), ginv_(g.inverse()) {
    center_ = g_.apply_affine(base_->center());
    radius_ = 0;
    const int n = base_->dimension();
    std::mt19937_64 rng(7);
    for (int k = 0; k < 64; ++k) {
      const Vec u = random_unit(n, rng);
      const double a = base_->hit(base_->center(), Vec::Zero(n), u, false);
      radius_ = std::max(radius_, (g_.apply_affine(base_->center() + a * u) - center_).norm());
    }
  }
  DomainKind kind() const override { return DomainKind::projective_image; }
  int dimension() const override { return base_->dimension(); }
  std::string description() const override { return "projective_image(" + base_->description() + ")"; }
  bool strictly_convex() const override { return base_->strictly_convex(); }
  double angular_resolution() const override { return base_->angular_resolution(); }
  std::vector<Vec> vertices() const override {
    std::vector<Vec> out;
    for (const auto& v : base_->vertices()) out.push_back(g_.apply_affine(v));
    return out;
  }

  double value(const Vec& y) const override {
    const int n = dimension();
    const Vec Z = ginv_.matrix() * lift(y);
    if (std::abs(Z(n)) < 1e-300) return 1.0;
    return base_->value(Z.head(n) / Z(n));
  }
  std::optional<Vec> gradient(const Vec& p) const override { return tangent(p)->normal; }
  void check_smooth(const Vec& p) const override { base_->check_smooth(ginv_.apply_affine(p)); }
  std::optional<Hyperplane> tangent(const Vec& p) const override {
    const int n = dimension();
    const Hyperplane hb = body_tangent(*base_, ginv_.apply_affine(p));
    Vec H(n + 1);
    H.head(n) = hb.normal;
    H(n) = -hb.offset;
    Vec Ht = ginv_.matrix().transpose() * H;
    if (Ht.dot(lift(center_)) > 0) Ht = -Ht;
    const double len = Ht.head(n).norm();
    return Hyperplane{Ht.head(n) / len, -Ht(n) / len};
  }
  double hit(const Vec& base, const Vec& y, const Vec& v, bool anchored) const override {
    const int n = dimension();
    if (!anchored) {
      const Vec x = base + y;
      const Vec z = ginv_.apply_affine(x);
      const Vec w = ginv_.push_vector(x, v).normalized();
      const double lam = base_->hit(z, Vec::Zero(n), w, false);
      return std::max(0.0, (g_.apply_affine(z + lam * w) - x).dot(v));
    }
    const Vec q = ginv_.apply_affine(base);
    const Vec yq = ginv_.push_offset(base, y);
    const Vec w = ginv_.push_vector(base + y, v).normalized();
    const double lam = base_->hit(q, yq, w, true);
    const Vec o = g_.push_offset(q, yq + lam * w);
    return std::max(0.0, (o - y).dot(v));
  }

 private:
  std::shared_ptr<const Body> base_;
  Homography g_, ginv_;
};


Hyperplane body_tangent(const Body& body, const Vec& p) {
  body.check_smooth(p);
  if (auto t = body.tangent(p)) return *t;
  Vec g = body.gradient(p).value_or(numeric_gradient(body, p));
  if (!(g.norm() > 0) || !g.allFinite()) g = numeric_gradient(body, p);
  if (!(g.norm() > 0) || !g.allFinite()) fail(ErrorCode::TangentUnavailable, "vanishing boundary gradient");
  g.normalize();
  return Hyperplane{g, g.dot(p)};
}

std::vector<Vec> planar_hull(const std::vector<Vec>& pts) {
  std::vector<Vec> p = pts;
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) { return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1)); });
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  double scale = 0;
  for (const auto& q : p) scale = std::max(scale, q.norm());
  const double eps = 1e-14 * scale * scale;
  std::vector<Vec> h(2 * p.size());
  size_t k = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  const size_t lower = k + 1;
  for (int i = static_cast<int>(p.size()) - 2; i >= 0; --i) {
    while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  return h;
}

void polygon_faces(const std::vector<Vec>& v, Mat& N, Vec& c, double& max_turn) {
  const int m = static_cast<int>(v.size());
  N.resize(m, 2);
  c.resize(m);
  max_turn = 0;
  for (int i = 0; i < m; ++i) {
    const Vec e = v[(i + 1) % m] - v[i];
    const Vec e2 = v[(i + 2) % m] - v[(i + 1) % m];
    N(i, 0) = e(1);
    N(i, 1) = -e(0);
    N.row(i) /= e.norm();
    c(i) = N.row(i).dot(v[i]);
    const double turn = std::atan2(e(0) * e2(1) - e(1) * e2(0), e.dot(e2));
    max_turn = std::max(max_turn, turn);
  }
}

}  // namespace
}  // namespace detail

const char* kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::ellipsoid: return "ellipsoid";
    case DomainKind::polytope: return "polytope";
    case DomainKind::p_ball: return "p_ball";
    case DomainKind::boundary_curve: return "boundary_curve";
    case DomainKind::hull: return "hull";
    case DomainKind::power_region: return "power_region";
    case DomainKind::projective_image: return "projective_image";
  }
  return "unknown";
}

Vec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec u(n);
  do {
    for (int i = 0; i < n; ++i) u(i) = g(rng);
  } while (u.norm() < 1e-8);
  return u.normalized();
}

ConvexDomain ConvexDomain::ellipsoid(const Vec& center, const Mat& shape) {
  if (center.size() < 2 || shape.rows() != center.size() || shape.cols() != center.size())
    fail(ErrorCode::InvalidSpec, "ellipsoid needs n>=2 and an n x n shape");
  if ((shape - shape.transpose()).norm() > 1e-12 * shape.norm()) fail(ErrorCode::InvalidSpec, "ellipsoid shape must be symmetric");
  return ConvexDomain(std::make_shared<detail::Ellipsoid>(center, shape));
}

ConvexDomain ConvexDomain::ball(int n) { return ellipsoid(Vec::Zero(n), Mat::Identity(n, n)); }

ConvexDomain ConvexDomain::p_ball(int n, double p) {
  if (n < 2) fail(ErrorCode::InvalidSpec, "dimension must be at least 2");
  if (!(p > 1) || !std::isfinite(p)) fail(ErrorCode::InvalidSpec, "p_ball needs p > 1");
  return ConvexDomain(std::make_shared<detail::PBall>(n, p));
}

ConvexDomain ConvexDomain::polytope(const Mat& normals, const Vec& offsets) {
  if (normals.cols() < 2 || normals.rows() != offsets.size() || normals.rows() <= normals.cols())
    fail(ErrorCode::InvalidSpec, "polytope needs more than n half-spaces");
  return ConvexDomain(std::make_shared<detail::Polytope>(normals, offsets, std::vector<Vec>{}));
}

ConvexDomain ConvexDomain::polygon(const std::vector<Vec>& vertices) {
  for (const auto& v : vertices)
    if (v.size() != 2) fail(ErrorCode::InvalidSpec, "polygon vertices must be planar");
  const auto h = detail::planar_hull(vertices);
  if (h.size() < 3 || h.size() != vertices.size()) fail(ErrorCode::InvalidSpec, "polygon vertices are not in convex position");
  Mat N;
  Vec c;
  double turn;
  detail::polygon_faces(h, N, c, turn);
  return ConvexDomain(std::make_shared<detail::Polytope>(N, c, h));
}

ConvexDomain ConvexDomain::cube(int n) {
  Mat N(2 * n, n);
  N.setZero();
  for (int i = 0; i < n; ++i) {
    N(2 * i, i) = 1;
    N(2 * i + 1, i) = -1;
  }
  return polytope(N, Vec::Ones(2 * n));
}

ConvexDomain ConvexDomain::boundary_curve(const Vec& center, const std::vector<double>& radii) {
  if (center.size() != 2) fail(ErrorCode::InvalidSpec, "boundary_curve is planar");
  return ConvexDomain(std::make_shared<detail::BoundaryCurve>(center, radii));
}

ConvexDomain ConvexDomain::hull(const std::vector<Vec>& points) {
  if (points.size() < 4) fail(ErrorCode::InvalidSpec, "hull needs at least n+2 points");
  for (const auto& v : points)
    if (v.size() != 2 || !v.allFinite()) fail(ErrorCode::InvalidSpec, "hull points must be finite planar points");
  const auto h = detail::planar_hull(points);
  if (h.size() < 3) fail(ErrorCode::InvalidSpec, "hull is degenerate");
  Mat N;
  Vec c;
  double turn;
  detail::polygon_faces(h, N, c, turn);
  return ConvexDomain(std::make_shared<detail::Hull>(N, c, h, turn));
}

ConvexDomain ConvexDomain::power_region(double alpha, double width) {
  return ConvexDomain(std::make_shared<detail::PowerRegion>(alpha, width));
}

ConvexDomain ConvexDomain::transformed(const Homography& g) const {
  if (g.dimension() != dimension()) fail(ErrorCode::InvalidSpec, "homography dimension mismatch");
  return ConvexDomain(std::make_shared<detail::Projected>(body_, g));
}

DomainKind ConvexDomain::kind() const { return body_->kind(); }
int ConvexDomain::dimension() const { return body_->dimension(); }
const Vec& ConvexDomain::base_point() const { return body_->center(); }
bool ConvexDomain::strictly_convex() const { return body_->strictly_convex(); }
double ConvexDomain::angular_resolution() const { return body_->angular_resolution(); }
std::vector<Vec> ConvexDomain::vertices() const { return body_->vertices(); }
std::string ConvexDomain::description() const { return body_->description(); }

bool ConvexDomain::contains(const Vec& x) const {
  if (x.size() != dimension() || !x.allFinite()) return false;
  return body_->value(x) < -1e-12;
}

double ConvexDomain::boundary_value(const Vec& x) const { return body_->value(x); }

ChordEndpoints ConvexDomain::chord(const Vec& x, const Vec& v) const {
  if (!contains(x)) fail(ErrorCode::NotInterior, "chord base point is not interior");
  const double len = v.norm();
  if (!(len > 0)) fail(ErrorCode::DegenerateDirection, "zero direction");
  const Vec u = v / len;
  const Vec zero = Vec::Zero(x.size());
  ChordEndpoints c;
  c.a = body_->hit(x, zero, u, false);
  c.b = body_->hit(x, zero, -u, false);
  if (!(c.a > 0 && c.b > 0)) fail(ErrorCode::NotInterior, "degenerate chord");
  c.xplus = x + c.a * u;
  c.xminus = x - c.b * u;
  return c;
}

double ConvexDomain::hit(const AnchoredPoint& p, const Vec& v) const {
  return body_->hit(p.anchor, p.offset, v.normalized(), true);
}

Vec ConvexDomain::approximate_normal(const Vec& p) const {
  if (auto t = body_->tangent(p)) return t->normal;
  Vec g = body_->gradient(p).value_or(detail::numeric_gradient(*body_, p));
  if (!(g.norm() > 0) || !g.allFinite()) g = detail::numeric_gradient(*body_, p);
  return g.normalized();
}

LocalFrame ConvexDomain::local_frame(const Vec& anchor) const {
  LocalFrame f;
  f.anchor = anchor;
  const Vec N = body_->frame_normal(anchor);
  const int n = dimension();
  f.E.resize(n, n);
  f.E.col(0) = N;
  Mat A(1, n);
  A.row(0) = N.transpose();
  f.E.rightCols(n - 1) = null_space(A);
  const auto g = body_->gradient(anchor);
  f.grad_norm = g ? g->norm() : 1.0;
  return f;
}

double ConvexDomain::hit_local(const LocalFrame& f, const Vec& c, const Vec& d) const {
  return body_->local_hit(f.anchor, f.E, f.grad_norm, c, d.normalized());
}

Hyperplane ConvexDomain::boundary_tangent(const Vec& p) const {
  if (p.size() != dimension()) fail(ErrorCode::NotOnBoundary, "dimension mismatch");
  const double val = body_->value(p);
  if (!(std::abs(val) <= 1e-10)) {
    const Vec g = approximate_normal(p) * 1e-9 * (1 + body_->radius());
    if (!(body_->value(p + g) > 0 && body_->value(p - g) <= 0)) fail(ErrorCode::NotOnBoundary, "point is not on the boundary");
  }
  Hyperplane h = detail::body_tangent(*body_, p);
  const double scale = 1 + body_->radius();
  if (!(h.normal.dot(base_point()) < h.offset)) fail(ErrorCode::TangentUnavailable, "supporting side check failed");
  for (int k = 0; k < 8; ++k) {
    const double th = 2 * std::numbers::pi * k / 8;
    Vec u = Vec::Zero(dimension());
    u(0) = std::cos(th);
    u(1) = std::sin(th);
    const Vec q = base_point() + body_->hit(base_point(), Vec::Zero(dimension()), u, false) * u;
    if (h.normal.dot(q) > h.offset + 1e-8 * scale) fail(ErrorCode::TangentUnavailable, "hyperplane is not supporting");
  }
  return h;
}

Vec ConvexDomain::random_interior(std::mt19937_64& rng, double margin) const {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Vec u = random_unit(dimension(), rng);
  const double a = body_->hit(base_point(), Vec::Zero(dimension()), u, false);
  return base_point() + (1.0 - margin) * U(rng) * a * u;
}

Vec ConvexDomain::random_direction(std::mt19937_64& rng) const { return random_unit(dimension(), rng); }

namespace {

Vec json_vec(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidSpec, "expected a numeric array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::InvalidSpec, "expected a numeric array");
    v(i) = j[i].get<double>();
  }
  return v;
}

Mat json_mat(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::InvalidSpec, "expected a matrix");
  Mat m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Vec r = json_vec(j[i]);
    if (r.size() != m.cols()) fail(ErrorCode::InvalidSpec, "ragged matrix");
    m.row(i) = r.transpose();
  }
  return m;
}

std::vector<Vec> json_points(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidSpec, "expected a point list");
  std::vector<Vec> out;
  for (const auto& p : j) out.push_back(json_vec(p));
  return out;
}

ConvexDomain self_checked(ConvexDomain d) {
  if (!d.contains(d.base_point())) fail(ErrorCode::InvalidSpec, "base point is not interior");
  std::mt19937_64 rng(12345);
  for (int k = 0; k < 64; ++k) {
    const Vec x = d.random_interior(rng), y = d.random_interior(rng);
    if (!d.contains(0.5 * (x + y))) fail(ErrorCode::InvalidSpec, "convexity sampling failed");
  }
  return d;
}

}  // namespace

ConvexDomain make_domain(const nlohmann::json& spec) {
  try {
    if (!spec.is_object() || !spec.contains("kind")) fail(ErrorCode::InvalidSpec, "domain needs a kind");
    const std::string kind = spec.at("kind").get<std::string>();
    const int n = spec.value("n", 2);
    if (n < 2) fail(ErrorCode::InvalidSpec, "dimension must be at least 2");
    std::optional<ConvexDomain> d;
    if (kind == "ellipsoid") {
      const Vec c = spec.contains("center") ? json_vec(spec["center"]) : Vec(Vec::Zero(n));
      Mat Q = Mat::Identity(c.size(), c.size());
      if (spec.contains("shape")) Q = json_mat(spec["shape"]);
      else if (spec.contains("axes")) {
        const Vec ax = json_vec(spec["axes"]);
        if (ax.size() != c.size()) fail(ErrorCode::InvalidSpec, "axes length mismatch");
        for (int i = 0; i < ax.size(); ++i) {
          if (!(ax(i) > 0)) fail(ErrorCode::InvalidSpec, "axes must be positive");
          Q(i, i) = 1.0 / (ax(i) * ax(i));
        }
      }
      d = ConvexDomain::ellipsoid(c, Q);
    } else if (kind == "p_ball") {
      d = ConvexDomain::p_ball(n, spec.at("p").get<double>());
    } else if (kind == "polytope") {
      if (spec.contains("vertices")) d = ConvexDomain::polygon(json_points(spec["vertices"]));
      else if (spec.contains("normals")) d = ConvexDomain::polytope(json_mat(spec["normals"]), json_vec(spec.at("offsets")));
      else d = ConvexDomain::cube(n);
    } else if (kind == "cube") {
      d = ConvexDomain::cube(n);
    } else if (kind == "boundary_curve") {
      const Vec c = spec.contains("center") ? json_vec(spec["center"]) : Vec(Vec::Zero(2));
      d = ConvexDomain::boundary_curve(c, spec.at("radii").get<std::vector<double>>());
    } else if (kind == "hull") {
      d = ConvexDomain::hull(json_points(spec.at("points")));
    } else if (kind == "power_region") {
      d = ConvexDomain::power_region(spec.at("alpha").get<double>(), spec.value("width", 0.5));
    } else {
      fail(ErrorCode::InvalidSpec, "unknown domain kind '" + kind + "'");
    }
    if (spec.contains("homography")) d = d->transformed(Homography(json_mat(spec["homography"])));
    return self_checked(*d);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidSpec, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSpec) throw;
    fail(ErrorCode::InvalidSpec, e.what());
  }
}

}  // namespace hilbert
