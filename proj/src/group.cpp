#include "hilbert/group.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace hilbert {

namespace {

constexpr double kGapTol = 1e-8;

Mat normalize_det(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 2) fail(ErrorCode::InvalidParameter, "group elements are square matrices");
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300) fail(ErrorCode::SingularMatrix, "singular group element");
  return m / std::pow(std::abs(det), 1.0 / static_cast<double>(m.rows()));
}

Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& l : r) l = -l;
  return r;
}

int coxeter_m(const std::vector<std::vector<int>>& m, int a, int b) { return m[a][b]; }

int alternating_run(const std::vector<int>& x, int k) {
  const int n = static_cast<int>(x.size());
  const int a = x[k], b = x[(k + 1) % n];
  int len = 1;
  while (len < n && x[(k + len) % n] == (len % 2 == 0 ? a : b)) ++len;
  return len;
}

}  // namespace

GroupElement::GroupElement(const Mat& m, Word w) : matrix(normalize_det(m)), word(std::move(w)) {}

GroupElement GroupElement::inverse() const { return GroupElement(matrix.inverse(), inverse_word(word)); }

GroupElement GroupElement::operator*(const GroupElement& o) const {
  Word w = word;
  w.insert(w.end(), o.word.begin(), o.word.end());
  return GroupElement(matrix * o.matrix, std::move(w));
}

EigenData eigen_data(const GroupElement& g) {
  const int k = g.size();
  Eigen::EigenSolver<Mat> right(g.matrix), left(g.matrix.transpose());
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  const auto& ev = right.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  EigenData e;
  for (int i : order) e.moduli.push_back(std::abs(ev(i)));
  if (e.moduli[0] / e.moduli[1] - 1 < kGapTol || e.moduli[k - 2] / e.moduli[k - 1] - 1 < kGapTol)
    fail(ErrorCode::NearDefective, "extreme eigenvalue moduli are not separated");
  auto real_vec = [](const Eigen::VectorXcd& v) {
    // Rotate the complex phase away before dropping the imaginary part.
    int j = 0;
    for (int i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(j))) j = i;
    const auto phase = v(j) / std::abs(v(j));
    Vec r = (v / phase).real();
    return Vec(r.normalized());
  };
  e.top_vector = ProjectivePoint(real_vec(right.eigenvectors().col(order.front())));
  e.bottom_vector = ProjectivePoint(real_vec(right.eigenvectors().col(order.back())));
  const auto& lv = left.eigenvalues();
  auto closest = [&](std::complex<double> target) {
    int j = 0;
    for (int i = 1; i < k; ++i)
      if (std::abs(lv(i) - target) < std::abs(lv(j) - target)) j = i;
    return real_vec(left.eigenvectors().col(j));
  };
  e.top_covector = closest(ev(order.front()));
  e.bottom_covector = closest(ev(order.back()));
  return e;
}

bool is_biproximal(const GroupElement& g) {
  try {
    eigen_data(g);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NearDefective) return false;
    throw;
  }
}

namespace {

EigenData biproximal_data(const GroupElement& g) {
  try {
    return eigen_data(g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NearDefective) fail(ErrorCode::NotBiproximal, "element is not biproximal");
    throw;
  }
}

}  // namespace

double translation_length(const GroupElement& g) {
  const auto e = biproximal_data(g);
  return 0.5 * (std::log(e.moduli.front()) - std::log(e.moduli.back()));
}

std::vector<PeriodicExponent> periodic_lyapunov(const GroupElement& g) {
  const auto e = biproximal_data(g);
  const double top = std::log(e.moduli.front()), bottom = std::log(e.moduli.back());
  std::vector<double> mids;
  for (std::size_t i = 1; i + 1 < e.moduli.size(); ++i) {
    const double l = std::log(e.moduli[i]);
    if (mids.empty() || std::abs(mids.back() - l) > kGapTol) mids.push_back(l);
  }
  std::vector<PeriodicExponent> out;
  for (double l : mids) {
    PeriodicExponent p;
    p.chi_plus = 2 * (top - l) / (top - bottom);
    p.eta = -1 + p.chi_plus;
    p.chi_minus = p.chi_plus - 2;
    out.push_back(p);
  }
  return out;
}

GroupElement so21_embed(double a, double b, double c, double d) {
  if (!(std::abs(a * d - b * c - 1) < 1e-9)) fail(ErrorCode::InvalidDeterminant, "so21_embed needs ad - bc = 1");
  Eigen::Matrix2d g;
  g << a, b, c, d;
  // Homogeneous (x, y, z) <-> symmetric Q = [[z + x, y], [y, z - x]]; det Q = z^2 - x^2 - y^2.
  auto to_q = [](const Vec& X) {
    Eigen::Matrix2d Q;
    Q << X(2) + X(0), X(1), X(1), X(2) - X(0);
    return Q;
  };
  Mat M(3, 3);
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix2d Q = g * to_q(Vec::Unit(3, j)) * g.transpose();
    M(0, j) = 0.5 * (Q(0, 0) - Q(1, 1));
    M(1, j) = Q(0, 1);
    M(2, j) = 0.5 * (Q(0, 0) + Q(1, 1));
  }
  return GroupElement(M);
}

std::string TriangleFamily::description() const {
  std::ostringstream os;
  os << "triangle(" << p << "," << q << "," << r << "; s=" << s << ")";
  return os.str();
}

TriangleFamily triangle_reflection_family(int p, int q, int r, double s) {
  if (p < 2 || q < 2 || r < 2 || q * r + p * r + p * q >= p * q * r)
    fail(ErrorCode::NotHyperbolicType, "triangle type must satisfy 1/p + 1/q + 1/r < 1");
  if (!(s > 0) || !std::isfinite(s)) fail(ErrorCode::InvalidParameter, "deformation parameter must be positive");
  TriangleFamily f;
  f.p = p;
  f.q = q;
  f.r = r;
  f.s = s;
  const int m01 = p, m12 = q, m02 = r;
  f.reflection_presentation.m = {{1, m01, m02}, {m01, 1, m12}, {m02, m12, 1}};
  Mat A = 2 * Mat::Identity(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) A(i, j) = -2 * std::cos(std::numbers::pi / f.reflection_presentation.m[i][j]);
  // The deformation lives on the first edge with m >= 3.
  const std::pair<int, int> edges[3] = {{0, 1}, {1, 2}, {0, 2}};
  for (auto [i, j] : edges)
    if (f.reflection_presentation.m[i][j] >= 3) {
      A(i, j) *= s;
      A(j, i) /= s;
      break;
    }
  f.cartan = A;
  for (int i = 0; i < 3; ++i) {
    Mat S = Mat::Identity(3, 3);
    S.row(i) -= A.row(i);
    f.reflections.emplace_back(S, Word{i + 1});
  }
  f.reflection_presentation.expansion = {{0}, {1}, {2}};
  f.rotations = {GroupElement(f.reflections[0].matrix * f.reflections[1].matrix, Word{1}),
                 GroupElement(f.reflections[1].matrix * f.reflections[2].matrix, Word{2})};
  f.rotation_presentation = triangle_rotation_presentation(p, q, r);
  f.chamber_point = A.fullPivLu().solve(Vec::Ones(3)).normalized();
  return f;
}

CoxeterPresentation triangle_rotation_presentation(int p, int q, int r) {
  CoxeterPresentation c;
  c.m = {{1, p, r}, {p, 1, q}, {r, q, 1}};
  c.expansion = {{0, 1}, {1, 2}};
  return c;
}

std::vector<Mat> fuchsian_triangle_rotations(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2 || q * r + p * r + p * q >= p * q * r)
    fail(ErrorCode::NotHyperbolicType, "triangle type must satisfy 1/p + 1/q + 1/r < 1");
  const double pi = std::numbers::pi;
  auto rot = [](double th) {
    Mat R(2, 2);
    R << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
    return R;
  };
  const double cd = (std::cos(pi / r) + std::cos(pi / p) * std::cos(pi / q)) / (std::sin(pi / p) * std::sin(pi / q));
  const double d = std::acosh(cd);
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = std::exp(d / 2);
  D(1, 1) = std::exp(-d / 2);
  const Mat X = rot(pi / p);
  for (double sign : {1.0, -1.0}) {
    const Mat Y = D * rot(sign * pi / q) * D.inverse();
    if (std::abs(std::abs((X * Y).trace()) - 2 * std::cos(pi / r)) < 1e-9) return {X, Y};
  }
  fail(ErrorCode::NoConvergence, "triangle rotations do not close up");
}

std::vector<int> coxeter_conjugacy_key(std::vector<int> w, const std::vector<std::vector<int>>& m) {
  for (;;) {
    int n = static_cast<int>(w.size());
    if (n == 0) return w;
    bool cancelled = false;
    for (int k = 0; k < n && n >= 2; ++k)
      if (w[k] == w[(k + 1) % n]) {
        if (k == n - 1)
          w = std::vector<int>(w.begin() + 1, w.end() - 1);
        else
          w.erase(w.begin() + k, w.begin() + k + 2);
        cancelled = true;
        break;
      }
    if (cancelled) continue;
    if (n == 1) return w;

    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> stack{w};
    std::optional<std::vector<int>> reducible;
    while (!stack.empty() && !reducible) {
      auto x = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(x).second) continue;
      for (int k = 0; k < n; ++k) {
        const int a = x[k], b = x[(k + 1) % n];
        if (a == b) {
          reducible = x;
          break;
        }
        const int mm = coxeter_m(m, a, b);
        const int len = alternating_run(x, k);
        if (mm < n && len > mm) {
          reducible = x;
          break;
        }
        if (mm < n && len >= mm) {
          auto y = x;
          for (int l = 0; l < mm; ++l) y[(k + l) % n] = l % 2 == 0 ? b : a;
          stack.push_back(std::move(y));
        }
      }
      if (!reducible) {
        std::vector<int> y(x.begin() + 1, x.end());
        y.push_back(x.front());
        stack.push_back(std::move(y));
      }
      if (seen.size() > 200000) fail(ErrorCode::ExplosionGuard, "conjugacy closure too large");
    }
    if (!reducible) return *seen.begin();

    const auto& x = *reducible;
    std::vector<int> next;
    for (int k = 0; k < n; ++k) {
      const int a = x[k], b = x[(k + 1) % n];
      if (a == b) {
        for (int l = 0; l < n - 2; ++l) next.push_back(x[(k + 2 + l) % n]);
        break;
      }
      const int mm = coxeter_m(m, a, b);
      if (mm < n && alternating_run(x, k) > mm) {
        // Braid the first mm letters, then the next letter cancels.
        for (int l = 0; l < mm - 1; ++l) next.push_back(l % 2 == 0 ? b : a);
        for (int l = mm + 1; l < n; ++l) next.push_back(x[(k + l) % n]);
        break;
      }
    }
    w = std::move(next);
  }
}

std::vector<GroupElement> enumerate_conjugacy_classes(const std::vector<GroupElement>& generators, int max_len,
                                                      const std::optional<CoxeterPresentation>& presentation) {
  if (max_len < 0) fail(ErrorCode::InvalidParameter, "max_len must be non-negative");
  if (max_len > 16) fail(ErrorCode::ExplosionGuard, "max_len above 16");
  if (max_len == 0 || generators.empty()) return {};
  const int k = static_cast<int>(generators.size());
  if (presentation && static_cast<int>(presentation->expansion.size()) != k)
    fail(ErrorCode::InvalidParameter, "presentation does not match the generators");

  // Alphabet: letter codes, matrices, index of the inverse letter.
  std::vector<int> code;
  std::vector<Mat> mats;
  std::vector<int> inv;
  for (int i = 0; i < k; ++i) {
    const Mat& g = generators[i].matrix;
    const bool involution = presentation ? presentation->expansion[i].size() == 1
                                         : ((g * g).cwiseAbs() - Mat::Identity(g.rows(), g.cols())).norm() < 1e-10;
    const int self = static_cast<int>(code.size());
    code.push_back(i + 1);
    mats.push_back(g);
    if (involution) {
      inv.push_back(self);
    } else {
      inv.push_back(self + 1);
      code.push_back(-(i + 1));
      mats.push_back(g.inverse());
      inv.push_back(self);
    }
  }
  const int A = static_cast<int>(code.size());
  double estimate = 0;
  for (int L = 1; L <= max_len; ++L) estimate += A * std::pow(std::max(A - 1, 1), L - 1) / L;
  if (estimate > 1e7) fail(ErrorCode::ExplosionGuard, "too many words to enumerate");

  std::map<std::vector<int>, std::vector<int>> classes;  // key -> alphabet word
  std::vector<int> w;
  auto is_min_rotation = [&]() {
    const int n = static_cast<int>(w.size());
    for (int s = 1; s < n; ++s)
      for (int i = 0; i < n; ++i) {
        const int a = w[(s + i) % n], b = w[i];
        if (a < b) return false;
        if (a > b) break;
      }
    return true;
  };
  auto visit = [&]() {
    const int n = static_cast<int>(w.size());
    if (n > 1 && inv[w.back()] == w.front()) return;
    if (!is_min_rotation()) return;
    std::vector<int> key;
    if (presentation) {
      std::vector<int> letters;
      for (int l : w) {
        const auto& e = presentation->expansion[std::abs(code[l]) - 1];
        if (code[l] > 0)
          letters.insert(letters.end(), e.begin(), e.end());
        else
          letters.insert(letters.end(), e.rbegin(), e.rend());
      }
      key = coxeter_conjugacy_key(letters, presentation->m);
      if (key.empty()) return;
    } else {
      key = w;
    }
    auto it = classes.find(key);
    if (it == classes.end() || it->second.size() > w.size()) classes[key] = w;
  };
  auto dfs = [&](auto&& self) -> void {
    if (!w.empty()) visit();
    if (static_cast<int>(w.size()) == max_len) return;
    for (int l = 0; l < A; ++l) {
      if (!w.empty() && (l < w.front() || inv[w.back()] == l)) continue;
      w.push_back(l);
      self(self);
      w.pop_back();
    }
  };
  dfs(dfs);

  std::vector<std::pair<std::vector<int>, std::vector<int>>> ordered(classes.begin(), classes.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
  std::vector<GroupElement> out;
  const int dim = static_cast<int>(generators.front().matrix.rows());
  for (const auto& [key, word] : ordered) {
    Mat M = Mat::Identity(dim, dim);
    Word letters;
    for (int l : word) {
      M = M * mats[l];
      letters.push_back(code[l]);
    }
    out.emplace_back(M, letters);
  }
  return out;
}

double conic_fit_residual(const std::vector<Vec>& points) {
  const int N = static_cast<int>(points.size());
  if (N < 6) fail(ErrorCode::InsufficientSamples, "conic fit needs at least six points");
  Vec mean = Vec::Zero(2);
  for (const auto& p : points) mean += p;
  mean /= N;
  double rms = 0;
  for (const auto& p : points) rms += (p - mean).squaredNorm();
  rms = std::sqrt(rms / N);
  Mat D(N, 6);
  for (int i = 0; i < N; ++i) {
    const Vec z = (points[i] - mean) / rms;
    D.row(i) << z(0) * z(0), z(0) * z(1), z(1) * z(1), z(0), z(1), 1;
  }
  Eigen::JacobiSVD<Mat> svd(D);
  return svd.singularValues()(5) / std::sqrt(static_cast<double>(N));
}

namespace {

double outside_distance(const std::vector<Vec>& poly, const Vec& x) {
  const int n = static_cast<int>(poly.size());
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  double area = 0;
  for (int i = 0; i < n; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % n];
    area += a(0) * b(1) - a(1) * b(0);
  }
  const double orient = area > 0 ? 1 : -1;
  for (int i = 0; i < n; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % n];
    const Vec e = b - a;
    const double cross = e(0) * (x - a)(1) - e(1) * (x - a)(0);
    if (orient * cross < 0) inside = false;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (a + t * e - x).norm());
  }
  return inside ? 0.0 : best;
}

}  // namespace

GroupElement HullResult::to_chart(const GroupElement& g) const {
  return GroupElement(chart.matrix() * g.matrix * chart.inverse().matrix(), g.word);
}

HullResult generate_domain_hull(const std::vector<GroupElement>& generators, int max_len, const Vec& interior_hint,
                                const std::optional<CoxeterPresentation>& presentation) {
  if (generators.empty() || generators.front().size() != 3)
    fail(ErrorCode::UnsupportedDimension, "hull generation is planar");
  const auto classes = enumerate_conjugacy_classes(generators, max_len, presentation);
  auto letter = [&](int l) -> Mat {
    return l > 0 ? generators[l - 1].matrix : Mat(generators[-l - 1].matrix.inverse());
  };
  // Attracting and repelling points of every cyclic conjugate of each class representative.
  std::vector<Vec> cone;
  for (const auto& g : classes) {
    EigenData e;
    try {
      e = eigen_data(g);
    } catch (const Error&) {
      continue;
    }
    Mat prefix = Mat::Identity(3, 3);
    const int n = static_cast<int>(g.word.size());
    for (int k = 0; k < std::max(n, 1); ++k) {
      if (k > 0) prefix = prefix * letter(g.word[k - 1]);
      const auto lu = prefix.fullPivLu();
      for (const auto& [point, covector] : {std::pair{e.top_vector.coords(), e.top_covector},
                                            std::pair{e.bottom_vector.coords(), e.bottom_covector}}) {
        Vec v = lu.solve(point);
        const Vec ell = (covector.transpose() * prefix).transpose();
        const double side = ell.dot(interior_hint), at = ell.dot(v);
        if (std::abs(side) < 1e-12 * ell.norm() || std::abs(at) < 1e-12 * ell.norm() * v.norm()) continue;
        if (side * at < 0) v = -v;
        cone.push_back(v.normalized());
      }
    }
  }
  if (cone.size() < 6) fail(ErrorCode::NotProperlyConvex, "too few attracting fixed points");

  // Perceptron for a covector positive on every oriented point.
  Vec phi = Vec::Zero(3);
  for (const auto& v : cone) phi += v;
  if (phi.norm() < 1e-12) fail(ErrorCode::NotProperlyConvex, "fixed points are not in a common cone");
  phi.normalize();
  bool separated = false;
  for (int it = 0; it < 100000; ++it) {
    int worst = 0;
    for (int i = 1; i < static_cast<int>(cone.size()); ++i)
      if (cone[i].dot(phi) < cone[worst].dot(phi)) worst = i;
    if (cone[worst].dot(phi) > 1e-9) {
      separated = true;
      break;
    }
    phi = (phi + cone[worst]).normalized();
  }
  if (!separated) fail(ErrorCode::NotProperlyConvex, "no affine chart contains every fixed point");

  Mat P(3, 3);
  {
    Mat row(1, 3);
    row.row(0) = phi.transpose();
    const Mat K = null_space(row);
    P.row(0) = K.col(0).transpose();
    P.row(1) = K.col(1).transpose();
    P.row(2) = phi.transpose();
  }
  HullResult res{ConvexDomain::ball(2), Homography(P)};
  std::vector<Vec> pts;
  for (const auto& v : cone) {
    const Vec Y = res.chart.matrix() * v;
    pts.push_back(Y.head(2) / Y(2));
  }
  try {
    res.domain = ConvexDomain::hull(pts);
  } catch (const Error& e) {
    fail(ErrorCode::NotProperlyConvex, e.what());
  }
  const auto verts = res.domain.vertices();
  res.points = static_cast<int>(verts.size());
  res.conic_residual = verts.size() >= 6 ? conic_fit_residual(verts) : 0;
  double gap = 0;
  for (const auto& g : generators)
    for (const auto& h : {res.to_chart(g), res.to_chart(g.inverse())})
      for (const auto& v : verts) {
        const Vec X = h.matrix * lift(v);
        if (X(2) <= 0) {
          gap = std::numeric_limits<double>::infinity();
          continue;
        }
        gap = std::max(gap, outside_distance(verts, X.head(2) / X(2)));
      }
  res.hausdorff_gap = gap;
  return res;
}

}  // namespace hilbert
