#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hilbert/group.hpp"
#include "hilbert/metric.hpp"

using namespace hilbert;

namespace {

Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

Mat random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Mat h(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = N(rng);
  return h;
}

bool near_plus_minus_identity(const Mat& m, double tol) {
  const Mat I = Mat::Identity(m.rows(), m.cols());
  return (m - I).norm() < tol || (m + I).norm() < tol;
}

Mat power(const Mat& m, int k) {
  Mat r = Mat::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Reduced cyclic words of a free group up to rotation, by brute force over all words.
int brute_force_free_classes(int rank, int max_len) {
  std::set<std::vector<int>> classes;
  std::vector<int> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  for (int L = 1; L <= max_len; ++L) {
    std::vector<int> idx(L, 0);
    for (;;) {
      std::vector<int> w(L);
      for (int i = 0; i < L; ++i) w[i] = letters[idx[i]];
      bool reduced = true;
      for (int i = 0; i < L && reduced; ++i)
        if (L > 1 && w[i] == -w[(i + 1) % L]) reduced = false;
      if (reduced) {
        std::vector<int> best = w;
        for (int s = 1; s < L; ++s) {
          std::vector<int> r(w.begin() + s, w.end());
          r.insert(r.end(), w.begin(), w.begin() + s);
          best = std::min(best, r);
        }
        classes.insert(best);
      }
      int k = 0;
      while (k < L && ++idx[k] == static_cast<int>(letters.size())) idx[k++] = 0;
      if (k == L) break;
    }
  }
  return static_cast<int>(classes.size());
}

}  // namespace

TEST_CASE("eigen data") {
  const auto e = eigen_data(GroupElement(diag3(4, 1, 0.25)));
  CHECK(e.moduli[0] == doctest::Approx(4));
  CHECK(e.moduli[1] == doctest::Approx(1));
  CHECK(e.moduli[2] == doctest::Approx(0.25));
  CHECK(same_point(e.top_vector, ProjectivePoint(Vec::Unit(3, 0)), 1e-12));
  CHECK(same_point(e.bottom_vector, ProjectivePoint(Vec::Unit(3, 2)), 1e-12));
  const auto f = eigen_data(GroupElement(diag3(9, 3, 1.0 / 27)));
  CHECK(f.moduli[0] * f.moduli[1] * f.moduli[2] == doctest::Approx(1).epsilon(1e-8));
  CHECK(f.moduli[1] == doctest::Approx(3));

  // Normalization to |det| = 1.
  const GroupElement g(diag3(8, 2, 1));
  CHECK(std::abs(g.matrix.determinant()) == doctest::Approx(1));

  Mat r = Mat::Identity(3, 3);
  r(0, 0) = r(1, 1) = std::cos(0.4);
  r(0, 1) = -std::sin(0.4);
  r(1, 0) = std::sin(0.4);
  CHECK_THROWS_AS(eigen_data(GroupElement(r)), Error);
  CHECK_FALSE(is_biproximal(GroupElement(r)));
  CHECK_THROWS_AS(translation_length(GroupElement(r)), Error);
  CHECK_THROWS_AS(GroupElement(Mat::Zero(3, 3)), Error);
}

TEST_CASE("translation length") {
  CHECK(translation_length(GroupElement(diag3(std::exp(1.0), 1, std::exp(-1.0)))) == doctest::Approx(1).epsilon(1e-12));
  const GroupElement g(diag3(9, 3, 1.0 / 27));
  CHECK(translation_length(g) == doctest::Approx(2.7465307).epsilon(1e-7));
  CHECK(translation_length(g.inverse()) == doctest::Approx(translation_length(g)).epsilon(1e-12));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const GroupElement h(random_matrix(rng));
    const GroupElement c = h * g * h.inverse();
    CHECK(translation_length(c) == doctest::Approx(translation_length(g)).epsilon(1e-10));
  }
  // Along the axis in the Klein disk the element moves points by its translation length.
  const MetricContext disk(ConvexDomain::ball(2));
  const GroupElement k = so21_embed(1.3, 0.4, 0.7, (1 + 0.4 * 0.7) / 1.3);
  const auto e = eigen_data(k);
  const Vec a = e.top_vector.affine(), b = e.bottom_vector.affine();
  for (double s : {0.3, 0.5, 0.8}) {
    const Vec x = a + s * (b - a);
    CHECK(hilbert_distance(disk, x, k.homography().apply_affine(x)) ==
          doctest::Approx(translation_length(k)).epsilon(1e-8));
  }
}

TEST_CASE("periodic exponents") {
  const auto a = periodic_lyapunov(GroupElement(diag3(4, 1, 0.25)));
  REQUIRE(a.size() == 1);
  CHECK(a[0].eta == doctest::Approx(0).scale(1));
  CHECK(a[0].chi_plus == doctest::Approx(1));
  CHECK(a[0].chi_minus == doctest::Approx(-1));
  const GroupElement g(diag3(9, 3, 1.0 / 27));
  const auto b = periodic_lyapunov(g);
  REQUIRE(b.size() == 1);
  CHECK(b[0].eta == doctest::Approx(-0.6).epsilon(1e-12));
  CHECK(b[0].chi_plus == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(b[0].chi_minus == doctest::Approx(-1.6).epsilon(1e-12));
  CHECK(periodic_lyapunov(g.inverse())[0].eta == doctest::Approx(0.6).epsilon(1e-12));

  Mat m4 = Mat::Zero(4, 4);
  m4.diagonal() << 10, 4, 0.5, 0.05;
  const GroupElement h(m4);
  const auto c = periodic_lyapunov(h), ci = periodic_lyapunov(h.inverse());
  REQUIRE(c.size() == 2);
  REQUIRE(ci.size() == 2);
  CHECK(c[0].eta == doctest::Approx(-ci[1].eta).epsilon(1e-12));
  CHECK(c[1].eta == doctest::Approx(-ci[0].eta).epsilon(1e-12));

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const GroupElement conj(random_matrix(rng));
    const GroupElement x = conj * g * conj.inverse();
    for (int k : {2, 3}) {
      GroupElement p = x;
      for (int j = 1; j < k; ++j) p = p * x;
      CHECK(periodic_lyapunov(p)[0].eta == doctest::Approx(periodic_lyapunov(x)[0].eta).epsilon(1e-8));
    }
  }
}

TEST_CASE("so21 embedding") {
  CHECK((so21_embed(1, 0, 0, 1).matrix - Mat::Identity(3, 3)).norm() < 1e-14);
  const auto e = eigen_data(so21_embed(2, 0, 0, 0.5));
  CHECK(e.moduli[0] == doctest::Approx(4));
  CHECK(e.moduli[1] == doctest::Approx(1));
  CHECK(e.moduli[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(so21_embed(1, 1, 1, 1), Error);
  const Mat J = diag3(1, 1, -1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2, 2);
  const ConvexDomain disk = ConvexDomain::ball(2);
  for (int i = 0; i < 50; ++i) {
    const double a = U(rng) + 2.5, b = U(rng), c = U(rng);
    const GroupElement g = so21_embed(a, b, c, (1 + b * c) / a);
    const Mat M = g.matrix;
    CHECK((M.transpose() * J * M - J).norm() < 1e-9 * M.squaredNorm());
    const Vec x = disk.random_interior(rng);
    CHECK(disk.contains(g.homography().apply_affine(x)));
  }
}

TEST_CASE("triangle reflection family") {
  for (double s : {1.0, 2.0}) {
    const auto f = triangle_reflection_family(3, 3, 4, s);
    const auto& m = f.reflection_presentation.m;
    for (int i = 0; i < 3; ++i) {
      CHECK((f.reflections[i].matrix * f.reflections[i].matrix - Mat::Identity(3, 3)).norm() < 1e-10);
      CHECK(f.cartan(i, i) == 2);
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const double c = std::cos(std::numbers::pi / m[i][j]);
        CHECK(f.cartan(i, j) * f.cartan(j, i) == doctest::Approx(4 * c * c).epsilon(1e-12));
        CHECK(near_plus_minus_identity(power(f.reflections[i].matrix * f.reflections[j].matrix, m[i][j]), 1e-10));
      }
    }
    // The chamber point lies strictly inside every wall.
    CHECK(((f.cartan * f.chamber_point).array() > 0).all());
  }
  // The symmetric point preserves the Cartan form.
  const auto f1 = triangle_reflection_family(3, 3, 4, 1);
  for (const auto& g : f1.reflections) CHECK((g.matrix.transpose() * f1.cartan * g.matrix - f1.cartan).norm() < 1e-12);
  CHECK(f1.cartan.determinant() < 0);

  const auto classes1 = enumerate_conjugacy_classes(f1.rotations, 8, f1.rotation_presentation);
  int biprox = 0;
  for (const auto& g : classes1)
    if (is_biproximal(g)) {
      ++biprox;
      CHECK(std::abs(periodic_lyapunov(g)[0].eta) < 1e-8);
    }
  CHECK(biprox >= 20);
  const auto f2 = triangle_reflection_family(3, 3, 4, 2);
  double worst = 0;
  for (const auto& g : enumerate_conjugacy_classes(f2.rotations, 8, f2.rotation_presentation))
    if (is_biproximal(g)) worst = std::max(worst, std::abs(periodic_lyapunov(g)[0].eta));
  CHECK(worst > 1e-3);

  CHECK_THROWS_AS(triangle_reflection_family(2, 3, 6, 1), Error);
  CHECK_THROWS_AS(triangle_reflection_family(3, 3, 4, 0), Error);
}

TEST_CASE("fuchsian triangle rotations") {
  for (auto [p, q, r] : {std::tuple{2, 3, 7}, std::tuple{3, 3, 4}, std::tuple{4, 4, 4}}) {
    const auto R = fuchsian_triangle_rotations(p, q, r);
    CHECK(R[0].determinant() == doctest::Approx(1));
    CHECK(R[1].determinant() == doctest::Approx(1));
    CHECK(near_plus_minus_identity(power(R[0], p), 1e-9));
    CHECK(near_plus_minus_identity(power(R[1], q), 1e-9));
    CHECK(near_plus_minus_identity(power(R[0] * R[1], r), 1e-9));
  }
}

TEST_CASE("coxeter conjugacy keys") {
  const std::vector<std::vector<int>> m = {{1, 3, 4}, {3, 1, 3}, {4, 3, 1}};
  CHECK(coxeter_conjugacy_key({0, 1, 0, 1, 0, 1}, m).empty());
  CHECK(coxeter_conjugacy_key({0, 0}, m).empty());
  CHECK(coxeter_conjugacy_key({2, 1}, m) == coxeter_conjugacy_key({1, 2}, m));
  // Conjugation by a letter or a braid leaves the key unchanged.
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> L(0, 2);
  const auto f = triangle_reflection_family(3, 3, 4, 2);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> w;
    for (int k = 0; k < 9; ++k) w.push_back(L(rng));
    const auto key = coxeter_conjugacy_key(w, m);
    const int x = L(rng);
    std::vector<int> c{x};
    c.insert(c.end(), w.begin(), w.end());
    c.push_back(x);
    CHECK(coxeter_conjugacy_key(c, m) == key);
    // The key is a word for a conjugate: same spectrum.
    auto prod = [&](const std::vector<int>& word) {
      Mat M = Mat::Identity(3, 3);
      for (int l : word) M = M * f.reflections[l].matrix;
      return M;
    };
    CHECK(prod(key).trace() == doctest::Approx(prod(w).trace()).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("conjugacy class enumeration") {
  std::mt19937_64 rng(1);
  const std::vector<GroupElement> free2{GroupElement(random_matrix(rng)), GroupElement(random_matrix(rng))};
  const auto c2 = enumerate_conjugacy_classes(free2, 2);
  CHECK(c2.size() == 12);
  int len1 = 0;
  for (const auto& g : c2) len1 += g.word.size() == 1;
  CHECK(len1 == 4);
  for (int L : {3, 4, 5}) CHECK(static_cast<int>(enumerate_conjugacy_classes(free2, L).size()) == brute_force_free_classes(2, L));
  CHECK(enumerate_conjugacy_classes(free2, 0).empty());
  CHECK_THROWS_AS(enumerate_conjugacy_classes(free2, 17), Error);
  const std::vector<GroupElement> free6(6, free2[0]);
  CHECK_THROWS_AS(enumerate_conjugacy_classes(free6, 16), Error);

  // Representatives multiply out their words.
  for (const auto& g : enumerate_conjugacy_classes(free2, 3)) {
    Mat M = Mat::Identity(3, 3);
    for (int l : g.word) M = M * (l > 0 ? free2[l - 1].matrix : free2[-l - 1].matrix.inverse());
    CHECK((GroupElement(M).matrix - g.matrix).norm() < 1e-9);
  }

  const auto f = triangle_reflection_family(3, 3, 4, 2);
  const auto refl = enumerate_conjugacy_classes(f.reflections, 6, f.reflection_presentation);
  std::set<std::vector<int>> words;
  for (const auto& g : refl) words.insert(g.word);
  CHECK(words.size() == refl.size());
  for (const auto& g : refl) {
    const auto e = std::abs(g.matrix.determinant());
    CHECK(e == doctest::Approx(1));
  }
}

TEST_CASE("limit set hulls") {
  const auto R = fuchsian_triangle_rotations(3, 3, 4);
  const std::vector<GroupElement> gens{so21_embed(R[0](0, 0), R[0](0, 1), R[0](1, 0), R[0](1, 1)),
                                       so21_embed(R[1](0, 0), R[1](0, 1), R[1](1, 0), R[1](1, 1))};
  const auto disk = generate_domain_hull(gens, 8, Vec::Unit(3, 2));
  const Homography back = disk.chart.inverse();
  std::vector<double> angles;
  for (const auto& v : disk.domain.vertices()) {
    const Vec x = back.apply_affine(v);
    CHECK(x.norm() == doctest::Approx(1).epsilon(1e-8));
    angles.push_back(std::atan2(x(1), x(0)));
  }
  std::sort(angles.begin(), angles.end());
  double gap = 2 * std::numbers::pi - (angles.back() - angles.front());
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  // Sagitta of the widest hull edge inside the unit circle.
  CHECK(1 - std::cos(gap / 2) < 0.05);
  CHECK(disk.conic_residual < 1e-8);

  const auto f1 = triangle_reflection_family(3, 3, 4, 1);
  const auto h1 = generate_domain_hull(f1.rotations, 6, f1.chamber_point, f1.rotation_presentation);
  CHECK(h1.conic_residual < 1e-8);
  CHECK(h1.hausdorff_gap < 0.05);
  const auto f2 = triangle_reflection_family(3, 3, 4, 2);
  const auto h2 = generate_domain_hull(f2.rotations, 6, f2.chamber_point, f2.rotation_presentation);
  CHECK(h2.conic_residual > 1e-6);
  CHECK(h2.hausdorff_gap < 0.05);
  CHECK(h2.domain.strictly_convex());
}
