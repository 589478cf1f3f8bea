#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hilbert/domain.hpp"
#include "hilbert/projective.hpp"

namespace hilbert {

// Letters are +(i+1) for generator i and -(i+1) for its inverse.
using Word = std::vector<int>;

struct GroupElement {
  Mat matrix;  // |det| = 1
  Word word;

  GroupElement() = default;
  explicit GroupElement(const Mat& m, Word w = {});
  int size() const { return static_cast<int>(matrix.rows()); }
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& o) const;
  Homography homography() const { return Homography(matrix); }
};

struct EigenData {
  std::vector<double> moduli;  // descending
  ProjectivePoint top_vector{Vec::Unit(3, 0)};
  ProjectivePoint bottom_vector{Vec::Unit(3, 0)};
  // Left eigenvectors for the extreme moduli.
  Vec top_covector;
  Vec bottom_covector;
};

EigenData eigen_data(const GroupElement& g);
bool is_biproximal(const GroupElement& g);
double translation_length(const GroupElement& g);

struct PeriodicExponent {
  double eta = 0;
  double chi_plus = 1;
  double chi_minus = -1;
};

// One entry per cluster of intermediate moduli, ordered from the top.
std::vector<PeriodicExponent> periodic_lyapunov(const GroupElement& g);

// Symmetric square of an SL(2,R) matrix, acting on the Klein disk x^2 + y^2 < 1.
GroupElement so21_embed(double a, double b, double c, double d);

// Coxeter relations (s_i s_j)^{m_ij} = 1 on involutive letters 0..k-1, and the expansion
// of each enumeration generator as a word in those letters.
struct CoxeterPresentation {
  std::vector<std::vector<int>> m;
  std::vector<std::vector<int>> expansion;
};

struct TriangleFamily {
  int p = 0, q = 0, r = 0;
  double s = 1;
  Mat cartan;
  std::vector<GroupElement> reflections;
  // Orientation-preserving subgroup generated by s1 s2 and s2 s3.
  std::vector<GroupElement> rotations;
  CoxeterPresentation reflection_presentation;
  CoxeterPresentation rotation_presentation;
  // Point of the open fundamental chamber.
  Vec chamber_point;
  std::string description() const;
};

TriangleFamily triangle_reflection_family(int p, int q, int r, double s);

// Relations of <a, b | a^p, b^q, (ab)^r> through a = s1 s2, b = s2 s3.
CoxeterPresentation triangle_rotation_presentation(int p, int q, int r);

// Rotations by 2pi/p and 2pi/q about two vertices of a (p,q,r) hyperbolic triangle, in SL(2,R).
std::vector<Mat> fuchsian_triangle_rotations(int p, int q, int r);

// Canonical cyclic form of a Coxeter word under cyclic shifts, braid moves and cancellation.
// Empty when the word is trivial.
std::vector<int> coxeter_conjugacy_key(std::vector<int> word, const std::vector<std::vector<int>>& m);

std::vector<GroupElement> enumerate_conjugacy_classes(const std::vector<GroupElement>& generators, int max_len,
                                                      const std::optional<CoxeterPresentation>& presentation = {});

struct HullResult {
  ConvexDomain domain;
  // Standard homogeneous coordinates to the hull's chart.
  Homography chart;
  int points = 0;
  double hausdorff_gap = 0;  // generator images of hull vertices vs hull, chart units
  double conic_residual = 0;
  GroupElement to_chart(const GroupElement& g) const;
};

// Convex hull of attracting fixed points; `interior_hint` orients them into one cone.
HullResult generate_domain_hull(const std::vector<GroupElement>& generators, int max_len, const Vec& interior_hint,
                                const std::optional<CoxeterPresentation>& presentation = {});

// Normalized algebraic residual of the best conic through planar points.
double conic_fit_residual(const std::vector<Vec>& points);

}  // namespace hilbert
