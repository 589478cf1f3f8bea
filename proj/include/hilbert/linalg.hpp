#pragma once

#include <Eigen/Dense>

namespace hilbert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Vector with entries {x..., 1}.
inline Vec lift(const Vec& x) {
  Vec X(x.size() + 1);
  X.head(x.size()) = x;
  X(x.size()) = 1.0;
  return X;
}

inline Vec lift_direction(const Vec& v) {
  Vec V = Vec::Zero(v.size() + 1);
  V.head(v.size()) = v;
  return V;
}

// Orthonormal basis of the null space of the rows of A (columns of result).
Mat null_space(const Mat& A, double rel_tol = 1e-12);

}  // namespace hilbert
