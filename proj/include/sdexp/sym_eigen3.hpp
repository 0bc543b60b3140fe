#pragma once

#include "sdexp/geometry.hpp"

namespace sdexp {

struct SymEigen3 {
  Vec3 values;   // descending
  Mat3 vectors;  // column i pairs with values[i]; orthonormal, canonical_sign applied
};

/// Eigen-decomposition of a symmetric 3x3 matrix. Uses the trigonometric
/// solution of the characteristic cubic; falls back to cyclic Jacobi sweeps
/// when two eigenvalues are closer than 1e-6 relative to the spectral radius.
SymEigen3 sym_eigen3(const Mat3& a);

/// Cyclic Jacobi rotations only; exposed for tests.
SymEigen3 sym_eigen3_jacobi(const Mat3& a);

/// Flips v so that its largest-magnitude component is positive (first such
/// component on ties).
Vec3 canonical_sign(const Vec3& v);

}  // namespace sdexp
