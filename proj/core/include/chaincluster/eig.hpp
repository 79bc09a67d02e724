#pragma once

#include "chaincluster/linalg.hpp"

namespace chaincluster {

// Full symmetric eigendecomposition with a fixed ordering and sign
// convention so identical inputs give bit-identical results:
//   - eigenvalues sorted descending, vectors[ :, j] pairs with values[j]
//   - each vector's first component with |v_i| > 1e-12 is made positive
struct EigenResult {
  Vector values;
  Matrix vectors;
};

// Cyclic Jacobi rotations for n <= 512, Householder tridiagonalization plus
// implicit-shift QL above. Input must be symmetric within 1e-10 relative
// tolerance; convergence failure raises NumericalError.
EigenResult sym_eig(const Matrix& m);

// Raw second moment (1/T) * sum_t y_t y_t^T of the signal columns. No mean
// subtraction unless `center` is set. T = signals.cols() must be >= 1.
Matrix sample_covariance(const Matrix& signals, bool center = false);

}  // namespace chaincluster
