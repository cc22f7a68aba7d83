#pragma once

#include "minorb/dense_operator.hpp"

namespace minorb {

/// Largest singular value. For Hermitian/anti-Hermitian inputs this equals
/// the largest eigenvalue magnitude.
double operator_norm(const DenseOperator& m);
double operator_norm(const Matrix& m);

/// Spectral decomposition of a Hermitian operator (anti-Hermitian inputs are
/// diagonalized through -i*M). Eigenvalues ascending; eigenvector phases
/// fixed by making the first component of largest magnitude real positive.
Spectrum hermitian_eig(const DenseOperator& m);
Spectrum hermitian_eig_matrix(const Matrix& hermitian);

/// exp(t*Z) for anti-Hermitian Z, computed spectrally so the result is
/// unitary up to round-off.
DenseOperator expm_antihermitian(const DenseOperator& z, double t);

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

/// Euclidean norm of column j (1-based, matching the operator families'
/// index conventions).
double column_norm(const DenseOperator& m, int j);
double column_norm(const Matrix& m, int j);

}  // namespace minorb
