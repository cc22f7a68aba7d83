#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace minorb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared across the toolkit.
///
/// tol_alg governs algebraic identities in double precision, tol_min the
/// residuals of minimality certificates, tol_oracle the agreement of the
/// convex oracle, tol_quad the quadrature of curve lengths.
struct Tolerances {
  double tol_alg = 1e-10;
  double tol_min = 1e-9;
  double tol_oracle = 1e-6;
  double tol_quad = 1e-8;
};

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Structure { general, hermitian, anti_hermitian, diagonal, unitary };

std::string to_string(Structure s);
Structure structure_from_string(const std::string& s);

/// Finite N x N complex matrix standing for a truncated bounded operator.
///
/// The structure flag is a stored promise: hermitian and anti_hermitian
/// matrices satisfy their symmetry exactly as stored (enforced on
/// construction), unitary ones satisfy ||M M^* - I|| <= tol_alg.
class DenseOperator {
 public:
  DenseOperator(Matrix entries, Structure flag,
                const Tolerances& tol = Tolerances{});

  static DenseOperator identity(int dim);
  static DenseOperator zero(int dim);
  /// Builds i * S from a real symmetric S; the result is anti-Hermitian
  /// exactly as stored.
  static DenseOperator anti_hermitian_from_real_symmetric(const RealMatrix& s);
  static DenseOperator diagonal_imaginary(const RealVector& values);
  static DenseOperator diagonal_real(const RealVector& values);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Structure structure() const { return flag_; }

  bool is_hermitian_flagged() const { return flag_ == Structure::hermitian; }
  bool is_anti_hermitian_flagged() const {
    return flag_ == Structure::anti_hermitian;
  }

  /// Real symmetric matrix S with *this == i * S. Requires the operator to be
  /// anti-Hermitian with purely imaginary entries; the check is exact on the
  /// stored real parts up to tol.
  RealMatrix imaginary_part_symmetric(double tol = 0.0) const;

  DenseOperator adjoint() const;

 private:
  Matrix entries_;
  Structure flag_;
};

/// Hermitian spectral data, eigenvalues ascending, eigenvector phases fixed
/// deterministically (first nonzero component real positive).
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

}  // namespace minorb
