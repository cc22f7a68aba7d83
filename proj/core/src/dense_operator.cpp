#include "minorb/dense_operator.hpp"

namespace minorb {

std::string to_string(Structure s) {
  switch (s) {
    case Structure::general: return "general";
    case Structure::hermitian: return "hermitian";
    case Structure::anti_hermitian: return "anti_hermitian";
    case Structure::diagonal: return "diagonal";
    case Structure::unitary: return "unitary";
  }
  return "general";
}

Structure structure_from_string(const std::string& s) {
  if (s == "general") return Structure::general;
  if (s == "hermitian") return Structure::hermitian;
  if (s == "anti_hermitian") return Structure::anti_hermitian;
  if (s == "diagonal") return Structure::diagonal;
  if (s == "unitary") return Structure::unitary;
  throw ParameterError("unknown structure flag: " + s);
}

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) {
    throw StructureError("operator has non-finite entries");
  }
}

}  // namespace

DenseOperator::DenseOperator(Matrix entries, Structure flag,
                             const Tolerances& tol)
    : entries_(std::move(entries)), flag_(flag) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw StructureError("operator must be square and nonempty");
  }
  check_finite(entries_);
  const int n = dim();
  switch (flag_) {
    case Structure::hermitian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          if (entries_(i, j) != std::conj(entries_(j, i)))
            throw StructureError("hermitian flag violated at entry (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
      break;
    case Structure::anti_hermitian:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          if (entries_(i, j) != -std::conj(entries_(j, i)))
            throw StructureError("anti_hermitian flag violated at entry (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
      break;
    case Structure::diagonal:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && entries_(i, j) != Complex{0.0, 0.0})
            throw StructureError("diagonal flag violated");
      break;
    case Structure::unitary: {
      double err = (entries_ * entries_.adjoint() -
                    Matrix::Identity(n, n)).operatorNorm();
      if (err > tol.tol_alg)
        throw StructureError("unitary flag violated: ||MM*-I|| = " +
                             std::to_string(err));
      break;
    }
    case Structure::general:
      break;
  }
}

DenseOperator DenseOperator::identity(int dim) {
  return DenseOperator(Matrix::Identity(dim, dim), Structure::diagonal);
}

DenseOperator DenseOperator::zero(int dim) {
  return DenseOperator(Matrix::Zero(dim, dim), Structure::diagonal);
}

DenseOperator DenseOperator::anti_hermitian_from_real_symmetric(
    const RealMatrix& s) {
  if (s.rows() != s.cols()) throw StructureError("matrix must be square");
  const int n = static_cast<int>(s.rows());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = Complex{0.0, s(i, i)};
    for (int j = i + 1; j < n; ++j) {
      // Mirror one triangle so the stored matrix is exactly anti-Hermitian
      // even if s carries round-off asymmetry.
      m(i, j) = Complex{0.0, s(i, j)};
      m(j, i) = Complex{0.0, s(i, j)};
    }
  }
  return DenseOperator(std::move(m), Structure::anti_hermitian);
}

DenseOperator DenseOperator::diagonal_imaginary(const RealVector& values) {
  const int n = static_cast<int>(values.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Complex{0.0, values(i)};
  return DenseOperator(std::move(m), Structure::anti_hermitian);
}

DenseOperator DenseOperator::diagonal_real(const RealVector& values) {
  const int n = static_cast<int>(values.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Complex{values(i), 0.0};
  return DenseOperator(std::move(m), Structure::diagonal);
}

RealMatrix DenseOperator::imaginary_part_symmetric(double tol) const {
  const int n = dim();
  RealMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (std::abs(entries_(i, j).real()) > tol)
        throw StructureError(
            "operator is not of the form i * (real matrix): entry (" +
            std::to_string(i) + "," + std::to_string(j) +
            ") has real part " + std::to_string(entries_(i, j).real()));
      s(i, j) = entries_(i, j).imag();
    }
  return s;
}

DenseOperator DenseOperator::adjoint() const {
  return DenseOperator(entries_.adjoint(), flag_);
}

}  // namespace minorb
