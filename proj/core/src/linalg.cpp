#include "minorb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace minorb {

double operator_norm(const Matrix& m) {
  if (!m.allFinite()) throw StructureError("non-finite entries");
  if (m.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const DenseOperator& m) {
  if (m.is_hermitian_flagged() || m.is_anti_hermitian_flagged() ||
      m.structure() == Structure::diagonal) {
    const Matrix h = m.is_anti_hermitian_flagged()
                         ? Matrix(Complex{0.0, -1.0} * m.entries())
                         : m.entries();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h,
                                             Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  return operator_norm(m.entries());
}

Spectrum hermitian_eig_matrix(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  // Deterministic phase fixing: rotate each eigenvector so its largest-
  // magnitude component is real positive.
  const int n = static_cast<int>(hermitian.rows());
  for (int k = 0; k < n; ++k) {
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = std::abs(s.eigenvectors(i, k));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) {
      Complex phase = s.eigenvectors(imax, k) / best;
      s.eigenvectors.col(k) /= phase;
    }
  }
  return s;
}

Spectrum hermitian_eig(const DenseOperator& m) {
  if (m.is_hermitian_flagged() || m.structure() == Structure::diagonal) {
    Matrix h = m.entries();
    for (int i = 0; i < m.dim(); ++i) {
      if (std::abs(h(i, i).imag()) != 0.0 &&
          m.structure() == Structure::diagonal)
        throw StructureError("diagonal operator with non-real diagonal is "
                             "not Hermitian");
    }
    return hermitian_eig_matrix(h);
  }
  if (m.is_anti_hermitian_flagged()) {
    return hermitian_eig_matrix(Complex{0.0, -1.0} * m.entries());
  }
  throw StructureError("hermitian_eig requires a (anti-)Hermitian operator");
}

DenseOperator expm_antihermitian(const DenseOperator& z, double t) {
  if (!z.is_anti_hermitian_flagged())
    throw StructureError("expm_antihermitian requires an anti-Hermitian "
                         "generator");
  // Z = i H with H Hermitian; exp(tZ) = V diag(e^{i t theta}) V^*.
  Spectrum s = hermitian_eig_matrix(Complex{0.0, -1.0} * z.entries());
  const int n = z.dim();
  Matrix phases = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    phases(k, k) = std::exp(Complex{0.0, t * s.eigenvalues(k)});
  Matrix u = s.eigenvectors * phases * s.eigenvectors.adjoint();
  return DenseOperator(std::move(u), Structure::unitary);
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim())
    throw StructureError("commutator: dimension mismatch");
  Matrix c = a.entries() * b.entries() - b.entries() * a.entries();
  Structure flag = Structure::general;
  if (a.is_anti_hermitian_flagged() &&
      (b.is_hermitian_flagged() || b.structure() == Structure::diagonal)) {
    // [anti-Hermitian, Hermitian] is Hermitian; symmetrize away the
    // last-bit round-off so the flag invariant holds exactly.
    Matrix h = 0.5 * (c + c.adjoint());
    return DenseOperator(std::move(h), Structure::hermitian);
  }
  return DenseOperator(std::move(c), flag);
}

double column_norm(const Matrix& m, int j) {
  if (j < 1 || j > m.cols())
    throw ParameterError("column index out of range: " + std::to_string(j));
  return m.col(j - 1).norm();
}

double column_norm(const DenseOperator& m, int j) {
  return column_norm(m.entries(), j);
}

}  // namespace minorb
