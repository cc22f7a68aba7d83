#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minorb/linalg.hpp"

using namespace minorb;

TEST_CASE("operator norm matches hand values") {
  RealVector v(3);
  v << 1.0, -3.0, 2.0;
  CHECK(operator_norm(DenseOperator::diagonal_real(v)) == doctest::Approx(3.0));

  RealMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  CHECK(operator_norm(DenseOperator::anti_hermitian_from_real_symmetric(s)) ==
        doctest::Approx(1.0));

  // general 2x2 with singular values 2 and 0
  Matrix m(2, 2);
  m << Complex{1, 0}, Complex{1, 0}, Complex{1, 0}, Complex{1, 0};
  CHECK(operator_norm(m) == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig sorts ascending with deterministic phases") {
  RealMatrix s(3, 3);
  s << 0, 1, 0, 1, 0, 2, 0, 2, 0;
  DenseOperator a = DenseOperator::anti_hermitian_from_real_symmetric(s);
  Spectrum sp1 = hermitian_eig(a);
  Spectrum sp2 = hermitian_eig(a);
  for (int k = 1; k < 3; ++k) CHECK(sp1.eigenvalues(k) >= sp1.eigenvalues(k - 1));
  CHECK((sp1.eigenvectors - sp2.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  // reconstruction of -iA
  Matrix h = sp1.eigenvectors * sp1.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
             sp1.eigenvectors.adjoint();
  CHECK((h - Complex{0.0, -1.0} * a.entries()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("expm of an anti-Hermitian generator is unitary and correct") {
  RealMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  DenseOperator z = DenseOperator::anti_hermitian_from_real_symmetric(s);
  const double t = 0.37;
  DenseOperator u = expm_antihermitian(z, t);
  CHECK(u.structure() == Structure::unitary);
  // exp(t*i*sigma_x) = cos(t) I + i sin(t) sigma_x
  CHECK(u.entries()(0, 0).real() == doctest::Approx(std::cos(t)));
  CHECK(u.entries()(0, 1).imag() == doctest::Approx(std::sin(t)));

  DenseOperator u2 = expm_antihermitian(z, 2.0 * std::numbers::pi);
  CHECK((u2.entries() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("commutator [anti-Hermitian, diagonal] is Hermitian") {
  RealMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  DenseOperator y = DenseOperator::anti_hermitian_from_real_symmetric(s);
  RealVector lam(2);
  lam << 1.0, 2.0;
  DenseOperator b = DenseOperator::diagonal_real(lam);
  DenseOperator c = commutator(y, b);
  CHECK(c.is_hermitian_flagged());
  CHECK(c.entries()(0, 1) == Complex{0.0, 1.0});
  CHECK(c.entries()(1, 0) == Complex{0.0, -1.0});
  CHECK(c.entries()(0, 0) == Complex{0.0, 0.0});
}

TEST_CASE("column norms are 1-based") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = Complex{3.0, 0.0};
  m(1, 0) = Complex{4.0, 0.0};
  CHECK(column_norm(m, 1) == doctest::Approx(5.0));
  CHECK(column_norm(m, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(column_norm(m, 0), ParameterError);
  CHECK_THROWS_AS(column_norm(m, 3), ParameterError);
}
