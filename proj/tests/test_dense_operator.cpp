#include <doctest.h>

#include <limits>

#include "minorb/dense_operator.hpp"

using namespace minorb;

TEST_CASE("factories produce exact structure flags") {
  DenseOperator id = DenseOperator::identity(3);
  CHECK(id.structure() == Structure::diagonal);
  CHECK(id.entries()(0, 0) == Complex{1.0, 0.0});

  RealMatrix s(2, 2);
  s << 0.0, 0.3, 0.3, 0.0;
  DenseOperator a = DenseOperator::anti_hermitian_from_real_symmetric(s);
  CHECK(a.is_anti_hermitian_flagged());
  CHECK(a.entries()(0, 1) == Complex{0.0, 0.3});
  CHECK(a.entries()(1, 0) == Complex{0.0, 0.3});

  RealVector v(2);
  v << 1.0, -2.0;
  CHECK(DenseOperator::diagonal_imaginary(v).entries()(1, 1) ==
        Complex{0.0, -2.0});
  CHECK(DenseOperator::diagonal_real(v).structure() == Structure::diagonal);
}

TEST_CASE("stored symmetry is enforced on construction") {
  Matrix m(2, 2);
  m << Complex{0.0, 0.0}, Complex{0.0, 1.0},
       Complex{0.0, 1.0 + 1e-13}, Complex{0.0, 0.0};
  CHECK_THROWS_AS(DenseOperator(m, Structure::anti_hermitian),
                  StructureError);
  m(1, 0) = Complex{0.0, 1.0};
  CHECK_NOTHROW(DenseOperator(m, Structure::anti_hermitian));

  Matrix h(2, 2);
  h << Complex{1.0, 0.0}, Complex{0.5, 0.25},
       Complex{0.5, -0.25}, Complex{2.0, 0.0};
  CHECK_NOTHROW(DenseOperator(h, Structure::hermitian));
  h(0, 0) = Complex{1.0, 1e-14};
  CHECK_THROWS_AS(DenseOperator(h, Structure::hermitian), StructureError);
}

TEST_CASE("unitary flag checked within tolerance") {
  Matrix u(2, 2);
  u << Complex{0.0, 1.0}, Complex{0.0, 0.0},
       Complex{0.0, 0.0}, Complex{1.0, 0.0};
  CHECK_NOTHROW(DenseOperator(u, Structure::unitary));
  u(0, 0) = Complex{0.0, 1.1};
  CHECK_THROWS_AS(DenseOperator(u, Structure::unitary), StructureError);
}

TEST_CASE("non-finite entries rejected") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS(DenseOperator(m, Structure::general));
}

TEST_CASE("imaginary_part_symmetric round-trips the real representation") {
  RealMatrix s(3, 3);
  s << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  DenseOperator a = DenseOperator::anti_hermitian_from_real_symmetric(s);
  RealMatrix back = a.imaginary_part_symmetric();
  CHECK((back - s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjoint negates an anti-Hermitian operator") {
  RealMatrix s(2, 2);
  s << 0.0, 0.7, 0.7, 0.1;
  DenseOperator a = DenseOperator::anti_hermitian_from_real_symmetric(s);
  Matrix sum = a.entries() + a.adjoint().entries();
  CHECK(sum.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("structure names round-trip") {
  for (Structure s : {Structure::general, Structure::hermitian,
                      Structure::anti_hermitian, Structure::diagonal,
                      Structure::unitary})
    CHECK(structure_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(structure_from_string("bogus"), ParameterError);
}
