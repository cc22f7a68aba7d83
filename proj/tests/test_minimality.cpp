#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "minorb/families.hpp"
#include "minorb/linalg.hpp"
#include "minorb/minimality.hpp"
#include "reference_oracle.hpp"

using namespace minorb;
using testref::reference_quotient_norm;

namespace {

RealMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = u(rng);
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

}  // namespace

TEST_CASE("certificate accepts the flagship operator") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 32;
  DenseOperator zr = build_Zr(p);
  MinimalityCertificate cert = check_theorem_minimality(zr, 1);
  CHECK(cert.verdict == Verdict::certified_minimal);
  CHECK(cert.cond_real);
  CHECK(cert.cond_pivot);
  CHECK(cert.cond_column_dominates);
  CHECK(cert.cond_orthogonal);
  CHECK(cert.certified_norm ==
        doctest::Approx(cert.operator_norm_value).epsilon(1e-9));
  CHECK(cert.column_margin > 0.0);
}

TEST_CASE("certificate rejects a nonzero pivot diagonal") {
  RealVector d(2);
  d << 1.0, 1.0;
  DenseOperator t = DenseOperator::diagonal_imaginary(d);
  MinimalityCertificate cert = check_theorem_minimality(t, 1);
  CHECK(cert.verdict == Verdict::conditions_fail);
  CHECK_FALSE(cert.cond_pivot);
  CHECK(cert.pivot_diag_residual == doctest::Approx(1.0));
}

TEST_CASE("certificate rejects a hollow member without its diagonal") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 16;
  // r L + Y1 alone misses the orthogonality conditions
  DenseOperator l = build_L(p);
  DenseOperator y1 = build_Y1(p);
  double r = compute_M0(p).r;
  Matrix m = r * l.entries() + y1.entries();
  DenseOperator t(std::move(m), Structure::anti_hermitian);
  MinimalityCertificate cert = check_theorem_minimality(t, 1);
  CHECK(cert.verdict == Verdict::conditions_fail);
  CHECK_FALSE(cert.cond_orthogonal);
}

TEST_CASE("certificate rejects an operator with a real off-diagonal part") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = Complex{1.0, 0.5};
  m(1, 0) = Complex{-1.0, 0.5};
  m(0, 2) = Complex{0.0, 0.3};
  m(2, 0) = Complex{0.0, 0.3};
  m(1, 2) = Complex{0.0, 0.2};
  m(2, 1) = Complex{0.0, 0.2};
  DenseOperator t(std::move(m), Structure::anti_hermitian);
  MinimalityCertificate cert = check_theorem_minimality(t, 1);
  CHECK_FALSE(cert.cond_real);
  CHECK(cert.realness_residual == doctest::Approx(1.0));
  CHECK(cert.verdict == Verdict::conditions_fail);
}

TEST_CASE("oracle agrees with the independent reference on random inputs") {
  std::mt19937_64 rng(derive_seed(7, "oracle_crosscheck"));
  for (int trial = 0; trial < 12; ++trial) {
    int n = (trial % 2 == 0) ? 3 : 4;
    RealMatrix s = random_symmetric(n, rng);
    for (int i = 0; i < n; ++i) s(i, i) = 0.0;
    DenseOperator y = DenseOperator::anti_hermitian_from_real_symmetric(s);
    QuotientNormResult prod = best_diagonal_oracle(y);
    double ref = reference_quotient_norm(y);
    CHECK(prod.value == doctest::Approx(ref).epsilon(5e-6));
    CHECK_FALSE(prod.marginal);
  }
}

TEST_CASE("oracle recovers the solved diagonal of a finite-range member") {
  FamilyParams p;
  p.gamma = 0.5;
  p.n = 4;
  p.N = 4;  // work on the active block directly
  auto [yn, dn] = build_Yn_Dn(p);
  Matrix hollow = yn.entries();
  for (int i = 0; i < 4; ++i) hollow(i, i) = Complex{0.0, 0.0};
  DenseOperator y(std::move(hollow), Structure::anti_hermitian);
  QuotientNormResult res = best_diagonal_oracle(y);
  double m0 = compute_M0(p).M0;
  CHECK(res.value == doctest::Approx(m0).epsilon(1e-6));
  for (int i = 0; i < 4; ++i)
    CHECK(res.minimizer_diagonal(i) == doctest::Approx(dn.values(i)).epsilon(1e-4));
}

TEST_CASE("quotient norm dispatch certifies when the candidate shift works") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 24;
  DenseOperator l = build_L(p);
  DenseOperator y1 = build_Y1(p);
  double r = compute_M0(p).r;
  Matrix m = r * l.entries() + y1.entries();
  DenseOperator hollow(std::move(m), Structure::anti_hermitian);
  DiagonalSeq d0 = build_D0(p);
  QuotientNormResult res = quotient_norm(hollow, d0.values);
  CHECK(res.certified);
  CHECK(res.value == doctest::Approx(compute_M0(p).M0).epsilon(1e-9));
}

TEST_CASE("quotient norm of an exactly embedded block matches the block") {
  FamilyParams p;
  p.gamma = 0.5;
  p.n = 4;
  p.N = 16;
  auto [yn, dn] = build_Yn_Dn(p);
  Matrix hollow = yn.entries();
  for (int i = 0; i < 16; ++i) hollow(i, i) = Complex{0.0, 0.0};
  DenseOperator y(std::move(hollow), Structure::anti_hermitian);
  QuotientNormResult res = quotient_norm(y, dn.values);
  CHECK(res.certified);
  CHECK(res.value == doctest::Approx(compute_M0(p).M0).epsilon(1e-8));
  for (int i = 4; i < 16; ++i) CHECK(res.minimizer_diagonal(i) == 0.0);
}

TEST_CASE("perturbation audit never improves a certified operator") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 16;
  DenseOperator zr = build_Zr(p);
  std::uint64_t seed = derive_seed(42, "perturbation_audit");
  double worst = perturbation_audit(zr, 500, 0.5, seed);
  CHECK(worst >= -1e-9);
  // bit-for-bit reproducible
  CHECK(perturbation_audit(zr, 500, 0.5, seed) == worst);
}

TEST_CASE("seed derivation is frozen and task-sensitive") {
  CHECK(derive_seed(42, "perturbation_audit") == 6197090004342639354ull);
  CHECK(derive_seed(42, "perturbation_audit") !=
        derive_seed(42, "oracle_crosscheck"));
  CHECK(derive_seed(42, "perturbation_audit") !=
        derive_seed(43, "perturbation_audit"));
}

TEST_CASE("diagonal tail classification") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 64;
  DiagonalSeq d0 = build_D0(p);
  TailClassification c = classify_diagonal_tail(d0);
  CHECK(c.kind == TailClassification::Kind::single_limit);
  CHECK(c.limit == doctest::Approx(-2.0).epsilon(1e-10));

  p.gamma = 0.6;
  p.delta = 0.36;
  DiagonalSeq dp = build_D0prime(p);
  TailClassification co = classify_diagonal_tail(dp);
  CHECK(co.kind == TailClassification::Kind::oscillant);
  CHECK(co.limit_even == doctest::Approx(0.625).epsilon(1e-8));
  CHECK(co.limit_odd == doctest::Approx(-0.9375).epsilon(1e-8));

  DiagonalSeq zero{RealVector::Zero(32), TailDescriptor::finite(0)};
  CHECK(classify_diagonal_tail(zero).kind ==
        TailClassification::Kind::compact_proxy);

  RealVector decay(32);
  for (int i = 0; i < 32; ++i) decay(i) = std::pow(0.5, i + 1);
  DiagonalSeq dd{decay, TailDescriptor::single(0.0, 1.0, 0.5)};
  CHECK(classify_diagonal_tail(dd).kind ==
        TailClassification::Kind::compact_proxy);
}
