#include "minorb/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "minorb/linalg.hpp"

namespace minorb {

namespace {

DenseOperator hermitian_clean(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint().eval());
  return DenseOperator(std::move(h), Structure::hermitian);
}

DenseOperator anti_hermitian_clean(const Matrix& m) {
  Matrix a = 0.5 * (m - m.adjoint().eval());
  return DenseOperator(std::move(a), Structure::anti_hermitian);
}

DenseOperator conjugated_base(const DenseOperator& u, const OrbitBasePoint& b) {
  Matrix s = u.entries() * b.as_operator().entries() * u.entries().adjoint();
  return hermitian_clean(s);
}

std::vector<double> chebyshev_lobatto(double t_min, double t_max, int m) {
  const double mid = 0.5 * (t_min + t_max);
  const double half = 0.5 * (t_max - t_min);
  std::vector<double> ts;
  ts.reserve(m + 1);
  for (int k = 0; k < m; ++k)
    ts.push_back(mid + half * std::cos(std::numbers::pi * k / (m - 1)));
  ts.front() = t_max;
  ts.back() = t_min;
  if (t_min < 0.0 && 0.0 < t_max) ts.push_back(0.0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

TangentVector lift_tangent(const DenseOperator& x, const OrbitBasePoint& b,
                           const Tolerances& tol) {
  if (!x.is_hermitian_flagged())
    throw StructureError(
        "tangent vector must be Hermitian ([Y, b] with Y anti-Hermitian and "
        "b Hermitian is Hermitian)");
  if (x.dim() != b.dim())
    throw ParameterError("tangent/base dimension mismatch");
  const int n = x.dim();
  for (int i = 0; i < n; ++i)
    if (std::abs(x.entries()(i, i)) > tol.tol_alg)
      throw StructureError("tangent vector must have zero diagonal");
  if (b.sep_min <= 0.0)
    throw ParameterError("base point eigenvalues must be separated");

  Matrix y = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      y(i, j) = x.entries()(i, j) / (b.lambdas(j) - b.lambdas(i));
    }
  TangentVector out{b, hermitian_clean(x.entries()),
                    anti_hermitian_clean(y)};
  return out;
}

double finsler_norm(const TangentVector& x,
                    const std::optional<RealVector>& candidate_diagonal,
                    const OracleOptions& opts, const Tolerances& tol) {
  return quotient_norm(x.lifting, candidate_diagonal, opts, tol).value;
}

OrbitCurve orbit_curve(const DenseOperator& z, const OrbitBasePoint& b,
                       double t_min, double t_max, int n_samples) {
  if (!z.is_anti_hermitian_flagged())
    throw StructureError("curve generator must be anti-Hermitian");
  if (z.dim() != b.dim()) throw ParameterError("generator/base size mismatch");
  if (!(t_min < t_max)) throw ParameterError("empty parameter interval");
  if (n_samples < 3) throw ParameterError("need at least 3 samples");

  OrbitCurve c{b, z, t_min, t_max, {}};
  for (double t : chebyshev_lobatto(t_min, t_max, n_samples)) {
    if (t == 0.0) {
      c.samples.emplace_back(0.0, b.as_operator());
      continue;
    }
    DenseOperator u = expm_antihermitian(z, t);
    c.samples.emplace_back(t, conjugated_base(u, b));
  }
  return c;
}

DenseOperator curve_velocity(const DenseOperator& z, const OrbitBasePoint& b,
                             double t) {
  DenseOperator sigma_t =
      t == 0.0 ? b.as_operator()
               : conjugated_base(expm_antihermitian(z, t), b);
  return commutator(z, sigma_t);
}

double curve_speed(const DenseOperator& z, const OrbitBasePoint& b, double t,
                   const std::optional<RealVector>& candidate_diagonal,
                   const OracleOptions& opts, const Tolerances& tol) {
  // sigma'(t) = [Z, sigma(t)]; conjugating by U(t)^* carries it back to the
  // diagonal base point where the quotient norm is evaluated.
  DenseOperator x = curve_velocity(z, b, t);
  if (t != 0.0) {
    DenseOperator u = expm_antihermitian(z, t);
    x = hermitian_clean(u.entries().adjoint() * x.entries() * u.entries());
  }
  TangentVector tv = lift_tangent(x, b, tol);
  return finsler_norm(tv, candidate_diagonal, opts, tol);
}

double phase_equivalence_check(const DenseOperator& z, double shift,
                               const OrbitBasePoint& b, double t_min,
                               double t_max, int n_samples) {
  if (!z.is_anti_hermitian_flagged())
    throw StructureError("generator must be anti-Hermitian");
  Matrix zs = z.entries();
  for (int i = 0; i < z.dim(); ++i) zs(i, i) += Complex{0.0, shift};
  DenseOperator shifted(std::move(zs), Structure::anti_hermitian);
  double worst = 0.0;
  for (double t : chebyshev_lobatto(t_min, t_max, n_samples)) {
    DenseOperator a = conjugated_base(expm_antihermitian(z, t), b);
    DenseOperator c = conjugated_base(expm_antihermitian(shifted, t), b);
    worst = std::max(worst, operator_norm(a.entries() - c.entries()));
  }
  return worst;
}

double curve_length(const OrbitCurve& c, int order, int panels,
                    const std::optional<RealVector>& candidate_diagonal,
                    const OracleOptions& opts, const Tolerances& tol) {
  if (order < 2 || panels < 1) throw ParameterError("bad quadrature setup");
  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);
  const double width = (c.t_max - c.t_min) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = c.t_min + p * width;
    const double mid = a + 0.5 * width;
    for (int i = 0; i < order; ++i) {
      const double t = mid + 0.5 * width * nodes[i];
      total += 0.5 * width * weights[i] *
               curve_speed(c.generator, c.base, t, candidate_diagonal, opts,
                           tol);
    }
  }
  return total;
}

std::vector<std::pair<double, double>> constant_speed_profile(
    const OrbitCurve& c, const std::optional<RealVector>& candidate_diagonal,
    const OracleOptions& opts, const Tolerances& tol) {
  std::vector<std::pair<double, double>> profile;
  profile.reserve(c.samples.size());
  for (const auto& [t, unused] : c.samples)
    profile.emplace_back(
        t, curve_speed(c.generator, c.base, t, candidate_diagonal, opts, tol));
  return profile;
}

ScalarShiftResult scalar_shift_to_compact(const DenseOperator& z,
                                          const DiagonalSeq& d1,
                                          const Tolerances& tol) {
  if (!z.is_anti_hermitian_flagged())
    throw StructureError("scalar shift requires an anti-Hermitian operator");
  if (d1.dim() != z.dim())
    throw ParameterError("diagonal dimension mismatch");
  TailClassification cls = classify_diagonal_tail(d1);
  if (cls.kind == TailClassification::Kind::oscillant)
    throw ParameterError(
        "diagonal has two subsequential limits; no scalar shift exists");
  if (cls.kind != TailClassification::Kind::single_limit)
    throw ParameterError(
        "diagonal tail has no nonzero limit; no scalar shift exists");

  ScalarShiftResult out{DenseOperator::zero(z.dim()), cls.limit, 0.0,
                        operator_norm(z), false};
  Matrix m = z.entries();
  for (int i = 0; i < z.dim(); ++i)
    m(i, i) += Complex{0.0, d1.values(i) - cls.limit};
  out.shifted = DenseOperator(std::move(m), Structure::anti_hermitian);
  out.shifted_norm = operator_norm(out.shifted);

  DiagonalSeq shifted_diag{RealVector(d1.values.array() - cls.limit),
                           TailDescriptor::single(0.0, d1.tail.bound_c,
                                                  d1.tail.bound_q)};
  out.diagonal_compact =
      classify_diagonal_tail(shifted_diag).kind ==
      TailClassification::Kind::compact_proxy;
  (void)tol;
  return out;
}

}  // namespace minorb
