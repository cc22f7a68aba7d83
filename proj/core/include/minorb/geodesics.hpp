#pragma once

#include <utility>
#include <vector>

#include "minorb/dense_operator.hpp"
#include "minorb/diagonal_seq.hpp"
#include "minorb/families.hpp"
#include "minorb/minimality.hpp"

namespace minorb {

/// Tangent vector x = [Y, b] at a diagonal base point, together with the
/// zero-diagonal anti-Hermitian lifting Y. The tangent itself is Hermitian
/// (the orbit consists of Hermitian operators). Any two liftings differ by
/// a diagonal, so the zero-diagonal one is the canonical representative.
struct TangentVector {
  OrbitBasePoint base;
  DenseOperator value;    // Hermitian, zero diagonal
  DenseOperator lifting;  // anti-Hermitian, [lifting, b] = value
};

/// Solves [Y, b] = x entrywise: Y_ij = x_ij / (lambda_j - lambda_i) off the
/// diagonal, Y_ii = 0. Requires x anti-Hermitian with zero diagonal and a
/// base point with eigenvalue separation at least sep_min.
TangentVector lift_tangent(const DenseOperator& x, const OrbitBasePoint& b,
                           const Tolerances& tol = Tolerances{});

/// Finsler norm of the tangent vector: quotient distance of the lifting to
/// the anti-Hermitian diagonals. A candidate diagonal, when supplied, is
/// tried through the minimality certificate before falling back to the
/// oracle.
double finsler_norm(const TangentVector& x,
                    const std::optional<RealVector>& candidate_diagonal =
                        std::nullopt,
                    const OracleOptions& opts = {},
                    const Tolerances& tol = Tolerances{});

/// Isospectral curve t -> e^{tZ} b e^{-tZ} sampled on Chebyshev-Lobatto
/// points of [t_min, t_max] (endpoints included) plus t = 0 when interior.
struct OrbitCurve {
  OrbitBasePoint base;
  DenseOperator generator;
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<std::pair<double, DenseOperator>> samples;
};

OrbitCurve orbit_curve(const DenseOperator& z, const OrbitBasePoint& b,
                       double t_min, double t_max, int n_samples = 65);

/// Velocity sigma'(t) = [Z, sigma(t)], computed analytically.
DenseOperator curve_velocity(const DenseOperator& z, const OrbitBasePoint& b,
                             double t);

/// Finsler speed at parameter t: the velocity is conjugated back to the
/// diagonal base point, lifted there, and measured by the quotient norm.
double curve_speed(const DenseOperator& z, const OrbitBasePoint& b, double t,
                   const std::optional<RealVector>& candidate_diagonal =
                       std::nullopt,
                   const OracleOptions& opts = {},
                   const Tolerances& tol = Tolerances{});

/// Max over samples of
/// ||e^{t(Z + i s I)} b e^{-t(Z + i s I)} - e^{tZ} b e^{-tZ}||;
/// scalar shifts act trivially on the orbit so this must sit at round-off.
/// shift is the imaginary part s of the scalar.
double phase_equivalence_check(const DenseOperator& z, double shift,
                               const OrbitBasePoint& b, double t_min,
                               double t_max, int n_samples = 17);

/// Curve length by composite Gauss-Legendre quadrature of the Finsler
/// speed: `panels` equal subintervals, `order` nodes each.
double curve_length(const OrbitCurve& c, int order = 16, int panels = 4,
                    const std::optional<RealVector>& candidate_diagonal =
                        std::nullopt,
                    const OracleOptions& opts = {},
                    const Tolerances& tol = Tolerances{});

/// Pointwise speeds at the curve's sample parameters.
std::vector<std::pair<double, double>> constant_speed_profile(
    const OrbitCurve& c,
    const std::optional<RealVector>& candidate_diagonal = std::nullopt,
    const OracleOptions& opts = {}, const Tolerances& tol = Tolerances{});

/// Scalar shift that turns a single-limit diagonal into a compact proxy:
/// given Z and D1 with (D1)_jj -> lambda != 0, returns Z + i Diag(D1)
/// - i lambda I together with lambda. Oscillant or zero-limit tails are
/// rejected: the construction needs one nonzero limit.
struct ScalarShiftResult {
  DenseOperator shifted;
  double lambda = 0.0;       // imaginary part of the absorbed scalar
  double shifted_norm = 0.0; // ||Z + i Diag(D1) - i lambda I||
  double base_norm = 0.0;    // ||Z||
  bool diagonal_compact = false;  // shifted diagonal classified compact_proxy
};

ScalarShiftResult scalar_shift_to_compact(const DenseOperator& z,
                                          const DiagonalSeq& d1,
                                          const Tolerances& tol = Tolerances{});

}  // namespace minorb
