#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "minorb/dense_operator.hpp"
#include "minorb/diagonal_seq.hpp"

namespace minorb {

enum class Verdict { certified_minimal, conditions_fail, numerically_marginal };

std::string to_string(Verdict v);

/// Witness data for the four sufficient conditions of the column-pivot
/// minimality theorem, evaluated on an anti-Hermitian candidate T = i*S.
///
/// Condition 4 is checked in its orthogonality form
/// <c_{i0}(T), c_n(T)> = 0 for n != i0, which is equivalent to the stated
/// diagonal formula once the pivot diagonal entry vanishes.
struct MinimalityCertificate {
  int pivot_index = 1;  // 1-based i0
  bool cond_real = false;
  bool cond_pivot = false;
  bool cond_column_dominates = false;
  bool cond_orthogonal = false;
  double realness_residual = 0.0;       // max |Re T_{ij}|
  double pivot_diag_residual = 0.0;     // |T_{i0,i0}|
  int zero_offpivot_index = 0;          // 1-based offending n, 0 when none
  double column_margin = 0.0;           // ||c_{i0}|| - ||T^[i0]||
  double max_orthogonality_residual = 0.0;
  double certified_norm = 0.0;          // ||c_{i0}(T)||
  double operator_norm_value = 0.0;     // ||T||, for the conclusion check
  Verdict verdict = Verdict::conditions_fail;
};

MinimalityCertificate check_theorem_minimality(
    const DenseOperator& t, int pivot_index,
    const Tolerances& tol = Tolerances{});

struct QuotientNormResult {
  double value = 0.0;
  RealVector minimizer_diagonal;  // imaginary parts of the minimizing D
  int iterations = 0;
  double gap_estimate = 0.0;      // best value minus certified lower bound
  bool certified = false;         // value comes from a certificate
  bool marginal = false;          // optimizer budget exhausted
};

struct OracleOptions {
  int budget = 40000;            // total inner iterations across stages
  int oracle_dim_max = 64;
  int grid_points = 13;          // dense grid pass, dim <= 4
};

/// Best diagonal approximation in operator norm:
/// minimizes ||Y + i Diag(d)|| over real d for anti-Hermitian Y.
///
/// The convex objective max_k |lambda_k(-iY + Diag(d))| is minimized through
/// a log-sum-exp smoothing of the eigenvalue maximum with mu-continuation,
/// each stage solved by L-BFGS; multi-start from d = 0 and the diagonal
/// cancellation d = -diag(-iY). For dim <= 4 a dense grid pass plus local
/// refinement is run as well and the two routes must agree within
/// tol_oracle.
QuotientNormResult best_diagonal_oracle(const DenseOperator& y,
                                        const OracleOptions& opts = {},
                                        const Tolerances& tol = Tolerances{});

/// Quotient norm dispatch: certificate first (with the candidate diagonal
/// shift when provided), oracle fallback.
QuotientNormResult quotient_norm(
    const DenseOperator& y,
    const std::optional<RealVector>& candidate_diagonal = std::nullopt,
    const OracleOptions& opts = {}, const Tolerances& tol = Tolerances{});

/// Random bounded diagonal perturbation audit: returns
/// min over trials of ||T + i Diag(e)|| - ||T|| with ||e||_inf <= radius.
/// A certified-minimal T must not fall below -tol_min.
double perturbation_audit(const DenseOperator& t, int trials, double radius,
                          std::uint64_t seed);

struct TailClassification {
  enum class Kind { compact_proxy, single_limit, oscillant, unclassified };
  Kind kind = Kind::unclassified;
  int limit_count = 0;
  double limit = 0.0;        // single_limit
  double limit_even = 0.0;   // oscillant (m = 2)
  double limit_odd = 0.0;
  double residual = 0.0;     // geometric-fit residual of the accepted model
};

std::string to_string(TailClassification::Kind k);

/// Fits m in {1, 2} limit points to the diagonal entry sequence using
/// iterated Aitken extrapolation on the relevant subsequences plus a
/// geometric-residual test. compact_proxy when the single limit is zero or
/// the sequence has finite support.
TailClassification classify_diagonal_tail(const DiagonalSeq& d,
                                          int m_max = 2,
                                          double fit_tol = 1e-8);

/// Derives a reproducible per-task seed from a root seed and a task name
/// (FNV-1a over the name, mixed with the root; stable across platforms).
std::uint64_t derive_seed(std::uint64_t root_seed, const std::string& task);

}  // namespace minorb
