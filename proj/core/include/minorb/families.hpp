#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "minorb/dense_operator.hpp"
#include "minorb/diagonal_seq.hpp"

namespace minorb {

/// Parameters of the two explicit operator families.
///
/// gamma drives the geometric entry decay of the main family; (gamma, delta)
/// parameterize the oscillant family, subject to gamma^2 <= delta and
/// delta^2 <= gamma so both diagonal subsequences converge. r is the
/// first-row scaling; r_auto resolves it to M0 / ||c_1(L)|| (resp.
/// M1 / ||c_1(Z0 - Z0^[1])|| for the oscillant family).
struct FamilyParams {
  double gamma = 0.5;
  std::optional<double> delta;       // oscillant family only
  std::optional<double> r;           // nullopt = "auto"
  int n = 0;                         // truncation rank of finite-range members
  int N = 64;                        // ambient truncation dimension
  int m_sup_max = 48;                // range of the sup in M0 / M1

  void validate_main() const;
  void validate_oscillant() const;
};

/// Diagonal operator with strictly distinct eigenvalues, the base point of
/// the orbit.
struct OrbitBasePoint {
  RealVector lambdas;
  double sep_min = 0.0;

  int dim() const { return static_cast<int>(lambdas.size()); }
  DenseOperator as_operator() const {
    return DenseOperator::diagonal_real(lambdas);
  }
};

// ---- main family --------------------------------------------------------

/// First row/column i*(0, g, g^2, ...), zero elsewhere.
DenseOperator build_L(const FamilyParams& p);

/// First row and column zero; entry (i,j) = i*g^{j-2} for 2 <= i < j,
/// mirrored symmetrically; zero diagonal.
DenseOperator build_Y1(const FamilyParams& p);

/// Closed form d_j = -(1 - g^{j-2})/(1-g) - g^j/(1-g^2), j >= 2.
double d_limit(double gamma, int j);

/// Diagonal (0, d_2, ..., d_N) with single-limit tail 1/(g-1).
DiagonalSeq build_D0(const FamilyParams& p);

/// All analytic constants resolved for a parameter set: M0, r, and the
/// column norm of L with its truncation tail.
struct ResolvedMain {
  double M0 = 0.0;
  double r = 0.0;
  double c1L = 0.0;        // ||c_1(L)|| at truncation N
  double c1L_tail = 0.0;   // g^{2N} / (1 - g^2), tail of the squared norm
  double sup_finite = 0.0; // max_n ||P_n Y1 P_n + D_n||, n <= m_sup_max
  double norm_inf = 0.0;   // ||Y1 + D0|| at truncation N
  double tail_bound = 0.0; // Frobenius tail of Y1 beyond N
};

/// M0 = max{ sup_n ||P_n Y1 P_n + D_n||, ||Y1 + D0|| } rendered at
/// truncation: the sup runs over 2 <= n <= m_sup_max and the second term
/// carries the Frobenius tail of Y1 beyond N as an explicit bound.
ResolvedMain compute_M0(const FamilyParams& p);

/// Z_r = r L + Y1 + i Diag(D0). With r = auto the scaling resolves to
/// M0 / ||c_1(L)||; an explicit r below the admissible bound is rejected.
DenseOperator build_Zr(const FamilyParams& p);

/// Finite-range pair (Y_n, D_n): Y_n = r_n P_n L P_n + P_n Y1 P_n with
/// r_n = M0 / ||c_1(P_n L P_n)||, and D_n solved from the defining
/// orthogonality conditions. Both are embedded in the ambient dimension N.
std::pair<DenseOperator, DiagonalSeq> build_Yn_Dn(const FamilyParams& p);

/// r_n for a given truncation rank.
double resolve_rn(const FamilyParams& p, int n);

/// Paper closed form for d_k^{(n)} with the index typo normalized to the
/// orthogonality solve: -sum_{j=0}^{k-3} g^j - sum_{j=k}^{n-1} g^{2j-k}.
double dkn_closed(double gamma, int k, int n);

// ---- oscillant family ---------------------------------------------------

/// Alternating pattern: above the diagonal column 2k carries -delta^k and
/// column 2k+1 carries gamma^k; zero diagonal; symmetric mirror below.
DenseOperator build_Z0(const FamilyParams& p);

/// Z0 with first row and column zeroed.
DenseOperator build_Z0_hollow(const FamilyParams& p);

/// Closed forms for the oscillant diagonal limits d'_{2k} and d'_{2k-1}
/// (1-based diagonal index l; l = 1 maps to the k = 1 odd form).
double dprime_closed(double gamma, double delta, int l);

/// Limits of the even/odd subsequences under gamma^2 = delta.
std::pair<double, double> oscillant_limits(double gamma, double delta);

/// D'_0 from the closed forms (entry 1 pinned to zero so the assembled
/// operator meets the pivot condition), tail = two_limits when
/// gamma^2 = delta; the defining orthogonality conditions are re-solved on
/// indices where the truncation tail is below tol and must agree.
DiagonalSeq build_D0prime(const FamilyParams& p);

struct ResolvedOscillant {
  double M1 = 0.0;
  double r = 0.0;
  double c1 = 0.0;          // ||c_1(Z0 - Z0^[1])|| at truncation N
  double sup_finite = 0.0;
  double norm_inf = 0.0;
  double tail_bound = 0.0;
};

ResolvedOscillant compute_M1(const FamilyParams& p);

/// Finite-range oscillant pair (Z_n, D'_n) embedded in dimension N.
std::pair<DenseOperator, DiagonalSeq> build_Znprime_Dnprime(
    const FamilyParams& p);

double resolve_rn_oscillant(const FamilyParams& p, int n);

/// Truncation-corrected closed form for d_l^{(n)'} (derived from the
/// orthogonality solve; the paper's floor-indexed display carries index
/// typos that are normalized here).
double dprime_n_closed(double gamma, double delta, int l, int n);

// ---- projections and base points ----------------------------------------

/// Orthogonal projection sum_k e_{sigma(k)} x e_{sigma(k)} truncated to N;
/// sigma given by its values on 1..ceil(N/2) (1-based, injective).
DenseOperator build_Psigma(const std::vector<int>& sigma, int N);

/// The even/odd pair sigma_1(k) = 2k, sigma_2(k) = 2k - 1.
DenseOperator build_Psigma_even(int N);
DenseOperator build_Psigma_odd(int N);

/// Diagonal base point with pairwise distinct entries; duplicate eigenvalues
/// are rejected.
OrbitBasePoint build_base_point(const RealVector& lambdas);

/// Default compact-proxy base point lambda_i = 1/i.
OrbitBasePoint default_base_point(int N);

/// Orthogonality-condition solve: given the real symmetric matrix S of the
/// off-diagonal part restricted to the leading n x n block, returns the
/// diagonal d (dim n, d_1 = 0) with <c_1(S + Diag(d)), c_j(S + Diag(d))> = 0
/// for 2 <= j <= n. The system is explicit because the first column has a
/// zero diagonal entry.
RealVector solve_orthogonality_diagonal(const RealMatrix& s, int n);

}  // namespace minorb
