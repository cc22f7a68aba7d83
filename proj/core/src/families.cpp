#include "minorb/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "minorb/linalg.hpp"

namespace minorb {

namespace {

double geometric_sum(double q, int j0, int j1) {
  // sum_{j=j0}^{j1} q^j, empty when j1 < j0
  double s = 0.0;
  for (int j = j0; j <= j1; ++j) s += std::pow(q, j);
  return s;
}

RealMatrix real_L(double g, int N) {
  RealMatrix s = RealMatrix::Zero(N, N);
  for (int j = 2; j <= N; ++j) {
    s(0, j - 1) = std::pow(g, j - 1);
    s(j - 1, 0) = s(0, j - 1);
  }
  return s;
}

RealMatrix real_Y1(double g, int N) {
  RealMatrix s = RealMatrix::Zero(N, N);
  for (int j = 3; j <= N; ++j)
    for (int i = 2; i < j; ++i) {
      s(i - 1, j - 1) = std::pow(g, j - 2);
      s(j - 1, i - 1) = s(i - 1, j - 1);
    }
  return s;
}

RealMatrix real_Z0(double g, double de, int N) {
  RealMatrix s = RealMatrix::Zero(N, N);
  for (int j = 2; j <= N; ++j) {
    const double v = (j % 2 == 0) ? -std::pow(de, j / 2)
                                  : std::pow(g, (j - 1) / 2);
    for (int i = 1; i < j; ++i) {
      s(i - 1, j - 1) = v;
      s(j - 1, i - 1) = v;
    }
  }
  return s;
}

}  // namespace

void FamilyParams::validate_main() const {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ParameterError("gamma must lie in (0,1), got " +
                         std::to_string(gamma));
  if (N < 2) throw ParameterError("ambient dimension N must be >= 2");
}

void FamilyParams::validate_oscillant() const {
  validate_main();
  if (!delta)
    throw ParameterError("oscillant family requires delta in (0,1)");
  const double de = *delta;
  if (!(de > 0.0 && de < 1.0))
    throw ParameterError("delta must lie in (0,1), got " + std::to_string(de));
  if (gamma * gamma > de || de * de > gamma)
    throw ParameterError(
        "oscillant family requires gamma^2 <= delta and delta^2 <= gamma "
        "(convergence of both diagonal subsequences); got gamma=" +
        std::to_string(gamma) + ", delta=" + std::to_string(de));
}

DenseOperator build_L(const FamilyParams& p) {
  p.validate_main();
  return DenseOperator::anti_hermitian_from_real_symmetric(
      real_L(p.gamma, p.N));
}

DenseOperator build_Y1(const FamilyParams& p) {
  p.validate_main();
  return DenseOperator::anti_hermitian_from_real_symmetric(
      real_Y1(p.gamma, p.N));
}

double d_limit(double gamma, int j) {
  if (j < 2) throw ParameterError("d_limit requires index j >= 2");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ParameterError("gamma must lie in (0,1)");
  return -(1.0 - std::pow(gamma, j - 2)) / (1.0 - gamma) -
         std::pow(gamma, j) / (1.0 - gamma * gamma);
}

DiagonalSeq build_D0(const FamilyParams& p) {
  p.validate_main();
  RealVector v = RealVector::Zero(p.N);
  for (int j = 2; j <= p.N; ++j) v(j - 1) = d_limit(p.gamma, j);
  const double limit = 1.0 / (p.gamma - 1.0);
  // |d_j - 1/(g-1)| = |g^{j-2}/(1-g) - g^j/(1-g^2)| <= g^{j-2}/(1-g)
  DiagonalSeq d{std::move(v),
                TailDescriptor::single(limit,
                                       1.0 / (p.gamma * p.gamma *
                                              (1.0 - p.gamma)),
                                       p.gamma)};
  return d;
}

RealVector solve_orthogonality_diagonal(const RealMatrix& s, int n) {
  if (n < 2 || n > s.rows())
    throw ParameterError("orthogonality solve: rank out of range");
  RealVector d = RealVector::Zero(n);
  for (int j = 2; j <= n; ++j) {
    const double pivot = s(j - 1, 0);
    if (pivot == 0.0)
      throw std::runtime_error(
          "orthogonality system singular: zero pivot entry in column 1");
    double num = 0.0;
    for (int k = 2; k <= n; ++k) {
      if (k == j) continue;
      num += s(k - 1, 0) * s(k - 1, j - 1);
    }
    d(j - 1) = -num / pivot;
  }
  return d;
}

double resolve_rn(const FamilyParams& p, int n) {
  if (n < 2 || n > p.N)
    throw ParameterError("truncation rank n must satisfy 2 <= n <= N");
  const ResolvedMain res = compute_M0(p);
  RealMatrix l = real_L(p.gamma, p.N);
  return res.M0 / l.col(0).head(n).norm();
}

ResolvedMain compute_M0(const FamilyParams& p) {
  p.validate_main();
  using Key = std::tuple<double, int, int>;
  static std::mutex mtx;
  static std::map<Key, ResolvedMain> cache;
  const Key key{p.gamma, p.N, p.m_sup_max};
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int N = p.N;
  RealMatrix l = real_L(p.gamma, N);
  RealMatrix y1 = real_Y1(p.gamma, N);
  DiagonalSeq d0 = build_D0(p);

  ResolvedMain res;
  const int n_max = std::min(p.m_sup_max, N);
  for (int n = 2; n <= n_max; ++n) {
    // r_n-independent: D_n solved on the block, then || P_n Y1 P_n + D_n ||.
    RealMatrix blk = (l + y1).topLeftCorner(n, n);
    RealVector dn = solve_orthogonality_diagonal(blk, n);
    RealMatrix m = y1.topLeftCorner(n, n);
    m.diagonal() += dn;
    res.sup_finite = std::max(
        res.sup_finite, operator_norm(
            DenseOperator::anti_hermitian_from_real_symmetric(m)));
  }
  RealMatrix m = y1;
  m.diagonal() += d0.values;
  res.norm_inf =
      operator_norm(DenseOperator::anti_hermitian_from_real_symmetric(m));
  // Frobenius tail of Y1 beyond N: rows/columns j > N contribute entries
  // g^{j-2} with multiplicity < 2j.
  double tail2 = 0.0;
  const double g = p.gamma;
  for (int j = N + 1; j <= N + 200; ++j)
    tail2 += 2.0 * j * std::pow(g, 2 * (j - 2));
  res.tail_bound = std::sqrt(tail2);
  res.M0 = std::max(res.sup_finite, res.norm_inf + res.tail_bound);
  res.c1L = l.col(0).norm();
  res.c1L_tail = std::pow(g, 2 * N) / (1.0 - g * g);
  res.r = res.M0 / res.c1L;
  {
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, res);
  }
  return res;
}

DenseOperator build_Zr(const FamilyParams& p) {
  p.validate_main();
  const ResolvedMain res = compute_M0(p);
  double r = res.r;
  if (p.r) {
    r = *p.r;
    const double bound = res.norm_inf / res.c1L;
    if (r < bound)
      throw ParameterError(
          "r below the admissible bound ||Y^[1]+D_0|| / ||c_1(L)|| = " +
          std::to_string(bound) +
          " (minimality requires r at least that large)");
  }
  RealMatrix s = r * real_L(p.gamma, p.N) + real_Y1(p.gamma, p.N);
  s.diagonal() += build_D0(p).values;
  return DenseOperator::anti_hermitian_from_real_symmetric(s);
}

std::pair<DenseOperator, DiagonalSeq> build_Yn_Dn(const FamilyParams& p) {
  p.validate_main();
  const int n = p.n;
  if (n < 2 || n > p.N)
    throw ParameterError("truncation rank n must satisfy 2 <= n <= N");
  const double rn = resolve_rn(p, n);
  RealMatrix l = real_L(p.gamma, p.N);
  RealMatrix y1 = real_Y1(p.gamma, p.N);
  RealMatrix s = RealMatrix::Zero(p.N, p.N);
  s.topLeftCorner(n, n) =
      rn * l.topLeftCorner(n, n) + y1.topLeftCorner(n, n);
  // D_n is independent of r_n; solve on the unscaled block.
  RealMatrix blk = (l + y1).topLeftCorner(n, n);
  RealVector dn_head = solve_orthogonality_diagonal(blk, n);
  RealVector dn = RealVector::Zero(p.N);
  dn.head(n) = dn_head;
  return {DenseOperator::anti_hermitian_from_real_symmetric(s),
          DiagonalSeq{std::move(dn), TailDescriptor::finite(n)}};
}

double dkn_closed(double gamma, int k, int n) {
  if (k < 1) throw ParameterError("index k must be >= 1");
  if (k == 1 || k > n) return 0.0;
  double s = 0.0;
  for (int j = 0; j <= k - 3; ++j) s += std::pow(gamma, j);
  for (int j = k; j <= n - 1; ++j) s += std::pow(gamma, 2 * j - k);
  return -s;
}

// ---- oscillant family ---------------------------------------------------

DenseOperator build_Z0(const FamilyParams& p) {
  p.validate_oscillant();
  return DenseOperator::anti_hermitian_from_real_symmetric(
      real_Z0(p.gamma, *p.delta, p.N));
}

DenseOperator build_Z0_hollow(const FamilyParams& p) {
  p.validate_oscillant();
  RealMatrix s = real_Z0(p.gamma, *p.delta, p.N);
  s.row(0).setZero();
  s.col(0).setZero();
  return DenseOperator::anti_hermitian_from_real_symmetric(s);
}

double dprime_closed(double gamma, double delta, int l) {
  if (l < 1) throw ParameterError("diagonal index must be >= 1");
  const double g = gamma, de = delta;
  if (l % 2 == 0) {
    const int k = l / 2;
    return geometric_sum(de, 1, k - 1) - geometric_sum(g, 1, k - 1) +
           std::pow(de, k + 2) / (1.0 - de * de) +
           std::pow(g * g / de, k) / (1.0 - g * g);
  }
  const int k = (l + 1) / 2;
  return geometric_sum(de, 1, k - 1) - geometric_sum(g, 1, k - 2) -
         std::pow(g, k + 1) / (1.0 - g * g) -
         std::pow(de * de / g, k) * g / (1.0 - de * de);
}

std::pair<double, double> oscillant_limits(double gamma, double delta) {
  const double g = gamma, de = delta;
  const double lam =
      de / (1.0 - de) - g / (1.0 - g) + 1.0 / (1.0 - g * g);
  const double mu = de / (1.0 - de) - g / (1.0 - g);
  return {lam, mu};
}

DiagonalSeq build_D0prime(const FamilyParams& p) {
  p.validate_oscillant();
  RealVector v = RealVector::Zero(p.N);
  // Entry 1 stays zero: the assembled minimal operator needs a vanishing
  // pivot diagonal entry, and the orthogonality conditions only constrain
  // indices >= 2.
  for (int l = 2; l <= p.N; ++l)
    v(l - 1) = dprime_closed(p.gamma, *p.delta, l);
  auto [lam, mu] = oscillant_limits(p.gamma, *p.delta);
  const double q = std::max(p.gamma, *p.delta);
  DiagonalSeq d{std::move(v),
                TailDescriptor::two(lam, mu, 2.0 / (1.0 - q), std::sqrt(q))};
  return d;
}

double resolve_rn_oscillant(const FamilyParams& p, int n) {
  if (n < 2 || n > p.N)
    throw ParameterError("truncation rank n must satisfy 2 <= n <= N");
  const ResolvedOscillant res = compute_M1(p);
  RealMatrix z0 = real_Z0(p.gamma, *p.delta, p.N);
  return res.M1 / z0.col(0).head(n).norm();
}

ResolvedOscillant compute_M1(const FamilyParams& p) {
  p.validate_oscillant();
  using Key = std::tuple<double, double, int, int>;
  static std::mutex mtx;
  static std::map<Key, ResolvedOscillant> cache;
  const Key key{p.gamma, *p.delta, p.N, p.m_sup_max};
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int N = p.N;
  RealMatrix z0 = real_Z0(p.gamma, *p.delta, N);
  RealMatrix hollow = z0;
  hollow.row(0).setZero();
  hollow.col(0).setZero();

  ResolvedOscillant res;
  const int n_max = std::min(p.m_sup_max, N);
  for (int n = 2; n <= n_max; ++n) {
    RealMatrix blk = z0.topLeftCorner(n, n);
    RealVector dn = solve_orthogonality_diagonal(blk, n);
    RealMatrix m = hollow.topLeftCorner(n, n);
    m.diagonal() += dn;
    res.sup_finite = std::max(
        res.sup_finite, operator_norm(
            DenseOperator::anti_hermitian_from_real_symmetric(m)));
  }
  RealMatrix m = hollow;
  m.diagonal() += build_D0prime(p).values;
  res.norm_inf =
      operator_norm(DenseOperator::anti_hermitian_from_real_symmetric(m));
  double tail2 = 0.0;
  const double q = std::max(p.gamma, *p.delta);
  for (int j = N + 1; j <= N + 200; ++j)
    tail2 += 2.0 * j * std::pow(q, j - 1);
  res.tail_bound = std::sqrt(tail2);
  res.M1 = std::max(res.sup_finite, res.norm_inf + res.tail_bound);
  res.c1 = z0.col(0).norm();
  res.r = res.M1 / res.c1;
  {
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, res);
  }
  return res;
}

std::pair<DenseOperator, DiagonalSeq> build_Znprime_Dnprime(
    const FamilyParams& p) {
  p.validate_oscillant();
  const int n = p.n;
  if (n < 2 || n > p.N)
    throw ParameterError("truncation rank n must satisfy 2 <= n <= N");
  const double rn = resolve_rn_oscillant(p, n);
  RealMatrix z0 = real_Z0(p.gamma, *p.delta, p.N);
  RealMatrix hollow = z0;
  hollow.row(0).setZero();
  hollow.col(0).setZero();
  RealMatrix first = z0 - hollow;
  RealMatrix s = RealMatrix::Zero(p.N, p.N);
  s.topLeftCorner(n, n) =
      rn * first.topLeftCorner(n, n) + hollow.topLeftCorner(n, n);
  RealMatrix blk = z0.topLeftCorner(n, n);
  RealVector dn_head = solve_orthogonality_diagonal(blk, n);
  RealVector dn = RealVector::Zero(p.N);
  dn.head(n) = dn_head;
  return {DenseOperator::anti_hermitian_from_real_symmetric(s),
          DiagonalSeq{std::move(dn), TailDescriptor::finite(n)}};
}

double dprime_n_closed(double gamma, double delta, int l, int n) {
  if (l < 1) throw ParameterError("diagonal index must be >= 1");
  if (l == 1 || l > n) return 0.0;
  const double g = gamma, de = delta;
  if (l % 2 == 0) {
    const int k = l / 2;
    double s = geometric_sum(de, 1, k - 1) - geometric_sum(g, 1, k - 1);
    for (int m = k; m <= (n - 1) / 2; ++m)
      s += std::pow(g, 2 * m) / std::pow(de, k);
    for (int m = k + 1; m <= n / 2; ++m)
      s += std::pow(de, 2 * m) / std::pow(de, k);
    return s;
  }
  const int k = (l + 1) / 2;
  double s = geometric_sum(de, 1, k - 1) - geometric_sum(g, 1, k - 2);
  for (int m = k; m <= n / 2; ++m)
    s -= std::pow(de, 2 * m) / std::pow(g, k - 1);
  for (int m = k; m <= (n - 1) / 2; ++m)
    s -= std::pow(g, 2 * m) / std::pow(g, k - 1);
  return s;
}

// ---- projections and base points ----------------------------------------

DenseOperator build_Psigma(const std::vector<int>& sigma, int N) {
  std::vector<bool> seen(N + 1, false);
  RealVector diag = RealVector::Zero(N);
  for (int v : sigma) {
    if (v < 1) throw ParameterError("sigma values must be >= 1");
    if (v <= N) {
      if (seen[v]) throw ParameterError("sigma must be injective");
      seen[v] = true;
      diag(v - 1) = 1.0;
    }
  }
  Matrix m = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) m(i, i) = Complex{diag(i), 0.0};
  return DenseOperator(std::move(m), Structure::diagonal);
}

DenseOperator build_Psigma_even(int N) {
  std::vector<int> sigma;
  for (int k = 1; 2 * k <= N; ++k) sigma.push_back(2 * k);
  return build_Psigma(sigma, N);
}

DenseOperator build_Psigma_odd(int N) {
  std::vector<int> sigma;
  for (int k = 1; 2 * k - 1 <= N; ++k) sigma.push_back(2 * k - 1);
  return build_Psigma(sigma, N);
}

OrbitBasePoint build_base_point(const RealVector& lambdas) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 1) throw ParameterError("base point needs at least one eigenvalue");
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      sep = std::min(sep, std::abs(lambdas(i) - lambdas(j)));
  if (n > 1 && sep == 0.0)
    throw ParameterError(
        "base point eigenvalues must be pairwise distinct (duplicate found; "
        "tangent lifting would be ill-posed)");
  return OrbitBasePoint{lambdas, n > 1 ? sep : 0.0};
}

OrbitBasePoint default_base_point(int N) {
  RealVector l(N);
  for (int i = 1; i <= N; ++i) l(i - 1) = 1.0 / i;
  return build_base_point(l);
}

std::string to_string(TailDescriptor::Kind k) {
  switch (k) {
    case TailDescriptor::Kind::finite_support: return "finite_support";
    case TailDescriptor::Kind::single_limit: return "single_limit";
    case TailDescriptor::Kind::two_limits: return "two_limits";
  }
  return "finite_support";
}

}  // namespace minorb
