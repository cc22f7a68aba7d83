#pragma once

// Reference oracle for the best diagonal approximation, deliberately
// independent of the production path: a coarse-to-fine coordinate grid
// sweep followed by a hand-rolled Nelder-Mead simplex on the exact
// objective max_k |lambda_k(-iY + Diag(d))|.

#include <algorithm>
#include <cmath>
#include <vector>

#include "minorb/dense_operator.hpp"

namespace minorb::testref {

inline double ref_objective(const RealMatrix& s, const RealVector& d) {
  RealMatrix m = s;
  for (int i = 0; i < d.size(); ++i) m(i, i) += d(i);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(m.rows() - 1)));
}

inline double nelder_mead(const RealMatrix& s, RealVector& x, int iters,
                          double h = 0.25) {
  const int n = static_cast<int>(x.size());
  std::vector<RealVector> v(n + 1, x);
  std::vector<double> f(n + 1);
  for (int i = 1; i <= n; ++i) v[i](i - 1) += h;
  for (int i = 0; i <= n; ++i) f[i] = ref_objective(s, v[i]);
  for (int it = 0; it < iters; ++it) {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return f[a] < f[b]; });
    std::vector<RealVector> vs(n + 1);
    std::vector<double> fs(n + 1);
    for (int i = 0; i <= n; ++i) {
      vs[i] = v[idx[i]];
      fs[i] = f[idx[i]];
    }
    v = vs;
    f = fs;
    RealVector centroid = RealVector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += v[i];
    centroid /= n;
    RealVector xr = centroid + (centroid - v[n]);
    double fr = ref_objective(s, xr);
    if (fr < f[0]) {
      RealVector xe = centroid + 2.0 * (centroid - v[n]);
      double fe = ref_objective(s, xe);
      if (fe < fr) {
        v[n] = xe;
        f[n] = fe;
      } else {
        v[n] = xr;
        f[n] = fr;
      }
    } else if (fr < f[n - 1]) {
      v[n] = xr;
      f[n] = fr;
    } else {
      RealVector xc = centroid + 0.5 * (v[n] - centroid);
      double fc = ref_objective(s, xc);
      if (fc < f[n]) {
        v[n] = xc;
        f[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          v[i] = v[0] + 0.5 * (v[i] - v[0]);
          f[i] = ref_objective(s, v[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (f[i] < f[best]) best = i;
  x = v[best];
  return f[best];
}

// Ellipsoid method on the exact objective. Convex in d with an exact
// subgradient from the extreme eigenpair, so it converges linearly in
// volume no matter how nonsmooth the minimum is; dim <= 4 keeps the
// iteration count tiny.
inline double ellipsoid_refine(const RealMatrix& s, RealVector& x,
                               double radius, int iters) {
  const int n = static_cast<int>(x.size());
  RealMatrix p = radius * radius * RealMatrix::Identity(n, n);
  RealVector best = x;
  double best_f = ref_objective(s, x);
  for (int it = 0; it < iters; ++it) {
    RealMatrix m = s;
    for (int i = 0; i < n; ++i) m(i, i) += x(i);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(n - 1);
    const double f = std::max(std::abs(lo), std::abs(hi));
    if (f < best_f) {
      best_f = f;
      best = x;
    }
    RealVector g(n);
    if (hi >= -lo)
      g = es.eigenvectors().col(n - 1).cwiseAbs2();
    else
      g = -es.eigenvectors().col(0).cwiseAbs2();
    RealVector pg = p * g;
    const double denom = std::sqrt(g.dot(pg));
    if (!(denom > 0.0)) break;
    RealVector gn = pg / denom;
    x -= gn / (n + 1.0);
    p = (n * n / (n * n - 1.0)) *
        (p - (2.0 / (n + 1.0)) * gn * gn.transpose());
  }
  x = best;
  return best_f;
}

inline double reference_quotient_norm(const DenseOperator& y) {
  RealMatrix s = y.imaginary_part_symmetric();
  const int n = static_cast<int>(s.rows());
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  RealVector best = RealVector::Zero(n);
  double best_f = ref_objective(s, best);
  // iterated shrinking dense grids: 7^n points over a box that halves each
  // round and recenters on the incumbent; the objective is convex, so the
  // box keeps trapping the minimizer
  const int points = 7;
  const int total = static_cast<int>(std::pow(points, n));
  RealVector d(n);
  double radius = 2.0 * scale;
  for (int round = 0; round < 6; ++round) {
    RealVector center = best;
    for (int flat = 0; flat < total; ++flat) {
      int rem = flat;
      for (int i = 0; i < n; ++i) {
        const int k = rem % points;
        rem /= points;
        d(i) = center(i) + radius * (2.0 * k / (points - 1) - 1.0);
      }
      const double f = ref_objective(s, d);
      if (f < best_f) {
        best_f = f;
        best = d;
      }
    }
    radius *= 0.5;
  }
  RealVector x = best;
  best_f = std::min(best_f, ellipsoid_refine(s, x, scale, 4000));
  best = x;
  // simplex polish as a cross-check between the two refinement stages
  double nm = best_f;
  for (double h : {0.05, 0.002}) {
    RealVector start = best;
    nm = std::min(nm, nelder_mead(s, start, 800, h));
  }
  return std::min(best_f, nm);
}

}  // namespace minorb::testref
