#include <benchmark/benchmark.h>

#include "minorb/families.hpp"
#include "minorb/geodesics.hpp"
#include "minorb/linalg.hpp"
#include "minorb/minimality.hpp"

using namespace minorb;

namespace {

FamilyParams params_of_dim(int N) {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = N;
  return p;
}

void BM_hermitian_eig(benchmark::State& state) {
  DenseOperator zr = build_Zr(params_of_dim(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    Spectrum s = hermitian_eig(zr);
    benchmark::DoNotOptimize(s.eigenvalues);
  }
}
BENCHMARK(BM_hermitian_eig)->Arg(16)->Arg(32)->Arg(64);

void BM_expm(benchmark::State& state) {
  DenseOperator zr = build_Zr(params_of_dim(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    DenseOperator u = expm_antihermitian(zr, 0.3);
    benchmark::DoNotOptimize(u.entries());
  }
}
BENCHMARK(BM_expm)->Arg(16)->Arg(32)->Arg(64);

void BM_certificate(benchmark::State& state) {
  DenseOperator zr = build_Zr(params_of_dim(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    MinimalityCertificate c = check_theorem_minimality(zr, 1);
    benchmark::DoNotOptimize(c.certified_norm);
  }
}
BENCHMARK(BM_certificate)->Arg(16)->Arg(32)->Arg(64);

void BM_oracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FamilyParams p = params_of_dim(n);
  p.n = n;
  auto [yn, dn] = build_Yn_Dn(p);
  Matrix hollow = yn.entries();
  for (int i = 0; i < n; ++i) hollow(i, i) = Complex{0.0, 0.0};
  DenseOperator y(std::move(hollow), Structure::anti_hermitian);
  for (auto _ : state) {
    QuotientNormResult r = best_diagonal_oracle(y);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_oracle)->Arg(4)->Arg(8);

void BM_curve_speed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FamilyParams p = params_of_dim(n);
  DenseOperator zr = build_Zr(p);
  DiagonalSeq d0 = build_D0(p);
  OrbitBasePoint b = default_base_point(n);
  for (auto _ : state) {
    double s = curve_speed(zr, b, 0.2, d0.values);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_curve_speed)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
