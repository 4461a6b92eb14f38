#include <benchmark/benchmark.h>

#include "tfc/arith.hpp"
#include "tfc/eds.hpp"
#include "tfc/power_cert.hpp"

namespace {

using namespace tfc;

EdsContext make_ctx7() {
  return EdsContext(CubicCurve(7), CubicPoint(mpq_class(2), mpq_class(-1)));
}

void BM_term(benchmark::State& state) {
  const unsigned long m = state.range(0);
  for (auto _ : state) {
    auto ctx = make_ctx7();  // fresh memo: measure the multiply itself
    benchmark::DoNotOptimize(ctx.term(m).W.get_mpz_t());
  }
}
BENCHMARK(BM_term)->Arg(5)->Arg(15)->Arg(25)->Arg(50);

void BM_strong_divisibility(benchmark::State& state) {
  auto ctx = make_ctx7();
  (void)ctx.term(state.range(0));
  for (auto _ : state) {
    auto rep = strong_divisibility_report(ctx, state.range(0));
    benchmark::DoNotOptimize(rep.checks);
  }
}
BENCHMARK(BM_strong_divisibility)->Arg(15)->Arg(25);

void BM_scan_powers(benchmark::State& state) {
  auto ctx = make_ctx7();
  (void)ctx.term(state.range(0));
  for (auto _ : state) {
    auto scan = scan_powers(ctx, state.range(0));
    benchmark::DoNotOptimize(scan.hits.size());
  }
}
BENCHMARK(BM_scan_powers)->Arg(15)->Arg(25);

void BM_factor_semiprime(benchmark::State& state) {
  // ~2^62 semiprime: exercises the rho splitter, not trial division.
  const mpz_class n = mpz_class(2147483647) * 2147483629;
  for (auto _ : state) {
    auto f = arith::factor_with_effort(n, 100, 4000000, 1);
    benchmark::DoNotOptimize(f.factors.size());
  }
}
BENCHMARK(BM_factor_semiprime);

void BM_cornacchia(benchmark::State& state) {
  const mpz_class n = state.range(0);
  for (auto _ : state) {
    auto reps = arith::cornacchia_3(n);
    benchmark::DoNotOptimize(reps.size());
  }
}
BENCHMARK(BM_cornacchia)->Arg(4036)->Arg(1000000)->Arg(100000000);

void BM_perfect_power(benchmark::State& state) {
  auto ctx = make_ctx7();
  const mpz_class w = ctx.term(state.range(0)).W;
  for (auto _ : state) {
    auto hits = arith::perfect_power_exponents(w);
    benchmark::DoNotOptimize(hits.size());
  }
}
BENCHMARK(BM_perfect_power)->Arg(10)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
