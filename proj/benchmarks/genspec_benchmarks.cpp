#include <benchmark/benchmark.h>

#include <genspec/kron.hpp>
#include <genspec/perturb.hpp>
#include <genspec/random.hpp>
#include <genspec/spectra.hpp>

using namespace genspec;

namespace {

void BM_SimplicityReport(benchmark::State& state) {
    RandomSource rng(1);
    const Matrix a = sample_gaussian(static_cast<std::size_t>(state.range(0)), Field::Complex, rng);
    for (auto _ : state) benchmark::DoNotOptimize(simplicity_report(a));
}
BENCHMARK(BM_SimplicityReport)->DenseRange(2, 8, 2)->Arg(16)->Arg(32);

void BM_PerturbPairInverseIdentity(benchmark::State& state) {
    const Matrix i = Matrix::identity(static_cast<std::size_t>(state.range(0)));
    PerturbSpec spec;
    spec.eps = 1e-6;
    for (auto _ : state) benchmark::DoNotOptimize(perturb_pair_inverse(i, i, spec));
}
BENCHMARK(BM_PerturbPairInverseIdentity)->DenseRange(2, 8, 3);

void BM_BinomialInverse(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const auto q = static_cast<std::size_t>(state.range(1));
    RandomSource rng(2);
    const KroneckerBinomial b{sample_gaussian(p, Field::Complex, rng), sample_gaussian(p, Field::Complex, rng),
                              sample_gaussian(q, Field::Complex, rng), sample_gaussian(q, Field::Complex, rng)};
    InverseOptions options;
    options.branch = state.range(2) == 0 ? InverseBranch::PTerms : InverseBranch::QTerms;
    for (auto _ : state) benchmark::DoNotOptimize(binomial_inverse(b, options));
}
BENCHMARK(BM_BinomialInverse)->Args({3, 6, 0})->Args({3, 6, 1})->Args({6, 6, 0})->Args({6, 6, 1});

void BM_KronRank(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomSource rng(3);
    const Matrix x = sample_gaussian(n * n, Field::Complex, rng);
    for (auto _ : state) benchmark::DoNotOptimize(kron_rank(x, n, n));
}
BENCHMARK(BM_KronRank)->Arg(3)->Arg(6);

} // namespace
BENCHMARK_MAIN();
