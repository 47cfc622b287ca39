#include <benchmark/benchmark.h>

#include "proxlab/circle_maps.hpp"
#include "proxlab/measure.hpp"
#include "proxlab/proximal.hpp"

using namespace proxlab;

namespace {
constexpr double kGolden = 0.6180339887498949;

System example_product() {
    return System::product(System::sqrt_interval(), System::rotation(kGolden));
}
}  // namespace

static void BM_ProxGapSqrt(benchmark::State& state) {
    const System sq = System::sqrt_interval();
    const Point x = Point::interval(0.25), y = Point::interval(0.75);
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(prox_gap(sq, x, y, N));
}
BENCHMARK(BM_ProxGapSqrt)->Arg(16)->Arg(64);

static void BM_ProximalCellProduct(benchmark::State& state) {
    const System prod = example_product();
    const auto grid = Grid::build(prod.space(), 1.0 / static_cast<double>(state.range(0)));
    const Point x = grid->point(grid->size() / 2);
    for (auto _ : state) benchmark::DoNotOptimize(proximal_cell(prod, x, *grid, 30, 1e-3));
}
BENCHMARK(BM_ProximalCellProduct)->Arg(20)->Arg(40);

static void BM_CertificateSweep(benchmark::State& state) {
    const System prod = example_product();
    const auto grid = Grid::build(prod.space(), 1.0 / static_cast<double>(state.range(0)));
    const HorizonParams hp{30, 1e-3, 0.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(inner_distal_certificate(prod, grid, hp));
}
BENCHMARK(BM_CertificateSweep)->Unit(benchmark::kMillisecond)->Arg(25)->Arg(50);

static void BM_W1Transport(benchmark::State& state) {
    std::vector<Point> a, b;
    std::vector<double> wa, wb;
    const std::int64_t n = state.range(0);
    for (std::int64_t i = 0; i < n; ++i) {
        a.push_back(Point::torus(Rational(i, n), Rational((i * 7) % n, n)));
        b.push_back(Point::torus(Rational((i * 3) % n, n), Rational(i, n)));
        wa.push_back(1.0 + static_cast<double>(i % 3));
        wb.push_back(1.0 + static_cast<double>(i % 5));
    }
    const AtomicMeasure mu = AtomicMeasure::make(Space::torus(), a, wa);
    const AtomicMeasure nu = AtomicMeasure::make(Space::torus(), b, wb);
    for (auto _ : state) benchmark::DoNotOptimize(w1_transport_route(Space::torus(), mu, nu));
}
BENCHMARK(BM_W1Transport)->Arg(16)->Arg(64);

static void BM_W1CircleFastPath(benchmark::State& state) {
    const auto grid = Grid::build(Space::circle(), 1.0 / static_cast<double>(state.range(0)));
    const AtomicMeasure mu = AtomicMeasure::lebesgue_grid(grid);
    const AtomicMeasure nu = pushforward(mu, System::rotation(kGolden), 1);
    for (auto _ : state) benchmark::DoNotOptimize(w1(Space::circle(), mu, nu));
}
BENCHMARK(BM_W1CircleFastPath)->Arg(100)->Arg(1000);

static void BM_RotationNumber(benchmark::State& state) {
    const System den = System::denjoy({kGolden, 12, 0.5});
    for (auto _ : state)
        benchmark::DoNotOptimize(rotation_number(den, 0.1, state.range(0)));
}
BENCHMARK(BM_RotationNumber)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
