#include <benchmark/benchmark.h>

#include <numbers>

#include <carnotacf/experiments.hpp>

using namespace carnotacf;

namespace {

const double kPi = std::numbers::pi;

Resolution bench_res() {
  Resolution res;
  res.radial_nodes = 32;
  res.angular_nodes_phi = 32;
  res.angular_nodes_theta = 64;
  res.t_nodes = 16;
  return res;
}

void BM_polynomial_eval(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const CompiledPolynomial gsq(grad_norm_sq(h1, counterexample_family(1, 0).u));
  const double p[3] = {0.3, -0.2, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(gsq(p));
}
BENCHMARK(BM_polynomial_eval);

void BM_solid_gamma(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand f{[&](const Point& p) { return geom.gamma(p); }, -2.0};
  const Resolution res = bench_res();
  long n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solid_value(h1, f, 1.0, res, n));
}
BENCHMARK(BM_solid_gamma);

void BM_masked_solid_energy(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Polynomial u = counterexample_family(1, 0).u;
  const CompiledPolynomial gsq(grad_norm_sq(h1, u));
  const Integrand f{[&](const Point& p) { return gsq(p.data()) * geom.gamma(p); }, -2.0};
  const Resolution res = bench_res();
  long n = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(masked_solid_value(h1, f, u, PartSelector::plus, 0.5, res, n));
}
BENCHMARK(BM_masked_solid_energy);

void BM_kernel_mass(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand mass{[&](const Point& p) { return geom.kernel(p); }, 0.0};
  const Resolution res = bench_res();
  long n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sphere_value(h1, mass, 1.0, res, n));
}
BENCHMARK(BM_kernel_mass);

void BM_mean_value(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const CompiledPolynomial uc(counterexample_family(1, 0).u);
  const Resolution res = bench_res();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mean_value(geom, [&](const Point& p) { return uc(p.data()); }, {0, 0, 0}, 0.5, res)
            .value);
}
BENCHMARK(BM_mean_value);

void BM_representation_factor(benchmark::State& state) {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Polynomial u = counterexample_family(1, 0).u;
  const Resolution res = bench_res();
  const std::vector<Rational> x0(3, Rational(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(acf_j_representation(geom, u, x0, 0.5, res).value);
}
BENCHMARK(BM_representation_factor);

}  // namespace

BENCHMARK_MAIN();
