// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "ncsoliton/kernels.hpp"
#include "ncsoliton/specfun.hpp"

using namespace ncsoliton;

namespace {

std::vector<double> random_real(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& z : v) z = d(rng);
    return v;
}

kernels::ComplexMatrix random_matrix(std::size_t n) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    kernels::ComplexMatrix m(n, n);
    for (auto& z : m.data) z = {d(rng), d(rng)};
    return m;
}

template <auto Kernel>
void apply_l0(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto v = random_real(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void psi_profile(benchmark::State& state) {
    std::vector<double> out(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Kernel(3.0, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void direct_resolvent(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto phi = specfun::laguerre_phi(3.0, n - 1);
    const auto psi = specfun::resolvent_psi(3.0, n - 1);
    const auto v = random_real(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        Kernel(phi.values, psi.values, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = random_matrix(n);
    std::vector<std::complex<double>> v(n, {1.0, 0.5}), out(n);
    for (auto _ : state) {
        Kernel(m, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(apply_l0<kernels::serial::apply_l0>)->Name("apply_l0/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(apply_l0<kernels::parallel::apply_l0>)->Name("apply_l0/parallel")->Range(1 << 10, 1 << 20);
BENCHMARK(psi_profile<kernels::serial::psi_profile>)->Name("psi_profile/serial")->Arg(128)->Arg(512);
BENCHMARK(psi_profile<kernels::parallel::psi_profile>)->Name("psi_profile/parallel")->Arg(128)->Arg(512);
BENCHMARK(direct_resolvent<kernels::serial::direct_resolvent>)->Name("direct_resolvent/serial")->Arg(200)->Arg(800);
BENCHMARK(direct_resolvent<kernels::parallel::direct_resolvent>)->Name("direct_resolvent/parallel")->Arg(200)->Arg(800);
BENCHMARK(matvec<kernels::serial::matvec>)->Name("matvec/serial")->Arg(256)->Arg(1024);
BENCHMARK(matvec<kernels::parallel::matvec>)->Name("matvec/parallel")->Arg(256)->Arg(1024);
BENCHMARK_MAIN();
