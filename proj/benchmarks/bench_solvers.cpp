#include <benchmark/benchmark.h>

#include "ovib/fd_solver.hpp"
#include "ovib/fock_solver.hpp"
#include "ovib/quasiclassics.hpp"

using namespace ovib;

namespace {

ModelParams reference(double eta) {
    ModelParams p;
    p.gamma0 = 4.0;
    p.eta = eta;
    return p;
}

void TridiagEigenvaluesHermitian(benchmark::State& state) {
    const Grid grid(15.0, static_cast<std::size_t>(state.range(0)));
    const auto h = fd::build_hamiltonian(grid, reference(2.0), SolveMode::hermitian);
    for (auto _ : state) {
        auto ev = fd::solve_eigenvalues(h);
        benchmark::DoNotOptimize(ev);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(TridiagEigenvaluesHermitian)->RangeMultiplier(2)->Range(751, 6001)->Complexity();

void TridiagEigenvaluesFull(benchmark::State& state) {
    const Grid grid(15.0, static_cast<std::size_t>(state.range(0)));
    const auto h = fd::build_hamiltonian(grid, reference(2.0), SolveMode::full);
    for (auto _ : state) {
        auto ev = fd::solve_eigenvalues(h);
        benchmark::DoNotOptimize(ev);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(TridiagEigenvaluesFull)->RangeMultiplier(2)->Range(751, 6001)->Complexity();

void SpectrumWithVectors(benchmark::State& state) {
    const auto h = fd::build_hamiltonian(Grid::reference(), reference(2.0), SolveMode::full);
    for (auto _ : state) {
        auto s = fd::solve_spectrum(h, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(SpectrumWithVectors)->Arg(10)->Arg(45);

void FockSpectrum(benchmark::State& state) {
    const fock::FockConfig cfg{static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) {
        auto ev = fock::fock_spectrum(reference(2.0), cfg, SolveMode::full);
        benchmark::DoNotOptimize(ev);
    }
}
BENCHMARK(FockSpectrum)->Arg(100)->Arg(200);

void BohrSommerfeldPhase(benchmark::State& state) {
    const ModelParams p = reference(2.0);
    double e = 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qc::bs_phase(e, p));
        e = 10.0 + std::fmod(e * 1.37, 25.0); // walk the window
    }
}
BENCHMARK(BohrSommerfeldPhase);

void PhaseMapRow(benchmark::State& state) {
    const ModelParams p = reference(0.0);
    std::vector<double> energies;
    for (int j = 0; j < 300; ++j) energies.push_back(-5.0 + 45.0 * j / 299.0);
    for (auto _ : state) {
        auto map = qc::phase_map({2.0}, energies, p);
        benchmark::DoNotOptimize(map);
    }
}
BENCHMARK(PhaseMapRow);

} // namespace

BENCHMARK_MAIN();
