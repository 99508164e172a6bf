// Serial reference kernels against their OpenMP versions, and the QL
// eigensolver against cyclic Jacobi. Set OMP_NUM_THREADS to vary threads.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hsc/graph.hpp"
#include "hsc/kernels.hpp"
#include "hsc/sparse.hpp"
#include "hsc/spectral.hpp"
#include "hsc/synthetic.hpp"

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(r, c);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return a;
}

template <auto Kernel>
void BM_correlations(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd atoms = random_matrix(n, 5 * n, 1);
  const Eigen::MatrixXd r = random_matrix(n, 3, 2);
  Eigen::MatrixXd corr;
  for (auto _ : state) {
    Kernel(atoms, r, corr);
    benchmark::DoNotOptimize(corr.data());
  }
}
BENCHMARK(BM_correlations<hsc::kernels::atom_correlations_serial>)->Name("correlations/serial")->Arg(100)->Arg(300);
BENCHMARK(BM_correlations<hsc::kernels::atom_correlations>)->Name("correlations/omp")->Arg(100)->Arg(300);

template <auto Kernel>
void BM_rotations(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  std::vector<hsc::kernels::Rotation> rot(static_cast<std::size_t>(n - 1), {0.6, 0.8});
  for (auto _ : state) {
    Kernel(v, rot, n - 1);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_rotations<hsc::kernels::apply_rotations_serial>)->Name("rotations/serial")->Arg(100)->Arg(300);
BENCHMARK(BM_rotations<hsc::kernels::apply_rotations>)->Name("rotations/omp")->Arg(100)->Arg(300);

template <auto Kernel>
void BM_rank2(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Eigen::MatrixXd a = random_matrix(n, n, 3);
  const Eigen::VectorXd d = random_matrix(n, 1, 4) * 1e-9, e = random_matrix(n, 1, 5) * 1e-9;
  for (auto _ : state) {
    Kernel(a, d, e, n);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_rank2<hsc::kernels::rank2_update_serial>)->Name("rank2/serial")->Arg(100)->Arg(300);
BENCHMARK(BM_rank2<hsc::kernels::rank2_update>)->Name("rank2/omp")->Arg(100)->Arg(300);

template <auto Kernel>
void BM_combine(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd atoms = random_matrix(n, 2 * n, 6);
  std::vector<std::uint32_t> support;
  for (std::uint32_t j = 0; j < std::uint32_t(n / 3); ++j) support.push_back(5 * j % std::uint32_t(2 * n));
  const Eigen::MatrixXd coef = random_matrix(Eigen::Index(support.size()), 3, 7);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    Kernel(atoms, support, coef, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_combine<hsc::kernels::combine_atoms_serial>)->Name("combine/serial")->Arg(100)->Arg(300);
BENCHMARK(BM_combine<hsc::kernels::combine_atoms>)->Name("combine/omp")->Arg(100)->Arg(300);

hsc::SymmetricMatrix block_laplacian(std::size_t n) {
  const hsc::Mesh m = hsc::synth::random_mesh(n, 8);
  return hsc::combinatorial_laplacian(hsc::build_adjacency(m));
}

void BM_eigen_ql(benchmark::State& state) {
  const auto L = block_laplacian(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hsc::eigendecompose_symmetric(L).values.data());
}
void BM_eigen_jacobi(benchmark::State& state) {
  const auto L = block_laplacian(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hsc::eigendecompose_jacobi(L).values.data());
}
BENCHMARK(BM_eigen_ql)->Name("eigensolver/ql")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigen_jacobi)->Name("eigensolver/jacobi")->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_somp(benchmark::State& state) {
  const auto L = block_laplacian(300);
  const auto basis = hsc::eigendecompose_symmetric(L);
  const auto dict = hsc::build_dictionary(basis);
  const Eigen::MatrixXd u = random_matrix(L.size(), 3, 9);
  for (auto _ : state) benchmark::DoNotOptimize(hsc::somp(u, dict, std::size_t(state.range(0))).coefficients.data());
}
BENCHMARK(BM_somp)->Name("somp/300")->Arg(30)->Arg(90)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
