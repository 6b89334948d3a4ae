// kpo_bench — timing comparison of the serial reference kernels against the
// OpenMP parallel ones on a representative sweep.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kpo/fitting.hpp"
#include "kpo/spectrum.hpp"

using namespace kpo;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

KpoParams paper_device(double delta_mhz, int dim) {
    KpoParams p;
    p.delta = mhz_to_angular(delta_mhz);
    p.chi = mhz_to_angular(17.0);
    p.kappa_e = mhz_to_angular(0.27);
    p.kappa_i = mhz_to_angular(0.45);
    p.dim = dim;
    return p;
}

} // namespace

int main(int argc, char** argv) {
    int nbeta = 25;
    int dim = 30;
    if (argc > 1) nbeta = std::atoi(argv[1]);
    if (argc > 2) dim = std::atoi(argv[2]);

    const KpoParams params = paper_device(8.20, dim);
    std::vector<double> betas(nbeta);
    for (int k = 0; k < nbeta; ++k)
        betas[k] = mhz_to_angular(10.0) * k / (nbeta - 1);
    std::vector<double> probes(301);
    for (int j = 0; j < 301; ++j)
        probes[j] = mhz_to_angular(-30.0 + 60.0 * j / 300.0);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel falls back to serial\n");
#endif
    std::printf("sweep: %d beta points, dim %d, %zu probe points\n\n", nbeta, dim,
                probes.size());

    double t_serial = 0.0, t_parallel = 0.0;
    SpectrumGrid g_serial, g_parallel;
    {
        const auto t0 = std::chrono::steady_clock::now();
        const BetaTables tabs = tabulate_sweep(params, betas, spectrum_sum_max_label,
                                               Exec::serial);
        g_serial = sweep_grid(tabs, probes, params, Exec::serial);
        t_serial = ms_since(t0);
        std::printf("tabulate + grid   serial:   %9.1f ms\n", t_serial);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const BetaTables tabs = tabulate_sweep(params, betas, spectrum_sum_max_label,
                                               Exec::parallel);
        g_parallel = sweep_grid(tabs, probes, params, Exec::parallel);
        t_parallel = ms_since(t0);
        std::printf("tabulate + grid   parallel: %9.1f ms   speedup %.2fx\n", t_parallel,
                    t_serial / t_parallel);
    }
    const double dev = (g_serial.gamma - g_parallel.gamma).cwiseAbs().maxCoeff();
    std::printf("max |serial - parallel| over the grid: %.3g %s\n\n", dev,
                dev == 0.0 ? "(bit-identical)" : "");

    const std::vector<std::pair<int, int>> pairs = {{1, 0}, {2, 1}, {3, 0}};
    {
        const auto t0 = std::chrono::steady_clock::now();
        (void)loss_comparison_sweep(params, betas, pairs, Exec::serial);
        t_serial = ms_since(t0);
        std::printf("loss comparison   serial:   %9.1f ms\n", t_serial);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        (void)loss_comparison_sweep(params, betas, pairs, Exec::parallel);
        t_parallel = ms_since(t0);
        std::printf("loss comparison   parallel: %9.1f ms   speedup %.2fx\n", t_parallel,
                    t_serial / t_parallel);
    }
    return dev == 0.0 ? 0 : 1;
}
