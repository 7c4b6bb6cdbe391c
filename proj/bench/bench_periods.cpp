// Parallel vs serial timings for the OpenMP-parallel kernels.
// Usage: bench_periods [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include <omp.h>

#include "gmdet/derham.hpp"
#include "gmdet/fourier.hpp"
#include "gmdet/periods.hpp"

using namespace gmdet;
using namespace gmdet::periods;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
    double best = 1e300;
    for (int k = 0; k < repeats; ++k) {
        auto start = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void row(const char* name, double parallel_ms, double serial_ms) {
    std::printf("%-34s %10.2f %10.2f %8.2fx\n", name, parallel_ms, serial_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
    std::printf("%-34s %10s %10s %9s\n", "kernel", "parallel", "serial", "speedup");

    for (auto a : {std::vector<cplx>{1, 0, 1}, std::vector<cplx>{1, 0, 0, 1}, std::vector<cplx>{0, 1, 0, 0, 1}}) {
        ExpPolynomial f = ExpPolynomial::make(a);
        char name[64];
        std::snprintf(name, sizeof name, "period_matrix m=%d tol=1e-10", f.m());
        row(name, best_of(repeats, [&] { period_matrix(f, 1e-10); }),
            best_of(repeats, [&] { period_matrix_serial(f, 1e-10); }));
    }

    ExpPolynomial base = ExpPolynomial::make({1, 0, 0, 1});
    row("ratio_constancy m=5, 8 draws", best_of(repeats, [&] { ratio_constancy(base, 8, 7, 1e-10); }),
        best_of(repeats, [&] { ratio_constancy_serial(base, 8, 7, 1e-10); }));

    std::mt19937 rng(11);
    FourierData d = random_fourier(rng, FourierRegime::AtLeastThree);
    DeRhamPresentation pres = h1_basis(fourier_spec(d));
    char name[64];
    std::snprintf(name, sizeof name, "gauss_manin_matrix dim H1=%zu", pres.dimension());
    row(name, best_of(repeats, [&] { gauss_manin_matrix(pres); }),
        best_of(repeats, [&] { gauss_manin_matrix_serial(pres); }));
    return 0;
}
