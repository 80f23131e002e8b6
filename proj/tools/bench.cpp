#include "loganharm/eigensolver.hpp"
#include "loganharm/potentials.hpp"
#include "loganharm/threads.hpp"
#include "loganharm/tridiag.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(
               clock::now().time_since_epoch())
        .count();
}

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

int main(int argc, char** argv) {
    const bool smoke = argc > 1 && std::string(argv[1]) == "--smoke";
    const int n = smoke ? 4096 : 262144;
    const int k = smoke ? 8 : 24;
    const int reps = smoke ? 2 : 5;

    const loganharm::potential_spec spec = loganharm::log_anharmonic{1.0, 1.0};
    const loganharm::grid_spec grid = loganharm::default_grid(spec, n);

    std::printf("bench: n_points=%d k=%d threads=%d%s\n", n, k,
                loganharm::thread_cap(), smoke ? " (smoke)" : "");

    loganharm::sym_tridiag ts, tp;
    const double ms_as =
        best_of(reps, [&] { ts = loganharm::assemble_serial(spec, grid); });
    const double ms_ap =
        best_of(reps, [&] { tp = loganharm::assemble(spec, grid); });
    const bool asm_match = same_bits(ts.d, tp.d) && same_bits(ts.e, tp.e);
    std::printf("assembly   serial %8.2f ms   parallel %8.2f ms   x%.2f   %s\n",
                ms_as, ms_ap, ms_as / ms_ap,
                asm_match ? "bitwise identical" : "MISMATCH");

    std::vector<double> es, ep;
    const double ms_bs = best_of(
        reps, [&] { es = loganharm::lowest_eigenvalues_serial(ts, k); });
    const double ms_bp =
        best_of(reps, [&] { ep = loganharm::lowest_eigenvalues(ts, k); });
    const bool bis_match = same_bits(es, ep);
    std::printf("bisection  serial %8.2f ms   parallel %8.2f ms   x%.2f   %s\n",
                ms_bs, ms_bp, ms_bs / ms_bp,
                bis_match ? "bitwise identical" : "MISMATCH");

    if (!asm_match || !bis_match) {
        std::fprintf(stderr, "serial and parallel lanes disagree\n");
        return 1;
    }
    return 0;
}
