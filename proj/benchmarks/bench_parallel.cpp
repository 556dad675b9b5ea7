// Times the OpenMP trial loops against the serial reference paths that the
// tests use for bit-exactness checks.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "defectq/decoder.hpp"
#include "defectq/purify.hpp"

using namespace defectq;
using Clock = std::chrono::steady_clock;

template <typename F>
double timed(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    long trials = argc > 1 ? std::atol(argv[1]) : 20000;
    printf("threads available: %d\n", omp_get_max_threads());

    PurifyConfig cfg;
    cfg.scheme = Scheme::after_strict;
    cfg.code_a = &steane_code();
    cfg.code_b = &surface_d3_code();
    cfg.rounds = 2;
    cfg.p = 1e-3;
    cfg.trials = trials;
    cfg.seed = 99;
    PurifyStats sp{}, ss{};
    double tp = timed([&] { sp = run_purification(cfg); });
    double ts = timed([&] { ss = run_purification_serial(cfg); });
    bool same = sp.merged_errors == ss.merged_errors && sp.raw_consumed == ss.raw_consumed;
    printf("purification %ld trials: parallel %.2fs, serial %.2fs, speedup %.2fx, identical=%s\n",
           trials, tp, ts, ts / tp, same ? "yes" : "no");

    auto ctx = build_context(generate_perfect(5), 4e-3, 8);
    long lt = std::max(200L, trials / 50);
    RateResult rp{}, rs{};
    double lp = timed([&] { rp = logical_error_rate(ctx, lt, 3); });
    double ls = timed([&] { rs = logical_error_rate_serial(ctx, lt, 3); });
    bool same2 = rp.x_errors == rs.x_errors && rp.z_errors == rs.z_errors;
    printf("lattice d=5 %ld trials: parallel %.2fs, serial %.2fs, speedup %.2fx, identical=%s\n",
           lt, lp, ls, ls / lp, same2 ? "yes" : "no");
    return (same && same2) ? 0 : 1;
}
