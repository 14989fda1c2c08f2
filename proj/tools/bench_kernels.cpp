// Serial vs OpenMP timing for the ensemble kernels. Bit-identical results are
// asserted while timing, since both policies reduce in task-index order.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qle/classical.hpp"
#include "qle/ising.hpp"
#include "qle/maps.hpp"

using namespace qle;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
    auto t0 = clk::now();
    f();
    return seconds(t0, clk::now());
}

void row(const char* name, double ts, double tp, bool identical) {
    std::printf("%-28s %9.3fs %9.3fs %6.2fx  %s\n", name, ts, tp, ts / tp,
                identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    std::printf("%-28s %10s %10s %7s\n", "kernel", "serial", "openmp", "speedup");

    {
        auto grid = make_shared_grid(2048);
        KickedModel model{MapKind::Sawtooth, 2.0};
        EchoSeries a, b;
        double ts = timed([&] {
            a = ensemble_echo(model, 0.5, grid, 64 * scale, 7, 30, 0.0, ExecPolicy::Serial);
        });
        double tp = timed([&] {
            b = ensemble_echo(model, 0.5, grid, 64 * scale, 7, 30, 0.0, ExecPolicy::Parallel);
        });
        row("ensemble_echo N=2048", ts, tp, a.M == b.M);
    }
    {
        CorrelationSeries a, b;
        double ts = timed([&] {
            a = potential_correlation(MapKind::Rotator, 11.0, 20, 16 * scale, 100000, 7,
                                      ExecPolicy::Serial);
        });
        double tp = timed([&] {
            b = potential_correlation(MapKind::Rotator, 11.0, 20, 16 * scale, 100000, 7,
                                      ExecPolicy::Parallel);
        });
        row("potential_correlation", ts, tp, a.C == b.C);
    }
    {
        std::vector<double> a, b;
        double ts = timed([&] {
            a = lambda1_of_t(MapKind::Rotator, 15.0, 100000 * scale, 20, 7, ExecPolicy::Serial);
        });
        double tp = timed([&] {
            b = lambda1_of_t(MapKind::Rotator, 15.0, 100000 * scale, 20, 7,
                             ExecPolicy::Parallel);
        });
        row("lambda1_of_t", ts, tp, a == b);
    }
    {
        IsingQuench q{1600, 0.96, 0.99};
        auto times = default_time_grid(q, 60.0 * scale);
        EchoSeries a, b;
        double ts = timed([&] { a = ising_echo(q, times, ExecPolicy::Serial); });
        double tp = timed([&] { b = ising_echo(q, times, ExecPolicy::Parallel); });
        row("ising_echo Np=1600", ts, tp, a.M == b.M);
    }
    {
        DeltaSHistogram a, b;
        double ts = timed([&] {
            a = ensemble_action_distribution(MapKind::Sawtooth, 2.0, 0.5, kTwoPi / 1024, 0.0,
                                             64, 4000L * scale, 10, 7, ExecPolicy::Serial);
        });
        double tp = timed([&] {
            b = ensemble_action_distribution(MapKind::Sawtooth, 2.0, 0.5, kTwoPi / 1024, 0.0,
                                             64, 4000L * scale, 10, 7, ExecPolicy::Parallel);
        });
        row("action_distribution", ts, tp, a.counts == b.counts && a.sum == b.sum);
    }
    return 0;
}
