#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qle/classical.hpp"
#include "qle/rng.hpp"

using namespace qle;

TEST_CASE("sawtooth map steps") {
    PhasePoint fp = step_sawtooth({std::numbers::pi, 0.0}, 2.0);
    CHECK(fp.r == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(fp.p == doctest::Approx(0.0));

    PhasePoint y = step_sawtooth({std::numbers::pi + 0.1, 0.0}, 2.0);
    CHECK(y.p == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(y.r == doctest::Approx(std::numbers::pi + 0.3).epsilon(1e-12));
}

TEST_CASE("standard map steps") {
    PhasePoint fp = step_standard({0.0, 0.0}, 2.0);
    CHECK(fp.r == 0.0);
    CHECK(fp.p == 0.0);

    PhasePoint y = step_standard({std::numbers::pi / 2.0, 0.0}, 2.0);
    CHECK(y.p == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(y.r == doctest::Approx(std::numbers::pi / 2.0 + 2.0).epsilon(1e-12));
}

TEST_CASE("phase-space average of cos r vanishes for the chaotic rotator") {
    const int n = 20000, T = 50;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        auto rng = task_rng(123, i);
        PhasePoint x{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
        double acc = 0.0;
        for (int t = 0; t < T; ++t) {
            acc += std::cos(x.r);
            x = step_standard(x, 11.0);
        }
        acc /= T;
        sum += acc;
        sumsq += acc * acc;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean) < 3.0 * se + 1e-6);
}

TEST_CASE("tangent map") {
    // sawtooth Jacobian independent of the point
    TangentVector v{0.3, -0.7};
    TangentVector a = tangent_step(MapKind::Sawtooth, {0.4, 1.0}, v, 2.0);
    TangentVector b = tangent_step(MapKind::Sawtooth, {5.1, 3.3}, v, 2.0);
    CHECK(a.dr == b.dr);
    CHECK(a.dp == b.dp);
    // matrix form [[1,K],[1,1+K]] acting on (dp, dr)
    CHECK(a.dp == doctest::Approx(v.dp + 2.0 * v.dr));
    CHECK(a.dr == doctest::Approx(v.dp + 3.0 * v.dr));

    // standard map at r = pi/2: J = [[1,0],[1,1]]
    TangentVector c = tangent_step(MapKind::Rotator, {std::numbers::pi / 2.0, 0.9}, v, 2.0);
    CHECK(c.dp == doctest::Approx(v.dp).epsilon(1e-12));
    CHECK(c.dr == doctest::Approx(v.dp + v.dr).epsilon(1e-12));
}

TEST_CASE("area preservation: det J = 1 at random points") {
    auto rng = task_rng(9, 0);
    for (MapKind kind : {MapKind::Sawtooth, MapKind::Rotator}) {
        for (int i = 0; i < 50; ++i) {
            PhasePoint x{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
            TangentVector e1 = tangent_step(kind, x, {1.0, 0.0}, 7.3);
            TangentVector e2 = tangent_step(kind, x, {0.0, 1.0}, 7.3);
            const double det = e1.dr * e2.dp - e1.dp * e2.dr;
            CHECK(std::abs(std::abs(det) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("sawtooth Lyapunov exponents match the closed form") {
    CHECK(sawtooth_lyapunov(2.0) == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-15));
    LyapunovEstimate e2 = lyapunov_exponent(MapKind::Sawtooth, 2.0, 100, 2000, 3);
    CHECK(std::abs(e2.value / 1.3170 - 1.0) < 0.01);
    CHECK_FALSE(e2.warning);
    LyapunovEstimate e1 = lyapunov_exponent(MapKind::Sawtooth, 1.0, 100, 2000, 3);
    CHECK(std::abs(e1.value / 0.9624 - 1.0) < 0.01);
    CHECK_THROWS_AS(lyapunov_exponent(MapKind::Sawtooth, 2.0, 10, 100, 3),
                    std::invalid_argument);
}

TEST_CASE("mixed-phase-space rotator flags a weak-chaos estimate") {
    // K = 1: islands plus a thin chaotic layer; per-trajectory exponents are
    // wildly inconsistent, so the estimate is flagged.
    LyapunovEstimate est = lyapunov_exponent(MapKind::Rotator, 1.0, 40, 2000, 13);
    CHECK(est.warning);
    CHECK(est.value < 0.2);
}

TEST_CASE("standard-map Lyapunov exponent is seed-stable near ln(K/2)") {
    LyapunovEstimate a = lyapunov_exponent(MapKind::Rotator, 11.0, 64, 4000, 1);
    LyapunovEstimate b = lyapunov_exponent(MapKind::Rotator, 11.0, 64, 4000, 77);
    CHECK(std::abs(a.value - b.value) < 0.02 * a.value);
    CHECK(std::abs(a.value - std::log(5.5)) < 0.10 * a.value);
}

TEST_CASE("lambda1 equals lambda_L exactly for the sawtooth") {
    auto lam = lambda1_of_t(MapKind::Sawtooth, 2.0, 100, 50, 5);
    const double expect = sawtooth_lyapunov(2.0);
    for (int t = 1; t <= 50; ++t) CHECK(std::abs(lam[t] - expect) < 1e-12);
}

TEST_CASE("lambda1 one-step identity against a fresh ensemble") {
    auto lam = lambda1_of_t(MapKind::Rotator, 15.0, 500, 1, 21);
    TrajectoryEnsemble ens = sample_ensemble(MapKind::Rotator, 15.0, 500, 21);
    ensemble_step(ens, MapKind::Rotator, 15.0);
    double lmin = ens.log_stretch[0];
    for (double L : ens.log_stretch) lmin = std::min(lmin, L);
    double s = 0.0;
    for (double L : ens.log_stretch) s += std::exp(-(L - lmin));
    const double expect = -(-lmin + std::log(s / 500));
    CHECK(lam[1] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("lambda1 of the K=15 rotator stays below lambda_L and is seed-stable early") {
    auto lam = lambda1_of_t(MapKind::Rotator, 15.0, 200000, 12, 2);
    LyapunovEstimate lyap = lyapunov_exponent(MapKind::Rotator, 15.0, 64, 4000, 2);
    for (int t = 2; t <= 12; ++t) CHECK(lam[t] < lyap.value * 1.02);
    // Seed spread grows with t: the inverse-stretch average is increasingly
    // dominated by rare weakly-stretching (sticky) trajectories.
    auto lam_b = lambda1_of_t(MapKind::Rotator, 15.0, 200000, 12, 91);
    for (int t = 2; t <= 5; ++t) CHECK(std::abs(lam[t] - lam_b[t]) < 0.05 * lam[t]);
    for (int t = 6; t <= 8; ++t) CHECK(std::abs(lam[t] - lam_b[t]) < 0.15 * lam[t]);
}

TEST_CASE("potential correlation: sawtooth") {
    auto corr = potential_correlation(MapKind::Sawtooth, 2.0, 10, 16, 100000, 4);
    const double c0 = std::pow(std::numbers::pi, 4) / 45.0;
    CHECK(std::abs(corr.C[0] / c0 - 1.0) < 0.02);
    for (int l = 1; l <= 5; ++l) CHECK(std::abs(corr.C[l]) < 3.0 * corr.stderr_[l]);
    auto R = action_diffusion(corr);
    CHECK(std::abs(R.R / (c0 / 2.0) - 1.0) < 0.02);
    CHECK_FALSE(R.tail_warning);
}

TEST_CASE("potential correlation: rotator variance and R(E)") {
    auto corr = potential_correlation(MapKind::Rotator, 11.0, 20, 24, 100000, 4);
    CHECK(std::abs(corr.C[0] - 0.5) < 0.01);
    auto R = action_diffusion(corr);
    CHECK(std::abs(R.R - 0.375) < 0.02);
}

TEST_CASE("R estimate stable under doubling the samples") {
    auto a = action_diffusion(potential_correlation(MapKind::Rotator, 11.0, 20, 12, 80000, 6));
    auto b = action_diffusion(potential_correlation(MapKind::Rotator, 11.0, 20, 24, 80000, 6));
    CHECK(std::abs(a.R - b.R) < 0.02);
}

TEST_CASE("action diffusion edge cases") {
    CorrelationSeries zero;
    zero.C.assign(8, 0.0);
    zero.stderr_.assign(8, 1e-6);
    CHECK(action_diffusion(zero).R == 0.0);

    CorrelationSeries bad;
    bad.C = {1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    bad.stderr_.assign(8, 1e-3);
    CHECK(action_diffusion(bad).tail_warning);
}

TEST_CASE("serial and parallel classical kernels agree bitwise") {
    auto cs = potential_correlation(MapKind::Sawtooth, 2.0, 5, 8, 20000, 3, ExecPolicy::Serial);
    auto cp = potential_correlation(MapKind::Sawtooth, 2.0, 5, 8, 20000, 3, ExecPolicy::Parallel);
    CHECK(cs.C == cp.C);
    auto ls = lambda1_of_t(MapKind::Rotator, 15.0, 400, 10, 3, ExecPolicy::Serial);
    auto lp = lambda1_of_t(MapKind::Rotator, 15.0, 400, 10, 3, ExecPolicy::Parallel);
    CHECK(ls == lp);
}

TEST_CASE("action-difference distribution moments") {
    const double hbar = kTwoPi / 1024;
    GaussianPacketSpec packet{1.3, 2.0, std::sqrt(hbar)};

    DeltaSHistogram h0 = action_difference_distribution(MapKind::Sawtooth, 2.0, 0.5, hbar,
                                                        packet, 0, 5000, 8);
    CHECK(h0.variance() == 0.0);
    CHECK(h0.counts.size() == 1);  // degenerate histogram at t = 0

    // variance growth ~ 2 eps^2 R t (pooled over centers)
    const double eps = 0.5 * hbar;
    const double R = std::pow(std::numbers::pi, 4) / 90.0;
    std::vector<std::pair<int, double>> var;
    for (int t : {5, 20, 35, 50}) {
        auto h = ensemble_action_distribution(MapKind::Sawtooth, 2.0, 0.5, hbar, 0.0, 64, 3000,
                                              t, 8);
        var.emplace_back(t, h.variance());
        // binned and streamed moments consistent
        CHECK(std::abs(h.binned_mean() - h.mean()) < h.bin_width);
        CHECK(h.binned_variance() == doctest::Approx(h.variance()).epsilon(2e-3));
    }
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    for (auto [t, v] : var) {
        st += t;
        sv += v;
        stt += static_cast<double>(t) * t;
        stv += t * v;
    }
    const double slope = (4.0 * stv - st * sv) / (4.0 * stt - st * st);
    CHECK(std::abs(slope / (2.0 * eps * eps * R) - 1.0) < 0.10);
}

TEST_CASE("single-packet mean of DeltaS tracks eps t <v>") {
    const double hbar = kTwoPi / 512;
    const int t = 12;
    const long n = 40000;
    auto h = ensemble_action_distribution(MapKind::Sawtooth, 2.0, 0.5, hbar, 0.0, 64,
                                          n / 64, t, 10);
    const double eps = 0.5 * hbar;
    const double vbar = -std::pow(std::numbers::pi, 2) / 6.0;  // uniform mean of -(r-pi)^2/2
    const double expect = eps * t * vbar;
    const double se = std::sqrt(h.variance() / static_cast<double>(h.n_samples));
    CHECK(std::abs(h.mean() - expect) < 3.0 * se + 1e-3 * std::abs(expect));
}

TEST_CASE("characteristic-function echo of synthetic distributions") {
    const double hbar = 0.01;
    // delta distribution -> M = 1
    DeltaSHistogram delta;
    delta.lo = 0.37;
    delta.bin_width = hbar / 100.0;
    delta.counts = {1000.0};
    delta.n_samples = 1000;
    CHECK(semiclassical_echo_from_distribution(delta, hbar) == doctest::Approx(1.0));

    // Gaussian with variance s^2 -> M = exp(-s^2/hbar^2)
    const double s = 2.5 * hbar;
    auto rng = task_rng(31, 0);
    std::vector<double> samples(400000);
    for (auto& x : samples) x = normal(rng, 0.0, s);
    double lo = samples[0], hi = samples[0];
    for (double x : samples) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    DeltaSHistogram g;
    g.lo = lo;
    g.bin_width = delta_s_bin_width(hbar, hi - lo);
    g.counts.assign(static_cast<std::size_t>((hi - lo) / g.bin_width) + 1, 0.0);
    for (double x : samples) {
        std::size_t k = static_cast<std::size_t>((x - lo) / g.bin_width);
        if (k >= g.counts.size()) k = g.counts.size() - 1;
        g.counts[k] += 1.0;
        g.sum += x;
        g.sum_sq += x * x;
        ++g.n_samples;
    }
    const double M = semiclassical_echo_from_distribution(g, hbar);
    CHECK(std::abs(M - std::exp(-s * s / (hbar * hbar))) < 0.01);

    // aliasing guard
    DeltaSHistogram coarse = g;
    coarse.bin_width = 2.0 * hbar;
    CHECK_THROWS_AS(semiclassical_echo_from_distribution(coarse, hbar), AliasingError);
}

TEST_CASE("time averages at fixed points and one step") {
    PhasePoint fp{std::numbers::pi, 0.0};
    CHECK(time_average_observable(MapKind::Sawtooth, 2.0, fp, 100) ==
          doctest::Approx(0.0).epsilon(1e-12));
    PhasePoint x{1.2, 0.7};
    CHECK(time_average_observable(MapKind::Rotator, 0.5, x, 1) ==
          doctest::Approx(std::cos(1.2)));
}

TEST_CASE("regular-region dU/dp stable under Richardson halving") {
    // rotation band of the weakly kicked rotator
    const double p0 = 2.0;
    const long T = 2000000;
    auto U = [&](double p) {
        return time_average_observable(MapKind::Rotator, 0.5, {std::numbers::pi, p},
                                       static_cast<int>(T));
    };
    const double h = 1e-4;
    const double d1 = (U(p0 + h) - U(p0 - h)) / (2.0 * h);
    const double d2 = (U(p0 + h / 2.0) - U(p0 - h / 2.0)) / h;
    CHECK(std::abs(d1 - d2) < 0.01 * std::abs(d1));
}
