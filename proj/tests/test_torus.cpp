#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "qle/torus.hpp"

using namespace qle;

TEST_CASE("grid basics") {
    TorusGrid g = make_grid(64);
    CHECK(g.hbar_eff == doctest::Approx(0.098175).epsilon(1e-4));
    CHECK(g.hbar_eff * g.N == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(g.r_sites.front() == 0.0);
    CHECK(g.r_sites.back() == doctest::Approx(kTwoPi * 63 / 64));

    TorusGrid g1k = make_grid(1024);
    CHECK(g1k.hbar_eff == doctest::Approx(6.1359e-3).epsilon(1e-4));

    TorusGrid g2 = make_grid(2);
    std::set<int> labels(g2.p_labels.begin(), g2.p_labels.end());
    CHECK(labels == std::set<int>{-1, 0});

    CHECK_THROWS_AS(make_grid(1), DimensionError);
    CHECK_THROWS_AS(make_grid(0), DimensionError);
}

TEST_CASE("centered momentum labels cover one period") {
    for (int N : {5, 8, 64}) {
        TorusGrid g = make_grid(N);
        std::set<int> labels(g.p_labels.begin(), g.p_labels.end());
        CHECK(static_cast<int>(labels.size()) == N);
        CHECK(*labels.begin() == -(N / 2));
        CHECK(*labels.rbegin() == (N + 1) / 2 - 1);
        // bin j holds frequency l mod N = j
        for (int j = 0; j < N; ++j) CHECK((g.p_labels[j] % N + N) % N == j);
    }
}

TEST_CASE("delta transforms to flat momentum amplitudes") {
    auto grid = make_shared_grid(16);
    std::vector<Complex> amp(16, Complex{0.0, 0.0});
    amp[0] = 1.0;
    StateVector delta(grid, Representation::Position, std::move(amp));
    StateVector tilde = to_momentum(delta);
    for (const auto& z : tilde.amplitudes())
        CHECK(std::abs(z) == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
    CHECK(tilde.representation() == Representation::Momentum);
    CHECK_THROWS_AS(to_momentum(tilde), RepresentationError);
}

TEST_CASE("DFT unitarity and round trip on random states") {
    for (int N : {8, 64, 1024}) {
        auto grid = make_shared_grid(N);
        for (int k = 0; k < 100; ++k) {
            StateVector psi = oracle::random_state(grid, 1000 * N + k);
            StateVector tilde = to_momentum(psi);
            CHECK(tilde.norm() == doctest::Approx(1.0).epsilon(1e-12));
            StateVector back = to_position(tilde);
            double dev = 0.0;
            for (int j = 0; j < N; ++j)
                dev = std::max(dev, std::abs(back.amplitudes()[j] - psi.amplitudes()[j]));
            CHECK(dev < 1e-12);
        }
    }
}

TEST_CASE("FFT path equals dense DFT kernel") {
    auto grid = make_shared_grid(16);
    StateVector psi = oracle::random_state(grid, 7);
    auto F = oracle::dft_matrix(16);
    auto expect = oracle::apply(F, psi.amplitudes());
    StateVector tilde = to_momentum(psi);
    for (int j = 0; j < 16; ++j)
        CHECK(std::abs(tilde.amplitudes()[j] - expect[j]) < 1e-12);
}

TEST_CASE("gaussian packet normalization and symmetry") {
    auto grid = make_shared_grid(64);
    StateVector psi = gaussian_packet({std::numbers::pi, 0.0, default_xi(*grid)}, grid);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // |psi|^2 symmetric about j = 32
    const auto& amp = psi.amplitudes();
    double max_asym = 0.0;
    for (int d = 1; d < 32; ++d) {
        const double a = std::norm(amp[32 - d]);
        const double b = std::norm(amp[32 + d]);
        max_asym = std::max(max_asym, std::abs(a - b) / std::max(a, b));
    }
    CHECK(max_asym < 1e-10);
}

TEST_CASE("momentum packet peaks at p = pi and matches the direct construction") {
    const int N = 64;
    auto grid = make_shared_grid(N);
    const double xi = default_xi(*grid);
    StateVector psi = gaussian_packet({std::numbers::pi, std::numbers::pi, xi}, grid);
    StateVector tilde = to_momentum(psi);
    std::size_t peak = 0;
    for (std::size_t j = 1; j < tilde.amplitudes().size(); ++j)
        if (std::norm(tilde.amplitudes()[j]) > std::norm(tilde.amplitudes()[peak])) peak = j;
    CHECK(peak == N / 2);

    // Direct momentum-space construction: periodized continuum transform
    // psi~(p) ~ exp[-i(p-p0) r0/hbar] exp[-(p-p0)^2 xi^2/(2 hbar^2)].
    const double hbar = grid->hbar_eff;
    const double r0 = std::numbers::pi, p0 = std::numbers::pi;
    std::vector<Complex> ref(N);
    for (int j = 0; j < N; ++j) {
        Complex a{0.0, 0.0};
        for (int m = -3; m <= 3; ++m) {
            const double p = grid->p_sites[j] + kTwoPi * m;
            const double d = p - p0;
            a += std::polar(std::exp(-d * d * xi * xi / (2.0 * hbar * hbar)), -d * r0 / hbar);
        }
        ref[j] = a;
    }
    double nrm = 0.0;
    for (const auto& z : ref) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    for (int j = 0; j < N; ++j) {
        CHECK(std::abs(tilde.amplitudes()[j]) ==
              doctest::Approx(std::abs(ref[j]) / nrm).epsilon(1e-8));
    }
}

TEST_CASE("packet centering: circular mean within 0.02 xi") {
    auto grid = make_shared_grid(256);
    for (double xi : {std::numbers::pi / 8.0, std::numbers::pi / 4.0}) {
        for (double r0 : {1.0, 3.5, 5.9}) {
            StateVector psi = gaussian_packet({r0, 2.0, xi}, grid);
            Complex z{0.0, 0.0};
            for (int j = 0; j < 256; ++j)
                z += std::norm(psi.amplitudes()[j]) * std::polar(1.0, grid->r_sites[j]);
            const double mean = mod_2pi(std::arg(z));
            double diff = std::abs(mean - r0);
            diff = std::min(diff, kTwoPi - diff);
            CHECK(diff < 0.02 * xi);
        }
    }
}

TEST_CASE("packet edge cases") {
    auto grid = make_shared_grid(32);
    bool ill = false;
    StateVector psi = gaussian_packet({1.0, 1.0, kTwoPi + 0.5}, grid, &ill);
    CHECK(ill);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    ill = true;
    gaussian_packet({1.0, 1.0, 0.5}, grid, &ill);
    CHECK_FALSE(ill);
    CHECK_THROWS_AS(gaussian_packet({1.0, 1.0, 0.0}, grid), std::invalid_argument);
}

TEST_CASE("overlap properties") {
    auto grid = make_shared_grid(32);
    StateVector psi = oracle::random_state(grid, 11);
    CHECK(std::abs(overlap(psi, psi) - Complex{1.0, 0.0}) < 1e-12);

    std::vector<Complex> a(32, Complex{0.0, 0.0}), b(32, Complex{0.0, 0.0});
    a[3] = 1.0;
    b[7] = 1.0;
    StateVector da(grid, Representation::Position, std::move(a));
    StateVector db(grid, Representation::Position, std::move(b));
    CHECK(std::abs(overlap(da, db)) == 0.0);

    // invariant under simultaneous representation change
    StateVector phi = oracle::random_state(grid, 12);
    Complex o1 = overlap(psi, phi);
    Complex o2 = overlap(to_momentum(psi), to_momentum(phi));
    CHECK(std::abs(o1 - o2) < 1e-12);

    auto other = make_shared_grid(64);
    StateVector big = oracle::random_state(other, 13);
    CHECK_THROWS_AS(overlap(psi, big), DimensionError);
    CHECK_THROWS_AS(overlap(psi, to_momentum(phi)), RepresentationError);
}

TEST_CASE("json dump carries amplitudes") {
    auto grid = make_shared_grid(4);
    StateVector psi = oracle::random_state(grid, 3);
    std::string dump = state_to_json(psi);
    CHECK(dump.find("\"N\":4") != std::string::npos);
    CHECK(dump.find("position") != std::string::npos);
    CHECK(std::count(dump.begin(), dump.end(), '[') == 5);  // array + 4 pairs
}
