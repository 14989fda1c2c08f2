#include "qle/ising.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>

namespace qle {

std::vector<double> mode_momenta(int n_spins, FermionSector sector) {
    if (n_spins < 2) throw std::invalid_argument("mode_momenta: n_spins must be >= 2");
    std::vector<double> ks;
    if (sector == FermionSector::Antiperiodic) {
        const int pairs = n_spins / 2;
        ks.reserve(pairs);
        for (int j = 1; j <= pairs; ++j)
            ks.push_back((2.0 * j - 1.0) * std::numbers::pi / n_spins);
    } else {
        const int pairs = (n_spins - 1) / 2;
        ks.reserve(pairs);
        for (int m = 1; m <= pairs; ++m) ks.push_back(kTwoPi * m / n_spins);
    }
    return ks;
}

double quasiparticle_energy(double lambda, double k) {
    return 2.0 * std::sqrt(1.0 + lambda * lambda - 2.0 * lambda * std::cos(k));
}

double approx_energy(const IsingQuench& quench, int m) {
    if (m == 0) throw std::invalid_argument("approx_energy: undefined at m = 0 (G singular)");
    const double dl = quench.lambda - 1.0;
    const double G = quench.n_spins * dl / (kTwoPi * m);
    return (2.0 * kTwoPi / quench.n_spins) * std::abs(m) * std::sqrt(quench.lambda + G * G);
}

double bogoliubov_angle(double lambda, double k) {
    return 0.5 * std::atan2(std::sin(k), lambda - std::cos(k));
}

double heff_ising(int n_spins) {
    if (n_spins < 1) throw std::invalid_argument("heff_ising: n_spins must be >= 1");
    return 2.0 * kTwoPi / n_spins;
}

double breakdown_estimate(double delta_lambda) {
    if (delta_lambda <= 0.0)
        throw std::domain_error("breakdown_estimate: delta_lambda must be positive");
    return 2.0 / (5.0 * delta_lambda);
}

double ising_log_echo(const IsingQuench& quench, double t, FermionSector sector) {
    const auto ks = mode_momenta(quench.n_spins, sector);
    double ln_m = 0.0;
    for (double k : ks) {
        const double dtheta = bogoliubov_angle(quench.lambda, k) -
                              bogoliubov_angle(quench.lambda0, k);
        const double s2 = std::sin(2.0 * dtheta);
        const double osc = std::sin(quasiparticle_energy(quench.lambda, k) * t);
        ln_m += std::log1p(-s2 * s2 * osc * osc);
    }
    return ln_m;
}

EchoSeries ising_echo(const IsingQuench& quench, const std::vector<double>& times,
                      ExecPolicy policy, FermionSector sector) {
    EchoSeries s;
    s.times = times;
    s.M.resize(times.size());
    const bool parallel = policy == ExecPolicy::Parallel;
    const long n = static_cast<long>(times.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < n; ++i) s.M[i] = std::exp(ising_log_echo(quench, times[i], sector));
    s.stderr_.assign(times.size(), 0.0);
    s.ensemble_size = 1;
    char buf[64];
    s.metadata["n_spins"] = std::to_string(quench.n_spins);
    std::snprintf(buf, sizeof(buf), "%.17g", quench.lambda0);
    s.metadata["lambda0"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", quench.lambda);
    s.metadata["lambda"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", quench.lambda - 1.0);
    s.metadata["delta_lambda"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", heff_ising(quench.n_spins));
    s.metadata["hbar_eff"] = buf;
    return s;
}

std::vector<double> default_time_grid(const IsingQuench& quench, double t_max) {
    const double e_max = 2.0 * (1.0 + std::abs(quench.lambda));
    const double dt = std::numbers::pi / (8.0 * e_max);
    std::vector<double> times;
    const long n = static_cast<long>(std::ceil(t_max / dt));
    times.reserve(n + 1);
    for (long i = 0; i <= n; ++i) times.push_back(t_max * static_cast<double>(i) / n);
    return times;
}

double ff_ground_energy(int n_spins, double lambda, FermionSector sector) {
    double E = 0.0;
    for (double k : mode_momenta(n_spins, sector)) E -= quasiparticle_energy(lambda, k);
    if (sector == FermionSector::Antiperiodic && n_spins % 2 == 1)
        E -= 0.5 * quasiparticle_energy(lambda, std::numbers::pi);
    if (sector == FermionSector::Periodic) {
        E -= 0.5 * quasiparticle_energy(lambda, 0.0);
        if (n_spins % 2 == 0) E -= 0.5 * quasiparticle_energy(lambda, std::numbers::pi);
    }
    return E;
}

namespace {

Eigen::MatrixXd ed_hamiltonian(int n_spins, double lambda) {
    const long dim = 1L << n_spins;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (long s = 0; s < dim; ++s) {
        double zz = 0.0;
        for (int i = 0; i < n_spins; ++i) {
            const int j = (i + 1) % n_spins;
            const int zi = 1 - 2 * ((s >> i) & 1);
            const int zj = 1 - 2 * ((s >> j) & 1);
            zz += zi * zj;
        }
        H(s, s) = -zz;
        for (int i = 0; i < n_spins; ++i) H(s ^ (1L << i), s) -= lambda;
    }
    return H;
}

}  // namespace

EchoSeries ed_oracle_echo(const IsingQuench& quench, const std::vector<double>& times) {
    if (quench.n_spins > 12)
        throw std::invalid_argument("ed_oracle_echo: n_spins > 12 exceeds the dense-ED limit");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es0(ed_hamiltonian(quench.n_spins,
                                                                      quench.lambda0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(ed_hamiltonian(quench.n_spins,
                                                                      quench.lambda));
    const Eigen::VectorXd psi0 = es0.eigenvectors().col(0);
    const Eigen::VectorXd w = (es1.eigenvectors().transpose() * psi0).array().square();
    const Eigen::VectorXd& E = es1.eigenvalues();

    EchoSeries s;
    s.times = times;
    s.M.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        Complex m{0.0, 0.0};
        for (long n = 0; n < E.size(); ++n) m += w[n] * std::polar(1.0, -E[n] * times[i]);
        s.M[i] = std::norm(m);
    }
    s.stderr_.assign(times.size(), 0.0);
    s.ensemble_size = 1;
    s.metadata["n_spins"] = std::to_string(quench.n_spins);
    s.metadata["oracle"] = "exact-diagonalization";
    return s;
}

double ed_ground_energy(int n_spins, double lambda) {
    if (n_spins > 12)
        throw std::invalid_argument("ed_ground_energy: n_spins > 12 exceeds the dense-ED limit");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ed_hamiltonian(n_spins, lambda));
    return es.eigenvalues()(0);
}

}  // namespace qle
