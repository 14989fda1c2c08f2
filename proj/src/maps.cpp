#include "qle/maps.hpp"

#include <cstdio>

#include "qle/rng.hpp"

namespace qle {

std::string map_name(MapKind kind) {
    return kind == MapKind::Sawtooth ? "sawtooth" : "rotator";
}

double kick_potential(MapKind kind, double r) {
    if (kind == MapKind::Sawtooth) {
        const double d = r - std::numbers::pi;
        return -0.5 * d * d;
    }
    return std::cos(r);
}

PerturbationSpec make_perturbation(double sigma, const TorusGrid& grid) {
    return {sigma, sigma * grid.hbar_eff};
}

FloquetOperator::FloquetOperator(KickedModel model, std::shared_ptr<const TorusGrid> grid,
                                 double sigma_shift)
    : model_(model), grid_(std::move(grid)), sigma_(sigma_shift) {
    const TorusGrid& g = *grid_;
    kick_phases_.resize(g.N);
    kinetic_phases_.resize(g.N);
    const double eps = sigma_shift * g.hbar_eff;
    const double strength = (model_.K + eps) / g.hbar_eff;
    for (int j = 0; j < g.N; ++j)
        kick_phases_[j] = std::polar(1.0, -strength * kick_potential(model_.kind, g.r_sites[j]));
    for (int j = 0; j < g.N; ++j) {
        const double l = g.p_labels[j];
        kinetic_phases_[j] = std::polar(1.0, -std::numbers::pi * l * l / g.N);
    }
}

FloquetOperator build_floquet(const KickedModel& model, std::shared_ptr<const TorusGrid> grid,
                              double sigma_shift) {
    return FloquetOperator(model, std::move(grid), sigma_shift);
}

void evolve_step_inplace(StateVector& psi, const FloquetOperator& U) {
    if (psi.grid().N != U.grid().N) throw DimensionError("evolve_step: grid mismatch");
    if (psi.representation() != Representation::Position)
        transform_to_position(psi);
    auto& amp = psi.amplitudes();
    const auto& kick = U.kick_phases();
    for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= kick[j];
    transform_to_momentum(psi);
    const auto& kin = U.kinetic_phases();
    for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= kin[j];
    transform_to_position(psi);
}

StateVector evolve_step(StateVector psi, const FloquetOperator& U) {
    evolve_step_inplace(psi, U);
    return psi;
}

void evolve_step_adjoint_inplace(StateVector& psi, const FloquetOperator& U) {
    if (psi.grid().N != U.grid().N) throw DimensionError("evolve_step_adjoint: grid mismatch");
    if (psi.representation() != Representation::Position)
        transform_to_position(psi);
    auto& amp = psi.amplitudes();
    transform_to_momentum(psi);
    const auto& kin = U.kinetic_phases();
    for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= std::conj(kin[j]);
    transform_to_position(psi);
    const auto& kick = U.kick_phases();
    for (std::size_t j = 0; j < amp.size(); ++j) amp[j] *= std::conj(kick[j]);
}

namespace {

std::vector<double> echo_row(const FloquetOperator& U0, const FloquetOperator& U1,
                             const StateVector& packet, int t_max) {
    std::vector<double> M(t_max + 1);
    StateVector a = packet;
    StateVector b = packet;
    M[0] = std::norm(overlap(b, a));
    for (int t = 1; t <= t_max; ++t) {
        evolve_step_inplace(a, U0);
        evolve_step_inplace(b, U1);
        M[t] = std::norm(overlap(b, a));
    }
    return M;
}

}  // namespace

EchoSeries loschmidt_echo(const KickedModel& model, double sigma,
                          std::shared_ptr<const TorusGrid> grid, const GaussianPacketSpec& packet,
                          int t_max) {
    if (t_max < 1) throw std::invalid_argument("loschmidt_echo: t_max must be >= 1");
    FloquetOperator U0(model, grid, 0.0);
    FloquetOperator U1(model, grid, sigma);
    StateVector psi = gaussian_packet(packet, grid);
    EchoSeries s;
    s.M = echo_row(U0, U1, psi, t_max);
    s.times.resize(t_max + 1);
    for (int t = 0; t <= t_max; ++t) s.times[t] = t;
    s.stderr_.assign(t_max + 1, 0.0);
    s.ensemble_size = 1;
    char buf[64];
    s.metadata["model"] = map_name(model.kind);
    std::snprintf(buf, sizeof(buf), "%.17g", model.K);
    s.metadata["K"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", sigma);
    s.metadata["sigma"] = buf;
    s.metadata["N"] = std::to_string(grid->N);
    std::snprintf(buf, sizeof(buf), "%.17g", packet.xi);
    s.metadata["xi"] = buf;
    return s;
}

EchoSeries ensemble_echo(const KickedModel& model, double sigma,
                         std::shared_ptr<const TorusGrid> grid, int n_states, std::uint64_t seed,
                         int t_max, double xi, ExecPolicy policy) {
    if (n_states < 1) throw std::invalid_argument("ensemble_echo: n_states must be >= 1");
    if (t_max < 1) throw std::invalid_argument("ensemble_echo: t_max must be >= 1");
    const double width = xi > 0.0 ? xi : default_xi(*grid);
    FloquetOperator U0(model, grid, 0.0);
    FloquetOperator U1(model, grid, sigma);

    std::vector<std::vector<double>> rows(n_states);
    const bool parallel = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < n_states; ++i) {
        auto rng = task_rng(seed, static_cast<std::uint64_t>(i));
        GaussianPacketSpec spec{uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi), width};
        StateVector psi = gaussian_packet(spec, grid);
        rows[i] = echo_row(U0, U1, psi, t_max);
    }

    // Accumulate in ascending member order for bit reproducibility.
    EchoSeries s;
    s.times.resize(t_max + 1);
    s.M.assign(t_max + 1, 0.0);
    s.stderr_.assign(t_max + 1, 0.0);
    for (int t = 0; t <= t_max; ++t) s.times[t] = t;
    for (int i = 0; i < n_states; ++i)
        for (int t = 0; t <= t_max; ++t) s.M[t] += rows[i][t];
    for (int t = 0; t <= t_max; ++t) s.M[t] /= n_states;
    if (n_states > 1) {
        for (int i = 0; i < n_states; ++i)
            for (int t = 0; t <= t_max; ++t) {
                const double d = rows[i][t] - s.M[t];
                s.stderr_[t] += d * d;
            }
        for (int t = 0; t <= t_max; ++t)
            s.stderr_[t] = std::sqrt(s.stderr_[t] / (static_cast<double>(n_states) *
                                                     (n_states - 1)));
    }
    s.ensemble_size = n_states;
    char buf[64];
    s.metadata["model"] = map_name(model.kind);
    std::snprintf(buf, sizeof(buf), "%.17g", model.K);
    s.metadata["K"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", sigma);
    s.metadata["sigma"] = buf;
    s.metadata["N"] = std::to_string(grid->N);
    std::snprintf(buf, sizeof(buf), "%.17g", width);
    s.metadata["xi"] = buf;
    s.metadata["seed"] = std::to_string(seed);
    s.metadata["ensemble"] = std::to_string(n_states);
    return s;
}

}  // namespace qle
