#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qle/series.hpp"
#include "qle/torus.hpp"

namespace qle {

enum class MapKind { Sawtooth, Rotator };

std::string map_name(MapKind kind);

/// Kick potential shape v(r): sawtooth -(r-pi)^2/2, rotator cos(r).
/// The full kick is (K + eps) * v(r).
double kick_potential(MapKind kind, double r);

struct KickedModel {
    MapKind kind = MapKind::Sawtooth;
    double K = 0.0;
};

/// sigma = eps/hbar_eff; eps stored explicitly for output metadata.
struct PerturbationSpec {
    double sigma = 0.0;
    double epsilon = 0.0;
};

PerturbationSpec make_perturbation(double sigma, const TorusGrid& grid);

/// One-period Floquet operator U = exp(-i p^2/(2 hbar)) exp(-i (K+eps) v(r)/hbar).
/// Kinetic phase at centered label l is exp(-i pi l^2 / N); the kick is applied
/// first within a step.
class FloquetOperator {
  public:
    FloquetOperator(KickedModel model, std::shared_ptr<const TorusGrid> grid, double sigma_shift);

    const TorusGrid& grid() const { return *grid_; }
    const std::shared_ptr<const TorusGrid>& grid_ptr() const { return grid_; }
    const KickedModel& model() const { return model_; }
    double sigma() const { return sigma_; }
    const std::vector<Complex>& kick_phases() const { return kick_phases_; }
    const std::vector<Complex>& kinetic_phases() const { return kinetic_phases_; }

  private:
    KickedModel model_;
    std::shared_ptr<const TorusGrid> grid_;
    double sigma_ = 0.0;
    std::vector<Complex> kick_phases_;     // position space, site order
    std::vector<Complex> kinetic_phases_;  // momentum space, bin order
};

FloquetOperator build_floquet(const KickedModel& model, std::shared_ptr<const TorusGrid> grid,
                              double sigma_shift);

/// One kick: multiply kick phases in position space, DFT, multiply kinetic
/// phases, inverse DFT. Norm is preserved to 1e-12 per step.
StateVector evolve_step(StateVector psi, const FloquetOperator& U);
void evolve_step_inplace(StateVector& psi, const FloquetOperator& U);

/// Inverse kick U^dagger, used by the echo-symmetry checks.
void evolve_step_adjoint_inplace(StateVector& psi, const FloquetOperator& U);

/// M(t) = |<psi_1(t)|psi_0(t)>|^2 with psi_0 under U(K), psi_1 under U(K+eps),
/// eps = sigma*hbar_eff, both starting from the same packet.
EchoSeries loschmidt_echo(const KickedModel& model, double sigma,
                          std::shared_ptr<const TorusGrid> grid, const GaussianPacketSpec& packet,
                          int t_max);

/// Ensemble average of M(t) over packet centers drawn uniformly on [0,2pi)^2
/// from per-member streams; mean and standard error accumulate in member-index
/// order. xi <= 0 selects the default sqrt(hbar_eff).
EchoSeries ensemble_echo(const KickedModel& model, double sigma,
                         std::shared_ptr<const TorusGrid> grid, int n_states, std::uint64_t seed,
                         int t_max, double xi = 0.0, ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace qle
