#pragma once

#include <memory>
#include <vector>

#include "qle/common.hpp"

namespace qle {

/// Hilbert-space discretization of the unit torus [0,2pi)^2 with N sites and
/// hbar_eff = 2pi/N.
///
/// Momentum amplitudes are stored in natural DFT bin order j = 0..N-1; bin j
/// carries the centered frequency label l = ((j + floor(N/2)) mod N) - floor(N/2),
/// i.e. l runs over {-floor(N/2), ..., ceil(N/2)-1} and p_sites[j] = 2*pi*l_j/N.
/// The transform kernel is exp(-i r_j p_l / hbar_eff)/sqrt(N) = exp(-2pi i j l/N)/sqrt(N),
/// which is periodic in l mod N, so bin order and centered labels describe the
/// same unitary.
struct TorusGrid {
    int N = 0;
    double hbar_eff = 0.0;
    std::vector<double> r_sites;   // r_j = 2 pi j / N
    std::vector<double> p_sites;   // p_l = 2 pi l_j / N, bin order
    std::vector<int> p_labels;     // centered label l_j per bin
};

/// Throws DimensionError for N < 2.
TorusGrid make_grid(int N);
std::shared_ptr<const TorusGrid> make_shared_grid(int N);

enum class Representation { Position, Momentum };

/// Gaussian wave-packet parameters. Default dispersion (xi <= 0 on request
/// sites) is the coherent-state width sqrt(hbar_eff); the momentum-space
/// intensity width used by the regular-regime formulas is w_p = hbar/(sqrt(2) xi).
struct GaussianPacketSpec {
    double r0 = 0.0;
    double p0 = 0.0;
    double xi = 0.0;
};

inline double default_xi(const TorusGrid& g) { return std::sqrt(g.hbar_eff); }
inline double momentum_width(double xi, double hbar) { return hbar / (std::sqrt(2.0) * xi); }

class StateVector {
  public:
    StateVector() = default;
    StateVector(std::shared_ptr<const TorusGrid> grid, Representation rep,
                std::vector<Complex> amplitudes);

    const TorusGrid& grid() const { return *grid_; }
    const std::shared_ptr<const TorusGrid>& grid_ptr() const { return grid_; }
    Representation representation() const { return rep_; }
    const std::vector<Complex>& amplitudes() const { return amp_; }
    std::vector<Complex>& amplitudes() { return amp_; }
    int size() const { return static_cast<int>(amp_.size()); }

    double norm() const;
    void normalize();

  private:
    friend void transform_to_momentum(StateVector&);
    friend void transform_to_position(StateVector&);

    std::shared_ptr<const TorusGrid> grid_;
    Representation rep_ = Representation::Position;
    std::vector<Complex> amp_;
};

/// Unitary DFT between conjugate representations; throws RepresentationError
/// when the input already is in the target representation.
StateVector to_momentum(const StateVector& psi);
StateVector to_position(const StateVector& psi);

/// In-place transforms used by the evolution kernels (no representation
/// bookkeeping beyond flipping the tag).
void transform_to_momentum(StateVector& psi);
void transform_to_position(StateVector& psi);

/// Periodized Gaussian packet, images n = -3..3, normalized. A dispersion
/// xi >= 2pi is flagged ill-conditioned (packet wider than the torus) but the
/// state is still returned.
StateVector gaussian_packet(const GaussianPacketSpec& spec,
                            std::shared_ptr<const TorusGrid> grid,
                            bool* ill_conditioned = nullptr);

/// <psi|phi> = sum_j conj(psi_j) phi_j. Throws DimensionError on grid mismatch
/// and RepresentationError on representation mismatch.
Complex overlap(const StateVector& psi, const StateVector& phi);

/// Debug dump: amplitudes as [re, im] pairs plus grid/representation tags.
std::string state_to_json(const StateVector& psi);

}  // namespace qle
