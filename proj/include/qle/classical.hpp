#pragma once

#include <cstdint>
#include <vector>

#include "qle/maps.hpp"
#include "qle/series.hpp"
#include "qle/torus.hpp"

namespace qle {

struct PhasePoint {
    double r = 0.0;
    double p = 0.0;
};

struct TangentVector {
    double dr = 0.0;
    double dp = 0.0;
};

/// Sawtooth kick-then-drift map: p' = p + K(r - pi), r' = r + p', both mod 2pi.
PhasePoint step_sawtooth(const PhasePoint& x, double K);

/// Standard map: p' = p + K sin r, r' = r + p', both mod 2pi.
PhasePoint step_standard(const PhasePoint& x, double K);

PhasePoint step_map(MapKind kind, const PhasePoint& x, double K);

/// Jacobian action on (dp, dr): sawtooth J = [[1,K],[1,1+K]] (constant);
/// standard map J = [[1, K cos r],[1, 1+K cos r]] at the pre-step point.
TangentVector tangent_step(MapKind kind, const PhasePoint& x, const TangentVector& v, double K);

/// Closed-form sawtooth Lyapunov exponent ln({2+K+sqrt((2+K)^2-4)}/2).
double sawtooth_lyapunov(double K);

/// Classical phase-space points with tangent vectors and accumulated
/// log-stretch, used by the Lyapunov-type estimators. Tangents are aligned
/// with the local unstable direction by a warmup sweep before recording
/// starts, so the sawtooth stretch is exactly exp(lambda_L) per step.
struct TrajectoryEnsemble {
    std::vector<PhasePoint> points;
    std::vector<TangentVector> tangents;
    std::vector<double> log_stretch;
    std::uint64_t seed = 0;
};

TrajectoryEnsemble sample_ensemble(MapKind kind, double K, int n_traj, std::uint64_t seed,
                                   int warmup = 64);

/// Advance every trajectory one step, renormalizing tangents and accumulating
/// per-trajectory log-stretch.
void ensemble_step(TrajectoryEnsemble& ens, MapKind kind, double K);

struct LyapunovEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    bool warning = false;  // estimate < 10 * stderr (weak chaos)
};

LyapunovEstimate lyapunov_exponent(MapKind kind, double K, int n_traj, int t_max,
                                   std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

/// Lambda_1(t) = -(1/t) ln <|dx(t)/dx(0)|^{-1}>, t = 1..t_max (index 0 unused,
/// stored as 0). The average is evaluated by log-sum-exp so arbitrarily long
/// times cannot overflow.
std::vector<double> lambda1_of_t(MapKind kind, double K, int n_traj, int t_max,
                                 std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

/// C(l) of the centered kick potential along long trajectories started from
/// uniform points; stderr across trajectories.
CorrelationSeries potential_correlation(MapKind kind, double K, int l_max, int n_traj,
                                        long traj_len, std::uint64_t seed,
                                        ExecPolicy policy = ExecPolicy::Parallel);

/// R = C(0)/2 + sum_{l>=1} C(l); flags a tail that has not decayed below
/// 3 stderr over the last quarter of the lags.
ActionDiffusion action_diffusion(const CorrelationSeries& corr);

/// Histogram bin width for P(DeltaS): min(hbar/8, range/512), so the phase
/// exp(i DeltaS/hbar) stays resolved.
double delta_s_bin_width(double hbar, double range);

/// P(DeltaS) for one packet: p0 ~ exp[-(p0-p0c)^2/(hbar/xi)^2] at fixed r0,
/// DeltaS = eps * sum_{t'=0}^{t-1} v(r(t')) along the unperturbed trajectory.
DeltaSHistogram action_difference_distribution(MapKind kind, double K, double sigma, double hbar,
                                               const GaussianPacketSpec& packet, int t,
                                               long n_samples, std::uint64_t seed,
                                               ExecPolicy policy = ExecPolicy::Parallel);

/// Pooled P(DeltaS) over packet centers drawn uniformly on [0,2pi)^2 (the
/// initial-state average of the FGR discussion).
DeltaSHistogram ensemble_action_distribution(MapKind kind, double K, double sigma, double hbar,
                                             double xi, int n_centers, long samples_per_center,
                                             int t, std::uint64_t seed,
                                             ExecPolicy policy = ExecPolicy::Parallel);

/// M_sc = |sum_bins P e^{i DeltaS/hbar} dDeltaS|^2. Throws AliasingError when
/// the bin width exceeds hbar.
double semiclassical_echo_from_distribution(const DeltaSHistogram& hist, double hbar);

/// (1/t) sum_{t'=0}^{t-1} v(r(t')) along the trajectory from x0.
double time_average_observable(MapKind kind, double K, const PhasePoint& x0, int t);

}  // namespace qle
