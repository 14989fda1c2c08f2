#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qle/series.hpp"

namespace qle {

struct Window {
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Least squares on ln M vs t over the window; rate = -slope. Requires at
/// least 4 points with M > 0 (WindowError otherwise).
DecayFit fit_exponential(const EchoSeries& series, const Window& window);

/// D = population std of x_n = |ln M_e(t_n) - ln M_pred(t_n)| over the window
/// (divided by n_spins under PerSpin). The prediction is linearly interpolated
/// in ln M onto the exact series' grid when the grids differ.
DeviationReport deviation_D(const EchoSeries& exact, const EchoSeries& pred, const Window& window,
                            Normalization norm = Normalization::None, double n_spins = 1.0);

/// First t at which |ln M_e - ln M_pred| stays above delta_ln for w_sustain
/// consecutive points; nullopt when never triggered.
std::optional<double> detect_td(const EchoSeries& exact, const EchoSeries& pred,
                                double delta_ln = 0.5, int w_sustain = 3);

/// t_n = 45 ln N / (sigma^2 pi^4): when the FGR decay reaches 1/N.
double t_n_formula(double N, double sigma);

/// Largest control value whose D exceeds the threshold. Default threshold:
/// 2x the median D over the top quartile of control values. detected is empty
/// when every point falls on one side.
ScanResult detect_threshold(const std::vector<std::pair<double, double>>& scan,
                            std::optional<double> D_threshold = std::nullopt);

/// Mean of M over the window and its ratio to 1/N.
std::pair<double, double> saturation_check(const EchoSeries& series, double N,
                                           const Window& window);

/// Interpolates ln M / N_p onto the intersection grid; returns the maximum
/// pairwise absolute difference over the window.
double scaling_collapse(const std::vector<std::pair<double, EchoSeries>>& series,
                        const Window& window);

/// FGR fit-window suggestion [2, min(t_d, 0.8 t_n)].
Window suggest_fgr_window(double t_d, double t_n);

/// ln M of pred at time t by linear interpolation (WindowError outside range).
double interp_ln(const EchoSeries& series, double t);

}  // namespace qle
