#pragma once

#include <utility>
#include <vector>

#include "qle/series.hpp"

namespace qle {

/// FGR decay M(t) = exp(-2 sigma^2 R t).
PredictionCurve fgr_prediction(double sigma, double R, const std::vector<double>& times);

/// Perturbation-independent decay M(t) = M0 exp[-(Lambda1(t) t - Lambda1(t0) t0)],
/// anchored at (t0, M0). lambda1 is indexed by integer kick count; requested
/// times must be covered.
struct Anchor {
    int t0 = 1;
    double M0 = 1.0;
};

PredictionCurve lyapunov_prediction(const std::vector<double>& lambda1,
                                    const std::vector<double>& times, const Anchor& anchor);

/// Regular 1D decay M(t) = c0 (1 + xi^2 t^2)^{-1/2} exp[-Gamma t^2/(1+xi^2 t^2)].
PredictionCurve regular_1d_prediction(double Gamma, double xi_rate, double c0,
                                      const std::vector<double>& times);

/// Gamma = 0.5 (eps w_p dU/dp0 / hbar)^2, xi = |eps w_p^2 d2U/dp0^2 / (2 hbar)|.
std::pair<double, double> gamma_xi_from_derivatives(double epsilon, double w_p, double hbar,
                                                    double dU_dp, double d2U_dp2);

/// Many-mode rate R = (<s^2> - <s>^2)/(2t) from integrated-perturbation samples.
double many_mode_rate(const std::vector<double>& integrated_samples, double t);

}  // namespace qle
