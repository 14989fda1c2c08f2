#include "qle/semiclassics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qle {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

PredictionCurve fgr_prediction(double sigma, double R, const std::vector<double>& times) {
    if (R < 0.0) throw std::invalid_argument("fgr_prediction: R must be nonnegative");
    PredictionCurve c;
    c.regime = Regime::FGR;
    c.times = times;
    c.M_pred.resize(times.size());
    const double rate = 2.0 * sigma * sigma * R;
    for (std::size_t i = 0; i < times.size(); ++i) c.M_pred[i] = std::exp(-rate * times[i]);
    c.parameters["sigma"] = fmt(sigma);
    c.parameters["R"] = fmt(R);
    c.parameters["rate"] = fmt(rate);
    return c;
}

PredictionCurve lyapunov_prediction(const std::vector<double>& lambda1,
                                    const std::vector<double>& times, const Anchor& anchor) {
    if (anchor.t0 < 1 || anchor.t0 >= static_cast<int>(lambda1.size()))
        throw std::out_of_range("lyapunov_prediction: anchor time outside Lambda1 series");
    PredictionCurve c;
    c.regime = Regime::Lyapunov;
    c.times = times;
    c.M_pred.resize(times.size());
    const double base = lambda1[anchor.t0] * anchor.t0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const int ti = static_cast<int>(std::llround(t));
        if (std::abs(t - ti) > 1e-9 || ti < 1 || ti >= static_cast<int>(lambda1.size()))
            throw std::out_of_range("lyapunov_prediction: Lambda1 missing at requested time");
        c.M_pred[i] = anchor.M0 * std::exp(-(lambda1[ti] * ti - base));
    }
    c.parameters["t0"] = std::to_string(anchor.t0);
    c.parameters["M0"] = fmt(anchor.M0);
    return c;
}

PredictionCurve regular_1d_prediction(double Gamma, double xi_rate, double c0,
                                      const std::vector<double>& times) {
    if (Gamma < 0.0 || xi_rate < 0.0)
        throw std::invalid_argument("regular_1d_prediction: Gamma and xi must be nonnegative");
    PredictionCurve c;
    c.regime = Regime::Regular1D;
    c.times = times;
    c.M_pred.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t2 = times[i] * times[i];
        const double den = 1.0 + xi_rate * xi_rate * t2;
        c.M_pred[i] = c0 * std::exp(-Gamma * t2 / den) / std::sqrt(den);
    }
    c.parameters["Gamma"] = fmt(Gamma);
    c.parameters["xi_rate"] = fmt(xi_rate);
    c.parameters["c0"] = fmt(c0);
    return c;
}

std::pair<double, double> gamma_xi_from_derivatives(double epsilon, double w_p, double hbar,
                                                    double dU_dp, double d2U_dp2) {
    const double g = epsilon * w_p * dU_dp / hbar;
    const double Gamma = 0.5 * g * g;
    const double xi_rate = std::abs(epsilon * w_p * w_p * d2U_dp2 / (2.0 * hbar));
    return {Gamma, xi_rate};
}

double many_mode_rate(const std::vector<double>& integrated_samples, double t) {
    if (t == 0.0) throw std::invalid_argument("many_mode_rate: undefined at t = 0");
    if (integrated_samples.empty())
        throw std::invalid_argument("many_mode_rate: no samples");
    double mean = 0.0;
    for (double s : integrated_samples) mean += s;
    mean /= static_cast<double>(integrated_samples.size());
    double var = 0.0;
    for (double s : integrated_samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(integrated_samples.size());
    return var / (2.0 * t);
}

}  // namespace qle
