#include "qle/series.hpp"

namespace qle {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::FGR: return "fgr";
        case Regime::Lyapunov: return "lyapunov";
        case Regime::Regular1D: return "regular1d";
        case Regime::ManyModeFGR: return "many-mode-fgr";
    }
    return "unknown";
}

EchoSeries PredictionCurve::as_series() const {
    EchoSeries s;
    s.times = times;
    s.M = M_pred;
    s.stderr_.assign(times.size(), 0.0);
    s.ensemble_size = 1;
    for (const auto& [k, v] : parameters) s.metadata[k] = v;
    s.metadata["regime"] = regime_name(regime);
    return s;
}

double DeltaSHistogram::binned_mean() const {
    if (!n_samples) return 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k)
        m += counts[k] * (lo + (static_cast<double>(k) + 0.5) * bin_width);
    return m / static_cast<double>(n_samples);
}

double DeltaSHistogram::binned_variance() const {
    if (!n_samples) return 0.0;
    const double m = binned_mean();
    double v = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double c = lo + (static_cast<double>(k) + 0.5) * bin_width - m;
        v += counts[k] * c * c;
    }
    return v / static_cast<double>(n_samples);
}

}  // namespace qle
