#include "qle/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "qle/common.hpp"

namespace qle {

namespace {

bool in_window(double t, const Window& w) {
    return t >= w.t_start - 1e-12 && t <= w.t_end + 1e-12;
}

}  // namespace

double interp_ln(const EchoSeries& series, double t) {
    const auto& ts = series.times;
    if (ts.empty() || t < ts.front() - 1e-9 || t > ts.back() + 1e-9)
        throw WindowError("interp_ln: time outside series range");
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (i >= ts.size()) i = ts.size() - 1;
    if (std::abs(ts[i] - t) < 1e-9 || i == 0) return std::log(series.M[i]);
    const double t0 = ts[i - 1], t1 = ts[i];
    const double y0 = std::log(series.M[i - 1]), y1 = std::log(series.M[i]);
    return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
}

DecayFit fit_exponential(const EchoSeries& series, const Window& window) {
    if (window.t_start >= window.t_end)
        throw WindowError("fit_exponential: t_start must be < t_end");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!in_window(series.times[i], window)) continue;
        if (series.M[i] <= 0.0)
            throw WindowError("fit_exponential: nonpositive M inside fit window");
        ts.push_back(series.times[i]);
        ys.push_back(std::log(series.M[i]));
    }
    if (ts.size() < 4) throw WindowError("fit_exponential: fewer than 4 points in window");
    const double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double intercept = (sy - slope * st) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = ys[i] - (intercept + slope * ts[i]);
        ss += r * r;
    }
    DecayFit fit;
    fit.rate = -slope;
    fit.intercept = intercept;
    fit.t_start = window.t_start;
    fit.t_end = window.t_end;
    fit.rms_residual = std::sqrt(ss / n);
    fit.n_points = static_cast<int>(ts.size());
    return fit;
}

DeviationReport deviation_D(const EchoSeries& exact, const EchoSeries& pred, const Window& window,
                            Normalization norm, double n_spins) {
    std::vector<double> x;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double t = exact.times[i];
        if (!in_window(t, window)) continue;
        if (exact.M[i] <= 0.0) throw WindowError("deviation_D: nonpositive exact M in window");
        double d = std::abs(std::log(exact.M[i]) - interp_ln(pred, t));
        if (norm == Normalization::PerSpin) d /= n_spins;
        x.push_back(d);
    }
    if (x.size() < 2) throw WindowError("deviation_D: need at least 2 points in window");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    DeviationReport rep;
    rep.D = std::sqrt(ss / static_cast<double>(x.size()));
    rep.t_start = window.t_start;
    rep.t_end = window.t_end;
    rep.normalization = norm;
    rep.n_points = static_cast<int>(x.size());
    return rep;
}

std::optional<double> detect_td(const EchoSeries& exact, const EchoSeries& pred, double delta_ln,
                                int w_sustain) {
    int run = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double t = exact.times[i];
        if (t <= 0.0 || exact.M[i] <= 0.0) continue;
        double dev;
        try {
            dev = std::abs(std::log(exact.M[i]) - interp_ln(pred, t));
        } catch (const WindowError&) {
            break;  // prediction series ended
        }
        if (dev > delta_ln) {
            if (++run >= w_sustain) return exact.times[i - (w_sustain - 1)];
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

double t_n_formula(double N, double sigma) {
    if (N < 2.0) throw std::domain_error("t_n_formula: N must be >= 2");
    if (sigma <= 0.0) throw std::domain_error("t_n_formula: sigma must be positive");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 45.0 * std::log(N) / (sigma * sigma * pi2 * pi2);
}

ScanResult detect_threshold(const std::vector<std::pair<double, double>>& scan,
                            std::optional<double> D_threshold) {
    if (scan.size() < 3) throw std::invalid_argument("detect_threshold: need >= 3 scan points");
    std::vector<std::pair<double, double>> pts = scan;
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].first == pts[i - 1].first)
            throw std::invalid_argument("detect_threshold: duplicate control values");
    ScanResult res;
    for (const auto& [c, d] : pts) {
        res.controls.push_back(c);
        res.D.push_back(d);
    }
    if (D_threshold) {
        res.threshold = *D_threshold;
    } else {
        // 2x the median D over the top quartile of control values.
        const std::size_t q = std::max<std::size_t>(1, pts.size() / 4);
        std::vector<double> top;
        for (std::size_t i = pts.size() - q; i < pts.size(); ++i) top.push_back(pts[i].second);
        std::sort(top.begin(), top.end());
        const double median = top.size() % 2 ? top[top.size() / 2]
                                             : 0.5 * (top[top.size() / 2 - 1] +
                                                      top[top.size() / 2]);
        res.threshold = 2.0 * median;
    }
    std::optional<double> largest;
    std::size_t n_viol = 0;
    for (std::size_t i = 0; i < res.controls.size(); ++i) {
        if (res.D[i] > res.threshold) {
            ++n_viol;
            largest = res.controls[i];
        }
    }
    if (n_viol == 0 || n_viol == res.controls.size()) return res;  // all-below / all-above
    res.detected = largest;
    return res;
}

std::pair<double, double> saturation_check(const EchoSeries& series, double N,
                                           const Window& window) {
    double mean = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!in_window(series.times[i], window)) continue;
        mean += series.M[i];
        ++n;
    }
    if (n == 0) throw WindowError("saturation_check: empty window");
    mean /= n;
    return {mean, mean * N};
}

double scaling_collapse(const std::vector<std::pair<double, EchoSeries>>& series,
                        const Window& window) {
    if (series.size() < 2) throw std::invalid_argument("scaling_collapse: need >= 2 series");
    double lo = window.t_start, hi = window.t_end;
    for (const auto& [np, s] : series) {
        if (s.times.empty()) throw WindowError("scaling_collapse: empty series");
        lo = std::max(lo, s.times.front());
        hi = std::min(hi, s.times.back());
    }
    if (lo >= hi) throw WindowError("scaling_collapse: windows are disjoint");
    const int n_grid = 200;
    double dev = 0.0;
    for (int g = 0; g <= n_grid; ++g) {
        const double t = lo + (hi - lo) * g / n_grid;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double yi = interp_ln(series[i].second, t) / series[i].first;
            for (std::size_t j = i + 1; j < series.size(); ++j) {
                const double yj = interp_ln(series[j].second, t) / series[j].first;
                dev = std::max(dev, std::abs(yi - yj));
            }
        }
    }
    return dev;
}

Window suggest_fgr_window(double t_d, double t_n) {
    return {2.0, std::min(t_d, 0.8 * t_n)};
}

}  // namespace qle
