#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qle {

/// Time-indexed echo values M(t) with ensemble statistics. Kicked maps use
/// integer kick counts stored as doubles; the Ising chain uses a continuous
/// grid.
struct EchoSeries {
    std::vector<double> times;
    std::vector<double> M;
    std::vector<double> stderr_;
    int ensemble_size = 1;
    std::map<std::string, std::string> metadata;

    std::size_t size() const { return times.size(); }
};

enum class Regime { FGR, Lyapunov, Regular1D, ManyModeFGR };

std::string regime_name(Regime r);

struct PredictionCurve {
    std::vector<double> times;
    std::vector<double> M_pred;
    Regime regime = Regime::FGR;
    std::map<std::string, std::string> parameters;

    /// View as an EchoSeries (stderr 0) for the analysis helpers.
    EchoSeries as_series() const;
};

/// Autocorrelation C(l) of the perturbation observable along trajectories.
struct CorrelationSeries {
    std::vector<double> C;        // l = 0..l_max
    std::vector<double> stderr_;  // across trajectories
    int n_samples = 0;            // trajectories
    std::string model;
    double K = 0.0;
};

struct ActionDiffusion {
    double R = 0.0;
    bool tail_warning = false;  // set when |C(l)| has not decayed below noise
};

/// Histogram of the action difference DeltaS, with streamed moments kept
/// alongside the binned counts so binning can be cross-checked.
struct DeltaSHistogram {
    double lo = 0.0;
    double bin_width = 0.0;
    std::vector<double> counts;
    std::uint64_t n_samples = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    double mean() const { return n_samples ? sum / static_cast<double>(n_samples) : 0.0; }
    double variance() const {
        if (!n_samples) return 0.0;
        double m = mean();
        return sum_sq / static_cast<double>(n_samples) - m * m;
    }
    double binned_mean() const;
    double binned_variance() const;
};

struct DecayFit {
    double rate = 0.0;       // -slope of ln M vs t
    double intercept = 0.0;  // ln M at t = 0
    double t_start = 0.0;
    double t_end = 0.0;
    double rms_residual = 0.0;  // in ln M units
    int n_points = 0;
};

enum class Normalization { None, PerSpin };

struct DeviationReport {
    double D = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    Normalization normalization = Normalization::None;
    int n_points = 0;
};

struct ScanResult {
    std::vector<double> controls;
    std::vector<double> D;
    double threshold = 0.0;
    std::optional<double> detected;  // N_c / N_d; nullopt when all points sit on one side
};

}  // namespace qle
