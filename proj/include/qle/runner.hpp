#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qle/analysis.hpp"
#include "qle/common.hpp"
#include "qle/series.hpp"

namespace qle {

/// Resolved experiment description. One struct covers every subcommand; the
/// validator checks the fields the requested kind actually uses. Every value
/// here is stamped into the output metadata.
struct ExperimentConfig {
    std::string kind;  // echo-kicked | oracle-classical | echo-ising | scan | fit
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    bool force = false;
    ExecPolicy policy = ExecPolicy::Parallel;

    // kicked models
    std::string model = "sawtooth";  // sawtooth | rotator
    double K = 2.0;
    std::vector<double> sigmas = {0.5};
    std::vector<int> N_values = {1024};
    int ensemble = 100;
    int t_max = 40;
    double xi = 0.0;             // 0 -> sqrt(hbar_eff)
    std::string prediction;      // "", fgr, lyapunov

    // classical oracles
    std::string quantity = "correlation";  // correlation | rfactor | lyapunov | lambda1 | action-dist
    int l_max = 20;
    int n_traj = 32;
    long traj_len = 100000;

    // Ising chain
    std::vector<int> Np_values = {400, 800, 1600};
    double lambda0 = 0.96;
    double lambda = 0.99;
    double t_max_ising = 60.0;
    bool with_ed = false;
    int N_ref = 6400;

    // scans
    std::string scan_type;  // kicked-D | kicked-td | ising-D | ising-nd-dlambda
    std::vector<double> dlambdas = {0.005, 0.01, 0.02, 0.04};
    double window_lo = 1.0;
    double window_hi = 4.0;
    double delta_ln = 0.5;
    int w_sustain = 3;

    // fit
    std::string input;
    double fit_lo = 2.0;
    double fit_hi = 8.0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ExperimentConfig& config);

struct RunResult {
    std::vector<std::string> files;
    std::string manifest_path;
};

/// Executes the experiment, writes one CSV per series plus a JSON manifest in
/// out_dir. Deterministic for a given config+seed. Refuses to overwrite
/// existing outputs unless force is set.
RunResult run(const ExperimentConfig& config);

struct ReportResult {
    std::string table;                    // human-readable summary
    std::vector<std::string> dat_files;   // gnuplot-ready two-column files
};

/// Summarizes all runs recorded in a manifest: fitted vs predicted rates,
/// detected thresholds, D values. Missing series raise std::runtime_error.
ReportResult report(const std::string& manifest_path);

}  // namespace qle
