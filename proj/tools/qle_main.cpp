#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qle/runner.hpp"

namespace fs = std::filesystem;

#ifndef QLE_RECIPE_DIR_DEFAULT
#define QLE_RECIPE_DIR_DEFAULT "share/recipes"
#endif

namespace {

std::string recipe_dir() {
    if (const char* env = std::getenv("QLE_RECIPE_DIR")) return env;
    return QLE_RECIPE_DIR_DEFAULT;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("QLE_OUT_DIR")) return env;
    return "qle-out";
}

// Flat key=value config files ('#' comments). Keys are the long option names
// without dashes; `kind` names the subcommand.
std::vector<std::pair<std::string, std::string>> load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line without '=': " + line);
        kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

// Expand a config file into CLI tokens, skipping keys the user already gave
// on the command line (flags win over the file).
std::vector<std::string> expand_config(const std::string& path,
                                       const std::vector<std::string>& user_args,
                                       std::string* kind_out) {
    std::vector<std::string> tokens;
    for (const auto& [key, value] : load_config(path)) {
        if (key == "kind") {
            if (kind_out) *kind_out = value;
            continue;
        }
        const std::string flag = "--" + key;
        if (std::find(user_args.begin(), user_args.end(), flag) != user_args.end()) continue;
        if (value == "true" || value == "false") {
            if (value == "true") tokens.push_back(flag);
        } else {
            tokens.push_back(flag);
            tokens.push_back(value);
        }
    }
    return tokens;
}

void add_run_options(CLI::App* cmd, qle::ExperimentConfig& cfg) {
    cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Global RNG seed")->capture_default_str();
    cmd->add_flag("--force", cfg.force, "Overwrite existing outputs");
    cmd->add_flag_callback("--serial", [&cfg] { cfg.policy = qle::ExecPolicy::Serial; },
                           "Run kernels without OpenMP");
    cmd->add_option("--model", cfg.model, "sawtooth | rotator")->capture_default_str();
    cmd->add_option("--K", cfg.K, "Kick strength")->capture_default_str();
    cmd->add_option("--sigma", cfg.sigmas, "Perturbation strengths sigma = eps/hbar")
        ->delimiter(',');
    cmd->add_option("--N", cfg.N_values, "Hilbert dimensions")->delimiter(',');
    cmd->add_option("--ensemble", cfg.ensemble, "Initial states per point")
        ->capture_default_str();
    cmd->add_option("--tmax", cfg.t_max, "Kick count horizon")->capture_default_str();
    cmd->add_option("--xi", cfg.xi, "Packet dispersion (0 = sqrt(hbar_eff))")
        ->capture_default_str();
    cmd->add_option("--prediction", cfg.prediction, "Also emit a prediction: fgr | lyapunov");
    cmd->add_option("--quantity", cfg.quantity,
                    "classical oracle: correlation | rfactor | lyapunov | lambda1 | action-dist");
    cmd->add_option("--lmax", cfg.l_max, "Correlation lags")->capture_default_str();
    cmd->add_option("--ntraj", cfg.n_traj, "Trajectories")->capture_default_str();
    cmd->add_option("--trajlen", cfg.traj_len, "Steps per trajectory")->capture_default_str();
    cmd->add_option("--Np", cfg.Np_values, "Ising spin counts")->delimiter(',');
    cmd->add_option("--lambda0", cfg.lambda0, "Initial field")->capture_default_str();
    cmd->add_option("--lambda", cfg.lambda, "Evolving field")->capture_default_str();
    cmd->add_option("--tmax-ising", cfg.t_max_ising, "Ising time horizon")
        ->capture_default_str();
    cmd->add_flag("--with-ed", cfg.with_ed, "Also run the ED oracle (N_p <= 12)");
    cmd->add_option("--Nref", cfg.N_ref, "Large-N_p reference for Ising scans")
        ->capture_default_str();
    cmd->add_option("--scan-type", cfg.scan_type,
                    "kicked-D | kicked-td | ising-D | ising-nd-dlambda");
    cmd->add_option("--dlambda", cfg.dlambdas, "Critical distances for ising-nd-dlambda")
        ->delimiter(',');
    cmd->add_option("--window-lo", cfg.window_lo, "Analysis window start")
        ->capture_default_str();
    cmd->add_option("--window-hi", cfg.window_hi, "Analysis window end")->capture_default_str();
    cmd->add_option("--delta-ln", cfg.delta_ln, "t_d detection threshold (ln units)")
        ->capture_default_str();
    cmd->add_option("--sustain", cfg.w_sustain, "t_d sustained points")->capture_default_str();
    cmd->add_option("--input", cfg.input, "Input CSV for fit");
    cmd->add_option("--fit-lo", cfg.fit_lo, "Fit window start")->capture_default_str();
    cmd->add_option("--fit-hi", cfg.fit_hi, "Fit window end")->capture_default_str();
}

int execute(qle::ExperimentConfig& cfg, const std::string& kind) {
    cfg.kind = kind;
    auto result = qle::run(cfg);
    for (const auto& f : result.files) std::cout << f << "\n";
    std::cout << "manifest: " << result.manifest_path << "\n";
    return 0;
}

const std::pair<const char*, const char*> kRunSubcommands[] = {
    {"echo-kicked", "Exact Loschmidt echo of a quantized kicked map"},
    {"oracle-classical", "Classical trajectory oracles (C(l), R, lambda_L, Lambda1)"},
    {"echo-ising", "Free-fermion Ising echo (optionally with the ED oracle)"},
    {"scan", "Deviation/threshold scans (N_c, N_d, t_d)"},
    {"fit", "Exponential fit of a stored echo CSV"},
};

bool is_run_subcommand(const std::string& s) {
    for (const auto& [name, help] : kRunSubcommands)
        if (s == name) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    // `qle recipe <name> [overrides]` resolves the bundled config and becomes
    // the recipe's own subcommand; an explicit `--config FILE` on a run
    // subcommand expands the same way. Explicit flags win over file values.
    try {
        if (!args.empty() && args[0] == "recipe") {
            if (args.size() < 2) {
                std::cerr << "usage: qle recipe <fig1..fig10> [overrides]\n";
                return 1;
            }
            const fs::path ini = fs::path(recipe_dir()) / (args[1] + ".ini");
            if (!fs::exists(ini)) {
                std::cerr << "recipe not found: " << ini
                          << " (set QLE_RECIPE_DIR to the recipe directory)\n";
                return 1;
            }
            std::vector<std::string> overrides(args.begin() + 2, args.end());
            std::string kind;
            std::vector<std::string> tokens = expand_config(ini.string(), overrides, &kind);
            if (kind.empty()) {
                std::cerr << "recipe " << ini << " has no kind= entry\n";
                return 1;
            }
            args.clear();
            args.push_back(kind);
            args.insert(args.end(), tokens.begin(), tokens.end());
            args.insert(args.end(), overrides.begin(), overrides.end());
        } else if (!args.empty() && is_run_subcommand(args[0])) {
            auto it = std::find(args.begin(), args.end(), "--config");
            if (it != args.end()) {
                if (it + 1 == args.end()) {
                    std::cerr << "--config needs a file argument\n";
                    return 1;
                }
                const std::string path = *(it + 1);
                std::vector<std::string> rest(args.begin() + 1, it);
                rest.insert(rest.end(), it + 2, args.end());
                std::string kind = args[0];
                std::vector<std::string> tokens = expand_config(path, rest, nullptr);
                args.clear();
                args.push_back(kind);
                args.insert(args.end(), tokens.begin(), tokens.end());
                args.insert(args.end(), rest.begin(), rest.end());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Loschmidt-echo laboratory for quantized kicked maps and the "
                 "transverse-field Ising chain"};
    app.require_subcommand(1);
    qle::ExperimentConfig cfg;
    cfg.out_dir = default_out_dir();

    for (const auto& [name, help] : kRunSubcommands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_run_options(cmd, cfg);
        cmd->callback([&cfg, name = std::string(name)] { execute(cfg, name); });
    }

    std::string manifest;
    CLI::App* rep = app.add_subcommand("report", "Summarize a manifest of runs");
    rep->add_option("manifest", manifest, "Path to manifest.json")->required();
    rep->callback([&manifest] {
        auto r = qle::report(manifest);
        std::cout << r.table;
        for (const auto& f : r.dat_files) std::cout << "wrote " << f << "\n";
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
