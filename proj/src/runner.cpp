#include "qle/runner.hpp"
#include <cstdio>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qle/classical.hpp"
#include "qle/io.hpp"
#include "qle/ising.hpp"
#include "qle/maps.hpp"
#include "qle/semiclassics.hpp"

namespace qle {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

MapKind parse_model(const std::string& name) {
    if (name == "sawtooth") return MapKind::Sawtooth;
    if (name == "rotator") return MapKind::Rotator;
    throw std::invalid_argument("model: expected sawtooth or rotator, got '" + name + "'");
}

std::string sig_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

class OutputSet {
  public:
    OutputSet(const ExperimentConfig& cfg) : cfg_(cfg) {
        fs::create_directories(cfg.out_dir);
    }

    std::string reserve(const std::string& name) {
        const std::string path = (fs::path(cfg_.out_dir) / name).string();
        if (!cfg_.force && fs::exists(path))
            throw std::runtime_error("output collision: " + path + " exists (use --force)");
        files_.push_back(path);
        return path;
    }

    void write_table(const std::string& name, CsvTable table, json run_record) {
        const std::string path = reserve(name);
        table.metadata["seed"] = std::to_string(cfg_.seed);
        table.metadata["kind"] = cfg_.kind;
        write_csv(path, table);
        run_record["file"] = name;
        records_.push_back(std::move(run_record));
    }

    RunResult finish() {
        json manifest;
        manifest["schema_version"] = 1;
        manifest["generator"] = std::string("qle ") + kVersion;
        manifest["kind"] = cfg_.kind;
        manifest["config"] = config_json(cfg_);
        manifest["runs"] = records_;
        RunResult res;
        res.manifest_path = (fs::path(cfg_.out_dir) / "manifest.json").string();
        std::ofstream os(res.manifest_path);
        os << manifest.dump(2) << "\n";
        res.files = files_;
        return res;
    }

    static json config_json(const ExperimentConfig& c) {
        json j;
        j["kind"] = c.kind;
        j["seed"] = c.seed;
        j["model"] = c.model;
        j["K"] = c.K;
        j["sigmas"] = c.sigmas;
        j["N_values"] = c.N_values;
        j["ensemble"] = c.ensemble;
        j["t_max"] = c.t_max;
        j["xi"] = c.xi;
        j["prediction"] = c.prediction;
        j["quantity"] = c.quantity;
        j["l_max"] = c.l_max;
        j["n_traj"] = c.n_traj;
        j["traj_len"] = c.traj_len;
        j["Np_values"] = c.Np_values;
        j["lambda0"] = c.lambda0;
        j["lambda"] = c.lambda;
        j["t_max_ising"] = c.t_max_ising;
        j["with_ed"] = c.with_ed;
        j["N_ref"] = c.N_ref;
        j["scan_type"] = c.scan_type;
        j["dlambdas"] = c.dlambdas;
        j["window_lo"] = c.window_lo;
        j["window_hi"] = c.window_hi;
        j["delta_ln"] = c.delta_ln;
        j["w_sustain"] = c.w_sustain;
        j["input"] = c.input;
        j["fit_lo"] = c.fit_lo;
        j["fit_hi"] = c.fit_hi;
        return j;
    }

  private:
    const ExperimentConfig& cfg_;
    std::vector<std::string> files_;
    std::vector<json> records_;
};

void run_echo_kicked(const ExperimentConfig& cfg, OutputSet& out) {
    const MapKind kind = parse_model(cfg.model);
    const KickedModel model{kind, cfg.K};
    for (int N : cfg.N_values) {
        auto grid = make_shared_grid(N);
        for (double sigma : cfg.sigmas) {
            EchoSeries s = ensemble_echo(model, sigma, grid, cfg.ensemble, cfg.seed, cfg.t_max,
                                         cfg.xi, cfg.policy);
            json rec{{"type", "echo"}, {"N", N}, {"sigma", sigma}};
            out.write_table("echo_" + cfg.model + "_N" + std::to_string(N) + "_sigma" +
                                sig_tag(sigma) + ".csv",
                            echo_to_table(s), rec);
        }
    }
    if (cfg.prediction.empty()) return;
    std::vector<double> times(cfg.t_max + 1);
    for (int t = 0; t <= cfg.t_max; ++t) times[t] = t;
    if (cfg.prediction == "fgr") {
        double R;
        if (kind == MapKind::Sawtooth) {
            R = std::pow(std::numbers::pi, 4) / 90.0;  // C(0)=pi^4/45, C(l!=0)=0 at integer K
        } else {
            auto corr = potential_correlation(kind, cfg.K, cfg.l_max, cfg.n_traj, cfg.traj_len,
                                              cfg.seed + 1, cfg.policy);
            R = action_diffusion(corr).R;
        }
        for (double sigma : cfg.sigmas) {
            PredictionCurve c = fgr_prediction(sigma, R, times);
            json rec{{"type", "prediction"}, {"regime", "fgr"}, {"sigma", sigma}, {"R", R}};
            out.write_table("pred_fgr_" + cfg.model + "_sigma" + sig_tag(sigma) + ".csv",
                            prediction_to_table(c), rec);
        }
    } else if (cfg.prediction == "lyapunov") {
        auto lam1 = lambda1_of_t(kind, cfg.K, std::max(cfg.n_traj, 100), cfg.t_max, cfg.seed + 2,
                                 cfg.policy);
        for (int N : cfg.N_values) {
            auto grid = make_shared_grid(N);
            for (double sigma : cfg.sigmas) {
                EchoSeries s = ensemble_echo({kind, cfg.K}, sigma, grid, cfg.ensemble, cfg.seed,
                                             cfg.t_max, cfg.xi, cfg.policy);
                std::vector<double> pt(times.begin() + 1, times.end());
                PredictionCurve c = lyapunov_prediction(lam1, pt, Anchor{1, s.M[1]});
                json rec{{"type", "prediction"}, {"regime", "lyapunov"}, {"N", N},
                         {"sigma", sigma}};
                out.write_table("pred_lyapunov_" + cfg.model + "_N" + std::to_string(N) +
                                    "_sigma" + sig_tag(sigma) + ".csv",
                                prediction_to_table(c), rec);
            }
        }
    } else {
        throw std::invalid_argument("prediction: expected fgr or lyapunov, got '" +
                                    cfg.prediction + "'");
    }
}

void run_oracle_classical(const ExperimentConfig& cfg, OutputSet& out) {
    const MapKind kind = parse_model(cfg.model);
    if (cfg.quantity == "correlation" || cfg.quantity == "rfactor") {
        auto corr = potential_correlation(kind, cfg.K, cfg.l_max, cfg.n_traj, cfg.traj_len,
                                          cfg.seed, cfg.policy);
        CsvTable t = correlation_to_table(corr);
        json rec{{"type", cfg.quantity}};
        if (cfg.quantity == "rfactor") {
            auto R = action_diffusion(corr);
            t.metadata["R"] = format_double(R.R);
            t.metadata["tail_warning"] = R.tail_warning ? "1" : "0";
            rec["R"] = R.R;
        }
        out.write_table("correlation_" + cfg.model + "_K" + sig_tag(cfg.K) + ".csv", t, rec);
    } else if (cfg.quantity == "lyapunov") {
        auto est = lyapunov_exponent(kind, cfg.K, cfg.n_traj, static_cast<int>(cfg.traj_len),
                                     cfg.seed, cfg.policy);
        CsvTable t;
        t.metadata["model"] = cfg.model;
        t.metadata["K"] = format_double(cfg.K);
        t.metadata["warning"] = est.warning ? "1" : "0";
        t.columns = {"lambda_L", "stderr"};
        t.data = {std::vector<double>{est.value}, std::vector<double>{est.stderr_}};
        json rec;
        rec["type"] = "lyapunov";
        rec["value"] = est.value;
        out.write_table("lyapunov_" + cfg.model + "_K" + sig_tag(cfg.K) + ".csv", t, rec);
    } else if (cfg.quantity == "lambda1") {
        auto lam = lambda1_of_t(kind, cfg.K, cfg.n_traj, cfg.t_max, cfg.seed, cfg.policy);
        CsvTable t;
        t.metadata["model"] = cfg.model;
        t.metadata["K"] = format_double(cfg.K);
        t.columns = {"t", "lambda1"};
        std::vector<double> ts, vs;
        for (int i = 1; i < static_cast<int>(lam.size()); ++i) {
            ts.push_back(i);
            vs.push_back(lam[i]);
        }
        t.data = {ts, vs};
        out.write_table("lambda1_" + cfg.model + "_K" + sig_tag(cfg.K) + ".csv", t,
                        json{{"type", "lambda1"}});
    } else if (cfg.quantity == "action-dist") {
        const double hbar = kTwoPi / cfg.N_values.at(0);
        const double sigma = cfg.sigmas.at(0);
        auto hist = ensemble_action_distribution(kind, cfg.K, sigma, hbar, cfg.xi, cfg.ensemble,
                                                 cfg.traj_len / std::max(cfg.ensemble, 1),
                                                 cfg.t_max, cfg.seed, cfg.policy);
        CsvTable t = histogram_to_table(hist);
        const double msc = semiclassical_echo_from_distribution(hist, hbar);
        t.metadata["M_sc"] = format_double(msc);
        t.metadata["t"] = std::to_string(cfg.t_max);
        t.metadata["sigma"] = format_double(sigma);
        t.metadata["hbar_eff"] = format_double(hbar);
        out.write_table("action_dist_" + cfg.model + "_t" + std::to_string(cfg.t_max) + ".csv", t,
                        json{{"type", "action-dist"}, {"M_sc", msc}});
    } else {
        throw std::invalid_argument("quantity: unknown oracle '" + cfg.quantity + "'");
    }
}

void run_echo_ising(const ExperimentConfig& cfg, OutputSet& out) {
    for (int np : cfg.Np_values) {
        IsingQuench q{np, cfg.lambda0, cfg.lambda};
        auto times = default_time_grid(q, cfg.t_max_ising);
        EchoSeries s = ising_echo(q, times, cfg.policy);
        out.write_table("echo_ising_Np" + std::to_string(np) + ".csv", echo_to_table(s),
                        json{{"type", "echo"}, {"Np", np}});
        if (cfg.with_ed && np <= 12) {
            EchoSeries e = ed_oracle_echo(q, times);
            out.write_table("echo_ising_ed_Np" + std::to_string(np) + ".csv", echo_to_table(e),
                            json{{"type", "echo-ed"}, {"Np", np}});
        }
    }
}

// D(N) for kicked maps in the Lyapunov regime: deviation from the
// slope-lambda_L line anchored at the window start.
std::vector<std::pair<double, double>> kicked_D_scan(const ExperimentConfig& cfg) {
    const MapKind kind = parse_model(cfg.model);
    const double sigma = cfg.sigmas.at(0);
    const double lam = sawtooth_lyapunov(cfg.K);
    std::vector<std::pair<double, double>> scan;
    for (int N : cfg.N_values) {
        auto grid = make_shared_grid(N);
        EchoSeries s = ensemble_echo({kind, cfg.K}, sigma, grid, cfg.ensemble, cfg.seed,
                                     cfg.t_max, cfg.xi, cfg.policy);
        const int t0 = static_cast<int>(cfg.window_lo);
        std::vector<double> pt;
        for (int t = t0; t <= static_cast<int>(cfg.window_hi); ++t) pt.push_back(t);
        std::vector<double> lam1(cfg.t_max + 1, lam);
        PredictionCurve pred = lyapunov_prediction(lam1, pt, Anchor{t0, s.M[t0]});
        auto rep = deviation_D(s, pred.as_series(), {cfg.window_lo, cfg.window_hi});
        scan.emplace_back(N, rep.D);
    }
    return scan;
}

// D(N_p) for the Ising chain against the large-N_p reference curve over the
// gap window [max(1, 0.1 t_hi), t_hi], t_hi = 0.4/|lambda - 1|.
std::vector<std::pair<double, double>> ising_D_scan(double lambda0, double lambda,
                                                    const std::vector<int>& nps, int n_ref,
                                                    ExecPolicy policy, double* threshold) {
    const double t_hi = 0.4 / std::abs(lambda - 1.0);
    const double t_lo = std::max(1.0, 0.1 * t_hi);
    std::vector<double> times;
    for (double t = 0.0; t <= t_hi + 1e-9; t += 0.1) times.push_back(t);
    IsingQuench ref_q{n_ref, lambda0, lambda};
    EchoSeries ref = ising_echo(ref_q, times, policy);
    // Per-spin exact-vs-limit deviation; threshold 1.5x the limit curve's own
    // residual around its fitted exponential window.
    std::vector<std::pair<double, double>> scan;
    for (int np : nps) {
        IsingQuench q{np, lambda0, lambda};
        EchoSeries s = ising_echo(q, times, policy);
        // x(t) = |lnM_np/np - lnM_ref/n_ref|: feed deviation_D the pre-scaled logs.
        EchoSeries a = s, b = ref;
        for (std::size_t i = 0; i < times.size(); ++i) {
            a.M[i] = std::exp(std::log(s.M[i]) / np);
            b.M[i] = std::exp(std::log(ref.M[i]) / n_ref);
        }
        auto rep = deviation_D(a, b, {t_lo, t_hi});
        scan.emplace_back(np, rep.D);
    }
    if (threshold) {
        // Fit the reference's exponential stretch and measure its own residual.
        EchoSeries b = ref;
        for (std::size_t i = 0; i < times.size(); ++i)
            b.M[i] = std::exp(std::log(ref.M[i]) / n_ref);
        DecayFit fit = fit_exponential(b, {t_lo, 0.6 * t_hi});
        PredictionCurve line;
        line.times = times;
        line.M_pred.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            line.M_pred[i] = std::exp(fit.intercept - fit.rate * times[i]);
        auto rep = deviation_D(b, line.as_series(), {t_lo, t_hi});
        *threshold = 1.5 * rep.D;
    }
    return scan;
}

void run_scan(const ExperimentConfig& cfg, OutputSet& out) {
    if (cfg.scan_type == "kicked-D") {
        auto scan = kicked_D_scan(cfg);
        auto res = detect_threshold(scan);
        CsvTable t;
        t.metadata["model"] = cfg.model;
        t.metadata["K"] = format_double(cfg.K);
        t.metadata["sigma"] = format_double(cfg.sigmas.at(0));
        t.metadata["threshold"] = format_double(res.threshold);
        if (res.detected) t.metadata["N_c"] = format_double(*res.detected);
        t.columns = {"N", "D"};
        t.data = {res.controls, res.D};
        json rec{{"type", "kicked-D"}};
        if (res.detected) rec["N_c"] = *res.detected;
        out.write_table("scan_D_" + cfg.model + "_sigma" + sig_tag(cfg.sigmas.at(0)) + ".csv", t,
                        rec);
    } else if (cfg.scan_type == "kicked-td") {
        const MapKind kind = parse_model(cfg.model);
        const double sigma = cfg.sigmas.at(0);
        const double rate = sigma * sigma * std::pow(std::numbers::pi, 4) / 45.0;
        std::vector<double> Ns, tds, tns;
        for (int N : cfg.N_values) {
            auto grid = make_shared_grid(N);
            EchoSeries s = ensemble_echo({kind, cfg.K}, sigma, grid, cfg.ensemble, cfg.seed,
                                         cfg.t_max, cfg.xi, cfg.policy);
            const double tn = t_n_formula(N, sigma);
            // FGR line with the theoretical slope and intercept fitted over
            // the first half of the decay window.
            double ic = 0.0;
            int n = 0;
            for (int t = 2; t <= static_cast<int>(0.5 * tn) && t <= cfg.t_max; ++t) {
                ic += std::log(s.M[t]) + rate * t;
                ++n;
            }
            ic /= std::max(n, 1);
            PredictionCurve line;
            line.times = s.times;
            line.M_pred.resize(s.times.size());
            for (std::size_t i = 0; i < s.times.size(); ++i)
                line.M_pred[i] = std::exp(ic - rate * s.times[i]);
            auto td = detect_td(s, line.as_series(), cfg.delta_ln, cfg.w_sustain);
            Ns.push_back(N);
            tds.push_back(td ? *td : -1.0);
            tns.push_back(tn);
        }
        CsvTable t;
        t.metadata["model"] = cfg.model;
        t.metadata["sigma"] = format_double(sigma);
        t.metadata["delta_ln"] = format_double(cfg.delta_ln);
        t.metadata["w_sustain"] = std::to_string(cfg.w_sustain);
        t.columns = {"N", "t_d", "t_n"};
        t.data = {Ns, tds, tns};
        out.write_table("scan_td_" + cfg.model + "_sigma" + sig_tag(sigma) + ".csv", t,
                        json{{"type", "kicked-td"}});
    } else if (cfg.scan_type == "ising-D") {
        double thr = 0.0;
        auto scan = ising_D_scan(cfg.lambda0, cfg.lambda, cfg.Np_values, cfg.N_ref, cfg.policy,
                                 &thr);
        auto res = detect_threshold(scan, thr);
        CsvTable t;
        t.metadata["lambda0"] = format_double(cfg.lambda0);
        t.metadata["lambda"] = format_double(cfg.lambda);
        t.metadata["threshold"] = format_double(res.threshold);
        if (res.detected) t.metadata["N_d"] = format_double(*res.detected);
        t.columns = {"Np", "D"};
        t.data = {res.controls, res.D};
        json rec{{"type", "ising-D"}};
        if (res.detected) rec["N_d"] = *res.detected;
        out.write_table("scan_D_ising.csv", t, rec);
    } else if (cfg.scan_type == "ising-nd-dlambda") {
        std::vector<double> ds, nds, fits;
        for (double d : cfg.dlambdas) {
            double thr = 0.0;
            auto scan = ising_D_scan(1.0 - d, 1.0 - 2.0 * d, cfg.Np_values, cfg.N_ref,
                                     cfg.policy, &thr);
            auto res = detect_threshold(scan, thr);
            ds.push_back(d);
            nds.push_back(res.detected ? *res.detected : -1.0);
            fits.push_back(breakdown_estimate(d));
        }
        CsvTable t;
        t.columns = {"dlambda", "N_d", "fit_2_over_5dlambda"};
        t.data = {ds, nds, fits};
        out.write_table("scan_Nd_dlambda.csv", t, json{{"type", "ising-nd-dlambda"}});
    } else {
        throw std::invalid_argument("scan_type: unknown scan '" + cfg.scan_type + "'");
    }
}

void run_fit(const ExperimentConfig& cfg, OutputSet& out) {
    EchoSeries s = table_to_echo(read_csv(cfg.input));
    DecayFit fit = fit_exponential(s, {cfg.fit_lo, cfg.fit_hi});
    CsvTable t;
    t.metadata["input"] = cfg.input;
    t.columns = {"rate", "intercept", "t_start", "t_end", "rms_residual"};
    t.data = {std::vector<double>{fit.rate}, std::vector<double>{fit.intercept},
              std::vector<double>{fit.t_start}, std::vector<double>{fit.t_end},
              std::vector<double>{fit.rms_residual}};
    json rec;
    rec["type"] = "fit";
    rec["rate"] = fit.rate;
    rec["input"] = cfg.input;
    out.write_table("fit.csv", t, rec);
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
    static const std::set<std::string> kinds{"echo-kicked", "oracle-classical", "echo-ising",
                                             "scan", "fit"};
    if (!kinds.count(cfg.kind))
        throw std::invalid_argument("kind: unknown experiment kind '" + cfg.kind + "'");
    if (cfg.out_dir.empty()) throw std::invalid_argument("out_dir: must not be empty");
    if (cfg.kind == "echo-kicked" || cfg.kind == "scan") {
        parse_model(cfg.model);
        if (cfg.sigmas.empty()) throw std::invalid_argument("sigmas: need at least one value");
        if (cfg.ensemble < 1) throw std::invalid_argument("ensemble: must be >= 1");
        if (cfg.t_max < 1) throw std::invalid_argument("t_max: must be >= 1");
        for (int n : cfg.N_values)
            if (n < 2) throw std::invalid_argument("N_values: dimensions must be >= 2");
    }
    if (cfg.kind == "echo-ising" || cfg.scan_type == "ising-D" ||
        cfg.scan_type == "ising-nd-dlambda") {
        for (int np : cfg.Np_values)
            if (np < 2) throw std::invalid_argument("Np_values: spin counts must be >= 2");
        if (cfg.t_max_ising <= 0.0) throw std::invalid_argument("t_max_ising: must be positive");
    }
    if (cfg.kind == "scan" && cfg.scan_type.empty())
        throw std::invalid_argument("scan_type: required for scan runs");
    if (cfg.kind == "fit" && cfg.input.empty())
        throw std::invalid_argument("input: required for fit runs");
}

RunResult run(const ExperimentConfig& cfg) {
    validate(cfg);
    OutputSet out(cfg);
    if (cfg.kind == "echo-kicked") run_echo_kicked(cfg, out);
    else if (cfg.kind == "oracle-classical") run_oracle_classical(cfg, out);
    else if (cfg.kind == "echo-ising") run_echo_ising(cfg, out);
    else if (cfg.kind == "scan") run_scan(cfg, out);
    else if (cfg.kind == "fit") run_fit(cfg, out);
    return out.finish();
}

ReportResult report(const std::string& manifest_path) {
    std::ifstream is(manifest_path);
    if (!is) throw std::runtime_error("report: missing manifest " + manifest_path);
    json manifest = json::parse(is);
    const fs::path dir = fs::path(manifest_path).parent_path();
    ReportResult res;
    std::ostringstream table;
    table << "kind: " << manifest.value("kind", "?") << "\n";
    const auto& runs = manifest["runs"];
    if (runs.empty()) {
        table << "warning: empty manifest, nothing to report\n";
        res.table = table.str();
        return res;
    }
    // Pair echoes with predictions of matching (N, sigma) where present.
    struct Entry {
        json rec;
        EchoSeries series;
    };
    std::vector<Entry> echoes, preds;
    for (const auto& rec : runs) {
        const std::string file = rec.value("file", "");
        const fs::path p = dir / file;
        if (!fs::exists(p)) throw std::runtime_error("report: missing series " + p.string());
        const std::string type = rec.value("type", "");
        if (type == "echo" || type == "echo-ed")
            echoes.push_back({rec, table_to_echo(read_csv(p.string()))});
        else if (type == "prediction")
            preds.push_back({rec, table_to_echo(read_csv(p.string()))});
        else
            table << file << ": " << rec.dump() << "\n";
    }
    for (const auto& e : echoes) {
        table << e.rec.value("file", "");
        // Two-column ln M data file for plotting.
        const std::string dat =
            (dir / (e.rec.value("file", "series") + ".lnM.dat")).string();
        std::ofstream os(dat);
        for (std::size_t i = 0; i < e.series.size(); ++i)
            os << format_double(e.series.times[i]) << " "
               << format_double(e.series.M[i] > 0 ? std::log(e.series.M[i]) : -745.0) << "\n";
        res.dat_files.push_back(dat);
        // Match a prediction by sigma (and N when the prediction is per-N).
        for (const auto& p : preds) {
            const bool sigma_match =
                !p.rec.contains("sigma") || !e.rec.contains("sigma") ||
                p.rec["sigma"] == e.rec["sigma"];
            const bool n_match =
                !p.rec.contains("N") || !e.rec.contains("N") || p.rec["N"] == e.rec["N"];
            if (!sigma_match || !n_match) continue;
            const std::string regime = p.rec.value("regime", "?");
            double pred_rate = 0.0;
            {
                auto it = p.series.metadata.find("rate");
                if (it != p.series.metadata.end()) pred_rate = std::stod(it->second);
            }
            try {
                const double t_hi = std::min(e.series.times.back(), 8.0);
                DecayFit fit = fit_exponential(e.series, {2.0, std::max(t_hi, 5.0)});
                table << "  [" << regime << "] fitted_rate=" << format_double(fit.rate);
                if (pred_rate > 0.0)
                    table << " predicted_rate=" << format_double(pred_rate)
                          << " rel_dev=" << format_double(fit.rate / pred_rate - 1.0);
            } catch (const WindowError&) {
                table << "  [" << regime << "] fit window unusable";
            }
            break;
        }
        table << "\n";
    }
    for (const auto& rec : runs) {
        if (rec.contains("N_c")) table << "detected N_c=" << rec["N_c"].dump() << "\n";
        if (rec.contains("N_d")) table << "detected N_d=" << rec["N_d"].dump() << "\n";
    }
    res.table = table.str();
    return res;
}

}  // namespace qle
