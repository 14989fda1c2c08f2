#include "qle/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qle/common.hpp"

namespace qle {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    os << "# qle " << kVersion << "\n";
    for (const auto& [k, v] : table.metadata) os << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << "\n";
    const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
    for (const auto& col : table.data)
        if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.data.size(); ++c)
            os << (c ? "," : "") << format_double(table.data[c][r]);
        os << "\n";
    }
    if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    bool header_done = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            auto eq = body.find('=');
            if (eq != std::string::npos)
                t.metadata[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_done) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            t.data.assign(t.columns.size(), {});
            header_done = true;
            continue;
        }
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= t.data.size()) throw std::runtime_error("read_csv: extra cell in " + path);
            t.data[c++].push_back(std::stod(cell));
        }
        if (c != t.data.size()) throw std::runtime_error("read_csv: short row in " + path);
    }
    return t;
}

CsvTable echo_to_table(const EchoSeries& series) {
    CsvTable t;
    t.metadata = series.metadata;
    t.metadata["ensemble"] = std::to_string(series.ensemble_size);
    t.columns = {"t", "M", "stderr"};
    t.data = {series.times, series.M, series.stderr_};
    return t;
}

EchoSeries table_to_echo(const CsvTable& table) {
    if (table.columns.size() < 2)
        throw std::runtime_error("table_to_echo: expected columns t,M[,stderr]");
    EchoSeries s;
    s.metadata = table.metadata;
    s.times = table.data[0];
    s.M = table.data[1];
    s.stderr_ = table.columns.size() > 2 ? table.data[2]
                                         : std::vector<double>(s.times.size(), 0.0);
    auto it = table.metadata.find("ensemble");
    if (it != table.metadata.end()) s.ensemble_size = std::stoi(it->second);
    return s;
}

CsvTable prediction_to_table(const PredictionCurve& curve) {
    CsvTable t;
    for (const auto& [k, v] : curve.parameters) t.metadata[k] = v;
    t.metadata["regime"] = regime_name(curve.regime);
    t.columns = {"t", "M"};
    t.data = {curve.times, curve.M_pred};
    return t;
}

CsvTable correlation_to_table(const CorrelationSeries& corr) {
    CsvTable t;
    t.metadata["model"] = corr.model;
    t.metadata["K"] = format_double(corr.K);
    t.metadata["n_trajectories"] = std::to_string(corr.n_samples);
    t.columns = {"l", "C", "stderr"};
    std::vector<double> lags(corr.C.size());
    for (std::size_t l = 0; l < lags.size(); ++l) lags[l] = static_cast<double>(l);
    t.data = {lags, corr.C, corr.stderr_};
    return t;
}

CsvTable histogram_to_table(const DeltaSHistogram& hist) {
    CsvTable t;
    t.metadata["n_samples"] = std::to_string(hist.n_samples);
    t.metadata["bin_width"] = format_double(hist.bin_width);
    t.metadata["mean"] = format_double(hist.mean());
    t.metadata["variance"] = format_double(hist.variance());
    t.columns = {"delta_s", "density"};
    std::vector<double> centers(hist.counts.size()), dens(hist.counts.size());
    const double norm = hist.n_samples
                            ? 1.0 / (static_cast<double>(hist.n_samples) * hist.bin_width)
                            : 0.0;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        centers[k] = hist.lo + (static_cast<double>(k) + 0.5) * hist.bin_width;
        dens[k] = hist.counts[k] * norm;
    }
    t.data = {centers, dens};
    return t;
}

}  // namespace qle
