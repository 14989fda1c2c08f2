#pragma once

#include <map>
#include <string>
#include <vector>

#include "qle/series.hpp"

namespace qle {

/// Column-oriented CSV with `# key=value` metadata lines before the header
/// row. Doubles are printed with %.17g, so equal inputs give byte-equal files.
struct CsvTable {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // one vector per column
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

CsvTable echo_to_table(const EchoSeries& series);
EchoSeries table_to_echo(const CsvTable& table);
CsvTable prediction_to_table(const PredictionCurve& curve);
CsvTable correlation_to_table(const CorrelationSeries& corr);
CsvTable histogram_to_table(const DeltaSHistogram& hist);

std::string format_double(double v);

}  // namespace qle
