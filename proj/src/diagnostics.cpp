#include "lfd/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lfd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DiagnosticRow DiagnosticRow::make(std::string experiment, std::string field,
                                  std::string geometry, double t, double value,
                                  std::optional<double> reference) {
    DiagnosticRow row;
    row.experiment = std::move(experiment);
    row.field = std::move(field);
    row.geometry = std::move(geometry);
    row.t = t;
    row.value = value;
    row.reference = reference;
    row.deviation = reference ? std::abs(value - *reference) : 0.0;
    return row;
}

double DiagnosticSeries::max_deviation() const {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.deviation);
    return worst;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CsvWriter: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::to_string() const {
    std::string out;
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open CSV output file: " + path);
    f << to_string();
}

std::optional<double> fit_convergence_order(const std::vector<double>& scales,
                                            const std::vector<double>& errors) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < scales.size() && i < errors.size(); ++i) {
        if (scales[i] > 0.0 && errors[i] > 0.0) {
            lx.push_back(std::log(scales[i]));
            ly.push_back(std::log(errors[i]));
        }
    }
    const size_t n = lx.size();
    if (n < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

}  // namespace lfd
