#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lfd {

/// Fixed, locale-independent formatting used for all CSV output so repeated
/// runs are byte-identical.
std::string format_double(double v);

/// One conservation-diagnostic row; deviation = |value - reference| when a
/// reference exists.
struct DiagnosticRow {
    std::string experiment;
    std::string field;
    std::string geometry;
    double t = 0.0;
    double value = 0.0;
    std::optional<double> reference;
    double deviation = 0.0;

    static DiagnosticRow make(std::string experiment, std::string field, std::string geometry,
                              double t, double value, std::optional<double> reference);
};

struct DiagnosticSeries {
    std::vector<DiagnosticRow> rows;

    double max_deviation() const;
};

/// Minimal CSV writer: quoting-free fields (names and numbers only).
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(std::vector<std::string> cells);
    void write(const std::string& path) const;
    std::string to_string() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Least-squares slope of log(error) against log(scale); the observed
/// convergence order when errors behave like C * scale^p. Requires at least
/// two points with positive error and scale.
std::optional<double> fit_convergence_order(const std::vector<double>& scales,
                                            const std::vector<double>& errors);

}  // namespace lfd
