#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace lgce {

using Cell = std::variant<long long, double, std::string>;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (auto p = std::get_if<long long>(&c)) return std::to_string(*p);
    if (auto p = std::get_if<double>(&c)) return format_double(*p);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

/// Comma-separated rows with a header; doubles at 17 significant digits.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
        std::vector<Cell> h(header.begin(), header.end());
        write(h);
    }

    void row(const std::vector<Cell>& cells) {
        if (cells.size() != width_) throw std::logic_error("csv: row width does not match header");
        write(cells);
    }

private:
    void write(const std::vector<Cell>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << format_cell(cells[i]);
        os_ << '\n';
    }
    std::ostream& os_;
    size_t width_;
};

}  // namespace lgce
