#include "wbs2/series_io.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "wbs2/core.hpp"

namespace wbs2 {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(tok, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == tok.size() && std::isfinite(out);
}

}  // namespace

std::vector<double> read_series(std::istream& in, std::optional<std::size_t> column) {
    if (column && *column == 0) throw PreconditionError("column numbers start at 1");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;

        std::string field = body;
        if (column) {
            std::istringstream cells(body);
            std::string cell;
            std::size_t idx = 0;
            bool found = false;
            while (std::getline(cells, cell, ',')) {
                if (++idx == *column) {
                    field = trim(cell);
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ParseError(line_no, "row has fewer than " + std::to_string(*column) + " columns");
            }
        }
        double v = 0.0;
        if (!parse_double(field, v)) {
            if (column && first_row) {
                first_row = false;
                continue;
            }
            throw ParseError(line_no, "'" + field + "' is not a finite number");
        }
        first_row = false;
        values.push_back(v);
    }
    return values;
}

void write_series(std::ostream& out, std::span<const double> values) {
    const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (double v : values) out << v << '\n';
    out.precision(precision);
}

}  // namespace wbs2
