#include "avgtorus/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace avgtorus {

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (const auto& line : provenance) out += "# " + line + "\n";
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ",";
        out += columns[i];
    }
    out += "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::logic_error("ResultTable: row width differs from header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += row[i];
        }
        out += "\n";
    }
    return out;
}

void ResultTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write: " + path);
    f << to_csv();
}

} // namespace avgtorus
