#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace avgtorus {

// Formats a double with 17 significant digits, '.' decimal separator; values
// round-trip bit-exactly through the CSV.
std::string fmt_real(double x);

struct ResultTable {
    std::vector<std::string> provenance; // emitted as leading '# ' lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::vector<std::string>& new_row() {
        rows.emplace_back();
        return rows.back();
    }
    std::string to_csv() const;
    void write(const std::string& path) const;
};

} // namespace avgtorus
