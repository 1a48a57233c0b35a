#include "report.hpp"

#include <algorithm>

namespace zpdehn::cli {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void Report::write(std::ostream& os, Format format) const {
    os << "# " << kSchema << " command=" << command << "\n";
    os << "# defaults: " << kDefaults << "\n";
    os << "# config:";
    for (const auto& [k, v] : config) os << " " << k << "=" << v;
    os << "\n";
    if (format == Format::Csv) {
        for (const auto& [k, v] : summary) os << "# " << k << ": " << v << "\n";
        if (columns.empty()) return;
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_field(columns[i]);
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
            os << "\n";
        }
        return;
    }
    for (const auto& [k, v] : summary) os << k << ": " << v << "\n";
    if (columns.empty()) return;
    std::vector<std::size_t> width(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << s << "\n";
    };
    line(columns);
    for (const auto& row : rows) line(row);
}

}  // namespace zpdehn::cli
