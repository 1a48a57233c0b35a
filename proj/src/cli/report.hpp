#pragma once

// Report layout shared by every subcommand. Both formats start with the same
// comment header (schema version, command, defaults, resolved config);
// summary lines follow, then an optional table.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace zpdehn::cli {

inline constexpr const char* kSchema = "zpdehn-report v1";
inline constexpr const char* kDefaults = "truncation 8, tol 1e-08, precision 256";

enum class Format { Text, Csv };

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void set(const std::string& key, const std::string& value) { config.emplace_back(key, value); }
    void add(const std::string& key, const std::string& value) { summary.emplace_back(key, value); }
    void write(std::ostream& os, Format format) const;
};

std::string csv_field(const std::string& s);

}  // namespace zpdehn::cli
