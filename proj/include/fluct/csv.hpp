#pragma once

#include <string>
#include <vector>

namespace fluct {

// Splits one CSV line on commas. No quoting support: none of the formats we
// read or write embed commas in fields.
std::vector<std::string> csv_split(const std::string& line);

std::vector<std::string> read_lines(const std::string& path);

// Single value per line, optional header skipped if non-numeric.
std::vector<double> read_value_column(const std::string& path);

// Two comma-separated values per line.
std::vector<std::pair<double, double>> read_value_pairs(const std::string& path);

double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

// Fixed formatting so repeated runs emit identical bytes.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fluct
