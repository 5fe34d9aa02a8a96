#include "fluct/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fluct {

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

static bool looks_numeric(const std::string& s) {
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
            c == '.' || c == 'e' || c == 'E')
            continue;
        return false;
    }
    return !s.empty();
}

std::vector<double> read_value_column(const std::string& path) {
    auto lines = read_lines(path);
    std::vector<double> out;
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (i == 0 && !looks_numeric(csv_split(lines[i])[0])) continue;  // header
        out.push_back(parse_double(csv_split(lines[i])[0], path));
    }
    return out;
}

std::vector<std::pair<double, double>> read_value_pairs(const std::string& path) {
    auto lines = read_lines(path);
    std::vector<std::pair<double, double>> out;
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = csv_split(lines[i]);
        if (f.size() < 2) throw std::runtime_error(path + ": expected two columns");
        if (i == 0 && !looks_numeric(f[0])) continue;
        out.emplace_back(parse_double(f[0], path), parse_double(f[1], path));
    }
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": bad numeric field '" + s + "'");
    }
}

long long parse_int(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": bad integer field '" + s + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace fluct
