#include "fracfront/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fracfront/errors.hpp"

namespace fracfront {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw DomainError("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_double(values[i]);
    }
    buf_ += '\n';
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    std::string line;
    std::vector<std::pair<double, double>> rows;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {  // header row
            first = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError(path, "line " + std::to_string(lineno) + ": expected two columns");
        try {
            rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError(path, "line " + std::to_string(lineno) + ": not numeric");
        }
    }
    if (rows.empty()) throw ConfigError(path, "no data rows");
    return rows;
}

}  // namespace fracfront
