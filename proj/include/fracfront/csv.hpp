#pragma once

#include <string>
#include <vector>

namespace fracfront {

// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

// Write `content` to `path` atomically (temp file + rename), LF endings.
void atomic_write_file(const std::string& path, const std::string& content);

// Minimal CSV table builder: header row mandatory, LF line endings,
// round-trip double formatting.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    const std::string& str() const { return buf_; }
    void write(const std::string& path) const { atomic_write_file(path, buf_); }

  private:
    std::string buf_;
    std::size_t columns_;
};

// Parse a two-column numeric CSV (with one header row) into (a, b) pairs.
std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path);

}  // namespace fracfront
