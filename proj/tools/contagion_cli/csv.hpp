#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cli {

/// One CSV cell. Numbers are printed with 10 significant digits independent of
/// the locale; -0 prints as 0.
class Cell {
public:
    Cell(double x);
    Cell(int x) : text_(std::to_string(x)) {}
    Cell(long x) : text_(std::to_string(x)) {}
    Cell(long long x) : text_(std::to_string(x)) {}
    Cell(unsigned long x) : text_(std::to_string(x)) {}
    Cell(unsigned long long x) : text_(std::to_string(x)) {}
    Cell(bool x) : text_(x ? "true" : "false") {}
    Cell(std::string s) : text_(std::move(s)) {}
    Cell(const char* s) : text_(s) {}

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

std::string format_number(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void comment(std::string line) { comments_.push_back(std::move(line)); }
    void row(std::vector<Cell> cells);
    std::string str() const;

    /// Writes to a temporary file beside `path` and renames it into place.
    void write_atomically(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace cli
