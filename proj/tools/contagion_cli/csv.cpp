#include "csv.hpp"

#include "contagion/model.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cli {

std::string format_number(double x)
{
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.10g}", x);
}

Cell::Cell(double x) : text_(format_number(x)) {}

namespace {

std::string quoted(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void CsvTable::row(std::vector<Cell> cells)
{
    if (cells.size() != header_.size())
        throw std::logic_error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(header_.size()));
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (auto& c : cells) out.push_back(c.text());
    rows_.push_back(std::move(out));
}

std::string CsvTable::str() const
{
    std::string out;
    for (const auto& c : comments_) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += quoted(cells[i]);
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::write_atomically(const std::filesystem::path& path) const
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw contagion::ConfigError("cannot write '" + tmp.string() + "'");
        const std::string text = str();
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw contagion::ConfigError("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

}  // namespace cli
