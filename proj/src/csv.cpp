#include "kpo/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kpo {

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    // Defensive against locales with ',' decimal points.
    for (char* p = buf; *p; ++p)
        if (*p == ',') *p = '.';
    return buf;
}

CsvWriter::CsvWriter(std::string header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    rows_.push_back(std::move(cells));
    dirty_ = true;
}

void CsvWriter::row_values(std::initializer_list<double> vs) {
    std::vector<std::string> cells;
    cells.reserve(vs.size());
    for (double v : vs) cells.push_back(format_g9(v));
    add_row(std::move(cells));
}

const std::string& CsvWriter::text() {
    if (dirty_) {
        cache_ = header_;
        cache_ += '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) cache_ += ',';
                cache_ += row[i];
            }
            cache_ += '\n';
        }
        dirty_ = false;
    }
    return cache_;
}

void CsvWriter::write(const std::filesystem::path& path) {
    write_text_atomic(path, text());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace kpo
