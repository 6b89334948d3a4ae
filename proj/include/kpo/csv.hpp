// csv.hpp — deterministic CSV and key-value exports: 9 significant digits,
// '.' decimal separator, '\n' line endings, atomic write-temp-then-rename.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kpo {

// printf %.9g with the C locale regardless of global locale state.
std::string format_g9(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::string header);
    void add_row(std::vector<std::string> cells);
    void row_values(std::initializer_list<double> vs);
    const std::string& text();  // assembled document
    void write(const std::filesystem::path& path);

private:
    std::string header_;
    std::vector<std::vector<std::string>> rows_;
    std::string cache_;
    bool dirty_ = true;
};

// Atomic file write: write to "<path>.tmp" then rename over path.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace kpo
