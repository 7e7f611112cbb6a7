#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "policysim/core.hpp"

namespace policysim::csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        const auto cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        cells.emplace_back(trim(cell));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

struct Row {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

struct Table {
    std::filesystem::path path;
    std::vector<std::string> header;
    std::vector<Row> rows;

    [[noreturn]] void fail(const Row& row, const std::string& message) const {
        throw DataError(path, row.line, message);
    }

    double number(const Row& row, std::size_t col) const {
        const std::string& text = row.cells[col];
        double value = 0.0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (text.empty() || ec != std::errc() || ptr != end)
            fail(row, "column '" + header[col] + "': not a number: '" + text + "'");
        return value;
    }

    std::int64_t integer(const Row& row, std::size_t col) const {
        const std::string& text = row.cells[col];
        std::int64_t value = 0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (text.empty() || ec != std::errc() || ptr != end)
            fail(row, "column '" + header[col] + "': not an integer: '" + text + "'");
        return value;
    }
};

/// Reads a UTF-8 CSV with a mandatory header row matching `expected` exactly.
/// Blank lines are skipped; every data row must have the header's width.
inline Table read(const std::filesystem::path& path, std::initializer_list<std::string_view> expected) {
    std::ifstream in(path);
    if (!in) throw DataError(path, 0, "cannot open file");
    Table table;
    table.path = path;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        auto cells = split(view);
        if (!have_header) {
            if (cells.size() != expected.size() || !std::equal(cells.begin(), cells.end(), expected.begin()))
                throw DataError(path, line_no, "unexpected header");
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw DataError(path, line_no,
                            "expected " + std::to_string(table.header.size()) + " columns, got " +
                                std::to_string(cells.size()));
        table.rows.push_back(Row{line_no, std::move(cells)});
    }
    if (!have_header) throw DataError(path, line_no, "missing header row");
    return table;
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& cell(std::string_view text) {
        sep();
        out_ << text;
        return *this;
    }
    Writer& cell(double value) { return cell(std::string_view(format(value))); }
    Writer& cell(std::int64_t value) { return cell(std::string_view(std::to_string(value))); }
    Writer& cell(int value) { return cell(static_cast<std::int64_t>(value)); }
    Writer& cell(std::size_t value) { return cell(static_cast<std::int64_t>(value)); }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }

    std::ostream& out_;
    bool first_ = true;
};

}  // namespace policysim::csv
