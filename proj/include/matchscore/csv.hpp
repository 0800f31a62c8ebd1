#pragma once

#include <string>
#include <vector>

namespace matchscore {

/// A parsed CSV file: header row plus data rows, all fields as text.
/// UTF-8, comma-separated, RFC 4180 quoting (quoted fields may contain
/// commas, doubled quotes, and newlines).
struct CsvTable {
    std::string path; // for error messages
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by (trimmed, case-insensitive) name; throws if absent.
    int column(const std::string& name) const;
    const std::string& field(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& path_label);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Lowercased, whitespace-trimmed copy (ASCII folding), the join key used for
/// firm names.
std::string fold_name(const std::string& s);

double parse_double_field(const CsvTable& t, std::size_t row, int col);
int parse_int_field(const CsvTable& t, std::size_t row, int col);

} // namespace matchscore
