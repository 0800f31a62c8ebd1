#include "matchscore/csv.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "matchscore/errors.hpp"

namespace matchscore {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool needs_quoting(const std::string& f) {
    return f.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& f) {
    if (!needs_quoting(f)) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string fold_name(const std::string& s) {
    std::string t = trim(s);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return t;
}

CsvTable parse_csv(const std::string& text, const std::string& path_label) {
    CsvTable t;
    t.path = path_label;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (record.size() == 1 && record[0].empty()) {
            record.clear(); // blank line
            return;
        }
        if (t.header.empty()) {
            t.header = std::move(record);
        } else {
            if (record.size() != t.header.size())
                throw ValidationError(path_label + " row " + std::to_string(t.rows.size() + 2) +
                                      ": expected " + std::to_string(t.header.size()) +
                                      " fields, got " + std::to_string(record.size()));
            t.rows.push_back(std::move(record));
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_started) {
                in_quotes = true;
                field_started = true;
            } else {
                field += c;
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            break;
        default:
            field += c;
            field_started = true;
            break;
        }
    }
    if (in_quotes) throw ValidationError(path_label + ": unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) end_record();
    if (t.header.empty()) throw ValidationError(path_label + ": missing header row");
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    auto put = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            out << quote(r[i]);
        }
        out << '\n';
    };
    put(header);
    for (const auto& r : rows) put(r);
    if (!out) throw ValidationError("write failed for " + path);
}

int CsvTable::column(const std::string& name) const {
    const std::string want = fold_name(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (fold_name(header[i]) == want) return static_cast<int>(i);
    throw ValidationError(path + ": missing required column '" + name + "'");
}

const std::string& CsvTable::field(std::size_t row, int col) const {
    return rows[row][static_cast<std::size_t>(col)];
}

double parse_double_field(const CsvTable& t, std::size_t row, int col) {
    const std::string s = trim(t.field(row, col));
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ValidationError(t.path + " row " + std::to_string(row + 2) + ": '" + s +
                              "' is not a number in column '" + t.header[col] + "'");
    return v;
}

int parse_int_field(const CsvTable& t, std::size_t row, int col) {
    const std::string s = trim(t.field(row, col));
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ValidationError(t.path + " row " + std::to_string(row + 2) + ": '" + s +
                              "' is not an integer in column '" + t.header[col] + "'");
    return static_cast<int>(v);
}

} // namespace matchscore
