#include "ramplab/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace ramplab {

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string field;
    CsvRow row;
    std::size_t line = 1;
    row.line = 1;
    bool in_quotes = false;
    bool any_data = false;

    auto end_field = [&]() {
        row.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row = CsvRow{};
        row.line = line;
        any_data = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                any_data = true;
                break;
            case ',':
                end_field();
                any_data = true;
                break;
            case '\r':
                break;  // swallowed; CRLF handled by the \n branch
            case '\n':
                ++line;
                end_row();
                row.line = line;
                break;
            default:
                field += c;
                any_data = true;
                break;
        }
    }
    if (in_quotes) {
        throw std::runtime_error("csv: unterminated quoted field starting near line " +
                                 std::to_string(row.line));
    }
    if (any_data || !row.fields.empty()) end_row();
    return rows;
}

std::string csv_escape(const std::string& field) {
    bool needs = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs = true;
            break;
        }
    }
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace ramplab
