#pragma once

#include <istream>
#include <string>
#include <vector>

namespace ramplab {

// Minimal RFC 4180-style CSV support: quoted fields, embedded commas/quotes/
// newlines, CRLF tolerance. Enough for the catalogs this project consumes.

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record started
};

// Reads every record from the stream. Throws std::runtime_error on an
// unterminated quoted field.
std::vector<CsvRow> read_csv(std::istream& in);

// Quotes a single field iff it needs quoting.
std::string csv_escape(const std::string& field);

// Joins fields into one CSV record (no trailing newline).
std::string csv_join(const std::vector<std::string>& fields);

// Shortest decimal form of x that parses back to exactly x.
std::string format_double(double x);

}  // namespace ramplab
