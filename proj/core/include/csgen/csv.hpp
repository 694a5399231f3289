#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csgen::csv {

/// RFC 4180 parse: quoted fields may hold delimiters, quotes ("" escape) and
/// newlines; rows end with LF or CRLF; a missing final newline is accepted.
/// Throws DataError on an unterminated quoted field or stray quote.
std::vector<std::vector<std::string>> parse(std::string_view content, char delimiter = ',');

/// Canonical single-row encoding: fields are quoted only when they contain
/// the delimiter, a quote, or a newline; the row ends with a bare LF. Writing
/// the same rows always yields the same bytes.
std::string write_row(std::span<const std::string> fields, char delimiter = ',');

std::string write(std::span<const std::vector<std::string>> rows, char delimiter = ',');

}  // namespace csgen::csv
