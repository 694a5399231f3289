#include "csgen/csv.hpp"

#include "csgen/error.hpp"

namespace csgen::csv {

std::vector<std::vector<std::string>> parse(std::string_view content, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  std::size_t i = 0;
  while (i < content.size()) {
    const char ch = content[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field += ch;
      ++i;
      continue;
    }
    if (ch == '"') {
      if (!field.empty() || field_was_quoted) {
        throw DataError("stray quote inside unquoted field at byte " + std::to_string(i));
      }
      in_quotes = true;
      field_was_quoted = true;
      ++i;
      continue;
    }
    if (ch == delimiter) {
      end_field();
      ++i;
      continue;
    }
    if (ch == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
      end_row();
      i += 2;
      continue;
    }
    if (ch == '\n') {
      end_row();
      ++i;
      continue;
    }
    field += ch;
    ++i;
  }
  if (in_quotes) throw DataError("unterminated quoted field at end of input");
  // Final row without trailing newline.
  if (!field.empty() || field_was_quoted || !row.empty()) end_row();
  return rows;
}

namespace {

bool needs_quoting(const std::string& field, char delimiter) {
  for (char ch : field) {
    if (ch == delimiter || ch == '"' || ch == '\n' || ch == '\r') return true;
  }
  return false;
}

}  // namespace

std::string write_row(std::span<const std::string> fields, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += delimiter;
    if (needs_quoting(fields[i], delimiter)) {
      out += '"';
      for (char ch : fields[i]) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += fields[i];
    }
  }
  out += '\n';
  return out;
}

std::string write(std::span<const std::vector<std::string>> rows, char delimiter) {
  std::string out;
  for (const auto& row : rows) out += write_row(row, delimiter);
  return out;
}

}  // namespace csgen::csv
