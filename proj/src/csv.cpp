#include "tantra/csv.hpp"

#include <fstream>

#include "tantra/errors.hpp"

namespace tantra::csv {

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table read(std::istream& in) {
  Table table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_started = false;
  long line = 1;
  long record_line = 1;

  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
  };
  auto end_record = [&]() {
    end_field();
    if (record.size() == 1 && record[0].empty()) {  // blank line
      record.clear();
      record_started = false;
      return;
    }
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      table.rows.push_back(std::move(record));
      table.line_numbers.push_back(record_line);
    }
    record = {};
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (!record_started) {
      record_started = true;
      record_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          fail(Err::ParseError, "stray '\"' at line " + std::to_string(line));
        }
        in_quotes = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;  // swallowed; \r\n and \n both end lines at '\n'
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) fail(Err::ParseError, "unterminated quoted field at end of input");
  if (record_started || !field.empty() || !record.empty()) end_record();
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot open " + path);
  return read(in);
}

}  // namespace tantra::csv
