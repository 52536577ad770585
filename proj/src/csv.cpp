#include "olsaudit/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace olsaudit {

int CsvTable::col(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column: " + name);
  return int(it - header.begin());
}

namespace {

std::vector<std::string> split_line(const std::string& text, size_t& pos) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool done = false;
  while (pos < text.size() && !done) {
    char ch = text[pos];
    if (quoted) {
      if (ch == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          cur.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else {
      switch (ch) {
        case '"': quoted = true; break;
        case ',':
          fields.push_back(std::move(cur));
          cur.clear();
          break;
        case '\r':
          if (pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
          done = true;
          break;
        case '\n': done = true; break;
        default: cur.push_back(ch);
      }
    }
    ++pos;
  }
  fields.push_back(std::move(cur));
  return fields;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  size_t pos = 0;
  if (pos >= text.size()) throw DataError("empty CSV input");
  t.header = split_line(text, pos);
  while (pos < text.size()) {
    auto fields = split_line(text, pos);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != t.header.size()) {
      throw DataError("row " + std::to_string(t.rows.size() + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (size_t j = 0; j < table.header.size(); ++j) {
    if (j) out.push_back(',');
    append_field(out, table.header[j]);
  }
  out.push_back('\n');
  for (const auto& row : table.rows) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      append_field(out, row[j]);
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write: " + path);
  out << format_csv(table);
  if (!out) throw DataError("write failed: " + path);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_cell_double(const std::string& cell, long row, const std::string& col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  // strtod accepts leading whitespace; require full consumption of the cell.
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0')) {
    throw DataError("non-numeric cell at row " + std::to_string(row) + ", column '" + col +
                    "': '" + cell + "'");
  }
  return v;
}

}  // namespace olsaudit
