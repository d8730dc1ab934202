#include "radrisk/csv.hpp"

#include <istream>
#include <ostream>

#include "radrisk/error.hpp"

namespace radrisk::csv {

Reader::Reader(std::istream& in) : in_(in) {}

int Reader::get() {
  const int c = in_.get();
  if (c == '\n') ++line_;
  return c;
}

int Reader::peek() { return in_.peek(); }

std::optional<Row> Reader::next() {
  if (first_) {
    first_ = false;
    if (peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(in_.gcount() == 3 && bom[1] == '\xBB' && bom[2] == '\xBF')) {
        in_.clear();
        in_.seekg(0);
      }
    }
  }
  if (peek() == std::char_traits<char>::eof()) return std::nullopt;

  Row row;
  row.line = line_;
  std::string field;
  bool quoted = false;

  auto skip_rest_of_line = [&] {
    for (int c = get(); c != std::char_traits<char>::eof() && c != '\n'; c = get()) {
    }
  };

  for (;;) {
    int c = get();
    if (quoted) {
      if (c == std::char_traits<char>::eof()) {
        throw RecordError(row.line, "unterminated quoted field");
      }
      if (c == '"') {
        if (peek() == '"') {
          get();
          field.push_back('"');
          continue;
        }
        quoted = false;
        const int n = peek();
        if (n != ',' && n != '\n' && n != '\r' && n != std::char_traits<char>::eof()) {
          skip_rest_of_line();
          throw RecordError(row.line, "unexpected character after closing quote");
        }
        continue;
      }
      field.push_back(static_cast<char>(c));
      continue;
    }
    if (c == std::char_traits<char>::eof() || c == '\n') {
      row.fields.push_back(std::move(field));
      return row;
    }
    if (c == '\r') {
      if (peek() == '\n') continue;
      field.push_back('\r');
      continue;
    }
    if (c == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      continue;
    }
    if (c == '"') {
      skip_rest_of_line();
      throw RecordError(row.line, "stray quote inside unquoted field");
    }
    field.push_back(static_cast<char>(c));
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace radrisk::csv
