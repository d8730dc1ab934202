#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radrisk::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // physical line on which the record starts, 1-based
};

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes and line
/// breaks; CRLF and LF line endings are both accepted. A UTF-8 byte order
/// mark at the start of the stream is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  /// Next record, or nullopt at end of input. Throws RecordError for a
  /// malformed record; the reader then resumes at the following line.
  std::optional<Row> next();

 private:
  int get();
  int peek();

  std::istream& in_;
  std::size_t line_ = 1;
  bool first_ = true;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace radrisk::csv
