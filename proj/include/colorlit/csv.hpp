#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace colorlit::csv {

/// One parsed record. `line` is the 1-based physical line on which the
/// record starts; `row` is the 1-based record number (header = row 1).
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
  std::size_t row = 0;
};

/// RFC 4180 style reader: quoted fields may contain the delimiter, doubled
/// quotes and newlines. CRLF line endings are accepted.
class Reader {
 public:
  Reader(std::istream& in, char delimiter = ',');

  bool next(Record& out);

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 0;
  std::size_t row_ = 0;
};

std::vector<Record> read_all(std::string_view data, char delimiter = ',');

std::string escape(std::string_view field, char delimiter = ',');
std::string join(const std::vector<std::string>& fields, char delimiter = ',');

}  // namespace colorlit::csv
