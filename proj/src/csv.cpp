#include "colorlit/csv.hpp"

#include <sstream>

#include "colorlit/error.hpp"

namespace colorlit::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {}

bool Reader::next(Record& out) {
  out.fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  bool field_was_quoted = false;
  const std::size_t start_line = line_ + 1;

  int ch;
  while ((ch = in_.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delim_) {
      out.fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r' && in_.peek() == '\n') {
      // swallowed; the '\n' ends the record
    } else if (c == '\n') {
      ++line_;
      out.fields.push_back(std::move(field));
      out.line = start_line;
      out.row = ++row_;
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw DataError("unterminated quoted field starting on line " + std::to_string(start_line));
  }
  if (!any) return false;
  ++line_;
  out.fields.push_back(std::move(field));
  out.line = start_line;
  out.row = ++row_;
  return true;
}

std::vector<Record> read_all(std::string_view data, char delimiter) {
  std::istringstream in{std::string(data)};
  Reader reader(in, delimiter);
  std::vector<Record> out;
  Record rec;
  while (reader.next(rec)) out.push_back(rec);
  return out;
}

std::string escape(std::string_view field, char delimiter) {
  bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(delimiter);
    out += escape(fields[i], delimiter);
  }
  return out;
}

}  // namespace colorlit::csv
