#include "colorlit/corpus.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>

#include "colorlit/csv.hpp"
#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit::corpus {

namespace {

template <typename T>
bool parse_int(std::string_view s, T& out) {
  s = text::trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string row_error(std::size_t row, const std::string& what) {
  return "catalog row " + std::to_string(row) + ": " + what;
}

}  // namespace

std::vector<WorkRecord> parse_catalog(std::string_view csv_text) {
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);
  auto records = csv::read_all(csv_text);
  if (records.empty()) throw DataError("catalog is empty: header row missing");

  static const std::vector<std::string> kColumns = {"work_id", "gutenberg_id", "author", "title",
                                                    "year"};
  const auto& header = records.front().fields;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i >= header.size() || text::trim(header[i]) != kColumns[i]) {
      throw DataError(row_error(1, "missing column '" + kColumns[i] + "' (expected header '" +
                                       std::string(kCatalogHeader) + "')"));
    }
  }
  if (header.size() != kColumns.size()) {
    throw DataError(row_error(1, "unexpected extra columns in header"));
  }

  std::vector<WorkRecord> works;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() == 1 && text::trim(rec.fields[0]).empty()) continue;
    if (rec.fields.size() != kColumns.size()) {
      throw DataError(row_error(rec.row, "expected " + std::to_string(kColumns.size()) +
                                             " columns, found " + std::to_string(rec.fields.size())));
    }
    WorkRecord w;
    w.work_id = std::string(text::trim(rec.fields[0]));
    if (w.work_id.empty()) throw DataError(row_error(rec.row, "empty work_id"));
    if (!parse_int(rec.fields[1], w.gutenberg_id) || w.gutenberg_id <= 0) {
      throw DataError(row_error(rec.row, "gutenberg_id '" + rec.fields[1] + "' is not a positive integer"));
    }
    w.author = std::string(text::trim(rec.fields[2]));
    w.title = std::string(text::trim(rec.fields[3]));
    if (!parse_int(rec.fields[4], w.year)) {
      throw DataError(row_error(rec.row, "unparseable year '" + rec.fields[4] + "'"));
    }
    if (w.year < kMinYear || w.year > kMaxYear) {
      throw DataError(row_error(rec.row, "year " + std::to_string(w.year) + " outside [" +
                                             std::to_string(kMinYear) + ", " +
                                             std::to_string(kMaxYear) + "]"));
    }
    auto [it, inserted] = seen.emplace(w.work_id, rec.row);
    if (!inserted) {
      throw DataError(row_error(rec.row, "duplicate work_id '" + w.work_id + "' (first seen on row " +
                                             std::to_string(it->second) + ")"));
    }
    works.push_back(std::move(w));
  }
  return works;
}

std::vector<WorkRecord> load_catalog(const std::string& path) {
  const std::string data = text::read_file(path);
  try {
    return parse_catalog(data);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_catalog(const std::vector<WorkRecord>& works) {
  std::string out(kCatalogHeader);
  out.push_back('\n');
  for (const auto& w : works) {
    out += csv::join({w.work_id, std::to_string(w.gutenberg_id), w.author, w.title,
                      std::to_string(w.year)});
    out.push_back('\n');
  }
  return out;
}

void write_token_counts(const std::string& path, const std::vector<WorkRecord>& works) {
  std::string out = "work_id,token_count\n";
  for (const auto& w : works) {
    out += csv::join({w.work_id, std::to_string(w.token_count)});
    out.push_back('\n');
  }
  text::write_file_atomic(path, out);
}

void apply_token_counts(const std::string& path, std::vector<WorkRecord>& works) {
  auto records = csv::read_all(text::read_file(path));
  if (records.empty() || records[0].fields.size() != 2 || records[0].fields[0] != "work_id" ||
      records[0].fields[1] != "token_count") {
    throw DataError(path + ": expected header 'work_id,token_count'");
  }
  std::unordered_map<std::string, std::int64_t> counts;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    if (f.size() == 1 && text::trim(f[0]).empty()) continue;
    std::int64_t n = 0;
    if (f.size() != 2 || !parse_int(f[1], n) || n < 0) {
      throw DataError(path + ": bad token count on row " + std::to_string(records[r].row));
    }
    counts[f[0]] = n;
  }
  for (auto& w : works) {
    if (auto it = counts.find(w.work_id); it != counts.end()) w.token_count = it->second;
  }
}

std::vector<std::string> gutenberg_urls(std::int64_t gutenberg_id, std::string_view mirror_base) {
  if (gutenberg_id <= 0) {
    throw DataError("gutenberg id must be positive, got " + std::to_string(gutenberg_id));
  }
  std::string base(mirror_base);
  while (!base.empty() && base.back() == '/') base.pop_back();
  const std::string id = std::to_string(gutenberg_id);
  return {base + "/files/" + id + "/" + id + "-0.txt",
          base + "/cache/epub/" + id + "/pg" + id + ".txt"};
}

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DataError("mirror URL lacks a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string fetch_text(std::int64_t gutenberg_id, std::string_view mirror_base) {
  const auto urls = gutenberg_urls(gutenberg_id, mirror_base);
  std::ostringstream failures;
  for (const auto& url : urls) {
    const auto parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    auto res = client.Get(parts.path);
    if (res && res->status == 200) return text::sanitize_utf8(res->body);
    failures << "\n  " << url << " -> ";
    if (res) {
      failures << "HTTP " << res->status;
    } else {
      failures << httplib::to_string(res.error());
    }
  }
  throw FetchError("fetch failed for gutenberg id " + std::to_string(gutenberg_id) + ":" +
                   failures.str());
}

CleanedText clean_gutenberg_text(std::string_view raw) {
  static constexpr std::string_view kStart = "*** START OF";
  static constexpr std::string_view kEnd = "*** END OF";

  // Line boundaries: [begin, end) excluding the '\n'.
  std::size_t pos = 0;
  std::size_t body_begin = std::string_view::npos;
  std::size_t body_end = std::string_view::npos;
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    const std::size_t line_end = nl == std::string_view::npos ? raw.size() : nl;
    const auto line = raw.substr(pos, line_end - pos);
    if (body_begin == std::string_view::npos) {
      if (text::contains(line, kStart)) {
        body_begin = nl == std::string_view::npos ? raw.size() : nl + 1;
      } else if (text::contains(line, kEnd)) {
        throw DataError("malformed boilerplate: END marker precedes START marker");
      }
    } else if (text::contains(line, kEnd)) {
      body_end = pos;
      break;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (body_begin == std::string_view::npos || body_end == std::string_view::npos) {
    return {std::string(raw), false};
  }

  std::string body;
  std::string_view span = body_end > body_begin ? raw.substr(body_begin, body_end - body_begin)
                                                : std::string_view{};
  // Drop the newline that terminates the last body line.
  if (span.ends_with('\n')) span.remove_suffix(1);
  body.reserve(span.size());
  for (std::size_t i = 0; i < span.size(); ++i) {
    if (span[i] == '\r' && (i + 1 == span.size() || span[i + 1] == '\n')) continue;
    body.push_back(span[i]);
  }
  return {std::move(body), true};
}

}  // namespace colorlit::corpus
