#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace colorlit {

/// One literary work in the catalog.
struct WorkRecord {
  std::string work_id;
  std::int64_t gutenberg_id = 0;
  std::string author;
  std::string title;
  int year = 0;
  // Words (tokens whose UPOS is neither PUNCT nor SYM); 0 until parses are ingested.
  std::int64_t token_count = 0;

  friend bool operator==(const WorkRecord&, const WorkRecord&) = default;
};

namespace corpus {

inline constexpr std::string_view kCatalogHeader = "work_id,gutenberg_id,author,title,year";
inline constexpr int kMinYear = 1000;
inline constexpr int kMaxYear = 2100;

/// Loads a catalog CSV with the fixed header above. Rows keep file order.
/// Throws DataError (naming the row number, header = row 1) on a missing
/// column, bad id or year, or a duplicate work_id; IoError if unreadable.
std::vector<WorkRecord> load_catalog(const std::string& path);
std::vector<WorkRecord> parse_catalog(std::string_view csv_text);
std::string serialize_catalog(const std::vector<WorkRecord>& works);

/// Sidecar token counts written by `extract` (header `work_id,token_count`).
void write_token_counts(const std::string& path, const std::vector<WorkRecord>& works);
/// Fills token_count for every catalog entry listed in the file.
void apply_token_counts(const std::string& path, std::vector<WorkRecord>& works);

/// The two Gutenberg URL patterns tried by fetch_text, in order.
std::vector<std::string> gutenberg_urls(std::int64_t gutenberg_id, std::string_view mirror_base);

/// Downloads the plain-text e-book. Tries "{base}/files/{id}/{id}-0.txt"
/// then "{base}/cache/epub/{id}/pg{id}.txt", one attempt each. Invalid
/// UTF-8 is replaced with U+FFFD. Throws DataError for id <= 0 and
/// FetchError listing both URLs and statuses when both fail.
std::string fetch_text(std::int64_t gutenberg_id, std::string_view mirror_base);

struct CleanedText {
  std::string text;
  bool markers_found = false;
};

/// Returns the lines strictly between the first line containing
/// "*** START OF" and the first later line containing "*** END OF".
/// Without a complete marker pair the input is returned unchanged.
/// Throws DataError when an END line precedes the first START line.
CleanedText clean_gutenberg_text(std::string_view raw);

}  // namespace corpus
}  // namespace colorlit
