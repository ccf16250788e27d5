#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace colorlit {

/// Canonical color terms and their synonym lemmas. Every lemma (canonical
/// terms included) maps to exactly one canonical color; all entries are
/// lowercase. Immutable after construction.
class ColorLexicon {
 public:
  struct Entry {
    std::string color;
    std::vector<std::string> synonyms;  // sorted, excludes the canonical term
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Validates and builds a lexicon. Input strings are lowercased and
  /// trimmed. Throws DataError on an empty color or synonym, or a lemma
  /// listed under two colors.
  static ColorLexicon from_entries(const std::vector<std::pair<std::string, std::vector<std::string>>>& entries);

  std::optional<std::string> match(std::string_view lemma) const;

  /// Canonical colors in definition order.
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<std::string> colors() const;
  std::size_t lemma_count() const { return index_.size(); }

  friend bool operator==(const ColorLexicon& a, const ColorLexicon& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace lexicon {

/// The ten colors and their synonyms used for extraction.
const ColorLexicon& default_lexicon();

/// Exact lemma-set membership; no substring or fuzzy matching.
std::optional<std::string> match_color(std::string_view lemma, const ColorLexicon& lex);

/// JSON object mapping canonical color -> synonym array. Replaces the
/// default wholesale.
ColorLexicon parse_lexicon(std::string_view json_text);
ColorLexicon load_lexicon(const std::string& path);
std::string dump_lexicon(const ColorLexicon& lex);

}  // namespace lexicon
}  // namespace colorlit
