#include "colorlit/lexicon.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit {

ColorLexicon ColorLexicon::from_entries(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
  ColorLexicon lex;
  auto claim = [&](const std::string& lemma, std::size_t slot) {
    auto [it, inserted] = lex.index_.emplace(lemma, slot);
    if (!inserted && it->second != slot) {
      throw DataError("lexicon: lemma '" + lemma + "' listed under both '" +
                      lex.entries_[it->second].color + "' and '" + lex.entries_[slot].color + "'");
    }
    return inserted;
  };

  for (const auto& [raw_color, raw_synonyms] : entries) {
    const std::string color = text::to_lower(text::trim(raw_color));
    if (color.empty()) throw DataError("lexicon: empty color name");
    const std::size_t slot = lex.entries_.size();
    if (lex.index_.contains(color) && lex.entries_[lex.index_.at(color)].color == color) {
      throw DataError("lexicon: color '" + color + "' defined twice");
    }
    lex.entries_.push_back({color, {}});
    claim(color, slot);
    for (const auto& raw : raw_synonyms) {
      std::string syn = text::to_lower(text::trim(raw));
      if (syn.empty()) throw DataError("lexicon: empty synonym under '" + color + "'");
      if (syn == color) continue;
      if (claim(syn, slot)) lex.entries_[slot].synonyms.push_back(std::move(syn));
    }
    std::sort(lex.entries_[slot].synonyms.begin(), lex.entries_[slot].synonyms.end());
  }
  return lex;
}

std::optional<std::string> ColorLexicon::match(std::string_view lemma) const {
  if (lemma.empty()) return std::nullopt;
  auto it = index_.find(std::string(lemma));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].color;
}

std::vector<std::string> ColorLexicon::colors() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.color);
  return out;
}

namespace lexicon {

const ColorLexicon& default_lexicon() {
  static const ColorLexicon lex = ColorLexicon::from_entries({
      {"red", {"cardinal", "coral", "crimson", "maroon", "burgundy", "flaming", "scarlet", "fuchsia"}},
      {"green", {"emerald", "olive", "aquamarine", "beryl", "jade", "lime"}},
      {"black", {"ebony", "jet", "obsidian", "onyx", "inky"}},
      {"white", {"alabaster", "ashen", "blanched", "bleached", "cadaverous", "doughy", "pale",
                 "pallid", "pasty", "ivory", "pearly", "beige"}},
      {"blue", {"azure", "indigo", "sapphire", "cerulean", "cobalt", "turquoise", "teal"}},
      {"brown", {"amber", "khaki", "tan", "umber", "hazel"}},
      {"gray", {"grey"}},
      {"yellow", {}},
      {"pink", {"rosy", "blush", "magenta"}},
      {"purple", {"lavender", "lilac", "mauve", "periwinkle", "plum", "violet", "amethyst"}},
  });
  return lex;
}

std::optional<std::string> match_color(std::string_view lemma, const ColorLexicon& lex) {
  return lex.match(lemma);
}

ColorLexicon parse_lexicon(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("lexicon: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("lexicon: top level must be an object of color -> [synonyms]");
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  for (const auto& [color, syns] : doc.items()) {
    if (!syns.is_array()) throw DataError("lexicon: synonyms of '" + color + "' must be an array");
    std::vector<std::string> list;
    for (const auto& s : syns) {
      if (!s.is_string()) throw DataError("lexicon: non-string synonym under '" + color + "'");
      list.push_back(s.get<std::string>());
    }
    entries.emplace_back(color, std::move(list));
  }
  return ColorLexicon::from_entries(entries);
}

ColorLexicon load_lexicon(const std::string& path) {
  const auto data = text::read_file(path);
  try {
    return parse_lexicon(data);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string dump_lexicon(const ColorLexicon& lex) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& e : lex.entries()) doc[e.color] = e.synonyms;
  return doc.dump(2) + "\n";
}

}  // namespace lexicon
}  // namespace colorlit
