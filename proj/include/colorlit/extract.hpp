#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "colorlit/conllu.hpp"
#include "colorlit/lexicon.hpp"

namespace colorlit {

enum class ColorRole { Head, Dependent };

std::string_view to_string(ColorRole role);

/// A dependency pair linking a color term to a noun or proper noun.
struct ColorHit {
  std::string work_id;
  std::string sent_id;
  std::string color;                // canonical
  std::string color_surface_lemma;  // the matched lemma, e.g. "grey"
  ColorRole color_role = ColorRole::Dependent;
  std::string partner_lemma;
  std::string partner_upos;  // NOUN or PROPN
  std::string deprel;

  friend bool operator==(const ColorHit&, const ColorHit&) = default;
};

namespace extract {

bool is_nominal(std::string_view upos);

/// True iff any token lemma is a lexicon term.
bool prefilter_sentence(const Sentence& s, const ColorLexicon& lex);

/// Keeps each head-dependent pair where one side's lemma is a color term
/// and the other side is NOUN or PROPN. Both sides are tried as the color
/// side, so a color-color edge can yield up to two hits. Identical hits
/// within a sentence collapse to one. Output follows sentence order, then
/// the dependent token index of the edge, color-as-dependent first.
std::vector<ColorHit> extract_hits(std::string_view work_id, const std::vector<Sentence>& sentences,
                                   const ColorLexicon& lex);

/// Re-checks the three filter conditions on a single hit.
bool satisfies_filters(const ColorHit& hit, const ColorLexicon& lex);

/// Raw (non-deduplicated) hit counts for every lexicon color, zeros included.
std::map<std::string, std::size_t> count_color_occurrences(const std::vector<ColorHit>& hits,
                                                           const ColorLexicon& lex);

/// JSON-lines hit file; keys in the fixed order work_id, sent_id, color,
/// color_surface_lemma, color_role, partner_lemma, partner_upos, deprel.
std::string hit_to_json(const ColorHit& hit);
std::string serialize_hits(const std::vector<ColorHit>& hits);
std::vector<ColorHit> parse_hits(std::string_view jsonl, std::string_view source = "<hits>");
void write_hits(const std::string& path, const std::vector<ColorHit>& hits);
std::vector<ColorHit> read_hits(const std::string& path);

}  // namespace extract
}  // namespace colorlit
