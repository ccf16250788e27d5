#include "colorlit/extract.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit {

std::string_view to_string(ColorRole role) {
  return role == ColorRole::Head ? "head" : "dependent";
}

namespace extract {

bool is_nominal(std::string_view upos) { return upos == "NOUN" || upos == "PROPN"; }

bool prefilter_sentence(const Sentence& s, const ColorLexicon& lex) {
  return std::any_of(s.tokens.begin(), s.tokens.end(),
                     [&](const Token& t) { return lex.match(t.lemma).has_value(); });
}

std::vector<ColorHit> extract_hits(std::string_view work_id, const std::vector<Sentence>& sentences,
                                   const ColorLexicon& lex) {
  std::vector<ColorHit> out;
  for (const auto& s : sentences) {
    if (!prefilter_sentence(s, lex)) continue;
    const std::size_t sentence_begin = out.size();
    auto emit = [&](const Token& color_tok, const std::string& color, ColorRole role,
                    const Token& partner, const std::string& deprel) {
      ColorHit hit{std::string(work_id), s.sent_id, color,        color_tok.lemma,
                   role,                 partner.lemma, partner.upos, deprel};
      auto first = out.begin() + static_cast<std::ptrdiff_t>(sentence_begin);
      if (std::find(first, out.end(), hit) == out.end()) out.push_back(std::move(hit));
    };
    for (const auto& edge : conllu::dependency_edges(s)) {
      if (auto c = lex.match(edge.dependent.lemma); c && is_nominal(edge.head.upos)) {
        emit(edge.dependent, *c, ColorRole::Dependent, edge.head, edge.deprel);
      }
      if (auto c = lex.match(edge.head.lemma); c && is_nominal(edge.dependent.upos)) {
        emit(edge.head, *c, ColorRole::Head, edge.dependent, edge.deprel);
      }
    }
  }
  return out;
}

bool satisfies_filters(const ColorHit& hit, const ColorLexicon& lex) {
  auto c = lex.match(hit.color_surface_lemma);
  return c && *c == hit.color && is_nominal(hit.partner_upos) && text::is_lower(hit.partner_lemma);
}

std::map<std::string, std::size_t> count_color_occurrences(const std::vector<ColorHit>& hits,
                                                           const ColorLexicon& lex) {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : lex.colors()) counts[c] = 0;
  for (const auto& h : hits) ++counts[h.color];
  return counts;
}

std::string hit_to_json(const ColorHit& hit) {
  nlohmann::ordered_json j;
  j["work_id"] = hit.work_id;
  j["sent_id"] = hit.sent_id;
  j["color"] = hit.color;
  j["color_surface_lemma"] = hit.color_surface_lemma;
  j["color_role"] = to_string(hit.color_role);
  j["partner_lemma"] = hit.partner_lemma;
  j["partner_upos"] = hit.partner_upos;
  j["deprel"] = hit.deprel;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string serialize_hits(const std::vector<ColorHit>& hits) {
  std::string out;
  for (const auto& h : hits) {
    out += hit_to_json(h);
    out.push_back('\n');
  }
  return out;
}

std::vector<ColorHit> parse_hits(std::string_view jsonl, std::string_view source) {
  static const char* kFields[] = {"work_id",       "sent_id",      "color",  "color_surface_lemma",
                                  "color_role",    "partner_lemma", "partner_upos", "deprel"};
  std::vector<ColorHit> hits;
  std::size_t lineno = 0;
  for (auto line : text::split(jsonl, '\n')) {
    ++lineno;
    line = text::trim(line);
    if (line.empty()) continue;
    auto where = [&] { return std::string(source) + ":" + std::to_string(lineno) + ": "; };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where() + "invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError(where() + "hit record must be an object");
    for (const char* f : kFields) {
      if (!j.contains(f) || !j[f].is_string()) {
        throw DataError(where() + "missing string field '" + f + "'");
      }
    }
    ColorHit h;
    h.work_id = j["work_id"];
    h.sent_id = j["sent_id"];
    h.color = j["color"];
    h.color_surface_lemma = j["color_surface_lemma"];
    const std::string role = j["color_role"];
    if (role == "head") {
      h.color_role = ColorRole::Head;
    } else if (role == "dependent") {
      h.color_role = ColorRole::Dependent;
    } else {
      throw DataError(where() + "color_role must be 'head' or 'dependent'");
    }
    h.partner_lemma = j["partner_lemma"];
    h.partner_upos = j["partner_upos"];
    h.deprel = j["deprel"];
    hits.push_back(std::move(h));
  }
  return hits;
}

void write_hits(const std::string& path, const std::vector<ColorHit>& hits) {
  text::write_file_atomic(path, serialize_hits(hits));
}

std::vector<ColorHit> read_hits(const std::string& path) {
  return parse_hits(text::read_file(path), path);
}

}  // namespace extract
}  // namespace colorlit
