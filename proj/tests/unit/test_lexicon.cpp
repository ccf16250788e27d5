#include <doctest.h>

#include <map>
#include <set>

#include "colorlit/error.hpp"
#include "colorlit/lexicon.hpp"
#include "colorlit/text.hpp"
#include "support.hpp"

using namespace colorlit;

namespace {

// Color table transcribed independently of the library source.
const std::map<std::string, std::set<std::string>>& reference_table() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"red", {"cardinal", "coral", "crimson", "maroon", "burgundy", "flaming", "scarlet", "fuchsia"}},
      {"green", {"emerald", "olive", "aquamarine", "beryl", "jade", "lime"}},
      {"black", {"ebony", "jet", "obsidian", "onyx", "inky"}},
      {"white", {"alabaster", "ashen", "blanched", "bleached", "cadaverous", "doughy", "pale", "pallid", "pasty",
                 "ivory", "pearly", "beige"}},
      {"blue", {"azure", "indigo", "sapphire", "cerulean", "cobalt", "turquoise", "teal"}},
      {"brown", {"amber", "khaki", "tan", "umber", "hazel"}},
      {"gray", {"grey"}},
      {"yellow", {}},
      {"pink", {"rosy", "blush", "magenta"}},
      {"purple", {"lavender", "lilac", "mauve", "periwinkle", "plum", "violet", "amethyst"}},
  };
  return table;
}

}  // namespace

TEST_CASE("default lexicon holds exactly the ten-color table") {
  const auto& lex = lexicon::default_lexicon();
  std::map<std::string, std::set<std::string>> got;
  for (const auto& e : lex.entries()) got[e.color] = {e.synonyms.begin(), e.synonyms.end()};
  CHECK(got == reference_table());
  std::size_t lemmas = 0;
  for (const auto& [c, syns] : reference_table()) lemmas += 1 + syns.size();
  CHECK(lex.lemma_count() == lemmas);
}

TEST_CASE("lookup examples") {
  const auto& lex = lexicon::default_lexicon();
  CHECK(lexicon::match_color("grey", lex) == "gray");
  CHECK(lexicon::match_color("sapphire", lex) == "blue");
  CHECK(lexicon::match_color("yellow", lex) == "yellow");
  CHECK(lexicon::match_color("crimson", lex) == "red");
  CHECK_FALSE(lexicon::match_color("reddish", lex));
  CHECK_FALSE(lexicon::match_color("", lex));
  CHECK_FALSE(lexicon::match_color("re", lex));
  CHECK_FALSE(lexicon::match_color("Grey", lex));
}

TEST_CASE("every canonical color and synonym maps to its row") {
  const auto& lex = lexicon::default_lexicon();
  for (const auto& [color, syns] : reference_table()) {
    CHECK(lexicon::match_color(color, lex) == color);
    for (const auto& s : syns) {
      CAPTURE(s);
      CHECK(lexicon::match_color(s, lex) == color);
    }
  }
}

TEST_CASE("override file replaces the default wholesale") {
  const auto lex = lexicon::parse_lexicon(R"({"red": ["scarlet"]})");
  CHECK(lex.colors() == std::vector<std::string>{"red"});
  CHECK(lex.match("red") == "red");
  CHECK(lex.match("scarlet") == "red");
  CHECK_FALSE(lex.match("crimson"));
  CHECK(lex.lemma_count() == 2);
}

TEST_CASE("override validation") {
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"({"red": ["scarlet"], "pink": ["scarlet"]})"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"({"red": ["pink"], "pink": []})"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"({"": ["x"]})"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"({"red": [""]})"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"({"red": "scarlet"})"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon(R"(["red"])"), DataError);
  CHECK_THROWS_AS(lexicon::parse_lexicon("{"), DataError);
  CHECK_THROWS_AS(lexicon::load_lexicon("/nonexistent/lexicon.json"), IoError);
}

TEST_CASE("override entries are lowercased") {
  const auto lex = lexicon::parse_lexicon(R"({"Red": [" Scarlet "]})");
  CHECK(lex.match("scarlet") == "red");
  CHECK(lex.colors() == std::vector<std::string>{"red"});
}

TEST_CASE("default lexicon round trips through its dump") {
  const auto& lex = lexicon::default_lexicon();
  const auto dumped = lexicon::dump_lexicon(lex);
  const auto back = lexicon::parse_lexicon(dumped);
  CHECK(back == lex);
  CHECK(lexicon::dump_lexicon(back) == dumped);
}

TEST_CASE("desk fixture lexicon") {
  const auto lex = lexicon::load_lexicon(test_support::fixture("desk/lexicon.json"));
  CHECK(lex.colors() == std::vector<std::string>{"red", "blue", "gray", "green"});
  CHECK(lex.match("azure") == "blue");
}
