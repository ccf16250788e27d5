#include <doctest.h>

#include <filesystem>

#include "colorlit/conllu.hpp"
#include "colorlit/error.hpp"
#include "colorlit/text.hpp"
#include "support.hpp"

using namespace colorlit;
using test_support::fixture;

namespace {

std::string row(const std::string& id, const std::string& form, const std::string& lemma,
                const std::string& upos, const std::string& head, const std::string& deprel) {
  return id + "\t" + form + "\t" + lemma + "\t" + upos + "\t_\t_\t" + head + "\t" + deprel + "\t_\t_\n";
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out = {fixture("extraction/fixture.conllu")};
  for (const auto& e : std::filesystem::directory_iterator(fixture("desk/conllu"))) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string error_of(const std::string& data) {
  try {
    conllu::parse_string(data, "t.conllu");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("two-token sentence") {
  const auto s = conllu::parse_string(row("1", "blue", "blue", "ADJ", "2", "amod") +
                                      row("2", "eyes", "eye", "NOUN", "0", "root") + "\n");
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].tokens.size() == 2);
  CHECK(s[0].tokens[0] == Token{1, "blue", "blue", "ADJ", 2, "amod"});
  CHECK(s[0].tokens[1] == Token{2, "eyes", "eye", "NOUN", 0, "root"});

  const auto edges = conllu::dependency_edges(s[0]);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].head.lemma == "eye");
  CHECK(edges[0].dependent.lemma == "blue");
  CHECK(edges[0].deprel == "amod");
}

TEST_CASE("comments and blank lines only") {
  CHECK(conllu::parse_string("# newdoc\n\n# c\n\n\n").empty());
  CHECK(conllu::parse_string("").empty());
}

TEST_CASE("final sentence without trailing blank line") {
  const auto s = conllu::parse_string(row("1", "Red", "red", "ADJ", "0", "root"));
  REQUIRE(s.size() == 1);
  CHECK(s[0].sent_id == "1");
}

TEST_CASE("malformed lines report source and line") {
  const std::string nine = "1\tblue\tblue\tADJ\t_\t_\t2\tamod\t_\n";
  const auto msg = error_of("# sent_id = a\n" + nine);
  CHECK(text::contains(msg, "t.conllu:2"));
  CHECK(text::contains(error_of(row("1", "a", "a", "X", "zero", "root")), "t.conllu:1"));
  CHECK(text::contains(error_of(row("1", "a", "a", "X", "0", "root") + row("2", "b", "b", "X", "5", "dep")),
                       "t.conllu:2"));
  CHECK(text::contains(error_of(row("1", "a", "a", "X", "1", "root")), "t.conllu:1"));
  CHECK(text::contains(error_of(row("1", "a", "a", "X", "0", "root") + row("3", "b", "b", "X", "1", "dep")),
                       "t.conllu:2"));
  CHECK_THROWS_AS(conllu::parse_file("/nonexistent.conllu"), IoError);
}

TEST_CASE("edge counts") {
  Sentence single{"s", {{1, "Go", "go", "VERB", 0, "root"}}};
  CHECK(conllu::dependency_edges(single).empty());

  const auto five = conllu::parse_string(row("1", "The", "the", "DET", "3", "det") +
                                         row("2", "red", "red", "ADJ", "3", "amod") +
                                         row("3", "rose", "rose", "NOUN", "4", "nsubj") +
                                         row("4", "bloomed", "bloom", "VERB", "0", "root") +
                                         row("5", ".", ".", "PUNCT", "4", "punct"));
  REQUIRE(five.size() == 1);
  const auto edges = conllu::dependency_edges(five[0]);
  REQUIRE(edges.size() == 4);
  for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i - 1].dependent.index < edges[i].dependent.index);
}

TEST_CASE("extraction fixture loads with the documented normalizations") {
  const auto sents = conllu::parse_file(fixture("extraction/fixture.conllu"));
  REQUIRE(sents.size() == 25);
  CHECK(sents[0].sent_id == "s1");
  // The 24th sentence has no sent_id comment.
  CHECK(sents[23].sent_id == "24");
  // Uppercase lemmas are folded.
  CHECK(sents[5].tokens[0].lemma == "ebony");
  CHECK(sents[19].tokens[0].lemma == "green");
  // "_" lemmas fall back to the lowercased surface.
  CHECK(sents[12].tokens[0].lemma == "scarlet");
  CHECK(sents[12].tokens[1].lemma == "cloak");
  // The multiword range line is dropped, indices stay 1..n.
  REQUIRE(sents[13].tokens.size() == 3);
  CHECK(sents[13].tokens[0].surface == "Jet");
  // The empty node is dropped.
  CHECK(sents[14].tokens.size() == 2);
  for (const auto& s : sents) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      CHECK(s.tokens[i].index == static_cast<int>(i + 1));
      CHECK(text::is_lower(s.tokens[i].lemma));
    }
  }
}

TEST_CASE("parse, serialize, parse is the identity on every fixture") {
  for (const auto& path : fixture_files()) {
    CAPTURE(path);
    const auto first = conllu::parse_file(path);
    const auto again = conllu::parse_string(conllu::serialize(first));
    CHECK(again == first);
    CHECK(conllu::serialize(again) == conllu::serialize(first));
  }
}

TEST_CASE("edge total equals tokens minus roots on every fixture") {
  for (const auto& path : fixture_files()) {
    CAPTURE(path);
    std::size_t edges = 0, expected = 0;
    for (const auto& s : conllu::parse_file(path)) {
      edges += conllu::dependency_edges(s).size();
      std::size_t roots = 0;
      for (const auto& t : s.tokens) roots += t.head == 0;
      expected += s.tokens.size() - roots;
    }
    CHECK(edges == expected);
  }
}

TEST_CASE("word counts exclude PUNCT and SYM") {
  const auto s = conllu::parse_string(row("1", "It", "it", "PRON", "2", "nsubj") +
                                      row("2", "cost", "cost", "VERB", "0", "root") +
                                      row("3", "$", "$", "SYM", "4", "dep") + row("4", "5", "5", "NUM", "2", "obj") +
                                      row("5", ".", ".", "PUNCT", "2", "punct"));
  CHECK(conllu::count_words(s) == 3);
  // Hand count of the desk work "crane_a": 5 color sentences of 4 words,
  // 5 two-word fillers and the 3-word "$" sentence.
  CHECK(conllu::count_words(conllu::parse_file(fixture("desk/conllu/crane_a.conllu"))) == 33);
}
