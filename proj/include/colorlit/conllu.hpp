#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace colorlit {

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  std::string lemma;  // lowercased at load time
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string sent_id;
  std::vector<Token> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct DependencyEdge {
  Token head;
  Token dependent;
  std::string deprel;
};

namespace conllu {

/// Parses CoNLL-U. Multiword ranges (`3-4`) and empty nodes (`5.1`) are
/// skipped; a missing lemma (`_`) falls back to the lowercased surface.
/// Sentences without a `# sent_id = ...` comment are numbered by their
/// 1-based position in the file. Throws DataError with `source:line` on
/// a wrong column count, a non-numeric id/head, or an out-of-range head.
std::vector<Sentence> parse(std::istream& in, std::string_view source = "<stream>");
std::vector<Sentence> parse_string(std::string_view data, std::string_view source = "<string>");
std::vector<Sentence> parse_file(const std::string& path);

/// Writes the retained fields back as 10-column CoNLL-U.
std::string serialize(const std::vector<Sentence>& sentences);

/// One edge per non-root token, in dependent order.
std::vector<DependencyEdge> dependency_edges(const Sentence& s);

bool is_word(const Token& t);
/// Tokens whose UPOS is neither PUNCT nor SYM.
std::int64_t count_words(const std::vector<Sentence>& sentences);

}  // namespace conllu
}  // namespace colorlit
