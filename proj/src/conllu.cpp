#include "colorlit/conllu.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit::conllu {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

struct Pending {
  Sentence sentence;
  std::vector<std::size_t> lines;  // source line of each token
  bool has_id = false;
};

}  // namespace

std::vector<Sentence> parse(std::istream& in, std::string_view source) {
  std::vector<Sentence> out;
  Pending cur;
  bool open = false;

  auto flush = [&] {
    if (!open) return;
    auto& toks = cur.sentence.tokens;
    const int n = static_cast<int>(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].index != static_cast<int>(i) + 1) {
        fail(source, cur.lines[i], "token id " + std::to_string(toks[i].index) +
                                       " breaks the 1..n sequence (expected " +
                                       std::to_string(i + 1) + ")");
      }
      if (toks[i].head < 0 || toks[i].head > n) {
        fail(source, cur.lines[i], "head " + std::to_string(toks[i].head) +
                                       " out of range for sentence of " + std::to_string(n) +
                                       " tokens");
      }
      if (toks[i].head == toks[i].index) fail(source, cur.lines[i], "token is its own head");
    }
    if (!toks.empty()) {
      if (!cur.has_id) cur.sentence.sent_id = std::to_string(out.size() + 1);
      out.push_back(std::move(cur.sentence));
    }
    cur = Pending{};
    open = false;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    open = true;
    if (line.front() == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      if (body.starts_with("sent_id")) {
        auto eq = body.find('=');
        if (eq != std::string_view::npos) {
          cur.sentence.sent_id = std::string(text::trim(body.substr(eq + 1)));
          cur.has_id = true;
        }
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10) {
      fail(source, lineno, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    Token t;
    if (!parse_int(cols[0], t.index) || t.index < 1) {
      fail(source, lineno, "non-numeric token id '" + std::string(cols[0]) + "'");
    }
    if (!parse_int(cols[6], t.head)) {
      fail(source, lineno, "non-numeric head '" + std::string(cols[6]) + "'");
    }
    t.surface = std::string(cols[1]);
    t.lemma = text::to_lower(cols[2] == "_" ? cols[1] : cols[2]);
    t.upos = std::string(cols[3]);
    t.deprel = std::string(cols[7]);
    cur.sentence.tokens.push_back(std::move(t));
    cur.lines.push_back(lineno);
  }
  flush();
  return out;
}

std::vector<Sentence> parse_string(std::string_view data, std::string_view source) {
  std::istringstream in{std::string(data)};
  return parse(in, source);
}

std::vector<Sentence> parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse(in, path);
}

std::string serialize(const std::vector<Sentence>& sentences) {
  std::ostringstream out;
  for (const auto& s : sentences) {
    out << "# sent_id = " << s.sent_id << '\n';
    for (const auto& t : s.tokens) {
      out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t"
          << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
  return out.str();
}

std::vector<DependencyEdge> dependency_edges(const Sentence& s) {
  std::vector<DependencyEdge> edges;
  for (const auto& t : s.tokens) {
    if (t.head == 0) continue;
    edges.push_back({s.tokens[static_cast<std::size_t>(t.head - 1)], t, t.deprel});
  }
  return edges;
}

bool is_word(const Token& t) { return t.upos != "PUNCT" && t.upos != "SYM"; }

std::int64_t count_words(const std::vector<Sentence>& sentences) {
  std::int64_t n = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) n += is_word(t) ? 1 : 0;
  }
  return n;
}

}  // namespace colorlit::conllu
