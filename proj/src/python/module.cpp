#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "colorlit/cli.hpp"
#include "colorlit/conllu.hpp"
#include "colorlit/corpus.hpp"
#include "colorlit/embed.hpp"
#include "colorlit/error.hpp"
#include "colorlit/extract.hpp"
#include "colorlit/lexicon.hpp"
#include "colorlit/norms.hpp"
#include "colorlit/stats.hpp"

namespace py = pybind11;
using namespace colorlit;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw DataError("ragged matrix");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return out;
}

const ColorLexicon& pick_lexicon(const ColorLexicon* lex) {
  return lex ? *lex : lexicon::default_lexicon();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "colorlit native core";

  auto base = py::register_exception<Error>(m, "ColorlitError", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  // corpus
  m.def("clean_gutenberg_text", [](const std::string& raw) {
    auto r = corpus::clean_gutenberg_text(raw);
    return py::make_tuple(r.text, r.markers_found);
  }, py::arg("raw"), "Returns (text, markers_found).");
  m.def("gutenberg_urls", &corpus::gutenberg_urls, py::arg("gutenberg_id"), py::arg("mirror_base"));
  m.def("fetch_text", &corpus::fetch_text, py::arg("gutenberg_id"), py::arg("mirror_base"),
        py::call_guard<py::gil_scoped_release>());

  // conllu
  py::class_<Token>(m, "Token")
      .def_readonly("index", &Token::index)
      .def_readonly("surface", &Token::surface)
      .def_readonly("lemma", &Token::lemma)
      .def_readonly("upos", &Token::upos)
      .def_readonly("head", &Token::head)
      .def_readonly("deprel", &Token::deprel)
      .def("__repr__", [](const Token& t) {
        return "Token(" + std::to_string(t.index) + ", '" + t.lemma + "', " + t.upos + ", head=" +
               std::to_string(t.head) + ", " + t.deprel + ")";
      });
  py::class_<Sentence>(m, "Sentence")
      .def_readonly("sent_id", &Sentence::sent_id)
      .def_readonly("tokens", &Sentence::tokens)
      .def("__len__", [](const Sentence& s) { return s.tokens.size(); });
  m.def("parse_conllu", [](const std::string& data) { return conllu::parse_string(data); },
        py::arg("data"), "Parse CoNLL-U text.");
  m.def("parse_conllu_file", &conllu::parse_file, py::arg("path"));
  m.def("count_words", &conllu::count_words, py::arg("sentences"));
  m.def("dependency_edges", [](const Sentence& s) {
    py::list out;
    for (const auto& e : conllu::dependency_edges(s)) out.append(py::make_tuple(e.head, e.dependent, e.deprel));
    return out;
  }, py::arg("sentence"));

  // lexicon
  py::class_<ColorLexicon>(m, "ColorLexicon")
      .def("match", &ColorLexicon::match, py::arg("lemma"))
      .def("colors", &ColorLexicon::colors)
      .def("dump", [](const ColorLexicon& l) { return lexicon::dump_lexicon(l); });
  m.def("default_lexicon", &lexicon::default_lexicon, py::return_value_policy::reference);
  m.def("parse_lexicon", &lexicon::parse_lexicon, py::arg("json_text"));
  m.def("match_color", [](const std::string& lemma, const ColorLexicon* lex) {
    return lexicon::match_color(lemma, pick_lexicon(lex));
  }, py::arg("lemma"), py::arg("lexicon") = nullptr);

  // extract
  py::class_<ColorHit>(m, "ColorHit")
      .def_readonly("work_id", &ColorHit::work_id)
      .def_readonly("sent_id", &ColorHit::sent_id)
      .def_readonly("color", &ColorHit::color)
      .def_readonly("color_surface_lemma", &ColorHit::color_surface_lemma)
      .def_property_readonly("color_role", [](const ColorHit& h) { return std::string(to_string(h.color_role)); })
      .def_readonly("partner_lemma", &ColorHit::partner_lemma)
      .def_readonly("partner_upos", &ColorHit::partner_upos)
      .def_readonly("deprel", &ColorHit::deprel)
      .def("to_json", &extract::hit_to_json);
  m.def("extract_hits", [](const std::string& work_id, const std::vector<Sentence>& sentences,
                           const ColorLexicon* lex) {
    return extract::extract_hits(work_id, sentences, pick_lexicon(lex));
  }, py::arg("work_id"), py::arg("sentences"), py::arg("lexicon") = nullptr);
  m.def("count_color_occurrences", [](const std::vector<ColorHit>& hits, const ColorLexicon* lex) {
    return extract::count_color_occurrences(hits, pick_lexicon(lex));
  }, py::arg("hits"), py::arg("lexicon") = nullptr);

  // embed
  m.def("fnv1a32", [](py::bytes b) { return embed::fnv1a32(std::string(b)); }, py::arg("data"));
  m.def("char_ngrams", &embed::char_ngrams, py::arg("word"), py::arg("n_min") = 3, py::arg("n_max") = 6);
  py::class_<Projection>(m, "Projection")
      .def_readonly("mean", &Projection::mean)
      .def_readonly("eigenvalues", &Projection::eigenvalues)
      .def_property_readonly("basis", [](const Projection& p) { return from_matrix(p.basis); })
      .def_property_readonly("k", &Projection::k)
      .def("project", [](const Projection& p, const std::vector<double>& v) { return embed::project(v, p); });
  m.def("fit_pca", [](const std::vector<std::vector<double>>& rows, std::size_t k) {
    return embed::fit_pca(to_matrix(rows), k);
  }, py::arg("rows"), py::arg("k"));

  // norms
  m.def("normalize", [](double raw, double lo, double hi) {
    return norms::normalize(raw, NormScale{NormDim::Imag, lo, hi});
  }, py::arg("raw"), py::arg("scale_min"), py::arg("scale_max"));
  m.def("split_811", [](const std::vector<std::string>& words, std::uint64_t seed) {
    auto s = norms::split_811(words, seed);
    return py::make_tuple(s.train, s.dev, s.test);
  }, py::arg("words"), py::arg("seed") = 42);

  // stats
  py::class_<CorrelationResult>(m, "CorrelationResult")
      .def_readonly("n", &CorrelationResult::n)
      .def_readonly("r", &CorrelationResult::r)
      .def_readonly("t", &CorrelationResult::t)
      .def_readonly("p", &CorrelationResult::p)
      .def_readonly("stars", &CorrelationResult::stars);
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    return stats::pearson(x, y);
  }, py::arg("xs"), py::arg("ys"));
  m.def("p_two_sided", &stats::p_two_sided, py::arg("r"), py::arg("n"));
  m.def("stars", &stats::stars, py::arg("p"));
  m.def("correlate", [](const std::vector<double>& x, const std::vector<double>& y) {
    return stats::correlate(x, y);
  }, py::arg("xs"), py::arg("ys"));
  m.def("era_of", [](int year) { return std::string(to_string(stats::era_of(year))); }, py::arg("year"));
  m.def("normalized_frequency", py::overload_cast<std::size_t, std::int64_t>(&stats::normalized_frequency),
        py::arg("hit_count"), py::arg("token_count"));

  // cli
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::vector<std::string> argv{"colorlit"};
    argv.insert(argv.end(), args.begin(), args.end());
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(argv, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = cli::kVersion;
}
