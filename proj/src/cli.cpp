#include "colorlit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <unordered_set>

#include <CLI11.hpp>

#include "colorlit/conllu.hpp"
#include "colorlit/corpus.hpp"
#include "colorlit/csv.hpp"
#include "colorlit/digest.hpp"
#include "colorlit/embed.hpp"
#include "colorlit/error.hpp"
#include "colorlit/extract.hpp"
#include "colorlit/lexicon.hpp"
#include "colorlit/norms.hpp"
#include "colorlit/report.hpp"
#include "colorlit/text.hpp"

namespace colorlit::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultMirror = "https://www.gutenberg.org";
constexpr const char* kNormVectorsFile = "norm_vectors.vec";

struct Globals {
  std::uint64_t seed = 42;
  bool quiet = false;
};

class Progress {
 public:
  Progress(std::ostream& err, const bool& quiet) : err_(err), quiet_(quiet) {}
  template <typename... Args>
  void operator()(const Args&... args) const {
    if (quiet_) return;
    (err_ << ... << args) << '\n';
  }

 private:
  std::ostream& err_;
  const bool& quiet_;
};

struct ColumnFlags {
  NormColumns columns;
  std::string bounds = "scale";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--word-col", columns.word, "Word column name or 0-based index")->capture_default_str();
    cmd->add_option("--imag-col", columns.imag, "Imageability mean column")->capture_default_str();
    cmd->add_option("--cnc-col", columns.cnc, "Concreteness mean column")->capture_default_str();
    cmd->add_option("--val-col", columns.val, "Valence mean column")->capture_default_str();
    cmd->add_option("--header-rows", columns.header_rows, "Header rows before the data")->capture_default_str();
    cmd->add_option("--bounds", bounds, "Normalization bounds: 'scale' (rating scale) or 'observed'")
        ->check(CLI::IsMember({"scale", "observed"}))
        ->capture_default_str();
  }

  NormDataset load(const std::string& path) const {
    auto ds = norms::load_glasgow(path, columns);
    if (bounds == "observed") ds.set_scales(ds.observed_scales());
    return ds;
  }
};

ColorLexicon lexicon_from(const std::string& path) {
  return path.empty() ? lexicon::default_lexicon() : lexicon::load_lexicon(path);
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw IoError(std::string(what) + " '" + path + "' not found");
}

std::pair<std::string, std::string> parse_authors(const std::string& value) {
  const auto comma = value.find(',');
  if (comma == std::string::npos) throw UsageError("--authors expects \"A,B\"");
  std::pair<std::string, std::string> out{std::string(text::trim(value.substr(0, comma))),
                                          std::string(text::trim(value.substr(comma + 1)))};
  if (out.first.empty() || out.second.empty()) throw UsageError("--authors expects two names");
  return out;
}

// ---- subcommands --------------------------------------------------------------

int cmd_fetch(const std::string& catalog_path, const std::string& out_dir, std::string mirror,
              const Progress& progress) {
  if (mirror.empty()) {
    const char* env = std::getenv("COLORLIT_MIRROR");
    mirror = env && *env ? env : kDefaultMirror;
  }
  const auto works = corpus::load_catalog(catalog_path);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "'");
  for (const auto& w : works) {
    progress("fetching ", w.work_id, " (gutenberg ", w.gutenberg_id, ")");
    const auto raw = corpus::fetch_text(w.gutenberg_id, mirror);
    const auto cleaned = corpus::clean_gutenberg_text(raw);
    if (!cleaned.markers_found) progress("  warning: no START/END markers in ", w.work_id, "; kept whole text");
    text::write_file_atomic((fs::path(out_dir) / (w.work_id + ".txt")).string(), cleaned.text);
  }
  return kExitOk;
}

int cmd_extract(const std::string& catalog_path, const std::string& conllu_dir,
                const std::string& lexicon_path, const std::string& out_path,
                std::string token_counts_path, std::ostream& out, const Progress& progress) {
  auto works = corpus::load_catalog(catalog_path);
  const auto lex = lexicon_from(lexicon_path);
  if (!fs::is_directory(conllu_dir)) throw IoError("conllu directory '" + conllu_dir + "' not found");

  std::vector<WorkRecord*> ordered;
  for (auto& w : works) ordered.push_back(&w);
  std::sort(ordered.begin(), ordered.end(),
            [](const WorkRecord* a, const WorkRecord* b) { return a->work_id < b->work_id; });

  std::vector<ColorHit> hits;
  for (WorkRecord* w : ordered) {
    const auto path = (fs::path(conllu_dir) / (w->work_id + ".conllu")).string();
    const auto sentences = conllu::parse_file(path);
    w->token_count = conllu::count_words(sentences);
    auto work_hits = extract::extract_hits(w->work_id, sentences, lex);
    progress(w->work_id, ": ", sentences.size(), " sentences, ", w->token_count, " words, ",
             work_hits.size(), " hits");
    hits.insert(hits.end(), std::make_move_iterator(work_hits.begin()),
                std::make_move_iterator(work_hits.end()));
  }
  if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory '" + parent.string() + "'");
  }
  extract::write_hits(out_path, hits);
  if (token_counts_path.empty()) {
    token_counts_path = (fs::path(out_path).parent_path() / "token_counts.csv").string();
  }
  corpus::write_token_counts(token_counts_path, works);

  out << "color,occurrences\n";
  for (const auto& [color, n] : extract::count_color_occurrences(hits, lex)) out << color << ',' << n << '\n';
  return kExitOk;
}

int cmd_lexicon(bool dump, const std::string& lexicon_path, const std::vector<std::string>& lookups,
                std::ostream& out) {
  const auto lex = lexicon_from(lexicon_path);
  if (!dump && lookups.empty()) throw UsageError("lexicon: pass --dump or --lookup <lemma>");
  if (dump) out << lexicon::dump_lexicon(lex);
  for (const auto& w : lookups) {
    const auto c = lex.match(text::to_lower(w));
    out << w << '\t' << (c ? *c : "-") << '\n';
  }
  return kExitOk;
}

struct TrainFlags {
  std::string norms;
  std::string vec;
  std::string subwords;
  std::string out;
  NormHyper hyper;
  ColumnFlags columns;
};

std::unordered_set<std::string> vocabulary_of(const NormDataset& ds) {
  std::unordered_set<std::string> words;
  for (const auto& e : ds.entries()) words.insert(e.word);
  return words;
}

// ("DIM,n_test,r", note) for the model's held-out split; a split too small
// for a correlation gets an empty r and the reason as the note.
std::pair<std::string, std::string> eval_cells(const NormModel& model, const NormDataset& dataset,
                                               const EmbeddingSource& source) {
  const std::string dim(to_string(model.scale.dim));
  try {
    const auto eval = norms::evaluate(model, dataset, model.split.test, source);
    return {dim + ',' + std::to_string(eval.n_test) + ',' + text::format_sig6(eval.pearson_r), ""};
  } catch (const InsufficientDataError& e) {
    return {dim + ',' + std::to_string(model.split.test.size()) + ',', csv::escape(e.what())};
  }
}

int cmd_train(TrainFlags flags, std::uint64_t seed, std::ostream& out, const Progress& progress) {
  require_file(flags.norms, "norms file");
  require_file(flags.vec, "vector file");
  flags.hyper.seed = seed;
  const auto dataset = flags.columns.load(flags.norms);
  progress("norms: ", dataset.raw_rows, " rows, ", dataset.size(), " distinct words");

  const auto vocab = vocabulary_of(dataset);
  const auto table = embed::load_vec(flags.vec, &vocab);
  std::optional<SubwordModel> sw;
  if (!flags.subwords.empty()) sw = embed::load_subwords(flags.subwords);
  const EmbeddingSource source{&table, sw ? &*sw : nullptr};

  const auto embedded = norms::embed_dataset(dataset, source);
  progress("embedded ", embedded.words.size(), " words, dropped ", embedded.dropped, " without vectors");
  if (embedded.words.empty()) throw DataError("no norm word has an embedding");
  const auto projection = norms::fit_norm_projection(embedded, flags.hyper.input_dim);

  std::error_code ec;
  fs::create_directories(flags.out, ec);
  if (ec) throw IoError("cannot create directory '" + flags.out + "'");

  // Cache of the vectors actually used, so eval-norms works without --vec.
  EmbeddingTable cache(embedded.vectors.cols());
  for (std::size_t i = 0; i < embedded.words.size(); ++i) cache.add(embedded.words[i], embedded.vectors.row(i));
  text::write_file_atomic((fs::path(flags.out) / kNormVectorsFile).string(), embed::serialize_vec(cache));

  out << "dimension,n_test,pearson_r,best_epoch,note\n";
  for (NormDim d : kNormDims) {
    progress("training ", to_string(d), " ...");
    const auto model = norms::train(dataset, embedded, projection, d, flags.hyper);
    norms::save_model((fs::path(flags.out) / norms::model_filename(d)).string(), model);
    const auto [cells, note] = eval_cells(model, dataset, source);
    out << cells << ',' << model.best_epoch << ',' << note << '\n';
  }
  return kExitOk;
}

std::array<std::optional<NormModel>, 3> load_models(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("model directory '" + dir + "' not found");
  std::array<std::optional<NormModel>, 3> models;
  for (NormDim d : kNormDims) {
    const auto path = (fs::path(dir) / norms::model_filename(d)).string();
    require_file(path, "model file");
    models[static_cast<std::size_t>(d)] = norms::load_model(path);
  }
  return models;
}

struct EmbeddingFiles {
  std::string vec;
  std::string subwords;
};

struct LoadedEmbeddings {
  std::optional<EmbeddingTable> table;
  std::optional<SubwordModel> subwords;
  EmbeddingSource source() const {
    return {table ? &*table : nullptr, subwords ? &*subwords : nullptr};
  }
};

LoadedEmbeddings load_embeddings(const EmbeddingFiles& files,
                                 const std::unordered_set<std::string>* keep) {
  LoadedEmbeddings out;
  if (!files.vec.empty()) {
    require_file(files.vec, "vector file");
    out.table = embed::load_vec(files.vec, keep);
  }
  if (!files.subwords.empty()) {
    if (!out.table) throw UsageError("--subwords requires --vec");
    require_file(files.subwords, "subword file");
    out.subwords = embed::load_subwords(files.subwords);
  }
  return out;
}

int cmd_eval(const std::string& model_dir, const std::string& norms_path, const ColumnFlags& columns,
             EmbeddingFiles files, std::ostream& out) {
  const auto models = load_models(model_dir);
  require_file(norms_path, "norms file");
  auto dataset = columns.load(norms_path);
  if (files.vec.empty()) files.vec = (fs::path(model_dir) / kNormVectorsFile).string();
  const auto vocab = vocabulary_of(dataset);
  const auto emb = load_embeddings(files, &vocab);
  out << "dimension,n_test,pearson_r,note\n";
  for (NormDim d : kNormDims) {
    const auto& model = *models[static_cast<std::size_t>(d)];
    const auto [cells, note] = eval_cells(model, dataset, emb.source());
    out << cells << ',' << note << '\n';
  }
  return kExitOk;
}

struct AnalyzeFlags {
  std::string hits;
  std::string catalog;
  std::string model;
  std::string norms;
  std::string out;
  std::string token_counts;
  std::string lexicon;
  std::string authors;
  std::string color;
  std::size_t era_k = 5;
  EmbeddingFiles embeddings;
  ColumnFlags columns;
};

int cmd_analyze(AnalyzeFlags f, std::uint64_t seed, const Progress& progress) {
  const auto models = load_models(f.model);
  require_file(f.hits, "hits file");
  require_file(f.catalog, "catalog");
  require_file(f.norms, "norms file");
  auto catalog = corpus::load_catalog(f.catalog);
  if (f.token_counts.empty()) {
    f.token_counts = (fs::path(f.hits).parent_path() / "token_counts.csv").string();
  }
  if (fs::is_regular_file(f.token_counts)) {
    corpus::apply_token_counts(f.token_counts, catalog);
  } else {
    progress("warning: no token counts at '", f.token_counts, "'; frequencies will be skipped");
  }
  const auto hits = extract::read_hits(f.hits);
  const auto dataset = f.columns.load(f.norms);
  const auto lex = lexicon_from(f.lexicon);

  std::unordered_set<std::string> keep = vocabulary_of(dataset);
  for (const auto& h : hits) keep.insert(h.partner_lemma);
  const auto emb = load_embeddings(f.embeddings, &keep);

  AnalyzeConfig config;
  config.colors = lex.colors();
  config.source = emb.source();
  config.era_top_k = f.era_k;
  if (!f.authors.empty() || !f.color.empty()) {
    if (f.authors.empty() || f.color.empty()) throw UsageError("--authors and --color go together");
    if (!emb.table) throw UsageError("author projections need --vec");
    config.projection = ProjectionRequest{parse_authors(f.authors), text::to_lower(f.color)};
  }

  RunMeta& meta = config.meta;
  meta.tool_version = std::string("colorlit ") + kVersion;
  meta.seeds["seed"] = seed;
  for (NormDim d : kNormDims) {
    const auto& m = *models[static_cast<std::size_t>(d)];
    meta.seeds["train_seed_" + text::to_lower(to_string(d))] = m.train_seed;
    meta.input_digests["model_" + text::to_lower(to_string(d))] =
        digest::sha256_file((fs::path(f.model) / norms::model_filename(d)).string());
  }
  meta.input_digests["hits"] = digest::sha256_file(f.hits);
  meta.input_digests["catalog"] = digest::sha256_file(f.catalog);
  meta.input_digests["norms"] = digest::sha256_file(f.norms);
  if (fs::is_regular_file(f.token_counts)) meta.input_digests["token_counts"] = digest::sha256_file(f.token_counts);
  if (!f.lexicon.empty()) meta.input_digests["lexicon"] = digest::sha256_file(f.lexicon);
  if (!f.embeddings.vec.empty()) meta.input_digests["vec"] = digest::sha256_file(f.embeddings.vec);
  if (!f.embeddings.subwords.empty()) meta.input_digests["subwords"] = digest::sha256_file(f.embeddings.subwords);
  meta.settings["era_top_k"] = std::to_string(f.era_k);
  meta.settings["bounds"] = f.columns.bounds;
  if (config.projection) {
    meta.settings["projection_authors"] = config.projection->authors.first + "," + config.projection->authors.second;
    meta.settings["projection_color"] = config.projection->color;
  }

  const std::array<const NormModel*, 3> model_ptrs = {&*models[0], &*models[1], &*models[2]};
  const auto bundle = report::run_analyze(catalog, hits, model_ptrs, dataset, config);
  for (const auto& note : bundle.notes) progress("note: ", note);
  for (const auto& path : report::write_reports(bundle, f.out)) progress("wrote ", path);
  return kExitOk;
}

int cmd_compare(const std::string& hits_path, const std::string& catalog_path,
                const std::string& vec_path, const std::string& authors, const std::string& color,
                const std::string& out_dir, const Progress& progress) {
  require_file(hits_path, "hits file");
  const auto catalog = corpus::load_catalog(catalog_path);
  const auto hits = extract::read_hits(hits_path);
  std::unordered_set<std::string> keep;
  for (const auto& h : hits) keep.insert(h.partner_lemma);
  require_file(vec_path, "vector file");
  const auto table = embed::load_vec(vec_path, &keep);
  const auto rows = report::projection_rows(hits, catalog, table,
                                            {parse_authors(authors), text::to_lower(color)});
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "'");
  const auto path = (fs::path(out_dir) / "projections.csv").string();
  text::write_file_atomic(path, report::projections_csv(rows));
  progress("wrote ", path, " (", rows.size(), " rows)");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Color-term noun extraction and Glasgow Norm trend analysis", "colorlit"};
  app.set_version_flag("--version", std::string("colorlit ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Seed for data splits and training")->capture_default_str();
  app.add_flag("--quiet,-q", g.quiet, "Suppress progress output");
  const Progress progress(err, g.quiet);

  std::function<int()> action;

  // fetch
  std::string f_catalog, f_out, f_mirror;
  auto* fetch = app.add_subcommand("fetch", "Download and clean Gutenberg texts for a catalog");
  fetch->add_option("--catalog", f_catalog, "Catalog CSV")->required();
  fetch->add_option("--out", f_out, "Output directory for <work_id>.txt")->required();
  fetch->add_option("--mirror", f_mirror, "Base URL (default: $COLORLIT_MIRROR or gutenberg.org)");
  fetch->callback([&] { action = [&] { return cmd_fetch(f_catalog, f_out, f_mirror, progress); }; });

  // extract
  std::string e_catalog, e_dir, e_lexicon, e_out, e_counts;
  auto* ex = app.add_subcommand("extract", "Extract color/noun dependency pairs from CoNLL-U parses");
  ex->add_option("--catalog", e_catalog, "Catalog CSV")->required();
  ex->add_option("--conllu-dir", e_dir, "Directory of <work_id>.conllu files")->required();
  ex->add_option("--lexicon", e_lexicon, "Lexicon JSON override");
  ex->add_option("--out", e_out, "Hits file (JSON lines)")->required();
  ex->add_option("--token-counts", e_counts, "Word counts CSV (default: token_counts.csv next to --out)");
  ex->callback([&] {
    action = [&] { return cmd_extract(e_catalog, e_dir, e_lexicon, e_out, e_counts, out, progress); };
  });

  // lexicon
  bool l_dump = false;
  std::string l_lexicon;
  std::vector<std::string> l_lookup;
  auto* lx = app.add_subcommand("lexicon", "Show or query the color lexicon");
  lx->add_flag("--dump", l_dump, "Print the lexicon as JSON");
  lx->add_option("--lexicon", l_lexicon, "Lexicon JSON override");
  lx->add_option("--lookup", l_lookup, "Lemmas to map to canonical colors");
  lx->callback([&] { action = [&] { return cmd_lexicon(l_dump, l_lexicon, l_lookup, out); }; });

  // train-norms
  TrainFlags t;
  auto* tr = app.add_subcommand("train-norms", "Train IMAG/CNC/VAL regressors");
  tr->add_option("--norms", t.norms, "Glasgow Norms file")->required();
  tr->add_option("--vec", t.vec, "Word vectors (text format)")->required();
  tr->add_option("--subwords", t.subwords, "Subword bucket export");
  tr->add_option("--dim", t.hyper.input_dim, "Projected input width")->capture_default_str();
  tr->add_option("--hidden", t.hyper.train.hidden_dim, "Hidden units")->capture_default_str();
  tr->add_option("--lr", t.hyper.train.learning_rate, "Learning rate")->capture_default_str();
  tr->add_option("--batch", t.hyper.train.batch_size, "Mini-batch size")->capture_default_str();
  tr->add_option("--epochs", t.hyper.train.max_epochs, "Maximum epochs")->capture_default_str();
  tr->add_option("--patience", t.hyper.train.patience, "Early-stopping patience")->capture_default_str();
  tr->add_option("--out", t.out, "Model directory")->required();
  t.columns.add_to(tr);
  tr->callback([&] { action = [&] { return cmd_train(t, g.seed, out, progress); }; });

  // eval-norms
  std::string v_model, v_norms;
  EmbeddingFiles v_emb;
  ColumnFlags v_cols;
  auto* ev = app.add_subcommand("eval-norms", "Report held-out Pearson r per dimension");
  ev->add_option("--model", v_model, "Model directory")->required();
  ev->add_option("--norms", v_norms, "Glasgow Norms file")->required();
  ev->add_option("--vec", v_emb.vec, "Word vectors (default: the model's cached vectors)");
  ev->add_option("--subwords", v_emb.subwords, "Subword bucket export");
  v_cols.add_to(ev);
  ev->callback([&] { action = [&] { return cmd_eval(v_model, v_norms, v_cols, v_emb, out); }; });

  // analyze
  AnalyzeFlags a;
  auto* an = app.add_subcommand("analyze", "Compute trend, era and frequency tables");
  an->add_option("--hits", a.hits, "Hits file")->required();
  an->add_option("--catalog", a.catalog, "Catalog CSV")->required();
  an->add_option("--model", a.model, "Model directory")->required();
  an->add_option("--norms", a.norms, "Glasgow Norms file")->required();
  an->add_option("--out", a.out, "Report directory")->required();
  an->add_option("--token-counts", a.token_counts, "Word counts CSV (default: next to --hits)");
  an->add_option("--lexicon", a.lexicon, "Lexicon JSON override (defines the color list)");
  an->add_option("--vec", a.embeddings.vec, "Word vectors for OOV predictions and projections");
  an->add_option("--subwords", a.embeddings.subwords, "Subword bucket export");
  an->add_option("--authors", a.authors, "Two authors \"A,B\" for a projection table");
  an->add_option("--color", a.color, "Color for the projection table");
  an->add_option("--era-k", a.era_k, "Nouns per era")->capture_default_str()->check(CLI::PositiveNumber);
  a.columns.add_to(an);
  an->callback([&] { action = [&] { return cmd_analyze(a, g.seed, progress); }; });

  // compare-authors
  std::string c_hits, c_catalog, c_vec, c_authors, c_color, c_out;
  auto* cmp = app.add_subcommand("compare-authors", "2-d embedding projection of two authors' nouns");
  cmp->add_option("--hits", c_hits, "Hits file")->required();
  cmp->add_option("--catalog", c_catalog, "Catalog CSV")->required();
  cmp->add_option("--vec", c_vec, "Word vectors")->required();
  cmp->add_option("--authors", c_authors, "\"A,B\"")->required();
  cmp->add_option("--color", c_color, "Color term")->required();
  cmp->add_option("--out", c_out, "Output directory")->required();
  cmp->callback([&] {
    action = [&] { return cmd_compare(c_hits, c_catalog, c_vec, c_authors, c_color, c_out, progress); };
  });

  // CLI11 reports a stray word as "a subcommand is required"; name it instead.
  for (std::size_t i = 1; i < argv.size(); ++i) {
    const auto& arg = argv[i];
    if (arg == "--seed") {
      ++i;
      continue;
    }
    if (arg.empty() || arg[0] == '-') continue;
    if (!app.get_subcommand_no_throw(arg)) {
      err << "error: unknown subcommand '" << arg << "'\n\n" << app.help();
      return kExitUsage;
    }
    break;
  }

  std::vector<const char*> cargv;
  for (const auto& s : argv) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace colorlit::cli
