#include "colorlit/norms.hpp"

#include <algorithm>
#include <charconv>

#include <nlohmann/json.hpp>

#include "colorlit/csv.hpp"
#include "colorlit/error.hpp"
#include "colorlit/stats.hpp"
#include "colorlit/text.hpp"

namespace colorlit {

std::string_view to_string(NormDim d) {
  switch (d) {
    case NormDim::Imag: return "IMAG";
    case NormDim::Cnc: return "CNC";
    case NormDim::Val: return "VAL";
  }
  return "?";
}

NormDim parse_norm_dim(std::string_view name) {
  const auto lower = text::to_lower(name);
  if (lower == "imag") return NormDim::Imag;
  if (lower == "cnc") return NormDim::Cnc;
  if (lower == "val") return NormDim::Val;
  throw DataError("unknown norm dimension '" + std::string(name) + "'");
}

NormScale default_scale(NormDim d) {
  return d == NormDim::Val ? NormScale{d, 1.0, 9.0} : NormScale{d, 1.0, 7.0};
}

std::string_view to_string(ValueSource s) { return s == ValueSource::Lookup ? "lookup" : "model"; }

bool NormDataset::add(NormEntry entry) {
  auto [it, inserted] = index_.emplace(entry.word, entries_.size());
  if (!inserted) return false;
  entries_.push_back(std::move(entry));
  return true;
}

void NormDataset::set_scales(const std::array<NormScale, 3>& scales) {
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(scales[d].min < scales[d].max)) {
      throw DataError("norm scale for " + std::string(to_string(scales[d].dim)) + " is empty");
    }
    for (const auto& e : entries_) {
      if (e.raw[d] < scales[d].min || e.raw[d] > scales[d].max) {
        throw DataError("rating of '" + e.word + "' outside the new " +
                        std::string(to_string(scales[d].dim)) + " bounds");
      }
    }
  }
  scales_ = scales;
}

std::array<NormScale, 3> NormDataset::observed_scales() const {
  std::array<NormScale, 3> out = scales_;
  if (entries_.empty()) return out;
  for (std::size_t d = 0; d < 3; ++d) {
    out[d].min = out[d].max = entries_.front().raw[d];
    for (const auto& e : entries_) {
      out[d].min = std::min(out[d].min, e.raw[d]);
      out[d].max = std::max(out[d].max, e.raw[d]);
    }
  }
  return out;
}

const NormEntry* NormDataset::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::optional<double> NormDataset::normalized(std::string_view word, NormDim d) const {
  const auto* e = find(word);
  if (!e) return std::nullopt;
  return norms::normalize(e->raw[static_cast<std::size_t>(d)], scale(d));
}

double NormModel::predict(std::span<const double> embedding) const {
  return net.forward(embed::project(embedding, projection));
}

namespace norms {

namespace {

std::size_t resolve_column(const std::vector<std::string>& header, const std::string& name,
                           std::string_view source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (text::trim(header[i]) == name) return i;
  }
  const auto lower = text::to_lower(name);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (text::to_lower(text::trim(header[i])) == lower) return i;
  }
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
  if (!name.empty() && ec == std::errc{} && ptr == name.data() + name.size() && idx < header.size()) {
    return idx;
  }
  throw DataError(std::string(source) + ": missing column '" + name + "'");
}

std::string clean_word(std::string_view raw) {
  auto w = text::trim(raw);
  if (w.ends_with(')')) {
    auto open = w.find('(');
    if (open != std::string_view::npos && open > 0) w = text::trim(w.substr(0, open));
  }
  return text::to_lower(w);
}

}  // namespace

NormDataset parse_glasgow(std::string_view data, const NormColumns& columns,
                          const std::array<NormScale, 3>& scales, std::string_view source) {
  for (const auto& s : scales) {
    if (!(s.min < s.max)) throw DataError("norm scale for " + std::string(to_string(s.dim)) + " is empty");
  }
  if (data.starts_with("\xEF\xBB\xBF")) data.remove_prefix(3);
  char delim = columns.delimiter;
  if (delim == 0) {
    const auto first_line = data.substr(0, data.find('\n'));
    delim = first_line.find('\t') != std::string_view::npos ? '\t' : ',';
  }
  const auto records = csv::read_all(data, delim);
  if (records.empty()) throw DataError(std::string(source) + ": no header row");
  const auto& header = records.front().fields;
  const std::size_t word_col = resolve_column(header, columns.word, source);
  const std::array<std::size_t, 3> dim_cols = {resolve_column(header, columns.imag, source),
                                               resolve_column(header, columns.cnc, source),
                                               resolve_column(header, columns.val, source)};

  NormDataset ds(scales);
  for (std::size_t r = std::max<std::size_t>(columns.header_rows, 1); r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() == 1 && text::trim(rec.fields[0]).empty()) continue;
    auto where = [&] { return std::string(source) + ":" + std::to_string(rec.line) + ": "; };
    const std::size_t need = std::max({word_col, dim_cols[0], dim_cols[1], dim_cols[2]}) + 1;
    if (rec.fields.size() < need) throw DataError(where() + "row has too few columns");
    NormEntry entry;
    entry.word = clean_word(rec.fields[word_col]);
    if (entry.word.empty()) throw DataError(where() + "empty word");
    for (std::size_t d = 0; d < 3; ++d) {
      const auto cell = text::trim(rec.fields[dim_cols[d]]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError(where() + "non-numeric rating '" + std::string(cell) + "'");
      }
      if (v < scales[d].min || v > scales[d].max) {
        throw DataError(where() + std::string(to_string(scales[d].dim)) + " rating " +
                        text::format_sig6(v) + " outside [" + text::format_sig6(scales[d].min) +
                        ", " + text::format_sig6(scales[d].max) + "]");
      }
      entry.raw[d] = v;
    }
    ++ds.raw_rows;
    ds.add(std::move(entry));
  }
  return ds;
}

NormDataset load_glasgow(const std::string& path, const NormColumns& columns,
                         const std::array<NormScale, 3>& scales) {
  return parse_glasgow(text::read_file(path), columns, scales, path);
}

double normalize(double raw, const NormScale& scale) {
  if (!(scale.min < scale.max)) throw DataError("normalize: empty scale");
  if (raw < scale.min || raw > scale.max) {
    throw DataError("normalize: rating " + text::format_sig6(raw) + " outside [" +
                    text::format_sig6(scale.min) + ", " + text::format_sig6(scale.max) + "]");
  }
  return (raw - scale.min) / (scale.max - scale.min);
}

Split split_811(std::vector<std::string> words, std::uint64_t seed) {
  const std::size_t n = words.size();
  if (n < 10) throw DataError("split_811 needs at least 10 words, got " + std::to_string(n));
  Rng rng(seed);
  rng.shuffle(words);
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_dev = n / 10;
  Split s;
  s.train.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.dev.assign(words.begin() + static_cast<std::ptrdiff_t>(n_train),
               words.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  s.test.assign(words.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), words.end());
  return s;
}

EmbeddedWords embed_dataset(const NormDataset& dataset, const EmbeddingSource& source) {
  EmbeddedWords out;
  std::vector<std::vector<double>> rows;
  for (const auto& e : dataset.entries()) {
    if (auto v = source.embed(e.word)) {
      out.words.push_back(e.word);
      rows.push_back(std::move(*v));
    } else {
      ++out.dropped;
    }
  }
  out.vectors = Matrix(rows.size(), source.dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), out.vectors.row(r).begin());
  }
  return out;
}

Projection fit_norm_projection(const EmbeddedWords& embedded, std::size_t k) {
  return embed::fit_pca(embedded.vectors, k);
}

std::uint64_t dimension_seed(std::uint64_t seed, NormDim d) {
  return seed + 1 + static_cast<std::uint64_t>(d);
}

NormModel train(const NormDataset& dataset, const EmbeddedWords& embedded,
                const Projection& projection, NormDim d, const NormHyper& hyper) {
  if (embedded.words.empty()) throw DataError("no embeddable words to train on");
  NormModel model;
  model.scale = dataset.scale(d);
  model.projection = projection;
  model.hyper = hyper;
  model.train_seed = dimension_seed(hyper.seed, d);
  model.dropped_words = embedded.dropped;
  model.split = split_811(embedded.words, hyper.seed);

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < embedded.words.size(); ++i) row_of.emplace(embedded.words[i], i);
  auto examples = [&](const std::vector<std::string>& words) {
    std::vector<Example> out;
    out.reserve(words.size());
    for (const auto& w : words) {
      out.push_back({embed::project(embedded.vectors.row(row_of.at(w)), projection),
                     *dataset.normalized(w, d)});
    }
    return out;
  };
  const auto train_set = examples(model.split.train);
  const auto dev_set = examples(model.split.dev);
  auto outcome = train_mlp(train_set, dev_set, hyper.train, model.train_seed);
  model.net = std::move(outcome.net);
  model.best_epoch = outcome.best_epoch;
  model.history = std::move(outcome.history);
  return model;
}

NormModel train(const NormDataset& dataset, const EmbeddingSource& source, NormDim d,
                const NormHyper& hyper) {
  const auto embedded = embed_dataset(dataset, source);
  if (embedded.words.empty()) throw DataError("no embeddable words to train on");
  const auto projection = fit_norm_projection(embedded, hyper.input_dim);
  return train(dataset, embedded, projection, d, hyper);
}

EvalResult evaluate(const NormModel& model, const NormDataset& dataset,
                    const std::vector<std::string>& words, const EmbeddingSource& source) {
  if (words.empty()) throw InsufficientDataError("evaluation split is empty");
  std::vector<double> pred, truth;
  for (const auto& w : words) {
    auto t = dataset.normalized(w, model.scale.dim);
    if (!t) continue;
    auto v = source.embed(w);
    if (!v) continue;
    pred.push_back(model.predict(*v));
    truth.push_back(*t);
  }
  if (pred.size() < 3) {
    throw InsufficientDataError("evaluation needs at least 3 evaluable words, got " +
                                std::to_string(pred.size()));
  }
  return {model.scale.dim, pred.size(), stats::pearson(pred, truth)};
}

std::optional<NormValue> predict_value(std::string_view word, NormDim d, const NormDataset& dataset,
                                       const NormModel& model, const EmbeddingSource& source) {
  if (auto v = dataset.normalized(word, d)) return NormValue{*v, ValueSource::Lookup};
  auto vec = source.embed(word);
  if (!vec) return std::nullopt;
  return NormValue{model.predict(*vec), ValueSource::Model};
}

// ---- persistence ----------------------------------------------------------

namespace {

constexpr std::string_view kFormat = "colorlit-norm-model";
constexpr int kVersion = 1;

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw DataError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

std::string serialize_model(const NormModel& m) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["dimension"] = to_string(m.scale.dim);
  j["scale"] = {{"min", m.scale.min}, {"max", m.scale.max}};
  j["hyper"] = {{"input_dim", m.hyper.input_dim},
                {"hidden_dim", m.hyper.train.hidden_dim},
                {"learning_rate", m.hyper.train.learning_rate},
                {"batch_size", m.hyper.train.batch_size},
                {"max_epochs", m.hyper.train.max_epochs},
                {"patience", m.hyper.train.patience},
                {"seed", m.hyper.seed}};
  j["train_seed"] = m.train_seed;
  j["best_epoch"] = m.best_epoch;
  j["dropped_words"] = m.dropped_words;
  j["projection"] = {{"mean", m.projection.mean},
                     {"basis", matrix_to_json(m.projection.basis)},
                     {"eigenvalues", m.projection.eigenvalues}};
  json hidden = json::array();
  for (std::size_t h = 0; h < m.net.hidden_dim(); ++h) {
    auto begin = m.net.hidden_weights().begin() + static_cast<std::ptrdiff_t>(h * m.net.input_dim());
    hidden.push_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(m.net.input_dim())));
  }
  j["network"] = {{"input_dim", m.net.input_dim()},
                  {"hidden_dim", m.net.hidden_dim()},
                  {"hidden_weights", hidden},
                  {"hidden_bias", m.net.hidden_bias()},
                  {"output_weights", m.net.output_weights()},
                  {"output_bias", m.net.output_bias()}};
  j["split"] = {{"train", m.split.train}, {"dev", m.split.dev}, {"test", m.split.test}};
  json history = json::array();
  for (const auto& e : m.history) {
    history.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"dev_loss", e.dev_loss},
                       {"dev_r", e.dev_r ? json(*e.dev_r) : json(nullptr)},
                       {"checkpoint", e.checkpoint}});
  }
  j["history"] = history;
  return j.dump(1) + "\n";
}

NormModel parse_model(std::string_view json_text, std::string_view source) {
  const std::string where = std::string(source) + ": ";
  try {
    const auto j = json::parse(json_text);
    if (j.at("format").get<std::string>() != kFormat) throw DataError(where + "not a norm model file");
    if (j.at("version").get<int>() != kVersion) {
      throw DataError(where + "unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    NormModel m;
    m.scale.dim = parse_norm_dim(j.at("dimension").get<std::string>());
    m.scale.min = j.at("scale").at("min");
    m.scale.max = j.at("scale").at("max");
    const auto& h = j.at("hyper");
    m.hyper.input_dim = h.at("input_dim");
    m.hyper.train.hidden_dim = h.at("hidden_dim");
    m.hyper.train.learning_rate = h.at("learning_rate");
    m.hyper.train.batch_size = h.at("batch_size");
    m.hyper.train.max_epochs = h.at("max_epochs");
    m.hyper.train.patience = h.at("patience");
    m.hyper.seed = h.at("seed");
    m.train_seed = j.at("train_seed");
    m.best_epoch = j.at("best_epoch");
    m.dropped_words = j.at("dropped_words");
    const auto& p = j.at("projection");
    m.projection.mean = p.at("mean").get<std::vector<double>>();
    m.projection.basis = matrix_from_json(p.at("basis"));
    m.projection.eigenvalues = p.at("eigenvalues").get<std::vector<double>>();
    if (m.projection.basis.rows() != m.projection.mean.size()) {
      throw DataError(where + "projection mean and basis disagree on width");
    }
    const auto& n = j.at("network");
    const std::size_t in = n.at("input_dim"), hid = n.at("hidden_dim");
    if (in != m.projection.k()) throw DataError(where + "network input width != projection width");
    m.net = Mlp(in, hid);
    const auto hw = matrix_from_json(n.at("hidden_weights"));
    if (hw.rows() != hid || hw.cols() != in) throw DataError(where + "hidden weight shape mismatch");
    m.net.hidden_weights() = hw.data();
    m.net.hidden_bias() = n.at("hidden_bias").get<std::vector<double>>();
    m.net.output_weights() = n.at("output_weights").get<std::vector<double>>();
    m.net.output_bias() = n.at("output_bias");
    if (m.net.hidden_bias().size() != hid || m.net.output_weights().size() != hid) {
      throw DataError(where + "bias/output shape mismatch");
    }
    const auto& s = j.at("split");
    m.split.train = s.at("train").get<std::vector<std::string>>();
    m.split.dev = s.at("dev").get<std::vector<std::string>>();
    m.split.test = s.at("test").get<std::vector<std::string>>();
    for (const auto& e : j.at("history")) {
      EpochRecord r;
      r.epoch = e.at("epoch");
      r.train_loss = e.at("train_loss");
      r.dev_loss = e.at("dev_loss");
      if (!e.at("dev_r").is_null()) r.dev_r = e.at("dev_r").get<double>();
      r.checkpoint = e.at("checkpoint");
      m.history.push_back(r);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + "malformed model file: " + e.what());
  }
}

void save_model(const std::string& path, const NormModel& model) {
  text::write_file_atomic(path, serialize_model(model));
}

NormModel load_model(const std::string& path) { return parse_model(text::read_file(path), path); }

std::string model_filename(NormDim d) { return text::to_lower(to_string(d)) + ".json"; }

}  // namespace norms
}  // namespace colorlit
