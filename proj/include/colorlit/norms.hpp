#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "colorlit/embed.hpp"
#include "colorlit/mlp.hpp"

namespace colorlit {

enum class NormDim { Imag = 0, Cnc = 1, Val = 2 };

inline constexpr NormDim kNormDims[] = {NormDim::Imag, NormDim::Cnc, NormDim::Val};

std::string_view to_string(NormDim d);
NormDim parse_norm_dim(std::string_view name);

/// Rating-scale bounds used for normalization.
struct NormScale {
  NormDim dim = NormDim::Imag;
  double min = 1.0;
  double max = 7.0;
};

/// [1,7] for IMAG and CNC, [1,9] for VAL.
NormScale default_scale(NormDim d);

struct NormEntry {
  std::string word;
  std::array<double, 3> raw{};  // indexed by NormDim
};

class NormDataset {
 public:
  NormDataset() = default;
  explicit NormDataset(std::array<NormScale, 3> scales) : scales_(scales) {}

  /// Returns false (and keeps the earlier rating) for a repeated word.
  bool add(NormEntry entry);

  const std::vector<NormEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const NormEntry* find(std::string_view word) const;
  const NormScale& scale(NormDim d) const { return scales_[static_cast<std::size_t>(d)]; }
  /// Throws DataError if a stored rating falls outside the new bounds.
  void set_scales(const std::array<NormScale, 3>& scales);
  /// Per-dimension min/max of the stored ratings.
  std::array<NormScale, 3> observed_scales() const;

  std::optional<double> normalized(std::string_view word, NormDim d) const;

  /// Data rows read from the source file, before de-duplication.
  std::size_t raw_rows = 0;

 private:
  std::array<NormScale, 3> scales_{default_scale(NormDim::Imag), default_scale(NormDim::Cnc),
                                   default_scale(NormDim::Val)};
  std::vector<NormEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Header names of the columns to read. A name made only of digits that is
/// not a header name is taken as a 0-based column index.
struct NormColumns {
  std::string word = "word";
  std::string imag = "imag";
  std::string cnc = "cnc";
  std::string val = "val";
  std::size_t header_rows = 1;  // extra rows after the first are skipped
  char delimiter = 0;           // 0 = tab if the header contains one, else comma
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

struct NormHyper {
  std::size_t input_dim = 100;  // PCA target width
  TrainConfig train;
  std::uint64_t seed = 42;
};

struct NormModel {
  NormScale scale;
  Projection projection;
  Mlp net;
  NormHyper hyper;
  std::uint64_t train_seed = 0;
  int best_epoch = 0;
  std::size_t dropped_words = 0;
  Split split;
  std::vector<EpochRecord> history;

  /// Sigmoid output for a raw (unprojected) embedding.
  double predict(std::span<const double> embedding) const;
};

struct EvalResult {
  NormDim dim = NormDim::Imag;
  std::size_t n_test = 0;
  double pearson_r = 0.0;
};

enum class ValueSource { Lookup, Model };
std::string_view to_string(ValueSource s);

struct NormValue {
  double value = 0.0;
  ValueSource source = ValueSource::Lookup;
};

namespace norms {

/// Words are lowercased; a trailing parenthetical sense tag
/// ("bar (pub)") is stripped and the first occurrence of a word wins.
/// Throws DataError on a missing column, a non-numeric cell, or a rating
/// outside its scale bounds.
NormDataset load_glasgow(const std::string& path, const NormColumns& columns,
                         const std::array<NormScale, 3>& scales = {default_scale(NormDim::Imag),
                                                                    default_scale(NormDim::Cnc),
                                                                    default_scale(NormDim::Val)});
NormDataset parse_glasgow(std::string_view data, const NormColumns& columns,
                          const std::array<NormScale, 3>& scales, std::string_view source = "<norms>");

/// (raw - min) / (max - min). Throws DataError when raw is outside the scale.
double normalize(double raw, const NormScale& scale);

/// Seeded shuffle, then floor(0.8n) / floor(0.1n) / remainder. Throws
/// DataError for fewer than 10 words.
Split split_811(std::vector<std::string> words, std::uint64_t seed);

/// Dataset words that have an embedding, in dataset order, with vectors.
struct EmbeddedWords {
  std::vector<std::string> words;
  Matrix vectors;
  std::size_t dropped = 0;
};
EmbeddedWords embed_dataset(const NormDataset& dataset, const EmbeddingSource& source);

/// PCA over the embedded dataset vocabulary, shared by all three models.
Projection fit_norm_projection(const EmbeddedWords& embedded, std::size_t k);

/// Training RNG seed for one dimension; the split always uses hyper.seed.
std::uint64_t dimension_seed(std::uint64_t seed, NormDim d);

NormModel train(const NormDataset& dataset, const EmbeddedWords& embedded,
                const Projection& projection, NormDim d, const NormHyper& hyper);
NormModel train(const NormDataset& dataset, const EmbeddingSource& source, NormDim d,
                const NormHyper& hyper);

/// Pearson between predictions and normalized ratings over `words`;
/// words without a rating or an embedding are skipped. Throws
/// InsufficientDataError with fewer than 3 evaluable pairs.
EvalResult evaluate(const NormModel& model, const NormDataset& dataset,
                    const std::vector<std::string>& words, const EmbeddingSource& source);

/// Normalized rating for dataset words, model prediction otherwise;
/// nullopt when the word is neither rated nor embeddable.
std::optional<NormValue> predict_value(std::string_view word, NormDim d, const NormDataset& dataset,
                                       const NormModel& model, const EmbeddingSource& source);

/// Versioned JSON model file.
std::string serialize_model(const NormModel& model);
NormModel parse_model(std::string_view json_text, std::string_view source = "<model>");
void save_model(const std::string& path, const NormModel& model);
NormModel load_model(const std::string& path);

/// `<dir>/<imag|cnc|val>.json`
std::string model_filename(NormDim d);

}  // namespace norms
}  // namespace colorlit
